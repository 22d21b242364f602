use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cbit_recovery as core;
use cbit_recovery::{Branch, Pole};

fn to_py(err: core::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn parse_pole(pole: &str) -> PyResult<Pole> {
    match pole {
        "north" | "+" | "+1" => Ok(Pole::North),
        "south" | "-" | "-1" => Ok(Pole::South),
        other => Err(PyValueError::new_err(format!(
            "pole must be 'north' or 'south', got {other:?}"
        ))),
    }
}

#[pyclass(name = "BlochVector", module = "cbit_recovery_py", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyBlochVector {
    inner: core::BlochVector,
}

#[pymethods]
impl PyBlochVector {
    #[new]
    fn new(x: f64, y: f64, z: f64) -> Self {
        Self { inner: core::BlochVector::new(x, y, z) }
    }

    #[staticmethod]
    fn from_polar(theta: f64, phi: f64) -> Self {
        Self { inner: core::BlochVector::from_polar(theta, phi) }
    }

    #[getter]
    fn x(&self) -> f64 {
        self.inner.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.inner.y
    }

    #[getter]
    fn z(&self) -> f64 {
        self.inner.z
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn to_tuple(&self) -> (f64, f64, f64) {
        (self.inner.x, self.inner.y, self.inner.z)
    }

    /// Density matrix entries as nested lists of complex numbers.
    fn to_density(&self) -> PyResult<Vec<Vec<num_complex_pair::Pair>>> {
        let rho = core::bloch_to_density(self.inner).map_err(to_py)?;
        Ok(rho
            .entries()
            .iter()
            .map(|row| row.iter().map(|z| num_complex_pair::Pair(z.re, z.im)).collect())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("BlochVector({}, {}, {})", self.inner.x, self.inner.y, self.inner.z)
    }
}

mod num_complex_pair {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    /// `(re, im)` handed to Python as a built-in `complex`.
    pub struct Pair(pub f64, pub f64);

    impl<'py> IntoPyObject<'py> for Pair {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0, self.1))
        }
    }
}

#[pyclass(name = "AffineQubitChannel", module = "cbit_recovery_py", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyChannel {
    inner: core::AffineQubitChannel,
}

#[pymethods]
impl PyChannel {
    #[new]
    fn new(matrix: [[f64; 3]; 3], shift: [f64; 3]) -> Self {
        Self { inner: core::AffineQubitChannel::new(matrix, shift) }
    }

    #[staticmethod]
    fn identity() -> Self {
        Self { inner: core::AffineQubitChannel::identity() }
    }

    #[staticmethod]
    fn depolarizing(alpha: f64) -> PyResult<Self> {
        core::depolarizing_channel(alpha).map(|inner| Self { inner }).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (k, pole = "north"))]
    fn amplitude_damping(k: f64, pole: &str) -> PyResult<Self> {
        core::amplitude_damping_channel(k, parse_pole(pole)?)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn matrix(&self) -> [[f64; 3]; 3] {
        self.inner.matrix
    }

    #[getter]
    fn shift(&self) -> [f64; 3] {
        self.inner.shift
    }

    fn apply(&self, r: PyBlochVector) -> PyResult<PyBlochVector> {
        core::apply(&self.inner, r.inner)
            .map(|inner| PyBlochVector { inner })
            .map_err(to_py)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    fn after(&self, first: PyChannel) -> Self {
        Self { inner: core::compose(&self.inner, &first.inner) }
    }

    fn choi_eigenvalues(&self) -> [f64; 4] {
        core::choi_eigenvalues(&self.inner)
    }

    #[pyo3(signature = (eps_psd = core::PSD_TOLERANCE))]
    fn is_completely_positive(&self, eps_psd: f64) -> bool {
        core::is_completely_positive(&self.inner, eps_psd)
    }

    fn max_output_norm(&self) -> f64 {
        core::max_output_norm(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("AffineQubitChannel(matrix={:?}, shift={:?})", self.inner.matrix, self.inner.shift)
    }
}

#[pyclass(name = "SchemeConfig", module = "cbit_recovery_py", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySchemeConfig {
    inner: core::SchemeConfig,
}

#[pymethods]
impl PySchemeConfig {
    #[new]
    fn new(alpha: f64, beta: f64, k: f64, k_prime: f64) -> PyResult<Self> {
        core::SchemeConfig::new(alpha, beta, k, k_prime)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k
    }

    #[getter]
    fn k_prime(&self) -> f64 {
        self.inner.k_prime
    }

    fn closed_form(&self) -> f64 {
        core::average_fidelity_closed_form(&self.inner)
    }

    #[pyo3(signature = (abs_tol = 1e-14))]
    fn quadrature(&self, abs_tol: f64) -> f64 {
        core::average_fidelity_quadrature(&self.inner, abs_tol)
    }

    /// Returns `(estimate, std_error)`.
    fn monte_carlo(&self, py: Python<'_>, n_samples: usize, seed: u64) -> PyResult<(f64, f64)> {
        let scheme = self.inner.to_general_scheme().map_err(to_py)?;
        let est = py
            .detach(|| core::average_fidelity_monte_carlo(&scheme, n_samples, seed))
            .map_err(to_py)?;
        Ok((est.estimate, est.std_error))
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!("SchemeConfig(alpha={}, beta={}, k={}, k_prime={})", c.alpha, c.beta, c.k, c.k_prime)
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Boundary => "boundary_beta",
        Branch::Interior => "interior_beta",
    }
}

#[pyclass(name = "OptimizationResult", module = "cbit_recovery_py", frozen, get_all)]
struct PyOptimizationResult {
    alpha: f64,
    beta_opt: f64,
    k_opt: f64,
    k_prime_opt: f64,
    f_bar: f64,
    branch: &'static str,
}

#[pymethods]
impl PyOptimizationResult {
    fn __repr__(&self) -> String {
        format!(
            "OptimizationResult(alpha={}, beta_opt={}, k_opt={}, k_prime_opt={}, f_bar={}, branch={:?})",
            self.alpha, self.beta_opt, self.k_opt, self.k_prime_opt, self.f_bar, self.branch
        )
    }
}

#[pyfunction]
#[pyo3(signature = (alpha, beta_grid_size = core::DEFAULT_BETA_GRID))]
fn optimize_at_alpha(alpha: f64, beta_grid_size: usize) -> PyResult<PyOptimizationResult> {
    let r = core::optimize_at_alpha(alpha, beta_grid_size).map_err(to_py)?;
    Ok(PyOptimizationResult {
        alpha: r.alpha,
        beta_opt: r.beta_opt,
        k_opt: r.k_opt,
        k_prime_opt: r.k_prime_opt,
        f_bar: r.f_bar,
        branch: branch_name(r.branch),
    })
}

/// Rows as dicts keyed like the CSV columns.
#[pyfunction]
#[pyo3(signature = (alpha_min, alpha_max, steps, beta_grid_size = core::DEFAULT_BETA_GRID))]
fn sweep_alpha(
    py: Python<'_>,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    beta_grid_size: usize,
) -> PyResult<Vec<std::collections::BTreeMap<&'static str, f64>>> {
    let rows = py
        .detach(|| core::sweep_alpha(alpha_min, alpha_max, steps, beta_grid_size))
        .map_err(to_py)?;
    Ok(rows
        .iter()
        .map(|r| {
            [
                ("alpha", r.alpha),
                ("beta_opt", r.beta_opt),
                ("k_opt", r.k_opt),
                ("k_prime_opt", r.k_prime_opt),
                ("f_bar", r.f_bar),
                ("f_noop", r.f_noop),
                ("f_classical", r.f_classical),
            ]
            .into_iter()
            .collect()
        })
        .collect())
}

/// Returns `(alpha_kink, beta_jump_to, bracket_width)`.
#[pyfunction]
#[pyo3(signature = (alpha_min = 0.0, alpha_max = 1.0, steps = 101, beta_grid_size = core::DEFAULT_BETA_GRID))]
fn locate_kink(
    py: Python<'_>,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    beta_grid_size: usize,
) -> PyResult<(f64, f64, f64)> {
    let kink = py
        .detach(|| {
            core::sweep_alpha(alpha_min, alpha_max, steps, beta_grid_size)
                .and_then(|rows| core::locate_kink(&rows, beta_grid_size))
        })
        .map_err(to_py)?;
    Ok((kink.alpha_kink, kink.beta_jump_to, kink.bracket_width))
}

#[pyfunction]
fn optimal_k_cap(alpha: f64, p: f64, q: f64, r: f64) -> PyResult<f64> {
    core::optimal_k_cap(alpha, p, q, r).map_err(to_py)
}

#[pyfunction]
fn analytic_low_alpha_fidelity(alpha: f64) -> PyResult<f64> {
    core::analytic_low_alpha_fidelity(alpha).map_err(to_py)
}

#[pyfunction]
fn no_op_fidelity(alpha: f64) -> PyResult<f64> {
    core::no_op_fidelity(alpha).map_err(to_py)
}

#[pyfunction]
fn classical_only_fidelity() -> f64 {
    core::classical_only_fidelity()
}

#[pyfunction]
fn gisin_reference_fidelity() -> f64 {
    core::gisin_reference_fidelity()
}

#[pyfunction]
fn fidelity_pure_vs_mixed(n: PyBlochVector, r: PyBlochVector) -> PyResult<f64> {
    core::fidelity_pure_vs_mixed(n.inner, r.inner).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (gamma, delta, k, pole = "north"))]
fn check_necessary_conditions(gamma: f64, delta: f64, k: f64, pole: &str) -> PyResult<bool> {
    let params = core::DiagonalChannelParams { gamma, delta, k, pole: parse_pole(pole)? };
    Ok(core::check_necessary_conditions(&params))
}

#[pymodule]
fn cbit_recovery_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBlochVector>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PySchemeConfig>()?;
    m.add_class::<PyOptimizationResult>()?;

    m.add_function(wrap_pyfunction!(optimize_at_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(locate_kink, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_k_cap, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_low_alpha_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(no_op_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(classical_only_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(gisin_reference_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_pure_vs_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(check_necessary_conditions, m)?)?;
    Ok(())
}
