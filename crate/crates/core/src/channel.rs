//! Qubit channels in Bloch form, `r ↦ A·r + b`.
//!
//! Trace preservation and Hermiticity are built into the representation.
//! Complete positivity is not, and is certified through the Choi matrix.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bloch::{pauli, pauli_components, BlochVector, Matrix2, BALL_TOLERANCE};
use crate::eigen::hermitian_eigenvalues_4;
use crate::error::{check_range, Result};
use crate::numerics::golden_section_max;

/// Default tolerance on the smallest Choi eigenvalue.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Slack used by [`check_necessary_conditions`] at the inequality boundaries.
pub const CONDITION_TOLERANCE: f64 = 1e-12;

pub type Matrix3 = [[f64; 3]; 3];

/// 4×4 complex matrix, row-major, indexed by `2·i + a` for input slot `i` and
/// output slot `a`.
pub type ChoiMatrix = [[Complex64; 4]; 4];

const IDENTITY3: Matrix3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Which pole a translation points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pole {
    North,
    South,
}

impl Pole {
    pub fn sign(self) -> f64 {
        match self {
            Pole::North => 1.0,
            Pole::South => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineQubitChannel {
    pub matrix: Matrix3,
    pub shift: [f64; 3],
}

impl AffineQubitChannel {
    pub const fn new(matrix: Matrix3, shift: [f64; 3]) -> Self {
        Self { matrix, shift }
    }

    pub const fn identity() -> Self {
        Self::new(IDENTITY3, [0.0; 3])
    }

    pub fn diagonal(d: [f64; 3], shift: [f64; 3]) -> Self {
        let mut matrix = [[0.0; 3]; 3];
        for i in 0..3 {
            matrix[i][i] = d[i];
        }
        Self::new(matrix, shift)
    }

    /// Applies the map without checking that `r` is physical.
    pub fn map_point(&self, r: BlochVector) -> BlochVector {
        let v = r.to_array();
        let mut out = self.shift;
        for (i, o) in out.iter_mut().enumerate() {
            *o += self.matrix[i][0] * v[0] + self.matrix[i][1] * v[1] + self.matrix[i][2] * v[2];
        }
        BlochVector::from_array(out)
    }

    /// Convex combination `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.matrix[i][j] = lambda * self.matrix[i][j] + (1.0 - lambda) * other.matrix[i][j];
            }
            out.shift[i] = lambda * self.shift[i] + (1.0 - lambda) * other.shift[i];
        }
        out
    }

    /// `Some((γ, δ, b_z))` when the map is `Diag(γ, γ, δ)` with a shift along z.
    fn axial_form(&self) -> Option<(f64, f64, f64)> {
        let m = &self.matrix;
        let off_diagonal_zero = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .all(|(i, j)| i == j || m[i][j] == 0.0);
        if off_diagonal_zero && m[0][0] == m[1][1] && self.shift[0] == 0.0 && self.shift[1] == 0.0
        {
            Some((m[0][0], m[2][2], self.shift[2]))
        } else {
            None
        }
    }

    /// Action on an arbitrary (not necessarily Hermitian) 2×2 operator,
    /// extended linearly from the affine map on density matrices.
    pub fn map_operator(&self, x: &Matrix2) -> Matrix2 {
        let trace = x[0][0] + x[1][1];
        let comps = pauli_components(x);
        let p = pauli();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        out[0][0] += 0.5 * trace;
        out[1][1] += 0.5 * trace;
        for i in 0..3 {
            let mut coeff = trace * self.shift[i];
            for j in 0..3 {
                coeff += comps[j] * self.matrix[i][j];
            }
            for a in 0..2 {
                for b in 0..2 {
                    out[a][b] += 0.5 * coeff * p[i][a][b];
                }
            }
        }
        out
    }
}

/// The transverse/longitudinal contraction plus z-translation family
/// `A = Diag(γ, γ, δ)`, `b = (0, 0, ±k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalChannelParams {
    pub gamma: f64,
    pub delta: f64,
    pub k: f64,
    pub pole: Pole,
}

impl DiagonalChannelParams {
    pub fn to_channel(&self) -> AffineQubitChannel {
        AffineQubitChannel::diagonal(
            [self.gamma, self.gamma, self.delta],
            [0.0, 0.0, self.pole.sign() * self.k],
        )
    }

    /// Largest amount by which any of the necessary inequalities fails;
    /// zero or negative when all hold.
    pub fn condition_violation(&self) -> f64 {
        let gamma_max = (1.0 - self.k).max(0.0).sqrt();
        [
            -self.k,
            self.k - 1.0,
            -self.delta,
            self.delta - (1.0 - self.k),
            -self.gamma,
            self.gamma - gamma_max,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `r ↦ α·r`.
pub fn depolarizing_channel(alpha: f64) -> Result<AffineQubitChannel> {
    let alpha = check_range("alpha", alpha, 0.0, 1.0)?;
    Ok(AffineQubitChannel::diagonal([alpha; 3], [0.0; 3]))
}

/// Amplitude damping toward `pole`:
/// `A = Diag(√(1-k), √(1-k), 1-k)`, `b = (0, 0, ±k)`.
pub fn amplitude_damping_channel(k: f64, pole: Pole) -> Result<AffineQubitChannel> {
    let k = check_range("k", k, 0.0, 1.0)?;
    let s = (1.0 - k).sqrt();
    Ok(AffineQubitChannel::diagonal(
        [s, s, 1.0 - k],
        [0.0, 0.0, pole.sign() * k],
    ))
}

/// `A·r + b`, rejecting inputs outside the ball.
pub fn apply(ch: &AffineQubitChannel, r: BlochVector) -> Result<BlochVector> {
    Ok(ch.map_point(r.check_physical()?))
}

/// `second ∘ first`: `(A₂A₁, A₂b₁ + b₂)`.
pub fn compose(second: &AffineQubitChannel, first: &AffineQubitChannel) -> AffineQubitChannel {
    let (a2, a1) = (&second.matrix, &first.matrix);
    let mut matrix = [[0.0; 3]; 3];
    let mut shift = second.shift;
    for i in 0..3 {
        for j in 0..3 {
            matrix[i][j] = (0..3).map(|l| a2[i][l] * a1[l][j]).sum();
        }
        shift[i] += (0..3).map(|l| a2[i][l] * first.shift[l]).sum::<f64>();
    }
    AffineQubitChannel::new(matrix, shift)
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`.
///
/// Convention: unnormalized (trace 2) and the channel acts on the second
/// tensor factor, so the identity channel gives `|Ω⟩⟨Ω|` with
/// `|Ω⟩ = |00⟩ + |11⟩`, eigenvalues `{2, 0, 0, 0}`.
pub fn choi_matrix(ch: &AffineQubitChannel) -> ChoiMatrix {
    let zero = Complex64::new(0.0, 0.0);
    let mut choi = [[zero; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut unit = [[zero; 2]; 2];
            unit[i][j] = Complex64::new(1.0, 0.0);
            let image = ch.map_operator(&unit);
            for a in 0..2 {
                for b in 0..2 {
                    choi[2 * i + a][2 * j + b] = image[a][b];
                }
            }
        }
    }
    choi
}

/// Choi eigenvalues, ascending.
pub fn choi_eigenvalues(ch: &AffineQubitChannel) -> [f64; 4] {
    hermitian_eigenvalues_4(&choi_matrix(ch))
}

/// True iff the smallest Choi eigenvalue is at least `-eps_psd`.
pub fn is_completely_positive(ch: &AffineQubitChannel, eps_psd: f64) -> bool {
    choi_eigenvalues(ch)[0] >= -eps_psd
}

/// The necessary conditions `0 ≤ k ≤ 1`, `0 ≤ δ ≤ 1-k`, `0 ≤ γ ≤ √(1-k)`,
/// each with [`CONDITION_TOLERANCE`] of slack.
pub fn check_necessary_conditions(p: &DiagonalChannelParams) -> bool {
    p.condition_violation() <= CONDITION_TOLERANCE
}

const CONTRACTION_GRID: usize = 10_000;
const ASCENT_STEPS: usize = 50;

/// Maximum of `|A·n + b|` over unit vectors `n`.
///
/// Axially symmetric diagonal maps reduce to a one-dimensional problem in the
/// polar angle (dense grid plus golden-section refinement). Other maps use a
/// Fibonacci-lattice sample followed by projected gradient ascent.
pub fn max_output_norm(ch: &AffineQubitChannel) -> f64 {
    match ch.axial_form() {
        Some((gamma, delta, bz)) => axial_max_norm(gamma, delta, bz),
        None => general_max_norm(ch),
    }
}

/// True when the image of the unit sphere stays inside the ball
/// (within `BALL_TOLERANCE`).
pub fn contracts_ball(ch: &AffineQubitChannel) -> bool {
    max_output_norm(ch) <= 1.0 + BALL_TOLERANCE
}

fn axial_max_norm(gamma: f64, delta: f64, bz: f64) -> f64 {
    let sq = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let z = delta * c + bz;
        gamma * gamma * s * s + z * z
    };
    let step = PI / (CONTRACTION_GRID - 1) as f64;
    let (best_i, best) = (0..CONTRACTION_GRID)
        .map(|i| (i, sq(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(CONTRACTION_GRID - 1)) as f64 * step;
    let (_, refined) = golden_section_max(sq, lo, hi, 1e-12);
    best.max(refined).sqrt()
}

fn fibonacci_sphere(count: usize) -> impl Iterator<Item = BlochVector> {
    let golden_angle = PI * (3.0 - 5.0_f64.sqrt());
    (0..count).map(move |i| {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
        BlochVector::from_polar(z.acos(), golden_angle * i as f64)
    })
}

fn general_max_norm(ch: &AffineQubitChannel) -> f64 {
    let sq = |n: BlochVector| {
        let v = ch.map_point(n);
        v.dot(v)
    };
    let mut best = fibonacci_sphere(CONTRACTION_GRID)
        .map(|n| (n, sq(n)))
        .fold((BlochVector::NORTH, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });

    let mut step = 0.1;
    for _ in 0..ASCENT_STEPS {
        let (n, value) = best;
        let image = ch.map_point(n).to_array();
        // Gradient of |A n + b|² is 2 Aᵀ(A n + b); project onto the tangent plane.
        let mut grad = [0.0; 3];
        for (j, g) in grad.iter_mut().enumerate() {
            *g = 2.0 * (0..3).map(|i| ch.matrix[i][j] * image[i]).sum::<f64>();
        }
        let grad = BlochVector::from_array(grad);
        let tangent = grad - n * grad.dot(n);
        if tangent.norm() < 1e-15 {
            break;
        }
        let candidate = (n + tangent * step).normalized();
        let cand_value = sq(candidate);
        if cand_value > value {
            best = (candidate, cand_value);
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    best.1.sqrt()
}
