//! Qubit states as points of the Bloch ball.
//!
//! A density matrix is written `ρ = ½(I + r·σ)` with `|r| ≤ 1`; pure states
//! sit on the unit sphere. Everything here is a pure function of its inputs,
//! and the only stochastic routine takes its random stream by reference.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Absolute slack allowed on `|r| ≤ 1`.
pub const BALL_TOLERANCE: f64 = 1e-12;

/// Tolerance for unit-norm, trace and hermiticity checks.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// A point in (or, for an unphysical map's output, near) the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);
    pub const NORTH: BlochVector = BlochVector::new(0.0, 0.0, 1.0);
    pub const SOUTH: BlochVector = BlochVector::new(0.0, 0.0, -1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector with polar angle `theta` (from +z) and azimuth `phi`.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(st * cp, st * sp, ct)
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Self {
        self * (1.0 / self.norm())
    }

    /// Polar angle measured from the north pole, in `[0, π]`.
    pub fn polar_angle(self) -> f64 {
        (self.x.hypot(self.y)).atan2(self.z)
    }

    pub fn is_physical(self) -> bool {
        self.norm() <= 1.0 + BALL_TOLERANCE
    }

    pub fn is_pure(self) -> bool {
        (self.norm() - 1.0).abs() <= STATE_TOLERANCE
    }

    /// Returns `self` if it lies inside the ball (within [`BALL_TOLERANCE`]).
    pub fn check_physical(self) -> Result<Self> {
        let norm = self.norm();
        if norm <= 1.0 + BALL_TOLERANCE {
            Ok(self)
        } else {
            Err(Error::UnphysicalState { norm })
        }
    }

    /// Returns `self` if it is a unit vector (within [`STATE_TOLERANCE`]).
    pub fn check_unit(self) -> Result<Self> {
        let norm = self.norm();
        if (norm - 1.0).abs() <= STATE_TOLERANCE {
            Ok(self)
        } else {
            Err(Error::NotUnitVector { norm })
        }
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

/// 2×2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// The Pauli matrices `σx, σy, σz`.
pub fn pauli() -> [Matrix2; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [[[o, l], [l, o]], [[o, -i], [i, o]], [[l, o], [o, -l]]]
}

pub(crate) fn trace2(m: &Matrix2) -> Complex64 {
    m[0][0] + m[1][1]
}

pub(crate) fn matmul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `(tr(X σx), tr(X σy), tr(X σz))` for an arbitrary 2×2 matrix.
pub(crate) fn pauli_components(m: &Matrix2) -> [Complex64; 3] {
    let p = pauli();
    [
        trace2(&matmul2(m, &p[0])),
        trace2(&matmul2(m, &p[1])),
        trace2(&matmul2(m, &p[2])),
    ]
}

/// A validated qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Matrix2,
}

impl DensityMatrix {
    /// Validates trace, hermiticity and positivity.
    pub fn new(entries: Matrix2) -> Result<Self> {
        let deviation = [
            (entries[0][0] - entries[0][0].conj()).norm(),
            (entries[1][1] - entries[1][1].conj()).norm(),
            (entries[0][1] - entries[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if deviation > STATE_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = trace2(&entries).re;
        if (trace - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::TraceNotOne { trace });
        }
        // Eigenvalues are ½(1 ± |r|), so positivity is ball membership.
        let rho = Self { entries };
        rho.bloch_unchecked().check_physical()?;
        Ok(rho)
    }

    pub fn entries(&self) -> &Matrix2 {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        trace2(&self.entries).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = self.bloch_unchecked().norm();
        [0.5 * (1.0 - r), 0.5 * (1.0 + r)]
    }

    fn bloch_unchecked(&self) -> BlochVector {
        let c = pauli_components(&self.entries);
        BlochVector::new(c[0].re, c[1].re, c[2].re)
    }
}

/// `ρ = ½(I + r·σ)`.
pub fn bloch_to_density(r: BlochVector) -> Result<DensityMatrix> {
    let r = r.check_physical()?;
    let half = 0.5;
    let entries = [
        [
            Complex64::new(half * (1.0 + r.z), 0.0),
            Complex64::new(half * r.x, -half * r.y),
        ],
        [
            Complex64::new(half * r.x, half * r.y),
            Complex64::new(half * (1.0 - r.z), 0.0),
        ],
    ];
    Ok(DensityMatrix { entries })
}

/// Inverse of [`bloch_to_density`]: `r_j = tr(ρ σ_j)`.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    // Re-validate: the entries may have been built by hand.
    let rho = DensityMatrix::new(rho.entries)?;
    Ok(rho.bloch_unchecked())
}

/// Fidelity `⟨ψ|σ|ψ⟩ = (1 + n·r)/2` between the pure state with Bloch vector
/// `n` and the (possibly mixed) state `r`.
pub fn fidelity_pure_vs_mixed(n: BlochVector, r: BlochVector) -> Result<f64> {
    let n = n.check_unit()?;
    let r = r.check_physical()?;
    Ok(0.5 * (1.0 + n.dot(r)))
}

/// Uniform draw from the unit sphere: `z` uniform on `[-1, 1]`, azimuth
/// uniform on `[0, 2π)`.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = phi.sin_cos();
    BlochVector::new(rho * c, rho * s, z)
}
