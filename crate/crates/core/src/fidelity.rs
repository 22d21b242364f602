//! Average fidelity of classical-bit-assisted recovery schemes.
//!
//! Alice knows the pure state she sends, announces which cap of the Bloch
//! sphere it lies in, and Bob applies the recovery for that cap after the
//! depolarizing noise. [`average_fidelity_closed_form`] evaluates the
//! uniform-ensemble average exactly; [`average_fidelity_quadrature`] and
//! [`average_fidelity_monte_carlo`] are independent routes to the same number.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bloch::{fidelity_pure_vs_mixed, sample_uniform_sphere, BlochVector};
use crate::channel::{
    amplitude_damping_channel, compose, contracts_ball, depolarizing_channel,
    is_completely_positive, AffineQubitChannel, Pole, PSD_TOLERANCE,
};
use crate::error::{check_range, Error, Result};
use crate::numerics::integrate_adaptive;

/// Best average fidelity with one cbit and no quantum channel.
pub const CLASSICAL_ONLY_FIDELITY: f64 = 0.75;

/// Reference fidelity of the two-cbit classical protocol, as quoted.
pub const GISIN_REFERENCE_FIDELITY: f64 = 0.872;

/// Minimum sample count accepted by the Monte Carlo evaluator.
pub const MIN_MC_SAMPLES: usize = 1000;

/// Independent random substreams used by the Monte Carlo evaluator. Fixed so
/// that results do not depend on the thread count.
const MC_SHARDS: u64 = 16;

/// Label of the cap a state is assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cap {
    /// Polar angle at most β: the cap around the north pole.
    North,
    South,
}

impl Cap {
    pub fn index(self) -> usize {
        match self {
            Cap::North => 0,
            Cap::South => 1,
        }
    }
}

/// Splits the sphere at polar angle `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapPartition {
    beta: f64,
}

impl CapPartition {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(Self {
            beta: check_range("beta", beta, 0.0, FRAC_PI_2)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// States exactly on the boundary go to the north cap.
    pub fn classify(&self, n: BlochVector) -> Cap {
        if n.z >= cap_cosine(self.beta) {
            Cap::North
        } else {
            Cap::South
        }
    }
}

/// One scheme in the cap/amplitude-damping family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Damping strength toward the north pole, used on the north cap.
    pub k: f64,
    /// Damping strength toward the south pole, used on the south cap.
    pub k_prime: f64,
}

impl SchemeConfig {
    pub fn new(alpha: f64, beta: f64, k: f64, k_prime: f64) -> Result<Self> {
        check_range("alpha", alpha, 0.0, 1.0)?;
        check_range("beta", beta, 0.0, FRAC_PI_2)?;
        check_range("k", k, 0.0, 1.0)?;
        check_range("k_prime", k_prime, 0.0, 1.0)?;
        Ok(Self {
            alpha,
            beta,
            k,
            k_prime,
        })
    }

    pub fn partition(&self) -> CapPartition {
        CapPartition { beta: self.beta }
    }

    pub fn noise(&self) -> AffineQubitChannel {
        AffineQubitChannel::diagonal([self.alpha; 3], [0.0; 3])
    }

    pub fn recovery(&self, cap: Cap) -> AffineQubitChannel {
        let (k, pole) = match cap {
            Cap::North => (self.k, Pole::North),
            Cap::South => (self.k_prime, Pole::South),
        };
        amplitude_damping_channel(k, pole).expect("k validated at construction")
    }

    /// The same scheme expressed in the general evaluator's terms.
    pub fn to_general_scheme(&self) -> Result<GeneralScheme> {
        let partition = self.partition();
        GeneralScheme::new(
            Arc::new(move |n: BlochVector| partition.classify(n).index()),
            vec![self.recovery(Cap::North), self.recovery(Cap::South)],
            self.noise(),
        )
    }
}

/// Classifier used by [`GeneralScheme`]: maps a unit Bloch vector to the
/// index of the recovery Bob applies.
pub type Classifier = Arc<dyn Fn(BlochVector) -> usize + Send + Sync>;

/// An arbitrary `n`-cbit scheme: a partition of the sphere into `2ⁿ` labels
/// and one recovery channel per label.
#[derive(Clone)]
pub struct GeneralScheme {
    classifier: Classifier,
    recoveries: Vec<AffineQubitChannel>,
    noise: AffineQubitChannel,
}

impl fmt::Debug for GeneralScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralScheme")
            .field("recoveries", &self.recoveries)
            .field("noise", &self.noise)
            .finish_non_exhaustive()
    }
}

impl GeneralScheme {
    /// Checks the recovery count is a power of two and every recovery is a
    /// ball-contracting CP map.
    pub fn new(
        classifier: Classifier,
        recoveries: Vec<AffineQubitChannel>,
        noise: AffineQubitChannel,
    ) -> Result<Self> {
        if !recoveries.len().is_power_of_two() {
            return Err(Error::InvalidScheme(format!(
                "{} recoveries is not a power of two",
                recoveries.len()
            )));
        }
        for (index, ch) in recoveries.iter().enumerate() {
            if !is_completely_positive(ch, PSD_TOLERANCE) || !contracts_ball(ch) {
                return Err(Error::NotCompletelyPositive { index });
            }
        }
        if !is_completely_positive(&noise, PSD_TOLERANCE) {
            return Err(Error::InvalidScheme("noise channel is not completely positive".into()));
        }
        Ok(Self {
            classifier,
            recoveries,
            noise,
        })
    }

    /// A scheme with no classical communication: one recovery for everything.
    pub fn without_cbits(recovery: AffineQubitChannel, noise: AffineQubitChannel) -> Result<Self> {
        Self::new(Arc::new(|_| 0), vec![recovery], noise)
    }

    pub fn cbits(&self) -> u32 {
        self.recoveries.len().trailing_zeros()
    }

    pub fn recoveries(&self) -> &[AffineQubitChannel] {
        &self.recoveries
    }

    pub fn noise(&self) -> &AffineQubitChannel {
        &self.noise
    }

    /// Fidelity of Bob's final state for target `n`.
    pub fn fidelity_for(&self, n: BlochVector) -> Result<f64> {
        let label = (self.classifier)(n);
        let recovery = self.recoveries.get(label).ok_or_else(|| {
            Error::InvalidScheme(format!(
                "classifier returned label {label} for {} recoveries",
                self.recoveries.len()
            ))
        })?;
        let out = recovery.map_point(self.noise.map_point(n));
        fidelity_pure_vs_mixed(n, out)
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.count == 0.0 {
            return self;
        }
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }
}

/// Averages the fidelity over `n_samples` uniformly drawn pure states.
///
/// Draws come from [`MC_SHARDS`] ChaCha8 substreams of `seed` (stream id =
/// shard index). Shards run in parallel and merge in index order, so the
/// result depends only on `(scheme, n_samples, seed)`.
pub fn average_fidelity_monte_carlo(
    scheme: &GeneralScheme,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::TooFew {
            what: "Monte Carlo samples",
            got: n_samples,
            min: MIN_MC_SAMPLES,
        });
    }
    let shards = MC_SHARDS as usize;
    let per_shard: Vec<usize> = (0..shards)
        .map(|i| n_samples / shards + usize::from(i < n_samples % shards))
        .collect();

    let partials: Vec<Result<Moments>> = per_shard
        .par_iter()
        .enumerate()
        .map(|(shard, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let mut m = Moments::default();
            for _ in 0..count {
                let n = sample_uniform_sphere(&mut rng);
                m.push(scheme.fidelity_for(n)?);
            }
            Ok(m)
        })
        .collect();

    let mut total = Moments::default();
    for part in partials {
        total = total.merge(part?);
    }
    let variance = if total.count > 1.0 {
        (total.m2 / (total.count - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        estimate: total.mean,
        std_error: (variance / total.count).sqrt(),
        samples: n_samples,
    })
}

/// Polar integrals of one cap, already divided by the `2π` azimuth factor
/// and the sphere area as they appear in the average.
///
/// For the north cap `θ ∈ [0, β]`:
/// `p = ∫ sin³θ`, `q = ∫ sinθ cos²θ`, `r = ∫ sinθ cosθ`. The south cap uses
/// `θ ∈ [β, π]` and the sign-flipped `r`, so that in both cases a translation
/// toward the cap's own pole contributes `+k·r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapCoefficients {
    /// `∫ sinθ dθ` over the cap.
    pub weight: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl CapCoefficients {
    /// `α√(1-k)·p + α(1-k)·q + k·r`, the cap's recovery-dependent term.
    pub fn gain(&self, alpha: f64, k: f64) -> f64 {
        alpha * (1.0 - k).sqrt() * self.p + alpha * (1.0 - k) * self.q + k * self.r
    }

    /// The cap's full contribution to the average fidelity.
    pub fn contribution(&self, alpha: f64, k: f64) -> f64 {
        0.25 * (self.weight + self.gain(alpha, k))
    }
}

/// `cos β`, computed as `sin(π/2 - β)` so that the hemisphere split gives
/// exactly zero.
pub fn cap_cosine(beta: f64) -> f64 {
    (FRAC_PI_2 - beta).sin()
}

/// Coefficients for the north and south caps at partition angle `beta`.
///
/// The factored forms keep every coefficient exactly non-negative in
/// floating point.
pub fn cap_coefficients(beta: f64) -> (CapCoefficients, CapCoefficients) {
    let c = cap_cosine(beta);
    let r = 0.5 * (1.0 - c) * (1.0 + c);
    let north = CapCoefficients {
        weight: 1.0 - c,
        p: (1.0 - c) * (1.0 - c) * (2.0 + c) / 3.0,
        q: (1.0 - c * c * c) / 3.0,
        r,
    };
    let south = CapCoefficients {
        weight: 1.0 + c,
        p: (1.0 + c) * (1.0 + c) * (2.0 - c) / 3.0,
        q: (1.0 + c * c * c) / 3.0,
        r,
    };
    (north, south)
}

/// Exact uniform-ensemble average fidelity of `cfg`.
pub fn average_fidelity_closed_form(cfg: &SchemeConfig) -> f64 {
    let (north, south) = cap_coefficients(cfg.beta);
    north.contribution(cfg.alpha, cfg.k) + south.contribution(cfg.alpha, cfg.k_prime)
}

/// Same average as [`average_fidelity_closed_form`], obtained by adaptive
/// quadrature over the polar angle of the actual channel outputs.
pub fn average_fidelity_quadrature(cfg: &SchemeConfig, abs_tol: f64) -> f64 {
    let noise = cfg.noise();
    let north = compose(&cfg.recovery(Cap::North), &noise);
    let south = compose(&cfg.recovery(Cap::South), &noise);
    // Azimuthal symmetry: integrate at φ = 0 and weight by 2π / 4π.
    let integrand = |ch: &AffineQubitChannel, theta: f64| {
        let n = BlochVector::new(theta.sin(), 0.0, theta.cos());
        let out = ch.map_point(n);
        0.5 * theta.sin() * 0.5 * (1.0 + n.dot(out))
    };
    integrate_adaptive(|t| integrand(&north, t), 0.0, cfg.beta, abs_tol)
        + integrate_adaptive(|t| integrand(&south, t), cfg.beta, PI, abs_tol)
}

/// Doing nothing: `(1 + α)/2` for every input.
pub fn no_op_fidelity(alpha: f64) -> Result<f64> {
    let alpha = check_range("alpha", alpha, 0.0, 1.0)?;
    Ok(0.5 * (1.0 + alpha))
}

/// One cbit, no quantum channel: Bob prepares the announced hemisphere's pole.
pub fn classical_only_fidelity() -> f64 {
    CLASSICAL_ONLY_FIDELITY
}

pub fn gisin_reference_fidelity() -> f64 {
    GISIN_REFERENCE_FIDELITY
}

/// Scheme with no cbit and no recovery under depolarizing noise.
pub fn no_op_scheme(alpha: f64) -> Result<GeneralScheme> {
    GeneralScheme::without_cbits(AffineQubitChannel::identity(), depolarizing_channel(alpha)?)
}
