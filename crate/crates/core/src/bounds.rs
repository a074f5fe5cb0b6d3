//! Fourth-moment bounds on the Kolmogorov distance to the Gaussian and
//! semicircle laws, and the kurtosis divisibility audit.
//!
//! For a centered, unit-variance law `mu` that is `N`-divisible:
//!
//! | convolution | bound                                   | `N = inf`          |
//! |-------------|-----------------------------------------|--------------------|
//! | classical   | `d(mu, Phi) <= C sqrt(m4 - 3 + 3/N)`    | `C sqrt(m4 - 3)`   |
//! | free        | `d(mu, F_w) <= 2K sqrt(m4 - 2 + 2/N)`   | `K sqrt(m4 - 2)`   |
//!
//! `C` is the Berry-Esseen constant (default `0.4748`), `K` the free
//! Berry-Esseen constant, which has no known numeric value; it defaults to
//! `1.0` and is always reported. The infinitely divisible free bound is
//! commonly stated without the factor two; [`free_bound_with_factor`] exposes
//! either variant and reports carry the factor used.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::cumulants::MomentSequence;
use crate::distributions::{self, Params};
use crate::error::{Error, Result};
use crate::kolmogorov::{self, DistanceResult};
use crate::partitions::Ceilings;

pub const DEFAULT_C: f64 = 0.4748;
pub const DEFAULT_K: f64 = 1.0;

/// Slack under which a slightly negative radicand is treated as zero.
const RADICAND_SLACK: f64 = 1e-12;
/// Tolerance for the equality cases `Kurt = -2/n` and `Kurt_free = -1/n`.
const EQUALITY_TOLERANCE: f64 = 1e-12;

/// Divisibility order: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Divisibility {
    Finite(u64),
    Infinite,
}

impl Divisibility {
    /// `1/N`, zero for infinite divisibility.
    pub fn reciprocal(self) -> f64 {
        match self {
            Divisibility::Finite(n) => 1.0 / n as f64,
            Divisibility::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Divisibility::Infinite
    }
}

impl fmt::Display for Divisibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisibility::Finite(n) => write!(f, "{n}"),
            Divisibility::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Divisibility {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Divisibility::Infinite),
            other => match other.parse::<u64>() {
                Ok(0) | Err(_) => Err(format!(
                    "divisibility order must be a positive integer or `inf`, got `{other}`"
                )),
                Ok(n) => Ok(Divisibility::Finite(n)),
            },
        }
    }
}

impl Serialize for Divisibility {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Divisibility::Finite(n) => s.serialize_u64(*n),
            Divisibility::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Which bound a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    /// Classical, infinitely divisible.
    #[serde(rename = "classical_id")]
    ClassicalId,
    /// Free, infinitely divisible.
    #[serde(rename = "free_id")]
    FreeId,
    /// Classical, N-divisible.
    #[serde(rename = "classical_ndiv")]
    ClassicalNdiv,
    /// Free, N-divisible.
    #[serde(rename = "free_ndiv")]
    FreeNdiv,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::ClassicalId => "classical_id",
            Theorem::FreeId => "free_id",
            Theorem::ClassicalNdiv => "classical_ndiv",
            Theorem::FreeNdiv => "free_ndiv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub m4: f64,
    #[serde(rename = "N")]
    pub order: Divisibility,
    pub constant_c: f64,
    pub constant_k: f64,
    /// Multiplier of `K` in the free bounds; absent for classical bounds.
    pub k_factor: Option<f64>,
    pub rhs: f64,
    pub measured: Option<DistanceResult>,
    pub satisfied: Option<bool>,
}

impl BoundReport {
    /// Attaches a measured distance; the bound holds when the certified lower
    /// end of the distance does not exceed the right-hand side.
    pub fn with_measurement(mut self, measured: DistanceResult) -> Self {
        self.satisfied = Some(measured.value - measured.error_bound <= self.rhs);
        self.measured = Some(measured);
        self
    }
}

fn radicand_sqrt(theorem: Theorem, radicand: f64, order: Divisibility) -> Result<f64> {
    if radicand.is_nan() || radicand < -RADICAND_SLACK {
        return Err(Error::NegativeRadicand {
            theorem: theorem.name(),
            radicand,
            order: order.to_string(),
        });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// `C sqrt(m4 - 3 + 3/N)`.
pub fn classical_bound(m4: f64, order: Divisibility, c: f64) -> Result<BoundReport> {
    let theorem = if order.is_infinite() {
        Theorem::ClassicalId
    } else {
        Theorem::ClassicalNdiv
    };
    let root = radicand_sqrt(theorem, m4 - 3.0 + 3.0 * order.reciprocal(), order)?;
    Ok(BoundReport {
        theorem,
        m4,
        order,
        constant_c: c,
        constant_k: DEFAULT_K,
        k_factor: None,
        rhs: c * root,
        measured: None,
        satisfied: None,
    })
}

/// `2K sqrt(m4 - 2 + 2/N)` for finite `N`, `K sqrt(m4 - 2)` for `N = inf`.
pub fn free_bound(m4: f64, order: Divisibility, k: f64) -> Result<BoundReport> {
    let factor = if order.is_infinite() { 1.0 } else { 2.0 };
    free_bound_with_factor(m4, order, k, factor)
}

/// `factor * K * sqrt(m4 - 2 + 2/N)`.
pub fn free_bound_with_factor(
    m4: f64,
    order: Divisibility,
    k: f64,
    factor: f64,
) -> Result<BoundReport> {
    let theorem = if order.is_infinite() {
        Theorem::FreeId
    } else {
        Theorem::FreeNdiv
    };
    let root = radicand_sqrt(theorem, m4 - 2.0 + 2.0 * order.reciprocal(), order)?;
    Ok(BoundReport {
        theorem,
        m4,
        order,
        constant_c: DEFAULT_C,
        constant_k: k,
        k_factor: Some(factor),
        rhs: factor * k * root,
        measured: None,
        satisfied: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KurtosisAudit {
    pub kurt_classical: f64,
    pub kurt_free: f64,
    /// Largest `n` allowed by `Kurt >= -2/n`; `Finite(0)` when
    /// `Kurt < -2`, which no probability law satisfies.
    pub max_n_classical: Divisibility,
    /// Largest `n` allowed by `Kurt_free >= -1/n`.
    pub max_n_free: Divisibility,
    pub equality_classical: bool,
    pub equality_free: bool,
}

/// Largest `n` with `kurt >= -floor_at_one / n`, and whether equality holds.
fn max_order(kurt: f64, floor_at_one: f64) -> (Divisibility, bool) {
    if kurt >= 0.0 {
        return (Divisibility::Infinite, false);
    }
    let ratio = -floor_at_one / kurt;
    let nearest = ratio.round();
    let integral = (ratio - nearest).abs() <= EQUALITY_TOLERANCE * nearest.max(1.0);
    let n = if integral { nearest } else { ratio.floor() };
    if n >= u64::MAX as f64 {
        return (Divisibility::Infinite, false);
    }
    let n = n.max(0.0) as u64;
    let equality = n > 0 && (kurt + floor_at_one / n as f64).abs() <= EQUALITY_TOLERANCE;
    (Divisibility::Finite(n), equality)
}

/// Classical and free kurtosis with the divisibility orders they permit.
pub fn kurtosis_audit(m: &MomentSequence) -> Result<KurtosisAudit> {
    let var = m.central2()?;
    let c4 = m.central4()?;
    if !(var > 0.0) {
        return Err(Error::ZeroVariance(var));
    }
    let kurt_classical = c4 / (var * var) - 3.0;
    let kurt_free = kurt_classical + 1.0;
    let (max_n_classical, equality_classical) = max_order(kurt_classical, 2.0);
    let (max_n_free, equality_free) = max_order(kurt_free, 1.0);
    Ok(KurtosisAudit {
        kurt_classical,
        kurt_free,
        max_n_classical,
        max_n_free,
        equality_classical,
        equality_free,
    })
}

/// Constants and numerical settings shared by the example runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConfig {
    pub constant_c: f64,
    pub constant_k: f64,
    pub tolerance: f64,
    pub ceilings: Ceilings,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            constant_c: DEFAULT_C,
            constant_k: DEFAULT_K,
            tolerance: kolmogorov::DEFAULT_TOLERANCE,
            ceilings: Ceilings::default(),
        }
    }
}

/// One reproduced example.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleReport {
    pub example: String,
    pub params: Params,
    pub report: BoundReport,
}

/// Divisibility order of the Kesten-McKay law: infinite for `t >= 1`,
/// otherwise `floor(1 / (1 - t))` (exact when `1 / (1 - t)` is an integer).
pub fn kesten_mckay_order(t: f64) -> Divisibility {
    if t >= 1.0 {
        return Divisibility::Infinite;
    }
    let ratio = 1.0 / (1.0 - t);
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= 1e-9 * nearest {
        nearest
    } else {
        ratio.floor()
    };
    Divisibility::Finite(n as u64)
}

/// Reproduces a catalog example: evaluates the bound and, when both laws
/// have CDFs, measures the distance.
pub fn verify_example(name: &str, params: &Params, cfg: &BoundConfig) -> Result<ExampleReport> {
    let gaussian = distributions::gaussian();
    let report = match name {
        "poisson" => {
            let spec = distributions::lookup("poisson", params)?;
            let m4 = spec.moments().values()[3];
            let measured = kolmogorov::distance_atomic_vs_continuous(&spec, &gaussian)?;
            classical_bound(m4, Divisibility::Infinite, cfg.constant_c)?.with_measurement(measured)
        }
        "compound-poisson" => {
            let lambda = params.get("lambda")?;
            let nu = distributions::two_point_jump_moments(lambda);
            let m = distributions::compound_poisson_moments(lambda, &nu)?;
            classical_bound(m.values()[3], Divisibility::Infinite, cfg.constant_c)?
        }
        "lognormal" => {
            let spec = distributions::shifted_lognormal(params.get("sigma")?)?;
            let m4 = spec.moments().values()[3];
            let measured = kolmogorov::distance_continuous(&spec, &gaussian, cfg.tolerance)?;
            classical_bound(m4, Divisibility::Infinite, cfg.constant_c)?.with_measurement(measured)
        }
        "qgaussian" => {
            let q = params.get("q")?;
            let m = crate::cumulants::qgaussian_moments_with(q, 4, &cfg.ceilings)?;
            free_bound(m.values()[3], Divisibility::Infinite, cfg.constant_k)?
        }
        "kesten-mckay" => {
            let t = params.get("t")?;
            let spec = distributions::kesten_mckay(t)?;
            let m4 = spec.moments().values()[3];
            let measured = kolmogorov::distance_continuous(
                &spec,
                &distributions::semicircle(),
                cfg.tolerance,
            )?;
            free_bound(m4, kesten_mckay_order(t), cfg.constant_k)?.with_measurement(measured)
        }
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    let mut report = report;
    report.constant_c = cfg.constant_c;
    report.constant_k = cfg.constant_k;
    Ok(ExampleReport {
        example: name.to_string(),
        params: params.clone(),
        report,
    })
}

/// The example rows reproduced by `verify --all`, in output order.
pub fn example_suite() -> Vec<(&'static str, Params)> {
    let mut out = Vec::new();
    for n in [1.0, 4.0, 16.0, 64.0, 256.0] {
        out.push(("poisson", Params::new().with("n", n)));
    }
    for lambda in [1.0, 10.0, 100.0] {
        out.push(("compound-poisson", Params::new().with("lambda", lambda)));
    }
    for sigma in [0.05, 0.1, 0.2] {
        out.push(("lognormal", Params::new().with("sigma", sigma)));
    }
    for q in [0.0, 0.3, 0.7, 1.0] {
        out.push(("qgaussian", Params::new().with("q", q)));
    }
    for t in [0.75, 0.9, 1.0, 1.5, 2.0, 3.0] {
        out.push(("kesten-mckay", Params::new().with("t", t)));
    }
    out
}
