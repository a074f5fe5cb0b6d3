//! Catalog of laws with exact moments and, where available, CDFs carrying a
//! per-evaluation error bound and a Lipschitz constant (a bound on the
//! density).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cumulants::{self, CumulantSequence, Kind, MomentSequence};
use crate::error::{Error, Result};
use crate::quadrature;

/// Tail mass left out when an atomic law is truncated, per side.
pub const TRUNCATION_TAIL: f64 = 1e-14;

/// Standard normal CDF.
pub fn gaussian_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub fn gaussian_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// CDF of the unit-variance semicircle law on `[-2, 2]`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
}

pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * PI)
    }
}

/// Named real parameters, e.g. `n=16` or `sigma=0.1,t=2`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingParameter(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Params {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Params::new();
        for item in s.split([',', ';']).map(str::trim).filter(|i| !i.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| format!("malformed number `{}` for `{}`", v.trim(), k.trim()))?;
            out.0.insert(k.trim().to_string(), v);
        }
        Ok(out)
    }
}

/// Finitely many atoms left after truncating an atomic law, with the mass
/// dropped on each side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomList {
    /// Strictly increasing atom locations.
    pub locations: Vec<f64>,
    pub masses: Vec<f64>,
    pub left_tail: f64,
    pub right_tail: f64,
    /// Absolute error bound on the summed masses.
    pub mass_error: f64,
}

impl AtomList {
    pub fn truncated_mass(&self) -> f64 {
        self.left_tail + self.right_tail
    }

    /// `P(X <= x)` of the truncated law, counting the left tail as mass at
    /// minus infinity.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.locations.partition_point(|&a| a <= x);
        self.left_tail + self.masses[..k].iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Support {
    Interval { lo: f64, hi: f64 },
    Atoms { count: usize, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Law {
    Gaussian,
    Semicircle,
    Atomic(AtomList),
    ShiftedLognormal { m: f64, sigma: f64, shift: f64 },
    KestenMcKay { t: f64 },
    MomentsOnly,
}

/// A catalog entry. See the module constructors.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    name: String,
    params: Params,
    support: Support,
    law: Law,
    lipschitz_bound: Option<f64>,
    moments: MomentSequence,
}

/// Serializable description of a [`DistributionSpec`].
#[derive(Debug, Clone, Serialize)]
pub struct SpecSummary<'a> {
    pub name: &'a str,
    pub params: &'a Params,
    pub support: Support,
    pub has_cdf: bool,
    pub lipschitz_bound: Option<f64>,
    pub cdf_error: Option<f64>,
    pub truncated_mass: Option<f64>,
    pub moments: &'a [f64],
}

impl DistributionSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn moments(&self) -> &MomentSequence {
        &self.moments
    }

    pub fn lipschitz_bound(&self) -> Option<f64> {
        self.lipschitz_bound
    }

    pub fn has_cdf(&self) -> bool {
        !matches!(self.law, Law::MomentsOnly)
    }

    pub fn atoms(&self) -> Option<&AtomList> {
        match &self.law {
            Law::Atomic(atoms) => Some(atoms),
            _ => None,
        }
    }

    /// True when both specs describe the same law, whatever their names.
    pub fn same_law(&self, other: &Self) -> bool {
        self.law == other.law
    }

    pub fn is_atomic(&self) -> bool {
        self.atoms().is_some()
    }

    /// CDF value and an absolute error bound for that evaluation.
    pub fn cdf_with_error(&self, x: f64) -> Result<(f64, f64)> {
        match &self.law {
            Law::Gaussian => Ok((gaussian_cdf(x), 1e-15)),
            Law::Semicircle => Ok((semicircle_cdf(x), 1e-15)),
            Law::Atomic(atoms) => Ok((atoms.cdf(x), atoms.mass_error)),
            Law::ShiftedLognormal { m, sigma, shift } => {
                let y = x + shift;
                if y <= 0.0 {
                    Ok((0.0, 0.0))
                } else {
                    Ok((gaussian_cdf((y.ln() - m) / sigma), 1e-14))
                }
            }
            Law::KestenMcKay { t } => Ok(kesten_mckay_cdf(*t, x)),
            Law::MomentsOnly => Err(Error::MissingCdf(self.name.clone())),
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.cdf_with_error(x).map(|(v, _)| v)
    }

    /// Worst-case absolute error of a single CDF evaluation.
    pub fn cdf_error(&self) -> Option<f64> {
        match &self.law {
            Law::Gaussian | Law::Semicircle => Some(1e-15),
            Law::Atomic(atoms) => Some(atoms.mass_error),
            Law::ShiftedLognormal { .. } => Some(1e-14),
            Law::KestenMcKay { .. } => Some(KESTEN_MCKAY_CDF_ERROR),
            Law::MomentsOnly => None,
        }
    }

    /// Density of the absolutely continuous laws.
    pub fn density(&self, x: f64) -> Option<f64> {
        match &self.law {
            Law::Gaussian => Some(gaussian_density(x)),
            Law::Semicircle => Some(semicircle_density(x)),
            Law::ShiftedLognormal { m, sigma, shift } => {
                let y = x + shift;
                if y <= 0.0 {
                    Some(0.0)
                } else {
                    Some(gaussian_density((y.ln() - m) / sigma) / (sigma * y))
                }
            }
            Law::KestenMcKay { t } => Some(kesten_mckay_density(*t, x)),
            Law::Atomic(_) | Law::MomentsOnly => None,
        }
    }

    /// An interval `[lo, hi]` with `F(lo) <= tail` and `1 - F(hi) <= tail`,
    /// returned together with `tail`.
    pub fn effective_range(&self) -> Option<(f64, f64, f64)> {
        // Phi(-9) is about 1.1e-19
        const Z: f64 = 9.0;
        const Z_TAIL: f64 = 1.2e-19;
        match &self.law {
            Law::Gaussian => Some((-Z, Z, Z_TAIL)),
            Law::ShiftedLognormal { m, sigma, shift } => {
                Some((-shift, (m + sigma * Z).exp() - shift, Z_TAIL))
            }
            _ => match self.support {
                Support::Interval { lo, hi } => Some((lo, hi, 0.0)),
                Support::Atoms { lo, hi, .. } => {
                    let atoms = self.atoms()?;
                    Some((lo, hi, atoms.left_tail.max(atoms.right_tail)))
                }
            },
        }
    }

    pub fn summary(&self) -> SpecSummary<'_> {
        SpecSummary {
            name: &self.name,
            params: &self.params,
            support: self.support,
            has_cdf: self.has_cdf(),
            lipschitz_bound: self.lipschitz_bound,
            cdf_error: self.cdf_error(),
            truncated_mass: self.atoms().map(AtomList::truncated_mass),
            moments: self.moments.values(),
        }
    }
}

/// Standard normal law.
pub fn gaussian() -> DistributionSpec {
    DistributionSpec {
        name: "gaussian".into(),
        params: Params::new(),
        support: Support::Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        },
        law: Law::Gaussian,
        lipschitz_bound: Some(1.0 / (2.0 * PI).sqrt()),
        moments: MomentSequence::new(vec![0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0]),
    }
}

/// Unit-variance semicircle law.
pub fn semicircle() -> DistributionSpec {
    DistributionSpec {
        name: "semicircle".into(),
        params: Params::new(),
        support: Support::Interval { lo: -2.0, hi: 2.0 },
        law: Law::Semicircle,
        lipschitz_bound: Some(1.0 / PI),
        moments: MomentSequence::new(vec![0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0]),
    }
}

/// A finitely supported law. Locations need not be sorted; coincident
/// locations are merged.
pub fn atomic(name: &str, params: Params, atoms: &[(f64, f64)]) -> Result<DistributionSpec> {
    if atoms.is_empty() {
        return Err(Error::ParameterOutOfRange {
            name: "atoms",
            reason: "empty atom list".into(),
        });
    }
    let mut sorted = atoms.to_vec();
    if sorted.iter().any(|&(x, p)| !x.is_finite() || !(p >= 0.0)) {
        return Err(Error::ParameterOutOfRange {
            name: "atoms",
            reason: "locations must be finite and masses nonnegative".into(),
        });
    }
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut locations: Vec<f64> = Vec::with_capacity(sorted.len());
    let mut masses: Vec<f64> = Vec::with_capacity(sorted.len());
    for (x, p) in sorted {
        if locations.last() == Some(&x) {
            *masses.last_mut().unwrap() += p;
        } else {
            locations.push(x);
            masses.push(p);
        }
    }
    let moments = (1..=4)
        .map(|j| {
            locations
                .iter()
                .zip(&masses)
                .map(|(x, p)| p * x.powi(j))
                .sum()
        })
        .collect();
    let atoms = AtomList::exact(locations, masses);
    Ok(build_atomic(
        name,
        params,
        atoms,
        MomentSequence::new(moments),
    ))
}

impl AtomList {
    fn exact(locations: Vec<f64>, masses: Vec<f64>) -> Self {
        let mass_error = locations.len() as f64 * f64::EPSILON;
        Self {
            locations,
            masses,
            left_tail: 0.0,
            right_tail: 0.0,
            mass_error,
        }
    }
}

fn build_atomic(
    name: &str,
    params: Params,
    atoms: AtomList,
    moments: MomentSequence,
) -> DistributionSpec {
    let support = Support::Atoms {
        count: atoms.locations.len(),
        lo: atoms.locations[0],
        hi: *atoms.locations.last().unwrap(),
    };
    DistributionSpec {
        name: name.into(),
        params,
        support,
        law: Law::Atomic(atoms),
        lipschitz_bound: None,
        moments,
    }
}

/// Unit point mass at `x`.
pub fn point_mass(x: f64) -> DistributionSpec {
    atomic("point-mass", Params::new().with("x", x), &[(x, 1.0)]).expect("finite point mass")
}

/// `(X - n) / sqrt(n)` for `X ~ Poisson(n)`, truncated to the atoms that keep
/// each tail below [`TRUNCATION_TAIL`].
pub fn standardized_poisson(n: u64) -> Result<DistributionSpec> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    let rate = n as f64;
    let ln_rate = rate.ln();
    // beyond n + 40 sqrt(n) + 40 the pmf is far below f64 resolution
    let k_end = n + 40 * ((rate.sqrt()) as u64 + 1) + 40;
    let pmf: Vec<f64> = (0..=k_end)
        .map(|k| {
            let k = k as f64;
            (k * ln_rate - rate - libm::lgamma(k + 1.0)).exp()
        })
        .collect();

    let mut lo = 0usize;
    let mut left_tail = 0.0;
    while left_tail + pmf[lo] < TRUNCATION_TAIL {
        left_tail += pmf[lo];
        lo += 1;
    }
    let mut hi = pmf.len() - 1;
    let mut right_tail = 0.0;
    while right_tail + pmf[hi] < TRUNCATION_TAIL {
        right_tail += pmf[hi];
        hi -= 1;
    }

    let scale = rate.sqrt();
    let locations: Vec<f64> = (lo..=hi).map(|k| (k as f64 - rate) / scale).collect();
    let masses = pmf[lo..=hi].to_vec();
    // relative pmf error from lgamma and exp, plus summation rounding
    let mass_error = 1e-12 + (hi - lo + 1) as f64 * f64::EPSILON;
    let atoms = AtomList {
        locations,
        masses,
        left_tail,
        right_tail,
        mass_error,
    };
    let moments = MomentSequence::new(vec![0.0, 1.0, 1.0 / scale, 3.0 + 1.0 / rate]);
    Ok(build_atomic(
        "poisson",
        Params::new().with("n", rate),
        atoms,
        moments,
    ))
}

/// Moments of the compound Poisson law with rate `lambda` and jump law `nu`,
/// whose classical cumulants are `lambda * m_k(nu)`.
pub fn compound_poisson_moments(
    lambda: f64,
    nu_moments: &MomentSequence,
) -> Result<MomentSequence> {
    if !(lambda > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "lambda",
            reason: format!("{lambda} is not positive"),
        });
    }
    if nu_moments.len() < 4 {
        return Err(Error::TooShort {
            needed: 4,
            got: nu_moments.len(),
        });
    }
    let c = CumulantSequence::new(
        Kind::Classical,
        nu_moments.values().iter().map(|m| lambda * m).collect(),
    );
    cumulants::moments_from_cumulants(&c)
}

/// Moments of the symmetric two-point law `+-1/sqrt(lambda)`, the default
/// jump law making the compound Poisson law centered with unit variance.
pub fn two_point_jump_moments(lambda: f64) -> MomentSequence {
    let v = 1.0 / lambda;
    MomentSequence::new(vec![0.0, v, 0.0, v * v])
}

/// `e^{m + sigma Z} - e^{m + sigma^2 / 2}` with `m` chosen for unit variance.
pub fn shifted_lognormal(sigma: f64) -> Result<DistributionSpec> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "sigma",
            reason: format!("{sigma} is not positive"),
        });
    }
    let s2 = sigma * sigma;
    // log(e^{2 s2} - e^{s2}) = s2 + log(expm1(s2)), stable for small sigma
    let m = -0.5 * (s2 + s2.exp_m1().ln());
    let shift = (m + 0.5 * s2).exp();
    let e = s2.exp_m1();
    let skew = (e + 3.0) * e.sqrt();
    let moments = MomentSequence::new(vec![0.0, 1.0, skew, 3.0 + lognormal_excess_kurtosis(sigma)]);
    // density peaks at the log-normal mode e^{m - sigma^2}
    let peak = (0.5 * s2 - m).exp() / (sigma * (2.0 * PI).sqrt());
    Ok(DistributionSpec {
        name: "lognormal".into(),
        params: Params::new().with("sigma", sigma),
        support: Support::Interval {
            lo: -shift,
            hi: f64::INFINITY,
        },
        law: Law::ShiftedLognormal { m, sigma, shift },
        lipschitz_bound: Some(peak * (1.0 + 1e-9)),
        moments,
    })
}

/// `e^{4 s^2} + 2 e^{3 s^2} + 3 e^{2 s^2} - 6`.
pub fn lognormal_excess_kurtosis(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    // expm1 form keeps precision as sigma -> 0
    (4.0 * s2).exp_m1() + 2.0 * (3.0 * s2).exp_m1() + 3.0 * (2.0 * s2).exp_m1()
}

const KESTEN_MCKAY_CDF_ERROR: f64 = 1e-10;
const KESTEN_MCKAY_QUAD_TOL: f64 = 1e-13;

pub fn kesten_mckay_density(t: f64, x: f64) -> f64 {
    let r2 = 4.0 * t - x * x;
    if r2 <= 0.0 {
        return 0.0;
    }
    r2.sqrt() / (2.0 * PI * (1.0 - (1.0 - t) * x * x))
}

/// CDF via `x = 2 sqrt(t) sin(theta)`, which turns the density into the
/// smooth integrand `(2t/pi) cos^2 / (1 - 4t(1-t) sin^2)`; integrated from the
/// centre by symmetry.
fn kesten_mckay_cdf(t: f64, x: f64) -> (f64, f64) {
    let radius = 2.0 * t.sqrt();
    if x <= -radius {
        return (0.0, 0.0);
    }
    if x >= radius {
        return (1.0, 0.0);
    }
    let theta = (x / radius).clamp(-1.0, 1.0).asin();
    let a = 4.0 * t * (1.0 - t);
    let integrand = |th: f64| {
        let (s, c) = th.sin_cos();
        (2.0 * t / PI) * c * c / (1.0 - a * s * s)
    };
    let r = quadrature::integrate(integrand, 0.0, theta.abs(), KESTEN_MCKAY_QUAD_TOL, 64);
    let value = if theta >= 0.0 {
        0.5 + r.value
    } else {
        0.5 - r.value
    };
    (value.clamp(0.0, 1.0), r.error.max(4.0 * f64::EPSILON))
}

/// Kesten-McKay law with parameter `t > 1/2`, density
/// `sqrt(4t - x^2) / (2 pi (1 - (1 - t) x^2))` on `|x| < 2 sqrt(t)`.
pub fn kesten_mckay(t: f64) -> Result<DistributionSpec> {
    if !(t > 0.5) || !t.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            reason: format!("{t} is not greater than 1/2"),
        });
    }
    let radius = 2.0 * t.sqrt();
    Ok(DistributionSpec {
        name: "kesten-mckay".into(),
        params: Params::new().with("t", t),
        support: Support::Interval {
            lo: -radius,
            hi: radius,
        },
        law: Law::KestenMcKay { t },
        lipschitz_bound: Some(1.1 * kesten_mckay_peak(t)),
        moments: MomentSequence::new(vec![0.0, 1.0, 0.0, 1.0 + t]),
    })
}

/// Sup of the (even) density on `[0, 2 sqrt(t)]`: a 10^4-point grid followed
/// by golden-section refinement around the best grid cell.
fn kesten_mckay_peak(t: f64) -> f64 {
    const GRID: usize = 10_000;
    let radius = 2.0 * t.sqrt();
    let step = radius / GRID as f64;
    let (best_i, best) = (0..=GRID)
        .map(|i| (i, kesten_mckay_density(t, i as f64 * step)))
        .fold(
            (0, f64::MIN),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let mut lo = (best_i as f64 - 1.0).max(0.0) * step;
    let mut hi = ((best_i + 1) as f64 * step).min(radius);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut refined = best;
    for _ in 0..80 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        let (f1, f2) = (kesten_mckay_density(t, x1), kesten_mckay_density(t, x2));
        refined = refined.max(f1).max(f2);
        if f1 < f2 {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    refined
}

/// q-Gaussian law, moments only (up to order 8).
pub fn qgaussian_spec(q: f64) -> Result<DistributionSpec> {
    let moments = cumulants::qgaussian_moments(q, 8)?;
    Ok(DistributionSpec {
        name: "qgaussian".into(),
        params: Params::new().with("q", q),
        support: Support::Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        },
        law: Law::MomentsOnly,
        lipschitz_bound: None,
        moments,
    })
}

/// Catalog lookup by name, used by the command line.
pub fn lookup(name: &str, params: &Params) -> Result<DistributionSpec> {
    match name {
        "gaussian" | "normal" => Ok(gaussian()),
        "semicircle" => Ok(semicircle()),
        "point-mass" => Ok(point_mass(params.get("x").unwrap_or(0.0))),
        "poisson" => {
            let n = params.get("n")?;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(Error::ParameterOutOfRange {
                    name: "n",
                    reason: format!("{n} is not a positive integer"),
                });
            }
            standardized_poisson(n as u64)
        }
        "lognormal" => shifted_lognormal(params.get("sigma")?),
        "kesten-mckay" => kesten_mckay(params.get("t")?),
        "qgaussian" => qgaussian_spec(params.get("q")?),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_cdf(0.0), 0.5);
        assert_eq!(gaussian_cdf(f64::INFINITY), 1.0);
        assert_eq!(gaussian_cdf(f64::NEG_INFINITY), 0.0);
        assert!((gaussian_cdf(1.96) - 0.975_002_104_851_780_1).abs() < 1e-15);
    }

    #[test]
    fn semicircle_values() {
        assert_eq!(semicircle_cdf(0.0), 0.5);
        assert_eq!(semicircle_cdf(2.0), 1.0);
        assert_eq!(semicircle_cdf(-3.0), 0.0);
        let expect = 0.5 + 3f64.sqrt() / (4.0 * PI) + 1.0 / 6.0;
        assert!((semicircle_cdf(1.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn poisson_moments_and_atoms() {
        let p = standardized_poisson(1).unwrap();
        assert_eq!(p.moments().values(), &[0.0, 1.0, 1.0, 4.0]);
        let atoms = p.atoms().unwrap();
        assert_eq!(atoms.locations[0], -1.0);
        assert!((atoms.masses[0] - (-1f64).exp()).abs() < 1e-16);
        assert_eq!(atoms.left_tail, 0.0);
        assert!(atoms.right_tail < TRUNCATION_TAIL);
        let p = standardized_poisson(64).unwrap();
        assert_eq!(p.moments().moment(4), Some(3.0 + 1.0 / 64.0));
        assert!(p.atoms().unwrap().left_tail < TRUNCATION_TAIL);
        assert!(p.atoms().unwrap().left_tail > 0.0);
        assert!(standardized_poisson(0).is_err());
    }

    #[test]
    fn compound_poisson() {
        let lambda = 4.0;
        let nu = two_point_jump_moments(lambda);
        let m = compound_poisson_moments(lambda, &nu).unwrap();
        assert!((m.values()[0]).abs() < 1e-15);
        assert!((m.values()[1] - 1.0).abs() < 1e-15);
        assert!((m.values()[3] - (lambda * nu.values()[3] + 3.0)).abs() < 1e-14);
        let zero = compound_poisson_moments(2.0, &MomentSequence::new(vec![0.0; 4])).unwrap();
        assert_eq!(zero.values(), &[0.0; 4]);
        assert!(compound_poisson_moments(0.0, &nu).is_err());
        assert!(compound_poisson_moments(1.0, &MomentSequence::new(vec![0.0; 3])).is_err());
    }

    #[test]
    fn lognormal_kurtosis() {
        for sigma in [0.05, 0.3, 1.0] {
            let s2: f64 = sigma * sigma;
            let direct = (4.0 * s2).exp() + 2.0 * (3.0 * s2).exp() + 3.0 * (2.0 * s2).exp() - 6.0;
            let spec = shifted_lognormal(sigma).unwrap();
            assert!((spec.moments().values()[3] - 3.0 - direct).abs() < 1e-12 * direct.max(1.0));
        }
        assert!(lognormal_excess_kurtosis(1e-6) < 1e-10);
        assert!(shifted_lognormal(0.0).is_err());
    }

    #[test]
    fn kesten_mckay_reduces_to_semicircle() {
        let km = kesten_mckay(1.0).unwrap();
        for x in [-1.9, -1.0, 0.0, 0.3, 1.7] {
            assert!((km.cdf(x).unwrap() - semicircle_cdf(x)).abs() < 1e-12);
            assert!((km.density(x).unwrap() - semicircle_density(x)).abs() < 1e-15);
        }
        assert!(kesten_mckay(0.5).is_err());
        assert!(kesten_mckay(0.4).is_err());
    }

    #[test]
    fn moments_only_has_no_cdf() {
        let q = qgaussian_spec(0.3).unwrap();
        assert!(!q.has_cdf());
        assert_eq!(q.cdf(0.0), Err(Error::MissingCdf("qgaussian".into())));
        assert!((q.moments().values()[3] - 2.3).abs() < 1e-15);
        assert_eq!(
            qgaussian_spec(0.0).unwrap().moments(),
            semicircle().moments()
        );
        assert_eq!(qgaussian_spec(1.0).unwrap().moments(), gaussian().moments());
    }

    #[test]
    fn atomic_merges_and_sorts() {
        let d = atomic("x", Params::new(), &[(1.0, 0.25), (-1.0, 0.5), (1.0, 0.25)]).unwrap();
        let atoms = d.atoms().unwrap();
        assert_eq!(atoms.locations, vec![-1.0, 1.0]);
        assert_eq!(atoms.masses, vec![0.5, 0.5]);
        assert_eq!(d.cdf(-1.0).unwrap(), 0.5);
        assert_eq!(d.cdf(-1.0 - 1e-12).unwrap(), 0.0);
        assert_eq!(d.moments().values(), &[0.0, 1.0, 0.0, 1.0]);
        assert!(atomic("x", Params::new(), &[]).is_err());
        assert!(atomic("x", Params::new(), &[(0.0, -1.0)]).is_err());
    }

    #[test]
    fn params_parse() {
        let p: Params = "n=4, sigma=0.1".parse().unwrap();
        assert_eq!(p.get("n"), Ok(4.0));
        assert_eq!(p.get("sigma"), Ok(0.1));
        assert!(p.get("t").is_err());
        assert!("n".parse::<Params>().is_err());
        assert!("n=abc".parse::<Params>().is_err());
        assert_eq!(p.to_string(), "n=4;sigma=0.1");
    }

    #[test]
    fn lookup_names() {
        let p = Params::new()
            .with("n", 4.0)
            .with("t", 2.0)
            .with("sigma", 0.1)
            .with("q", 0.5);
        for name in [
            "gaussian",
            "semicircle",
            "poisson",
            "kesten-mckay",
            "lognormal",
            "qgaussian",
            "point-mass",
        ] {
            assert!(lookup(name, &p).is_ok(), "{name}");
        }
        assert!(lookup("cauchy", &p).is_err());
        assert!(lookup("poisson", &Params::new().with("n", 2.5)).is_err());
    }
}
