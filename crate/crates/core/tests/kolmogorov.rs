use std::f64::consts::PI;

use fml_core::distributions::{self, gaussian, gaussian_cdf, semicircle, semicircle_cdf};
use fml_core::kolmogorov::{self, Method, DEFAULT_TOLERANCE};

/// Dense-grid scan of `|F - Phi|` for the standardized Poisson(n), n a perfect
/// square so that every atom sits on the 1e-4 grid. The pmf comes from the
/// ratio recurrence, independent of the catalog's log-gamma evaluation.
fn poisson_grid_oracle(n: u64) -> f64 {
    let root = (n as f64).sqrt() as i64;
    assert_eq!((root * root) as u64, n);
    let per_atom = 10_000 / root; // grid cells between atoms
    let kmax = n as i64 + 60 * root + 60;
    let mut pmf = vec![(-(n as f64)).exp()];
    for k in 1..=kmax {
        let prev = *pmf.last().unwrap();
        pmf.push(prev * n as f64 / k as f64);
    }
    let first = -(n as i64) * per_atom; // grid index of k = 0
    let last = first + kmax * per_atom;
    let mut best: f64 = 0.0;
    let mut cdf = 0.0;
    let mut k = 0usize;
    for i in (first - 10_000)..=(last + 10_000) {
        let x = i as f64 * 1e-4;
        let phi = gaussian_cdf(x);
        let left = cdf;
        while k < pmf.len() && first + k as i64 * per_atom <= i {
            cdf += pmf[k];
            k += 1;
        }
        best = best.max((left - phi).abs()).max((cdf - phi).abs());
    }
    best
}

#[test]
fn poisson_one_matches_grid_oracle() {
    let spec = distributions::standardized_poisson(1).unwrap();
    let d = kolmogorov::distance_atomic_vs_continuous(&spec, &gaussian()).unwrap();
    let oracle = poisson_grid_oracle(1);
    assert_eq!(d.method, Method::AtomScan);
    assert!((d.value - oracle).abs() < 1e-10, "{} vs {oracle}", d.value);
    assert!(d.error_bound < 1e-8);
    // the supremum is the left limit at the atom x = 0 (k = 1)
    assert_eq!(d.witness_x, 0.0);
}

fn kesten_mckay_closed_form(t: f64, x: f64) -> f64 {
    let r = 2.0 * t.sqrt();
    if x <= -r {
        return 0.0;
    }
    if x >= r {
        return 1.0;
    }
    let a = 4.0 * t * (1.0 - t);
    let b = (1.0 - a).sqrt();
    let th = (x / r).asin();
    let g = |th: f64| (2.0 * t / PI) * (th / a + (a - 1.0) / (a * b) * (b * th.tan()).atan());
    g(th) + (2.0 * t / PI) * (PI / 2.0) * (1.0 / a + (a - 1.0) / (a * b))
}

#[test]
fn kesten_mckay_three_matches_grid_oracle() {
    let t = 3.0;
    let km = distributions::kesten_mckay(t).unwrap();
    let d = kolmogorov::distance_continuous(&km, &semicircle(), DEFAULT_TOLERANCE).unwrap();
    let r = 2.0 * t.sqrt();
    let step = 1e-5;
    let steps = (2.0 * r / step) as i64;
    let grid = (0..=steps)
        .map(|i| {
            let x = -r + i as f64 * step;
            (kesten_mckay_closed_form(t, x) - semicircle_cdf(x)).abs()
        })
        .fold(0.0f64, f64::max);
    let slack = km.lipschitz_bound().unwrap() + semicircle().lipschitz_bound().unwrap();
    let grid_certificate = slack * step / 2.0;
    assert!(d.error_bound <= DEFAULT_TOLERANCE);
    assert!(
        (d.value - grid).abs() <= d.error_bound + grid_certificate + 1e-9,
        "{} vs {grid}",
        d.value
    );
}

#[test]
fn triangle_inequality_on_catalog_triples() {
    let laws = [
        gaussian(),
        semicircle(),
        distributions::kesten_mckay(2.0).unwrap(),
        distributions::shifted_lognormal(0.3).unwrap(),
    ];
    let d = |i: usize, j: usize| kolmogorov::distance(&laws[i], &laws[j], 1e-7).unwrap();
    for i in 0..laws.len() {
        for j in 0..laws.len() {
            for k in 0..laws.len() {
                if i == j || j == k || i == k {
                    continue;
                }
                let (a, b, c) = (d(i, k), d(i, j), d(j, k));
                assert!(
                    a.value <= b.value + c.value + a.error_bound + b.error_bound + c.error_bound,
                    "{i} {j} {k}"
                );
            }
        }
    }
}

#[test]
fn grid_refine_symmetry() {
    let km = distributions::kesten_mckay(0.75).unwrap();
    let a = kolmogorov::distance_continuous(&km, &semicircle(), DEFAULT_TOLERANCE).unwrap();
    let b = kolmogorov::distance_continuous(&semicircle(), &km, DEFAULT_TOLERANCE).unwrap();
    assert!((a.value - b.value).abs() <= 2.0 * a.error_bound.max(b.error_bound));
}

#[test]
fn poisson_distance_decreases_with_n() {
    let mut prev: Option<kolmogorov::DistanceResult> = None;
    for e in 0..=10 {
        let n = 1u64 << e;
        let spec = distributions::standardized_poisson(n).unwrap();
        let d = kolmogorov::distance_atomic_vs_continuous(&spec, &gaussian()).unwrap();
        if let Some(p) = prev {
            assert!(
                d.value <= p.value + d.error_bound + p.error_bound,
                "n = {n}"
            );
        }
        prev = Some(d);
    }
}
