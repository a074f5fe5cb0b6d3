use std::collections::BTreeMap;

use fml_core::cumulants::{
    self, coefficient_table, cumulants_from_moments, moments_from_cumulants, CumulantSequence,
    Kind, MomentSequence,
};
use fml_core::partitions::Ceilings;
use proptest::prelude::*;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn multiplicities(sizes: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &s in sizes {
        *m.entry(s).or_insert(0) += 1;
    }
    m
}

/// Set partitions of type `sizes`: n! / prod(k!^{m_k} m_k!).
fn classical_count(n: usize, sizes: &[usize]) -> u64 {
    let denom: u64 = multiplicities(sizes)
        .iter()
        .map(|(&k, &m)| factorial(k).pow(m as u32) * factorial(m))
        .product();
    factorial(n) / denom
}

/// Non-crossing partitions of type `sizes` (Kreweras): n! / ((n - r + 1)! prod m_k!).
fn noncrossing_count(n: usize, sizes: &[usize]) -> u64 {
    let r = sizes.len();
    let denom: u64 = multiplicities(sizes)
        .values()
        .map(|&m| factorial(m))
        .product();
    factorial(n) / (factorial(n - r + 1) * denom)
}

#[test]
fn coefficient_tables_match_closed_forms() {
    let ceil = Ceilings::default();
    for n in 1..=9 {
        for kind in [Kind::Classical, Kind::Free] {
            let table = coefficient_table(kind, n, &ceil).unwrap();
            for term in &table.terms {
                let expect = match kind {
                    Kind::Classical => classical_count(n, &term.sizes),
                    Kind::Free => noncrossing_count(n, &term.sizes),
                };
                assert_eq!(term.count, expect, "{kind:?} n={n} sizes={:?}", term.sizes);
            }
        }
    }
}

#[test]
fn free_and_classical_agree_through_three() {
    let c = [0.4, -0.7, 1.3];
    for n in 1..=3 {
        let a = moments_from_cumulants(&CumulantSequence::new(Kind::Classical, c[..n].to_vec()))
            .unwrap();
        let b =
            moments_from_cumulants(&CumulantSequence::new(Kind::Free, c[..n].to_vec())).unwrap();
        assert_eq!(a, b);
    }
    let c4 = [0.4, -0.7, 1.3, 0.2];
    let a = moments_from_cumulants(&CumulantSequence::new(Kind::Classical, c4.to_vec())).unwrap();
    let b = moments_from_cumulants(&CumulantSequence::new(Kind::Free, c4.to_vec())).unwrap();
    // classical m4 - free m4 = c2^2
    assert!((a.values()[3] - b.values()[3] - 0.49).abs() < 1e-14);
}

#[test]
fn qgaussian_endpoints() {
    let gauss: Vec<f64> = (1..=12)
        .map(|j| {
            if j % 2 == 1 {
                0.0
            } else {
                (1..j).step_by(2).product::<usize>() as f64
            }
        })
        .collect();
    assert_eq!(
        cumulants::qgaussian_moments(1.0, 12).unwrap().values(),
        gauss.as_slice()
    );
    let catalan = [1.0, 2.0, 5.0, 14.0, 42.0, 132.0];
    let semi = cumulants::qgaussian_moments(0.0, 12).unwrap();
    for k in 1..=6 {
        assert_eq!(semi.values()[2 * k - 1], catalan[k - 1]);
    }
}

/// Moment `n` of `X + Y` for independent `X`, `Y` by binomial expansion.
fn independent_sum_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let moment = |m: &[f64], k: usize| if k == 0 { 1.0 } else { m[k - 1] };
    (1..=x.len())
        .map(|n| {
            let mut binom = 1.0;
            let mut total = 0.0;
            for k in 0..=n {
                total += binom * moment(x, k) * moment(y, n - k);
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            total
        })
        .collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn roundtrip(values in proptest::collection::vec(-2.0f64..2.0, 1..=8), free in any::<bool>()) {
        let kind = if free { Kind::Free } else { Kind::Classical };
        let c = CumulantSequence::new(kind, values.clone());
        let m = moments_from_cumulants(&c).unwrap();
        let back = cumulants_from_moments(&m, kind).unwrap();
        // error is relative to the magnitude of the partition sums involved,
        // i.e. the moments built from |c|
        let abs_c = CumulantSequence::new(kind, values.iter().map(|v| v.abs()).collect());
        let scale = moments_from_cumulants(&abs_c).unwrap();
        for ((a, b), s) in back.values().iter().zip(&values).zip(scale.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * s.max(1.0), "{} vs {} (scale {})", a, b, s);
        }
    }

    #[test]
    fn classical_cumulants_add_under_independence(
        a in proptest::collection::vec(-2.0f64..2.0, 6),
        b in proptest::collection::vec(-2.0f64..2.0, 6),
    ) {
        let ca = CumulantSequence::new(Kind::Classical, a);
        let cb = CumulantSequence::new(Kind::Classical, b);
        let sum = moments_from_cumulants(&ca.convolve(&cb)).unwrap();
        let ma = moments_from_cumulants(&ca).unwrap();
        let mb = moments_from_cumulants(&cb).unwrap();
        let oracle = independent_sum_moments(ma.values(), mb.values());
        for (x, y) in sum.values().iter().zip(&oracle) {
            prop_assert!(rel_close(*x, *y, 1e-11), "{} vs {}", x, y);
        }
    }

    #[test]
    fn dilation_scales_cumulants_by_powers(
        values in proptest::collection::vec(-2.0f64..2.0, 1..=6),
        s in 0.1f64..3.0,
    ) {
        let c = CumulantSequence::new(Kind::Free, values.clone());
        let m = moments_from_cumulants(&c).unwrap();
        let scaled = cumulants_from_moments(&cumulants::dilate_moments(&m, s), Kind::Free).unwrap();
        for (j, (a, b)) in scaled.values().iter().zip(&values).enumerate() {
            prop_assert!(rel_close(*a, b * s.powi(j as i32 + 1), 1e-11));
        }
    }
}

#[test]
fn roundtrip_on_raw_moment_input() {
    let m = MomentSequence::new(vec![0.3, 1.2, -0.4, 3.3, 0.1, 20.0]);
    for kind in [Kind::Classical, Kind::Free] {
        let c = cumulants_from_moments(&m, kind).unwrap();
        let back = moments_from_cumulants(&c).unwrap();
        for (a, b) in back.values().iter().zip(m.values()) {
            assert!(rel_close(*a, *b, 1e-13));
        }
    }
}
