//! Sample-complexity bound formulas and the helpers they lean on.
//!
//! Capped logarithms keep every bound finite and at least 1 near the
//! origin. The classic consistent-learner bound is exposed both as an
//! error bound in `m` and, inverted by doubling plus binary search, as a
//! sample size in `(eps, delta)`. The big-O-shaped bounds take an explicit
//! caller-supplied constant `c0` (default 1) so no invented constants
//! masquerade as exact ones; the recursive-majority bound and the lower
//! bound carry their published constants.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("{name} must lie in (0, 1), got {value}")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error("{name} below 1e-300 would underflow, got {value}")]
    Underflow { name: &'static str, value: f64 },
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

/// Validated parameter bundle for the bound calculators.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs {
    pub eps: f64,
    pub delta: f64,
    pub d: u32,
}

impl BoundInputs {
    pub fn new(eps: f64, delta: f64, d: u32) -> Result<Self, BoundsError> {
        for (name, value) in [("eps", eps), ("delta", delta)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(BoundsError::OutOfUnitInterval { name, value });
            }
            if value < 1e-300 {
                return Err(BoundsError::Underflow { name, value });
            }
        }
        if d == 0 {
            return Err(BoundsError::ZeroDimension);
        }
        Ok(BoundInputs { eps, delta, d })
    }
}

/// Natural log floored at 1: `ln(max(z, e))`.
pub fn cap_log(z: f64) -> f64 {
    z.max(std::f64::consts::E).ln()
}

/// Base-2 log floored at 1: `log2(max(z, 2))`.
pub fn cap_log2(z: f64) -> f64 {
    z.max(2.0).log2()
}

/// K-times iterated base-2 logarithm, floored at 1 after every step.
pub fn iterated_log(k: u32, x: f64) -> f64 {
    let mut v = x.max(1.0);
    for _ in 0..k {
        v = v.log2().max(1.0);
    }
    v
}

/// Smallest `K` with `iterated_log(K, x) <= 1`.
pub fn log_star(x: f64) -> u32 {
    let mut v = x.max(1.0);
    let mut k = 0;
    while v > 1.0 {
        v = v.log2().max(1.0);
        k += 1;
    }
    k
}

/// Known sample-size floor: `max((d-1)/(32 eps), ((1-eps)/eps) ln(1/delta))`.
///
/// The two branches are established for `eps <= 1/8, delta <= 1/100`;
/// see [`lower_bound_in_range`].
pub fn lower_bound(eps: f64, delta: f64, d: u32) -> f64 {
    let first = (d as f64 - 1.0) / (32.0 * eps);
    let second = ((1.0 - eps) / eps) * (1.0 / delta).ln();
    first.max(second)
}

/// Whether `(eps, delta)` sits inside the range the floor is proved for.
pub fn lower_bound_in_range(eps: f64, delta: f64) -> bool {
    eps > 0.0 && eps <= 0.125 && delta > 0.0 && delta <= 0.01
}

/// Error bound for any classifier consistent with `m` labeled draws:
/// `(2/m) (d Log2(2em/d) + Log2(2/delta))`.
pub fn vc_consistency_bound(m: u64, delta: f64, d: u32) -> f64 {
    let m = m as f64;
    let d = d as f64;
    (2.0 / m) * (d * cap_log2(2.0 * std::f64::consts::E * m / d) + cap_log2(2.0 / delta))
}

/// Smallest `m` with `vc_consistency_bound(m, delta, d) <= eps`.
///
/// The bound exceeds 1 for every `m <= 2d` and is nonincreasing in `m`
/// once `m >= d/2`, so for `eps < 1` the predicate flips exactly once and
/// doubling plus binary search is sound.
pub fn invert_vc_bound(eps: f64, delta: f64, d: u32) -> u64 {
    debug_assert!(eps > 0.0 && eps < 1.0);
    let ok = |m: u64| vc_consistency_bound(m, delta, d) <= eps;
    let mut hi = 1u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2; // bound(lo) > eps, or lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Shape-only one-inclusion-style bound: `c0 (d/eps) Log(1/delta)`.
pub fn hlw_upper(eps: f64, delta: f64, d: u32, c0: f64) -> f64 {
    c0 * (d as f64 / eps) * cap_log(1.0 / delta)
}

/// Shape-only split-majority bound:
/// `c0 (2^{2K} sqrt(K) / eps) (d log^{(K)}(1/eps) + K + Log(1/delta))`.
pub fn simon_bound(eps: f64, delta: f64, d: u32, k: u32, c0: f64) -> f64 {
    let lead = 2f64.powi(2 * k as i32) * (k as f64).sqrt() / eps;
    c0 * lead * (d as f64 * iterated_log(k, 1.0 / eps) + k as f64 + cap_log(1.0 / delta))
}

/// The `K` minimizing [`simon_bound`] up to constants:
/// `max(log*(1/eps) - log*((1/d) Log(1/delta)) + 1, 1)`.
pub fn simon_opt_k(eps: f64, delta: f64, d: u32) -> u32 {
    let lead = log_star(1.0 / eps) as i64;
    let trail = log_star(cap_log(1.0 / delta) / d as f64) as i64;
    (lead - trail + 1).max(1) as u32
}

/// Sample size sufficient for the recursive-majority learner:
/// `floor((1800/eps) (d + ln(18/delta)))`.
pub fn hanneke_sample_bound(eps: f64, delta: f64, d: u32) -> u64 {
    ((1800.0 / eps) * (d as f64 + (18.0 / delta).ln())).floor() as u64
}

/// Error guarantee of the recursive-majority learner after `m` draws:
/// `(1800/(m+1)) (d + ln(18/delta))`.
pub fn theorem_error_bound(m: u64, delta: f64, d: u32) -> f64 {
    (1800.0 / (m as f64 + 1.0)) * (d as f64 + (18.0 / delta).ln())
}

/// Log-factor absorption inequality:
/// `a ln(c1 (c2 + b/a)) <= a ln(c1 (c2 + e)) + b/e` for
/// `a, b, c1 >= 1` and `c2 >= 0`. Holds on the whole domain; returns the
/// pointwise comparison so sweeps can falsify the implementation.
pub fn log_factor_check(a: f64, b: f64, c1: f64, c2: f64) -> bool {
    debug_assert!(a >= 1.0 && b >= 1.0 && c1 >= 1.0 && c2 >= 0.0);
    let lhs = a * (c1 * (c2 + b / a)).ln();
    let rhs = a * (c1 * (c2 + std::f64::consts::E)).ln() + b / std::f64::consts::E;
    lhs <= rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const REL_TOL: f64 = 1e-9;

    fn assert_rel_eq(actual: f64, expected: f64) {
        let scale = expected.abs().max(1e-12);
        assert!(
            ((actual - expected) / scale).abs() <= REL_TOL,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn capped_logs_floor_at_one() {
        assert_rel_eq(cap_log(1.0), 1.0);
        assert_rel_eq(cap_log2(2.0), 1.0);
        assert_rel_eq(cap_log(100.0), 4.605170185988092);
        assert_rel_eq(cap_log(0.0), 1.0);
        assert_rel_eq(cap_log2(0.5), 1.0);
    }

    #[test]
    fn iterated_log_examples() {
        assert_rel_eq(iterated_log(0, 0.3), 1.0);
        assert_rel_eq(iterated_log(1, 100.0), 6.643856189774724);
        assert_rel_eq(iterated_log(2, 65536.0), 4.0);
    }

    #[test]
    fn log_star_examples() {
        assert_eq!(log_star(1.0), 0);
        assert_eq!(log_star(0.1), 0);
        assert_eq!(log_star(65536.0), 4);
        assert_eq!(log_star(2.0), 1);
    }

    #[test]
    fn log_star_matches_naive_iteration() {
        for k in 0..=64u32 {
            let x = 2f64.powi(k as i32);
            let mut v = x.max(1.0);
            let mut naive = 0;
            while v > 1.0 {
                v = v.log2().max(1.0);
                naive += 1;
            }
            assert_eq!(log_star(x), naive, "x = 2^{k}");
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_rel_eq(lower_bound(0.01, 0.01, 11), 455.9118484128211);
        assert_rel_eq(lower_bound(0.01, 0.01, 10000), 9999.0 / 0.32);
        // d = 1 kills the dimension branch entirely.
        assert_rel_eq(
            lower_bound(0.05, 0.1, 1),
            (0.95 / 0.05) * (10.0f64).ln(),
        );
        assert!(lower_bound_in_range(0.01, 0.01));
        assert!(!lower_bound_in_range(0.2, 0.01));
    }

    #[test]
    fn vc_consistency_bound_golden() {
        assert_rel_eq(vc_consistency_bound(100, 0.1, 1), 0.26816958651102096);
        // Vacuous regime still evaluates cleanly.
        assert_rel_eq(vc_consistency_bound(1, 1.0 - 1e-15, 1), 6.885390081777927);
    }

    #[test]
    fn vc_consistency_bound_nonincreasing_in_m() {
        // Monotone for all m when d <= 7, and from m >= d/2 in general.
        for d in 1..=6u32 {
            for m in 1..200u64 {
                assert!(
                    vc_consistency_bound(m + 1, 0.1, d) <= vc_consistency_bound(m, 0.1, d),
                    "d={d} m={m}"
                );
            }
        }
        for m in 50..500u64 {
            assert!(vc_consistency_bound(m + 1, 0.05, 100) <= vc_consistency_bound(m, 0.05, 100));
        }
    }

    #[test]
    fn invert_vc_bound_round_trips() {
        let eps = vc_consistency_bound(100, 0.1, 1);
        assert_eq!(invert_vc_bound(eps, 0.1, 1), 100);
        let m_coarse = invert_vc_bound(0.1, 0.1, 2);
        let m_fine = invert_vc_bound(0.05, 0.1, 2);
        assert!(m_fine > m_coarse);
    }

    #[test]
    fn invert_vc_bound_matches_linear_scan() {
        for (eps, delta, d) in [(0.1, 0.1, 2u32), (0.3, 0.2, 1), (0.05, 0.01, 3)] {
            let scan = (1..=100_000u64)
                .find(|&m| vc_consistency_bound(m, delta, d) <= eps)
                .unwrap();
            assert_eq!(invert_vc_bound(eps, delta, d), scan);
        }
    }

    #[test]
    fn hlw_upper_examples() {
        assert_rel_eq(hlw_upper(0.1, (-1.0f64).exp(), 2, 1.0), 20.0);
        assert_rel_eq(
            hlw_upper(0.1, 0.5, 2, 2.0),
            2.0 * hlw_upper(0.1, 0.5, 2, 1.0),
        );
        // Both deltas land on the cap.
        assert_rel_eq(
            hlw_upper(0.1, 0.5, 2, 1.0),
            hlw_upper(0.1, (-1.0f64).exp(), 2, 1.0),
        );
    }

    #[test]
    fn simon_bound_golden() {
        assert_rel_eq(simon_bound(0.01, 0.1, 5, 1, 1.0), 14608.746416747068);
    }

    #[test]
    fn simon_opt_k_examples() {
        assert_eq!(simon_opt_k(2f64.powi(-16), 0.5, 10), 5);
        assert_eq!(simon_opt_k(0.9, 0.9, 1), 1);
        for eps in [0.5, 0.1, 1e-3, 1e-9] {
            assert!(simon_opt_k(eps, 0.5, 1) >= 1);
        }
    }

    #[test]
    fn hanneke_bound_golden_and_round_trip() {
        assert_eq!(hanneke_sample_bound(0.1, 0.1, 1), 111473);
        assert_rel_eq(
            theorem_error_bound(1_000_000 - 1, 0.05, 2),
            0.01419498725661028,
        );
        for eps in [0.2, 0.05, 0.01] {
            for delta in [0.2, 0.01] {
                for d in [1u32, 4, 50] {
                    let m = hanneke_sample_bound(eps, delta, d);
                    assert!(theorem_error_bound(m, delta, d) <= eps);
                }
            }
        }
    }

    #[test]
    fn bounds_monotone_on_grid() {
        let epss = [0.2, 0.1, 0.05, 0.01];
        let deltas = [0.2, 0.1, 0.01];
        let ds = [1u32, 2, 5, 20];
        // Tighter eps, tighter delta, or larger d never shrinks a bound.
        for w in epss.windows(2) {
            for &delta in &deltas {
                for &d in &ds {
                    assert!(hanneke_sample_bound(w[1], delta, d) >= hanneke_sample_bound(w[0], delta, d));
                    assert!(invert_vc_bound(w[1], delta, d) >= invert_vc_bound(w[0], delta, d));
                    assert!(hlw_upper(w[1], delta, d, 1.0) >= hlw_upper(w[0], delta, d, 1.0));
                    assert!(simon_bound(w[1], delta, d, 2, 1.0) >= simon_bound(w[0], delta, d, 2, 1.0));
                    assert!(lower_bound(w[1], delta, d) >= lower_bound(w[0], delta, d));
                }
            }
        }
        for w in deltas.windows(2) {
            for &eps in &epss {
                for &d in &ds {
                    assert!(hanneke_sample_bound(eps, w[1], d) >= hanneke_sample_bound(eps, w[0], d));
                    assert!(invert_vc_bound(eps, w[1], d) >= invert_vc_bound(eps, w[0], d));
                    assert!(hlw_upper(eps, w[1], d, 1.0) >= hlw_upper(eps, w[0], d, 1.0));
                    assert!(lower_bound(eps, w[1], d) >= lower_bound(eps, w[0], d));
                }
            }
        }
        for w in ds.windows(2) {
            for &eps in &epss {
                for &delta in &deltas {
                    assert!(hanneke_sample_bound(eps, delta, w[1]) >= hanneke_sample_bound(eps, delta, w[0]));
                    assert!(invert_vc_bound(eps, delta, w[1]) >= invert_vc_bound(eps, delta, w[0]));
                    assert!(hlw_upper(eps, delta, w[1], 1.0) >= hlw_upper(eps, delta, w[0], 1.0));
                    assert!(simon_bound(eps, delta, w[1], 2, 1.0) >= simon_bound(eps, delta, w[0], 2, 1.0));
                }
            }
        }
    }

    #[test]
    fn upper_to_lower_ratio_stays_bounded() {
        for d in [1u32, 10, 100, 1000] {
            for eps in [1e-6, 1e-4, 1e-2, 0.125] {
                for delta in [1e-6, 1e-4, 1e-2] {
                    let ratio = hanneke_sample_bound(eps, delta, d) as f64
                        / lower_bound(eps, delta, d);
                    assert!(ratio <= 6e4, "d={d} eps={eps} delta={delta}: {ratio}");
                }
            }
        }
    }

    #[test]
    fn log_factor_check_examples() {
        assert!(log_factor_check(1.0, 1.0, 1.0, 0.0));
        assert!(log_factor_check(1.0, 10.0, 1.0, 0.0));
    }

    #[test]
    fn bound_inputs_validation() {
        assert!(BoundInputs::new(0.1, 0.1, 1).is_ok());
        assert!(matches!(
            BoundInputs::new(0.0, 0.1, 1),
            Err(BoundsError::OutOfUnitInterval { name: "eps", .. })
        ));
        assert!(matches!(
            BoundInputs::new(0.1, 1.0, 1),
            Err(BoundsError::OutOfUnitInterval { name: "delta", .. })
        ));
        assert!(matches!(
            BoundInputs::new(0.1, 1e-310, 1),
            Err(BoundsError::Underflow { name: "delta", .. })
        ));
        assert!(matches!(
            BoundInputs::new(0.1, 0.1, 0),
            Err(BoundsError::ZeroDimension)
        ));
    }

    proptest! {
        #[test]
        fn log_factor_inequality_holds(
            a in 1.0f64..1e3,
            b in 1.0f64..1e3,
            c1 in 1.0f64..1e2,
            c2 in 0.0f64..1e2,
        ) {
            prop_assert!(log_factor_check(a, b, c1, c2));
        }

        #[test]
        fn capped_logs_never_below_one(z in 0.0f64..1e12) {
            prop_assert!(cap_log(z) >= 1.0);
            prop_assert!(cap_log2(z) >= 1.0);
        }
    }
}
