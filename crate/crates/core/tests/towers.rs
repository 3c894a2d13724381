use kll_core::dyadic::Decision;
use kll_core::poly::Q;
use kll_core::towers;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rhs_f64(n: f64) -> f64 {
    2.0 * n - 4.0 * (((n + 2.0) / 3.0).log2() + 1.0)
}

#[test]
fn bound_holds_for_every_start_in_range() {
    for n1 in 50..=200u64 {
        let r = towers::tower_lower_bound(n1, 30).unwrap();
        assert!(r.all_hold, "n1 = {n1}");
        let mut n = n1 as f64;
        for l in &r.levels {
            let exact: f64 = l.n.to_string().parse().unwrap();
            assert!((exact - n).abs() / n.max(1.0) < 1e-9 || (exact - n).abs() <= 1.0, "n1 = {n1}, level {}", l.i);
            assert!(exact >= 2f64.powi(l.i as i32) * (1.0 + 24.0 / l.i as f64) * (1.0 - 1e-12));
            n = rhs_f64(exact).ceil();
        }
    }
}

#[test]
fn starts_below_fifty_are_rejected() {
    assert!(towers::tower_lower_bound(49, 5).is_err());
}

#[test]
fn auxiliary_inequality_range() {
    assert!((1..=200).all(towers::auxiliary_inequality));
}

#[test]
fn rhs_is_increasing() {
    assert_eq!(towers::rhs_monotone_on(4..=20_000), None);
}

proptest! {
    /// Any sequence obeying the recurrence from n1 >= 50 stays above the bound.
    #[test]
    fn recurrence_implies_bound(n1 in 50u64..5000, slack in proptest::collection::vec(0u64..50, 1..20)) {
        let mut ns = vec![n1];
        for s in &slack {
            let rhs = towers::recurrence_rhs(&BigInt::from(*ns.last().unwrap()));
            let next: u64 = rhs.hi.ceil().to_integer().try_into().unwrap();
            ns.push(next + s);
        }
        for step in towers::recurrence_check(&ns) {
            prop_assert_eq!(step.holds, Decision::True);
        }
        for (i, &n) in ns.iter().enumerate() {
            prop_assert!(Q::from_integer(n.into()) >= towers::level_bound(i + 1), "level {}", i + 1);
        }
    }

    /// The exact right-hand side agrees with floating point.
    #[test]
    fn rhs_enclosure_matches_float(n in 4u64..1_000_000) {
        let e = towers::recurrence_rhs(&BigInt::from(n));
        let f = rhs_f64(n as f64);
        let lo = kll_core::poly::to_f64(&e.lo);
        let hi = kll_core::poly::to_f64(&e.hi);
        prop_assert!(lo <= f + 1e-6 && f - 1e-6 <= hi);
        prop_assert!(hi - lo < 1e-9);
    }
}
