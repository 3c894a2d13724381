use kll_core::fp::{primes_up_to, FpPoly};
use kll_core::numfield::{NumberField, PrimeIdeal};
use kll_core::poly::{self, q, QPoly, Q};
use kll_core::quatalg::*;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trial_degrees(f: &FpPoly) -> Vec<(usize, usize)> {
    // (degree, multiplicity) of each irreducible factor, by trial division
    let p = f.p;
    let mut f = f.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while 2 * d <= f.degree().unwrap_or(0) {
        for idx in 0..p.pow(d as u32) {
            let mut c = Vec::new();
            let mut k = idx;
            for _ in 0..d {
                c.push(k % p);
                k /= p;
            }
            c.push(1);
            let g = FpPoly::new(p, c);
            let mut m = 0;
            loop {
                let (quo, r) = f.div_rem(&g);
                if !r.is_zero() {
                    break;
                }
                f = quo;
                m += 1;
            }
            if m > 0 {
                out.push((d, m));
            }
        }
        d += 1;
    }
    if let Some(k) = f.degree().filter(|&k| k > 0) {
        out.push((k, 1));
    }
    out.sort();
    out
}

#[test]
fn quintic_prime_above_eleven_by_trial_division() {
    let k = NumberField::new(&[1, 0, -2, -1, 0, 1]).unwrap();
    let ps = k.split_prime(11).unwrap();
    let mut got: Vec<(usize, usize)> = ps.iter().map(|p| (p.f, p.e)).collect();
    got.sort();
    assert_eq!(got, trial_degrees(&k.reduce_mod(11)));
    assert_eq!(ps.iter().filter(|p| p.f == 2).count(), 1);
}

#[test]
fn splitting_matches_oracle_and_fundamental_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 60 {
        let d = rng.gen_range(2..=5);
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-6..=6)).collect();
        c.push(1);
        let Ok(k) = NumberField::new(&c) else { continue };
        for &p in &[2u64, 3, 5, 7] {
            match k.split_prime(p) {
                Ok(ps) => {
                    let s: usize = ps.iter().map(|x| x.e * x.f).sum();
                    assert_eq!(s, d);
                    let mut got: Vec<(usize, usize)> = ps.iter().map(|x| (x.f, x.e)).collect();
                    got.sort();
                    assert_eq!(got, trial_degrees(&k.reduce_mod(p)), "{c:?} at {p}");
                }
                Err(e) => {
                    let disc = k.poly_discriminant();
                    assert!((disc % BigInt::from(p * p)).is_zero(), "{e}");
                }
            }
        }
        checked += 1;
    }
}

/// Counts sign changes of f on a rational grid of step 2^-12 across the
/// Cauchy bound, evaluating 4096^d f(i/4096) in integers.
fn grid_root_count(c: &[i64], bound: i64) -> usize {
    let steps: i128 = 4096;
    let d = c.len() - 1;
    // homogenized: sum c_j i^j steps^(d-j)
    let hom = |i: i128| -> i128 {
        let mut acc: i128 = 0;
        for (j, &cj) in c.iter().enumerate() {
            acc += cj as i128 * i.pow(j as u32) * steps.pow((d - j) as u32);
        }
        acc
    };
    let lim = (bound as i128 + 1) * steps;
    let mut count = 0;
    let mut last = hom(-lim).signum();
    let mut i = -lim + 1;
    while i <= lim {
        let v = hom(i).signum();
        if v == 0 {
            count += 1;
            i += 1;
            last = hom(i).signum();
            i += 1;
            continue;
        }
        if v * last < 0 {
            count += 1;
        }
        last = v;
        i += 1;
    }
    count
}

#[test]
fn sturm_count_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 100 {
        let d = rng.gen_range(1..=6);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-5..=5)).collect();
        if c[d] == 0 {
            c[d] = 1;
        }
        let f = QPoly::from_ints(&c);
        if !f.is_squarefree() {
            continue;
        }
        let b: i64 = f.cauchy_bound().ceil().to_integer().try_into().unwrap();
        assert_eq!(poly::count_real_roots(&f), grid_root_count(&c, b), "{c:?}");
        done += 1;
    }
}

#[test]
fn signature_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let d = rng.gen_range(1..=6);
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
        c.push(1);
        if let Ok(k) = NumberField::new(&c) {
            let (r1, r2) = k.signature();
            assert_eq!(r1 + 2 * r2, d);
            assert_eq!(r1 % 2, d % 2);
        }
    }
}

fn legendre(a: i64, p: i64) -> i64 {
    let r = kll_core::fp::pow_mod(a.rem_euclid(p) as u64, ((p - 1) / 2) as u64, p as u64);
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Closed-form Hilbert symbol over Q_p for nonzero integers.
fn hilbert_formula(a: i64, b: i64, p: i64) -> i64 {
    let split = |mut x: i64| {
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        (v, x)
    };
    let (al, u) = split(a);
    let (be, v) = split(b);
    if p == 2 {
        let eps = |x: i64| ((x.rem_euclid(8) - 1) / 2) % 2;
        let omega = |x: i64| ((x * x - 1) / 8).rem_euclid(2);
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let eps = (p - 1) / 2 % 2;
        let mut s = if (al * be * eps) % 2 == 0 { 1 } else { -1 };
        if be % 2 == 1 {
            s *= legendre(u, p);
        }
        if al % 2 == 1 {
            s *= legendre(v, p);
        }
        s
    }
}

#[test]
fn hilbert_search_matches_closed_form() {
    for &p in &[2i64, 3, 5, 7, 11, 13] {
        for a in -30i64..=30 {
            for b in -30i64..=30 {
                if a == 0 || b == 0 {
                    continue;
                }
                let want = if hilbert_formula(a, b, p) == 1 { LocalStatus::Split } else { LocalStatus::Ramified };
                assert_eq!(hilbert_search(&q(a), &q(b), p as u64), want, "({a},{b})_{p}");
            }
        }
    }
}

#[test]
fn unramified_away_from_2ab() {
    for a in 1i64..=12 {
        for b in -12i64..=12 {
            if b == 0 {
                continue;
            }
            for p in primes_up_to(40) {
                let p = p as i64;
                if p == 2 || (a * b) % p == 0 {
                    continue;
                }
                assert_eq!(hilbert_search(&q(a), &q(b), p as u64), LocalStatus::Split);
                assert_eq!(hilbert_search(&q(-a), &q(b), p as u64), LocalStatus::Split);
            }
        }
    }
}

#[test]
fn ramification_parity_for_random_symbols() {
    let small = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let mut pick = || {
            let mut n = Q::from_integer(if rng.gen_bool(0.5) { 1.into() } else { (-1).into() });
            for _ in 0..rng.gen_range(0..3) {
                n *= q(small[rng.gen_range(0..small.len())]);
            }
            if rng.gen_bool(0.3) {
                n /= q(small[rng.gen_range(0..small.len())]);
            }
            n
        };
        let (a, b) = (pick(), pick());
        let mut count = usize::from(hilbert_symbol_qp(&a, &b, Place::Infinite) == LocalStatus::Ramified);
        for p in primes_up_to(200) {
            if hilbert_symbol_qp(&a, &b, Place::Finite(p)) == LocalStatus::Ramified {
                count += 1;
            }
        }
        for p in primes_up_to(500).into_iter().filter(|&p| p > 200).step_by(7) {
            assert_eq!(hilbert_search(&a, &b, p), LocalStatus::Split);
        }
        assert_eq!(count % 2, 0, "({a},{b})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn square_class_invariance(a in -40i64..40, b in -40i64..40, t in 1i64..9, s in 1i64..9, pi in 0usize..5) {
        prop_assume!(a != 0 && b != 0);
        let p = [2u64, 3, 5, 7, 11][pi];
        let t2 = q(t * t) / q(s);
        let s2 = q(s * s);
        let base = hilbert_search(&q(a), &q(b), p);
        prop_assert_eq!(base, hilbert_search(&(q(a) * &t2 / q(s)), &(q(b) * &s2), p));
        prop_assert_eq!(base, hilbert_search(&(q(a) * q(4)), &q(b), p));
    }
}

#[test]
fn tau_norm_resultant_matches_field_norm() {
    for n in 3..=30u64 {
        let t = tau_n(n).unwrap();
        assert_eq!(t.tau.norm(), tau_n_norm(n).unwrap(), "n={n}");
    }
}

#[test]
fn tau_norm_prime_power_shape() {
    for &(n, p) in &[(3u64, 3u64), (4, 2), (5, 5), (7, 7), (8, 2), (9, 3)] {
        let mut v = tau_n_norm(n).unwrap().abs().to_integer();
        assert!(!v.is_zero());
        while (&v % BigInt::from(p)).is_zero() {
            v /= BigInt::from(p);
        }
        assert_eq!(v, BigInt::from(1), "n={n}");
    }
    for n in [12u64, 15, 20] {
        assert_eq!(tau_n_norm(n).unwrap().abs(), q(1));
    }
}

#[test]
fn dihedral_reports() {
    let r = dihedral_ramification_analysis(4).unwrap();
    assert_eq!(r.case, DihedralCase::Dyadic);
    assert_eq!(r.candidate_primes, vec![2]);
    let r = dihedral_ramification_analysis(15).unwrap();
    assert!(r.tau_is_unit && r.ram_f_empty);
    let r = dihedral_ramification_analysis(6).unwrap();
    assert_eq!(r.candidate_primes, vec![3]);
    assert_eq!(r.prime_power_consistent, Some(false));
}

#[test]
fn clozel_cases() {
    let quintic = NumberField::new(&[1, 0, -2, -1, 0, 1]).unwrap();
    let p121: Vec<PrimeIdeal> = quintic.split_prime(11).unwrap().into_iter().filter(|p| p.f == 2).collect();
    assert!(matches!(clozel_hypothesis(&quintic, &p121), ClozelStatus::Violated { .. }));
    assert_eq!(clozel_hypothesis(&quintic, &[]), ClozelStatus::Satisfied);
    let gauss = NumberField::new(&[1, 0, 1]).unwrap();
    // 3 is inert in Q(i); the spec's e=f=1 prime is modelled synthetically
    let p3 = PrimeIdeal::synthetic(3, 1, 1);
    assert_eq!(clozel_hypothesis(&gauss, &[p3]), ClozelStatus::Satisfied);
}
