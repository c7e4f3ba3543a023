use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use dirspec::construct::digits::{build_digit_family, tor_exponents, FamilyKind};
use dirspec::construct::{
    assemble_vector, build_sequence, cantor_lift, l_closed_form, l_general, verify_lift_digits, ConstructedVector,
    ConstructionPlan, Mode,
};
use dirspec::dims;
use dirspec::numkit::{cf_expand, dist_to_nearest_int, prop_uv_check, rat, CfInput, Real};
use dirspec::par::Exec;
use dirspec::phi::{certify, phi_eval, sampled_check, solve_pair_lemuren, ApproxFn, Property};
use dirspec::transfer;
use dirspec::verify::{psi, psi_sweep, Norm, VerifyOptions};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn exact_vec(parts: &[(i64, i64)]) -> ConstructedVector {
    ConstructedVector::from_rationals(parts.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
}

fn rational_vec(m: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..=1000).prop_flat_map(|d| (0..d, Just(d))), m)
}

/// `min_{q <= Q} max_i ||q x_i||` straight from the definition.
fn psi_oracle(x: &[BigRational], q_max: u64) -> (BigRational, u64) {
    let mut best: Option<(BigRational, u64)> = None;
    for q in 1..=q_max {
        let qb = BigRational::from_integer(q.into());
        let v = x.iter().map(|c| dist_to_nearest_int(&(c * &qb))).max().unwrap();
        if best.as_ref().map(|b| v < b.0).unwrap_or(true) {
            best = Some((v, q));
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn uv_fraction_is_reduced(u in -1000i64..1000, v in 1i64..=1000, l in 1i64..=1000, bm in 2u32..=6, m in 2u32..=6) {
        prop_assume!(u.gcd(&v) == 1);
        let r = prop_uv_check(&big(u), &big(v), &big(l), bm, m).unwrap();
        prop_assert!(r.reduced);
        prop_assert_eq!(r.value, BigRational::new(r.numerator.clone(), r.denominator.clone()));
    }
}

proptest! {
    #[test]
    fn distance_is_integer_periodic(n in -10_000i64..10_000, d in 1i64..500, k in -1000i64..1000) {
        let x = ratio(n, d);
        prop_assert_eq!(dist_to_nearest_int(&x), dist_to_nearest_int(&(&x + BigRational::from_integer(big(k)))));
    }

    #[test]
    fn convergents_follow_recurrence(n in -100_000i64..100_000, d in 1i64..10_000) {
        let x = ratio(n, d);
        let e = cf_expand(&CfInput::Rational(x.clone()), 64).unwrap();
        let (mut r1, mut s1, mut r2, mut s2) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
        for (a, (r, s)) in e.partial_quotients.iter().zip(&e.convergents) {
            prop_assert_eq!(r, &(a * &r1 + &r2));
            prop_assert_eq!(s, &(a * &s1 + &s2));
            r2 = std::mem::replace(&mut r1, r.clone());
            s2 = std::mem::replace(&mut s1, s.clone());
        }
        let (r, s) = e.convergents.last().unwrap();
        prop_assert_eq!(BigRational::new(r.clone(), s.clone()), x);
    }

    #[test]
    fn pair_solutions_verify(num in 1i64..=100, m in 1u32..=4, b in 2u32..=6, a_min in 1i64..=6) {
        let c = ratio(num, 100);
        let s = solve_pair_lemuren(&c, m, b, a_min).unwrap();
        prop_assert!(s.verified);
        // b^-A < c b^(-B/m) <= b^(1/m) b^-A, cleared of roots
        let (a, bb) = (s.a.to_u32().unwrap(), s.b.to_u32().unwrap());
        let base = BigRational::from_integer(big(b as i64));
        let lhs = num_traits::pow(base.clone(), bb as usize);
        let cm = num_traits::pow(c, m as usize) * num_traits::pow(base.clone(), (m * a) as usize);
        prop_assert!(lhs < cm && cm <= lhs * base);
    }

    #[test]
    fn power_phi_is_non_increasing(num in 1i64..=100, tau_den in 1i64..=6, t in 1u64..1_000_000) {
        let f = ApproxFn::power(Real::rat(num, 100), Real::rat(1, tau_den)).unwrap();
        let a = phi_eval(&f, &BigRational::from_integer(t.into()), 128).unwrap();
        let b = phi_eval(&f, &BigRational::from_integer((t + 1).into()), 128).unwrap();
        prop_assert!(b.hi <= a.hi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificates_agree_with_samples(num in 1i64..=99, m in 2u32..=4) {
        let f = ApproxFn::power(Real::rat(num, 100), Real::rat(1, m as i64)).unwrap();
        // 1000 geometric points 2^(k/20)
        let ts: Vec<BigRational> = (20..1020).map(|k| {
            let x = 2f64.powf(k as f64 / 20.0);
            BigRational::from_float(x.round()).unwrap()
        }).collect();
        for p in [Property::D1, Property::D2, Property::D4 { gamma: Real::rat(1, m as i64) }] {
            let cert = certify(&f, &p, m).unwrap();
            let (ok, why) = sampled_check(&f, &p, m, &ts).unwrap();
            prop_assert!(!cert.verdict.passed() || ok, "{:?}: {}", p, why);
        }
    }
}

fn check_sequence(m: usize, mode: Mode, c: BigRational, depth: usize) {
    let f = ApproxFn::power(Real::Rat(c), Real::rat(1, m as i64)).unwrap();
    let s = build_sequence(&ConstructionPlan::new(m, f, mode.clone(), depth)).unwrap();
    assert!(s.all_certified());
    for w in s.a.windows(2) {
        assert!(w[1].is_multiple_of(&w[0]), "{} does not divide {}", w[0], w[1]);
    }
    assert!(s.next_a.is_multiple_of(s.a.last().unwrap()));
    for n in 1..=depth {
        let first = s.a_at(m * n + 1).unwrap();
        match mode {
            Mode::General => assert!(&s.l[n - 1] <= first),
            _ => assert!(&s.l[n - 1] > first),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sequences_divide_and_bound_l(num in 50i64..=99, depth in 1usize..=2, which in 0usize..3) {
        let c = ratio(num, 100);
        match which {
            0 => check_sequence(2, Mode::M2, c, depth),
            1 => check_sequence(2, Mode::Uniform, c, depth),
            _ => check_sequence(3, Mode::General, c, 1),
        }
    }

    #[test]
    fn l_closed_form_matches_scan(num in 1i64..=100, m in 3u32..=5, d in 250i64..1_000_000, k in 1i64..=1000) {
        let c = ratio(num, 100);
        let f = ApproxFn::power(Real::Rat(c.clone()), Real::rat(1, m as i64)).unwrap();
        let d = big(d);
        // aim for L near k, well inside the 4d + 4 scan cap
        let target = num_traits::pow(c.clone(), m as usize) * BigRational::from_integer(d.pow(m)) / ratio(k, 1);
        let prev = target.floor().to_integer().max(BigInt::one());
        let closed = l_closed_form(&c, m, &d, &prev);
        prop_assert_eq!(l_general(&f, &d, &prev).unwrap(), closed);
    }
}

#[test]
fn components_grow_by_one_term_per_level() {
    for (m, mode, tau) in [(2usize, Mode::M2, 2i64), (3, Mode::General, 3)] {
        let f = ApproxFn::power(Real::rat(9, 10), Real::rat(1, tau)).unwrap();
        let s = build_sequence(&ConstructionPlan::new(m, f, mode, 2)).unwrap();
        let v1 = assemble_vector(&s, 1).unwrap();
        let v2 = assemble_vector(&s, 2).unwrap();
        for i in 1..=m {
            let step = BigRational::new(BigInt::one(), s.a_at(2 * m + i).unwrap().clone());
            assert!(v2.components[i - 1] > v1.components[i - 1]);
            assert_eq!(&v2.components[i - 1] - &v1.components[i - 1], step);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_members_keep_fixed_digits(seed in any::<u64>(), star in any::<bool>()) {
        let c = tor_exponents(3, &rat(4, 1), 1, 3).unwrap();
        let kind = if star {
            FamilyKind::Q1Star { gamma1: rat(16, 5), gamma2: rat(4, 1) }
        } else {
            FamilyKind::Q { gamma1: rat(16, 5), gamma2: rat(4, 1) }
        };
        let fam = build_digit_family(&kind, &c, 3).unwrap();
        let s = fam.sample(seed).unwrap();
        for i in 1..=3 {
            for j in 1..=s[i - 1].len() as u64 {
                if let Some(d) = fam.fixed_digit(i, j) {
                    prop_assert_eq!(s[i - 1].digit(j as usize), d as u32);
                }
            }
        }
    }
}

fn cantor_theta() -> &'static ConstructedVector {
    static V: OnceLock<ConstructedVector> = OnceLock::new();
    V.get_or_init(|| {
        let f = ApproxFn::power(Real::rat(9, 10), Real::rat(1, 2)).unwrap();
        let s = build_sequence(&ConstructionPlan::new(2, f, Mode::Cantor { b: 3 }, 1)).unwrap();
        assemble_vector(&s, 1).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cantor_lift_digits_stay_in_w(w1 in prop::sample::select(vec![(0u32, 1u32), (0, 2), (1, 2)]),
                                    w2 in prop::sample::select(vec![(0u32, 1u32), (0, 2), (1, 2)])) {
        let xi = cantor_lift(cantor_theta(), 3, &[w1, w2]).unwrap();
        prop_assert_eq!(verify_lift_digits(&xi, 10_000).unwrap(), None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn psi_matches_definition(x in rational_vec(2), q in 1u64..300) {
        let v = exact_vec(&x);
        let comps = v.components.clone();
        let (val, arg) = psi_oracle(&comps, q);
        let r = psi(&v, q, &Norm::Max, &opts()).unwrap();
        prop_assert_eq!(&r.upper, &val);
        prop_assert_eq!(&r.lower, &val);
        prop_assert_eq!(r.argmin_q, arg);
    }

    #[test]
    fn psi_is_non_increasing(x in rational_vec(3), qmax in 2u64..3000) {
        let v = exact_vec(&x);
        let pts = psi_sweep(&v, qmax, &Norm::Max, &opts()).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].q > w[0].q);
            prop_assert!(w[1].upper <= w[0].upper);
        }
        let a = psi(&v, qmax / 2 + 1, &Norm::Max, &opts()).unwrap();
        let b = psi(&v, qmax, &Norm::Max, &opts()).unwrap();
        prop_assert!(b.upper <= a.upper);
    }

    #[test]
    fn partition_does_not_matter(x in rational_vec(2), q in 1u64..5000, chunk in 1u64..700) {
        let v = exact_vec(&x);
        let base = psi(&v, q, &Norm::Max, &opts()).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let o = VerifyOptions { exec, chunk, ..opts() };
            prop_assert_eq!(&psi(&v, q, &Norm::Max, &o).unwrap(), &base);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dirichlet_bound_holds(m in 2usize..=3, x in rational_vec(3), n in 2u64..=20) {
        let v = exact_vec(&x[..m]);
        let q = n.pow(m as u32);
        let r = psi(&v, q, &Norm::Max, &opts()).unwrap();
        prop_assert!(r.upper <= ratio(1, n as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_sandwich(x in rational_vec(2), q in 1u64..2000, w in prop::collection::vec((1i64..=8, 1i64..=8), 2), p in 1u32..=3, pick in 0usize..2) {
        let v = exact_vec(&x);
        let norm = if pick == 0 { Norm::P(p) } else { Norm::WeightedMax(w.iter().map(|&(a, b)| ratio(a, b)).collect()) };
        let mx = psi(&v, q, &Norm::Max, &opts()).unwrap().upper;
        let r = psi(&v, q, &norm, &opts()).unwrap();
        let chi = norm.chi(2);
        let om = norm.omega(2) * BigRational::from_integer(big(2));
        prop_assert!(&chi * &mx <= r.upper);
        prop_assert!(r.lower <= om * mx);
    }
}

#[test]
fn checkpoint_lower_bound_law() {
    for (m, mode, tau) in [(2usize, Mode::M2, 2i64), (3, Mode::General, 3)] {
        let f = ApproxFn::power(Real::rat(9, 10), Real::rat(1, tau)).unwrap();
        let s = build_sequence(&ConstructionPlan::new(m, f, mode.clone(), 1)).unwrap();
        let v = assemble_vector(&s, 1).unwrap();
        let q = v.checkpoint(1).unwrap().to_u64().unwrap();
        let r = psi(&v, q, &Norm::Max, &opts()).unwrap();
        let main = match mode {
            Mode::General => BigRational::new(BigInt::one(), s.a_at(m + 1).unwrap().pow(s.big_m[0])),
            _ => BigRational::new(BigInt::one(), s.l[0].clone()),
        };
        let err = BigRational::from_integer(big(2 * q as i64)) * &v.tail_bound;
        assert!(r.lower >= &main - &err, "m = {m}: {} vs {}", r.lower, main);
    }
}

#[test]
fn hdd_optimum_matches_grid() {
    let mut prev = BigRational::zero();
    for m in 2..=64usize {
        let r = dims::hdd_bound(m).unwrap();
        let g = r.gamma2_enclosure.mid_f64();
        let step = (8.0 * (m as f64 + 1.0) - m as f64 / (m as f64 - 1.0)) / (dims::GRID_POINTS + 1) as f64;
        assert!((r.grid_argmax - g).abs() <= step, "m = {m}");
        assert!(r.residual.is_zero());
        // increasing towards 1
        assert!(r.bound_enclosure.lo > prev && r.bound_enclosure.hi < BigRational::one());
        prev = r.bound_enclosure.hi.clone();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ohlele_lower_terms(m in 2usize..=8, g1n in 11i64..=50, extra in 0i64..=50) {
        let g1 = ratio(g1n, 10);
        let g2 = &g1 + ratio(extra, 10);
        let r = dims::ohlele_bounds(m, &g1, &g2).unwrap();
        let mm = BigRational::from_integer(big(m as i64));
        let first = BigRational::from_integer(big(2)) * (&g2 - &g1) / (&g1 * (&g2 * &mm - BigRational::one()));
        prop_assert!(r.eq01 >= first);
        prop_assert!(!r.eq02.is_negative());
    }

    #[test]
    fn falconer_matches_closed_form(m in 2usize..=4, g1n in 11i64..=40, extra in 1i64..=40) {
        let g1 = ratio(g1n, 10);
        let g2 = &g1 + ratio(extra, 10);
        let r = dims::falconer_lower_bound(&dims::gs0_levels(m, &g1, &g2, 40)).unwrap();
        let mm = BigRational::from_integer(big(m as i64));
        let closed = (&g2 - &g1) / (&g1 * (&g2 * &mm - BigRational::one()));
        prop_assert!((r.value.mid_f64() - closed.to_f64().unwrap()).abs() < 1e-3);
    }

    #[test]
    fn fr_chain_is_monotone(m in 2usize..=4, a in 1i64..=99, gap in 1i64..=50) {
        let c1 = ratio(a, 100);
        let c2 = ratio((a + gap).min(100), 100);
        prop_assume!(c1 < c2);
        let x = transfer::fr_chain(m, &c1).unwrap();
        let y = transfer::fr_chain(m, &c2).unwrap();
        prop_assert!(x.omega.hi < y.omega.lo);
        prop_assert!(x.omega.hi < x.c_star.lo && y.omega.hi < y.c_star.lo);
    }

    #[test]
    fn transference_round_trip(m in 1usize..=4, c in 1i64..=100, ct in 1i64..=100, x in 2i64..10_000) {
        let r = transfer::round_trip(m, &ratio(c, 100), &ratio(ct, 100), &ratio(x, 1)).unwrap();
        prop_assert!(r.consistent);
    }
}
