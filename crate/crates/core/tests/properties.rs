use ap_powers::counting::{
    count_poly_in_ap, count_powers_in_ap, count_powers_in_ap_with, Algorithm, CountOptions,
    CountReport, Progression,
};
use ap_powers::kernel::{divisor_count, divisor_pairs, factorize, ikth_root_ceil, is_kth_power};
use ap_powers::modroots::{kth_roots_mod, ResidueSet};
use ap_powers::poly::Poly;
use ap_powers::theorem::{extract_witness, theorem_bound, SplitCase};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn brute(k: u32, prog: &Progression) -> (BigInt, BigInt) {
    let n: i64 = prog.n().try_into().unwrap();
    let (mut t, mut v) = (BigInt::zero(), BigInt::zero());
    for i in 1..=n {
        if let Some(r) = is_kth_power(&prog.term(&i.into()), k) {
            v += 1;
            t += if k.is_multiple_of(2) && !r.is_zero() {
                2
            } else {
                1
            };
        }
    }
    (t, v)
}

fn engines(k: u32, prog: &Progression) -> (CountReport, CountReport) {
    let opts = |algorithm| CountOptions {
        algorithm,
        with_solutions: true,
        ..CountOptions::default()
    };
    (
        count_powers_in_ap_with(k, prog, &opts(Algorithm::IntervalWalk)).unwrap(),
        count_powers_in_ap_with(k, prog, &opts(Algorithm::ResidueStride)).unwrap(),
    )
}

proptest! {
    #[test]
    fn engines_agree_on_wide_offsets(k in 2u32..=6, q in 1i64..=5000, a in -1_000_000_000_000i64..=1_000_000_000_000, n in 1i64..=3000) {
        let prog = Progression::from_i64(a, q, n).unwrap();
        let (walk, stride) = engines(k, &prog);
        prop_assert_eq!(&walk, &stride);
        let (t, v) = brute(k, &prog);
        prop_assert_eq!(walk.count_t, t);
        prop_assert_eq!(walk.count_values, v);
    }

    #[test]
    fn engines_agree_on_offsets_near_perfect_powers(k in 2u32..=5, r in 1i64..=200_000, q in 1i64..=1000, back in 0i64..=50, n in 1i64..=500) {
        let base = BigInt::from(r).pow(k);
        let prog = Progression::new(base - BigInt::from(back * q), q.into(), n.into()).unwrap();
        let (walk, stride) = engines(k, &prog);
        prop_assert_eq!(&walk, &stride);
        let (t, v) = brute(k, &prog);
        prop_assert_eq!(&walk.count_t, &t);
        prop_assert_eq!(walk.count_values, v);
        if (1..=n).contains(&back) {
            prop_assert!(t >= BigInt::one());
        }
    }

    #[test]
    fn count_is_monotone_in_length(k in 2u32..=4, q in 1i64..=300, a in -300i64..=300, n1 in 1i64..=800, extra in 0i64..=800) {
        let short = count_powers_in_ap(k, &Progression::from_i64(a, q, n1).unwrap(), false).unwrap();
        let long = count_powers_in_ap(k, &Progression::from_i64(a, q, n1 + extra).unwrap(), false).unwrap();
        prop_assert!(short.count_t <= long.count_t);
        prop_assert!(short.count_values <= long.count_values);
    }

    #[test]
    fn bound_holds_for_random_cells(k in 1u32..=5, q in 1i64..=100_000, a in -1_000_000i64..=1_000_000, n in 1i64..=20_000) {
        let prog = Progression::from_i64(a, q, n).unwrap();
        let c = count_powers_in_ap(k, &prog, false).unwrap();
        prop_assert!(c.count_t <= theorem_bound(k, &q.into(), &n.into()).unwrap());
    }

    #[test]
    fn bound_is_monotone(k in 1u32..=6, q1 in 1u64..=5000, q2 in 1u64..=5000, n1 in 1u64..=100_000, n2 in 1u64..=100_000) {
        let (q1, q2) = (BigInt::from(q1), BigInt::from(q2));
        let (lo_q, hi_q) = if divisor_count(&q1).unwrap() <= divisor_count(&q2).unwrap() { (q1, q2) } else { (q2, q1) };
        let (lo_n, hi_n) = (BigInt::from(n1.min(n2)), BigInt::from(n1.max(n2)));
        prop_assert!(theorem_bound(k, &lo_q, &lo_n).unwrap() <= theorem_bound(k, &hi_q, &lo_n).unwrap());
        prop_assert!(theorem_bound(k, &lo_q, &lo_n).unwrap() <= theorem_bound(k, &lo_q, &hi_n).unwrap());
    }

    #[test]
    fn witnesses_for_random_polynomials(
        coeffs in prop::collection::vec(-20i64..=20, 2..=4),
        lead in prop_oneof![1i64..=5, -5i64..=-1],
        q in 1i64..=60,
        a in -60i64..=60,
        n in 1i64..=400,
    ) {
        let mut c = coeffs;
        c.push(lead);
        let p = Poly::from_i64s(&c);
        let d = p.degree().unwrap() as u32;
        let prog = Progression::from_i64(a, q, n).unwrap();
        let report = count_poly_in_ap(&p, &prog, &BigInt::from(1_000_000), true).unwrap();
        let sols = report.solutions.unwrap();
        prop_assume!(sols.len() <= 40);
        let nb = BigInt::from(n);
        let root = ikth_root_ceil(&nb, d + 1).unwrap();
        for s in &sols {
            for s0 in &sols {
                if s.t == s0.t {
                    continue;
                }
                let w = extract_witness(&p, &prog, &s.t, &s0.t).unwrap();
                let step = &s.t - &s0.t;
                let quotient = (p.eval(&s.t) - p.eval(&s0.t)) / &step;
                prop_assert_eq!(&w.q1 * &w.q2, BigInt::from(q));
                prop_assert!(step.is_multiple_of(&w.q1));
                prop_assert_eq!(&w.quotient_value, &quotient);
                prop_assert!(quotient.is_multiple_of(&w.q2));
                let gap = (&s.i - &s0.i).abs();
                prop_assert_eq!(&w.n1 * &w.n2, gap.clone());
                prop_assert!(gap < nb);
                // Both forms of the case split: the additive statement and the
                // exact integer split used to label the witness.
                let n1_pos = std::cmp::max(w.n1.clone(), BigInt::one());
                prop_assert!(w.n1 <= root || w.n2 <= &nb / &n1_pos);
                let n1d = num_traits::pow(w.n1.clone(), d as usize);
                let n2d = num_traits::pow(w.n2.clone(), d as usize);
                match w.case {
                    SplitCase::ShortStep => prop_assert!(n1d <= nb),
                    SplitCase::SmallQuotient => {
                        prop_assert!(n1d > nb);
                        prop_assert!(n2d <= num_traits::pow(nb.clone(), d as usize - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn roots_are_roots(a in 0u64..1_000_000_000, k in 2u32..=7, m in 1u64..=1_000_000_000) {
        let (ab, mb) = (BigInt::from(a), BigInt::from(m));
        match kth_roots_mod(&ab, k, &mb) {
            Ok(set) => {
                prop_assert_eq!(set.modulus(), &mb);
                prop_assert!(set.residues().windows(2).all(|w| w[0] < w[1]));
                for r in set.residues() {
                    prop_assert!(r >= &BigInt::zero() && r < &mb);
                    prop_assert_eq!(r.modpow(&k.into(), &mb), ab.mod_floor(&mb));
                }
            }
            Err(ap_powers::Error::PrimePowerCap { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn roots_multiply_over_coprime_moduli(a in 0u64..100_000, k in 2u32..=5, m1 in 1u64..=3000, m2 in 1u64..=3000) {
        prop_assume!(m1.gcd(&m2) == 1);
        let count = |m: u64| kth_roots_mod(&a.into(), k, &m.into()).unwrap().len();
        prop_assert_eq!(count(m1 * m2), count(m1) * count(m2));
    }

    #[test]
    fn divisor_pairs_cover_divisors(q in 1u64..=u64::MAX) {
        let qb = BigInt::from(q);
        let pairs = divisor_pairs(&qb).unwrap();
        prop_assert_eq!(BigInt::from(pairs.len()), divisor_count(&qb).unwrap());
        for (d, e) in &pairs {
            prop_assert_eq!(d * e, qb.clone());
        }
        prop_assert_eq!(factorize(&qb).unwrap().value(), qb);
    }
}

#[test]
fn json_round_trips() {
    let prog = Progression::from_i64(-23, 24, 5).unwrap();
    let json = serde_json::to_string(&prog).unwrap();
    assert_eq!(json, r#"{"a":"-23","q":"24","N":"5"}"#);
    assert_eq!(serde_json::from_str::<Progression>(&json).unwrap(), prog);
    assert!(serde_json::from_str::<Progression>(r#"{"a":"0","q":"0","N":"5"}"#).is_err());
    assert!(serde_json::from_str::<Progression>(r#"{"a":"0","q":"1","N":"-1"}"#).is_err());

    let report = count_powers_in_ap(2, &prog, true).unwrap();
    let back: CountReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);

    let set = kth_roots_mod(&1.into(), 2, &24.into()).unwrap();
    let back: ResidueSet = serde_json::from_str(&serde_json::to_string(&set).unwrap()).unwrap();
    assert_eq!(back, set);

    let p: Poly = "1,0,2".parse().unwrap();
    assert_eq!(
        serde_json::to_string(&p).unwrap(),
        r#"{"coefficients":["1","0","2"]}"#
    );
    let back: Poly = serde_json::from_str(r#"{"coefficients":["1","0","2"]}"#).unwrap();
    assert_eq!(back, p);
    assert!(serde_json::from_str::<Poly>(r#"{"coefficients":["1","0","2","0"]}"#).is_err());
}

#[test]
fn huge_values_stay_exact() {
    let a: BigInt = BigInt::from(10u32).pow(60) + 1;
    let prog = Progression::new(a.clone(), BigInt::from(3), BigInt::from(1000)).unwrap();
    let (walk, stride) = engines(3, &prog);
    assert_eq!(walk, stride);
    assert_eq!(
        (walk.count_t.clone(), walk.count_values.clone()),
        brute(3, &prog)
    );
    let r: BigInt = BigInt::from(10u32).pow(20) + 5;
    let prog = Progression::new(r.pow(2) - 7, BigInt::from(7), BigInt::from(10)).unwrap();
    let (walk, _) = engines(2, &prog);
    assert_eq!(walk.count_values, BigInt::one());
    assert_eq!(walk.count_t, BigInt::from(2));
}
