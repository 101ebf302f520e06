mod common;

use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;
use stci_core::semigroup::{theta_shift, to_positive};
use stci_core::{
    build_system_with_pins, enumerate_decompositions, normalize_decomposition, proposition_theta,
    select_decomposition, to_signed, CurveSpec, DecompositionPair, PositiveDecomposition,
    SelectionPolicy, SignedDecomposition,
};

/// Every `(a, b, c)` with `c*m(i-1) + b*m2 + a*m1 = mi`, found by scanning the
/// whole box rather than solving for `a`.
fn positive_oracle(curve: &CurveSpec, level: usize) -> BTreeSet<(u64, u64, u64)> {
    let (m1, m2, prev, target) = (curve.m(1), curve.m(2), curve.m(level - 1), curve.m(level));
    let b_max = if level == 3 { 0 } else { prev - 1 };
    let mut out = BTreeSet::new();
    for a in 0..prev {
        for b in 0..=b_max {
            for c in 0..=target / prev {
                if c * prev + b * m2 + a * m1 == target {
                    out.insert((a, b, c));
                }
            }
        }
    }
    out
}

fn signed_oracle(curve: &CurveSpec, level: usize) -> BTreeSet<(u64, u64, u64)> {
    let (m1, m2, prev, target) = (curve.m(1), curve.m(2), curve.m(level - 1), curve.m(level));
    let b_max = if level == 3 { 0 } else { prev - 1 };
    let mut out = BTreeSet::new();
    for alpha in 0..prev {
        for beta in 0..=b_max {
            let rhs = target + beta * m2 + alpha * m1;
            if rhs % prev == 0 {
                out.insert((alpha, beta, rhs / prev));
            }
        }
    }
    out
}

#[test]
fn enumeration_is_complete_for_small_curves() {
    let curves = common::all_curves(5, 30);
    assert!(curves.len() > 10_000, "only {} curves", curves.len());
    for curve in &curves {
        for level in curve.levels() {
            let pairs = enumerate_decompositions(curve, level).unwrap();
            let got: BTreeSet<_> = pairs
                .iter()
                .map(|p| (p.positive.a, p.positive.b, p.positive.c))
                .collect();
            assert_eq!(got.len(), pairs.len(), "{curve} level {level}: duplicates");
            assert_eq!(got, positive_oracle(curve, level), "{curve} level {level}");

            let signed = signed_oracle(curve, level);
            for p in &pairs {
                let s = p.signed;
                assert!(signed.contains(&(s.alpha, s.beta, s.gamma)), "{curve}: {s}");
            }
            // signed forms missing from the enumeration have no positive partner
            let listed: BTreeSet<_> = pairs
                .iter()
                .map(|p| (p.signed.alpha, p.signed.beta, p.signed.gamma))
                .collect();
            for &(alpha, beta, gamma) in signed.difference(&listed) {
                let s = SignedDecomposition::new(level, alpha, beta, gamma);
                assert!(to_positive(&s, curve).is_err(), "{curve}: {s} was skipped");
            }

            let keys: Vec<_> = pairs
                .iter()
                .map(|p| (p.signed.beta, p.signed.alpha, p.signed.gamma))
                .collect();
            assert!(keys.windows(2).all(|w| w[0] < w[1]), "{curve}: order");
        }
    }
}

#[test]
fn all_representations_of_five() {
    let curve = CurveSpec::new(&[1, 2, 3, 5]).unwrap();
    let pairs = enumerate_decompositions(&curve, 4).unwrap();
    let has = |p: (u64, u64, u64), s: (u64, u64, u64)| {
        pairs.iter().any(|x| {
            x.positive == PositiveDecomposition::new(4, p.0, p.1, p.2)
                && x.signed == SignedDecomposition::new(4, s.0, s.1, s.2)
        })
    };
    assert!(has((0, 1, 1), (0, 2, 3)));
    assert!(has((2, 0, 1), (1, 0, 2)));
    let chosen = select_decomposition(&curve, 4, SelectionPolicy::Strict).unwrap();
    assert_eq!(chosen.pair.signed, SignedDecomposition::new(4, 1, 0, 2));
}

#[test]
fn selection_picks_first_admissible_in_order() {
    for curve in common::all_curves(4, 24) {
        for level in curve.levels() {
            let pairs = enumerate_decompositions(&curve, level).unwrap();
            let first = pairs.iter().find(|p| p.sufficient_conditions_met);
            match (
                select_decomposition(&curve, level, SelectionPolicy::Strict),
                first,
            ) {
                (Ok(sel), Some(p)) => assert_eq!(sel.pair, *p),
                (Err(_), None) => {}
                (got, want) => panic!("{curve} level {level}: {got:?} vs {want:?}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conversions_round_trip(
        m1 in 1u64..12,
        gap in 1u64..12,
        x in 0u64..12,
        y in 0u64..12,
        z in 0u64..12,
        w in 0u64..6,
    ) {
        let m2 = m1 + gap;
        prop_assume!(m1.gcd(&m2) == 1);
        let m3 = m2 + 1 + x * m1 + y * m2 + (x + y == 0) as u64 * m1;
        prop_assume!(m3 > m2);
        let m4 = z * m3 + w * m2 + (z * m3 + w * m2 <= m3) as u64 * (m3 + m1);
        let exps = [m1, m2, m3, m4];
        let Ok(curve) = CurveSpec::new(&exps) else {
            return Ok(());
        };
        for level in curve.levels() {
            for pair in enumerate_decompositions(&curve, level).unwrap() {
                prop_assert_eq!(to_signed(&pair.positive, &curve), pair.signed);
                prop_assert_eq!(to_positive(&pair.signed, &curve).unwrap(), pair.positive);
                prop_assert_eq!(pair.positive.value(&curve), pair.signed.value(&curve));
                prop_assert_eq!(
                    DecompositionPair::from_signed(pair.signed, &curve).unwrap(),
                    pair
                );
            }
        }
    }

    #[test]
    fn normalization_reaches_a_listed_pair(
        big_a in 0u64..40,
        big_b in 0u64..40,
        big_c in 0u64..10,
    ) {
        // the raw coefficients define m4 over the generators 3, 5, 8
        let target = big_c * 8 + big_b * 5 + big_a * 3;
        prop_assume!(target > 8);
        let curve = CurveSpec::new(&[3, 5, 8, target]).unwrap();
        let p = normalize_decomposition(big_a, big_b, big_c, &curve, 4).unwrap();
        let listed = enumerate_decompositions(&curve, 4).unwrap();
        prop_assert!(listed.iter().any(|x| x.positive == p));
    }
}

/// Curves `(m1, ..., m(i-1), mi)` meeting the hypotheses of the theta
/// construction at their top level.
fn theta_curve() -> impl Strategy<Value = CurveSpec> {
    (2u64..40, 1u64..40, 0u64..200, prop::bool::ANY).prop_filter_map(
        "hypotheses",
        |(m1, gap, extra, four)| {
            let m2 = m1 + gap;
            if m1.gcd(&m2) != 1 {
                return None;
            }
            let mut exps = vec![m1, m2];
            if four {
                // a third generator in the semigroup, coprime to m1
                let m3 = m2 + m1 * (1 + extra % 5) + m2 * (extra % 3);
                if m3.gcd(&m1) != 1 {
                    return None;
                }
                exps.push(m3);
            }
            let prev = *exps.last().unwrap();
            let bound = (prev * m1).max(prev * (prev - m1));
            let top = bound + extra;
            if top > 10_000 || top <= prev {
                return None;
            }
            exps.push(top);
            CurveSpec::new(&exps).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta_construction_meets_sufficient_conditions(curve in theta_curve()) {
        let level = curve.n();
        let s = proposition_theta(&curve, level).unwrap();
        prop_assert_eq!(s.beta, 0);
        prop_assert!(s.check(&curve).is_ok());
        prop_assert!(s.slack() >= 0, "gamma - alpha - 1 < 0 for {}", curve);
        let pair = DecompositionPair::from_signed(s, &curve).unwrap();
        prop_assert!(pair.sufficient_conditions_met);

        // every admissible (A, B) gives the same (alpha, gamma)
        let prev = curve.m(level - 1) as i128;
        let m1 = curve.m(1) as i128;
        let target = curve.m(level) as i128;
        let base_b = (1..=prev)
            .find(|b| (target + b * m1) % prev == 0)
            .expect("gcd(m(i-1), m1) = 1");
        for shift in 0..5 {
            let b = base_b + shift * prev;
            let a = (target + b * m1) / prev;
            let (alpha, gamma, theta) = theta_shift(curve.m(level - 1), curve.m(1), a, b);
            prop_assert_eq!((alpha, gamma), (s.alpha as i128, s.gamma as i128));
            prop_assert_eq!(theta, -(shift + (base_b == prev) as i128));
        }
    }
}

#[test]
fn theta_pins_build_exact_equations() {
    // small instances, so that the pinned system can be checked symbolically
    let mut built = 0;
    for curve in common::all_curves(4, 60) {
        let level = curve.n();
        let Ok(s) = proposition_theta(&curve, level) else {
            continue;
        };
        let pins = [(level, s)].into_iter().collect();
        let system =
            build_system_with_pins(&curve, SelectionPolicy::AllowDirectPolynomiality, &pins);
        let Ok(system) = system else {
            // lower levels may have no admissible decomposition
            continue;
        };
        let f = system.poly(level - 1);
        let sub = f.substitute_parametric(&curve, level).unwrap();
        assert_eq!(
            sub,
            stci_core::verify::parametric_binomial(curve.m(level), curve.m(level - 1)),
            "{curve}"
        );
        built += 1;
    }
    assert!(built > 100, "only {built} theta systems built");
}
