//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the allowed budget. Runs without the libtest harness so the lines
//! are always visible.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stci_core::equations::find_valid_split;
use stci_core::semigroup::semigroup_witness;
use stci_core::verify::{
    brute_force_locus_equality, check_ideal_membership, check_infinity_locus,
    check_substitution_identity, parametric_binomial,
};
use stci_core::{
    build_f1, build_fi, build_general_splice, build_system, build_system_with_pins,
    enumerate_decompositions, full_verify, proposition_theta, select_decomposition, CurveSpec,
    DecompositionPair, EquationSystem, FiniteFieldConfig, Monomial, PrimeField, SelectionPolicy,
    SignedDecomposition, SparsePolynomial, SpliceSpec, Term, Verdict,
};

type Outcome = Result<String, String>;

/// `(id, name, time limit in seconds, check)`.
type Criterion = (&'static str, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn curve(e: &[u64]) -> CurveSpec {
    CurveSpec::new(e).expect("valid reference curve")
}

/// Runs `cli` arguments through the library entry point and returns stdout.
fn cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stci").chain(args.iter().copied());
    let code = stci_cli::run(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!(
            "stci {} exited {code}: {}",
            args.join(" "),
            String::from_utf8_lossy(&err)
        ));
    }
    Ok(String::from_utf8(out).expect("utf-8 output"))
}

/// `F_j = ...` lines of a `build` text listing, keyed by `j`.
fn equation_lines(text: &str) -> BTreeMap<usize, String> {
    text.lines()
        .filter_map(|l| {
            let rest = l.strip_prefix('F')?;
            let (j, poly) = rest.split_once(" = ")?;
            Some((j.parse().ok()?, poly.to_string()))
        })
        .collect()
}

/// Polynomial in `x0..x4` from `(coefficient, [e0, e1, e2, e3, e4])`.
fn p4(terms: &[(i64, [u64; 5])]) -> SparsePolynomial {
    SparsePolynomial::from_pairs(5, terms.iter().map(|(c, e)| (*c, e.to_vec())))
}

/// The three families of `F3` for `C(1,2,3,m4)`, written out term by term.
fn family_f3(m4: u64) -> SparsePolynomial {
    let c = m4 / 3;
    match m4 % 3 {
        0 => p4(&[
            (1, [0, 0, 0, 3 * c, 0]),
            (-3, [c - 1, 0, 0, 2 * c, 1]),
            (3, [2 * c - 2, 0, 0, c, 2]),
            (-1, [3 * c - 3, 0, 0, 0, 3]),
        ]),
        1 => p4(&[
            (1, [0, 0, 0, 3 * c + 1, 0]),
            (-3, [c - 2, 2, 0, 2 * c, 1]),
            (3, [2 * c - 4, 4, 0, c - 1, 2]),
            (-1, [3 * c - 2, 0, 0, 0, 3]),
        ]),
        _ => p4(&[
            (1, [0, 0, 0, 3 * c + 2, 0]),
            (-3, [c - 1, 0, 2, 2 * c, 1]),
            (3, [2 * c - 2, 0, 4, c - 2, 2]),
            (-1, [3 * c - 1, 0, 0, 0, 3]),
        ]),
    }
}

fn criterion_1() -> Outcome {
    let mut cases: Vec<(Vec<u64>, Option<String>, usize, SparsePolynomial)> = vec![
        (
            vec![1, 2, 3],
            None,
            1,
            SparsePolynomial::from_pairs(4, [(1, vec![0, 2, 0, 0]), (-1, vec![1, 0, 1, 0])]),
        ),
        (
            vec![1, 2, 3],
            None,
            2,
            SparsePolynomial::from_pairs(
                4,
                [
                    (1, vec![0, 0, 3, 0]),
                    (-2, vec![0, 1, 1, 1]),
                    (1, vec![1, 0, 0, 2]),
                ],
            ),
        ),
        (
            vec![1, 2, 3, 4],
            None,
            3,
            p4(&[
                (1, [0, 0, 0, 4, 0]),
                (-3, [0, 0, 1, 2, 1]),
                (3, [0, 0, 2, 0, 2]),
                (-1, [1, 0, 0, 0, 3]),
            ]),
        ),
        (
            vec![1, 2, 3, 5],
            None,
            3,
            p4(&[
                (1, [0, 0, 0, 5, 0]),
                (-3, [0, 1, 0, 3, 1]),
                (3, [0, 2, 0, 1, 2]),
                (-1, [2, 0, 0, 0, 3]),
            ]),
        ),
    ];
    for c4 in 2..=4u64 {
        cases.push((vec![1, 2, 3, 3 * c4], None, 3, family_f3(3 * c4)));
        cases.push((vec![1, 2, 3, 3 * c4 + 1], None, 3, family_f3(3 * c4 + 1)));
        // the beta = 2 presentation is outside the default selection
        let pin = format!("4:0,2,{}", c4 + 2);
        cases.push((
            vec![1, 2, 3, 3 * c4 + 2],
            Some(pin),
            3,
            family_f3(3 * c4 + 2),
        ));
    }
    for (exps, pin, j, expected) in &cases {
        let csv = exps
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let mut args = vec!["build", csv.as_str(), "--format", "text"];
        if let Some(pin) = pin {
            args.extend(["--pin", pin.as_str()]);
        }
        let lines = equation_lines(&cli(&args)?);
        let got = lines
            .get(j)
            .ok_or_else(|| format!("C({csv}): no F{j} printed"))?;
        ensure(*got == expected.to_text(), || {
            format!("C({csv}) F{j}: got {got}, expected {}", expected.to_text())
        })?;
        // and structurally, term by term
        let c = curve(exps);
        let pins: BTreeMap<usize, SignedDecomposition> = pin
            .as_deref()
            .map(|p| {
                let (_, v) = p.split_once(':').unwrap();
                let v: Vec<u64> = v.split(',').map(|x| x.parse().unwrap()).collect();
                (4, SignedDecomposition::new(4, v[0], v[1], v[2]))
            })
            .into_iter()
            .collect();
        let system = build_system_with_pins(&c, SelectionPolicy::AllowDirectPolynomiality, &pins)
            .map_err(|e| format!("C({csv}): {e}"))?;
        ensure(system.poly(*j) == expected, || {
            format!("C({csv}) F{j} differs structurally")
        })?;
    }
    Ok(format!("{} equations matched term for term", cases.len()))
}

fn criterion_2() -> Outcome {
    let c = curve(&[1, 2, 3, 5]);
    let pairs = enumerate_decompositions(&c, 4).map_err(|e| e.to_string())?;
    let positive: Vec<_> = pairs
        .iter()
        .map(|p| (p.positive.a, p.positive.b, p.positive.c))
        .collect();
    let signed: Vec<_> = pairs
        .iter()
        .map(|p| (p.signed.alpha, p.signed.beta, p.signed.gamma))
        .collect();
    // 5 = 1*3 + 1*2 + 0*1 = 3*3 - 2*2 - 0*1 = 1*3 + 0*2 + 2*1 = 2*3 - 0*2 - 1*1
    for rep in [(0, 1, 1), (2, 0, 1)] {
        ensure(positive.contains(&rep), || {
            format!("positive {rep:?} missing from {positive:?}")
        })?;
    }
    for rep in [(0, 2, 3), (1, 0, 2)] {
        ensure(signed.contains(&rep), || {
            format!("signed {rep:?} missing from {signed:?}")
        })?;
    }
    let sel = select_decomposition(&c, 4, SelectionPolicy::Strict).map_err(|e| e.to_string())?;
    let s = sel.pair.signed;
    ensure((s.alpha, s.beta, s.gamma) == (1, 0, 2), || {
        format!("selected {:?}", (s.alpha, s.beta, s.gamma))
    })?;
    Ok(format!(
        "{} pairs listed; selected (alpha,beta,gamma)=(1,0,2)",
        pairs.len()
    ))
}

/// Every valid recursive extension with `2 <= n <= max_n` and `mn <= max_top`,
/// validated by the semigroup module.
fn suite(max_n: usize, max_top: u64) -> Vec<CurveSpec> {
    fn extend(cur: &mut Vec<u64>, max_n: usize, max_top: u64, out: &mut Vec<CurveSpec>) {
        if cur.len() >= 2 {
            if let Ok(c) = CurveSpec::new(cur) {
                out.push(c);
            }
        }
        if cur.len() == max_n {
            return;
        }
        for next in cur.last().map_or(1, |&m| m + 1)..=max_top {
            cur.push(next);
            // a prefix outside the semigroup can never be completed
            if cur.len() < 3 || semigroup_witness(next, &cur[..cur.len() - 1]).is_some() {
                extend(cur, max_n, max_top, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_n, max_top, &mut out);
    out
}

/// `(curve, level, F(level-1))` for every level of the suite that builds.
fn suite_polys() -> (usize, Vec<(CurveSpec, usize, SparsePolynomial)>) {
    let curves = suite(5, 25);
    let mut out = Vec::new();
    for c in &curves {
        out.push((c.clone(), 2, build_f1(c)));
        for level in c.levels() {
            let Ok(sel) = select_decomposition(c, level, SelectionPolicy::AllowDirectPolynomiality)
            else {
                continue;
            };
            if let Ok((f, _)) = build_fi(c, level, &sel.pair) {
                out.push((c.clone(), level, f));
            }
        }
    }
    (curves.len(), out)
}

fn substitution_holds(c: &CurveSpec, level: usize, f: &SparsePolynomial) -> Result<(), String> {
    let v = check_substitution_identity(f, c, level).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Pass, || {
        format!("{c} F{}: identity fails", level - 1)
    })?;
    let sub = f
        .substitute_parametric(c, level)
        .map_err(|e| e.to_string())?;
    ensure(
        sub == parametric_binomial(c.m(level), c.m(level - 1)),
        || format!("{c} F{}: substitution gives {}", level - 1, sub.to_text()),
    )
}

fn membership_holds(c: &CurveSpec, j: usize, f: &SparsePolynomial) -> Result<(), String> {
    ensure(f.is_graded_homogeneous(c), || {
        format!("{c} F{j} is not graded-homogeneous")
    })?;
    ensure(f.coefficient_sum() == 0.into(), || {
        format!("{c} F{j}: coefficient sum is not 0")
    })?;
    let m = check_ideal_membership(f, c, 8, j);
    ensure(m.trials.len() == 8 && m.verdict == Verdict::Pass, || {
        format!("{c} F{j}: {} of 8 trial points vanish", m.trials_vanished())
    })
}

fn criterion_3() -> Outcome {
    let (count, polys) = suite_polys();
    let mut checked = 0;
    for (c, level, f) in polys.iter().filter(|(_, l, _)| *l >= 3) {
        substitution_holds(c, *level, f)?;
        checked += 1;
    }
    ensure(checked > 0, || "nothing built".into())?;
    Ok(format!(
        "{count} curves, {checked} built F(i-1) satisfy the identity"
    ))
}

fn criterion_4() -> Outcome {
    let (count, polys) = suite_polys();
    for (c, level, f) in &polys {
        membership_holds(c, level - 1, f)?;
    }
    Ok(format!(
        "{count} curves, {} polynomials in the ideal",
        polys.len()
    ))
}

fn reference_system(c: &CurveSpec) -> Result<EquationSystem, String> {
    build_system(c, SelectionPolicy::Strict)
        .or_else(|_| build_system(c, SelectionPolicy::AllowDirectPolynomiality))
        .map_err(|e| format!("{c}: {e}"))
}

fn criterion_5() -> Outcome {
    let curves: [&[u64]; 6] = [
        &[1, 2, 3],
        &[1, 2, 3, 4],
        &[1, 2, 3, 5],
        &[1, 2, 3, 7],
        &[2, 3, 7],
        &[2, 3, 8],
    ];
    let mut checks = 0;
    for exps in curves {
        let c = curve(exps);
        let system = reference_system(&c)?;
        for p in [5u64, 7, 11] {
            let field = PrimeField::new(p).map_err(|e| e.to_string())?;
            let locus =
                brute_force_locus_equality(&system, &field, u64::MAX).map_err(|e| e.to_string())?;
            ensure(locus.verdict == Verdict::Pass, || {
                format!(
                    "{c} over F{p}: {} ({:?})",
                    locus.verdict, locus.counterexample
                )
            })?;
            ensure(locus.zero_count == locus.curve_count, || {
                format!("{c} over F{p}: counts differ")
            })?;
            let inf = check_infinity_locus(&system, &field, u64::MAX).map_err(|e| e.to_string())?;
            ensure(inf.verdict == Verdict::Pass && inf.zero_count == 1, || {
                format!("{c} over F{p}: {} common zeros with x0 = 0", inf.zero_count)
            })?;
            checks += 1;
        }
    }
    Ok(format!(
        "{checks} curve/prime pairs, no characteristic-suspect exceptions"
    ))
}

/// `n+1 = 2*n - 1*(n-1) = 1*n + 1*1` on the rational normal curve `C(1,...,n+1)`.
fn rational_normal_splice(n: usize) -> Result<(CurveSpec, SpliceSpec), String> {
    let c = curve(&(1..=n as u64 + 1).collect::<Vec<_>>());
    let mut alphas = vec![0; n - 1];
    alphas[n - 2] = 1;
    let mut positive = vec![0; n];
    positive[0] = 1;
    positive[n - 1] = 1;
    let spec =
        SpliceSpec::new(&c, n + 1, 2, alphas, positive, n as u64 - 2).map_err(|e| e.to_string())?;
    Ok((c, spec))
}

fn criterion_6() -> Outcome {
    for n in 2..=5 {
        let (c, spec) = rational_normal_splice(n)?;
        let f = build_general_splice(&spec, &c).map_err(|e| format!("n = {n}: {e}"))?;
        substitution_holds(&c, n + 1, &f)?;
    }
    for n in 6..=12 {
        let (c, spec) = rational_normal_splice(n)?;
        let found = find_valid_split(&spec, &c);
        ensure(found.is_none(), || {
            format!("n = {n}: split {found:?} accepted")
        })?;
    }
    Ok("N = n-2 polynomial for n = 2..5; no valid N for n = 6..12".into())
}

fn theta_bound(prev: u64, m1: u64) -> u64 {
    (prev * m1).max(prev * (prev - m1))
}

/// Random curve meeting the theta hypotheses at every level from 3 on.
fn theta_curve(rng: &mut ChaCha8Rng, four: bool) -> CurveSpec {
    loop {
        let m1 = if four {
            rng.gen_range(2..=3)
        } else {
            rng.gen_range(1..=6)
        };
        let m2 = m1 + rng.gen_range(1..=if four { 3 } else { 6 });
        if num_gcd(m1, m2) != 1 {
            continue;
        }
        let mut exps = vec![m1, m2];
        let m3 = theta_bound(m2, m1) + rng.gen_range(0..=if four { 4 } else { 30 });
        exps.push(m3);
        if four {
            if num_gcd(m3, m1) != 1 {
                continue;
            }
            exps.push(theta_bound(m3, m1) + rng.gen_range(0..=10));
        }
        if let Ok(c) = CurveSpec::new(&exps) {
            return c;
        }
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);
    let mut largest = 0;
    for k in 0..100 {
        let c = theta_curve(&mut rng, k % 5 >= 3);
        largest = largest.max(c.top());
        let mut pins = BTreeMap::new();
        for level in c.levels() {
            let s = proposition_theta(&c, level).map_err(|e| format!("{c}: {e}"))?;
            let pair = DecompositionPair::from_signed(s, &c).map_err(|e| format!("{c}: {e}"))?;
            ensure(
                s.beta == 0 && pair.gamma_condition && pair.sufficient_conditions_met,
                || {
                    format!(
                        "{c} level {level}: {:?} misses a hypothesis",
                        (s.alpha, s.beta, s.gamma)
                    )
                },
            )?;
            pins.insert(level, s);
        }
        let system = build_system_with_pins(&c, SelectionPolicy::Strict, &pins)
            .map_err(|e| format!("{c}: {e}"))?;
        for level in c.levels() {
            substitution_holds(&c, level, system.poly(level - 1))?;
        }
        for (j, f) in system.polys().iter().enumerate() {
            membership_holds(&c, j + 1, f)?;
        }
    }
    Ok(format!(
        "100 curves (largest mn = {largest}) pass the identity and membership"
    ))
}

/// Single-coefficient and single-exponent mutations of the reference
/// systems, interleaved so both kinds and every system are represented.
fn mutations() -> Vec<(String, EquationSystem)> {
    let mut per_system = Vec::new();
    for exps in [
        &[1u64, 2, 3][..],
        &[1, 2, 3, 4],
        &[1, 2, 3, 5],
        &[1, 2, 3, 6],
    ] {
        let c = curve(exps);
        let system = reference_system(&c).expect("reference systems build");
        let mut list = Vec::new();
        for (j, f) in system.polys().iter().enumerate() {
            for (t, term) in f.terms().iter().enumerate() {
                let bumped = Term::new(term.coeff.clone() + 1, term.mono.clone());
                list.push((
                    format!("{c} F{}: coefficient of term {t} + 1", j + 1),
                    system.with_poly_replaced(j + 1, f.with_term_replaced(t, bumped)),
                ));
                let var = (t + j + 1) % c.nvars();
                let mut e = term.mono.exponents().to_vec();
                e[var] += 1;
                let moved = Term::new(term.coeff.clone(), Monomial::new(e));
                list.push((
                    format!("{c} F{}: exponent of x{var} in term {t} + 1", j + 1),
                    system.with_poly_replaced(j + 1, f.with_term_replaced(t, moved)),
                ));
            }
        }
        per_system.push(list.into_iter());
    }
    let mut out = Vec::new();
    while out.len() < 20 {
        let before = out.len();
        for it in per_system.iter_mut() {
            if out.len() < 20 {
                out.extend(it.next());
            }
        }
        assert!(out.len() > before, "not enough mutations");
    }
    out
}

fn failed(mut verdicts: impl Iterator<Item = Verdict>) -> bool {
    verdicts.any(|v| v == Verdict::Fail)
}

fn criterion_8() -> Outcome {
    let config = FiniteFieldConfig::new(&[5, 7], 8, FiniteFieldConfig::DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let mut caught_by = BTreeMap::<&str, usize>::new();
    let list = mutations();
    for (label, system) in &list {
        let r = full_verify(system, &config);
        let oracles = [
            ("membership", failed(r.membership.iter().map(|m| m.verdict))),
            ("base case", r.base_case.verdict == Verdict::Fail),
            (
                "substitution",
                failed(r.substitution.iter().map(|s| s.verdict)),
            ),
            ("infinity", failed(r.infinity.iter().map(|s| s.verdict))),
            ("locus", failed(r.locus.iter().map(|s| s.verdict))),
        ];
        let hits: Vec<_> = oracles
            .iter()
            .filter(|(_, f)| *f)
            .map(|(n, _)| *n)
            .collect();
        ensure(!hits.is_empty(), || format!("{label}: no oracle failed"))?;
        for h in hits {
            *caught_by.entry(h).or_default() += 1;
        }
    }
    let summary: Vec<_> = caught_by.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!(
        "{} mutations caught ({})",
        list.len(),
        summary.join(", ")
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1", "reference equations, exact", 1, criterion_1),
        (
            "2",
            "decomposition enumeration and selection",
            1,
            criterion_2,
        ),
        ("3", "substitution identity over the suite", 30, criterion_3),
        ("4", "ideal membership over the suite", 30, criterion_4),
        ("5", "brute-force locus equality", 60, criterion_5),
        ("6", "rational normal curve splice boundary", 1, criterion_6),
        ("7", "theta construction on random curves", 60, criterion_7),
        ("8", "mutation sensitivity", 60, criterion_8),
    ];
    let mut failures = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => {
                Err(format!("took {elapsed:.2?}, limit {limit} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {id}: {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
