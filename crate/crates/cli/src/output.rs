//! Renderings of decompositions, equation systems and reports.

use std::fmt::Write;

use serde_json::{json, Map, Value};
use stci_core::verify::ReportNode;
use stci_core::{CurveSpec, DecompositionPair, EquationSystem, SparsePolynomial};

fn var_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|j| format!("x{j}")).collect()
}

fn strings(values: &[u64]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|v| Value::String(v.to_string()))
            .collect(),
    )
}

pub fn pair_json(pair: &DecompositionPair) -> Value {
    let (p, s) = (pair.positive, pair.signed);
    json!({
        "level": pair.level(),
        "positive": {"a": p.a.to_string(), "b": p.b.to_string(), "c": p.c.to_string()},
        "signed": {
            "alpha": s.alpha.to_string(),
            "beta": s.beta.to_string(),
            "gamma": s.gamma.to_string(),
        },
        "flags": {
            "gamma_condition": pair.gamma_condition,
            "sufficient_conditions_met": pair.sufficient_conditions_met,
        },
    })
}

pub fn poly_json(name: &str, poly: &SparsePolynomial) -> Value {
    let terms: Vec<Value> = poly
        .terms()
        .iter()
        .map(|t| {
            json!({
                "coeff": t.coeff.to_string(),
                "exponents": strings(t.mono.exponents()),
            })
        })
        .collect();
    json!({"name": name, "text": poly.to_text(), "terms": terms})
}

pub fn curve_json(curve: &CurveSpec) -> Value {
    strings(curve.exponents())
}

pub fn system_json(system: &EquationSystem) -> Value {
    let decompositions: Vec<Value> = system
        .levels()
        .iter()
        .map(|l| {
            let mut v = pair_json(&l.selection.pair);
            v["flags"]["admitted_by"] = Value::String(l.selection.admitted_by.to_string());
            v["flags"]["theorem_backed"] = Value::Bool(l.selection.admitted_by.theorem_backed());
            v
        })
        .collect();
    let polynomials: Vec<Value> = system
        .polys()
        .iter()
        .enumerate()
        .map(|(i, f)| poly_json(&format!("F{}", i + 1), f))
        .collect();
    json!({
        "curve": curve_json(system.curve()),
        "decompositions": decompositions,
        "polynomials": polynomials,
    })
}

/// Leaves become strings; branches become objects holding their own value
/// under `"verdict"` (or `"value"`) and one entry per child.
pub fn report_json(node: &ReportNode) -> Value {
    if node.children.is_empty() {
        return Value::String(node.value.clone().unwrap_or_default());
    }
    let mut map = Map::new();
    if let Some(v) = &node.value {
        map.insert("verdict".to_string(), Value::String(v.clone()));
    }
    for child in &node.children {
        map.insert(child.key.clone(), report_json(child));
    }
    Value::Object(map)
}

/// One `F_j = ...` line per equation, then one `#` comment per level naming
/// the decomposition used and whether it is theorem-backed.
pub fn system_text(system: &EquationSystem) -> String {
    let mut out = String::new();
    for (i, f) in system.polys().iter().enumerate() {
        let _ = writeln!(out, "F{} = {}", i + 1, f.to_text());
    }
    for l in system.levels() {
        let admitted = l.selection.admitted_by;
        let tag = if admitted.theorem_backed() {
            "theorem-backed".to_string()
        } else {
            format!("empirically-verified ({admitted})")
        };
        let _ = writeln!(
            out,
            "# F{}: {} {}, {tag}",
            l.level - 1,
            l.selection.pair.positive,
            l.selection.pair.signed
        );
    }
    out
}

pub fn system_latex(system: &EquationSystem) -> String {
    let mut out = String::from("\\begin{align*}\n");
    let count = system.polys().len();
    for (i, f) in system.polys().iter().enumerate() {
        let sep = if i + 1 < count { " \\\\" } else { "" };
        let _ = writeln!(out, "F_{{{}}} &= {}{sep}", i + 1, f.to_latex());
    }
    out.push_str("\\end{align*}\n");
    out
}

/// Images `u^(mn-mj) v^mj` of the coordinates, in `x0..xn` order.
fn parametrization(curve: &CurveSpec) -> Vec<String> {
    let top = curve.top();
    (0..=curve.n())
        .map(|j| {
            let (eu, ev) = (top - curve.m(j), curve.m(j));
            let factor = |name: &str, e: u64| match e {
                0 => None,
                1 => Some(name.to_string()),
                e => Some(format!("{name}^{e}")),
            };
            let parts: Vec<String> = [factor("u", eu), factor("v", ev)]
                .into_iter()
                .flatten()
                .collect();
            parts.join("*")
        })
        .collect()
}

/// Macaulay2 script: the ring, the ideal, and a comparison of its radical
/// with the kernel of the parametrization.
pub fn system_m2(system: &EquationSystem) -> String {
    let curve = system.curve();
    let vars = var_names(curve.nvars()).join(",");
    let gens: Vec<String> = system.polys().iter().map(|f| f.to_text()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "-- equations for the monomial curve {curve}");
    let _ = writeln!(out, "R = QQ[{vars}];");
    let _ = writeln!(out, "I = ideal({});", gens.join(", "));
    let _ = writeln!(out, "S = QQ[u,v];");
    let _ = writeln!(
        out,
        "phi = map(S, R, {{{}}});",
        parametrization(curve).join(", ")
    );
    let _ = writeln!(out, "P = ker phi;");
    let _ = writeln!(out, "print(radical I == P);");
    out
}

/// Singular script with the same cross-check as [`system_m2`].
pub fn system_singular(system: &EquationSystem) -> String {
    let curve = system.curve();
    let vars = var_names(curve.nvars()).join(",");
    let gens: Vec<String> = system.polys().iter().map(|f| f.to_text()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "// equations for the monomial curve {curve}");
    let _ = writeln!(out, "LIB \"primdec.lib\";");
    let _ = writeln!(out, "ring S = 0,(u,v),dp;");
    let _ = writeln!(out, "ring R = 0,({vars}),dp;");
    let _ = writeln!(out, "ideal I = {};", gens.join(", "));
    let _ = writeln!(out, "setring S;");
    let _ = writeln!(out, "map phi = R, {};", parametrization(curve).join(", "));
    let _ = writeln!(out, "setring R;");
    let _ = writeln!(out, "ideal P = std(kernel(S, phi));");
    let _ = writeln!(out, "ideal J = std(radical(I));");
    let _ = writeln!(
        out,
        "print(size(reduce(P, J, 1)) == 0 && size(reduce(J, P, 1)) == 0);"
    );
    out
}

/// Listing of every decomposition with its flags; `selected` is marked `*`.
pub fn decomposition_text(
    curve: &CurveSpec,
    levels: &[(usize, Vec<DecompositionPair>, Option<DecompositionPair>)],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve {curve}");
    if levels.is_empty() {
        let _ = writeln!(out, "no levels to decompose");
        return out;
    }
    for (level, pairs, selected) in levels {
        let _ = writeln!(
            out,
            "level {level}: m{level} = {} over m1 = {}, m2 = {}, m{} = {}",
            curve.m(*level),
            curve.m(1),
            curve.m(2),
            level - 1,
            curve.m(level - 1)
        );
        for p in pairs {
            let mark = if Some(*p) == *selected { "*" } else { " " };
            let _ = writeln!(
                out,
                "  {mark} {}  {}  gamma-condition={}  sufficient={}",
                p.positive,
                p.signed,
                yes_no(p.gamma_condition),
                yes_no(p.sufficient_conditions_met)
            );
        }
        if selected.is_none() {
            let _ = writeln!(out, "    no admissible decomposition");
        }
    }
    out
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
