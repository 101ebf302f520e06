#![allow(dead_code)]

use stci_core::CurveSpec;

/// Every valid recursive extension with `2 <= n <= max_n` and `mn <= max_top`.
pub fn all_curves(max_n: usize, max_top: u64) -> Vec<CurveSpec> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(&mut current, max_n, max_top, &mut out);
    out
}

fn extend(current: &mut Vec<u64>, max_n: usize, max_top: u64, out: &mut Vec<CurveSpec>) {
    if current.len() >= 2 {
        if let Ok(c) = CurveSpec::new(current) {
            out.push(c);
        }
    }
    if current.len() == max_n {
        return;
    }
    let start = current.last().map_or(1, |&m| m + 1);
    for next in start..=max_top {
        current.push(next);
        // a prefix failing the semigroup test can never become valid
        let prefix_ok = current.len() < 3 || prefix_is_recursive(current);
        if prefix_ok {
            extend(current, max_n, max_top, out);
        }
        current.pop();
    }
}

fn prefix_is_recursive(exps: &[u64]) -> bool {
    let last = *exps.last().unwrap();
    stci_core::semigroup::semigroup_witness(last, &exps[..exps.len() - 1]).is_some()
}
