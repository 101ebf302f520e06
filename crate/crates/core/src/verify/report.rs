use std::fmt::Write;

use super::{Verdict, VerificationReport};

/// Ordered key/value tree used to serialize reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportNode {
    pub key: String,
    pub value: Option<String>,
    pub children: Vec<ReportNode>,
}

impl ReportNode {
    pub fn leaf(key: impl Into<String>, value: impl ToString) -> Self {
        ReportNode {
            key: key.into(),
            value: Some(value.to_string()),
            children: Vec::new(),
        }
    }

    pub fn branch(
        key: impl Into<String>,
        value: Option<String>,
        children: Vec<ReportNode>,
    ) -> Self {
        ReportNode {
            key: key.into(),
            value,
            children,
        }
    }

    /// Two-space indented `key: value` lines.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        match &self.value {
            Some(v) => {
                let _ = writeln!(out, "{pad}{}: {v}", self.key);
            }
            None => {
                let _ = writeln!(out, "{pad}{}", self.key);
            }
        }
        for child in &self.children {
            child.render_into(out, depth + 1);
        }
    }

    pub fn find(&self, key: &str) -> Option<&ReportNode> {
        self.children.iter().find(|c| c.key == key)
    }
}

fn verdict(v: Verdict) -> Option<String> {
    Some(v.to_string())
}

impl VerificationReport {
    pub fn to_tree(&self) -> ReportNode {
        let membership = self
            .membership
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let pieces = m
                    .pieces
                    .iter()
                    .map(|(d, s)| format!("{d}:{s}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                ReportNode::branch(
                    format!("F{}", i + 1),
                    verdict(m.verdict),
                    vec![
                        ReportNode::leaf("graded_pieces", pieces),
                        ReportNode::leaf("criterion", m.criterion_holds),
                        ReportNode::leaf(
                            "trials",
                            format!("{}/{} vanished", m.trials_vanished(), m.trials.len()),
                        ),
                    ],
                )
            })
            .collect();
        let base = ReportNode::branch(
            "base_case",
            verdict(self.base_case.verdict),
            vec![
                ReportNode::leaf("identity", self.base_case.identity_holds),
                ReportNode::leaf("gcd_m1_m2", self.base_case.gcd_m1_m2),
            ],
        );
        let substitution = self
            .substitution
            .iter()
            .map(|s| {
                ReportNode::branch(
                    format!("level{}", s.level),
                    verdict(s.verdict),
                    vec![ReportNode::leaf(
                        "expected",
                        s.expected.to_text_named(&["t", &format!("x{}", s.level)]),
                    )],
                )
            })
            .collect();
        let infinity = self
            .infinity
            .iter()
            .map(|v| {
                let zeros = v
                    .zeros
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                ReportNode::branch(
                    format!("p{}", v.prime),
                    verdict(v.verdict),
                    vec![
                        ReportNode::leaf("zero_count", v.zero_count),
                        ReportNode::leaf("zeros", zeros),
                    ],
                )
            })
            .collect();
        let locus = self
            .locus
            .iter()
            .map(|v| {
                let mut children = vec![
                    ReportNode::leaf("points", v.points),
                    ReportNode::leaf("common_zeros", v.zero_count),
                    ReportNode::leaf("curve_points", v.curve_count),
                    ReportNode::leaf("containment", v.containment_holds),
                ];
                if let Some((p, kind)) = &v.counterexample {
                    children.push(ReportNode::leaf("counterexample", format!("{p} ({kind})")));
                }
                if !v.vanishing_binomials.is_empty() {
                    let list = v
                        .vanishing_binomials
                        .iter()
                        .map(|(level, k)| format!("C(m{},{k})", level - 1))
                        .collect::<Vec<_>>()
                        .join(" ");
                    children.push(ReportNode::leaf("vanishing_binomials", list));
                }
                ReportNode::branch(format!("p{}", v.prime), verdict(v.verdict), children)
            })
            .collect();
        let provenance = self
            .provenance
            .iter()
            .map(|p| {
                let tag = if p.admitted_by.theorem_backed() {
                    "theorem-backed".to_string()
                } else {
                    format!("empirically-verified ({})", p.admitted_by)
                };
                ReportNode::leaf(format!("level{}", p.level), tag)
            })
            .collect();
        let mut children = vec![
            ReportNode::leaf("curve", self.curve.to_csv()),
            ReportNode::leaf("overall", self.overall),
            ReportNode::branch("membership", None, membership),
            base,
            ReportNode::branch("substitution", None, substitution),
            ReportNode::branch("infinity_locus", None, infinity),
            ReportNode::branch("locus_equality", None, locus),
            ReportNode::branch("provenance", None, provenance),
        ];
        if !self.skipped.is_empty() {
            children.push(ReportNode::branch(
                "skipped",
                None,
                self.skipped
                    .iter()
                    .enumerate()
                    .map(|(i, s)| ReportNode::leaf(format!("{}", i + 1), s))
                    .collect(),
            ));
        }
        ReportNode::branch("report", None, children)
    }
}

#[cfg(test)]
mod tests {
    use crate::equations::build_system;
    use crate::semigroup::{CurveSpec, SelectionPolicy};
    use crate::verify::{full_verify, FiniteFieldConfig};

    #[test]
    fn golden_report_for_twisted_cubic() {
        let s = build_system(
            &CurveSpec::new(&[1, 2, 3]).unwrap(),
            SelectionPolicy::Strict,
        )
        .unwrap();
        let cfg = FiniteFieldConfig::new(&[5], 8, 1_000_000).unwrap();
        let text = full_verify(&s, &cfg).to_tree().render_text();
        let want = "\
report
  curve: 1,2,3
  overall: PASS
  membership
    F1: PASS
      graded_pieces: (4,2):0
      criterion: true
      trials: 8/8 vanished
    F2: PASS
      graded_pieces: (3,6):0
      criterion: true
      trials: 8/8 vanished
  base_case: PASS
    identity: true
    gcd_m1_m2: 1
  substitution
    level3: PASS
      expected: t^6-2*t^3*x3+x3^2
  infinity_locus
    p5: PASS
      zero_count: 1
      zeros: (0:0:0:1)
  locus_equality
    p5: PASS
      points: 156
      common_zeros: 6
      curve_points: 6
      containment: true
  provenance
    level3: theorem-backed
";
        assert_eq!(text, want);
    }
}
