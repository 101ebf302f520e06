use stci_core::{CurveSpec, SemigroupError};

use crate::config::parse_list;

/// An exponent template such as `1,2,3,M` with exactly one symbolic slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    entries: Vec<Option<u64>>,
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

/// One instantiation of a family; `curve` holds the validation outcome.
#[derive(Debug, Clone)]
pub struct Member {
    pub value: u64,
    pub exponents: Vec<u64>,
    pub curve: Result<CurveSpec, SemigroupError>,
}

impl FamilySpec {
    pub fn parse(template: &str, range: (u64, u64), step: u64) -> Result<Self, String> {
        if step == 0 {
            return Err("step must be positive".to_string());
        }
        let mut entries = Vec::new();
        for part in template.split(',') {
            let part = part.trim();
            if part.len() == 1 && part.chars().all(|c| c.is_ascii_alphabetic()) {
                entries.push(None);
            } else {
                let v = parse_list(part).map_err(|_| {
                    format!("template entry {part:?} is neither an integer nor a slot")
                })?;
                entries.push(Some(v[0]));
            }
        }
        match entries.iter().filter(|e| e.is_none()).count() {
            1 => {}
            k => {
                return Err(format!(
                    "template {template:?} needs exactly one slot, found {k}"
                ))
            }
        }
        Ok(FamilySpec {
            entries,
            start: range.0,
            end: range.1,
            step,
        })
    }

    pub fn members(&self) -> Vec<Member> {
        (self.start..=self.end)
            .step_by(self.step as usize)
            .map(|value| {
                let exponents: Vec<u64> = self.entries.iter().map(|e| e.unwrap_or(value)).collect();
                let curve = CurveSpec::new(&exponents);
                Member {
                    value,
                    exponents,
                    curve,
                }
            })
            .collect()
    }
}
