//! Projective points over `F_p` and curve membership.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;

use crate::polyring::{ModPolynomial, PrimeField};
use crate::semigroup::CurveSpec;

/// A point of `P^n(F_p)` with its first nonzero coordinate scaled to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<u64>,
}

impl ProjectivePoint {
    /// Normalizes `coords`; `None` for the zero vector.
    pub fn new(field: &PrimeField, coords: &[u64]) -> Option<Self> {
        let reduced: Vec<u64> = coords.iter().map(|&c| field.reduce(c)).collect();
        let lead = *reduced.iter().find(|&&c| c != 0)?;
        let scale = field.inv(lead).expect("nonzero");
        Some(ProjectivePoint {
            coords: reduced.iter().map(|&c| field.mul(c, scale)).collect(),
        })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Integers `l_j` with `sum l_j m_j = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutWitness {
    coeffs: Vec<i128>,
}

impl BezoutWitness {
    /// Folds the extended gcd over `m1,...,mn`.
    pub fn for_curve(curve: &CurveSpec) -> Option<Self> {
        let ms = curve.exponents();
        let mut g = ms[0] as i128;
        let mut coeffs = vec![1i128];
        for &m in &ms[1..] {
            let e = g.extended_gcd(&(m as i128));
            for c in coeffs.iter_mut() {
                *c *= e.x;
            }
            coeffs.push(e.y);
            g = e.gcd;
        }
        Self::new(coeffs, curve)
    }

    /// Checks the combination before accepting it.
    pub fn new(coeffs: Vec<i128>, curve: &CurveSpec) -> Option<Self> {
        if coeffs.len() != curve.n() {
            return None;
        }
        let total: i128 = coeffs
            .iter()
            .enumerate()
            .map(|(j, &l)| l * curve.m(j + 1) as i128)
            .sum();
        (total == 1).then_some(BezoutWitness { coeffs })
    }

    /// Another witness, shifted along `m2*e1 - m1*e2`.
    pub fn shifted(&self, curve: &CurveSpec, times: i128) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += times * curve.m(2) as i128;
        coeffs[1] -= times * curve.m(1) as i128;
        BezoutWitness { coeffs }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }
}

/// Whether an `F_p`-point lies on the monomial curve.
///
/// With `x0 = 1` and all coordinates nonzero, any parameter `s` with
/// `x_j = s^(m_j)` equals `prod x_j^(l_j)`, so one candidate suffices and it
/// lies in `F_p`.
pub fn point_on_curve(
    point: &ProjectivePoint,
    curve: &CurveSpec,
    witness: &BezoutWitness,
    field: &PrimeField,
) -> bool {
    let c = point.coords();
    let n = curve.n();
    if c[0] == 0 {
        return c[1..n].iter().all(|&x| x == 0) && c[n] != 0;
    }
    if c[n] == 0 {
        return c[1..].iter().all(|&x| x == 0);
    }
    if c[1..].contains(&0) {
        return false;
    }
    let t = witness.coeffs().iter().enumerate().fold(1, |acc, (j, &l)| {
        field.mul(acc, field.pow_signed(c[j + 1], l).expect("nonzero"))
    });
    (1..=n).all(|j| c[j] == field.pow(t, curve.m(j)))
}

/// Image of `P^1(F_p)` under `(u:v) -> (u^mn : u^(mn-m1) v^m1 : ... : v^mn)`.
pub fn parametrized_points(curve: &CurveSpec, field: &PrimeField) -> Vec<ProjectivePoint> {
    let p = field.modulus();
    let top = curve.top();
    let image = |u: u64, v: u64| {
        let coords: Vec<u64> = (0..=curve.n())
            .map(|j| {
                let mj = curve.m(j);
                field.mul(field.pow(u, top - mj), field.pow(v, mj))
            })
            .collect();
        ProjectivePoint::new(field, &coords).expect("image of a nonzero pair")
    };
    let mut pts: Vec<ProjectivePoint> = (0..p).map(|v| image(1, v)).collect();
    pts.push(image(0, 1));
    pts.sort();
    pts.dedup();
    pts
}

/// Number of points of `P^n(F_p)`, saturating.
pub fn projective_point_count(n: usize, p: u64) -> u64 {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..=n {
        total = total.saturating_add(power);
        power = power.saturating_mul(p);
    }
    total
}

/// Canonical enumeration of `P^n(F_p)`: chart `c` holds the points whose
/// first nonzero coordinate is `x_c`, charts in increasing `c`, and inside a
/// chart the trailing coordinates count up like an odometer with `x_n`
/// fastest.
#[derive(Debug, Clone, Copy)]
pub struct Enumeration {
    n: usize,
    p: u64,
}

impl Enumeration {
    pub fn new(n: usize, p: u64) -> Self {
        Enumeration { n, p }
    }

    fn chart_size(&self, chart: usize) -> u64 {
        self.p.pow((self.n - chart) as u32)
    }

    /// Global index range of chart `c`.
    pub fn chart_range(&self, chart: usize) -> std::ops::Range<u64> {
        let start: u64 = (0..chart).map(|c| self.chart_size(c)).sum();
        start..start + self.chart_size(chart)
    }

    pub fn len(&self) -> u64 {
        (0..=self.n).map(|c| self.chart_size(c)).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes the coordinates of point `index` into `out`.
    pub fn point(&self, mut index: u64, out: &mut [u64]) {
        let mut chart = 0;
        while index >= self.chart_size(chart) {
            index -= self.chart_size(chart);
            chart += 1;
        }
        out.iter_mut().for_each(|x| *x = 0);
        out[chart] = 1;
        for j in (chart + 1..=self.n).rev() {
            out[j] = index % self.p;
            index /= self.p;
        }
    }
}

/// What a scan over a range of points found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScanTally {
    pub points: u64,
    pub zeros: u64,
    pub curve_points: u64,
    /// Smallest global index where "all equations vanish" and "on the curve"
    /// disagree, with the side that was true.
    pub first_mismatch: Option<(u64, MismatchKind)>,
    /// Smallest index of a curve point where some equation does not vanish.
    pub first_containment_failure: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    /// A common zero that is not on the curve.
    ExtraZero,
    /// A curve point where the system does not vanish.
    MissedCurvePoint,
}

impl fmt::Display for MismatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MismatchKind::ExtraZero => "common zero off the curve",
            MismatchKind::MissedCurvePoint => "curve point off the zero set",
        })
    }
}

fn merge_first<T: Copy>(a: Option<(u64, T)>, b: Option<(u64, T)>) -> Option<(u64, T)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl ScanTally {
    fn merge(self, other: ScanTally) -> ScanTally {
        ScanTally {
            points: self.points + other.points,
            zeros: self.zeros + other.zeros,
            curve_points: self.curve_points + other.curve_points,
            first_mismatch: merge_first(self.first_mismatch, other.first_mismatch),
            first_containment_failure: match (
                self.first_containment_failure,
                other.first_containment_failure,
            ) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

/// Scans global indices `range` in chunks of `chunk` points, in parallel.
/// The tally does not depend on `chunk`.
pub fn scan_points(
    polys: &[ModPolynomial],
    curve: &CurveSpec,
    witness: &BezoutWitness,
    field: &PrimeField,
    range: std::ops::Range<u64>,
    chunk: u64,
) -> ScanTally {
    let chunk = chunk.max(1);
    let enumeration = Enumeration::new(curve.n(), field.modulus());
    let starts: Vec<u64> = (range.start..range.end).step_by(chunk as usize).collect();
    starts
        .into_par_iter()
        .map(|start| {
            let end = (start + chunk).min(range.end);
            let mut tally = ScanTally::default();
            let mut coords = vec![0u64; curve.nvars()];
            for index in start..end {
                enumeration.point(index, &mut coords);
                let point = ProjectivePoint {
                    coords: coords.clone(),
                };
                let zero = polys.iter().all(|f| f.eval(&coords) == 0);
                let on_curve = point_on_curve(&point, curve, witness, field);
                tally.points += 1;
                tally.zeros += zero as u64;
                tally.curve_points += on_curve as u64;
                if zero != on_curve && tally.first_mismatch.is_none() {
                    let kind = if zero {
                        MismatchKind::ExtraZero
                    } else {
                        MismatchKind::MissedCurvePoint
                    };
                    tally.first_mismatch = Some((index, kind));
                }
                if on_curve && !zero && tally.first_containment_failure.is_none() {
                    tally.first_containment_failure = Some(index);
                }
            }
            tally
        })
        .reduce(ScanTally::default, ScanTally::merge)
}
