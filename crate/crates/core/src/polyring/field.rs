use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{PolyError, SparsePolynomial};

/// The prime field `F_p`, residues stored as `0 <= r < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, PolyError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn reduce_bigint(&self, x: &BigInt) -> u64 {
        let r = x % BigInt::from(self.p);
        let r = if r.sign() == num_bigint::Sign::Minus {
            r + self.p
        } else {
            r
        };
        r.to_u64().expect("residue fits")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// `a^e` for a signed exponent; `None` for `0^(negative)`.
    pub fn pow_signed(&self, a: u64, e: i128) -> Option<u64> {
        let reduced = e.rem_euclid(self.p as i128 - 1) as u64;
        if e < 0 {
            self.inv(a)
                .map(|ai| self.pow(ai, e.unsigned_abs() as u64 % (self.p - 1)))
        } else if a.is_multiple_of(self.p) {
            Some(if e == 0 { 1 } else { 0 })
        } else {
            Some(self.pow(a, reduced))
        }
    }
}

/// A polynomial with coefficients reduced mod `p`, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ModPolynomial {
    field: PrimeField,
    terms: Vec<(u64, Vec<(usize, u64)>)>,
}

impl ModPolynomial {
    pub fn new(poly: &SparsePolynomial, field: PrimeField) -> Self {
        let terms = poly
            .terms()
            .iter()
            .map(|t| {
                let vars = t
                    .mono
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| (j, e))
                    .collect();
                (field.reduce_bigint(&t.coeff), vars)
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        ModPolynomial { field, terms }
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let f = &self.field;
        self.terms.iter().fold(0, |acc, (c, vars)| {
            let v = vars.iter().fold(*c, |v, &(j, e)| {
                if v == 0 {
                    0
                } else {
                    f.mul(v, f.pow(point[j], e))
                }
            });
            f.add(acc, v)
        })
    }

    /// True when every coefficient vanished mod `p`.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
