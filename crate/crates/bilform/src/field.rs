//! Arithmetic in GF(p) for a prime modulus p.
//!
//! [`PrimeField`] carries the modulus and works on canonical `u64`
//! representatives; [`FieldElement`] pairs a representative with its field for
//! API-level code that wants mismatch checking.

use crate::error::{Error, Result};

/// A prime field GF(p), p a machine-word prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Creates GF(p). The modulus is checked for primality by trial division;
    /// inputs are desk-scale so this is never a bottleneck.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an arbitrary signed integer.
    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u64 {
        let m = self.p as i64;
        (((v % m) + m) % m) as u64
    }

    /// Wraps a signed integer as a checked element.
    #[inline]
    pub fn el(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce_i64(v),
            field: *self,
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.el(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.el(1)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p is machine-word sized; widen so the product never overflows.
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on 0.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Smallest generator of the multiplicative group GF(p)*.
    /// For p = 2 this is 1 (the group is trivial).
    pub fn primitive_root(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        let factors = distinct_prime_factors(self.p - 1);
        'outer: for g in 2..self.p {
            for &f in &factors {
                if self.pow(g, (self.p - 1) / f) == 1 {
                    continue 'outer;
                }
            }
            return g;
        }
        unreachable!("every prime field has a primitive root")
    }
}

/// A checked element of GF(p): canonical representative plus its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The operations covered by [`ff_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

/// Single dispatch point for checked element arithmetic.
///
/// `b` is ignored for the unary operations `Inv` and `Neg`. Mixing moduli is
/// reported as [`Error::FieldMismatch`], inverting zero as
/// [`Error::DivisionByZero`].
pub fn ff_arith(op: FieldOp, a: FieldElement, b: Option<FieldElement>) -> Result<FieldElement> {
    let f = a.field;
    let rhs = |b: Option<FieldElement>| -> Result<u64> {
        let b = b.ok_or_else(|| Error::InternalInconsistency("missing operand".into()))?;
        if b.field != f {
            return Err(Error::FieldMismatch(f.modulus(), b.field.modulus()));
        }
        Ok(b.value)
    };
    let value = match op {
        FieldOp::Add => f.add(a.value, rhs(b)?),
        FieldOp::Sub => f.sub(a.value, rhs(b)?),
        FieldOp::Mul => f.mul(a.value, rhs(b)?),
        FieldOp::Div => f.div(a.value, rhs(b)?)?,
        FieldOp::Inv => f.inv(a.value)?,
        FieldOp::Neg => f.neg(a.value),
    };
    Ok(FieldElement { value, field: f })
}

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|sq| sq <= p).unwrap_or(false) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_composites() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(6).is_err());
        assert!(PrimeField::new(91).is_err()); // 7 * 13
        for p in [2u64, 3, 5, 7, 101] {
            assert!(PrimeField::new(p).is_ok());
        }
    }

    #[test]
    fn arith_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let r = ff_arith(FieldOp::Add, f5.el(3), Some(f5.el(4))).unwrap();
        assert_eq!(r.value(), 2);
        let r = ff_arith(FieldOp::Inv, f5.el(2), None).unwrap();
        assert_eq!(r.value(), 3);
        let f2 = PrimeField::new(2).unwrap();
        let r = ff_arith(FieldOp::Inv, f2.el(1), None).unwrap();
        assert_eq!(r.value(), 1);
    }

    #[test]
    fn arith_errors() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(
            ff_arith(FieldOp::Inv, f5.el(0), None),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            ff_arith(FieldOp::Add, f5.el(1), Some(f7.el(1))),
            Err(Error::FieldMismatch(5, 7))
        );
    }

    #[test]
    fn inverses_multiply_to_one() {
        for p in [2u64, 3, 5, 7, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p.min(50) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn ops_agree_with_integer_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        for a in 0..7u64 {
            for b in 0..7u64 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
                assert_eq!(f.sub(a, b), ((a as i64 - b as i64).rem_euclid(7)) as u64);
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(PrimeField::new(2).unwrap().primitive_root(), 1);
        assert_eq!(PrimeField::new(3).unwrap().primitive_root(), 2);
        assert_eq!(PrimeField::new(5).unwrap().primitive_root(), 2);
        assert_eq!(PrimeField::new(7).unwrap().primitive_root(), 3);
        let f = PrimeField::new(101).unwrap();
        let g = f.primitive_root();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1u64;
        for _ in 0..100 {
            x = f.mul(x, g);
            seen.insert(x);
        }
        assert_eq!(seen.len(), 100);
    }
}
