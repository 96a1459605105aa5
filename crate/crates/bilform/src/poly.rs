//! Univariate polynomials over GF(p): ring arithmetic, gcds, full
//! factorization into monic irreducibles, and the adjoint involution
//! q(t) -> t^deg(q) q(1/t) used to pair primary components of an asymmetry.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixed seed for the probabilistic equal-degree splitting, so factorization
/// output is reproducible run to run.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_b11f;

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
/// The zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= field.modulus();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.reduce_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Poly::new(field, vec![1])
    }

    pub fn x(field: PrimeField) -> Self {
        Poly::new(field, vec![0, 1])
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Poly::new(field, vec![c])
    }

    /// t - root
    pub fn linear_from_root(field: PrimeField, root: u64) -> Self {
        Poly::new(field, vec![field.neg(root % field.modulus()), 1])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    fn same_field(&self, other: &Poly) {
        assert_eq!(
            self.field, other.field,
            "polynomials over different prime fields"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = f.add(self.coeff(i), other.coeff(i));
        }
        Poly::new(f, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = f.sub(self.coeff(i), other.coeff(i));
        }
        Poly::new(f, out)
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Monic normalization; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return self.clone();
        }
        self.scale(self.field.inv(lc).expect("nonzero leading coeff"))
    }

    /// Quotient and remainder; panics on zero divisor (internal use).
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        self.same_field(divisor);
        let f = self.field;
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv_lc = f.inv(divisor.leading_coeff()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lc);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(c, dc));
            }
        }
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).1
    }

    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "div_exact with nonzero remainder");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let g = self.gcd(other);
        self.mul(other).div_exact(&g).monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        if self.coeffs.len() <= 1 {
            return Poly::zero(f);
        }
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, (i as u64) % f.modulus()))
            .collect();
        Poly::new(f, out)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// self^e mod m, with a u64 exponent.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// self^e mod m with an arbitrary-precision exponent (needed for
    /// equal-degree splitting where e = (p^d - 1) / 2).
    pub fn pow_mod_big(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.field).rem(m);
        let mut base = self.rem(m);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }

    /// p-th root of a polynomial in GF(p)[t^p]; Frobenius is the identity on
    /// GF(p), so this just picks every p-th coefficient.
    fn pth_root(&self) -> Poly {
        let p = self.field.modulus() as usize;
        let out: Vec<u64> = self.coeffs.iter().step_by(p).copied().collect();
        Poly::new(self.field, out)
    }

    /// The adjoint t^deg(f) f(1/t), returned monic.
    ///
    /// Requires a nonzero polynomial with nonzero constant term (the paper
    /// side only applies this to divisors of the minimal polynomial of an
    /// invertible operator).
    pub fn adjoint(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.coeffs[0] == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        Ok(Poly::new(self.field, rev).monic())
    }

    /// Full factorization into monic irreducibles with multiplicities, sorted
    /// deterministically by (degree, coefficient sequence).
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>> {
        self.factor_seeded(DEFAULT_FACTOR_SEED)
    }

    pub fn factor_seeded(&self, seed: u64) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (sqf, mult) in squarefree_decomposition(&self.monic()) {
            for (d, prod) in distinct_degree_split(&sqf) {
                for irr in equal_degree_split(&prod, d, &mut rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.coeffs.len(), &a.0.coeffs).cmp(&(b.0.coeffs.len(), &b.0.coeffs))
        });
        Ok(out)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => {
                    if c == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "{c}t")?
                    }
                }
                _ => {
                    if c == 1 {
                        write!(f, "t^{i}")?
                    } else {
                        write!(f, "{c}t^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Squarefree decomposition of a monic polynomial in characteristic p,
/// including the p-th power descent. Returns squarefree parts with their
/// multiplicities in the input.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let p = f.field().modulus() as usize;
    let mut f = f.monic();
    let mut outer = 1usize;
    while f.degree().map(|d| d > 0).unwrap_or(false) {
        let deriv = f.derivative();
        if deriv.is_zero() {
            // f is a polynomial in t^p, hence a p-th power.
            f = f.pth_root();
            outer *= p;
            continue;
        }
        let mut g = f.gcd(&deriv);
        let mut w = f.div_exact(&g).monic();
        let mut j = 1usize;
        while w.degree() != Some(0) {
            let y = w.gcd(&g);
            let fac = w.div_exact(&y).monic();
            if fac.degree() != Some(0) {
                out.push((fac, outer * j));
            }
            g = g.div_exact(&y).monic();
            w = y;
            j += 1;
        }
        // Whatever remains of g has every multiplicity divisible by p.
        f = g;
    }
    out
}

/// Distinct-degree splitting of a monic squarefree polynomial: returns
/// (d, product of all irreducible factors of degree d).
fn distinct_degree_split(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let p = field.modulus();
    let mut out = Vec::new();
    let mut h = f.clone();
    let x = Poly::x(field);
    // frob = t^(p^d) mod h, advanced one Frobenius application per round.
    let mut frob = x.pow_mod(p, &h);
    let mut d = 1usize;
    while h.degree().map(|deg| deg >= 2 * d).unwrap_or(false) {
        let g = h.gcd(&frob.sub(&x));
        if g.degree() != Some(0) {
            out.push((d, g.clone()));
            h = h.div_exact(&g).monic();
            frob = frob.rem(&h);
        }
        frob = frob.pow_mod(p, &h);
        d += 1;
    }
    if h.degree().map(|deg| deg > 0).unwrap_or(false) {
        let deg = h.degree().unwrap();
        out.push((deg, h));
    }
    out
}

/// Equal-degree splitting: f is monic squarefree, a product of irreducibles
/// all of degree d. Cantor-Zassenhaus for odd p, the trace construction for
/// p = 2; randomness comes from the caller's seeded generator.
fn equal_degree_split(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let field = f.field();
    let deg = f.degree().unwrap();
    if deg == d {
        return vec![f.monic()];
    }
    let p = field.modulus();
    loop {
        let h = random_poly(field, 2 * d, rng);
        if h.degree().is_none() || h.degree() == Some(0) {
            continue;
        }
        let g0 = f.gcd(&h);
        let split = if g0.degree().map(|x| x > 0 && x < deg).unwrap_or(false) {
            Some(g0)
        } else if p == 2 {
            // Trace map T(h) = h + h^2 + h^4 + ... over GF(2^d).
            let mut tr = h.rem(f);
            let mut sq = h.rem(f);
            for _ in 1..d {
                sq = sq.mul(&sq).rem(f);
                tr = tr.add(&sq);
            }
            let g = f.gcd(&tr);
            if g.degree().map(|x| x > 0 && x < deg).unwrap_or(false) {
                Some(g)
            } else {
                None
            }
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            let w = h.pow_mod_big(&e, f);
            let g = f.gcd(&w.sub(&Poly::one(field)));
            if g.degree().map(|x| x > 0 && x < deg).unwrap_or(false) {
                Some(g)
            } else {
                None
            }
        };
        if let Some(g) = split {
            let other = f.div_exact(&g).monic();
            let mut out = equal_degree_split(&g.monic(), d, rng);
            out.extend(equal_degree_split(&other, d, rng));
            return out;
        }
    }
}

fn random_poly(field: PrimeField, max_deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let p = field.modulus();
    let coeffs: Vec<u64> = (0..=max_deg).map(|_| rng.gen_range(0..p)).collect();
    Poly::new(field, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, coeffs: &[i64]) -> Poly {
        Poly::from_i64(f(p), coeffs)
    }

    #[test]
    fn factor_difference_of_squares() {
        // t^2 - 1 over GF(5) -> (t+1)(t+4)
        let g = poly(5, &[-1, 0, 1]);
        let fac = g.factor().unwrap();
        assert_eq!(
            fac,
            vec![(poly(5, &[1, 1]), 1), (poly(5, &[4, 1]), 1)]
        );
    }

    #[test]
    fn factor_irreducible_quadratic_gf2() {
        let g = poly(2, &[1, 1, 1]);
        let fac = g.factor().unwrap();
        assert_eq!(fac, vec![(poly(2, &[1, 1, 1]), 1)]);
    }

    #[test]
    fn factor_with_multiplicity() {
        // (t-2)^2 (t-3) over GF(5) -> (t+3)^2 (t+2)
        let g = poly(5, &[-2, 1]).mul(&poly(5, &[-2, 1])).mul(&poly(5, &[-3, 1]));
        let fac = g.factor().unwrap();
        assert_eq!(
            fac,
            vec![(poly(5, &[2, 1]), 1), (poly(5, &[3, 1]), 2)]
        );
        // cross-check by root evaluation
        for (irr, _) in &fac {
            let root = irr.field().neg(irr.coeff(0));
            assert_eq!(g.eval(root), 0);
        }
    }

    #[test]
    fn factor_product_reconstructs_input() {
        let g = poly(3, &[2, 0, 1, 1, 0, 2]);
        let fac = g.factor().unwrap();
        let mut prod = Poly::constant(f(3), g.leading_coeff());
        for (irr, m) in &fac {
            assert!(irr.is_monic());
            for _ in 0..*m {
                prod = prod.mul(irr);
            }
        }
        assert_eq!(prod, g);
    }

    #[test]
    fn factor_zero_rejected() {
        assert_eq!(Poly::zero(f(5)).factor(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn adjoint_examples() {
        // t-2 over GF(5): adjoint is monic scaling of 1-2t, i.e. t-3 = t+2... t+2 == t-3
        let a = poly(5, &[-2, 1]).adjoint().unwrap();
        assert_eq!(a, poly(5, &[2, 1]));
        // t+1 over GF(3) is self-adjoint
        let b = poly(3, &[1, 1]).adjoint().unwrap();
        assert_eq!(b, poly(3, &[1, 1]));
        // t^2+t+2 over GF(5) -> 2t^2+t+1 scaled by inv(2)=3 -> t^2+3t+3
        let c = poly(5, &[2, 1, 1]).adjoint().unwrap();
        assert_eq!(c, poly(5, &[3, 3, 1]));
    }

    #[test]
    fn adjoint_errors() {
        assert_eq!(poly(5, &[0, 1]).adjoint(), Err(Error::ZeroConstantTerm));
        assert_eq!(Poly::zero(f(5)).adjoint(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn adjoint_is_involution_up_to_monic_scaling() {
        for coeffs in [
            vec![1i64, 2, 3, 1],
            vec![4, 0, 1],
            vec![2, 1],
            vec![3, 3, 0, 2],
        ] {
            let g = poly(5, &coeffs);
            let twice = g.adjoint().unwrap().adjoint().unwrap();
            assert_eq!(twice, g.monic());
            assert_eq!(g.adjoint().unwrap().degree(), g.degree());
        }
    }

    #[test]
    fn pm_self_adjoint_detection() {
        // t-1 and t+1 are the +-self-adjoint linear polynomials
        for p in [3u64, 5, 7] {
            let tm1 = poly(p, &[-1, 1]);
            let tp1 = poly(p, &[1, 1]);
            assert_eq!(tm1.adjoint().unwrap(), tm1);
            assert_eq!(tp1.adjoint().unwrap(), tp1);
        }
        // t - c is +-self-adjoint exactly when c = +-1, so t-2 pairs with
        // t - inv(2) over GF(5) and GF(7)
        for p in [5u64, 7] {
            let other = poly(p, &[-2, 1]);
            assert_ne!(other.adjoint().unwrap(), other);
        }
    }
}
