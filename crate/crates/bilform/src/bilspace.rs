//! Bilinear spaces over GF(p): orthogonal-complement operators, the tower
//! filtrations and the canonical invariant subspaces built from them, the
//! Gabriel block signature, and the inductive reduction to L^2(V)/L(V).
//!
//! A bilinear space is a Gram matrix A with phi(x, y) = x^T A y. Gabriel's
//! theorem splits the space orthogonally into indecomposable degenerate
//! blocks (Gram J_r(0)) and a non-degenerate part; the block sizes and
//! multiplicities are recovered here purely from tower dimensions, which
//! gives a cross-check that is independent of any constructed basis.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{block_diag, jordan_block, Matrix, Subspace};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Which orthogonal complement to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A bilinear space: a Gram matrix with lazily cached tower data.
#[derive(Debug)]
pub struct BilSpace {
    field: PrimeField,
    gram: Matrix,
    towers: OnceLock<TowerData>,
    signature: OnceLock<BlockSignature>,
}

impl Clone for BilSpace {
    fn clone(&self) -> Self {
        BilSpace {
            field: self.field,
            gram: self.gram.clone(),
            towers: self.towers.clone(),
            signature: self.signature.clone(),
        }
    }
}

impl BilSpace {
    pub fn new(gram: Matrix) -> Self {
        assert!(gram.is_square(), "Gram matrix must be square");
        BilSpace {
            field: gram.field(),
            gram,
            towers: OnceLock::new(),
            signature: OnceLock::new(),
        }
    }

    pub fn from_i64(field: PrimeField, n: usize, entries: &[i64]) -> Self {
        BilSpace::new(Matrix::from_i64(field, n, n, entries))
    }

    /// Orthogonal direct sum of Gabriel blocks of the given sizes plus an
    /// optional non-degenerate Gram.
    pub fn from_gabriel_blocks(field: PrimeField, sizes: &[usize], ndeg: Option<&Matrix>) -> Self {
        let mut blocks: Vec<Matrix> = sizes.iter().map(|&r| jordan_block(field, r, 0)).collect();
        if let Some(nd) = ndeg {
            blocks.push(nd.clone());
        }
        BilSpace::new(block_diag(field, &blocks))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    #[inline]
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// phi(v, w) = v^T A w.
    pub fn phi(&self, v: &[u64], w: &[u64]) -> u64 {
        self.gram.pair(v, w)
    }

    /// Left or right orthogonal complement of a subspace:
    /// L(U) = {v : phi(v, U) = 0}, R(U) = {v : phi(U, v) = 0}.
    pub fn orth(&self, u: &Subspace, side: Side) -> Result<Subspace> {
        if u.ambient() != self.dim() {
            return Err(Error::AmbientMismatch(u.ambient(), self.dim()));
        }
        if u.dim() == 0 {
            return Ok(Subspace::full(self.field, self.dim()));
        }
        let constraints = match side {
            Side::Left => u.basis().mul(&self.gram.transpose()),
            Side::Right => u.basis().mul(&self.gram),
        };
        Ok(constraints.kernel())
    }

    /// The tower data, computed once and cached.
    pub fn towers(&self) -> &TowerData {
        self.towers.get_or_init(|| self.compute_towers())
    }

    /// Gabriel block signature, recovered from tower dimensions.
    ///
    /// Panics on an internal inconsistency (negative multiplicity), which
    /// would signal a bug rather than bad input; use
    /// [`BilSpace::block_signature_checked`] to observe that as an error.
    pub fn block_signature(&self) -> &BlockSignature {
        self.block_signature_checked()
            .expect("tower dimensions of a bilinear space always yield a signature")
    }

    pub fn block_signature_checked(&self) -> Result<&BlockSignature> {
        if let Some(sig) = self.signature.get() {
            return Ok(sig);
        }
        let sig = signature_from_towers(self.towers(), self.dim())?;
        Ok(self.signature.get_or_init(|| sig))
    }

    fn compute_towers(&self) -> TowerData {
        let n = self.dim();
        let full = Subspace::full(self.field, n);
        let seq = |side: Side| -> Vec<Subspace> {
            // seq[k] = L^k(V); iterate until both parities stabilize
            let mut seq = vec![full.clone()];
            loop {
                let next = self
                    .orth(seq.last().unwrap(), side)
                    .expect("ambient dimensions agree");
                seq.push(next);
                let k = seq.len() - 1;
                if k >= 4 && seq[k] == seq[k - 2] && seq[k - 1] == seq[k - 3] {
                    break;
                }
                if k > 2 * n + 4 {
                    unreachable!("tower iteration failed to stabilize");
                }
            }
            seq
        };
        let l_seq = seq(Side::Left);
        let r_seq = seq(Side::Right);
        let split = |s: &[Subspace]| -> (Vec<Subspace>, Vec<Subspace>) {
            let odd = s.iter().skip(1).step_by(2).cloned().collect();
            let even = s.iter().step_by(2).cloned().collect();
            (odd, even)
        };
        let (l_odd, l_even) = split(&l_seq);
        let (r_odd, r_even) = split(&r_seq);
        let l_inf = l_odd.last().unwrap().clone();
        let r_inf = r_odd.last().unwrap().clone();
        let l_sup = l_even.last().unwrap().clone();
        let r_sup = r_even.last().unwrap().clone();
        let v_inf = l_inf.intersect(&r_inf);
        let up_inf = l_sup.sum(&r_sup);
        let v_sup = l_sup.intersect(&r_sup);
        let low_inf = l_inf.sum(&r_inf);
        let mut towers = TowerData {
            l_odd,
            r_odd,
            l_even,
            r_even,
            l_inf,
            r_inf,
            l_sup,
            r_sup,
            v_inf,
            up_inf,
            v_sup,
            low_inf,
            vi_chain: Vec::new(),
        };
        let signature = signature_from_towers(&towers, n)
            .expect("tower dimensions of a bilinear space always yield a signature");
        // V(i) per the tower identity V(i) = sum_k L^{2k+1} trap R^{2(s_i-k)+1}
        let mut vi_chain = Vec::new();
        for i in 1..=signature.t() {
            let s_i = signature.s(i);
            let mut acc = Subspace::zero(self.field, n);
            for k in 0..=s_i {
                let cap = towers.l_odd_k(k).intersect(towers.r_odd_k(s_i - k));
                acc = acc.sum(&cap);
            }
            vi_chain.push(acc);
        }
        towers.vi_chain = vi_chain;
        towers
    }

    /// Gram of phi restricted to a subspace, in its RREF basis.
    pub fn restrict_gram(&self, sub: &Subspace) -> Matrix {
        self.gram_on_rows(&sub.basis_rows())
    }

    /// Gram of phi on an arbitrary list of vectors.
    pub fn gram_on_rows(&self, rows: &[Vec<u64>]) -> Matrix {
        let k = rows.len();
        let mut out = Matrix::zeros(self.field, k, k);
        for (a, va) in rows.iter().enumerate() {
            for (b, vb) in rows.iter().enumerate() {
                out[(a, b)] = self.phi(va, vb);
            }
        }
        out
    }

    /// One step of the inductive reduction: the bilinear space induced on
    /// L^2(V)/L(V). L(V) sits inside the radical of L^2(V), so the induced
    /// form is well defined; representatives are the RREF complement pivots.
    /// Every Gabriel block shrinks by 2 (sizes <= 2 vanish) and the
    /// non-degenerate part is carried over up to congruence.
    pub fn reduce_step(&self) -> BilSpace {
        let full = Subspace::full(self.field, self.dim());
        let l1 = self.orth(&full, Side::Left).unwrap();
        let l2 = self.orth(&l1, Side::Left).unwrap();
        let reps = l2.complement_in(&l1);
        BilSpace::new(self.gram_on_rows(&reps))
    }
}

/// All tower filtrations and derived canonical subspaces of a space.
///
/// Sequences are stored stabilized: `l_odd[k]` is L^{2k+1}(V) and the last
/// entry repeats forever; accessors clamp.
#[derive(Debug, Clone)]
pub struct TowerData {
    pub l_odd: Vec<Subspace>,
    pub r_odd: Vec<Subspace>,
    pub l_even: Vec<Subspace>,
    pub r_even: Vec<Subspace>,
    pub l_inf: Subspace,
    pub r_inf: Subspace,
    pub l_sup: Subspace,
    pub r_sup: Subspace,
    /// V_infinity: the unique maximal totally isotropic subspace of the odd
    /// part, equal to L_inf trap R_inf and to V(1).
    pub v_inf: Subspace,
    /// ^infinity V = L^infinity + R^infinity = V_inf perp V_even perp V_ndeg.
    pub up_inf: Subspace,
    /// V^infinity = L^infinity trap R^infinity = V_inf perp V_ndeg.
    pub v_sup: Subspace,
    /// _infinity V = L_inf + R_inf = V_inf perp V_even.
    pub low_inf: Subspace,
    /// V(1) supseteq V(2) supseteq ... supseteq V(t).
    pub vi_chain: Vec<Subspace>,
}

impl TowerData {
    /// L^{2k+1}(V), clamped at the stable value.
    pub fn l_odd_k(&self, k: usize) -> &Subspace {
        self.l_odd.get(k).unwrap_or_else(|| self.l_odd.last().unwrap())
    }

    pub fn r_odd_k(&self, k: usize) -> &Subspace {
        self.r_odd.get(k).unwrap_or_else(|| self.r_odd.last().unwrap())
    }

    /// L^{2k}(V), clamped; index 0 is the full space.
    pub fn l_even_k(&self, k: usize) -> &Subspace {
        self.l_even
            .get(k)
            .unwrap_or_else(|| self.l_even.last().unwrap())
    }

    pub fn r_even_k(&self, k: usize) -> &Subspace {
        self.r_even
            .get(k)
            .unwrap_or_else(|| self.r_even.last().unwrap())
    }

    /// V(i) for 1 <= i <= t; zero subspace beyond t.
    pub fn v_chain(&self, i: usize) -> Subspace {
        assert!(i >= 1);
        if i <= self.vi_chain.len() {
            self.vi_chain[i - 1].clone()
        } else {
            let ambient = self.v_inf.ambient();
            Subspace::zero(self.v_inf.field(), ambient)
        }
    }
}

/// Sizes and multiplicities of the Gabriel blocks plus the non-degenerate
/// dimension. A complete congruence invariant of the totally degenerate part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSignature {
    /// s -> multiplicity of odd blocks of size 2s+1 (s >= 0).
    pub odd: BTreeMap<usize, usize>,
    /// s -> multiplicity of even blocks of size 2s (s >= 1).
    pub even: BTreeMap<usize, usize>,
    /// Dimension of the non-degenerate part.
    pub ndeg_dim: usize,
}

impl BlockSignature {
    pub fn empty(ndeg_dim: usize) -> Self {
        BlockSignature {
            odd: BTreeMap::new(),
            even: BTreeMap::new(),
            ndeg_dim,
        }
    }

    /// Number of distinct odd block sizes (the parameter t).
    pub fn t(&self) -> usize {
        self.odd.len()
    }

    /// s_1 > s_2 > ... > s_t.
    pub fn s_values(&self) -> Vec<usize> {
        self.odd.keys().rev().copied().collect()
    }

    /// m_1, ..., m_t in the order of s_values.
    pub fn m_values(&self) -> Vec<usize> {
        self.odd.values().rev().copied().collect()
    }

    /// s_i for a 1-indexed family.
    pub fn s(&self, i: usize) -> usize {
        self.s_values()[i - 1]
    }

    /// m_i for a 1-indexed family.
    pub fn m(&self, i: usize) -> usize {
        self.m_values()[i - 1]
    }

    /// t if s_t > 0, else t - 1 (t-bar: families contributing to V_odd^dag).
    pub fn t_bar(&self) -> usize {
        let t = self.t();
        if t == 0 {
            0
        } else if self.s(t) > 0 {
            t
        } else {
            t - 1
        }
    }

    pub fn sum_m(&self) -> usize {
        self.odd.values().sum()
    }

    pub fn odd_dim(&self) -> usize {
        self.odd.iter().map(|(&s, &m)| m * (2 * s + 1)).sum()
    }

    pub fn even_dim(&self) -> usize {
        self.even.iter().map(|(&s, &m)| m * 2 * s).sum()
    }

    pub fn total_dim(&self) -> usize {
        self.odd_dim() + self.even_dim() + self.ndeg_dim
    }

    /// dim V_infinity = sum m_i (s_i + 1).
    pub fn v_inf_dim(&self) -> usize {
        self.odd.iter().map(|(&s, &m)| m * (s + 1)).sum()
    }

    /// dim V_odd^dag = sum m_i s_i.
    pub fn dag_dim(&self) -> usize {
        self.odd.iter().map(|(&s, &m)| m * s).sum()
    }

    /// Degenerate block sizes, largest first, with multiplicity.
    pub fn sizes_desc(&self) -> Vec<usize> {
        let mut sizes = Vec::new();
        for (&s, &m) in &self.odd {
            for _ in 0..m {
                sizes.push(2 * s + 1);
            }
        }
        for (&s, &m) in &self.even {
            for _ in 0..m {
                sizes.push(2 * s);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// The signature of L^2(V)/L(V): every block shrinks by 2, blocks of
    /// size <= 2 vanish, the non-degenerate dimension is preserved.
    pub fn shrink(&self) -> BlockSignature {
        let mut odd = BTreeMap::new();
        for (&s, &m) in &self.odd {
            if s >= 1 {
                odd.insert(s - 1, m);
            }
        }
        let mut even = BTreeMap::new();
        for (&s, &m) in &self.even {
            if s >= 2 {
                even.insert(s - 1, m);
            }
        }
        BlockSignature {
            odd,
            even,
            ndeg_dim: self.ndeg_dim,
        }
    }

    /// Canonical Gram of the totally degenerate part in the fixed output
    /// convention: odd families by descending s, then even blocks by
    /// descending size, each block J_r(0).
    pub fn degenerate_canonical_gram(&self, field: PrimeField) -> Matrix {
        let mut blocks = Vec::new();
        for (&s, &m) in self.odd.iter().rev() {
            for _ in 0..m {
                blocks.push(jordan_block(field, 2 * s + 1, 0));
            }
        }
        for (&s, &m) in self.even.iter().rev() {
            for _ in 0..m {
                blocks.push(jordan_block(field, 2 * s, 0));
            }
        }
        block_diag(field, &blocks)
    }
}

impl std::fmt::Display for BlockSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (&s, &m) in self.odd.iter().rev() {
            parts.push(format!("{m} x N{}", 2 * s + 1));
        }
        for (&s, &m) in self.even.iter().rev() {
            parts.push(format!("{m} x N{}", 2 * s));
        }
        if self.ndeg_dim > 0 {
            parts.push(format!("ndeg {}", self.ndeg_dim));
        }
        if parts.is_empty() {
            parts.push("empty".to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Recovers the signature from tower dimensions.
///
/// With f(k) = dim(L^{2k+1} trap R_inf) = sum over odd blocks of
/// min(k+1, s+1), the odd multiplicities are second differences of f; even
/// multiplicities come the same way from the residual of dim L^{2k+1}.
fn signature_from_towers(towers: &TowerData, n: usize) -> Result<BlockSignature> {
    let bad = |msg: &str| Error::InternalInconsistency(format!("signature recovery: {msg}"));
    let kmax = n + 1;
    let f: Vec<usize> = (0..=kmax + 1)
        .map(|k| towers.l_odd_k(k).intersect(&towers.r_inf).dim())
        .collect();
    // delta(k) = #odd blocks with s >= k
    let mut delta = vec![0usize; kmax + 2];
    for k in 0..=kmax {
        let prev = if k == 0 { 0 } else { f[k - 1] };
        if f[k] < prev {
            return Err(bad("f not monotone"));
        }
        delta[k] = f[k] - prev;
    }
    let mut odd = BTreeMap::new();
    for k in 0..=kmax {
        if delta[k] < delta[k + 1] {
            return Err(bad("odd block counts not monotone"));
        }
        let mu = delta[k] - delta[k + 1];
        if mu > 0 {
            odd.insert(k, mu);
        }
    }
    // residual g(k) = dim L^{2k+1} - odd contribution = sum nu_s min(k+1, s)
    let g: Vec<usize> = (0..=kmax + 1)
        .map(|k| {
            let odd_part: usize = odd.iter().map(|(&s, &m)| m * (k + 1).min(s + 1)).sum();
            let l = towers.l_odd_k(k).dim();
            l.checked_sub(odd_part).unwrap_or(usize::MAX)
        })
        .collect();
    if g.iter().any(|&x| x == usize::MAX) {
        return Err(bad("odd contribution exceeds tower dimension"));
    }
    let mut eps = vec![0usize; kmax + 2];
    for k in 0..=kmax {
        let prev = if k == 0 { 0 } else { g[k - 1] };
        if g[k] < prev {
            return Err(bad("g not monotone"));
        }
        eps[k] = g[k] - prev;
    }
    let mut even = BTreeMap::new();
    for s in 1..=kmax {
        if eps[s - 1] < eps[s] {
            return Err(bad("even block counts not monotone"));
        }
        let nu = eps[s - 1] - eps[s];
        if nu > 0 {
            even.insert(s, nu);
        }
    }
    let sig = BlockSignature {
        odd,
        even,
        ndeg_dim: 0,
    };
    let deg_total = sig.odd_dim() + sig.even_dim();
    if deg_total > n {
        return Err(bad("degenerate dimensions exceed the space"));
    }
    Ok(BlockSignature {
        ndeg_dim: n - deg_total,
        ..sig
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::jordan_block;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn e(n: usize, i: usize) -> Vec<u64> {
        let mut v = vec![0u64; n];
        v[i] = 1;
        v
    }

    fn span(field: PrimeField, n: usize, idxs: &[usize]) -> Subspace {
        Subspace::from_rows(field, n, idxs.iter().map(|&i| e(n, i)).collect())
    }

    #[test]
    fn orth_examples() {
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3], None);
        let full = Subspace::full(f(2), 3);
        assert_eq!(sp.orth(&full, Side::Left).unwrap(), span(f(2), 3, &[0]));
        assert_eq!(sp.orth(&full, Side::Right).unwrap(), span(f(2), 3, &[2]));

        let zero = BilSpace::new(Matrix::zeros(f(3), 2, 2));
        let u = span(f(3), 2, &[0]);
        assert_eq!(
            zero.orth(&u, Side::Left).unwrap(),
            Subspace::full(f(3), 2)
        );
    }

    #[test]
    fn orth_ambient_mismatch() {
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3], None);
        let u = Subspace::full(f(2), 2);
        assert_eq!(sp.orth(&u, Side::Left), Err(Error::AmbientMismatch(2, 3)));
    }

    #[test]
    fn towers_on_n5() {
        let sp = BilSpace::from_gabriel_blocks(f(3), &[5], None);
        let t = sp.towers();
        assert_eq!(*t.l_odd_k(0), span(f(3), 5, &[0]));
        assert_eq!(*t.l_odd_k(1), span(f(3), 5, &[0, 2]));
        assert_eq!(*t.l_odd_k(2), span(f(3), 5, &[0, 2, 4]));
        assert_eq!(t.l_inf, span(f(3), 5, &[0, 2, 4]));
        assert_eq!(
            t.l_odd_k(1).intersect(t.r_odd_k(1)),
            span(f(3), 5, &[2])
        );
    }

    #[test]
    fn towers_on_n4() {
        let sp = BilSpace::from_gabriel_blocks(f(3), &[4], None);
        let t = sp.towers();
        assert_eq!(t.l_inf, span(f(3), 4, &[0, 2]));
        assert_eq!(t.r_inf, span(f(3), 4, &[1, 3]));
        assert_eq!(t.l_inf.sum(&t.r_inf).dim(), 4);
        assert_eq!(t.v_inf.dim(), 0);
        assert_eq!(t.low_inf.dim(), 4);
    }

    #[test]
    fn towers_on_j3_plus_j1() {
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3, 1], None);
        let t = sp.towers();
        assert_eq!(t.v_inf, span(f(2), 4, &[0, 2, 3]));
        assert_eq!(t.v_chain(2), span(f(2), 4, &[3]));
        assert_eq!(t.v_chain(1), t.v_inf);
    }

    #[test]
    fn signature_examples() {
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3], None);
        let sig = sp.block_signature();
        assert_eq!(sig.odd, BTreeMap::from([(1, 1)]));
        assert!(sig.even.is_empty());
        assert_eq!(sig.ndeg_dim, 0);
        assert_eq!((sig.t(), sig.t_bar()), (1, 1));

        let sp = BilSpace::from_gabriel_blocks(f(2), &[3, 1], None);
        let sig = sp.block_signature();
        assert_eq!(sig.odd, BTreeMap::from([(1, 1), (0, 1)]));
        assert_eq!(sig.s_values(), vec![1, 0]);
        assert_eq!(sig.m_values(), vec![1, 1]);
        assert_eq!(sig.t_bar(), 1);

        // J2 + hyperbolic-ish nondegenerate 2x2 over GF(3)
        let nd = Matrix::from_i64(f(3), 2, 2, &[0, 1, 1, 0]);
        let sp = BilSpace::from_gabriel_blocks(f(3), &[2], Some(&nd));
        let sig = sp.block_signature();
        assert!(sig.odd.is_empty());
        assert_eq!(sig.even, BTreeMap::from([(1, 1)]));
        assert_eq!(sig.ndeg_dim, 2);
    }

    #[test]
    fn signature_of_mixed_space() {
        let nd = Matrix::from_i64(f(5), 2, 2, &[1, 0, 0, 2]);
        let sp = BilSpace::from_gabriel_blocks(f(5), &[5, 4, 3, 1], Some(&nd));
        let sig = sp.block_signature();
        assert_eq!(sig.odd, BTreeMap::from([(2, 1), (1, 1), (0, 1)]));
        assert_eq!(sig.even, BTreeMap::from([(2, 1)]));
        assert_eq!(sig.ndeg_dim, 2);
        assert_eq!(sig.total_dim(), 15);
    }

    #[test]
    fn dim_left_radical_equals_dim_right_radical() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for p in [2u64, 3, 5] {
            for n in 1..6 {
                let a = Matrix::random(f(p), n, n, &mut rng);
                let sp = BilSpace::new(a);
                let full = Subspace::full(f(p), n);
                let l = sp.orth(&full, Side::Left).unwrap();
                let r = sp.orth(&full, Side::Right).unwrap();
                assert_eq!(l.dim(), r.dim());
            }
        }
    }

    #[test]
    fn blockwise_additivity() {
        // towers of an orthogonal sum decompose blockwise
        let field = f(3);
        let a = jordan_block(field, 3, 0);
        let b = jordan_block(field, 4, 0);
        let sum = BilSpace::new(block_diag(field, &[a.clone(), b.clone()]));
        let sa = BilSpace::new(a);
        let sb = BilSpace::new(b);
        for k in 0..4 {
            let combined = sum.towers().l_odd_k(k);
            let left = sa.towers().l_odd_k(k);
            let right = sb.towers().l_odd_k(k);
            assert_eq!(combined.dim(), left.dim() + right.dim());
            for row in left.basis_rows() {
                let mut v = row.clone();
                v.extend(vec![0u64; 4]);
                assert!(combined.contains_vec(&v));
            }
            for row in right.basis_rows() {
                let mut v = vec![0u64; 3];
                v.extend(row);
                assert!(combined.contains_vec(&v));
            }
        }
    }

    #[test]
    fn reduce_step_examples() {
        let sp = BilSpace::from_gabriel_blocks(f(3), &[5], None);
        let red = sp.reduce_step();
        assert_eq!(red.dim(), 3);
        assert_eq!(red.block_signature().odd, BTreeMap::from([(1, 1)]));

        let sp = BilSpace::from_gabriel_blocks(f(3), &[2, 1], None);
        let red = sp.reduce_step();
        assert_eq!(red.dim(), 0);

        let nd = Matrix::from_i64(f(5), 2, 2, &[1, 0, 0, 2]);
        let sp = BilSpace::from_gabriel_blocks(f(5), &[3], Some(&nd));
        let red = sp.reduce_step();
        let sig = red.block_signature();
        assert_eq!(sig.odd, BTreeMap::from([(0, 1)]));
        assert_eq!(sig.ndeg_dim, 2);
    }

    #[test]
    fn shrink_law_matches_reduce_step() {
        let nd = Matrix::from_i64(f(3), 1, 1, &[1]);
        for sizes in [vec![5usize], vec![3, 1], vec![4, 3], vec![5, 4, 2], vec![2, 2]] {
            let sp = BilSpace::from_gabriel_blocks(f(3), &sizes, Some(&nd));
            let red = sp.reduce_step();
            assert_eq!(*red.block_signature(), sp.block_signature().shrink());
        }
    }

    #[test]
    fn empty_space_is_legal() {
        let sp = BilSpace::new(Matrix::zeros(f(2), 0, 0));
        assert_eq!(sp.block_signature().total_dim(), 0);
        assert_eq!(sp.towers().v_inf.dim(), 0);
        let red = sp.reduce_step();
        assert_eq!(red.dim(), 0);
    }
}
