//! Constructive Gabriel decomposition: finds an invertible P with P^T A P in
//! canonical form (one lower Jordan block J_r(0) per degenerate block, then
//! the non-degenerate part carried over by congruence).
//!
//! Blocks are split off largest first by growing a chain u_r, ..., u_1 from a
//! tower-filtered seed in the right radical. Besides the Gram conditions
//! phi(u_{j+1}, u_j) = 1 the solver enforces the shift compatibility
//! B u_j = B^T u_{j+2}, which makes the chain's two-sided orthogonal
//! complement have the right dimension, so V = chain perp complement holds
//! exactly and the recursion is sound. The final P^T A P is verified entry
//! by entry; the search backtracks over seeds and solution choices, so a
//! wrong heuristic pick can never corrupt the result.

use crate::bilspace::{BilSpace, BlockSignature};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{Matrix, Subspace};
use std::collections::BTreeMap;

const STEP_CANDIDATE_CAP: usize = 1024;
const SEED_CAP: usize = 4096;
const NODE_BUDGET: u64 = 500_000;

/// Change of basis realizing the Gabriel canonical form, with the index
/// bookkeeping for the adapted basis vectors e^{i,p}_k.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    field: PrimeField,
    dim: usize,
    p: Matrix,
    p_inv: Matrix,
    /// The Gram matrix the basis was built for.
    original: Matrix,
    /// P^T A P, the canonical Gram.
    canonical: Matrix,
    signature: BlockSignature,
    /// (family i, copy p) -> the 2 s_i + 1 column positions, k = 1-based.
    odd_cols: BTreeMap<(usize, usize), Vec<usize>>,
    /// One entry per even block copy, descending size: (s, columns).
    even_cols: Vec<(usize, Vec<usize>)>,
    ndeg_cols: Vec<usize>,
}

/// The orthogonal split carried by an adapted basis.
#[derive(Debug, Clone)]
pub struct SplitParts {
    pub v_odd: Subspace,
    pub v_even: Subspace,
    pub v_ndeg: Subspace,
    pub v_odd_dag: Subspace,
}

impl AdaptedBasis {
    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Columns of `p` are the adapted basis vectors in original coordinates.
    #[inline]
    pub fn p(&self) -> &Matrix {
        &self.p
    }

    #[inline]
    pub fn p_inv(&self) -> &Matrix {
        &self.p_inv
    }

    #[inline]
    pub fn signature(&self) -> &BlockSignature {
        &self.signature
    }

    /// Column of e^{i,p}_k (family i, copy p, position k, all 1-based).
    pub fn col(&self, i: usize, copy: usize, k: usize) -> usize {
        let cols = &self.odd_cols[&(i, copy)];
        cols[k - 1]
    }

    pub fn odd_block_cols(&self, i: usize, copy: usize) -> &[usize] {
        &self.odd_cols[&(i, copy)]
    }

    pub fn even_blocks(&self) -> &[(usize, Vec<usize>)] {
        &self.even_cols
    }

    pub fn ndeg_cols(&self) -> &[usize] {
        &self.ndeg_cols
    }

    /// All columns spanning V_infinity (odd positions of odd blocks).
    pub fn v_inf_cols(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for cols in self.odd_cols.values() {
            for (k0, &c) in cols.iter().enumerate() {
                if k0 % 2 == 0 {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All columns spanning V_odd^dag (even positions of odd blocks).
    pub fn dag_cols(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for cols in self.odd_cols.values() {
            for (k0, &c) in cols.iter().enumerate() {
                if k0 % 2 == 1 {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn even_cols_flat(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (_, cols) in &self.even_cols {
            out.extend(cols.iter().copied());
        }
        out
    }

    /// Basis vector for a column, in original coordinates.
    pub fn column_vector(&self, c: usize) -> Vec<u64> {
        self.p.col(c)
    }

    pub fn span_of_cols(&self, cols: &[usize]) -> Subspace {
        let rows: Vec<Vec<u64>> = cols.iter().map(|&c| self.p.col(c)).collect();
        Subspace::from_rows(self.field, self.dim, rows)
    }

    /// P^T A P for the original Gram A.
    pub fn canonical_gram(&self, original: &Matrix) -> Matrix {
        self.p.transpose().mul(original).mul(&self.p)
    }

    /// The canonical Gram P^T A P, cached at construction.
    pub fn canonical(&self) -> &Matrix {
        &self.canonical
    }

    /// The Gram matrix the basis was built for.
    pub fn original(&self) -> &Matrix {
        &self.original
    }

    /// Conjugates a matrix given in adapted coordinates back to the original
    /// basis: P M P^{-1}.
    pub fn to_original(&self, m_adapted: &Matrix) -> Matrix {
        self.p.mul(m_adapted).mul(&self.p_inv)
    }

    /// V_odd perp V_even perp V_ndeg plus the totally isotropic complement
    /// V_odd^dag of V_infinity inside V_odd.
    pub fn split_parts(&self) -> SplitParts {
        let mut odd = Vec::new();
        for cols in self.odd_cols.values() {
            odd.extend(cols.iter().copied());
        }
        SplitParts {
            v_odd: self.span_of_cols(&odd),
            v_even: self.span_of_cols(&self.even_cols_flat()),
            v_ndeg: self.span_of_cols(&self.ndeg_cols),
            v_odd_dag: self.span_of_cols(&self.dag_cols()),
        }
    }

    /// The vectors E^{i,p} = e^{i,p}_1 + e^{i,p}_3 + ... per family, each of
    /// which spans its share of the radical of phi - phi^T on V_odd. The
    /// membership is checked against the original Gram.
    pub fn asym_radical(&self, space: &BilSpace) -> Result<Vec<(usize, Vec<Vec<u64>>)>> {
        let f = self.field;
        let asym = space.gram().sub(&space.gram().transpose());
        let split = self.split_parts();
        let mut out: Vec<(usize, Vec<Vec<u64>>)> = Vec::new();
        for (&(i, _), cols) in &self.odd_cols {
            let mut e = vec![0u64; self.dim];
            for (k0, &c) in cols.iter().enumerate() {
                if k0 % 2 == 0 {
                    let v = self.p.col(c);
                    for (a, b) in e.iter_mut().zip(v) {
                        *a = f.add(*a, b);
                    }
                }
            }
            for w in split.v_odd.basis_rows() {
                if asym.pair(&e, &w) != 0 || asym.pair(&w, &e) != 0 {
                    return Err(Error::InternalInconsistency(
                        "asymmetry radical vector fails its membership check".into(),
                    ));
                }
            }
            match out.iter_mut().find(|(fam, _)| *fam == i) {
                Some((_, list)) => list.push(e),
                None => out.push((i, vec![e])),
            }
        }
        Ok(out)
    }
}

/// Builds an adapted basis for the space. Deterministic: seeds and solution
/// choices are enumerated in a fixed order and the first full success wins.
pub fn gabriel_basis(space: &BilSpace) -> Result<AdaptedBasis> {
    let n = space.dim();
    let field = space.field();
    let signature = space.block_signature_checked()?.clone();
    let expected = signature.sizes_desc();
    let mut budget = NODE_BUDGET;
    let mut blocks: Vec<(usize, Vec<Vec<u64>>)> = Vec::new();
    let mut ndeg_rows: Vec<Vec<u64>> = Vec::new();
    extract_rec(
        space.gram().clone(),
        Matrix::identity(field, n),
        &expected,
        &mut blocks,
        &mut ndeg_rows,
        &mut budget,
    )?;

    // assemble columns: odd families (descending s, copies in extraction
    // order), then even blocks descending, then the non-degenerate part
    let mut odd_cols = BTreeMap::new();
    let mut even_cols = Vec::new();
    let mut ndeg_cols = Vec::new();
    let mut p = Matrix::zeros(field, n, n);
    let mut next = 0usize;
    let mut place = |p: &mut Matrix, next: &mut usize, v: &[u64]| -> usize {
        let c = *next;
        p.set_col(c, v);
        *next += 1;
        c
    };
    for (i, &s) in signature.s_values().iter().enumerate() {
        let size = 2 * s + 1;
        let mut copy = 0usize;
        for (bsize, chain) in &blocks {
            if *bsize != size {
                continue;
            }
            copy += 1;
            let cols: Vec<usize> = chain.iter().map(|v| place(&mut p, &mut next, v)).collect();
            odd_cols.insert((i + 1, copy), cols);
        }
        debug_assert_eq!(copy, signature.m(i + 1));
    }
    for (&s, &m) in signature.even.iter().rev() {
        let size = 2 * s;
        let mut placed = 0usize;
        for (bsize, chain) in &blocks {
            if *bsize != size {
                continue;
            }
            placed += 1;
            let cols: Vec<usize> = chain.iter().map(|v| place(&mut p, &mut next, v)).collect();
            even_cols.push((s, cols));
        }
        debug_assert_eq!(placed, m);
    }
    for v in &ndeg_rows {
        ndeg_cols.push(place(&mut p, &mut next, v));
    }
    if next != n {
        return Err(Error::DecompositionFailure);
    }
    let p_inv = p.inverse().map_err(|_| Error::DecompositionFailure)?;
    let canonical = p.transpose().mul(space.gram()).mul(&p);
    let basis = AdaptedBasis {
        field,
        dim: n,
        p,
        p_inv,
        original: space.gram().clone(),
        canonical,
        signature,
        odd_cols,
        even_cols,
        ndeg_cols,
    };
    verify_canonical(&basis, space.gram())?;
    Ok(basis)
}

/// Exact post-condition: P^T A P consists of the canonical degenerate blocks,
/// zero interaction with the trailing part, and an invertible trailing part.
fn verify_canonical(basis: &AdaptedBasis, gram: &Matrix) -> Result<()> {
    let c = basis.canonical_gram(gram);
    let n = basis.dim;
    let deg_dim = n - basis.ndeg_cols.len();
    let expected_deg = basis.signature.degenerate_canonical_gram(basis.field);
    for i in 0..n {
        for j in 0..n {
            let want = if i < deg_dim && j < deg_dim {
                expected_deg[(i, j)]
            } else if i < deg_dim || j < deg_dim {
                0
            } else {
                continue;
            };
            if c[(i, j)] != want {
                return Err(Error::DecompositionFailure);
            }
        }
    }
    if basis.ndeg_cols.len() != basis.signature.ndeg_dim {
        return Err(Error::DecompositionFailure);
    }
    let nd = submatrix(&c, deg_dim, n);
    if !nd.is_invertible() {
        return Err(Error::DecompositionFailure);
    }
    Ok(())
}

fn submatrix(m: &Matrix, from: usize, to: usize) -> Matrix {
    let k = to - from;
    let mut out = Matrix::zeros(m.field(), k, k);
    for i in 0..k {
        for j in 0..k {
            out[(i, j)] = m[(from + i, from + j)];
        }
    }
    out
}

fn extract_rec(
    gram: Matrix,
    embed: Matrix,
    expected: &[usize],
    blocks: &mut Vec<(usize, Vec<Vec<u64>>)>,
    ndeg_rows: &mut Vec<Vec<u64>>,
    budget: &mut u64,
) -> Result<()> {
    let n = gram.rows();
    if expected.is_empty() {
        if gram.rank() != n {
            return Err(Error::DecompositionFailure);
        }
        for i in 0..n {
            ndeg_rows.push(embed.row(i).to_vec());
        }
        return Ok(());
    }
    let r = expected[0];
    let space = BilSpace::new(gram.clone());
    for seed in seed_candidates(&space, r, budget)? {
        let Some(chain) = grow_chain(&gram, r, &seed, budget) else {
            continue;
        };
        let Some((w_basis, w_gram)) = complement(&gram, &chain) else {
            continue;
        };
        // lift to original coordinates and recurse
        let lifted: Vec<Vec<u64>> = chain
            .iter()
            .rev() // chain is u_r..u_1; adapted order is u_1..u_r
            .map(|v| embed.vec_mul(v))
            .collect();
        let w_embed = w_basis.basis().mul(&embed);
        let saved_blocks = blocks.len();
        let saved_ndeg = ndeg_rows.len();
        blocks.push((r, lifted));
        match extract_rec(w_gram, w_embed, &expected[1..], blocks, ndeg_rows, budget) {
            Ok(()) => return Ok(()),
            Err(Error::BudgetExceeded(b)) => return Err(Error::BudgetExceeded(b)),
            Err(_) => {
                blocks.truncate(saved_blocks);
                ndeg_rows.truncate(saved_ndeg);
            }
        }
    }
    Err(Error::DecompositionFailure)
}

/// Seed vectors for a block of size r, filtered through the towers so that a
/// full-length chain exists: ends of odd blocks of size exactly 2s+1 live in
/// (ker B trap L^{2s+1}) minus L^{2s-1}; ends of even blocks of size 2s are
/// the elements of ker B that survive s-1 shift descents but avoid the odd
/// limit L_inf.
fn seed_candidates(space: &BilSpace, r: usize, budget: &mut u64) -> Result<Vec<Vec<u64>>> {
    let towers = space.towers();
    let field = space.field();
    let n = space.dim();
    let ker = space.gram().kernel();
    let (upper, lower) = if r % 2 == 1 {
        let s = (r - 1) / 2;
        let upper = towers.l_odd_k(s).intersect(&ker);
        let lower = if s == 0 {
            Subspace::zero(field, n)
        } else {
            towers.l_odd_k(s - 1).clone()
        };
        (upper, lower)
    } else {
        let s = r / 2;
        let mut d = Subspace::full(field, n);
        let bt = space.gram().transpose();
        for _ in 1..s {
            let image = image_of(space.gram(), &d);
            d = preimage(&bt, &image);
        }
        (ker.intersect(&d), towers.l_inf.clone())
    };
    let mut seeds = Vec::new();
    for v in upper.enumerate_vectors() {
        if !spend(budget, 1) {
            return Err(Error::BudgetExceeded(NODE_BUDGET));
        }
        if v.iter().all(|&c| c == 0) || lower.contains_vec(&v) {
            continue;
        }
        seeds.push(v);
        if seeds.len() >= SEED_CAP {
            break;
        }
    }
    Ok(seeds)
}

/// Image of a subspace under a matrix acting on column vectors.
fn image_of(m: &Matrix, sub: &Subspace) -> Subspace {
    let rows: Vec<Vec<u64>> = sub.basis_rows().iter().map(|v| m.mul_vec(v)).collect();
    Subspace::from_rows(m.field(), m.rows(), rows)
}

/// {u : m u in t}.
fn preimage(m: &Matrix, t: &Subspace) -> Subspace {
    residual_projector(t).mul(m).kernel()
}

/// Linear map whose kernel is exactly the subspace: reduction against the
/// RREF basis.
fn residual_projector(t: &Subspace) -> Matrix {
    let n = t.ambient();
    let f = t.field();
    let mut proj = Matrix::identity(f, n);
    for i in 0..t.dim() {
        let row = t.basis().row(i).to_vec();
        let pivot = (0..n).find(|&j| row[j] != 0).expect("RREF row is nonzero");
        for (a, &ra) in row.iter().enumerate() {
            proj[(a, pivot)] = f.sub(proj[(a, pivot)], ra);
        }
    }
    proj
}

fn spend(budget: &mut u64, amount: u64) -> bool {
    if *budget < amount {
        return false;
    }
    *budget -= amount;
    true
}

/// Grows the chain u_r, u_{r-1}, ..., u_1 from the seed; returns it in that
/// order, with the Gram of (u_1, ..., u_r) exactly J_r(0).
fn grow_chain(gram: &Matrix, r: usize, seed: &[u64], budget: &mut u64) -> Option<Vec<Vec<u64>>> {
    let field = gram.field();
    let n = gram.rows();
    let bt = gram.transpose();
    if r == 1 {
        // single vector in the radical
        if bt.mul_vec(seed).iter().any(|&c| c != 0) {
            return None;
        }
        return Some(vec![seed.to_vec()]);
    }
    let im_proj = residual_projector(&image_of_full(gram));
    let lookahead = im_proj.mul(&bt);

    // the partner u_{r-1}: phi(u_r, x) = 1 plus the end/lookahead condition
    let mut rows: Vec<Vec<u64>> = vec![bt.mul_vec(seed)];
    let mut rhs: Vec<u64> = vec![1];
    push_step_end_rows(r - 1, &bt, &lookahead, &mut rows, &mut rhs);
    let system = Matrix::from_rows(field, &rows);
    let (particular, kernel) = system.solve_affine(&rhs)?;
    let mut chain = vec![seed.to_vec()];
    for cand in affine_candidates(field, particular, kernel) {
        if !spend(budget, 1) {
            return None;
        }
        let mut partner = cand;
        // one quadratic normalization: make phi(x, x) = 0 by shifting along
        // the seed, which lies in ker B
        let diag = gram.pair(&partner, &partner);
        if diag != 0 {
            let a = field.neg(diag);
            for (x, s) in partner.iter_mut().zip(seed) {
                *x = field.add(*x, field.mul(a, *s));
            }
        }
        debug_assert_eq!(gram.pair(&partner, &partner), 0);
        debug_assert_eq!(gram.pair(seed, &partner), 1);
        chain.push(partner);
        if descend(gram, &bt, &lookahead, r, &mut chain, budget)
            && chain_is_canonical(gram, &chain)
            && independent(field, n, &chain)
        {
            return Some(chain);
        }
        chain.truncate(1);
    }
    None
}

fn image_of_full(m: &Matrix) -> Subspace {
    let cols: Vec<Vec<u64>> = (0..m.cols()).map(|j| m.col(j)).collect();
    Subspace::from_rows(m.field(), m.rows(), cols)
}

/// End-of-chain and solvability-lookahead rows for the step that places the
/// chain vector with index `j` (1-based from the left end).
fn push_step_end_rows(
    j: usize,
    bt: &Matrix,
    lookahead: &Matrix,
    rows: &mut Vec<Vec<u64>>,
    rhs: &mut Vec<u64>,
) {
    if j == 1 {
        // left end: B^T x = 0
        for i in 0..bt.rows() {
            rows.push(bt.row(i).to_vec());
            rhs.push(0);
        }
    } else if j >= 3 {
        // the next shift step B u_{j-2} = B^T x must stay solvable
        for i in 0..lookahead.rows() {
            rows.push(lookahead.row(i).to_vec());
            rhs.push(0);
        }
    }
}

/// Recursively places u_j for j = r-2 down to 1. `chain` holds
/// u_r, ..., u_{j+1} so far.
fn descend(
    gram: &Matrix,
    bt: &Matrix,
    lookahead: &Matrix,
    r: usize,
    chain: &mut Vec<Vec<u64>>,
    budget: &mut u64,
) -> bool {
    let field = gram.field();
    let placed = chain.len();
    if placed == r {
        return true;
    }
    let j = r - placed; // index of the vector being placed
    let u_next2 = &chain[placed - 2]; // u_{j+2}
    let target = bt.mul_vec(u_next2);
    // B x = B^T u_{j+2}
    let mut rows: Vec<Vec<u64>> = (0..gram.rows()).map(|i| gram.row(i).to_vec()).collect();
    let mut rhs = target;
    // phi(x, u_{r-1}) = 0 (the one pairing not forced by the shift relation)
    rows.push(gram.mul_vec(&chain[1]));
    rhs.push(0);
    push_step_end_rows(j, bt, lookahead, &mut rows, &mut rhs);
    let system = Matrix::from_rows(field, &rows);
    let Some((particular, kernel)) = system.solve_affine(&rhs) else {
        return false;
    };
    for cand in affine_candidates(field, particular, kernel) {
        if !spend(budget, 1) {
            return false;
        }
        chain.push(cand);
        if descend(gram, bt, lookahead, r, chain, budget) {
            return true;
        }
        chain.pop();
    }
    false
}

/// Deterministic enumeration of an affine solution space: the particular
/// solution first, then kernel combinations in lexicographic coefficient
/// order, capped.
fn affine_candidates(
    field: PrimeField,
    particular: Vec<u64>,
    kernel: Vec<Vec<u64>>,
) -> impl Iterator<Item = Vec<u64>> {
    let p = field.modulus() as u128;
    let total: u128 = p
        .checked_pow(kernel.len() as u32)
        .unwrap_or(u128::MAX)
        .min(STEP_CANDIDATE_CAP as u128);
    (0..total).map(move |mut code| {
        let mut v = particular.clone();
        for k in &kernel {
            let c = (code % p) as u64;
            code /= p;
            if c != 0 {
                for (a, b) in v.iter_mut().zip(k) {
                    *a = field.add(*a, field.mul(c, *b));
                }
            }
        }
        v
    })
}

/// Gram of (u_1, ..., u_r) (chain stored reversed) must be exactly J_r(0).
fn chain_is_canonical(gram: &Matrix, chain: &[Vec<u64>]) -> bool {
    let r = chain.len();
    for a in 0..r {
        for b in 0..r {
            // chain[i] is u_{r-i}; entry (a, b) of the Gram in u_1..u_r order
            let va = &chain[r - 1 - a];
            let vb = &chain[r - 1 - b];
            let want = u64::from(a == b + 1);
            if gram.pair(va, vb) != want {
                return false;
            }
        }
    }
    true
}

fn independent(field: PrimeField, n: usize, vectors: &[Vec<u64>]) -> bool {
    Subspace::from_rows(field, n, vectors.to_vec()).dim() == vectors.len()
}

/// Two-sided orthogonal complement of the chain span; `None` unless it has
/// codimension exactly r and meets the chain trivially. A chain that touches
/// the radical (always for r = 1) lies inside its own orthogonal space, so
/// the kernel is reduced modulo the chain before use.
fn complement(gram: &Matrix, chain: &[Vec<u64>]) -> Option<(Subspace, Matrix)> {
    let field = gram.field();
    let n = gram.rows();
    let r = chain.len();
    let mut rows = Vec::with_capacity(2 * r);
    for u in chain {
        rows.push(gram.transpose().mul_vec(u)); // phi(u, x) = 0
        rows.push(gram.mul_vec(u)); // phi(x, u) = 0
    }
    let k = Matrix::from_rows(field, &rows).kernel();
    let u_span = Subspace::from_rows(field, n, chain.to_vec());
    let overlap = k.intersect(&u_span);
    let w = Subspace::from_rows(field, n, k.complement_in(&overlap));
    if w.dim() != n - r {
        return None;
    }
    let mut all = w.basis_rows();
    all.extend(chain.iter().cloned());
    if Subspace::from_rows(field, n, all).dim() != n {
        return None;
    }
    let mut w_gram = Matrix::zeros(field, w.dim(), w.dim());
    let basis = w.basis_rows();
    for (a, va) in basis.iter().enumerate() {
        for (b, vb) in basis.iter().enumerate() {
            w_gram[(a, b)] = gram.pair(va, vb);
        }
    }
    Some((w, w_gram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn canonical_input_stays_adapted() {
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3, 1], None);
        let basis = gabriel_basis(&sp).unwrap();
        let c = basis.canonical_gram(sp.gram());
        assert_eq!(c, *sp.gram());
        assert_eq!(basis.odd_block_cols(1, 1), &[0, 1, 2]);
        assert_eq!(basis.odd_block_cols(2, 1), &[3]);
    }

    #[test]
    fn nondegenerate_input_has_no_blocks() {
        let nd = Matrix::from_i64(f(5), 2, 2, &[1, 0, 0, 2]);
        let sp = BilSpace::new(nd.clone());
        let basis = gabriel_basis(&sp).unwrap();
        assert!(basis.odd_cols.is_empty());
        assert!(basis.even_cols.is_empty());
        assert_eq!(basis.ndeg_cols(), &[0, 1]);
    }

    #[test]
    fn scrambled_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let field = f(3);
        let sp = BilSpace::from_gabriel_blocks(field, &[5, 2], None);
        for _ in 0..10 {
            let q = Matrix::random_invertible(field, 7, &mut rng);
            let scrambled = BilSpace::new(q.transpose().mul(sp.gram()).mul(&q));
            assert_eq!(scrambled.block_signature(), sp.block_signature());
            let basis = gabriel_basis(&scrambled).unwrap();
            assert_eq!(basis.signature(), sp.block_signature());
        }
    }

    #[test]
    fn split_parts_are_orthogonal() {
        let nd = Matrix::from_i64(f(3), 1, 1, &[1]);
        let sp = BilSpace::from_gabriel_blocks(f(3), &[3, 2], Some(&nd));
        let basis = gabriel_basis(&sp).unwrap();
        let parts = basis.split_parts();
        assert_eq!(parts.v_odd.dim(), 3);
        assert_eq!(parts.v_even.dim(), 2);
        assert_eq!(parts.v_ndeg.dim(), 1);
        assert_eq!(parts.v_odd_dag.dim(), 1);
        let groups = [&parts.v_odd, &parts.v_even, &parts.v_ndeg];
        for (a, ga) in groups.iter().enumerate() {
            for (b, gb) in groups.iter().enumerate() {
                if a == b {
                    continue;
                }
                for va in ga.basis_rows() {
                    for vb in gb.basis_rows() {
                        assert_eq!(sp.phi(&va, &vb), 0);
                    }
                }
            }
        }
        // V_odd^dag is totally isotropic
        for va in parts.v_odd_dag.basis_rows() {
            for vb in parts.v_odd_dag.basis_rows() {
                assert_eq!(sp.phi(&va, &vb), 0);
            }
        }
    }

    #[test]
    fn asym_radical_examples() {
        let sp = BilSpace::from_gabriel_blocks(f(5), &[3], None);
        let basis = gabriel_basis(&sp).unwrap();
        let rad = basis.asym_radical(&sp).unwrap();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0].1, vec![vec![1, 0, 1]]);

        let sp = BilSpace::from_gabriel_blocks(f(5), &[1], None);
        let basis = gabriel_basis(&sp).unwrap();
        let rad = basis.asym_radical(&sp).unwrap();
        assert_eq!(rad[0].1, vec![vec![1]]);

        let sp = BilSpace::from_gabriel_blocks(f(5), &[5, 1], None);
        let basis = gabriel_basis(&sp).unwrap();
        let rad = basis.asym_radical(&sp).unwrap();
        assert_eq!(rad.len(), 2);
        assert_eq!(rad[0].1, vec![vec![1, 0, 1, 0, 1, 0]]);
        assert_eq!(rad[1].1, vec![vec![0, 0, 0, 0, 0, 1]]);
    }

    #[test]
    fn mixed_space_fuzz_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            let field = f(p);
            let configs: Vec<(Vec<usize>, usize)> = vec![
                (vec![3], 0),
                (vec![2], 1),
                (vec![3, 1], 2),
                (vec![4, 3], 0),
                (vec![2, 2, 1], 2),
                (vec![5, 2], 1),
            ];
            for (sizes, nd_dim) in configs {
                let nd = if nd_dim > 0 {
                    Some(Matrix::random_invertible(field, nd_dim, &mut rng))
                } else {
                    None
                };
                let sp = BilSpace::from_gabriel_blocks(field, &sizes, nd.as_ref());
                let n = sp.dim();
                for _ in 0..4 {
                    let q = Matrix::random_invertible(field, n, &mut rng);
                    let scr = BilSpace::new(q.transpose().mul(sp.gram()).mul(&q));
                    assert_eq!(
                        scr.block_signature(),
                        sp.block_signature(),
                        "signature congruence invariance p={p} sizes={sizes:?} nd={nd_dim}"
                    );
                    let basis = gabriel_basis(&scr).expect("adapted basis exists");
                    assert_eq!(basis.signature(), sp.block_signature());
                }
            }
        }
    }
}
