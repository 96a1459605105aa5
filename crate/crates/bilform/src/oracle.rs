//! Ground truth: exhaustive, exact counting and enumeration of isometries by
//! pruned backtracking, plus breadth-first closure of matrix generating sets.
//!
//! The counter fills the matrix column by column in a connectivity order.
//! Completions of a fixed partial assignment form a right coset of the
//! pointwise stabilizer of the assigned basis vectors, so all extendable
//! candidates at a level head subtrees of equal size. The count is therefore
//! a product over levels of the number of extendable candidates, and each
//! extendability check is a find-first-completion search. This keeps the
//! node count near the sum, not the product, of the level widths, while the
//! result stays exactly the full count.

use crate::bilspace::BilSpace;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{Matrix, Subspace};
use num_bigint::BigUint;
use std::sync::atomic::{AtomicU64, Ordering};

/// Membership constraints layered on top of the isometry condition.
#[derive(Debug, Clone, Default)]
pub struct ConstraintSet {
    /// g must fix every vector of this subspace.
    pub fixed_pointwise: Option<Subspace>,
    /// (W2, W1) with W2 inside W1: g must satisfy (g-1)W1 inside W2.
    pub trivial_on_quotient: Option<(Subspace, Subspace)>,
    /// g must commute with this matrix.
    pub extra_commute: Option<Matrix>,
}

impl ConstraintSet {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn fixing(sub: Subspace) -> Self {
        ConstraintSet {
            fixed_pointwise: Some(sub),
            ..Self::default()
        }
    }

    pub fn commuting_with(m: Matrix) -> Self {
        ConstraintSet {
            extra_commute: Some(m),
            ..Self::default()
        }
    }
}

/// Search configuration. The node budget bounds the total work over all
/// workers; exceeding it aborts with an error rather than degrading.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub node_budget: u64,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 1_000_000_000,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    /// Column value is forced to the corresponding standard vector.
    Fixed,
    /// Column value lies in e_j + span(e_0..e_{q2-1}).
    Quotient,
    Free,
}

/// The search context in adapted coordinates.
struct Search {
    field: PrimeField,
    n: usize,
    b: Matrix,
    bt: Matrix,
    kinds: Vec<ColKind>,
    q2: usize,
    commute: Option<Matrix>,
    order: Vec<usize>,
    first_level: usize,
    /// per column: linear rows (rhs 0) forcing the image to stay inside every
    /// tower subspace that contains the basis vector; isometries preserve the
    /// towers, so these only prune
    invariant_rows: Vec<Matrix>,
    /// basis change back to the original coordinates
    t: Matrix,
    t_inv: Matrix,
    nodes: AtomicU64,
    budget: u64,
}

/// Incremental independence filter over placed columns.
#[derive(Clone)]
struct Reducer {
    field: PrimeField,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Reducer {
    fn new(field: PrimeField) -> Self {
        Reducer {
            field,
            rows: Vec::new(),
        }
    }

    fn residual(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, *b));
                }
            }
        }
        v
    }

    /// Adds a vector; false if dependent on what is already there.
    fn add(&mut self, v: &[u64]) -> bool {
        let f = self.field;
        let r = self.residual(v);
        let Some(pivot) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(r[pivot]).unwrap();
        let norm: Vec<u64> = r.iter().map(|&c| f.mul(c, inv)).collect();
        self.rows.push((pivot, norm));
        true
    }
}

#[derive(Clone)]
struct State {
    cols: Vec<Option<Vec<u64>>>,
    reducer: Reducer,
    depth: usize,
}

impl Search {
    fn build(
        space: &BilSpace,
        constraints: &ConstraintSet,
        opts: &SearchOptions,
    ) -> Result<Search> {
        let n = space.dim();
        let field = space.field();
        let zero = Subspace::zero(field, n);
        let fixed = constraints
            .fixed_pointwise
            .clone()
            .unwrap_or_else(|| zero.clone());
        let (q2sub, q1sub) = match &constraints.trivial_on_quotient {
            Some((w2, w1)) => {
                if !w1.contains(w2) {
                    return Err(Error::InternalInconsistency(
                        "trivial_on_quotient requires W2 inside W1".into(),
                    ));
                }
                (w2.clone(), w1.clone())
            }
            None => (zero.clone(), zero),
        };
        // ordered basis: [Q2 trap F | Q2 rest | F rest | Q1 rest | complement]
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut kinds: Vec<ColKind> = Vec::new();
        let mut acc = Subspace::zero(field, n);
        let mut extend = |target: &Subspace,
                          kind: ColKind,
                          rows: &mut Vec<Vec<u64>>,
                          kinds: &mut Vec<ColKind>,
                          acc: &mut Subspace| {
            let joined = acc.sum(target);
            for rep in joined.complement_in(acc) {
                rows.push(rep);
                kinds.push(kind);
            }
            *acc = joined;
        };
        let q2f = q2sub.intersect(&fixed);
        extend(&q2f, ColKind::Fixed, &mut rows, &mut kinds, &mut acc);
        extend(&q2sub, ColKind::Quotient, &mut rows, &mut kinds, &mut acc);
        let q2 = acc.dim();
        extend(&fixed, ColKind::Fixed, &mut rows, &mut kinds, &mut acc);
        extend(&q1sub, ColKind::Quotient, &mut rows, &mut kinds, &mut acc);
        extend(
            &Subspace::full(field, n),
            ColKind::Free,
            &mut rows,
            &mut kinds,
            &mut acc,
        );
        let mut t = Matrix::zeros(field, n, n);
        for (j, v) in rows.iter().enumerate() {
            t.set_col(j, v);
        }
        let t_inv = t.inverse().expect("basis change is invertible");
        let b = t.transpose().mul(space.gram()).mul(&t);
        let bt = b.transpose();
        let commute = constraints
            .extra_commute
            .as_ref()
            .map(|m| t_inv.mul(m).mul(&t));

        // G-invariant subspaces of the transformed space: every isometry
        // maps each of them onto itself, giving per-column pruning rows
        let sp_b = BilSpace::new(b.clone());
        let towers = sp_b.towers();
        let mut invariants: Vec<Subspace> = Vec::new();
        let mut push_inv = |s: &Subspace, invariants: &mut Vec<Subspace>| {
            if s.dim() < n && !invariants.contains(s) {
                invariants.push(s.clone());
            }
        };
        for s in towers
            .l_odd
            .iter()
            .chain(&towers.r_odd)
            .chain(&towers.l_even)
            .chain(&towers.r_even)
            .chain(&towers.vi_chain)
            .chain([
                &towers.v_inf,
                &towers.up_inf,
                &towers.v_sup,
                &towers.low_inf,
            ])
        {
            push_inv(s, &mut invariants);
        }
        // pairwise odd-tower intersections carry the finest block structure
        for lk in &towers.l_odd {
            for rl in &towers.r_odd {
                push_inv(&lk.intersect(rl), &mut invariants);
            }
        }
        let mut invariant_rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0u64; n];
            e[j] = 1;
            let mut rows: Vec<Vec<u64>> = Vec::new();
            for s in &invariants {
                if s.contains_vec(&e) {
                    let proj = residual_rows(s);
                    rows.extend(proj);
                }
            }
            // compress to independent rows
            let compact = if rows.is_empty() {
                Matrix::zeros(field, 0, n)
            } else {
                Subspace::from_rows(field, n, rows).basis().clone()
            };
            invariant_rows.push(compact);
        }

        // column order: fixed columns first, then greedily by constraint
        // strength: pairings with already-ordered columns dominate, then the
        // per-column invariant rows (radical-most columns go first)
        let mut order: Vec<usize> = (0..n).filter(|&j| kinds[j] == ColKind::Fixed).collect();
        let mut remaining: Vec<usize> = (0..n).filter(|&j| kinds[j] != ColKind::Fixed).collect();
        let first_level = order.len();
        while !remaining.is_empty() {
            let score = |j: usize| {
                let links = order
                    .iter()
                    .filter(|&&i| b[(i, j)] != 0 || b[(j, i)] != 0)
                    .count();
                let inv_strength = invariant_rows[j].rows();
                let quotient_bonus = usize::from(kinds[j] == ColKind::Quotient);
                let weight: usize = (0..n)
                    .filter(|&i| b[(i, j)] != 0 || b[(j, i)] != 0)
                    .count();
                (links, inv_strength, quotient_bonus, weight)
            };
            let best = remaining
                .iter()
                .copied()
                .max_by(|&a, &c| score(a).cmp(&score(c)).then(c.cmp(&a)))
                .unwrap();
            remaining.retain(|&j| j != best);
            order.push(best);
        }
        Ok(Search {
            field,
            n,
            b,
            bt,
            kinds,
            q2,
            commute,
            order,
            first_level,
            invariant_rows,
            t,
            t_inv,
            nodes: AtomicU64::new(0),
            budget: opts.node_budget,
        })
    }

    fn spend(&self, amount: u64) -> Result<()> {
        let prev = self.nodes.fetch_add(amount, Ordering::Relaxed);
        if prev + amount > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn initial_state(&self) -> State {
        let mut st = State {
            cols: vec![None; self.n],
            reducer: Reducer::new(self.field),
            depth: 0,
        };
        for &j in &self.order[..self.first_level] {
            let mut e = vec![0u64; self.n];
            e[j] = 1;
            st.reducer.add(&e);
            st.cols[j] = Some(e);
            st.depth += 1;
        }
        st
    }

    /// Linear system for the column at the current depth; None when already
    /// inconsistent.
    fn column_system(&self, st: &State, j: usize) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
        let f = self.field;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        let inv = &self.invariant_rows[j];
        for r in 0..inv.rows() {
            rows.push(inv.row(r).to_vec());
            rhs.push(0);
        }
        for i in 0..self.n {
            let Some(hi) = &st.cols[i] else { continue };
            // phi(h_i, x) = B_ij
            rows.push(self.bt.mul_vec(hi));
            rhs.push(self.b[(i, j)]);
            // phi(x, h_i) = B_ji
            rows.push(self.b.mul_vec(hi));
            rhs.push(self.b[(j, i)]);
        }
        if self.kinds[j] == ColKind::Quotient {
            // x = e_j + span(e_0..e_{q2-1})
            for r in self.q2..self.n {
                let mut row = vec![0u64; self.n];
                row[r] = 1;
                rows.push(row);
                rhs.push(u64::from(r == j));
            }
        }
        if let Some(m) = &self.commute {
            // rows of (M x)_r = (sum_i M_ij h_i)_r, usable when every column
            // i with M_ij != 0 is already placed (the j term moves left)
            let usable = (0..self.n).all(|i| i == j || m[(i, j)] == 0 || st.cols[i].is_some());
            if usable {
                let mut target = vec![0u64; self.n];
                for i in 0..self.n {
                    if i == j || m[(i, j)] == 0 {
                        continue;
                    }
                    let hi = st.cols[i].as_ref().unwrap();
                    for (a, b) in target.iter_mut().zip(hi) {
                        *a = f.add(*a, f.mul(m[(i, j)], *b));
                    }
                }
                // (M - M_jj I) x = target
                for r in 0..self.n {
                    let mut row: Vec<u64> = (0..self.n).map(|c| m[(r, c)]).collect();
                    row[r] = f.sub(row[r], m[(j, j)]);
                    rows.push(row);
                    rhs.push(target[r]);
                }
            }
        }
        if rows.is_empty() {
            return Some((vec![0u64; self.n], identity_kernel(f, self.n)));
        }
        Matrix::from_rows(f, &rows).solve_affine(&rhs)
    }

    fn candidate_ok(&self, st: &State, j: usize, cand: &[u64]) -> bool {
        self.b.pair(cand, cand) == self.b[(j, j)]
            && !st.reducer.residual(cand).iter().all(|&c| c == 0)
    }

    fn place(&self, st: &State, j: usize, cand: Vec<u64>) -> State {
        let mut next = st.clone();
        next.reducer.add(&cand);
        next.cols[j] = Some(cand);
        next.depth += 1;
        next
    }

    /// Full validation of a completed matrix (needed because commute rows are
    /// only partially enforced during the descent).
    fn complete_ok(&self, st: &State) -> bool {
        if let Some(m) = &self.commute {
            let h = self.state_matrix(st);
            if h.mul(m) != m.mul(&h) {
                return false;
            }
        }
        debug_assert!({
            let h = self.state_matrix(st);
            h.transpose().mul(&self.b).mul(&h) == self.b
        });
        true
    }

    fn state_matrix(&self, st: &State) -> Matrix {
        let mut h = Matrix::zeros(self.field, self.n, self.n);
        for j in 0..self.n {
            h.set_col(j, st.cols[j].as_ref().expect("complete state"));
        }
        h
    }

    fn to_original(&self, st: &State) -> Matrix {
        self.t.mul(&self.state_matrix(st)).mul(&self.t_inv)
    }

    /// Exact subtree count below the state, using the coset product.
    fn count(&self, st: &State) -> Result<BigUint> {
        if st.depth == self.n {
            return Ok(if self.complete_ok(st) {
                BigUint::from(1u32)
            } else {
                BigUint::from(0u32)
            });
        }
        let j = self.order[st.depth];
        let Some((particular, kernel)) = self.column_system(st, j) else {
            return Ok(BigUint::from(0u32));
        };
        let mut n_ext = 0u64;
        let mut subcount: Option<BigUint> = None;
        for cand in affine_iter(self.field, particular, kernel) {
            self.spend(1)?;
            if !self.candidate_ok(st, j, &cand) {
                continue;
            }
            let next = self.place(st, j, cand);
            match &subcount {
                None => {
                    let c = self.count(&next)?;
                    if c > BigUint::from(0u32) {
                        subcount = Some(c);
                        n_ext += 1;
                    }
                }
                Some(_) => {
                    if self.find_first(&next)? {
                        n_ext += 1;
                    }
                }
            }
        }
        Ok(subcount.map(|c| c * n_ext).unwrap_or_default())
    }

    /// Is there any completion below the state?
    fn find_first(&self, st: &State) -> Result<bool> {
        if st.depth == self.n {
            return Ok(self.complete_ok(st));
        }
        let j = self.order[st.depth];
        let Some((particular, kernel)) = self.column_system(st, j) else {
            return Ok(false);
        };
        for cand in affine_iter(self.field, particular, kernel) {
            self.spend(1)?;
            if !self.candidate_ok(st, j, &cand) {
                continue;
            }
            let next = self.place(st, j, cand);
            if self.find_first(&next)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Collects every completion below the state.
    fn enumerate(&self, st: &State, cap: u64, out: &mut Vec<Matrix>) -> Result<()> {
        if st.depth == self.n {
            if self.complete_ok(st) {
                if out.len() as u64 >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                out.push(self.to_original(st));
            }
            return Ok(());
        }
        let j = self.order[st.depth];
        let Some((particular, kernel)) = self.column_system(st, j) else {
            return Ok(());
        };
        for cand in affine_iter(self.field, particular, kernel) {
            self.spend(1)?;
            if !self.candidate_ok(st, j, &cand) {
                continue;
            }
            let next = self.place(st, j, cand);
            self.enumerate(&next, cap, out)?;
        }
        Ok(())
    }
}

/// Rows c with: v lies in the subspace iff c . v = 0 for every row (the
/// dot-annihilator, exact over any prime field).
fn residual_rows(s: &Subspace) -> Vec<Vec<u64>> {
    s.basis().kernel().basis_rows()
}

fn identity_kernel(field: PrimeField, n: usize) -> Vec<Vec<u64>> {
    let id = Matrix::identity(field, n);
    (0..n).map(|i| id.row(i).to_vec()).collect()
}

/// Streams the affine space particular + span(kernel), all q^k members,
/// lexicographic in the kernel coefficients.
fn affine_iter(
    field: PrimeField,
    particular: Vec<u64>,
    kernel: Vec<Vec<u64>>,
) -> impl Iterator<Item = Vec<u64>> {
    let p = field.modulus() as u128;
    let total: u128 = p
        .checked_pow(kernel.len() as u32)
        .expect("desk-scale spaces");
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

/// Exact number of isometries of the space satisfying the constraints.
pub fn count_isometries(
    space: &BilSpace,
    constraints: &ConstraintSet,
    opts: &SearchOptions,
) -> Result<BigUint> {
    let search = Search::build(space, constraints, opts)?;
    if search.n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let st = search.initial_state();
    if st.depth == search.n || opts.threads <= 1 {
        return search.count(&st);
    }
    // partition the first decision level across workers; each worker counts
    // its candidates independently (subtree sizes agree, so per-worker
    // products are exact) and the results are summed
    let j = search.order[st.depth];
    let Some((particular, kernel)) = search.column_system(&st, j) else {
        return Ok(BigUint::from(0u32));
    };
    let candidates: Vec<Vec<u64>> = affine_iter(search.field, particular, kernel).collect();
    search.spend(candidates.len() as u64)?;
    let workers = opts.threads.max(1);
    let results: Vec<Result<BigUint>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let search = &search;
            let st = &st;
            let candidates = &candidates;
            handles.push(scope.spawn(move || {
                let mut n_ext = 0u64;
                let mut subcount: Option<BigUint> = None;
                for cand in candidates.iter().skip(w).step_by(workers) {
                    if !search.candidate_ok(st, j, cand) {
                        continue;
                    }
                    let next = search.place(st, j, cand.clone());
                    match &subcount {
                        None => {
                            let c = search.count(&next)?;
                            if c > BigUint::from(0u32) {
                                subcount = Some(c);
                                n_ext += 1;
                            }
                        }
                        Some(_) => {
                            if search.find_first(&next)? {
                                n_ext += 1;
                            }
                        }
                    }
                }
                Ok(subcount.map(|c| c * n_ext).unwrap_or_default())
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total = BigUint::from(0u32);
    for r in results {
        total += r?;
    }
    Ok(total)
}

/// Full list of isometries satisfying the constraints, in a deterministic
/// order (lexicographic by columns); errors out beyond the cap.
pub fn enumerate_isometries(
    space: &BilSpace,
    constraints: &ConstraintSet,
    cap: u64,
    opts: &SearchOptions,
) -> Result<Vec<Matrix>> {
    let search = Search::build(space, constraints, opts)?;
    let mut out = Vec::new();
    if search.n == 0 {
        out.push(Matrix::identity(space.field(), 0));
        return Ok(out);
    }
    let st = search.initial_state();
    search.enumerate(&st, cap, &mut out)?;
    out.sort_by_key(|m| {
        let mut v = Vec::with_capacity(m.rows() * m.cols());
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                v.push(m[(i, j)]);
            }
        }
        v
    });
    Ok(out)
}

/// Breadth-first closure of a generating set under multiplication.
#[derive(Debug)]
pub struct Closure {
    pub order: BigUint,
    pub elements: Vec<Matrix>,
}

pub fn group_closure(gens: &[Matrix], cap: u64) -> Result<Closure> {
    if gens.is_empty() {
        return Ok(Closure {
            order: BigUint::from(1u32),
            elements: Vec::new(),
        });
    }
    let field = gens[0].field();
    let n = gens[0].rows();
    for g in gens {
        assert!(g.is_square() && g.rows() == n && g.field() == field);
        assert!(g.is_invertible(), "generators must be invertible");
    }
    let key = |m: &Matrix| -> Vec<u64> {
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            v.extend_from_slice(m.row(i));
        }
        v
    };
    let id = Matrix::identity(field, n);
    let mut seen = std::collections::HashSet::new();
    seen.insert(key(&id));
    let mut elements = vec![id];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let prod = m.mul(g);
                if seen.insert(key(&prod)) {
                    if elements.len() as u64 + next.len() as u64 >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    next.push(prod);
                }
            }
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(Closure {
        order: BigUint::from(elements.len()),
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::jordan_block;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn count_plain(space: &BilSpace) -> BigUint {
        count_isometries(space, &ConstraintSet::none(), &SearchOptions::default()).unwrap()
    }

    #[test]
    fn j3_over_gf2_has_two_isometries() {
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3], None);
        assert_eq!(count_plain(&sp), BigUint::from(2u32));
    }

    #[test]
    fn h2_over_gf5_has_four_isometries() {
        let sp = BilSpace::from_i64(f(5), 2, &[0, 1, 2, 0]);
        assert_eq!(count_plain(&sp), BigUint::from(4u32));
    }

    #[test]
    fn constrained_count_matches_dim_k() {
        // J3 + J1 over GF(2): isometries fixing V_inf pointwise and trivial
        // on ^inf V / V_inf number q^dim_K = 4
        let sp = BilSpace::from_gabriel_blocks(f(2), &[3, 1], None);
        let t = sp.towers();
        let cs = ConstraintSet {
            fixed_pointwise: Some(t.v_inf.clone()),
            trivial_on_quotient: Some((t.v_inf.clone(), t.up_inf.clone())),
            extra_commute: None,
        };
        let c = count_isometries(&sp, &cs, &SearchOptions::default()).unwrap();
        assert_eq!(c, BigUint::from(4u32));
    }

    #[test]
    fn enumerate_j2_over_gf3() {
        let sp = BilSpace::from_gabriel_blocks(f(3), &[2], None);
        let all =
            enumerate_isometries(&sp, &ConstraintSet::none(), 100, &SearchOptions::default())
                .unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0], Matrix::identity(f(3), 2));
        assert_eq!(all[1], Matrix::from_i64(f(3), 2, 2, &[2, 0, 0, 2]));
    }

    #[test]
    fn enumerate_zero_1x1() {
        let sp = BilSpace::new(Matrix::zeros(f(2), 1, 1));
        let all =
            enumerate_isometries(&sp, &ConstraintSet::none(), 100, &SearchOptions::default())
                .unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0], Matrix::identity(f(2), 1));
    }

    #[test]
    fn enumerate_j3_over_gf3() {
        let sp = BilSpace::from_gabriel_blocks(f(3), &[3], None);
        let all =
            enumerate_isometries(&sp, &ConstraintSet::none(), 100, &SearchOptions::default())
                .unwrap();
        assert_eq!(all.len(), 6);
        for g in &all {
            assert_eq!(g.transpose().mul(sp.gram()).mul(g), *sp.gram());
        }
    }

    #[test]
    fn closure_examples() {
        let id = Matrix::identity(f(3), 2);
        assert_eq!(group_closure(&[id], 10).unwrap().order, BigUint::from(1u32));

        let e12 = Matrix::from_i64(f(2), 2, 2, &[1, 1, 0, 1]);
        let e21 = Matrix::from_i64(f(2), 2, 2, &[1, 0, 1, 1]);
        assert_eq!(
            group_closure(&[e12, e21], 100).unwrap().order,
            BigUint::from(6u32)
        );
    }

    #[test]
    fn closure_cap_is_enforced() {
        let e12 = Matrix::from_i64(f(3), 2, 2, &[1, 1, 0, 1]);
        let e21 = Matrix::from_i64(f(3), 2, 2, &[1, 0, 1, 1]);
        assert!(matches!(
            group_closure(&[e12, e21], 10),
            Err(Error::CapExceeded(10))
        ));
    }

    #[test]
    fn count_is_congruence_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let field = f(3);
        let sp = BilSpace::from_gabriel_blocks(field, &[3, 2], None);
        let base = count_plain(&sp);
        for _ in 0..5 {
            let q = Matrix::random_invertible(field, 5, &mut rng);
            let scr = BilSpace::new(q.transpose().mul(sp.gram()).mul(&q));
            assert_eq!(count_plain(&scr), base);
        }
    }

    #[test]
    fn orbit_stabilizer_divisibility() {
        // |G(A + A)| is divisible by |G(A)|^2
        let field = f(2);
        let a = jordan_block(field, 2, 0);
        let sp_a = BilSpace::new(a.clone());
        let sp_aa = BilSpace::from_gabriel_blocks(field, &[2, 2], None);
        let ca = count_plain(&sp_a);
        let caa = count_plain(&sp_aa);
        assert_eq!(&caa % (&ca * &ca), BigUint::from(0u32));
    }

    #[test]
    fn worker_counts_agree() {
        let sp = BilSpace::from_gabriel_blocks(f(3), &[3, 1], None);
        let single = count_isometries(
            &sp,
            &ConstraintSet::none(),
            &SearchOptions {
                threads: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let multi = count_isometries(
            &sp,
            &ConstraintSet::none(),
            &SearchOptions {
                threads: 8,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(single, multi);
        assert_eq!(single, BigUint::from(324u32));
    }

    #[test]
    fn budget_refuses_runaway_search() {
        let sp = BilSpace::from_gabriel_blocks(f(5), &[5, 3], None);
        let err = count_isometries(
            &sp,
            &ConstraintSet::none(),
            &SearchOptions {
                node_budget: 10,
                threads: 1,
            },
        );
        assert_eq!(err, Err(Error::BudgetExceeded(10)));
    }

    #[test]
    fn commute_constraint_restricts_count() {
        // isometries of the zero form on F_2^2 = GL_2(2); those commuting
        // with J_2(0) form its centralizer, of order 2
        let sp = BilSpace::new(Matrix::zeros(f(2), 2, 2));
        let nil = jordan_block(f(2), 2, 0);
        let c = count_isometries(
            &sp,
            &ConstraintSet::commuting_with(nil),
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(c, BigUint::from(2u32));
    }

    #[test]
    fn big_structured_count_is_fast() {
        // 3^16 * 8 isometries, countable only through the coset product
        let sp = BilSpace::from_gabriel_blocks(f(3), &[5, 3, 1], None);
        let c = count_plain(&sp);
        let expected = BigUint::from(3u32).pow(16) * BigUint::from(8u32);
        assert_eq!(c, expected);
    }
}
