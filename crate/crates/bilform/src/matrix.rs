//! Dense exact linear algebra over GF(p): elimination, kernels, minimal
//! polynomials, primary components, nilpotent Jordan types, similarity, and
//! centralizer orders of nilpotent classes in GL_n(q).

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Poly;
use num_bigint::BigUint;
use rand::Rng;
use std::ops::{Index, IndexMut};

/// Dense matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        let p = field.modulus();
        let data = data.into_iter().map(|v| v % p).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data: data.iter().map(|&v| field.reduce_i64(v)).collect(),
        }
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| v % field.modulus()));
        }
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn random<R: Rng>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let p = field.modulus();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Random element of GL_n(p): rejection sampling, fine at desk scale.
    pub fn random_invertible<R: Rng>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Matrix::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[u64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i] % self.field.modulus();
        }
    }

    fn same_field(&self, other: &Matrix) {
        assert_eq!(self.field, other.field, "matrices over different fields");
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let f = self.field;
        let p = f.modulus() as u128;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out[(i, j)] as u128;
                    out[(i, j)] = ((cur + a as u128 * other[(k, j)] as u128) % p) as u64;
                }
            }
        }
        out
    }

    /// Matrix-vector product A v.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self[(i, j)], v[j]));
                }
                acc
            })
            .collect()
    }

    /// Row-vector times matrix: v^T A.
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let f = self.field;
        (0..self.cols)
            .map(|j| {
                let mut acc = 0u64;
                for i in 0..self.rows {
                    acc = f.add(acc, f.mul(v[i], self[(i, j)]));
                }
                acc
            })
            .collect()
    }

    /// v^T A w, the bilinear pairing defined by this Gram matrix.
    pub fn pair(&self, v: &[u64], w: &[u64]) -> u64 {
        let av = self.mul_vec(w);
        let f = self.field;
        let mut acc = 0u64;
        for i in 0..self.rows {
            acc = f.add(acc, f.mul(v[i], av[i]));
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a polynomial at this matrix (Horner).
    pub fn apply_poly(&self, f: &Poly) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Matrix::zeros(self.field, n, n);
        for &c in f.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc[(i, i)] = self.field.add(acc[(i, i)], c);
            }
        }
        acc
    }

    /// Reduced row-echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m[(r, j)], m[(pr, j)]);
                    m[(r, j)] = b;
                    m[(pr, j)] = a;
                }
            }
            let inv = f.inv(m[(r, c)]).unwrap();
            for j in 0..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let factor = m[(i, c)];
                    for j in 0..m.cols {
                        let d = f.mul(factor, m[(r, j)]);
                        m[(i, j)] = f.sub(m[(i, j)], d);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Right kernel {x : Ax = 0} as a canonical subspace.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let f = self.field;
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[(row, free)]);
            }
            basis.push(v);
        }
        Subspace::from_rows(f, self.cols, basis)
    }

    /// Left kernel {x : x^T A = 0}.
    pub fn left_kernel(&self) -> Subspace {
        self.transpose().kernel()
    }

    /// Solves A x = b. `Ok(None)` when inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve: {} rows vs rhs of length {}",
                self.rows,
                b.len()
            )));
        }
        Ok(self.solve_affine(b).map(|(x, _)| x))
    }

    /// Solves A x = b, returning a particular solution together with a basis
    /// of the homogeneous kernel. `None` when inconsistent.
    pub fn solve_affine(&self, b: &[u64]) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        // augment with b as an extra column
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i] % f.modulus();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)];
        }
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut kernel = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[(row, free)]);
            }
            kernel.push(v);
        }
        Some((x, kernel))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let f = self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)];
            }
        }
        Ok(out)
    }

    /// Minimal polynomial by per-vector annihilators and lcm; the result is
    /// certified minimal by checking that no maximal proper divisor
    /// annihilates the matrix.
    pub fn min_poly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let f = self.field;
        if n == 0 {
            return Poly::one(f);
        }
        let mut m = Poly::one(f);
        for i in 0..n {
            let mut e = vec![0u64; n];
            e[i] = 1;
            let ann = self.vector_annihilator(&e);
            m = m.lcm(&ann);
            if m.degree() == Some(n) {
                break;
            }
        }
        debug_assert!(self.apply_poly(&m).is_zero());
        // minimality certificate: dividing out any irreducible factor breaks
        // the annihilation
        #[cfg(debug_assertions)]
        if let Ok(factors) = m.factor() {
            for (p, _) in factors {
                let reduced = m.div_exact(&p);
                debug_assert!(
                    !self.apply_poly(&reduced).is_zero(),
                    "minimal polynomial failed its certificate"
                );
            }
        }
        m
    }

    /// Monic annihilator polynomial of a single vector under this matrix.
    fn vector_annihilator(&self, v: &[u64]) -> Poly {
        let n = self.rows;
        let f = self.field;
        let mut krylov: Vec<Vec<u64>> = vec![v.to_vec()];
        loop {
            // is the last vector dependent on the previous ones?
            let k = krylov.len() - 1;
            let mut m = Matrix::zeros(f, n, k);
            for (j, kv) in krylov[..k].iter().enumerate() {
                for i in 0..n {
                    m[(i, j)] = kv[i];
                }
            }
            if let Some((coeffs, _)) = m.solve_affine(&krylov[k]) {
                // t^k - sum coeffs_j t^j
                let mut c: Vec<u64> = coeffs.iter().map(|&a| f.neg(a)).collect();
                c.push(1);
                return Poly::new(f, c);
            }
            let next = self.mul_vec(&krylov[k]);
            krylov.push(next);
        }
    }

    /// Primary components of the operator: for each irreducible divisor p of
    /// the minimal polynomial with multiplicity e, the kernel of p(M)^e.
    pub fn primary_components(&self) -> Vec<(Poly, Subspace)> {
        assert!(self.is_square());
        let mp = self.min_poly();
        let factors = mp.factor().expect("minimal polynomial is nonzero");
        let mut out = Vec::new();
        for (p, e) in factors {
            let pm = self.apply_poly(&p).pow(e as u64);
            out.push((p, pm.kernel()));
        }
        debug_assert_eq!(
            out.iter().map(|(_, s)| s.dim()).sum::<usize>(),
            self.rows,
            "primary components must fill the space"
        );
        out
    }

    /// Jordan type of a nilpotent matrix from kernel dimensions of powers.
    pub fn nilpotent_type(&self) -> Result<Partition> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Ok(Partition::new(vec![]));
        }
        if !self.pow(n as u64).is_zero() {
            return Err(Error::NotNilpotent);
        }
        let mut kernel_dims = vec![0usize];
        let mut power = Matrix::identity(self.field, n);
        loop {
            power = power.mul(self);
            let d = n - power.rank();
            kernel_dims.push(d);
            if d == n {
                break;
            }
        }
        // conjugate partition: lambda'_k = dim ker M^k - dim ker M^{k-1};
        // the Jordan type is its transpose
        let conj: Vec<usize> = kernel_dims.windows(2).map(|w| w[1] - w[0]).collect();
        let num_blocks = conj.first().copied().unwrap_or(0);
        let mut parts = Vec::with_capacity(num_blocks);
        for i in 1..=num_blocks {
            parts.push(conj.iter().filter(|&&c| c >= i).count());
        }
        Ok(Partition::new(parts))
    }

    /// Similarity via rank sequences of powers of each irreducible factor of
    /// either minimal polynomial. Equivalent to equality of elementary
    /// divisors.
    pub fn similar(&self, other: &Matrix) -> Result<bool> {
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(Error::ShapeMismatch(
                "similarity needs equal square shapes".into(),
            ));
        }
        self.same_field(other);
        let mut factors: Vec<Poly> = Vec::new();
        for m in [self, other] {
            for (p, _) in m.min_poly().factor().expect("nonzero minimal polynomial") {
                if !factors.contains(&p) {
                    factors.push(p);
                }
            }
        }
        let n = self.rows;
        for p in factors {
            let pm1 = self.apply_poly(&p);
            let pm2 = other.apply_poly(&p);
            let mut a = Matrix::identity(self.field, n);
            let mut b = a.clone();
            loop {
                a = a.mul(&pm1);
                b = b.mul(&pm2);
                let (ra, rb) = (a.rank(), b.rank());
                if ra != rb {
                    return Ok(false);
                }
                // both stabilized: higher powers cannot differ
                if ra == a.mul(&pm1).rank() && rb == b.mul(&pm2).rank() {
                    break;
                }
            }
        }
        Ok(true)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = u64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Subspace of F^n, stored as a reduced row-echelon basis so that equal
/// subspaces compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn from_rows(field: PrimeField, ambient: usize, rows: Vec<Vec<u64>>) -> Self {
        let m = Matrix::from_rows(field, &rows);
        if rows.is_empty() {
            return Subspace {
                field,
                ambient,
                basis: Matrix::zeros(field, 0, ambient),
            };
        }
        assert_eq!(m.cols(), ambient);
        let (r, pivots) = m.rref();
        let mut basis = Matrix::zeros(field, pivots.len(), ambient);
        for i in 0..pivots.len() {
            for j in 0..ambient {
                basis[(i, j)] = r[(i, j)];
            }
        }
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        Subspace::from_rows(m.field(), m.cols(), rows)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Reduces a vector against the basis; the residual is zero iff the
    /// vector lies in the subspace.
    pub fn reduce_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let pivot = (0..self.ambient).find(|&j| self.basis[(i, j)] != 0);
            if let Some(pc) = pivot {
                let c = v[pc];
                if c != 0 {
                    for j in 0..self.ambient {
                        v[j] = f.sub(v[j], f.mul(c, self.basis[(i, j)]));
                    }
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, v: &[u64]) -> bool {
        self.reduce_vec(v).iter().all(|&c| c == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains_vec(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subspace::from_rows(self.field, self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // coefficient pairs (a, b) with a*U = b*W: kernel of [U^T | -W^T]
        let k = self.dim();
        let l = other.dim();
        if k == 0 || l == 0 {
            return Subspace::zero(self.field, self.ambient);
        }
        let f = self.field;
        let mut m = Matrix::zeros(f, self.ambient, k + l);
        for j in 0..k {
            for i in 0..self.ambient {
                m[(i, j)] = self.basis[(j, i)];
            }
        }
        for j in 0..l {
            for i in 0..self.ambient {
                m[(i, k + j)] = f.neg(other.basis[(j, i)]);
            }
        }
        let ker = m.kernel();
        let mut rows = Vec::new();
        for r in 0..ker.dim() {
            let coeffs = ker.basis.row(r);
            let mut v = vec![0u64; self.ambient];
            for (j, &c) in coeffs[..k].iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for i in 0..self.ambient {
                    v[i] = f.add(v[i], f.mul(c, self.basis[(j, i)]));
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(f, self.ambient, rows)
    }

    /// Representatives of a basis of self/sub (sub must be contained in self).
    pub fn complement_in(&self, sub: &Subspace) -> Vec<Vec<u64>> {
        debug_assert!(self.contains(sub));
        let mut reps = Vec::new();
        let mut acc = sub.clone();
        for row in self.basis_rows() {
            if !acc.contains_vec(&row) {
                reps.push(row.clone());
                acc = acc.sum(&Subspace::from_rows(self.field, self.ambient, vec![row]));
            }
        }
        debug_assert_eq!(reps.len(), self.dim() - sub.dim());
        reps
    }

    /// Applies a linear map (matrix acting on column vectors) to the subspace.
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let rows: Vec<Vec<u64>> = self.basis_rows().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_rows(self.field, m.rows(), rows)
    }

    /// Enumerates every vector of the subspace in lexicographic coefficient
    /// order (first vector is zero). Intended for small desk-scale spaces.
    pub fn enumerate_vectors(&self) -> SubspaceIter<'_> {
        SubspaceIter {
            space: self,
            counter: 0,
            total: (self.field.modulus() as u128).pow(self.dim() as u32),
        }
    }
}

pub struct SubspaceIter<'a> {
    space: &'a Subspace,
    counter: u128,
    total: u128,
}

impl Iterator for SubspaceIter<'_> {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.counter >= self.total {
            return None;
        }
        let f = self.space.field;
        let p = f.modulus() as u128;
        let mut c = self.counter;
        self.counter += 1;
        let mut v = vec![0u64; self.space.ambient];
        for i in 0..self.space.dim() {
            let coeff = (c % p) as u64;
            c /= p;
            if coeff != 0 {
                for j in 0..self.space.ambient {
                    v[j] = f.add(v[j], f.mul(coeff, self.space.basis[(i, j)]));
                }
            }
        }
        Some(v)
    }
}

/// Weakly decreasing partition, used for nilpotent Jordan types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "partition parts are positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// dim of the centralizer of a nilpotent of this type in M_n(F):
    /// sum over pairs of min(lambda_i, lambda_j).
    pub fn centralizer_dim(&self) -> usize {
        let mut dim = 0usize;
        for &a in &self.parts {
            for &b in &self.parts {
                dim += a.min(b);
            }
        }
        dim
    }

    /// Order of the centralizer in GL_n(q) of a nilpotent matrix with this
    /// Jordan type: q^(dim - sum m_k^2) * prod_k |GL_{m_k}(q)| with m_k the
    /// multiplicity of part k.
    pub fn centralizer_order_gl(&self, q: u64) -> BigUint {
        let dim = self.centralizer_dim();
        let mut mult: std::collections::BTreeMap<usize, usize> = Default::default();
        for &p in &self.parts {
            *mult.entry(p).or_insert(0) += 1;
        }
        let sum_sq: usize = mult.values().map(|&m| m * m).sum();
        let mut order = BigUint::from(q).pow((dim - sum_sq) as u32);
        for &m in mult.values() {
            order *= gl_order(m, q);
        }
        order
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// |GL_m(q)| = prod_{i=0}^{m-1} (q^m - q^i).
pub fn gl_order(m: usize, q: u64) -> BigUint {
    let qm = BigUint::from(q).pow(m as u32);
    let mut acc = BigUint::from(1u32);
    for i in 0..m {
        acc *= &qm - BigUint::from(q).pow(i as u32);
    }
    acc
}

/// Builds a block-diagonal matrix from the given square blocks.
pub fn block_diag(field: PrimeField, blocks: &[Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = Matrix::zeros(field, n, n);
    let mut off = 0usize;
    for b in blocks {
        assert!(b.is_square());
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.rows();
    }
    out
}

/// Lower Jordan block J_r(lambda).
pub fn jordan_block(field: PrimeField, r: usize, lambda: u64) -> Matrix {
    let mut m = Matrix::zeros(field, r, r);
    for i in 0..r {
        m[(i, i)] = lambda % field.modulus();
        if i + 1 < r {
            m[(i + 1, i)] = 1;
        }
    }
    m
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
    fn kernel_of_j3_over_gf2() {
        let m = jordan_block(f(2), 3, 0);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains_vec(&[0, 0, 1]));
    }

    #[test]
    fn rank_of_zero() {
        assert_eq!(Matrix::zeros(f(5), 2, 2).rank(), 0);
    }

    #[test]
    fn inverse_example() {
        let m = Matrix::from_i64(f(5), 2, 2, &[0, 1, 2, 0]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_i64(f(5), 2, 2, &[0, 3, 1, 0]));
        assert_eq!(m.mul(&inv), Matrix::identity(f(5), 2));
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = Matrix::from_i64(f(5), 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn min_poly_examples() {
        let id = Matrix::identity(f(3), 3);
        assert_eq!(id.min_poly(), Poly::from_i64(f(3), &[-1, 1]));

        // diag(3, 2) over GF(5): minimal polynomial (t-3)(t-2)
        let m = Matrix::from_i64(f(5), 2, 2, &[3, 0, 0, 2]);
        let expected = Poly::from_i64(f(5), &[-3, 1]).mul(&Poly::from_i64(f(5), &[-2, 1]));
        assert_eq!(m.min_poly(), expected);

        let j3 = jordan_block(f(7), 3, 0);
        assert_eq!(j3.min_poly(), Poly::from_i64(f(7), &[0, 0, 0, 1]));
    }

    #[test]
    fn primary_components_examples() {
        // diag(3,2) over GF(5): eigenspaces, sorted by factor
        let m = Matrix::from_i64(f(5), 2, 2, &[3, 0, 0, 2]);
        let comps = m.primary_components();
        assert_eq!(comps.len(), 2);
        // factors sorted by coefficient sequence: t-2 = [3,1] before t-3 = [2,1]?
        // [2,1] < [3,1] lexicographically, so t-3 comes first in that order.
        for (p, sub) in &comps {
            assert_eq!(sub.dim(), 1);
            let root = p.field().neg(p.coeff(0));
            let v = sub.basis().row(0);
            // eigenvector check
            assert_eq!(m.mul_vec(v), v.iter().map(|&x| m.field().mul(x, root)).collect::<Vec<_>>());
        }

        let id = Matrix::identity(f(3), 4);
        let comps = id.primary_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].1.dim(), 4);
    }

    #[test]
    fn nilpotent_type_examples() {
        assert_eq!(
            Matrix::zeros(f(3), 3, 3).nilpotent_type().unwrap(),
            Partition::new(vec![1, 1, 1])
        );
        assert_eq!(
            jordan_block(f(3), 3, 0).nilpotent_type().unwrap(),
            Partition::new(vec![3])
        );
        let m = block_diag(
            f(5),
            &[
                jordan_block(f(5), 2, 0),
                jordan_block(f(5), 2, 0),
                jordan_block(f(5), 1, 0),
            ],
        );
        assert_eq!(m.nilpotent_type().unwrap(), Partition::new(vec![2, 2, 1]));
        assert_eq!(
            Matrix::identity(f(3), 2).nilpotent_type(),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn nilpotent_type_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let field = f(3);
        let m = block_diag(
            field,
            &[jordan_block(field, 3, 0), jordan_block(field, 2, 0)],
        );
        for _ in 0..20 {
            let p = Matrix::random_invertible(field, 5, &mut rng);
            let conj = p.inverse().unwrap().mul(&m).mul(&p);
            assert_eq!(conj.nilpotent_type().unwrap(), m.nilpotent_type().unwrap());
        }
    }

    #[test]
    fn similar_examples() {
        let j3 = jordan_block(f(2), 3, 0);
        assert!(j3.similar(&j3.transpose()).unwrap());

        let a = block_diag(f(2), &[jordan_block(f(2), 2, 0), jordan_block(f(2), 2, 0)]);
        let b = block_diag(f(2), &[jordan_block(f(2), 3, 0), jordan_block(f(2), 1, 0)]);
        assert!(!a.similar(&b).unwrap());
    }

    #[test]
    fn similar_conjugation_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let field = f(3);
        for _ in 0..15 {
            let m = Matrix::random(field, 4, 4, &mut rng);
            let p = Matrix::random_invertible(field, 4, &mut rng);
            let conj = p.inverse().unwrap().mul(&m).mul(&p);
            assert!(m.similar(&conj).unwrap());
        }
    }

    #[test]
    fn centralizer_orders() {
        assert_eq!(
            Partition::new(vec![1]).centralizer_order_gl(2),
            BigUint::from(1u32)
        );
        assert_eq!(Partition::new(vec![1]).centralizer_dim(), 1);
        assert_eq!(
            Partition::new(vec![1, 1]).centralizer_order_gl(2),
            BigUint::from(6u32)
        );
        assert_eq!(Partition::new(vec![1, 1]).centralizer_dim(), 4);
        let t = Partition::new(vec![2, 1]);
        assert_eq!(t.centralizer_dim(), 5);
        assert_eq!(t.centralizer_order_gl(2), BigUint::from(8u32));
    }

    #[test]
    fn centralizer_order_matches_brute_force_small() {
        // all partitions of n <= 3 over GF(2) and GF(3), brute-force count of
        // invertible matrices commuting with the canonical nilpotent
        let partitions: Vec<Vec<usize>> = vec![
            vec![1],
            vec![2],
            vec![1, 1],
            vec![3],
            vec![2, 1],
            vec![1, 1, 1],
        ];
        for q in [2u64, 3] {
            let field = f(q);
            for parts in &partitions {
                let n: usize = parts.iter().sum();
                let blocks: Vec<Matrix> =
                    parts.iter().map(|&r| jordan_block(field, r, 0)).collect();
                let nil = block_diag(field, &blocks);
                let total = (q as u128).pow((n * n) as u32);
                let mut count = 0u64;
                for code in 0..total {
                    let mut c = code;
                    let mut data = vec![0u64; n * n];
                    for d in data.iter_mut() {
                        *d = (c % q as u128) as u64;
                        c /= q as u128;
                    }
                    let g = Matrix::new(field, n, n, data);
                    if g.mul(&nil) == nil.mul(&g) && g.is_invertible() {
                        count += 1;
                    }
                }
                let predicted = Partition::new(parts.clone()).centralizer_order_gl(q);
                assert_eq!(
                    BigUint::from(count),
                    predicted,
                    "partition {parts:?} over GF({q})"
                );
            }
        }
    }

    #[test]
    fn subspace_operations() {
        let field = f(5);
        let u = Subspace::from_rows(field, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let w = Subspace::from_rows(field, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vec(&[0, 1, 0]));
        let s = u.sum(&w);
        assert_eq!(s.dim(), 3);
        let reps = u.complement_in(&i);
        assert_eq!(reps.len(), 1);
    }

    #[test]
    fn subspace_enumeration_is_exhaustive() {
        let field = f(3);
        let u = Subspace::from_rows(field, 3, vec![vec![1, 0, 2], vec![0, 1, 1]]);
        let all: std::collections::HashSet<Vec<u64>> = u.enumerate_vectors().collect();
        assert_eq!(all.len(), 9);
        for v in &all {
            assert!(u.contains_vec(v));
        }
    }
}
