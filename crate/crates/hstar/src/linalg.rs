//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: `BigInt` vectors and matrices,
//! `BigRational` solves, Smith normal form with transformation matrices,
//! sublattice indices and integer box enumeration. No floating point is used
//! anywhere in this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{fmt_bigint_vec, Error, Result};

/// Integer vector of fixed length (a lattice point or an integral covector).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec(pub Vec<BigInt>);

/// Rational vector with entries kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatVec(pub Vec<BigRational>);

/// Dense integer matrix, row major. Dimensions are fixed at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntVec {
    pub fn from_i64(entries: &[i64]) -> Self {
        IntVec(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(len: usize) -> Self {
        IntVec(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn dot_rat(&self, other: &RatVec) -> BigRational {
        debug_assert_eq!(self.len(), other.0.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| BigRational::from(a.clone()) * b)
            .sum()
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &IntVec) -> IntVec {
        debug_assert_eq!(self.len(), other.len());
        IntVec(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntVec) -> IntVec {
        debug_assert_eq!(self.len(), other.len());
        IntVec(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|x| x * k).collect())
    }

    pub fn to_rat(&self) -> RatVec {
        RatVec(self.0.iter().map(|x| BigRational::from(x.clone())).collect())
    }
}

impl std::fmt::Debug for IntVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", fmt_bigint_vec(&self.0))
    }
}

impl std::fmt::Display for IntVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", fmt_bigint_vec(&self.0))
    }
}

impl std::ops::Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl RatVec {
    pub fn from_ints(entries: &[i64]) -> Self {
        RatVec(
            entries
                .iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot_rat(&self, other: &RatVec) -> BigRational {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Clear denominators and divide by the content, keeping the direction.
    pub fn to_primitive_int(&self) -> Result<IntVec> {
        let mut lcm = BigInt::one();
        for x in &self.0 {
            lcm = lcm.lcm(x.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * BigRational::from(lcm.clone())).to_integer())
            .collect();
        primitive_vector(&IntVec(ints))
    }
}

impl std::fmt::Debug for RatVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", inner.join(", "))
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[IntVec]) -> Self {
        let ncols = rows.first().map_or(0, IntVec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.0.iter().cloned());
        }
        IntMatrix::new(rows.len(), ncols, data)
    }

    pub fn from_cols(cols: &[IntVec]) -> Self {
        let nrows = cols.first().map_or(0, IntVec::len);
        let mut m = IntMatrix::zero(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "ragged columns");
            for i in 0..nrows {
                *m.at_mut(i, j) = c.0[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> IntVec {
        IntVec((0..self.rows).map(|i| self.at(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVec) -> IntVec {
        assert_eq!(self.cols, v.len());
        IntVec(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| self.at(i, j) * &v.0[j])
                        .sum::<BigInt>()
                })
                .collect(),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = self.at(src, j) * q;
            *self.at_mut(dst, j) += t;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = self.at(i, src) * q;
            *self.at_mut(i, dst) += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular and `S`
/// diagonal, nonnegative, each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The nonzero diagonal entries (invariant factors).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s.at(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Divide a nonzero integer vector by the gcd of its entries.
pub fn primitive_vector(v: &IntVec) -> Result<IntVec> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut g = BigInt::zero();
    for x in &v.0 {
        g = g.gcd(x);
    }
    Ok(IntVec(v.0.iter().map(|x| x / &g).collect()))
}

/// Pick the pivot for the Smith reduction: the smallest nonzero entry in
/// absolute value within the trailing submatrix, ties broken row-major.
fn find_pivot(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            let x = s.at(i, j);
            if x.is_zero() {
                continue;
            }
            match &best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if x.abs() < s.at(*bi, *bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Smith normal form by elementary row and column operations.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let limit = a.rows().min(a.cols());
    let mut k = 0;

    'outer: while k < limit {
        let Some((pi, pj)) = find_pivot(&s, k) else {
            break;
        };
        s.swap_rows(k, pi);
        u.swap_rows(k, pi);
        s.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // Clear row k and column k. Truncating division leaves remainders
        // strictly smaller than the pivot, so re-picking converges.
        let mut dirty = false;
        for i in k + 1..s.rows() {
            if !s.at(i, k).is_zero() {
                let q = -(s.at(i, k) / s.at(k, k));
                s.add_row_mul(i, k, &q);
                u.add_row_mul(i, k, &q);
                if !s.at(i, k).is_zero() {
                    dirty = true;
                }
            }
        }
        for j in k + 1..s.cols() {
            if !s.at(k, j).is_zero() {
                let q = -(s.at(k, j) / s.at(k, k));
                s.add_col_mul(j, k, &q);
                v.add_col_mul(j, k, &q);
                if !s.at(k, j).is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue 'outer;
        }

        // Pivot must divide everything that remains; if not, fold the
        // offending row into row k and restart this step.
        for i in k + 1..s.rows() {
            for j in k + 1..s.cols() {
                if !(s.at(i, j) % s.at(k, k)).is_zero() {
                    s.add_row_mul(k, i, &BigInt::one());
                    u.add_row_mul(k, i, &BigInt::one());
                    continue 'outer;
                }
            }
        }

        if s.at(k, k).is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }

    SnfResult { u, s, v }
}

/// Reduced row echelon form over the rationals; returns pivot columns.
fn rref(m: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Solve `M x = b` over the rationals; free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub fn solve_linear(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // A pivot in the augmented column means 0 = 1.
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Solve `A x = b` exactly. When the solution space is positive-dimensional
/// the unique solution lying in the row space of `A` is returned, so that
/// underdetermined systems have a canonical deterministic answer.
pub fn solve_rational(a: &IntMatrix, b: &RatVec) -> Option<RatVec> {
    assert_eq!(a.rows(), b.len(), "rhs length must match row count");
    if a.rows() == 0 {
        return Some(RatVec(vec![BigRational::zero(); a.cols()]));
    }
    // x = Aᵀy with (A Aᵀ) y = b. The Gram system is solvable exactly when
    // A x = b is, and the resulting x does not depend on the choice of y.
    let gram = a.mul(&a.transpose());
    let gram_rat: Vec<Vec<BigRational>> = (0..gram.rows())
        .map(|i| {
            (0..gram.cols())
                .map(|j| BigRational::from(gram.at(i, j).clone()))
                .collect()
        })
        .collect();
    let y = solve_linear(&gram_rat, &b.0)?;
    let mut x = vec![BigRational::zero(); a.cols()];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for j in 0..a.cols() {
            x[j] += BigRational::from(a.at(i, j).clone()) * yi;
        }
    }
    // The row-space solution solves the original system iff it is consistent.
    for i in 0..a.rows() {
        let lhs: BigRational = (0..a.cols())
            .map(|j| BigRational::from(a.at(i, j).clone()) * &x[j])
            .sum();
        if lhs != b.0[i] {
            return None;
        }
    }
    Some(RatVec(x))
}

/// Rank of a set of integer vectors over the rationals.
pub fn rank_int(vecs: &[IntVec]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigRational>> = vecs
        .iter()
        .map(|v| v.0.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    rref(&mut m).len()
}

/// Primitive integer basis of the null space {x : M x = 0} for an integer
/// matrix given by rows.
pub fn null_space_int(rows: &[IntVec], cols: usize) -> Vec<IntVec> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|v| v.0.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    if m.is_empty() {
        m.push(vec![BigRational::zero(); cols]);
    }
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut x = vec![BigRational::zero(); cols];
        x[free] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = -m[i][free].clone();
        }
        let v = RatVec(x)
            .to_primitive_int()
            .expect("null space basis vector is nonzero");
        basis.push(v);
    }
    basis
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let n = u.rows();
    assert_eq!(n, u.cols(), "inverse of a non-square matrix");
    let mut inv = IntMatrix::zero(n, n);
    let rat_rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(u.at(i, j).clone()))
                .collect()
        })
        .collect();
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = BigRational::one();
        let col = solve_linear(&rat_rows, &e).expect("unimodular matrix is invertible");
        for (i, x) in col.iter().enumerate() {
            assert!(x.is_integer(), "inverse of unimodular matrix is integral");
            *inv.at_mut(i, j) = x.to_integer();
        }
    }
    inv
}

/// Index of the sublattice spanned by the columns of `gens` inside the
/// lattice of all integer points of their rational span. Equals the product
/// of the nonzero invariant factors.
pub fn lattice_index(gens: &IntMatrix) -> Result<BigInt> {
    let snf = smith_normal_form(gens);
    let factors = snf.invariant_factors();
    if factors.len() < gens.cols() {
        return Err(Error::RankDeficient);
    }
    Ok(factors.iter().product())
}

/// All integer points `p` with `lo <= p <= hi` componentwise, in
/// lexicographic order. An empty range yields nothing; the zero-dimensional
/// box yields the single empty point.
pub struct IntegerBoxIter {
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
    current: Option<Vec<BigInt>>,
}

pub fn enumerate_integer_box(lo: &RatVec, hi: &RatVec) -> IntegerBoxIter {
    assert_eq!(lo.len(), hi.len());
    let lo_int: Vec<BigInt> = lo.0.iter().map(|x| x.ceil().to_integer()).collect();
    let hi_int: Vec<BigInt> = hi.0.iter().map(|x| x.floor().to_integer()).collect();
    let nonempty = lo_int.iter().zip(hi_int.iter()).all(|(a, b)| a <= b);
    IntegerBoxIter {
        current: nonempty.then(|| lo_int.clone()),
        lo: lo_int,
        hi: hi_int,
    }
}

/// Integer-bound variant used by the counting loops.
pub fn enumerate_integer_box_int(lo: &[BigInt], hi: &[BigInt]) -> IntegerBoxIter {
    assert_eq!(lo.len(), hi.len());
    let nonempty = lo.iter().zip(hi.iter()).all(|(a, b)| a <= b);
    IntegerBoxIter {
        current: nonempty.then(|| lo.to_vec()),
        lo: lo.to_vec(),
        hi: hi.to_vec(),
    }
}

impl Iterator for IntegerBoxIter {
    type Item = IntVec;

    fn next(&mut self) -> Option<IntVec> {
        let cur = self.current.as_mut()?;
        let out = IntVec(cur.clone());
        // Odometer with the last coordinate least significant.
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            if cur[k] < self.hi[k] {
                cur[k] += 1;
                for j in k + 1..cur.len() {
                    cur[j] = self.lo[j].clone();
                }
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| IntVec::from_i64(r)).collect::<Vec<_>>())
    }

    #[test]
    fn primitive_vector_examples() {
        assert_eq!(
            primitive_vector(&IntVec::from_i64(&[2, 4])).unwrap(),
            IntVec::from_i64(&[1, 2])
        );
        assert_eq!(
            primitive_vector(&IntVec::from_i64(&[0, 0, 5])).unwrap(),
            IntVec::from_i64(&[0, 0, 1])
        );
        assert_eq!(
            primitive_vector(&IntVec::from_i64(&[3, -6, 9])).unwrap(),
            IntVec::from_i64(&[1, -2, 3])
        );
        assert!(matches!(
            primitive_vector(&IntVec::from_i64(&[0, 0])),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn primitive_vector_is_idempotent() {
        let v = IntVec::from_i64(&[6, -10, 4]);
        let p = primitive_vector(&v).unwrap();
        assert_eq!(primitive_vector(&p).unwrap(), p);
    }

    /// Independent oracle: the k-th invariant factor equals
    /// gcd(k x k minors) / gcd((k-1) x (k-1) minors).
    fn minor_gcd_oracle(a: &IntMatrix) -> Vec<BigInt> {
        fn minors_gcd(a: &IntMatrix, k: usize) -> BigInt {
            fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
                if k == 0 {
                    return vec![vec![]];
                }
                let mut out = Vec::new();
                for first in 0..n {
                    for mut rest in combos(n, k - 1) {
                        if rest.iter().all(|&x| x > first) {
                            let mut c = vec![first];
                            c.append(&mut rest);
                            out.push(c);
                        }
                    }
                }
                out.retain(|c| c.len() == k);
                out
            }
            fn det(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
                if rows.is_empty() {
                    return BigInt::one();
                }
                let mut acc = BigInt::zero();
                for (idx, &c) in cols.iter().enumerate() {
                    let sub_cols: Vec<usize> =
                        cols.iter().copied().filter(|&x| x != c).collect();
                    let term = a.at(rows[0], c) * det(a, &rows[1..], &sub_cols);
                    if idx % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
            let mut g = BigInt::zero();
            for rows in combos(a.rows(), k) {
                for cols in combos(a.cols(), k) {
                    g = g.gcd(&det(a, &rows, &cols));
                }
            }
            g
        }
        let r = a.rows().min(a.cols());
        let mut factors = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=r {
            let g = minors_gcd(a, k);
            if g.is_zero() {
                break;
            }
            factors.push(&g / &prev);
            prev = g;
        }
        factors
    }

    fn check_snf(a: &IntMatrix) {
        let snf = smith_normal_form(a);
        // U A V = S exactly.
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s);
        // S diagonal, nonnegative, divisibility chain.
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.at(i, j).is_zero());
                }
            }
        }
        let diag: Vec<BigInt> = (0..snf.s.rows().min(snf.s.cols()))
            .map(|i| snf.s.at(i, i).clone())
            .collect();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            } else {
                assert!(w[1].is_zero());
            }
        }
        // U, V unimodular.
        let det_u = minor_gcd_oracle_det(&snf.u);
        let det_v = minor_gcd_oracle_det(&snf.v);
        assert!(det_u.abs().is_one() && det_v.abs().is_one());
        // Invariant factors match the gcd-of-minors oracle.
        assert_eq!(snf.invariant_factors(), minor_gcd_oracle(a));
    }

    fn minor_gcd_oracle_det(a: &IntMatrix) -> BigInt {
        fn det(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
            if rows.is_empty() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for (idx, &c) in cols.iter().enumerate() {
                let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = a.at(rows[0], c) * det(a, &rows[1..], &sub);
                if idx % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let idx: Vec<usize> = (0..a.rows()).collect();
        det(a, &idx, &idx)
    }

    #[test]
    fn snf_identity() {
        let snf = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(snf.s, IntMatrix::identity(2));
    }

    #[test]
    fn snf_diag_2_3() {
        // Oracle: gcd of entries 1, |det| 6, so invariant factors (1, 6).
        let a = m(&[&[2, 0], &[0, 3]]);
        check_snf(&a);
        let snf = smith_normal_form(&a);
        assert_eq!(*snf.s.at(0, 0), BigInt::from(1));
        assert_eq!(*snf.s.at(1, 1), BigInt::from(6));
    }

    #[test]
    fn snf_square_example() {
        // Oracle: gcd of entries 2, |det| 8, so invariant factors (2, 4).
        let a = m(&[&[2, 4], &[6, 8]]);
        check_snf(&a);
        let snf = smith_normal_form(&a);
        assert_eq!(*snf.s.at(0, 0), BigInt::from(2));
        assert_eq!(*snf.s.at(1, 1), BigInt::from(4));
    }

    #[test]
    fn snf_random_small_matrices() {
        // A small deterministic sweep standing in for the random property:
        // every 2x3 and 3x3 matrix with entries in {-2..2} drawn from a
        // linear congruential stream.
        let mut state: i64 = 1;
        let mut next = move || {
            state = (state.wrapping_mul(1103515245).wrapping_add(12345)) % 1000;
            (state % 5).abs() as i64 - 2
        };
        for _ in 0..40 {
            let a = m(&[
                &[next(), next(), next()],
                &[next(), next(), next()],
                &[next(), next(), next()],
            ]);
            check_snf(&a);
        }
    }

    #[test]
    fn solve_rational_examples() {
        let a = IntMatrix::identity(2);
        let b = RatVec::from_ints(&[1, 2]);
        assert_eq!(solve_rational(&a, &b).unwrap(), b);

        // Two covector constraints K(1,0)=1, K(1,2)=1 force K = (1,0).
        let a = m(&[&[1, 0], &[1, 2]]);
        let b = RatVec::from_ints(&[1, 1]);
        assert_eq!(solve_rational(&a, &b).unwrap(), RatVec::from_ints(&[1, 0]));

        // Underdetermined: the row-space representative is symmetric.
        let a = m(&[&[1, 1]]);
        let b = RatVec::from_ints(&[3]);
        let x = solve_rational(&a, &b).unwrap();
        let half3 = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert_eq!(x.0, vec![half3.clone(), half3]);

        // Inconsistent system.
        let a = m(&[&[1, 0], &[1, 0]]);
        let b = RatVec::from_ints(&[0, 1]);
        assert!(solve_rational(&a, &b).is_none());
    }

    #[test]
    fn lattice_index_examples() {
        let g = IntMatrix::from_cols(&[IntVec::from_i64(&[1, 0]), IntVec::from_i64(&[0, 1])]);
        assert_eq!(lattice_index(&g).unwrap(), BigInt::from(1));

        let g = IntMatrix::from_cols(&[IntVec::from_i64(&[1, 0]), IntVec::from_i64(&[1, 2])]);
        assert_eq!(lattice_index(&g).unwrap(), BigInt::from(2));

        let g = IntMatrix::from_cols(&[
            IntVec::from_i64(&[1, 1, 1]),
            IntVec::from_i64(&[1, 1, -1]),
        ]);
        assert_eq!(lattice_index(&g).unwrap(), BigInt::from(2));

        let g = IntMatrix::from_cols(&[IntVec::from_i64(&[1, 2]), IntVec::from_i64(&[2, 4])]);
        assert!(matches!(lattice_index(&g), Err(Error::RankDeficient)));
    }

    #[test]
    fn box_enumeration_examples() {
        let pts: Vec<IntVec> =
            enumerate_integer_box(&RatVec::from_ints(&[0, 0]), &RatVec::from_ints(&[1, 1]))
                .collect();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], IntVec::from_i64(&[0, 0]));
        assert_eq!(pts[3], IntVec::from_i64(&[1, 1]));

        let empty: Vec<IntVec> =
            enumerate_integer_box(&RatVec::from_ints(&[0]), &RatVec::from_ints(&[-1])).collect();
        assert!(empty.is_empty());

        let nine: Vec<IntVec> =
            enumerate_integer_box(&RatVec::from_ints(&[-1, -1]), &RatVec::from_ints(&[1, 1]))
                .collect();
        assert_eq!(nine.len(), 9);
        // Lexicographic order.
        let mut sorted = nine.clone();
        sorted.sort();
        assert_eq!(nine, sorted);
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = m(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, 1]]);
        let inv = unimodular_inverse(&u);
        assert_eq!(u.mul(&inv), IntMatrix::identity(3));
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }
}
