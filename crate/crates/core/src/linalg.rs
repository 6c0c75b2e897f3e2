//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] / [`BigRational`]; there is no
//! floating point anywhere in the crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntegerMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, k: &BigInt) -> IntegerMatrix {
        IntegerMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn neg(&self) -> IntegerMatrix {
        self.scaled(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn block_diag(blocks: &[IntegerMatrix]) -> IntegerMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntegerMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out[(a, b)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntegerMatrix> {
        let inv = self
            .to_rational()
            .inverse()
            .ok_or_else(|| Error::InvalidInput("matrix is singular".into()))?;
        inv.to_integer()
            .ok_or_else(|| Error::InvalidInput("matrix is not unimodular".into()))
    }

    /// Bilinear value xᵀ·M·y.
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let my = self.mul_vec(y);
        x.iter().zip(&my).map(|(a, b)| a * b).sum()
    }

    /// Bilinear value xᵀ·M·y for rational vectors.
    pub fn bilinear_q(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() && !yj.is_zero() {
                    acc += xi * yj * BigRational::from_integer(m.clone());
                }
            }
        }
        acc
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (r, c): (usize, usize)) -> &BigRational {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigRational {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = a * b;
                        out[(i, j)] += v;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = BigRational::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &self[(r, c)] * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RationalMatrix::zeros(n, n);
        for i in 0..n {
            inv[(i, i)] = BigRational::one();
        }
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                    inv.data.swap(k * n + c, p * n + c);
                }
            }
            let piv = a[(k, k)].clone();
            for c in 0..n {
                a[(k, c)] = &a[(k, c)] / &piv;
                inv[(k, c)] = &inv[(k, c)] / &piv;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for c in 0..n {
                    let da = &f * &a[(k, c)];
                    a[(i, c)] -= da;
                    let di = &f * &inv[(k, c)];
                    inv[(i, c)] -= di;
                }
            }
        }
        Some(inv)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

/// Rational vector stored as integer numerators over a positive common
/// denominator in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl RationalVector {
    pub fn new(numerators: Vec<BigInt>, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let mut v = RationalVector { numerators, denominator };
        v.normalize();
        Ok(v)
    }

    pub fn from_integers(v: &[BigInt]) -> Self {
        RationalVector { numerators: v.to_vec(), denominator: BigInt::one() }
    }

    pub fn from_rationals(v: &[BigRational]) -> Self {
        let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numerators = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        let mut out = RationalVector { numerators, denominator: den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.denominator.is_negative() {
            self.denominator = -&self.denominator;
            for x in &mut self.numerators {
                *x = -&*x;
            }
        }
        let g = self.numerators.iter().fold(self.denominator.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.denominator = &self.denominator / &g;
            for x in &mut self.numerators {
                *x = &*x / &g;
            }
        }
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.numerators
            .iter()
            .map(|x| BigRational::new(x.clone(), self.denominator.clone()))
            .collect()
    }
}

/// Result of [`smith_decompose`]: `u · m · v = s`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl Smith {
    /// Diagonal entries d₁ | d₂ | … (length min(rows, cols)).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

fn min_pivot(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with transformation matrices.
///
/// Pivot rule: smallest nonzero absolute value in the active block, ties
/// broken lexicographically by (row, column).
pub fn smith_decompose(m: &IntegerMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_pivot(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
            }
            // A leftover remainder is smaller than the pivot: move it in.
            let mut best: Option<(usize, usize)> = None;
            for i in t + 1..r {
                if !a[(i, t)].is_zero() && best.map_or(true, |(bi, bj)| a[(i, t)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, t));
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() && best.map_or(true, |(bi, bj)| a[(t, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((t, j));
                }
            }
            if let Some((bi, bj)) = best {
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // Row and column cleared; enforce divisibility of the rest.
            let mut bad = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !a[(i, j)].is_multiple_of(&a[(t, t)]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { s: a, u, v }
}

/// Saturated basis of the integer kernel {x ∈ Zⁿ : M·x = 0}.
///
/// Each vector is normalized so that its first nonzero entry is positive.
pub fn integral_kernel(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let smith = smith_decompose(m);
    let rank = smith.rank();
    (rank..m.cols())
        .map(|j| {
            let mut col = smith.v.column(j);
            if col.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                for x in &mut col {
                    *x = -&*x;
                }
            }
            col
        })
        .collect()
}

/// A basis of Qⁿ orthogonal with respect to the symmetric form `g`,
/// together with the norms of its vectors.
pub fn orthogonal_basis(g: &IntegerMatrix) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    if !g.is_symmetric() {
        return Err(Error::InvalidInput("matrix is not symmetric".into()));
    }
    let n = g.rows();
    let mut remaining: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut basis = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let pick = remaining.iter().position(|x| !g.bilinear_q(x, x).is_zero());
        let w = match pick {
            Some(i) => remaining.remove(i),
            None => {
                // All remaining vectors isotropic: use x+y for a pair with x·y ≠ 0.
                let mut pair = None;
                'outer: for i in 0..remaining.len() {
                    for j in i + 1..remaining.len() {
                        if !g.bilinear_q(&remaining[i], &remaining[j]).is_zero() {
                            pair = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match pair {
                    Some((i, j)) => {
                        let sum: Vec<BigRational> =
                            remaining[i].iter().zip(&remaining[j]).map(|(a, b)| a + b).collect();
                        remaining.remove(i);
                        sum
                    }
                    None => {
                        for x in remaining.drain(..) {
                            basis.push(x);
                            norms.push(BigRational::zero());
                        }
                        break;
                    }
                }
            }
        };
        let ww = g.bilinear_q(&w, &w);
        for x in &mut remaining {
            let f = g.bilinear_q(x, &w) / &ww;
            if !f.is_zero() {
                for (xi, wi) in x.iter_mut().zip(&w) {
                    *xi -= &f * wi;
                }
            }
        }
        basis.push(w);
        norms.push(ww);
    }
    Ok((basis, norms))
}

/// Inertia (n₊, n₋, n₀) of a symmetric integer matrix.
pub fn inertia(m: &IntegerMatrix) -> Result<(usize, usize, usize)> {
    let (_, norms) = orthogonal_basis(m)?;
    let pos = norms.iter().filter(|x| x.is_positive()).count();
    let neg = norms.iter().filter(|x| x.is_negative()).count();
    Ok((pos, neg, norms.len() - pos - neg))
}

/// Z-basis (as columns) of the lattice spanned by rational column vectors.
pub fn lattice_basis(rows: usize, generators: &[Vec<BigRational>]) -> RationalMatrix {
    let gens = RationalMatrix::from_columns(rows, generators);
    let den = gens.common_denominator();
    let scale = BigRational::from_integer(den.clone());
    let mut ints = IntegerMatrix::zeros(rows, generators.len());
    for i in 0..rows {
        for j in 0..generators.len() {
            ints[(i, j)] = (&gens[(i, j)] * &scale).to_integer();
        }
    }
    let smith = smith_decompose(&ints);
    let rank = smith.rank();
    // columns of u⁻¹·s span the same lattice as the columns of `ints`
    let u_inv = smith.u.inverse_unimodular().expect("smith transform is unimodular");
    let cols: Vec<Vec<BigRational>> = (0..rank)
        .map(|j| {
            let d = &smith.s[(j, j)];
            u_inv
                .column(j)
                .into_iter()
                .map(|x| BigRational::new(x * d, den.clone()))
                .collect()
        })
        .collect();
    RationalMatrix::from_columns(rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows)
    }

    fn check_smith(a: &IntegerMatrix) -> Smith {
        let s = smith_decompose(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.s);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        let d = s.diagonal();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(s.s[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn smith_examples() {
        let d = |x: Vec<i64>| x.into_iter().map(BigInt::from).collect::<Vec<_>>();
        assert_eq!(check_smith(&m(&[vec![0, 1], vec![1, 0]])).diagonal(), d(vec![1, 1]));
        assert_eq!(check_smith(&m(&[vec![2, 0], vec![0, 3]])).diagonal(), d(vec![1, 6]));
        assert_eq!(check_smith(&m(&[vec![-6, 3], vec![3, -6]])).diagonal(), d(vec![3, 9]));
        assert_eq!(check_smith(&m(&[vec![8, 4], vec![4, 8]])).diagonal(), d(vec![4, 12]));
    }

    #[test]
    fn smith_rectangular_and_zero() {
        check_smith(&m(&[vec![2, 4, 6], vec![1, 3, 5]]));
        check_smith(&m(&[vec![0, 0], vec![0, 0], vec![0, 0]]));
        check_smith(&IntegerMatrix::zeros(0, 3));
    }

    #[test]
    fn kernel_examples() {
        assert!(integral_kernel(&IntegerMatrix::identity(3)).is_empty());
        let k = integral_kernel(&m(&[vec![1, 1], vec![1, 1]]));
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(-1)]]);
        // saturation: 2x - 4y = 0 has kernel Z·(2,1), not Z·(4,2)
        let k = integral_kernel(&m(&[vec![2, -4]]));
        assert_eq!(k, vec![vec![BigInt::from(2), BigInt::from(1)]]);
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), (1, 1, 0));
        assert_eq!(inertia(&m(&[vec![8, 4], vec![4, 8]])).unwrap(), (2, 0, 0));
        assert_eq!(inertia(&m(&[vec![0, 0], vec![0, 0]])).unwrap(), (0, 0, 2));
        assert_eq!(inertia(&m(&[vec![1, 1], vec![1, 1]])).unwrap(), (1, 0, 1));
        assert!(inertia(&m(&[vec![0, 1], vec![2, 0]])).is_err());
    }

    #[test]
    fn determinant_matches_cofactor() {
        let a = m(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(a.determinant(), BigInt::from(4));
        let b = m(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        assert_eq!(b.determinant(), BigInt::from(-2));
    }

    #[test]
    fn rational_vector_normalizes() {
        let v = RationalVector::new(vec![BigInt::from(2), BigInt::from(-4)], BigInt::from(-6)).unwrap();
        assert_eq!(v.numerators(), &[BigInt::from(-1), BigInt::from(2)]);
        assert_eq!(v.denominator(), &BigInt::from(3));
        assert!(RationalVector::new(vec![BigInt::from(1)], BigInt::zero()).is_err());
    }

    #[test]
    fn lattice_basis_of_overlattice() {
        // Z² + Z·(1/2, 1/2)
        let h = BigRational::new(BigInt::from(1), BigInt::from(2));
        let one = BigRational::one();
        let zero = BigRational::zero();
        let gens = vec![vec![one.clone(), zero.clone()], vec![zero, one], vec![h.clone(), h]];
        let b = lattice_basis(2, &gens);
        assert_eq!(b.cols(), 2);
        let det = b.inverse().map(|inv| inv.rows());
        assert_eq!(det, Some(2));
        let g = IntegerMatrix::identity(2).to_rational();
        let gram = b.transpose().mul(&g).mul(&b);
        // covolume 1/2 → Gram determinant 1/4
        let d = gram[(0, 0)].clone() * gram[(1, 1)].clone() - gram[(0, 1)].clone() * gram[(1, 0)].clone();
        assert_eq!(d, BigRational::new(BigInt::from(1), BigInt::from(4)));
    }
}
