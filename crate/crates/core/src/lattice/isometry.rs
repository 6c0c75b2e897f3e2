use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{integral_kernel, orthogonal_basis, IntegerMatrix, RationalMatrix};

use super::Lattice;

/// Largest rank accepted by [`orthogonal_group_definite`].
pub const DEFINITE_RANK_CAP: usize = 4;
/// Largest number of box points scanned for short vectors.
pub const BOX_CAP: u64 = 1 << 24;

/// An isometry of a lattice, as a matrix acting on coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    matrix: IntegerMatrix,
}

impl Isometry {
    /// Checks gᵀ G g = G.
    pub fn new(lattice: &Lattice, matrix: IntegerMatrix) -> Result<Self> {
        let g = lattice.gram();
        if matrix.rows() != g.rows() || !matrix.is_square() {
            return Err(Error::InvalidInput("isometry has the wrong shape".into()));
        }
        if matrix.transpose().mul(g).mul(&matrix) != *g {
            return Err(Error::InvalidInput("matrix does not preserve the Gram matrix".into()));
        }
        if !matrix.determinant().abs().is_one() {
            return Err(Error::InvalidInput("matrix is not invertible over Z".into()));
        }
        Ok(Isometry { matrix })
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntegerMatrix {
        self.matrix
    }

    pub fn is_involution(&self) -> bool {
        self.matrix.mul(&self.matrix) == IntegerMatrix::identity(self.matrix.rows())
    }
}

/// A sublattice with its inherited form and the embedding (columns of
/// `basis` in ambient coordinates).
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub lattice: Lattice,
    pub basis: IntegerMatrix,
}

fn gram_i64(l: &Lattice) -> Result<Vec<Vec<i64>>> {
    l.gram()
        .to_i64_rows()
        .ok_or_else(|| Error::CapExceeded("Gram entries exceed 64 bits".into()))
}

/// All x ∈ Zⁿ with xᵀGx = `norm` and |xᵢ| ≤ bounds[i].
fn box_vectors(g: &[Vec<i64>], bounds: &[i64], norm: i64) -> Result<Vec<Vec<i64>>> {
    let n = g.len();
    let points = bounds.iter().try_fold(1u64, |acc, &b| acc.checked_mul(2 * b as u64 + 1));
    if points.map_or(true, |p| p > BOX_CAP) {
        return Err(Error::CapExceeded(format!("short-vector box exceeds {BOX_CAP} points")));
    }
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    loop {
        let mut v: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                v += x[i] as i128 * g[i][j] as i128 * x[j] as i128;
            }
        }
        if v == norm as i128 {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

fn dot(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut v: i128 = 0;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        for j in 0..y.len() {
            v += x[i] as i128 * g[i][j] as i128 * y[j] as i128;
        }
    }
    v
}

/// Assign images of basis vectors column by column; each image comes from
/// `cands[i]` and must reproduce row i of `target` against earlier images.
fn assign_columns(
    g: &[Vec<i64>],
    target: &[Vec<i64>],
    cands: &[Vec<Vec<i64>>],
    first_only: bool,
) -> Vec<Vec<Vec<i64>>> {
    fn rec(
        g: &[Vec<i64>],
        target: &[Vec<i64>],
        cands: &[Vec<Vec<i64>>],
        cols: &mut Vec<Vec<i64>>,
        out: &mut Vec<Vec<Vec<i64>>>,
        first_only: bool,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        let i = cols.len();
        if i == cands.len() {
            out.push(cols.clone());
            return;
        }
        for x in &cands[i] {
            if (0..i).all(|j| dot(g, x, &cols[j]) == target[i][j] as i128) {
                cols.push(x.clone());
                rec(g, target, cands, cols, out, first_only);
                cols.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(g, target, cands, &mut Vec::new(), &mut out, first_only);
    out
}

fn columns_to_matrix(n: usize, cols: &[Vec<i64>]) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = BigInt::from(c[i]);
        }
    }
    m
}

/// The finite group O(L) of a definite lattice of rank ≤ 4, sorted.
///
/// Each coordinate of a vector of norm N obeys xᵢ² ≤ N·(G⁻¹)ᵢᵢ, which
/// bounds the search box for images of basis vectors.
pub fn orthogonal_group_definite(lattice: &Lattice) -> Result<Vec<Isometry>> {
    let n = lattice.rank();
    if n > DEFINITE_RANK_CAP {
        return Err(Error::CapExceeded(format!("definite isometry search limited to rank {DEFINITE_RANK_CAP}")));
    }
    let sign: i64 = if lattice.is_positive_definite() {
        1
    } else if lattice.is_negative_definite() {
        -1
    } else {
        return Err(Error::InvalidInput("lattice is not definite".into()));
    };
    let g: Vec<Vec<i64>> = gram_i64(lattice)?
        .into_iter()
        .map(|r| r.into_iter().map(|x| sign * x).collect())
        .collect();
    if n == 0 {
        return Ok(vec![Isometry { matrix: IntegerMatrix::identity(0) }]);
    }
    let inv = lattice
        .gram()
        .to_rational()
        .inverse()
        .expect("definite lattices are nondegenerate");
    let max_norm = (0..n).map(|i| g[i][i]).max().unwrap();
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let bound = (BigRational::from_integer(BigInt::from(max_norm)) * inv[(i, i)].abs()).floor().to_integer();
            bound.sqrt().to_i64().unwrap_or(i64::MAX)
        })
        .collect();
    let cands: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| box_vectors(&g, &bounds, g[i][i]))
        .collect::<Result<_>>()?;
    let mut out: Vec<Isometry> = assign_columns(&g, &g, &cands, false)
        .into_iter()
        .map(|cols| Isometry { matrix: columns_to_matrix(n, &cols) })
        .collect();
    out.sort();
    Ok(out)
}

/// Searches for an isometry `l1 → l2` whose matrix entries (images of the
/// basis of `l1` in coordinates of `l2`) are bounded by `bound`.
pub fn find_isometry(l1: &Lattice, l2: &Lattice, bound: i64) -> Result<Option<IntegerMatrix>> {
    if l1.rank() != l2.rank() || l1.signature() != l2.signature() || l1.determinant() != l2.determinant() {
        return Ok(None);
    }
    let n = l1.rank();
    if n == 0 {
        return Ok(Some(IntegerMatrix::identity(0)));
    }
    let g1 = gram_i64(l1)?;
    let g2 = gram_i64(l2)?;
    let bounds = vec![bound; n];
    let cands: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| box_vectors(&g2, &bounds, g1[i][i]))
        .collect::<Result<_>>()?;
    // a Gram-preserving map between lattices of equal determinant is unimodular
    Ok(assign_columns(&g2, &g1, &cands, true)
        .into_iter()
        .next()
        .map(|cols| columns_to_matrix(n, &cols)))
}

/// +1 if g preserves the orientation of maximal positive definite
/// subspaces, −1 if it reverses it.
pub fn sign_structure_action(lattice: &Lattice, g: &IntegerMatrix) -> Result<i8> {
    if !lattice.is_nondegenerate() {
        return Err(Error::Degenerate("sign structure of a degenerate lattice".into()));
    }
    let gram = lattice.gram();
    let (basis, norms) = orthogonal_basis(gram)?;
    let pos: Vec<usize> = (0..basis.len()).filter(|&i| norms[i].is_positive()).collect();
    let gq = g.to_rational();
    // coordinates of the projection of g·wₖ onto span{wⱼ : j positive}
    let k = pos.len();
    let mut a = RationalMatrix::zeros(k, k);
    for (c, &kk) in pos.iter().enumerate() {
        let img = gq.mul_vec(&basis[kk]);
        for (r, &j) in pos.iter().enumerate() {
            a[(r, c)] = gram.bilinear_q(&img, &basis[j]) / &norms[j];
        }
    }
    let det = rational_determinant(&a);
    if det.is_zero() {
        return Err(Error::InvalidInput("matrix is not an isometry".into()));
    }
    Ok(if det.is_positive() { 1 } else { -1 })
}

fn rational_determinant(m: &RationalMatrix) -> BigRational {
    let n = m.rows();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            for c in 0..n {
                let t = a[(k, c)].clone();
                a[(k, c)] = a[(p, c)].clone();
                a[(p, c)] = t;
            }
            det = -det;
        }
        let piv = a[(k, k)].clone();
        det *= &piv;
        for i in k + 1..n {
            let f = &a[(i, k)] / &piv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let d = &f * &a[(k, c)];
                a[(i, c)] -= d;
            }
        }
    }
    det
}

/// g⁺ = Ker(g − id) for an involution g, saturated, with its induced form.
pub fn invariant_sublattice(lattice: &Lattice, g: &IntegerMatrix) -> Result<Sublattice> {
    let n = lattice.rank();
    if g.rows() != n || !g.is_square() {
        return Err(Error::InvalidInput("isometry has the wrong shape".into()));
    }
    if g.mul(g) != IntegerMatrix::identity(n) {
        return Err(Error::NotInvolution);
    }
    let ker = integral_kernel(&g.sub(&IntegerMatrix::identity(n)));
    let basis = IntegerMatrix::from_columns(n, &ker);
    let gram = basis.transpose().mul(lattice.gram()).mul(&basis);
    Ok(Sublattice { lattice: Lattice::new(gram)?, basis })
}
