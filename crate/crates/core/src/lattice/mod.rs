//! Even lattices given by Gram matrices.
//!
//! Root lattices follow the negative definite convention: `A2` has Gram
//! matrix `[[-2, 1], [1, -2]]`, `E8` has signature (0, 8).

mod discr;
mod isometry;
mod padic;
mod spec;

pub use discr::Discriminant;
pub use isometry::{
    find_isometry, invariant_sublattice, orthogonal_group_definite, sign_structure_action, Isometry, Sublattice,
};
pub use padic::{is_prime_u64, is_rational_square, prime_factors_u64, square_class_equal};
pub use spec::parse_lattice_spec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fqf::FiniteQuadraticForm;
use crate::linalg::{inertia, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntegerMatrix,
    signature: (usize, usize, usize),
    determinant: BigInt,
}

impl Lattice {
    /// Wraps a symmetric Gram matrix with even diagonal.
    pub fn new(gram: IntegerMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
        }
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(Error::InvalidInput(format!("odd diagonal entry {} (lattice is not even)", gram[(i, i)])));
            }
        }
        let signature = inertia(&gram)?;
        let determinant = gram.determinant();
        Ok(Lattice { gram, signature, determinant })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntegerMatrix::from_rows(rows))
    }

    /// Builds a lattice from a [`parse_lattice_spec`] expression.
    pub fn from_spec(spec: &str) -> Result<Self> {
        parse_lattice_spec(spec)
    }

    pub fn gram(&self) -> &IntegerMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// (n₊, n₋, n₀)
    pub fn signature(&self) -> (usize, usize, usize) {
        self.signature
    }

    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant.is_zero()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature == (self.rank(), 0, 0)
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature == (0, self.rank(), 0)
    }

    pub fn hyperbolic_plane() -> Self {
        Self::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    /// The rank-1 lattice [n].
    pub fn rank_one(n: i64) -> Result<Self> {
        Self::from_rows(&[vec![n]])
    }

    /// The binary lattice [a, b, c] = Zu + Zv with u² = a, u·v = b, v² = c.
    pub fn binary(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::from_rows(&[vec![a, b], vec![b, c]])
    }

    pub fn root_a(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("A_n needs n ≥ 1".into()));
        }
        Ok(Self::from_dynkin(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()))
    }

    pub fn root_d(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidInput("D_n needs n ≥ 4".into()));
        }
        let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((n - 3, n - 1));
        Ok(Self::from_dynkin(n, &edges))
    }

    pub fn root_e(n: usize) -> Result<Self> {
        if !(6..=8).contains(&n) {
            return Err(Error::InvalidInput("E_n needs n ∈ {6, 7, 8}".into()));
        }
        let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((2, n - 1));
        Ok(Self::from_dynkin(n, &edges))
    }

    fn from_dynkin(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = BigInt::from(-2);
        }
        for &(a, b) in edges {
            g[(a, b)] = BigInt::from(1);
            g[(b, a)] = BigInt::from(1);
        }
        Self::new(g).expect("Dynkin Gram matrices are even")
    }

    /// L(n): the form multiplied by `n`.
    pub fn rescaled(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("rescaling by zero".into()));
        }
        Self::new(self.gram.scaled(&BigInt::from(n)))
    }

    pub fn direct_sum(&self, other: &Lattice) -> Self {
        Self::new(IntegerMatrix::block_diag(&[self.gram.clone(), other.gram.clone()])).unwrap()
    }

    /// k·L = L ⊕ … ⊕ L.
    pub fn power(&self, k: usize) -> Self {
        Self::new(IntegerMatrix::block_diag(&vec![self.gram.clone(); k])).unwrap()
    }

    /// The discriminant group L^∨/L with its quadratic form and the
    /// coordinate maps needed to push isometries down to it.
    pub fn discriminant(&self) -> Result<Discriminant> {
        Discriminant::new(self)
    }

    /// Shorthand for `discriminant()?.form()`.
    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm> {
        Ok(self.discriminant()?.form().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn root_lattice_determinants() {
        assert_eq!(Lattice::root_a(2).unwrap().determinant(), &BigInt::from(3));
        assert_eq!(Lattice::root_a(3).unwrap().determinant(), &BigInt::from(-4));
        assert_eq!(Lattice::root_d(4).unwrap().determinant(), &BigInt::from(4));
        assert_eq!(Lattice::root_e(6).unwrap().determinant(), &BigInt::from(3));
        assert_eq!(Lattice::root_e(7).unwrap().determinant(), &BigInt::from(-2));
        let e8 = Lattice::root_e(8).unwrap();
        assert!(e8.determinant().is_one());
        assert_eq!(e8.signature(), (0, 8, 0));
    }

    #[test]
    fn rejects_odd_and_bad_input() {
        assert!(Lattice::binary(1, 0, 2).is_err());
        assert!(Lattice::rank_one(3).is_err());
        assert!(Lattice::from_rows(&[vec![2, 1], vec![0, 2]]).is_err());
        assert!(Lattice::hyperbolic_plane().rescaled(0).is_err());
        assert!(Lattice::root_d(3).is_err());
        assert!(Lattice::root_e(9).is_err());
    }

    #[test]
    fn k3_lattice_is_unimodular_of_signature_3_19() {
        use num_traits::Signed;
        let l = Lattice::from_spec("2E8+3U").unwrap();
        assert_eq!(l.signature(), (3, 19, 0));
        assert_eq!(l.determinant().abs(), BigInt::one());
    }
}
