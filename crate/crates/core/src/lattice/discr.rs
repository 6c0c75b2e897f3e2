use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fqf::{Element, FiniteQuadraticForm, FqfIsometry, MAX_LEVEL};
use crate::linalg::{smith_decompose, IntegerMatrix, RationalVector};

use super::Lattice;

/// discr L = L^∨/L on the generators `V eᵢ / sᵢ` coming from the Smith form
/// `U G V = S` of the Gram matrix. The coordinates of a dual vector y are
/// `(U G y)ᵢ mod sᵢ`.
#[derive(Clone, Debug)]
pub struct Discriminant {
    form: FiniteQuadraticForm,
    gram: IntegerMatrix,
    // rows of U belonging to the factors sᵢ > 1
    coord_rows: Vec<Vec<BigInt>>,
    moduli: Vec<u64>,
    generators: Vec<RationalVector>,
}

impl Discriminant {
    pub fn new(lattice: &Lattice) -> Result<Self> {
        let g = lattice.gram();
        let n = g.rows();
        let smith = smith_decompose(g);
        let diag = smith.diagonal();
        if diag.len() < n || diag.iter().any(|s| s.is_zero()) {
            return Err(Error::Degenerate("discriminant form of a degenerate lattice".into()));
        }
        let mut coord_rows = Vec::new();
        let mut moduli = Vec::new();
        let mut generators = Vec::new();
        for (i, s) in diag.iter().enumerate() {
            let s = s.abs();
            if s.is_one() {
                continue;
            }
            let m = s
                .to_u64()
                .filter(|&m| m <= MAX_LEVEL)
                .ok_or_else(|| Error::CapExceeded(format!("invariant factor {s} exceeds {MAX_LEVEL}")))?;
            coord_rows.push(smith.u.row(i).to_vec());
            moduli.push(m);
            generators.push(RationalVector::new(smith.v.column(i), s)?);
        }
        let level = moduli.last().copied().unwrap_or(1);
        let big_l = BigInt::from(level);
        let k = moduli.len();
        let mut q = vec![0i64; k];
        let mut b = vec![vec![0i64; k]; k];
        let rats: Vec<Vec<BigRational>> = generators.iter().map(|v| v.to_rationals()).collect();
        for i in 0..k {
            for j in i..k {
                let val = g.bilinear_q(&rats[i], &rats[j]) * BigRational::from_integer(big_l.clone());
                debug_assert!(val.is_integer());
                let v = val.to_integer();
                if i == j {
                    q[i] = v.mod_floor(&(&big_l * 2)).to_i64().unwrap();
                }
                let bij = v.mod_floor(&big_l).to_i64().unwrap();
                b[i][j] = bij;
                b[j][i] = bij;
            }
        }
        let form = FiniteQuadraticForm::from_scaled(moduli.clone(), level, q, b);
        Ok(Discriminant { form, gram: g.clone(), coord_rows, moduli, generators })
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    /// Dual vector representing the i-th generator, in lattice coordinates.
    pub fn generator(&self, i: usize) -> &RationalVector {
        &self.generators[i]
    }

    /// Dual vector Σ xᵢ·gᵢ representing the class with coordinates `x`.
    pub fn representative(&self, x: &[i64]) -> RationalVector {
        let n = self.gram.rows();
        let mut acc = vec![BigRational::zero(); n];
        for (c, g) in x.iter().zip(&self.generators) {
            for (a, v) in acc.iter_mut().zip(g.to_rationals()) {
                *a += v * BigInt::from(*c);
            }
        }
        RationalVector::from_rationals(&acc)
    }

    /// Class of a dual vector; errors if `y` is not in L^∨.
    pub fn coords_of(&self, y: &RationalVector) -> Result<Element> {
        let gy: Vec<BigInt> = self.gram.mul_vec(y.numerators());
        let den = y.denominator();
        if gy.iter().any(|x| !x.is_multiple_of(den)) {
            return Err(Error::InvalidInput("vector is not in the dual lattice".into()));
        }
        let gy: Vec<BigInt> = gy.into_iter().map(|x| x / den).collect();
        Ok(self
            .coord_rows
            .iter()
            .zip(&self.moduli)
            .map(|(row, &m)| {
                let c: BigInt = row.iter().zip(&gy).map(|(a, b)| a * b).sum();
                c.mod_floor(&BigInt::from(m)).to_i64().unwrap()
            })
            .collect())
    }

    /// Action of a lattice isometry (matrix on lattice coordinates) on discr L.
    pub fn induced_action(&self, g: &IntegerMatrix) -> Result<FqfIsometry> {
        let images = self
            .generators
            .iter()
            .map(|y| {
                let gy = g.mul_vec(y.numerators());
                self.coords_of(&RationalVector::new(gy, y.denominator().clone())?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FqfIsometry { images, anti: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn examples() {
        assert!(Lattice::root_e(8).unwrap().discriminant_form().unwrap().is_trivial());

        let u2 = Lattice::from_spec("U(2)").unwrap().discriminant_form().unwrap();
        assert_eq!(u2.orders(), &[2, 2]);
        assert_eq!(u2.generator_q_values(), vec![Ratio::new(0, 1), Ratio::new(0, 1)]);
        assert_eq!(u2.b_value(&[1, 0], &[0, 1]), Ratio::new(1, 2));

        let schur = Lattice::from_spec("[8,4,8]").unwrap().discriminant_form().unwrap();
        assert_eq!(schur.orders(), &[4, 12]);
    }

    #[test]
    fn cardinality_matches_determinant() {
        for s in ["A2", "A3+D5", "E6+U(6)", "[4,2,6]+[-2]", "2U(3)"] {
            let l = Lattice::from_spec(s).unwrap();
            assert_eq!(l.discriminant_form().unwrap().cardinality(), l.determinant().abs(), "{s}");
        }
    }

    #[test]
    fn degenerate_rejected() {
        let l = Lattice::from_rows(&[vec![2, 2], vec![2, 2]]).unwrap();
        assert!(l.discriminant().is_err());
    }

    #[test]
    fn isometry_action() {
        let l = Lattice::from_spec("U(3)").unwrap();
        let d = l.discriminant().unwrap();
        let minus = IntegerMatrix::identity(2).neg();
        let a = d.induced_action(&minus).unwrap();
        assert!(a.is_valid(d.form(), d.form()));
        let swap = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let s = d.induced_action(&swap).unwrap();
        assert!(s.is_valid(d.form(), d.form()));
        assert!(!s.is_identity());
        assert!(d.induced_action(&IntegerMatrix::identity(2)).unwrap().is_identity());
    }
}
