//! Finite quadratic forms (discriminant forms).
//!
//! A form is stored on an invariant-factor basis g₁,…,g_k with orders
//! d₁ | d₂ | … | d_k (all > 1). Values are kept as integers scaled by the
//! level L = d_k: `q[i] = L·q(gᵢ) mod 2L` and `b[i][j] = L·b(gᵢ,gⱼ) mod L`.
//! Every element's q-value has denominator dividing its order, so the
//! scaled values are exact.

mod brown;
mod isometry;

pub use brown::brown_invariant;
pub use isometry::{fqf_isometries, fqf_isometries_limited, involution_classes, AutomorphismGroup, FqfIsometry, InvolutionClass};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{integral_kernel, smith_decompose, IntegerMatrix};

/// Largest level accepted; keeps all scaled products inside `i128`.
pub const MAX_LEVEL: u64 = 1 << 40;

/// Element coordinates, reduced into `[0, dᵢ)`.
pub type Element = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    level: u64,
    q: Vec<i64>,
    b: Vec<Vec<i64>>,
}

/// A subgroup together with the images of its basis in the ambient form.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub form: FiniteQuadraticForm,
    pub basis: Vec<Element>,
}

fn modp(x: i128, m: i128) -> i64 {
    x.rem_euclid(m) as i64
}

impl FiniteQuadraticForm {
    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: vec![], level: 1, q: vec![], b: vec![] }
    }

    /// Builds a form from generators of arbitrary orders with rational values
    /// (`qvalues` mod 2, `pairing` mod 1), checks consistency and brings it
    /// to invariant-factor form.
    pub fn from_rational(orders: &[u64], qvalues: &[Ratio<i64>], pairing: &[Vec<Ratio<i64>>]) -> Result<Self> {
        let k = orders.len();
        if qvalues.len() != k || pairing.len() != k || pairing.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("form data dimensions do not match the number of factors".into()));
        }
        if orders.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("group factors must be positive".into()));
        }
        let level = orders.iter().fold(1u64, |acc, &d| acc.lcm(&d));
        if level > MAX_LEVEL {
            return Err(Error::CapExceeded(format!("form level {level} exceeds {MAX_LEVEL}")));
        }
        let l = level as i128;
        let scale = |r: &Ratio<i64>, what: &str| -> Result<i128> {
            let num = *r.numer() as i128 * l;
            let den = *r.denom() as i128;
            if num % den != 0 {
                return Err(Error::InvalidInput(format!("{what} value {r} has denominator not dividing the level")));
            }
            Ok(num / den)
        };
        let mut q = vec![0i64; k];
        let mut b = vec![vec![0i64; k]; k];
        for i in 0..k {
            let qi = scale(&qvalues[i], "q")?;
            q[i] = modp(qi, 2 * l);
            for j in 0..k {
                let bij = scale(&pairing[i][j], "pairing")?;
                b[i][j] = modp(bij, l);
            }
        }
        for i in 0..k {
            for j in 0..k {
                if b[i][j] != b[j][i] {
                    return Err(Error::InvalidInput("pairing matrix is not symmetric".into()));
                }
                // dᵢ·gᵢ = 0 forces dᵢ·b(gᵢ,gⱼ) ∈ Z
                if (orders[i] as i128 * b[i][j] as i128) % l != 0 {
                    return Err(Error::InvalidInput(format!("pairing b({i},{j}) incompatible with order {}", orders[i])));
                }
            }
            if (q[i] as i128 - b[i][i] as i128).rem_euclid(l) != 0 {
                return Err(Error::InvalidInput(format!("q({i}) does not reduce to b({i},{i}) mod 1")));
            }
            let d = orders[i] as i128;
            if (d * d * q[i] as i128) % (2 * l) != 0 {
                return Err(Error::InvalidInput(format!("q({i}) incompatible with order {}", orders[i])));
            }
        }
        let raw = FiniteQuadraticForm { orders: orders.to_vec(), level, q, b };
        let all: Vec<Element> = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        Ok(raw.subgroup_unchecked(&all).form)
    }

    /// Internal constructor on an invariant-factor basis with scaled values.
    pub(crate) fn from_scaled(orders: Vec<u64>, level: u64, q: Vec<i64>, b: Vec<Vec<i64>>) -> Self {
        debug_assert!(orders.iter().all(|&d| d > 1));
        debug_assert!(orders.windows(2).all(|w| w[1] % w[0] == 0));
        FiniteQuadraticForm { orders, level, q, b }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Exponent of the group (1 for the trivial form).
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn cardinality(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |acc, &d| acc * d)
    }

    /// Group order if it fits a `u64`.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn generator(&self, i: usize) -> Element {
        (0..self.rank()).map(|j| i64::from(i == j)).collect()
    }

    pub fn reduce(&self, x: &mut Element) {
        for (xi, &d) in x.iter_mut().zip(&self.orders) {
            *xi = xi.rem_euclid(d as i64);
        }
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), &d)| modp(*a as i128 + *b as i128, d as i128))
            .collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(a, &d)| modp(*a as i128 * k as i128, d as i128))
            .collect()
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        self.scale(-1, x)
    }

    pub fn element_order(&self, x: &[i64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&a, &d)| acc.lcm(&(d / d.gcd(&(a as u64)))))
    }

    /// L·q(x) mod 2L.
    pub fn q_scaled(&self, x: &[i64]) -> i64 {
        let l2 = 2 * self.level as i128;
        let mut acc: i128 = 0;
        for i in 0..self.rank() {
            let xi = x[i] as i128;
            if xi == 0 {
                continue;
            }
            acc = (acc + (xi * xi % l2) * self.q[i] as i128) % l2;
            for j in i + 1..self.rank() {
                let xj = x[j] as i128;
                if xj != 0 {
                    acc = (acc + 2 * ((xi * xj % l2) * self.b[i][j] as i128 % l2)) % l2;
                }
            }
        }
        modp(acc, l2)
    }

    /// L·b(x,y) mod L.
    pub fn b_scaled(&self, x: &[i64], y: &[i64]) -> i64 {
        let l = self.level as i128;
        let mut acc: i128 = 0;
        for i in 0..self.rank() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                if y[j] != 0 {
                    acc = (acc + (x[i] as i128 * y[j] as i128 % l) * self.b[i][j] as i128) % l;
                }
            }
        }
        modp(acc, l)
    }

    /// q(x) as a rational in [0, 2).
    pub fn q_value(&self, x: &[i64]) -> Ratio<i64> {
        Ratio::new(self.q_scaled(x), self.level as i64)
    }

    /// b(x,y) as a rational in [0, 1).
    pub fn b_value(&self, x: &[i64], y: &[i64]) -> Ratio<i64> {
        Ratio::new(self.b_scaled(x, y), self.level as i64)
    }

    /// q-values of the basis generators.
    pub fn generator_q_values(&self) -> Vec<Ratio<i64>> {
        (0..self.rank()).map(|i| Ratio::new(self.q[i], self.level as i64)).collect()
    }

    pub fn pairing_matrix(&self) -> Vec<Vec<Ratio<i64>>> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| Ratio::new(self.b[i][j], self.level as i64)).collect())
            .collect()
    }

    /// All elements in mixed-radix order; fails when |D| exceeds `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Element>> {
        let n = self
            .cardinality_u64()
            .filter(|&n| n <= cap)
            .ok_or_else(|| Error::CapExceeded(format!("group of order {} exceeds element cap {cap}", self.cardinality())))?;
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = self.zero();
        for _ in 0..n {
            out.push(cur.clone());
            for (c, &d) in cur.iter_mut().zip(&self.orders) {
                *c += 1;
                if (*c as u64) < d {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    /// The form with q replaced by −q.
    pub fn negated(&self) -> Self {
        let l = self.level as i128;
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            level: self.level,
            q: self.q.iter().map(|&v| modp(-(v as i128), 2 * l)).collect(),
            b: self.b.iter().map(|r| r.iter().map(|&v| modp(-(v as i128), l)).collect()).collect(),
        }
    }

    /// Orthogonal direct sum, renormalized to invariant factors.
    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        let level = self.level.lcm(&other.level);
        if level > MAX_LEVEL {
            return Err(Error::CapExceeded(format!("form level {level} exceeds {MAX_LEVEL}")));
        }
        let k = self.rank() + other.rank();
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        let mut q = vec![0i64; k];
        let mut b = vec![vec![0i64; k]; k];
        for (form, off) in [(self, 0usize), (other, self.rank())] {
            let f = (level / form.level) as i64;
            for i in 0..form.rank() {
                q[off + i] = form.q[i] * f;
                for j in 0..form.rank() {
                    b[off + i][off + j] = form.b[i][j] * f;
                }
            }
        }
        let raw = FiniteQuadraticForm { orders, level, q, b };
        let all: Vec<Element> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
        Ok(raw.subgroup_unchecked(&all).form)
    }

    /// Subgroup generated by `gens`, on a fresh invariant-factor basis.
    pub fn subgroup(&self, gens: &[Element]) -> Subgroup {
        self.subgroup_unchecked(gens)
    }

    // Works for any generator orders, not only invariant factors, which is
    // what `from_rational` and `orthogonal_sum` rely on.
    fn subgroup_unchecked(&self, gens: &[Element]) -> Subgroup {
        let k = self.rank();
        let m = gens.len();
        if m == 0 || gens.iter().all(|g| g.iter().zip(&self.orders).all(|(x, &d)| x.rem_euclid(d as i64) == 0)) {
            return Subgroup { form: Self::trivial(), basis: vec![] };
        }
        // relations c with Σ cⱼ hⱼ = 0: kernel of [H | diag(d)]
        let mut a = IntegerMatrix::zeros(k, m + k);
        for (j, g) in gens.iter().enumerate() {
            for i in 0..k {
                a[(i, j)] = BigInt::from(g[i]);
            }
        }
        for i in 0..k {
            a[(i, m + i)] = BigInt::from(self.orders[i]);
        }
        let ker = integral_kernel(&a);
        let rel_rows: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..m].to_vec()).collect();
        let rel = IntegerMatrix::from_rows(&rel_rows);
        // c ↦ c·V carries the relation module onto the rows of S, so the
        // i-th cyclic factor is generated by row i of V⁻¹
        let smith = smith_decompose(&rel);
        let vinv = smith.v.inverse_unimodular().expect("Smith transforms are unimodular");
        let diag = smith.diagonal();
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        for (i, s) in diag.iter().enumerate() {
            let s = s.to_u64().expect("finite subgroup order fits u64");
            if s <= 1 {
                continue;
            }
            let mut x = vec![0i64; k];
            for j in 0..m {
                let c = (&vinv[(i, j)]).mod_floor(&BigInt::from(self.level)).to_i64().unwrap();
                for t in 0..k {
                    x[t] = modp(x[t] as i128 + c as i128 * gens[j][t] as i128, self.orders[t] as i128);
                }
            }
            basis.push(x);
            orders.push(s);
        }
        let level = orders.last().copied().unwrap_or(1);
        let f = (self.level / level) as i128;
        let q = basis
            .iter()
            .map(|x| {
                let v = self.q_scaled(x) as i128;
                debug_assert_eq!(v % f, 0);
                modp(v / f, 2 * level as i128)
            })
            .collect();
        let b = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| modp(self.b_scaled(x, y) as i128 / f, level as i128))
                    .collect()
            })
            .collect();
        Subgroup { form: FiniteQuadraticForm { orders, level, q, b }, basis }
    }

    /// {x : b(x, h) = 0 for all h in `gens`}.
    pub fn orthogonal_complement(&self, gens: &[Element]) -> Subgroup {
        let k = self.rank();
        let m = gens.len();
        if m == 0 {
            let all: Vec<Element> = (0..k).map(|i| self.generator(i)).collect();
            return self.subgroup(&all);
        }
        let l = self.level;
        let mut a = IntegerMatrix::zeros(m, k + m);
        for (j, h) in gens.iter().enumerate() {
            for i in 0..k {
                a[(j, i)] = BigInt::from(self.b_scaled(&self.generator(i), h));
            }
            a[(j, k + j)] = BigInt::from(l);
        }
        let ker = integral_kernel(&a);
        let elems: Vec<Element> = ker
            .iter()
            .map(|v| {
                let mut x: Element = v[..k].iter().map(|c| c.mod_floor(&BigInt::from(l)).to_i64().unwrap()).collect();
                self.reduce(&mut x);
                x
            })
            .collect();
        self.subgroup(&elems)
    }

    /// Radical of the bilinear form.
    pub fn radical(&self) -> Subgroup {
        let all: Vec<Element> = (0..self.rank()).map(|i| self.generator(i)).collect();
        self.orthogonal_complement(&all)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().form.is_trivial()
    }

    fn p_part_with_basis(&self, p: u64) -> Subgroup {
        let mut orders = Vec::new();
        let mut basis = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let mut pk = 1u64;
            let mut rest = d;
            while rest % p == 0 {
                rest /= p;
                pk *= p;
            }
            if pk > 1 {
                orders.push(pk);
                basis.push(self.scale(rest as i64, &self.generator(i)));
            }
        }
        let level = orders.last().copied().unwrap_or(1);
        let f = (self.level / level) as i128;
        let q = basis.iter().map(|x| modp(self.q_scaled(x) as i128 / f, 2 * level as i128)).collect();
        let b = basis
            .iter()
            .map(|x| basis.iter().map(|y| modp(self.b_scaled(x, y) as i128 / f, level as i128)).collect())
            .collect();
        Subgroup { form: FiniteQuadraticForm { orders, level, q, b }, basis }
    }

    /// The p-primary part 𝒟 ⊗ Z_p.
    pub fn p_part(&self, p: u64) -> FiniteQuadraticForm {
        self.p_part_with_basis(p).form
    }

    /// Minimal number of generators of the p-part.
    pub fn ell(&self, p: u64) -> usize {
        self.orders.iter().filter(|&&d| d % p == 0).count()
    }

    /// Primes dividing |D|, ascending.
    pub fn primes(&self) -> Vec<u64> {
        match self.orders.last() {
            Some(&d) => crate::lattice::prime_factors_u64(d),
            None => vec![],
        }
    }

    /// Determinant of the rank-ℓ p-adic lattice whose discriminant form is
    /// this p-primary form, as a rational representative of its class in
    /// Q_p^×/(Q_p^×)². Computed as det of the lifted value matrix on the
    /// invariant-factor basis (the dual Gram of that lattice).
    ///
    /// For p = 2 the class is only well defined when the form has no
    /// ⟨θ/2⟩ summand.
    pub fn p_determinant(&self, p: u64) -> BigRational {
        let part = self.p_part(p);
        let k = part.rank();
        let l = part.level as i64;
        let mut m = crate::linalg::RationalMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let num = if i == j { part.q[i] } else { part.b[i][j] };
                m[(i, j)] = BigRational::new(BigInt::from(num), BigInt::from(l));
            }
        }
        determinant_q(&m)
    }

    /// Order-2 elements form an F₂-space; this is a basis of it.
    pub fn two_torsion_basis(&self) -> Vec<Element> {
        self.orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d % 2 == 0)
            .map(|(i, &d)| self.scale((d / 2) as i64, &self.generator(i)))
            .collect()
    }
}

fn determinant_q(m: &crate::linalg::RationalMatrix) -> BigRational {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn orthogonal_sum_of_noncoprime_cyclics() {
        // Z/6 ⊕ Z/4 = Z/2 ⊕ Z/12; q-denominators must divide the orders
        let a = FiniteQuadraticForm::from_rational(&[6], &[r(1, 6)], &[vec![r(1, 6)]]).unwrap();
        let b = FiniteQuadraticForm::from_rational(&[4], &[r(1, 4)], &[vec![r(1, 4)]]).unwrap();
        let s = a.orthogonal_sum(&b).unwrap();
        assert_eq!(s.orders(), &[2, 12]);
        for i in 0..s.rank() {
            let g = s.generator(i);
            assert_eq!(s.orders()[i] % *s.q_value(&g).denom() as u64, 0);
        }
    }

    pub(crate) fn u2() -> FiniteQuadraticForm {
        FiniteQuadraticForm::from_rational(
            &[2, 2],
            &[r(0, 1), r(0, 1)],
            &[vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]],
        )
        .unwrap()
    }

    #[test]
    fn normalizes_to_invariant_factors() {
        // Z/2 ⊕ Z/3 → Z/6
        let f = FiniteQuadraticForm::from_rational(
            &[2, 3],
            &[r(1, 2), r(2, 3)],
            &[vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(2, 3)]],
        )
        .unwrap();
        assert_eq!(f.orders(), &[6]);
        // generator value: q = 1/2·a² + 2/3·b² for the chosen combination
        let vals: Vec<_> = f.elements(100).unwrap().iter().map(|x| f.q_value(x)).collect();
        let mut sorted = vals.clone();
        sorted.sort();
        let mut expect = vec![r(0, 1), r(1, 2), r(2, 3), r(2, 3), r(7, 6), r(7, 6)];
        expect.sort();
        assert_eq!(sorted, expect);
    }

    #[test]
    fn rejects_inconsistent_values() {
        assert!(FiniteQuadraticForm::from_rational(&[2], &[r(1, 3)], &[vec![r(1, 3)]]).is_err());
        assert!(FiniteQuadraticForm::from_rational(&[3], &[r(2, 3)], &[vec![r(1, 3)]]).is_err());
    }

    #[test]
    fn radical_detects_degeneracy() {
        assert!(u2().is_nondegenerate());
        let deg = FiniteQuadraticForm::from_rational(&[2], &[r(0, 1)], &[vec![r(0, 1)]]).unwrap();
        assert!(!deg.is_nondegenerate());
    }

    #[test]
    fn p_parts_and_ell() {
        let f = u2()
            .orthogonal_sum(&FiniteQuadraticForm::from_rational(&[3], &[r(2, 3)], &[vec![r(2, 3)]]).unwrap())
            .unwrap();
        assert_eq!(f.orders(), &[2, 6]);
        assert_eq!(f.ell(2), 2);
        assert_eq!(f.ell(3), 1);
        assert_eq!(f.p_part(3).orders(), &[3]);
        assert_eq!(f.p_part(2).orders(), &[2, 2]);
        assert_eq!(f.p_part(5), FiniteQuadraticForm::trivial());
        assert_eq!(f.primes(), vec![2, 3]);
    }

    #[test]
    fn complement_of_split_vector() {
        let f = u2();
        let comp = f.orthogonal_complement(&[vec![1, 0]]);
        // ⟨g₁⟩⊥ = ⟨g₁⟩ since b(g₁,g₁)=0 and b(g₁,g₂)=1/2
        assert_eq!(comp.form.orders(), &[2]);
        assert_eq!(comp.basis, vec![vec![1, 0]]);
    }
}
