//! Line configurations on 2d-polarized K3 surfaces.
//!
//! A configuration is a multigraph Γ of lines (v² = −2, v·h = 1, v·w the
//! edge multiplicity) plus generators of a finite index extension
//! N ⊃ Fano(Γ) = (ZΓ + Zh)/ker. Coordinates on ZΓ + Zh are (lines…, h).

mod fragments;
mod graph;
mod real;

pub use fragments::{catalog_graph, classify_fragment, enumerate_fragments, fragment_sets, Fragment, CATALOG};
pub use graph::{compose, group_elements, identity, inverse, Multigraph, Permutation, CANONICAL_LEAF_CAP};
pub use real::{
    count_fragments_under, polarized_stabilizer, real_structure_candidates, stabilizer_by_lattice, Admissibility,
    PhiCount, PolarizedStabilizer, RealAnalysis, RealCandidate, AUT_ELEMENT_CAP, PHI_COUNT_CAP,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::criteria::TranscendentalSpec;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{integral_kernel, lattice_basis, smith_decompose, IntegerMatrix, RationalMatrix, RationalVector};

#[derive(Clone, Debug)]
pub struct LineConfiguration {
    degree: u32,
    graph: Multigraph,
    kernel: Vec<RationalVector>,
    transcendental: Option<TranscendentalSpec>,
}

impl LineConfiguration {
    pub fn new(
        degree: u32,
        vertices: usize,
        edges: &[(usize, usize, u8)],
        kernel: Vec<RationalVector>,
        transcendental: Option<TranscendentalSpec>,
    ) -> Result<Self> {
        if degree < 2 || degree % 2 != 0 {
            return Err(Error::InvalidInput(format!("degree 2d = {degree} must be even and positive")));
        }
        for &(i, j, m) in edges {
            if i >= j {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) must satisfy i < j")));
            }
            if !(1..=3).contains(&m) {
                return Err(Error::InvalidInput(format!(
                    "edge ({i},{j}) has multiplicity {m}; two lines meet with multiplicity 1, 2 or 3"
                )));
            }
        }
        let graph = Multigraph::from_edges(vertices, edges)?;
        let cfg = LineConfiguration { degree, graph, kernel, transcendental };
        let g0 = cfg.gram();
        for (k, v) in cfg.kernel.iter().enumerate() {
            if v.len() != vertices + 1 {
                return Err(Error::InvalidInput(format!(
                    "kernel vector {k} has length {}, expected {}",
                    v.len(),
                    vertices + 1
                )));
            }
            let den = v.denominator();
            let gv = g0.mul_vec(v.numerators());
            if gv.iter().any(|x| !x.is_multiple_of(den)) {
                return Err(Error::InvalidInput(format!("kernel vector {k} does not pair integrally with Fano(Γ)")));
            }
            let sq: BigInt = gv.iter().zip(v.numerators()).map(|(a, b)| a * b).sum();
            let den2 = den * den;
            if !sq.is_multiple_of(&den2) || (sq / den2).is_odd() {
                return Err(Error::InvalidInput(format!("kernel vector {k} has odd or non-integral square")));
            }
        }
        Ok(cfg)
    }

    /// 2d = h².
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.order()
    }

    pub fn kernel(&self) -> &[RationalVector] {
        &self.kernel
    }

    pub fn transcendental(&self) -> Option<&TranscendentalSpec> {
        self.transcendental.as_ref()
    }

    /// Gram matrix on (lines…, h).
    pub fn gram(&self) -> IntegerMatrix {
        let n = self.vertex_count();
        let mut g = IntegerMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            g[(i, i)] = BigInt::from(-2);
            for j in 0..n {
                if i != j {
                    g[(i, j)] = BigInt::from(self.graph.mult(i, j));
                }
            }
            g[(i, n)] = BigInt::one();
            g[(n, i)] = BigInt::one();
        }
        g[(n, n)] = BigInt::from(self.degree);
        g
    }

    /// Gram matrix on the lines alone.
    pub fn line_gram(&self) -> IntegerMatrix {
        let n = self.vertex_count();
        let all: Vec<usize> = (0..n).collect();
        self.gram().select(&all, &all)
    }

    /// (r, girth, |Aut Γ|) with r the rank of the line Gram matrix.
    pub fn graph_invariants(&self) -> (usize, Option<usize>, u128) {
        let r = smith_decompose(&self.line_gram()).rank();
        (r, self.graph.girth(), self.graph.automorphisms().1)
    }
}

/// Fano(Γ), its radical and the overlattice N.
#[derive(Clone, Debug)]
pub struct FanoLattice {
    /// Gram on (lines…, h).
    pub gram: IntegerMatrix,
    /// Saturated basis of the radical.
    pub radical: Vec<Vec<BigInt>>,
    /// Fano(Γ) on the basis given by the columns of `complement`.
    pub fano: Lattice,
    pub complement: IntegerMatrix,
    // rows of the inverse basis change projecting onto `complement`
    projection: IntegerMatrix,
    /// N on the columns of `n_basis`, in Fano(Γ) coordinates.
    pub n: Lattice,
    pub n_basis: RationalMatrix,
    n_basis_inverse: RationalMatrix,
    pub warnings: Vec<String>,
}

impl FanoLattice {
    /// Coordinates in Fano(Γ) of a vector on (lines…, h).
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.projection.mul_vec(x)
    }

    /// Coordinates on (lines…, h) of a rational vector of Fano(Γ) ⊗ Q.
    pub fn lift(&self, y: &RationalVector) -> RationalVector {
        RationalVector::new(self.complement.mul_vec(y.numerators()), y.denominator().clone())
            .expect("denominator stays positive")
    }

    /// Matrix on Fano(Γ) of the isometry v ↦ ε·σ(v), h ↦ ε·h.
    pub fn fano_action(&self, sigma: &[usize], eps: i64) -> IntegerMatrix {
        let n = sigma.len();
        let mut p = IntegerMatrix::zeros(n + 1, n + 1);
        for (i, &j) in sigma.iter().enumerate() {
            p[(j, i)] = BigInt::from(eps);
        }
        p[(n, n)] = BigInt::from(eps);
        self.projection.mul(&p).mul(&self.complement)
    }

    /// Matrix on N of a Fano(Γ) isometry, if it preserves N.
    pub fn n_action(&self, fano_matrix: &IntegerMatrix) -> Option<IntegerMatrix> {
        self.n_basis_inverse
            .mul(&fano_matrix.to_rational())
            .mul(&self.n_basis)
            .to_integer()
    }

    pub fn rank(&self) -> usize {
        self.fano.rank()
    }
}

/// Gram, radical and the lattices Fano(Γ) ⊂ N of a configuration.
pub fn fano_lattice(cfg: &LineConfiguration) -> Result<FanoLattice> {
    let gram = cfg.gram();
    let dim = gram.rows();
    let radical = integral_kernel(&gram);
    let k = radical.len();
    // radical is saturated, so W = U⁻¹ from the Smith form of its columns
    // is a basis of Z^{n+1} whose first k columns span the radical
    let (projection, complement) = if k == 0 {
        (IntegerMatrix::identity(dim), IntegerMatrix::identity(dim))
    } else {
        let rad = IntegerMatrix::from_columns(dim, &radical);
        let smith = smith_decompose(&rad);
        let w = smith.u.inverse_unimodular()?;
        let rest: Vec<usize> = (k..dim).collect();
        let all: Vec<usize> = (0..dim).collect();
        (smith.u.select(&rest, &all), w.select(&all, &rest))
    };
    let fano_gram = complement.transpose().mul(&gram).mul(&complement);
    let fano = Lattice::new(fano_gram)?;
    let mut warnings = Vec::new();
    let m = fano.rank();
    if fano.signature() != (1, m - 1, 0) {
        let (p, q, z) = fano.signature();
        warnings.push(format!("Fano(Γ) has signature ({p},{q},{z}), not hyperbolic; configuration is not realizable"));
    }

    // N = Fano(Γ) + Σ Z·(projected kernel vectors)
    let mut gens: Vec<Vec<BigRational>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for v in cfg.kernel() {
        let p = projection.mul_vec(v.numerators());
        gens.push(p.into_iter().map(|x| BigRational::new(x, v.denominator().clone())).collect());
    }
    let n_basis = lattice_basis(m, &gens);
    let n_gram = n_basis.transpose().mul(&fano.gram().to_rational()).mul(&n_basis);
    let n_gram = n_gram
        .to_integer()
        .ok_or_else(|| Error::InvalidInput("kernel data does not define an integral overlattice".into()))?;
    let n = Lattice::new(n_gram).map_err(|e| Error::InvalidInput(format!("overlattice N is not even: {e}")))?;
    if n.rank() > 22 {
        warnings.push(format!("rank N = {} exceeds 22", n.rank()));
    }
    let n_basis_inverse = n_basis.inverse().expect("lattice basis is invertible");
    Ok(FanoLattice { gram, radical, fano, complement, projection, n, n_basis, n_basis_inverse, warnings })
}
