//! Real structures compatible with a line configuration.
//!
//! A real structure acts on NS by a = −σ with σ a graph automorphism fixing
//! the polarization and preserving N. It extends to H² iff some gluing
//! anti-isometry φ: discr N → discr T carries ā to the discriminant image of
//! an involution of T reversing the positive sign structure.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::criteria::{t_side_involution_classes, totally_real_criterion, Assessment, TSide, TSideClasses, TranscendentalSpec, Verdict};
use crate::error::{Error, Result};
use crate::fqf::{fqf_isometries_limited, Element, FiniteQuadraticForm, FqfIsometry};
use crate::lattice::Discriminant;
use crate::linalg::RationalVector;

use super::fragments::{enumerate_fragments, Fragment};
use super::graph::{compose, group_elements, identity, Permutation};
use super::{fano_lattice, FanoLattice, LineConfiguration};

/// Largest automorphism group of Γ that is enumerated element by element.
pub const AUT_ELEMENT_CAP: usize = 200_000;
/// Largest number of gluing anti-isometries counted per candidate.
pub const PHI_COUNT_CAP: usize = 10_000;
// elements of discr N enumerated to invert a gluing map
const GLUE_ELEMENT_CAP: u64 = 1 << 20;

/// Stab_Γ = {σ ∈ Aut Γ : σ(N) = N}; the polarized stabilizer is Stab_Γ × {±1}.
#[derive(Clone, Debug)]
pub struct PolarizedStabilizer {
    pub aut_order: u128,
    /// Elements of Stab_Γ, sorted.
    pub elements: Vec<Permutation>,
}

impl PolarizedStabilizer {
    /// |Stab_Γ × {±1}|.
    pub fn order(&self) -> usize {
        2 * self.elements.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Admissibility {
    Admissible,
    Inadmissible,
    Unknown,
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Admissibility::Admissible => "ADMISSIBLE",
            Admissibility::Inadmissible => "INADMISSIBLE",
            Admissibility::Unknown => "UNKNOWN",
        })
    }
}

/// Gluing maps φ with φ∘ā∘φ⁻¹ realized on T, out of all anti-isometries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiCount {
    pub compatible: usize,
    pub total: usize,
}

#[derive(Clone, Debug)]
pub struct RealCandidate {
    /// Smallest element of the Stab_Γ-conjugacy class of σ.
    pub sigma: Permutation,
    pub class_size: usize,
    /// Lines fixed by σ.
    pub real_lines: usize,
    /// Fragments with σ(S) = S.
    pub num_r: usize,
    /// Fragments fixed line by line.
    pub num_rr: usize,
    pub admissibility: Admissibility,
    pub reason: String,
    pub phi: Option<PhiCount>,
}

#[derive(Clone, Debug)]
pub struct RealAnalysis {
    pub fano: FanoLattice,
    pub stabilizer: PolarizedStabilizer,
    pub fragments: Vec<Fragment>,
    pub candidates: Vec<RealCandidate>,
    /// Totally real criterion for N, when rank N ≤ 22.
    pub criterion: Option<Assessment>,
    pub warnings: Vec<String>,
}

fn subgroup_elements(form: &FiniteQuadraticForm, gens: &[Element]) -> Result<HashSet<Element>> {
    let sub = form.subgroup(gens);
    let mut out: HashSet<Element> = HashSet::new();
    out.insert(form.zero());
    for (b, &d) in sub.basis.iter().zip(sub.form.orders()) {
        let current: Vec<Element> = out.iter().cloned().collect();
        for x in current {
            let mut y = x;
            for _ in 1..d {
                y = form.add(&y, b);
                out.insert(y.clone());
            }
        }
        if out.len() as u64 > GLUE_ELEMENT_CAP {
            return Err(Error::CapExceeded(format!("isotropic subgroup larger than {GLUE_ELEMENT_CAP}")));
        }
    }
    Ok(out)
}

fn aut_elements(cfg: &LineConfiguration) -> Result<(Vec<Permutation>, u128)> {
    let (gens, order) = cfg.graph().automorphisms();
    if order > AUT_ELEMENT_CAP as u128 {
        return Err(Error::CapExceeded(format!("|Aut Γ| = {order} exceeds {AUT_ELEMENT_CAP}")));
    }
    Ok((group_elements(cfg.vertex_count(), &gens, AUT_ELEMENT_CAP)?, order))
}

/// Stab_Γ computed on discr Fano(Γ): σ preserves N iff its action maps the
/// isotropic subgroup N/Fano(Γ) to itself.
pub fn polarized_stabilizer(cfg: &LineConfiguration, fl: &FanoLattice) -> Result<PolarizedStabilizer> {
    let (all, aut_order) = aut_elements(cfg)?;
    if cfg.kernel().is_empty() {
        return Ok(PolarizedStabilizer { aut_order, elements: all });
    }
    let discr = fl.fano.discriminant()?;
    let form = discr.form();
    let gens: Vec<Element> = cfg
        .kernel()
        .iter()
        .map(|v| {
            let p = fl.project(v.numerators());
            discr.coords_of(&RationalVector::new(p, v.denominator().clone())?)
        })
        .collect::<Result<_>>()?;
    let k = subgroup_elements(form, &gens)?;
    let keep = all
        .par_iter()
        .map(|s| {
            let act = discr.induced_action(&fl.fano_action(s, 1))?;
            Ok(gens.iter().all(|g| k.contains(&act.apply(form, g))))
        })
        .collect::<Result<Vec<bool>>>()?;
    let elements = all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect();
    Ok(PolarizedStabilizer { aut_order, elements })
}

/// Stab_Γ computed directly: σ preserves N iff its matrix on N is integral.
pub fn stabilizer_by_lattice(cfg: &LineConfiguration, fl: &FanoLattice) -> Result<Vec<Permutation>> {
    let (all, _) = aut_elements(cfg)?;
    Ok(all.into_par_iter().filter(|s| fl.n_action(&fl.fano_action(s, 1)).is_some()).collect())
}

/// (#{S : σ(S) = S}, #{S : σ fixes every line of S}).
pub fn count_fragments_under(fragments: &[Fragment], sigma: &[usize]) -> (usize, usize) {
    let mut num_r = 0;
    let mut num_rr = 0;
    for f in fragments {
        let mut image: Vec<usize> = f.vertices.iter().map(|&v| sigma[v]).collect();
        if f.vertices.iter().all(|&v| sigma[v] == v) {
            num_rr += 1;
        }
        image.sort_unstable();
        if image == f.vertices {
            num_r += 1;
        }
    }
    (num_r, num_rr)
}

/// Involutions of Stab_Γ up to conjugacy, each with its class size.
fn involution_classes(stab: &[Permutation], n: usize) -> Vec<(Permutation, usize)> {
    let id = identity(n);
    let inverses: Vec<Permutation> = stab.iter().map(|g| super::graph::inverse(g)).collect();
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut out = Vec::new();
    for s in stab {
        if compose(s, s) != id || seen.contains(s) {
            continue;
        }
        let mut class: Vec<Permutation> =
            stab.iter().zip(&inverses).map(|(g, gi)| compose(g, &compose(s, gi))).collect();
        class.sort();
        class.dedup();
        let size = class.len();
        let rep = class[0].clone();
        seen.extend(class);
        out.push((rep, size));
    }
    out.sort();
    out
}

struct Gluing<'a> {
    n_discr: Discriminant,
    t_side: &'a TSideClasses,
    phi0: FqfIsometry,
    // φ₀(x) ↦ x on all of discr N
    phi0_inverse: HashMap<Element, Element>,
    phis: Option<Vec<FqfIsometry>>,
}

impl Gluing<'_> {
    fn conjugate(&self, a: &FqfIsometry) -> FqfIsometry {
        let t = self.t_side.discriminant.form();
        let n = self.n_discr.form();
        let images = (0..t.rank())
            .map(|i| {
                let x = &self.phi0_inverse[&t.generator(i)];
                self.phi0.apply(t, &a.apply(n, x))
            })
            .collect();
        FqfIsometry { images, anti: false }
    }

    fn assess(&self, a: &FqfIsometry) -> (Admissibility, String, Option<PhiCount>) {
        let t = self.t_side.discriminant.form();
        let c0 = self.conjugate(a);
        let group = &self.t_side.group;
        let meets = group.conjugacy_class(&c0).iter().any(|c| self.t_side.is_realized(c));
        let phi = self.phis.as_ref().map(|phis| {
            let compatible = phis
                .iter()
                .filter(|phi| {
                    let target = phi.compose(a, t);
                    self.t_side.realized.iter().any(|s| s.compose(phi, t) == target)
                })
                .count();
            PhiCount { compatible, total: phis.len() }
        });
        if meets {
            let class = self.t_side.class_of(&c0).map_or(String::from("?"), |i| i.to_string());
            (Admissibility::Admissible, format!("φāφ⁻¹ lies in T-side class {class}"), phi)
        } else {
            (Admissibility::Inadmissible, "no gluing carries ā to an involution of T".into(), phi)
        }
    }
}

fn gluing<'a>(fl: &FanoLattice, t_side: &'a TSideClasses) -> Result<std::result::Result<Gluing<'a>, String>> {
    let n_discr = fl.n.discriminant()?;
    let nf = n_discr.form();
    let tf = t_side.discriminant.form();
    let (mut phis, overflow) = fqf_isometries_limited(nf, tf, true, PHI_COUNT_CAP)?;
    if phis.is_empty() {
        return Ok(Err("discr N and discr T are not anti-isometric".into()));
    }
    phis.sort();
    let phi0 = phis[0].clone();
    let phi0_inverse = nf.elements(GLUE_ELEMENT_CAP)?.into_iter().map(|x| (phi0.apply(tf, &x), x)).collect();
    let phis = (!overflow).then_some(phis);
    Ok(Ok(Gluing { n_discr, t_side, phi0, phi0_inverse, phis }))
}

fn from_verdict(v: Verdict) -> Admissibility {
    match v {
        Verdict::YesContains2 | Verdict::YesContainsU2 => Admissibility::Admissible,
        Verdict::No => Admissibility::Inadmissible,
        Verdict::Unknown => Admissibility::Unknown,
    }
}

/// Fragments, stabilizer and real structure candidates of a configuration.
pub fn real_structure_candidates(cfg: &LineConfiguration) -> Result<RealAnalysis> {
    let fl = fano_lattice(cfg)?;
    let mut warnings = fl.warnings.clone();
    let fragments = enumerate_fragments(cfg)?;
    let stabilizer = polarized_stabilizer(cfg, &fl)?;
    let n = cfg.vertex_count();
    let rank_n = fl.n.rank();

    let criterion = if rank_n <= 22 {
        Some(totally_real_criterion(&fl.n.discriminant_form()?, 22 - rank_n, fl.n.determinant())?)
    } else {
        None
    };

    let t_side = match cfg.transcendental() {
        None => TSide::Unknown("no transcendental lattice given".into()),
        Some(spec) => {
            if spec.rank() + rank_n != 22 {
                warnings.push(format!("rank T = {} but 22 − rank N = {}", spec.rank(), 22 - rank_n.min(22)));
            }
            match spec {
                TranscendentalSpec::GenericDiscr { .. } => {
                    TSide::Unknown("only the discriminant form of T is known".into())
                }
                _ => t_side_involution_classes(spec)?,
            }
        }
    };
    let glue = match &t_side {
        TSide::Known(t) => Some(gluing(&fl, t)?),
        TSide::Unknown(_) => None,
    };
    if let Some(Err(why)) = &glue {
        warnings.push(why.clone());
    }
    let n_discr = fl.n.discriminant()?;
    let id = identity(n);

    let classes = involution_classes(&stabilizer.elements, n);
    let candidates = classes
        .into_par_iter()
        .map(|(sigma, class_size)| {
            let (num_r, num_rr) = count_fragments_under(&fragments, &sigma);
            let real_lines = sigma.iter().enumerate().filter(|(i, &j)| *i == j).count();
            let (admissibility, reason, phi) = match (&t_side, &glue) {
                (_, Some(Err(why))) => (Admissibility::Inadmissible, why.clone(), None),
                (_, Some(Ok(g))) => {
                    let a_n = fl
                        .n_action(&fl.fano_action(&sigma, -1))
                        .ok_or_else(|| Error::InvalidInput("stabilizer element does not preserve N".into()))?;
                    g.assess(&n_discr.induced_action(&a_n)?)
                }
                (_, None) => match &criterion {
                    Some(c) if sigma == id => {
                        (from_verdict(c.verdict), format!("totally real criterion: {}", c.verdict), None)
                    }
                    _ => {
                        let why = if let TSide::Unknown(w) = &t_side { w.clone() } else { String::new() };
                        (Admissibility::Unknown, why, None)
                    }
                },
            };
            Ok(RealCandidate { sigma, class_size, real_lines, num_r, num_rr, admissibility, reason, phi })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RealAnalysis { fano: fl, stabilizer, fragments, candidates, criterion, warnings })
}
