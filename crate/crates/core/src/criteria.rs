//! Totally real criteria and the transcendental-side involutions.
//!
//! With r = rank T = 22 − rank N and 𝒩 = discr N, a transcendental lattice
//! T ⊃ [2] (resp. T ⊃ U(2), tried only when [2] fails) exists iff local
//! conditions on the p-parts 𝒩_p hold. Determinants of p-parts are
//! compared in Q_p^×/(Q_p^×)².

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fqf::{AutomorphismGroup, Element, FiniteQuadraticForm, FqfIsometry, InvolutionClass};
use crate::lattice::{
    is_prime_u64, orthogonal_group_definite, sign_structure_action, square_class_equal, Discriminant, Lattice,
};
use crate::linalg::IntegerMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    YesContains2,
    YesContainsU2,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::YesContains2 => "YES_CONTAINS_2",
            Verdict::YesContainsU2 => "YES_CONTAINS_U2",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// A verdict together with the local conditions that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    pub verdict: Verdict,
    pub trace: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
    Unknown,
}

fn combine(outcomes: &[Outcome]) -> Outcome {
    if outcomes.contains(&Outcome::Fail) {
        Outcome::Fail
    } else if outcomes.contains(&Outcome::Unknown) {
        Outcome::Unknown
    } else {
        Outcome::Pass
    }
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Smallest odd prime not dividing `n_abs` at which `target` is not a
/// square. Exists whenever `target` is negative.
fn nonsquare_witness(target: &BigInt, n_abs: &BigInt) -> Result<u64> {
    let one = BigRational::from_integer(BigInt::from(1));
    let t = rat(target);
    let mut p = 3u64;
    loop {
        if is_prime_u64(p) && !(n_abs % p).is_zero() && !square_class_equal(&one, &t, p)? {
            return Ok(p);
        }
        p += 2;
    }
}

/// All elements of order dividing 2 in `form`.
fn two_torsion(form: &FiniteQuadraticForm) -> Vec<Element> {
    let basis = form.two_torsion_basis();
    let mut out = vec![form.zero()];
    for g in &basis {
        let more: Vec<Element> = out.iter().map(|x| form.add(x, g)).collect();
        out.extend(more);
    }
    out
}

/// The local condition at an odd prime p: pass if ℓ ≤ bound, check the
/// determinant when ℓ = bound + 1, fail otherwise.
fn odd_prime_condition(
    d: &FiniteQuadraticForm,
    p: u64,
    bound: i64,
    target: &BigInt,
    trace: &mut Vec<String>,
) -> Result<Outcome> {
    let ell = d.ell(p) as i64;
    if ell <= bound {
        trace.push(format!("p={p}: ℓ={ell} ≤ {bound}"));
        return Ok(Outcome::Pass);
    }
    if ell == bound + 1 {
        let det = d.p_determinant(p);
        let ok = square_class_equal(&det, &rat(target), p)?;
        trace.push(format!(
            "p={p}: ℓ={ell}, det 𝒩_p = {det} {} {target} mod squares",
            if ok { "≡" } else { "≢" }
        ));
        return Ok(if ok { Outcome::Pass } else { Outcome::Fail });
    }
    trace.push(format!("p={p}: ℓ={ell} > {}", bound + 1));
    Ok(Outcome::Fail)
}

/// Odd primes not dividing |𝒩| have ℓ = 0; they only matter when the
/// determinant branch is hit, where the negative target must be a square
/// at every such prime, which never happens.
fn generic_odd_primes(bound: i64, target: &BigInt, n_abs: &BigInt, trace: &mut Vec<String>) -> Result<Outcome> {
    if bound >= 0 {
        return Ok(Outcome::Pass);
    }
    if bound == -1 {
        let p = nonsquare_witness(target, n_abs)?;
        trace.push(format!("p={p}: ℓ=0, det 𝒩_p = 1 ≢ {target} mod squares"));
    } else {
        trace.push(format!("odd p ∤ |𝒩|: ℓ=0 > {}", bound + 1));
    }
    Ok(Outcome::Fail)
}

fn odd_primes(d: &FiniteQuadraticForm) -> Vec<u64> {
    d.primes().into_iter().filter(|&p| p != 2).collect()
}

fn case_two(d: &FiniteQuadraticForm, r: i64, n_abs: &BigInt, trace: &mut Vec<String>) -> Result<Outcome> {
    let target = -(n_abs * BigInt::from(2));
    let mut outcomes = Vec::new();
    for p in odd_primes(d) {
        outcomes.push(odd_prime_condition(d, p, r - 2, &target, trace)?);
    }
    outcomes.push(generic_odd_primes(r - 2, &target, n_abs, trace)?);

    let two = d.p_part(2);
    let ell = two.rank() as i64;
    let at_two = if ell <= r - 2 {
        trace.push(format!("p=2: ℓ={ell} ≤ {}", r - 2));
        Outcome::Pass
    } else if ell == r - 1 {
        trace.push(format!("p=2: ℓ={ell} = r−1, not covered by the criterion"));
        Outcome::Unknown
    } else if ell == r {
        split_vector_condition(&two, n_abs, trace)?
    } else {
        trace.push(format!("p=2: ℓ={ell} > r"));
        Outcome::Fail
    };
    outcomes.push(at_two);
    Ok(combine(&outcomes))
}

/// ℓ(𝒩₂) = r: look for u of order 2 with q(u) = −1/2 that is either not
/// characteristic or has det u⊥ = ±2|𝒩|.
fn split_vector_condition(two: &FiniteQuadraticForm, n_abs: &BigInt, trace: &mut Vec<String>) -> Result<Outcome> {
    let l = two.level() as i64;
    let minus_half = (2 * l - l / 2) % (2 * l);
    let torsion = two_torsion(two);
    let card = two.cardinality();
    let mut seen_u = false;
    for u in &torsion {
        if two.element_order(u) != 2 || two.q_scaled(u) != minus_half {
            continue;
        }
        let comp = two.orthogonal_complement(std::slice::from_ref(u));
        if comp.form.cardinality() * 2 != card {
            continue;
        }
        seen_u = true;
        let witness = torsion
            .iter()
            .find(|v| two.b_scaled(u, v) != two.q_scaled(v).rem_euclid(l));
        if let Some(v) = witness {
            trace.push(format!("p=2: ℓ=r, u={u:?} with q(u)=−1/2 is not characteristic (v={v:?})"));
            return Ok(Outcome::Pass);
        }
        let det = comp.form.p_determinant(2);
        for sign in [1, -1] {
            let target = n_abs * BigInt::from(2 * sign);
            if square_class_equal(&det, &rat(&target), 2)? {
                trace.push(format!("p=2: ℓ=r, u={u:?} characteristic, det u⊥ = {det} ≡ {target} mod squares"));
                return Ok(Outcome::Pass);
            }
        }
    }
    if seen_u {
        trace.push("p=2: ℓ=r, every u with q(u)=−1/2 is characteristic with det u⊥ ≢ ±2|𝒩|".into());
    } else {
        trace.push("p=2: ℓ=r, no u of order 2 with q(u)=−1/2".into());
    }
    Ok(Outcome::Fail)
}

fn case_u2(d: &FiniteQuadraticForm, r: i64, n_abs: &BigInt, trace: &mut Vec<String>) -> Result<Outcome> {
    let target = -n_abs.clone();
    let mut outcomes = Vec::new();
    for p in odd_primes(d) {
        outcomes.push(odd_prime_condition(d, p, r - 3, &target, trace)?);
    }
    outcomes.push(generic_odd_primes(r - 3, &target, n_abs, trace)?);

    let two = d.p_part(2);
    let l = two.level() as i64;
    let torsion: Vec<Element> = two_torsion(&two)
        .into_iter()
        .filter(|x| two.element_order(x) == 2 && two.q_scaled(x) == 0)
        .collect();
    let pair = torsion.iter().enumerate().find_map(|(i, u)| {
        torsion[i + 1..]
            .iter()
            .find(|v| two.b_scaled(u, v) == l / 2)
            .map(|v| (u.clone(), v.clone()))
    });
    match pair {
        Some((u, v)) => {
            trace.push(format!("p=2: 𝒰₂ splits off, u={u:?}, v={v:?}"));
            outcomes.push(Outcome::Pass);
        }
        None => {
            trace.push("p=2: no pair u, v with u²=v²=0, u·v=1/2".into());
            outcomes.push(Outcome::Fail);
        }
    }
    Ok(combine(&outcomes))
}

/// Decides whether some T in the genus with discriminant −𝒩 and rank `r`
/// contains [2] or U(2).
pub fn totally_real_criterion(d_n: &FiniteQuadraticForm, r: usize, det_n: &BigInt) -> Result<Assessment> {
    if r == 0 {
        return Err(Error::InvalidInput("rank of T must be positive".into()));
    }
    let n_abs = det_n.abs();
    if d_n.cardinality() != n_abs {
        return Err(Error::InvalidInput(format!("|discr N| = {} but |det N| = {n_abs}", d_n.cardinality())));
    }
    if !d_n.is_nondegenerate() {
        return Err(Error::Degenerate("discriminant form is degenerate".into()));
    }
    let r = r as i64;
    let mut trace = vec!["[2]-case".to_string()];
    let two = case_two(d_n, r, &n_abs, &mut trace)?;
    let verdict = match two {
        Outcome::Pass => Verdict::YesContains2,
        Outcome::Unknown => {
            trace.push("[2]-case undecided; U(2)-case not attempted".into());
            Verdict::Unknown
        }
        Outcome::Fail => {
            trace.push("U(2)-case".into());
            match case_u2(d_n, r, &n_abs, &mut trace)? {
                Outcome::Pass => Verdict::YesContainsU2,
                _ => Verdict::No,
            }
        }
    };
    Ok(Assessment { verdict, trace })
}

/// A transcendental lattice representative as supplied by the user.
#[derive(Clone, Debug)]
pub enum TranscendentalSpec {
    /// Positive definite binary lattice.
    Definite2(Lattice),
    /// 2U(n).
    TwoU(u32),
    /// Only the discriminant form and rank are known.
    GenericDiscr { form: FiniteQuadraticForm, rank: usize },
}

impl TranscendentalSpec {
    pub fn definite2(a: i64, b: i64, c: i64) -> Result<Self> {
        let l = Lattice::binary(a, b, c)?;
        if !l.is_positive_definite() {
            return Err(Error::InvalidInput(format!("[{a},{b},{c}] is not positive definite")));
        }
        Ok(TranscendentalSpec::Definite2(l))
    }

    pub fn two_u(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("2U(n) needs n ≥ 1".into()));
        }
        Ok(TranscendentalSpec::TwoU(n))
    }

    pub fn generic(form: FiniteQuadraticForm, rank: usize) -> Result<Self> {
        for p in form.primes() {
            if form.ell(p) > rank {
                return Err(Error::InvalidInput(format!("ℓ_{p} = {} exceeds rank {rank}", form.ell(p))));
            }
        }
        Ok(TranscendentalSpec::GenericDiscr { form, rank })
    }

    pub fn rank(&self) -> usize {
        match self {
            TranscendentalSpec::Definite2(_) => 2,
            TranscendentalSpec::TwoU(_) => 4,
            TranscendentalSpec::GenericDiscr { rank, .. } => *rank,
        }
    }

    /// The lattice itself, when known.
    pub fn lattice(&self) -> Option<Lattice> {
        match self {
            TranscendentalSpec::Definite2(l) => Some(l.clone()),
            TranscendentalSpec::TwoU(n) => Some(Lattice::hyperbolic_plane().power(2).rescaled(*n as i64).unwrap()),
            TranscendentalSpec::GenericDiscr { .. } => None,
        }
    }

    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm> {
        match self {
            TranscendentalSpec::GenericDiscr { form, .. } => Ok(form.clone()),
            _ => self.lattice().unwrap().discriminant_form(),
        }
    }
}

impl fmt::Display for TranscendentalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranscendentalSpec::Definite2(l) => {
                let g = l.gram();
                write!(f, "[{},{},{}]", g[(0, 0)], g[(0, 1)], g[(1, 1)])
            }
            TranscendentalSpec::TwoU(n) => write!(f, "2U({n})"),
            TranscendentalSpec::GenericDiscr { form, rank } => {
                write!(f, "generic rank {rank}, discr {:?}", form.orders())
            }
        }
    }
}

/// An involution of 2U labelled by its invariant sublattice.
#[derive(Clone, Debug)]
pub struct LabeledInvolution {
    pub label: &'static str,
    pub matrix: IntegerMatrix,
}

/// The five involutions of 2U (basis u₁, v₁, u₂, v₂) reversing the positive
/// sign structure, one per type of invariant sublattice.
pub fn two_u_involutions() -> Vec<LabeledInvolution> {
    // blocks on a single U
    let id = [[1, 0], [0, 1]];
    let neg = [[-1, 0], [0, -1]];
    let swap = [[0, 1], [1, 0]];
    let neg_swap = [[0, -1], [-1, 0]];
    let block = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        IntegerMatrix::from_rows(&[
            vec![a[0][0], a[0][1], 0, 0],
            vec![a[1][0], a[1][1], 0, 0],
            vec![0, 0, b[0][0], b[0][1]],
            vec![0, 0, b[1][0], b[1][1]],
        ])
    };
    let summand_swap = IntegerMatrix::from_rows(&[
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
    ]);
    vec![
        LabeledInvolution { label: "[2]", matrix: block(swap, neg) },
        LabeledInvolution { label: "U", matrix: block(id, neg) },
        LabeledInvolution { label: "U(2)", matrix: summand_swap },
        LabeledInvolution { label: "[2]+[-2]", matrix: block(swap, neg_swap) },
        LabeledInvolution { label: "U+[-2]", matrix: block(id, neg_swap) },
    ]
}

/// Conjugacy classes of Aut(discr T) hit by involutions of O⁻(T).
#[derive(Clone, Debug)]
pub struct TSideClasses {
    pub discriminant: Discriminant,
    pub group: AutomorphismGroup,
    /// Canonical representatives with the class sizes.
    pub classes: Vec<InvolutionClass>,
    /// For each class, the labels (or matrices) of the lattice involutions
    /// mapping into it.
    pub sources: Vec<Vec<String>>,
    /// The images of involutions of O⁻(T) in Aut(discr T), sorted. For 2U(n)
    /// these are the full classes, O(2U(n)) → Aut(discr) being surjective.
    pub realized: Vec<FqfIsometry>,
}

impl TSideClasses {
    /// Index of the class containing `g`, if any.
    pub fn class_of(&self, g: &FqfIsometry) -> Option<usize> {
        let c = self.group.canonical_conjugate(g);
        self.classes.iter().position(|k| k.representative == c)
    }

    pub fn is_realized(&self, g: &FqfIsometry) -> bool {
        self.realized.binary_search(g).is_ok()
    }
}

/// Either the realizable classes or a reason why they are not available.
#[derive(Clone, Debug)]
pub enum TSide {
    Known(Box<TSideClasses>),
    Unknown(String),
}

pub fn t_side_involution_classes(spec: &TranscendentalSpec) -> Result<TSide> {
    let (lattice, sources): (Lattice, Vec<(String, IntegerMatrix)>) = match spec {
        TranscendentalSpec::GenericDiscr { .. } => {
            return Ok(TSide::Unknown(
                "only the discriminant form of T is known; O⁻(T) cannot be enumerated".into(),
            ))
        }
        TranscendentalSpec::TwoU(_) => (
            spec.lattice().unwrap(),
            two_u_involutions().into_iter().map(|g| (g.label.to_string(), g.matrix)).collect(),
        ),
        TranscendentalSpec::Definite2(l) => {
            let mut src = Vec::new();
            for g in orthogonal_group_definite(l)? {
                if g.is_involution() && sign_structure_action(l, g.matrix())? == -1 {
                    src.push((format!("{:?}", g.matrix()), g.into_matrix()));
                }
            }
            (l.clone(), src)
        }
    };
    let discriminant = lattice.discriminant()?;
    let group = AutomorphismGroup::new(discriminant.form())?;
    let full_classes = matches!(spec, TranscendentalSpec::TwoU(_));
    let mut classes: Vec<InvolutionClass> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    let mut realized = Vec::new();
    for (label, m) in sources {
        let action = discriminant.induced_action(&m)?;
        let class = group.conjugacy_class(&action);
        if full_classes {
            realized.extend(class.iter().cloned());
        } else {
            realized.push(action);
        }
        let rep = class[0].clone();
        match classes.iter().position(|c| c.representative == rep) {
            Some(i) => labels[i].push(label),
            None => {
                classes.push(InvolutionClass { representative: rep, size: class.len() });
                labels.push(vec![label]);
            }
        }
    }
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| classes[a].representative.cmp(&classes[b].representative));
    let classes = order.iter().map(|&i| classes[i].clone()).collect();
    let sources = order.iter().map(|&i| labels[i].clone()).collect();
    realized.sort();
    realized.dedup();
    Ok(TSide::Known(Box::new(TSideClasses { discriminant, group, classes, sources, realized })))
}

/// Positive index of the lattice, as a convenience for σ₊(g⁺).
pub fn positive_index(l: &Lattice) -> usize {
    l.signature().0
}

/// Sign of det N for N of signature (1, rank N − 1).
pub fn hyperbolic_det_sign(rank_n: usize) -> i64 {
    if rank_n % 2 == 1 {
        1
    } else {
        -1
    }
}
