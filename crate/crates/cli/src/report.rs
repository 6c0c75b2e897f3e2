//! Subcommand bodies: each builds a JSON result and a plain text rendering.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use k3lines::criteria::{t_side_involution_classes, totally_real_criterion, TSide, Verdict};
use k3lines::fano::{enumerate_fragments, fano_lattice, real_structure_candidates, Admissibility, LineConfiguration};
use k3lines::fqf::{brown_invariant, FiniteQuadraticForm};
use k3lines::lattice::Lattice;
use k3lines::{Error, Result};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub result: Value,
    pub warnings: Vec<String>,
}

pub struct Output {
    pub result: Value,
    pub text: Vec<String>,
    pub warnings: Vec<String>,
    /// Some verdict came out UNKNOWN.
    pub unknown: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn ratio_string(r: &num_rational::Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn group_string(orders: &[u64]) -> String {
    if orders.is_empty() {
        "0".into()
    } else {
        orders.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

fn cycles(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for i in 0..p.len() {
        if seen[i] || p[i] == i {
            continue;
        }
        let mut c = vec![i];
        seen[i] = true;
        let mut j = p[i];
        while j != i {
            seen[j] = true;
            c.push(j);
            j = p[j];
        }
        out.push_str(&format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

#[derive(Serialize)]
struct FormSummary {
    orders: Vec<u64>,
    qvalues: Vec<String>,
    ell: BTreeMap<u64, usize>,
}

fn form_summary(f: &FiniteQuadraticForm) -> FormSummary {
    FormSummary {
        orders: f.orders().to_vec(),
        qvalues: f.generator_q_values().iter().map(ratio_string).collect(),
        ell: f.primes().into_iter().map(|p| (p, f.ell(p))).collect(),
    }
}

#[derive(Serialize)]
struct LatticeResult {
    rank: usize,
    signature: (usize, usize),
    determinant: String,
    discriminant: FormSummary,
    brown: u8,
    milgram_ok: bool,
}

pub fn lattice(spec: &str) -> Result<Output> {
    let l = Lattice::from_spec(spec)?;
    let (p, q, z) = l.signature();
    if z > 0 {
        return Err(Error::Degenerate(format!("{spec} has a radical of rank {z}")));
    }
    let d = l.discriminant_form()?;
    let brown = brown_invariant(&d)?;
    let milgram_ok = i64::from(brown) == (p as i64 - q as i64).rem_euclid(8);
    let res = LatticeResult {
        rank: l.rank(),
        signature: (p, q),
        determinant: l.determinant().to_string(),
        discriminant: form_summary(&d),
        brown,
        milgram_ok,
    };
    let mut text = vec![
        format!("rank: {}", res.rank),
        format!("signature: ({p},{q})"),
        format!("determinant: {}", res.determinant),
        format!("discriminant: {}", group_string(d.orders())),
        format!("q on generators: [{}]", res.discriminant.qvalues.join(", ")),
    ];
    for (p, l) in &res.discriminant.ell {
        text.push(format!("ell_{p}: {l}"));
    }
    text.push(format!("brown: {brown}"));
    text.push(format!("milgram: {}", if milgram_ok { "ok" } else { "FAILED" }));
    let warnings = if milgram_ok { vec![] } else { vec!["Brown invariant differs from the signature mod 8".into()] };
    Ok(Output { result: to_value(&res), text, warnings, unknown: false })
}

#[derive(Serialize)]
struct Invariants {
    r: usize,
    girth: Option<usize>,
    automorphisms: String,
}

#[derive(Serialize)]
struct FragmentEntry {
    vertices: Vec<usize>,
    kind: String,
}

#[derive(Serialize)]
struct FragmentsResult {
    degree: u32,
    vertices: usize,
    invariants: Invariants,
    total: usize,
    by_type: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fragments: Option<Vec<FragmentEntry>>,
}

fn invariants(cfg: &LineConfiguration) -> Invariants {
    let (r, girth, aut) = cfg.graph_invariants();
    Invariants { r, girth, automorphisms: aut.to_string() }
}

pub fn fragments(cfg: &LineConfiguration, list: bool) -> Result<Output> {
    let fl = fano_lattice(cfg)?;
    let frags = enumerate_fragments(cfg)?;
    let mut by_type = BTreeMap::new();
    for f in &frags {
        *by_type.entry(f.kind.clone()).or_insert(0) += 1;
    }
    let res = FragmentsResult {
        degree: cfg.degree(),
        vertices: cfg.vertex_count(),
        invariants: invariants(cfg),
        total: frags.len(),
        by_type,
        fragments: list.then(|| frags.iter().map(|f| FragmentEntry { vertices: f.vertices.clone(), kind: f.kind.clone() }).collect()),
    };
    let inv = &res.invariants;
    let girth = inv.girth.map_or("inf".into(), |g| g.to_string());
    let mut text = vec![
        format!("degree: {}  lines: {}", res.degree, res.vertices),
        format!("invariants (r, girth, |Aut|): ({}, {girth}, {})", inv.r, inv.automorphisms),
        format!("fragments: {}", res.total),
    ];
    for (k, c) in &res.by_type {
        text.push(format!("  {k}: {c}"));
    }
    if let Some(list) = &res.fragments {
        for f in list {
            text.push(format!("  {:?} {}", f.vertices, f.kind));
        }
    }
    Ok(Output { result: to_value(&res), text, warnings: fl.warnings, unknown: false })
}

#[derive(Serialize)]
struct AssessmentEntry {
    r: usize,
    det_n: String,
    verdict: String,
    trace: Vec<String>,
}

#[derive(Serialize)]
struct PhiEntry {
    compatible: usize,
    total: usize,
}

#[derive(Serialize)]
struct CandidateEntry {
    sigma: Vec<usize>,
    cycles: String,
    class_size: usize,
    real_lines: usize,
    num_r: usize,
    num_rr: usize,
    admissibility: String,
    reason: String,
    phi: Option<PhiEntry>,
}

#[derive(Serialize)]
struct TSideEntry {
    lattice: String,
    group_order: usize,
    realized_classes: usize,
    sources: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct RealResult {
    degree: u32,
    vertices: usize,
    invariants: Invariants,
    rank_n: usize,
    det_n: String,
    discr_n: FormSummary,
    stabilizer_order: usize,
    fragments: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    fragment_list: Option<Vec<FragmentEntry>>,
    totally_real: Option<AssessmentEntry>,
    transcendental: Option<TSideEntry>,
    candidates: Vec<CandidateEntry>,
}

pub fn real(cfg: &LineConfiguration, list: bool) -> Result<Output> {
    let a = real_structure_candidates(cfg)?;
    let n = &a.fano.n;
    let r = 22usize.saturating_sub(n.rank());
    let totally_real = a.criterion.as_ref().map(|c| AssessmentEntry {
        r,
        det_n: n.determinant().to_string(),
        verdict: c.verdict.to_string(),
        trace: c.trace.clone(),
    });
    let transcendental = match cfg.transcendental() {
        Some(spec) => match t_side_involution_classes(spec)? {
            TSide::Known(t) => Some(TSideEntry {
                lattice: spec.to_string(),
                group_order: t.group.order(),
                realized_classes: t.classes.len(),
                sources: t.sources.clone(),
            }),
            TSide::Unknown(_) => None,
        },
        None => None,
    };
    let candidates: Vec<CandidateEntry> = a
        .candidates
        .iter()
        .map(|c| CandidateEntry {
            sigma: c.sigma.clone(),
            cycles: cycles(&c.sigma),
            class_size: c.class_size,
            real_lines: c.real_lines,
            num_r: c.num_r,
            num_rr: c.num_rr,
            admissibility: c.admissibility.to_string(),
            reason: c.reason.clone(),
            phi: c.phi.map(|p| PhiEntry { compatible: p.compatible, total: p.total }),
        })
        .collect();
    let unknown = a.candidates.iter().any(|c| c.admissibility == Admissibility::Unknown);
    let res = RealResult {
        degree: cfg.degree(),
        vertices: cfg.vertex_count(),
        invariants: invariants(cfg),
        rank_n: n.rank(),
        det_n: n.determinant().to_string(),
        discr_n: form_summary(&n.discriminant_form()?),
        stabilizer_order: a.stabilizer.order(),
        fragments: a.fragments.len(),
        fragment_list: list.then(|| {
            a.fragments.iter().map(|f| FragmentEntry { vertices: f.vertices.clone(), kind: f.kind.clone() }).collect()
        }),
        totally_real,
        transcendental,
        candidates,
    };
    let mut text = vec![
        format!("degree: {}  lines: {}", res.degree, res.vertices),
        format!("N: rank {}, det {}, discr {}", res.rank_n, res.det_n, group_string(&res.discr_n.orders)),
        format!("|O±h(N)|: {}", res.stabilizer_order),
        format!("fragments: {}", res.fragments),
    ];
    if let Some(list) = &res.fragment_list {
        for f in list {
            text.push(format!("  {:?} {}", f.vertices, f.kind));
        }
    }
    if let Some(t) = &res.totally_real {
        text.push(format!("totally real (r = {}): {}", t.r, t.verdict));
    }
    if let Some(t) = &res.transcendental {
        text.push(format!(
            "T = {}: |Aut discr T| = {}, {} realized involution classes",
            t.lattice, t.group_order, t.realized_classes
        ));
    }
    text.push(format!("candidates: {}", res.candidates.len()));
    for c in &res.candidates {
        let phi = c.phi.as_ref().map_or(String::new(), |p| format!(" phi {}/{}", p.compatible, p.total));
        text.push(format!(
            "  σ = {} (class {}, real lines {}): numR {} numRR {} {}{phi} ({})",
            c.cycles, c.class_size, c.real_lines, c.num_r, c.num_rr, c.admissibility, c.reason
        ));
    }
    Ok(Output { result: to_value(&res), text, warnings: a.warnings, unknown })
}

pub fn totally_real(cfg: &LineConfiguration) -> Result<Output> {
    let fl = fano_lattice(cfg)?;
    let n = &fl.n;
    if n.rank() > 22 {
        return Err(Error::InvalidInput(format!("rank N = {} exceeds 22", n.rank())));
    }
    let r = 22 - n.rank();
    let a = totally_real_criterion(&n.discriminant_form()?, r, n.determinant())?;
    let res = AssessmentEntry { r, det_n: n.determinant().to_string(), verdict: a.verdict.to_string(), trace: a.trace };
    let mut text = vec![format!("r = {}, det N = {}", res.r, res.det_n), format!("verdict: {}", res.verdict)];
    text.extend(res.trace.iter().map(|t| format!("  - {t}")));
    Ok(Output { result: to_value(&res), text, warnings: fl.warnings, unknown: a.verdict == Verdict::Unknown })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        assert_eq!(cycles(&[0, 1, 2]), "id");
        assert_eq!(cycles(&[3, 4, 5, 0, 1, 2]), "(0 3)(1 4)(2 5)");
        assert_eq!(cycles(&[1, 2, 0]), "(0 1 2)");
    }

    #[test]
    fn lattice_examples() {
        let out = lattice("[8,4,8]").unwrap();
        assert_eq!(out.result["signature"], serde_json::json!([2, 0]));
        assert_eq!(out.result["determinant"], "48");
        assert_eq!(out.result["discriminant"]["orders"], serde_json::json!([4, 12]));
        let out = lattice("2U(3)").unwrap();
        assert_eq!(out.result["discriminant"]["orders"], serde_json::json!([3, 3, 3, 3]));
        assert_eq!(out.result["discriminant"]["ell"]["3"], 4);
        let out = lattice("E8").unwrap();
        assert_eq!(out.result["determinant"], "1");
        assert!(out.result["discriminant"]["orders"].as_array().unwrap().is_empty());
    }
}
