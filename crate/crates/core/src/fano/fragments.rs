//! h-fragments: sets S of 2d lines with Σ_{v∈S} v = h in Fano(Γ).
//!
//! Pairing Σ_S v − h with every generator shows this is equivalent to:
//! |S| = 2d, every v ∈ S meets S \ {v} with total multiplicity 3, and
//! every line outside S meets S with total multiplicity exactly 1.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::graph::Multigraph;
use super::LineConfiguration;

/// Named fragment graphs with their degree 2d.
pub const CATALOG: [(&str, u32); 7] = [
    ("tritangent-pair", 2),
    ("K4", 4),
    ("prism", 6),
    ("K33", 6),
    ("K3+K32", 8),
    ("wagner", 8),
    ("cube", 8),
];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fragment {
    /// Sorted vertex set.
    pub vertices: Vec<usize>,
    /// Catalog name or canonical certificate.
    pub kind: String,
}

pub fn catalog_graph(name: &str) -> Option<Multigraph> {
    let edges: Vec<(usize, usize, u8)> = match name {
        "tritangent-pair" => vec![(0, 1, 3)],
        "K4" => (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1))).collect(),
        "prism" => vec![(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (0, 3, 1), (1, 4, 1), (2, 5, 1)],
        "K33" => (0..3).flat_map(|i| (3..6).map(move |j| (i, j, 1))).collect(),
        "K3+K32" => {
            let mut e = vec![(0, 1, 1), (1, 2, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 5, 1)];
            e.extend((3..6).flat_map(|i| (6..8).map(move |j| (i, j, 1))));
            e
        }
        "wagner" => {
            let mut e: Vec<_> = (0..8).map(|i| (i.min((i + 1) % 8), i.max((i + 1) % 8), 1)).collect();
            e.extend((0..4).map(|i| (i, i + 4, 1)));
            e
        }
        "cube" => (0..8usize)
            .flat_map(|i| (0..3).map(move |b| (i, i ^ (1 << b))))
            .filter(|(i, j)| i < j)
            .map(|(i, j)| (i, j, 1))
            .collect(),
        _ => return None,
    };
    let n = edges.iter().map(|&(_, j, _)| j + 1).max().unwrap_or(0);
    Some(Multigraph::from_edges(n, &edges).expect("catalog graphs are well formed"))
}

fn catalog_certificates() -> &'static [(String, &'static str)] {
    static CERTS: OnceLock<Vec<(String, &'static str)>> = OnceLock::new();
    CERTS.get_or_init(|| {
        CATALOG
            .iter()
            .map(|(name, _)| (catalog_graph(name).unwrap().certificate().unwrap(), *name))
            .collect()
    })
}

/// Catalog name of a 3-regular multigraph, or its canonical certificate.
pub fn classify_fragment(sub: &Multigraph) -> Result<String> {
    if let Some(v) = (0..sub.order()).find(|&v| sub.valency(v) != 3) {
        return Err(Error::InvalidInput(format!("vertex {v} has valency {}, not 3", sub.valency(v))));
    }
    let cert = sub.certificate()?;
    Ok(catalog_certificates()
        .iter()
        .find(|(c, _)| *c == cert)
        .map_or(cert, |(_, name)| name.to_string()))
}

struct Search<'a> {
    g: &'a Multigraph,
    size: usize,
    // suffix[v][p] = Σ_{w ≥ p} m(v, w)
    suffix: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn run(&self, first: usize) -> Vec<Vec<usize>> {
        let n = self.g.order();
        let mut inside = vec![false; n];
        let mut meet = vec![0u32; n];
        let mut chosen = Vec::with_capacity(self.size);
        let mut out = Vec::new();
        self.include(first, &mut inside, &mut meet, &mut chosen);
        if self.feasible(first, &inside, &meet, chosen.len()) {
            self.rec(first + 1, &mut inside, &mut meet, &mut chosen, &mut out);
        }
        out
    }

    fn include(&self, v: usize, inside: &mut [bool], meet: &mut [u32], chosen: &mut Vec<usize>) {
        inside[v] = true;
        chosen.push(v);
        for (w, m) in meet.iter_mut().enumerate() {
            *m += self.g.mult(v, w) as u32;
        }
    }

    fn exclude_last(&self, inside: &mut [bool], meet: &mut [u32], chosen: &mut Vec<usize>) {
        let v = chosen.pop().unwrap();
        inside[v] = false;
        for (w, m) in meet.iter_mut().enumerate() {
            *m -= self.g.mult(v, w) as u32;
        }
    }

    /// Vertices `0..=pos` are decided; can the partial choice still complete?
    fn feasible(&self, pos: usize, inside: &[bool], meet: &[u32], count: usize) -> bool {
        let n = self.g.order();
        if count > self.size || count + (n - pos - 1) < self.size {
            return false;
        }
        let next = pos + 1;
        (0..n).all(|v| {
            let need = if v <= pos {
                if inside[v] {
                    3
                } else {
                    1
                }
            } else {
                // undecided vertices: only the upper bound is known
                return meet[v] <= 3;
            };
            meet[v] <= need && meet[v] + self.suffix[v][next] >= need
        })
    }

    fn rec(
        &self,
        pos: usize,
        inside: &mut Vec<bool>,
        meet: &mut Vec<u32>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.g.order();
        if pos == n {
            if chosen.len() == self.size {
                out.push(chosen.clone());
            }
            return;
        }
        self.include(pos, inside, meet, chosen);
        if self.feasible(pos, inside, meet, chosen.len()) {
            self.rec(pos + 1, inside, meet, chosen, out);
        }
        self.exclude_last(inside, meet, chosen);
        if self.feasible(pos, inside, meet, chosen.len()) {
            self.rec(pos + 1, inside, meet, chosen, out);
        }
    }
}

/// Vertex sets of all h-fragments, sorted.
pub fn fragment_sets(cfg: &LineConfiguration) -> Vec<Vec<usize>> {
    let g = cfg.graph();
    let n = g.order();
    let size = cfg.degree() as usize;
    if size > n {
        return vec![];
    }
    let suffix: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let mut s = vec![0u32; n + 1];
            for p in (0..n).rev() {
                s[p] = s[p + 1] + g.mult(v, p) as u32;
            }
            s
        })
        .collect();
    let search = Search { g, size, suffix };
    let mut out: Vec<Vec<usize>> = (0..=n - size).into_par_iter().flat_map_iter(|f| search.run(f)).collect();
    out.sort();
    out
}

/// All h-fragments with their types, sorted by vertex set.
pub fn enumerate_fragments(cfg: &LineConfiguration) -> Result<Vec<Fragment>> {
    let sets = fragment_sets(cfg);
    sets.into_par_iter()
        .map(|s| {
            let kind = classify_fragment(&cfg.graph().induced(&s))?;
            Ok(Fragment { vertices: s, kind })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    /// Reference enumeration: every 2d-subset tested against the Gram matrix.
    fn brute_force_fragments(cfg: &LineConfiguration) -> Vec<Vec<usize>> {
        let n = cfg.vertex_count();
        let k = cfg.degree() as usize;
        let g = cfg.gram();
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut x = vec![BigInt::zero(); n + 1];
            for &i in &idx {
                x[i] = BigInt::from(1);
            }
            x[n] = BigInt::from(-1);
            if g.mul_vec(&x).iter().all(|c| c.is_zero()) {
                out.push(idx.clone());
            }
            // next combination
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn cfg(name: &str, degree: u32) -> LineConfiguration {
        let g = catalog_graph(name).unwrap();
        LineConfiguration::new(degree, g.order(), &g.edges(), vec![], None).unwrap()
    }

    #[test]
    fn catalog_graphs_are_their_own_fragment() {
        for (name, d) in CATALOG {
            let f = enumerate_fragments(&cfg(name, d)).unwrap();
            assert_eq!(f.len(), 1, "{name}");
            assert_eq!(f[0].kind, name);
            for other in [2, 4, 6, 8, 10] {
                if other != d {
                    assert!(enumerate_fragments(&cfg(name, other)).unwrap().is_empty(), "{name} at {other}");
                }
            }
        }
    }

    #[test]
    fn catalog_invariants() {
        let expect = [
            ("prism", (6, Some(3), 12)),
            ("K33", (6, Some(4), 72)),
            ("K3+K32", (8, Some(3), 12)),
            ("wagner", (8, Some(4), 16)),
            ("cube", (8, Some(4), 48)),
        ];
        for (name, inv) in expect {
            assert_eq!(cfg(name, 6).graph_invariants(), inv, "{name}");
        }
    }

    #[test]
    fn matches_brute_force_on_pair_of_tritangents() {
        let c = LineConfiguration::new(2, 4, &[(0, 1, 3), (2, 3, 3), (0, 2, 1), (1, 3, 1)], vec![], None).unwrap();
        let fast: Vec<Vec<usize>> = enumerate_fragments(&c).unwrap().into_iter().map(|f| f.vertices).collect();
        assert_eq!(fast, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(fast, brute_force_fragments(&c));
    }

    #[test]
    fn non_regular_input_rejected() {
        let path = Multigraph::from_edges(2, &[(0, 1, 1)]).unwrap();
        assert!(classify_fragment(&path).is_err());
    }
}
