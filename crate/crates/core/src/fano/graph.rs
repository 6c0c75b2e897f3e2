//! Multigraphs with edge multiplicities, canonical labelling and
//! automorphism groups by partition refinement and individualization.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Leaves explored by [`Multigraph::canonical_form`] before giving up.
pub const CANONICAL_LEAF_CAP: usize = 1_000_000;

pub type Permutation = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    mult: Vec<Vec<u8>>,
}

type Partition = Vec<Vec<usize>>;

impl Multigraph {
    /// Builds a graph from `(i, j, m)` triples; repeated pairs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u8)]) -> Result<Self> {
        let mut mult = vec![vec![0u8; n]; n];
        for &(i, j, m) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) out of range for {n} vertices")));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("loop at vertex {i}")));
            }
            if mult[i][j] != 0 {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) listed twice")));
            }
            mult[i][j] = m;
            mult[j][i] = m;
        }
        Ok(Multigraph { mult })
    }

    pub fn from_matrix(mult: Vec<Vec<u8>>) -> Result<Self> {
        let n = mult.len();
        for i in 0..n {
            if mult[i].len() != n || mult[i][i] != 0 {
                return Err(Error::InvalidInput("multiplicity matrix must be square with zero diagonal".into()));
            }
            for j in 0..n {
                if mult[i][j] != mult[j][i] {
                    return Err(Error::InvalidInput("multiplicity matrix is not symmetric".into()));
                }
            }
        }
        Ok(Multigraph { mult })
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn mult(&self, i: usize, j: usize) -> u8 {
        self.mult[i][j]
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.mult
    }

    /// Weighted degree Σ_w m(v, w).
    pub fn valency(&self, v: usize) -> u32 {
        self.mult[v].iter().map(|&m| m as u32).sum()
    }

    /// Edges `(i, j, m)` with i < j.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let n = self.order();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.mult[i][j] > 0 {
                    out.push((i, j, self.mult[i][j]));
                }
            }
        }
        out
    }

    /// Induced subgraph on `vertices`, relabelled 0..k in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Multigraph {
        let mult = vertices
            .iter()
            .map(|&a| vertices.iter().map(|&b| self.mult[a][b]).collect())
            .collect();
        Multigraph { mult }
    }

    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.mult[p[i]][p[j]] == self.mult[i][j]))
    }

    /// Shortest cycle length; a multiple edge is a cycle of length 2.
    pub fn girth(&self) -> Option<usize> {
        let n = self.order();
        if (0..n).any(|i| (0..n).any(|j| self.mult[i][j] >= 2)) {
            return Some(2);
        }
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in 0..n {
                    if self.mult[v][w] == 0 || w == parent[v] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    fn refine(&self, mut part: Partition) -> Partition {
        let n = self.order();
        loop {
            let mut cell_of = vec![0usize; n];
            for (c, cell) in part.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let mut next: Partition = Vec::with_capacity(part.len());
            let mut split = false;
            for cell in &part {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u32; part.len()];
                        for w in 0..n {
                            let m = self.mult[v][w];
                            if m > 0 {
                                // distinct multiplicities are distinct edge colours
                                sig[cell_of[w]] += 1u32 << (8 * (m as u32 - 1));
                            }
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let start = next.len();
                let mut cur: Vec<usize> = vec![keyed[0].1];
                for k in 1..keyed.len() {
                    if keyed[k].0 != keyed[k - 1].0 {
                        next.push(std::mem::take(&mut cur));
                    }
                    cur.push(keyed[k].1);
                }
                next.push(cur);
                if next.len() - start > 1 {
                    split = true;
                }
            }
            part = next;
            if !split {
                return part;
            }
        }
    }

    fn unit_partition(&self) -> Partition {
        if self.order() == 0 {
            vec![]
        } else {
            vec![(0..self.order()).collect()]
        }
    }

    fn individualize(&self, part: &Partition, cell: usize, v: usize) -> Partition {
        let mut out = Vec::with_capacity(part.len() + 1);
        for (c, cl) in part.iter().enumerate() {
            if c == cell {
                out.push(vec![v]);
                out.push(cl.iter().copied().filter(|&w| w != v).collect());
            } else {
                out.push(cl.clone());
            }
        }
        self.refine(out)
    }

    /// Automorphism group: generators (as vertex permutations) and order.
    pub fn automorphisms(&self) -> (Vec<Permutation>, u128) {
        let n = self.order();
        if n == 0 {
            return (vec![], 1);
        }
        // leftmost path
        let mut path: Vec<(Partition, usize)> = Vec::new();
        let mut part = self.refine(self.unit_partition());
        while let Some(c) = target_cell(&part) {
            let v = part[c][0];
            path.push((part.clone(), c));
            part = self.individualize(&part, c, v);
        }
        let ref_leaf: Vec<usize> = part.iter().map(|c| c[0]).collect();
        let ref_sizes: Vec<Vec<usize>> = path.iter().map(|(p, _)| sizes(p)).collect();

        let mut gens: Vec<Permutation> = Vec::new();
        let mut order: u128 = 1;
        for level in (0..path.len()).rev() {
            let (pi, c) = &path[level];
            let v = pi[*c][0];
            for &w in &pi[*c][1..] {
                if same_orbit(&gens, n, v, w) {
                    continue;
                }
                let start = self.individualize(pi, *c, w);
                if let Some(g) = self.find_leaf(&start, level + 1, &path, &ref_sizes, &ref_leaf) {
                    gens.push(g);
                }
            }
            order *= orbit_size(&gens, n, v) as u128;
        }
        (gens, order)
    }

    fn find_leaf(
        &self,
        part: &Partition,
        level: usize,
        path: &[(Partition, usize)],
        ref_sizes: &[Vec<usize>],
        ref_leaf: &[usize],
    ) -> Option<Permutation> {
        if level == path.len() {
            if part.len() != ref_leaf.len() {
                return None;
            }
            let mut g = vec![0usize; ref_leaf.len()];
            for (k, cell) in part.iter().enumerate() {
                g[ref_leaf[k]] = cell[0];
            }
            return self.is_automorphism(&g).then_some(g);
        }
        if sizes(part) != ref_sizes[level] {
            return None;
        }
        let c = path[level].1;
        for &x in &part[c] {
            let next = self.individualize(part, c, x);
            if let Some(g) = self.find_leaf(&next, level + 1, path, ref_sizes, ref_leaf) {
                return Some(g);
            }
        }
        None
    }

    /// Canonical labelling: the relabelled multiplicity matrix that is
    /// lexicographically smallest over all leaves of the search tree.
    pub fn canonical_form(&self) -> Result<(Vec<Vec<u8>>, Permutation)> {
        let mut best: Option<(Vec<u8>, Permutation)> = None;
        let mut leaves = 0usize;
        let root = self.refine(self.unit_partition());
        self.canon_rec(&root, &mut best, &mut leaves)?;
        let (_, lab) = best.unwrap_or((vec![], vec![]));
        let mult = lab.iter().map(|&a| lab.iter().map(|&b| self.mult[a][b]).collect()).collect();
        Ok((mult, lab))
    }

    fn canon_rec(&self, part: &Partition, best: &mut Option<(Vec<u8>, Permutation)>, leaves: &mut usize) -> Result<()> {
        match target_cell(part) {
            None => {
                *leaves += 1;
                if *leaves > CANONICAL_LEAF_CAP {
                    return Err(Error::CapExceeded(format!("canonical labelling exceeded {CANONICAL_LEAF_CAP} leaves")));
                }
                let lab: Vec<usize> = part.iter().map(|c| c[0]).collect();
                let cert: Vec<u8> = lab
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &a)| lab[i + 1..].iter().map(move |&b| (a, b)))
                    .map(|(a, b)| self.mult[a][b])
                    .collect();
                if best.as_ref().map_or(true, |(b, _)| cert < *b) {
                    *best = Some((cert, lab));
                }
                Ok(())
            }
            Some(c) => {
                for &v in &part[c] {
                    let next = self.individualize(part, c, v);
                    self.canon_rec(&next, best, leaves)?;
                }
                Ok(())
            }
        }
    }

    /// A string identifying the isomorphism class.
    pub fn certificate(&self) -> Result<String> {
        let (m, _) = self.canonical_form()?;
        let n = m.len();
        let mut s = format!("g{n}:");
        for i in 0..n {
            for j in i + 1..n {
                s.push(char::from(b'0' + m[i][j]));
            }
        }
        Ok(s)
    }
}

/// First smallest non-singleton cell.
fn target_cell(part: &Partition) -> Option<usize> {
    part.iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
}

fn sizes(part: &Partition) -> Vec<usize> {
    part.iter().map(|c| c.len()).collect()
}

fn orbit(gens: &[Permutation], n: usize, v: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

fn same_orbit(gens: &[Permutation], n: usize, v: usize, w: usize) -> bool {
    orbit(gens, n, v)[w]
}

fn orbit_size(gens: &[Permutation], n: usize, v: usize) -> usize {
    orbit(gens, n, v).iter().filter(|&&b| b).count()
}

/// `p ∘ q` (apply q first).
pub fn compose(p: &[usize], q: &[usize]) -> Permutation {
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &[usize]) -> Permutation {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn identity(n: usize) -> Permutation {
    (0..n).collect()
}

/// All elements of the group generated by `gens`, sorted; fails beyond `cap`.
pub fn group_elements(n: usize, gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let mut seen = std::collections::HashSet::new();
    let id = identity(n);
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(format!("permutation group larger than {cap}")));
                }
                queue.push(y);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Multigraph {
        let edges: Vec<_> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n), 1)).collect();
        Multigraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn cycles_and_paths() {
        let c5 = cycle(5);
        assert_eq!(c5.automorphisms().1, 10);
        assert_eq!(c5.girth(), Some(5));
        let path = Multigraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(path.automorphisms().1, 2);
        assert_eq!(path.girth(), None);
        let double = Multigraph::from_edges(3, &[(0, 1, 2), (1, 2, 1)]).unwrap();
        assert_eq!(double.automorphisms().1, 1);
        assert_eq!(double.girth(), Some(2));
    }

    #[test]
    fn complete_and_empty() {
        let edges: Vec<_> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j, 1))).collect();
        assert_eq!(Multigraph::from_edges(5, &edges).unwrap().automorphisms().1, 120);
        assert_eq!(Multigraph::from_edges(4, &[]).unwrap().automorphisms().1, 24);
    }

    #[test]
    fn generators_are_automorphisms() {
        let c6 = cycle(6);
        let (gens, order) = c6.automorphisms();
        for g in &gens {
            assert!(c6.is_automorphism(g));
        }
        assert_eq!(group_elements(6, &gens, 1000).unwrap().len() as u128, order);
    }

    #[test]
    fn certificate_is_invariant() {
        let a = cycle(6);
        let p = [3, 5, 0, 1, 4, 2];
        let mut m = vec![vec![0u8; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[p[i]][p[j]] = a.mult(i, j);
            }
        }
        let b = Multigraph::from_matrix(m).unwrap();
        assert_eq!(a.certificate().unwrap(), b.certificate().unwrap());
        let two_triangles =
            Multigraph::from_edges(6, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)]).unwrap();
        assert_ne!(a.certificate().unwrap(), two_triangles.certificate().unwrap());
    }
}
