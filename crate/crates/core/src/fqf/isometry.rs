use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

use super::{Element, FiniteQuadraticForm};

/// Largest group enumerated by the isometry search.
pub const ELEMENT_CAP: u64 = 1 << 20;
/// Largest number of isometries collected in one search.
pub const ISOMETRY_CAP: usize = 1 << 20;
/// Largest group handled by [`involution_classes`].
pub const CLASS_GROUP_CAP: u64 = 10_000;

/// Group isomorphism between two forms, stored as the images of the domain
/// generators in codomain coordinates. With `anti` set it carries q to −q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqfIsometry {
    pub images: Vec<Element>,
    pub anti: bool,
}

impl FqfIsometry {
    pub fn identity(form: &FiniteQuadraticForm) -> Self {
        FqfIsometry { images: (0..form.rank()).map(|i| form.generator(i)).collect(), anti: false }
    }

    /// Image of `x` (domain coordinates) in the codomain `target`.
    pub fn apply(&self, target: &FiniteQuadraticForm, x: &[i64]) -> Element {
        let mut out = target.zero();
        for (xj, img) in x.iter().zip(&self.images) {
            if *xj != 0 {
                out = target.add(&out, &target.scale(*xj, img));
            }
        }
        out
    }

    /// `self ∘ other`, where `other` lands in the domain of `self` and
    /// `self` lands in `target`.
    pub fn compose(&self, other: &FqfIsometry, target: &FiniteQuadraticForm) -> FqfIsometry {
        FqfIsometry {
            images: other.images.iter().map(|y| self.apply(target, y)).collect(),
            anti: self.anti ^ other.anti,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.anti
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, img)| img.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
    }

    /// Checks that this map is a bijective (anti-)isometry `d1 → d2`.
    pub fn is_valid(&self, d1: &FiniteQuadraticForm, d2: &FiniteQuadraticForm) -> bool {
        if d1.orders() != d2.orders() || self.images.len() != d1.rank() {
            return false;
        }
        let l2 = 2 * d1.level() as i64;
        let l = d1.level() as i64;
        let sgn = if self.anti { -1 } else { 1 };
        for i in 0..d1.rank() {
            let gi = d1.generator(i);
            if d2.element_order(&self.images[i]) != d1.orders()[i] {
                return false;
            }
            if d2.q_scaled(&self.images[i]) != (sgn * d1.q_scaled(&gi)).rem_euclid(l2) {
                return false;
            }
            for j in 0..i {
                let gj = d1.generator(j);
                if d2.b_scaled(&self.images[i], &self.images[j]) != (sgn * d1.b_scaled(&gi, &gj)).rem_euclid(l) {
                    return false;
                }
            }
        }
        // b-preserving maps of a nondegenerate form are injective
        d1.is_nondegenerate()
    }
}

struct Search<'a> {
    d1: &'a FiniteQuadraticForm,
    d2: &'a FiniteQuadraticForm,
    sign: i64,
    order: Vec<usize>,
    buckets: Vec<Vec<Element>>,
    assigned: Vec<Option<Element>>,
    out: Vec<FqfIsometry>,
    limit: usize,
    overflow: bool,
}

impl Search<'_> {
    fn run(&mut self, pos: usize) {
        if self.out.len() >= self.limit {
            self.overflow = true;
            return;
        }
        if pos == self.order.len() {
            let images = self.assigned.iter().map(|x| x.clone().unwrap()).collect();
            self.out.push(FqfIsometry { images, anti: self.sign < 0 });
            return;
        }
        let t = self.order[pos];
        let gt = self.d1.generator(t);
        let l = self.d1.level() as i64;
        let targets: Vec<(Element, i64)> = self.order[..pos]
            .iter()
            .map(|&s| {
                let want = (self.sign * self.d1.b_scaled(&gt, &self.d1.generator(s))).rem_euclid(l);
                (self.assigned[s].clone().unwrap(), want)
            })
            .collect();
        let cands = std::mem::take(&mut self.buckets[pos]);
        for y in &cands {
            if targets.iter().all(|(img, want)| self.d2.b_scaled(y, img) == *want) {
                self.assigned[t] = Some(y.clone());
                self.run(pos + 1);
                self.assigned[t] = None;
                if self.overflow {
                    break;
                }
            }
        }
        self.buckets[pos] = cands;
    }
}

fn search(d1: &FiniteQuadraticForm, d2: &FiniteQuadraticForm, anti: bool, limit: usize) -> Result<(Vec<FqfIsometry>, bool)> {
    if d1.orders() != d2.orders() {
        return Ok((vec![], false));
    }
    if d1.is_trivial() {
        return Ok((vec![FqfIsometry { images: vec![], anti }], false));
    }
    let sign = if anti { -1 } else { 1 };
    let l2 = 2 * d1.level() as i64;
    // generators by (order desc, q)
    let mut order: Vec<usize> = (0..d1.rank()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(d1.orders()[i]), d1.q_scaled(&d1.generator(i)), i));
    let mut by_key: BTreeMap<(u64, i64), Vec<Element>> = BTreeMap::new();
    for y in d2.elements(ELEMENT_CAP)? {
        by_key.entry((d2.element_order(&y), d2.q_scaled(&y))).or_default().push(y);
    }
    let buckets = order
        .iter()
        .map(|&i| {
            let g = d1.generator(i);
            let key = (d1.orders()[i], (sign * d1.q_scaled(&g)).rem_euclid(l2));
            by_key.get(&key).cloned().unwrap_or_default()
        })
        .collect();
    let mut s = Search {
        d1,
        d2,
        sign,
        order,
        buckets,
        assigned: vec![None; d1.rank()],
        out: vec![],
        limit,
        overflow: false,
    };
    s.run(0);
    // nondegeneracy makes every b-preserving assignment a bijection
    if !s.out.is_empty() && !d1.is_nondegenerate() {
        return Err(Error::Degenerate("isometry search on a degenerate form".into()));
    }
    Ok((s.out, s.overflow))
}

/// All isometries (or anti-isometries) `d1 → d2`, sorted. Empty when none
/// exist, including when the groups differ.
pub fn fqf_isometries(d1: &FiniteQuadraticForm, d2: &FiniteQuadraticForm, anti: bool) -> Result<Vec<FqfIsometry>> {
    let (mut out, overflow) = search(d1, d2, anti, ISOMETRY_CAP)?;
    if overflow {
        return Err(Error::CapExceeded(format!("more than {ISOMETRY_CAP} isometries")));
    }
    out.sort();
    Ok(out)
}

/// Up to `limit` isometries; the flag reports whether more exist.
pub fn fqf_isometries_limited(
    d1: &FiniteQuadraticForm,
    d2: &FiniteQuadraticForm,
    anti: bool,
    limit: usize,
) -> Result<(Vec<FqfIsometry>, bool)> {
    search(d1, d2, anti, limit)
}

/// The full isometry group Aut(D) with multiplication support.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    form: FiniteQuadraticForm,
    elements: Vec<FqfIsometry>,
    index: HashMap<Vec<Element>, usize>,
    inverse: Vec<usize>,
}

impl AutomorphismGroup {
    pub fn new(form: &FiniteQuadraticForm) -> Result<Self> {
        let elements = fqf_isometries(form, form, false)?;
        let index: HashMap<Vec<Element>, usize> =
            elements.iter().enumerate().map(|(i, g)| (g.images.clone(), i)).collect();
        let id = index[&FqfIsometry::identity(form).images];
        let mut inverse = vec![usize::MAX; elements.len()];
        for (i, g) in elements.iter().enumerate() {
            if inverse[i] != usize::MAX {
                continue;
            }
            // walk powers until the identity
            let mut prev = id;
            let mut cur = i;
            while cur != id {
                prev = cur;
                cur = index[&g.compose(&elements[cur], form).images];
            }
            inverse[i] = prev;
            inverse[prev] = i;
        }
        Ok(AutomorphismGroup { form: form.clone(), elements, index, inverse })
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[FqfIsometry] {
        &self.elements
    }

    pub fn contains(&self, g: &FqfIsometry) -> bool {
        !g.anti && self.index.contains_key(&g.images)
    }

    pub fn compose(&self, a: &FqfIsometry, b: &FqfIsometry) -> FqfIsometry {
        a.compose(b, &self.form)
    }

    pub fn inverse(&self, g: &FqfIsometry) -> FqfIsometry {
        self.elements[self.inverse[self.index[&g.images]]].clone()
    }

    pub fn is_involution(&self, g: &FqfIsometry) -> bool {
        self.compose(g, g).is_identity()
    }

    /// The conjugacy class {h·g·h⁻¹}, sorted.
    pub fn conjugacy_class(&self, g: &FqfIsometry) -> Vec<FqfIsometry> {
        let mut class: Vec<FqfIsometry> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, h)| self.compose(&self.compose(h, g), &self.elements[self.inverse[i]]))
            .collect();
        class.sort();
        class.dedup();
        class
    }

    /// Smallest element of the conjugacy class of `g`.
    pub fn canonical_conjugate(&self, g: &FqfIsometry) -> FqfIsometry {
        self.conjugacy_class(g).swap_remove(0)
    }
}

/// Conjugacy class of involutions: canonical (smallest) representative and size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionClass {
    pub representative: FqfIsometry,
    pub size: usize,
}

/// All conjugacy classes of elements s ∈ Aut(D) with s² = id (the identity
/// included), sorted by representative.
pub fn involution_classes(form: &FiniteQuadraticForm) -> Result<Vec<InvolutionClass>> {
    let n = form.cardinality_u64().unwrap_or(u64::MAX);
    if n > CLASS_GROUP_CAP {
        return Err(Error::CapExceeded(format!("|D| = {} exceeds {CLASS_GROUP_CAP}", form.cardinality())));
    }
    let group = AutomorphismGroup::new(form)?;
    classes_of(&group, group.elements().iter().filter(|g| group.is_involution(g)).cloned())
}

pub(crate) fn classes_of(
    group: &AutomorphismGroup,
    members: impl IntoIterator<Item = FqfIsometry>,
) -> Result<Vec<InvolutionClass>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for s in members {
        if seen.contains(&s.images) {
            continue;
        }
        let class = group.conjugacy_class(&s);
        for c in &class {
            seen.insert(c.images.clone());
        }
        out.push(InvolutionClass { representative: class[0].clone(), size: class.len() });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}
