use k3lines::criteria::{totally_real_criterion, two_u_involutions, Verdict};
use k3lines::fano::{
    compose, count_fragments_under, enumerate_fragments, group_elements, inverse, LineConfiguration,
};
use k3lines::fqf::{brown_invariant, fqf_isometries};
use k3lines::lattice::{invariant_sublattice, sign_structure_action, Lattice};
use k3lines::linalg::{inertia, integral_kernel, smith_decompose, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(n: usize, entries: &[i64]) -> IntegerMatrix {
    IntegerMatrix::from_rows(&(0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect::<Vec<_>>())
}

/// Symmetric matrix with even diagonal from raw entries.
fn even_gram(n: usize, diag: &[i64], off: &[i64]) -> IntegerMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        rows[i][i] = 2 * diag[i];
        for j in i + 1..n {
            rows[i][j] = off[k];
            rows[j][i] = off[k];
            k += 1;
        }
    }
    IntegerMatrix::from_rows(&rows)
}

fn even_lattice() -> impl Strategy<Value = Lattice> {
    (1usize..=6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-4i64..=4, n), prop::collection::vec(-3i64..=3, n * (n - 1) / 2)))
        .prop_filter_map("degenerate or large", |(n, d, o)| {
            let g = even_gram(n, &d, &o);
            let det = g.determinant();
            if det.is_zero() || det.abs() > BigInt::from(20_000) {
                return None;
            }
            Lattice::new(g).ok()
        })
}

fn is_unimodular(m: &IntegerMatrix) -> bool {
    m.determinant().abs() == BigInt::from(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_decomposition((r, c, e) in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c)))) {
        let m = IntegerMatrix::from_rows(&(0..r).map(|i| e[i * c..(i + 1) * c].to_vec()).collect::<Vec<_>>());
        let s = smith_decompose(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.s.clone());
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        let d = s.diagonal();
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.s[(i, j)].is_zero());
                }
            }
        }
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn kernel_vectors_are_in_the_kernel((n, e) in (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(-3i64..=3, n * n)))) {
        let m = matrix(n, &e);
        let ker = integral_kernel(&m);
        prop_assert_eq!(ker.len(), n - smith_decompose(&m).rank());
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inertia_is_congruence_invariant(l in even_lattice(), ops in prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..6)) {
        let n = l.rank();
        let mut b = IntegerMatrix::identity(n);
        for (i, j, k) in ops {
            let (i, j) = (i % n, j % n);
            if i != j {
                let mut e = IntegerMatrix::identity(n);
                e[(i, j)] = BigInt::from(k);
                b = b.mul(&e);
            }
        }
        let g2 = b.transpose().mul(l.gram()).mul(&b);
        let (p, q, z) = inertia(&g2).unwrap();
        prop_assert_eq!((p, q, z), l.signature());
        prop_assert_eq!(p + q + z, n);
    }

    #[test]
    fn discriminant_order_is_determinant(l in even_lattice()) {
        let d = l.discriminant_form().unwrap();
        prop_assert_eq!(d.cardinality(), l.determinant().abs());
    }

    #[test]
    fn discriminant_of_negation(l in even_lattice()) {
        let d = l.discriminant_form().unwrap();
        let dm = l.rescaled(-1).unwrap().discriminant_form().unwrap();
        prop_assume!(d.cardinality() <= BigInt::from(400));
        prop_assert!(!fqf_isometries(&d.negated(), &dm, false).unwrap().is_empty());
    }

    #[test]
    fn discriminant_of_direct_sum(a in even_lattice(), b in even_lattice()) {
        prop_assume!(a.determinant().abs() * b.determinant().abs() <= BigInt::from(400));
        let sum = a.direct_sum(&b).discriminant_form().unwrap();
        let parts = a.discriminant_form().unwrap().orthogonal_sum(&b.discriminant_form().unwrap()).unwrap();
        prop_assert!(!fqf_isometries(&sum, &parts, false).unwrap().is_empty());
    }

    #[test]
    fn milgram(l in even_lattice()) {
        let (p, q, _) = l.signature();
        let brown = brown_invariant(&l.discriminant_form().unwrap()).unwrap();
        prop_assert_eq!(i64::from(brown), (p as i64 - q as i64).rem_euclid(8));
    }
}

fn two_u() -> Lattice {
    Lattice::from_spec("2U").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_action_is_multiplicative(word in prop::collection::vec(0usize..5, 1..6), word2 in prop::collection::vec(0usize..5, 1..6)) {
        let l = two_u();
        let invs = two_u_involutions();
        let product = |w: &[usize]| w.iter().fold(IntegerMatrix::identity(4), |acc, &i| acc.mul(&invs[i].matrix));
        let (g, h) = (product(&word), product(&word2));
        let sg = sign_structure_action(&l, &g).unwrap();
        let sh = sign_structure_action(&l, &h).unwrap();
        prop_assert_eq!(sign_structure_action(&l, &g.mul(&h)).unwrap(), sg * sh);
        prop_assert_eq!(i64::from(sg), if word.len() % 2 == 0 { 1 } else { -1 });
    }

    #[test]
    fn invariant_ranks_add_up(word in prop::collection::vec(0usize..5, 0..5), k in 0usize..5) {
        // conjugates g·s·g⁻¹ of the basic involutions stay involutions
        let l = two_u();
        let invs = two_u_involutions();
        let g = word.iter().fold(IntegerMatrix::identity(4), |acc, &i| acc.mul(&invs[i].matrix));
        let gi = word.iter().rev().fold(IntegerMatrix::identity(4), |acc, &i| acc.mul(&invs[i].matrix));
        let s = g.mul(&invs[k].matrix).mul(&gi);
        let plus = invariant_sublattice(&l, &s).unwrap();
        let minus = invariant_sublattice(&l, &s.neg()).unwrap();
        prop_assert_eq!(plus.lattice.rank() + minus.lattice.rank(), 4);
    }
}

/// All 2d-subsets S with Σ_S v = h modulo the radical, by direct Gram products.
fn brute_force(cfg: &LineConfiguration) -> Vec<Vec<usize>> {
    let n = cfg.vertex_count();
    let k = cfg.degree() as usize;
    let g = cfg.gram();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut x = vec![BigInt::zero(); n + 1];
        for (i, xi) in x.iter_mut().enumerate().take(n) {
            if mask >> i & 1 == 1 {
                *xi = BigInt::from(1);
            }
        }
        x[n] = BigInt::from(-1);
        if g.mul_vec(&x).iter().all(|c| c.is_zero()) {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

fn multigraph() -> impl Strategy<Value = (u32, usize, Vec<(usize, usize, u8)>)> {
    (prop::sample::select(vec![2u32, 4, 6, 8]), 2usize..=12, 0u32..=3).prop_flat_map(|(d, n, density)| {
        let pairs = n * (n - 1) / 2;
        (Just(d), Just(n), prop::collection::vec((0u8..=3, 0u32..4), pairs)).prop_map(move |(d, n, raw)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let (m, keep) = raw[k];
                    k += 1;
                    if m > 0 && keep < density {
                        edges.push((i, j, m));
                    }
                }
            }
            (d, n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fragments_match_brute_force((d, n, edges) in multigraph()) {
        let cfg = LineConfiguration::new(d, n, &edges, vec![], None).unwrap();
        let fast: Vec<Vec<usize>> = enumerate_fragments(&cfg).unwrap().into_iter().map(|f| f.vertices).collect();
        let slow = brute_force(&cfg);
        prop_assert_eq!(&fast, &slow);
        // the sum condition forces 3-regularity inside S
        for s in &slow {
            for &v in s {
                let val: u32 = s.iter().map(|&w| cfg.graph().mult(v, w) as u32).sum();
                prop_assert_eq!(val, 3);
            }
        }
    }

    #[test]
    fn counts_are_conjugation_invariant((d, n, edges) in multigraph(), pick in any::<prop::sample::Index>(), conj in any::<prop::sample::Index>()) {
        let cfg = LineConfiguration::new(d, n, &edges, vec![], None).unwrap();
        let (gens, _) = cfg.graph().automorphisms();
        let Ok(group) = group_elements(n, &gens, 5_000) else { return Ok(()); };
        let invs: Vec<_> = group.iter().filter(|s| compose(s, s) == (0..n).collect::<Vec<_>>()).collect();
        let frags = enumerate_fragments(&cfg).unwrap();
        let s = pick.get(&invs);
        let g = conj.get(&group);
        let t = compose(g, &compose(s, &inverse(g)));
        let (r, rr) = count_fragments_under(&frags, s);
        prop_assert_eq!(count_fragments_under(&frags, &t), (r, rr));
        prop_assert!(rr <= r && r <= frags.len());
    }
}

/// Even lattice of signature (1, k): a positive vector over a negative
/// definite diagonally dominant block, scrambled by elementary moves.
fn hyperbolic(k: usize) -> impl Strategy<Value = Lattice> {
    let n = k + 1;
    (
        1i64..=4,
        prop::collection::vec(2i64..=5, k),
        prop::collection::vec(-1i64..=1, n * (n - 1) / 2),
        prop::collection::vec((0usize..n, 0usize..n, -1i64..=1), 0..4),
    )
        .prop_filter_map("not hyperbolic", move |(a, negs, off, ops)| {
            let mut diag = vec![a];
            diag.extend(negs.iter().map(|b| -b));
            let g = even_gram(n, &diag, &off);
            let mut b = IntegerMatrix::identity(n);
            for (i, j, c) in ops {
                if i != j {
                    let mut e = IntegerMatrix::identity(n);
                    e[(i, j)] = BigInt::from(c);
                    b = b.mul(&e);
                }
            }
            let l = Lattice::new(b.transpose().mul(&g).mul(&b)).ok()?;
            (l.signature() == (1, k, 0) && l.determinant().abs() <= BigInt::from(5_000)).then_some(l)
        })
}

fn verdict_for(t: &Lattice) -> Verdict {
    let r = t.rank();
    let d_n = t.discriminant_form().unwrap().negated();
    // N has signature (1, 21 − r)
    let sign = if (21 - r) % 2 == 0 { 1 } else { -1 };
    let det_n = t.determinant().abs() * BigInt::from(sign);
    totally_real_criterion(&d_n, r, &det_n).unwrap().verdict
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn criterion_never_rejects_two_summand(t in (1usize..=5).prop_flat_map(hyperbolic)) {
        let t = Lattice::rank_one(2).unwrap().direct_sum(&t);
        prop_assert_ne!(verdict_for(&t), Verdict::No, "T = {:?}", t.gram());
    }

    #[test]
    fn criterion_never_rejects_u2_summand(t in (1usize..=5).prop_flat_map(hyperbolic)) {
        let t = Lattice::from_spec("U(2)").unwrap().direct_sum(&t);
        let v = verdict_for(&t);
        prop_assert!(matches!(v, Verdict::YesContainsU2 | Verdict::YesContains2 | Verdict::Unknown), "T = {:?}: {v}", t.gram());
    }
}
