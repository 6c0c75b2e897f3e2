//! Brown invariant via the exact Gauss sum Σₓ exp(πi·q(x)).
//!
//! The sum is evaluated prime by prime. For a p-primary form of level pᵏ
//! the sum lies in Q(ζ_L) with L = 8pᵏ (odd p) or L = max(2ᵏ⁺¹, 8); we test
//! S·ζ₈⁻ᵏ = √|D_p| exactly for each k, with √p written as a quadratic
//! Gauss sum, and decide equality to zero through the standard relations
//! of cyclotomic fields of prime-power order.

use num_integer::Integer;

use crate::error::{Error, Result};

use super::FiniteQuadraticForm;

/// Largest p-primary part summed over.
pub const BROWN_ELEMENT_CAP: u64 = 1 << 22;

/// Brown invariant in Z/8: the Gauss sum equals √|D|·exp(2πi·k/8).
pub fn brown_invariant(form: &FiniteQuadraticForm) -> Result<u8> {
    if !form.is_nondegenerate() {
        return Err(Error::Degenerate("Gauss sum of a degenerate form".into()));
    }
    let mut total = 0u32;
    for p in form.primes() {
        total += brown_p(&form.p_part(p), p)? as u32;
    }
    Ok((total % 8) as u8)
}

fn brown_p(part: &FiniteQuadraticForm, p: u64) -> Result<u8> {
    let e = part.level();
    let big_l = if p == 2 { (2 * e).max(8) } else { 8 * e } as usize;
    let step = big_l / (2 * e as usize);
    let mut sum = vec![0i64; big_l];
    for x in part.elements(BROWN_ELEMENT_CAP)? {
        let a = part.q_scaled(&x) as usize;
        sum[(a * step) % big_l] += 1;
    }
    // √|D_p| = m·√p^{v mod 2}
    let v: u32 = part.orders().iter().map(|&d| multiplicity(d, p)).sum();
    let m = (p as i64).pow(v / 2);
    let mut root = vec![0i64; big_l];
    if v % 2 == 0 {
        root[0] = m;
    } else if p == 2 {
        root[big_l / 8] += m;
        root[big_l - big_l / 8] += m;
    } else {
        let zp = big_l / p as usize;
        // −i = ζ_L^{−L/4} when p ≡ 3 mod 4
        let shift = if p % 4 == 1 { 0 } else { big_l - big_l / 4 };
        for x in 0..p as usize {
            root[(x * x % p as usize * zp + shift) % big_l] += m;
        }
    }
    let mut found = None;
    for k in 0..8usize {
        let rot = big_l - k * big_l / 8;
        let mut diff = root.iter().map(|c| -c).collect::<Vec<_>>();
        for (a, &c) in sum.iter().enumerate() {
            if c != 0 {
                diff[(a + rot) % big_l] += c;
            }
        }
        if is_zero(&diff, p, e) {
            found = Some(k as u8);
            break;
        }
    }
    found.ok_or_else(|| Error::Degenerate(format!("Gauss sum of the {p}-part has no valid argument")))
}

fn multiplicity(mut d: u64, p: u64) -> u32 {
    let mut v = 0;
    while d % p == 0 {
        d /= p;
        v += 1;
    }
    v
}

/// Is Σ c_a ζ_L^a = 0, with L as chosen in `brown_p`?
fn is_zero(c: &[i64], p: u64, pk: u64) -> bool {
    let big_l = c.len();
    if p == 2 {
        let h = big_l / 2;
        return (0..h).all(|a| c[a] == c[a + h]);
    }
    // ζ_L^a = ζ_8^{a·s} ζ_{pᵏ}^{a·t} with s·pᵏ + t·8 = 1
    let pk_i = pk as i64;
    let g = num_integer::Integer::extended_gcd(&pk_i, &8i64);
    debug_assert_eq!(g.gcd, 1);
    let (s, t) = (g.x, g.y);
    let mut w = vec![[0i64; 4]; pk as usize];
    for (a, &ca) in c.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        let a = a as i64;
        let e8 = (a * s).mod_floor(&8) as usize;
        let b = (a * t).mod_floor(&pk_i) as usize;
        if e8 < 4 {
            w[b][e8] += ca;
        } else {
            w[b][e8 - 4] -= ca;
        }
    }
    let stride = (pk / p) as usize;
    (0..stride).all(|r| (1..p as usize).all(|j| w[r + j * stride] == w[r]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn cyclic(d: u64, q: Ratio<i64>) -> FiniteQuadraticForm {
        FiniteQuadraticForm::from_rational(&[d], &[q], &[vec![q - q.to_integer()]]).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(brown_invariant(&FiniteQuadraticForm::trivial()).unwrap(), 0);
        assert_eq!(brown_invariant(&cyclic(2, Ratio::new(1, 2))).unwrap(), 1);
        assert_eq!(brown_invariant(&cyclic(2, Ratio::new(3, 2))).unwrap(), 7);
        // discr A₂ (negative definite): q = 4/3
        assert_eq!(brown_invariant(&cyclic(3, Ratio::new(4, 3))).unwrap(), 6);
        // discr [4]: q = 1/4
        assert_eq!(brown_invariant(&cyclic(4, Ratio::new(1, 4))).unwrap(), 1);
    }

    #[test]
    fn degenerate_rejected() {
        let deg = FiniteQuadraticForm::from_rational(&[2], &[Ratio::new(0, 1)], &[vec![Ratio::new(0, 1)]]).unwrap();
        assert!(brown_invariant(&deg).is_err());
    }
}
