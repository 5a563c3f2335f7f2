//! Algebras indexed multiplicatively by the model set `Σ([-1,1])`: the
//! logarithmic Witt-type algebra `[L_{log|m|}, L_{log|n|}] = log(|m|/|n|) L_{log|mn|}`,
//! its integer toy `[l_m, l_n] = (m-n) l_{mn}`, monoid primes, and the
//! additive aperiodic Witt algebra with a characteristic-function cutoff.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::linalg::Basis;
use crate::modelset::PointSetSpec;
use crate::qring::RingElement;
use crate::window::Window;

/// `L_{log u}` for a positive member `u` of `Σ([-1,1])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LogGenerator {
    key: RingElement,
}

impl LogGenerator {
    /// Canonicalizes `m` to `|m|`.
    pub fn new(m: &RingElement) -> Result<LogGenerator> {
        if m.is_zero() {
            return Err(Error::ZeroArgument);
        }
        PointSetSpec::new(Window::symmetric(m.ring())).require_member(m)?;
        Ok(LogGenerator { key: m.abs() })
    }

    pub fn key(&self) -> &RingElement {
        &self.key
    }

    pub fn ln(&self) -> f64 {
        self.key.approx().0.ln()
    }
}

/// A single term `coeff · L_{log key}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WittTerm {
    pub coeff: f64,
    pub key: RingElement,
}

/// `[L_{log|m|}, L_{log|n|}] = (log|m| - log|n|) L_{log|mn|}`.
pub fn log_bracket(m: &RingElement, n: &RingElement) -> Result<WittTerm> {
    let (gm, gn) = (LogGenerator::new(m)?, LogGenerator::new(n)?);
    Ok(WittTerm { coeff: gm.ln() - gn.ln(), key: gm.key.checked_mul(&gn.key)? })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogJacobi {
    /// Keys of `[[m,n],k]`, `[[n,k],m]`, `[[k,m],n]`.
    pub keys: [RingElement; 3],
    pub keys_agree: bool,
    pub residual: f64,
}

/// The cyclic sum of double log-brackets. All three keys are `|mnk|`, so
/// Jacobi reduces to the vanishing of the scalar residual.
pub fn log_jacobi(m: &RingElement, n: &RingElement, k: &RingElement) -> Result<LogJacobi> {
    let double = |x: &RingElement, y: &RingElement, z: &RingElement| -> Result<WittTerm> {
        let inner = log_bracket(x, y)?;
        let outer = log_bracket(&inner.key, z)?;
        Ok(WittTerm { coeff: inner.coeff * outer.coeff, key: outer.key })
    };
    let terms = [double(m, n, k)?, double(n, k, m)?, double(k, m, n)?];
    let keys_agree = terms[1].key == terms[0].key && terms[2].key == terms[0].key;
    let residual = terms.iter().map(|t| t.coeff).sum();
    let [a, b, c] = terms;
    Ok(LogJacobi { keys: [a.key, b.key, c.key], keys_agree, residual })
}

/// `[l_m, l_n] = (m - n) l_{mn}`, as `(coeff, key)`.
pub fn int_mult_bracket(m: u64, n: u64) -> Result<(i128, u128)> {
    if m == 0 || n == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok((i128::from(m) - i128::from(n), u128::from(m) * u128::from(n)))
}

/// Coefficient of `l_{mnk}` in `[[l_m,l_n],l_k] + [[l_n,l_k],l_m] + [[l_k,l_m],l_n]`.
///
/// `[[l_m,l_n],l_k] = (m-n)(mn-k) l_{mnk}`, and the cyclic sum of these
/// equals `-(m-n)(n-k)(k-m)`, so it vanishes only when two indices agree.
pub fn logvir_jacobi_residual(m: u64, n: u64, k: u64) -> Result<BigInt> {
    let double = |x: u64, y: u64, z: u64| -> Result<BigInt> {
        let (c1, key) = int_mult_bracket(x, y)?;
        let key = u64::try_from(key).map_err(|_| Error::OutOfRange("index product overflow".into()))?;
        let (c2, _) = int_mult_bracket(key, z)?;
        Ok(BigInt::from(c1) * BigInt::from(c2))
    };
    Ok(double(m, n, k)? + double(n, k, m)? + double(k, m, n)?)
}

/// Integer analog of [`bracket_preimages`]: pairs `m < n` with `m·n = target`
/// and `m, n ∉ {1, target}`.
pub fn int_bracket_preimages(target: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut m = 2u64;
    while m.saturating_mul(m) <= target {
        if target.is_multiple_of(m) && m != target / m {
            out.push((m, target / m));
        }
        m += 1;
    }
    out
}

/// Positive members `p ≤ |bound|` of `Σ([-1,1])` dividing `|target|` with a
/// member quotient, as `(p, q)` with `p·q = |target|`.
///
/// Nonzero members satisfy `|x|·|x'| = |N(x)| ≥ 1` and `|x'| ≤ 1`, so
/// `|x| ≥ 1`; both factors therefore lie in `[1, |target|]`. Candidates are
/// pruned by `N(p) | N(target)` before the exact division.
fn member_factorizations(target: &RingElement, bound: &RingElement) -> Result<Vec<(RingElement, RingElement)>> {
    let ring = target.ring();
    let set = PointSetSpec::new(Window::symmetric(ring));
    set.require_member(target)?;
    if target.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let t = target.abs();
    let hi = std::cmp::min(t.clone(), bound.abs());
    if hi < ring.one() {
        return Ok(Vec::new());
    }
    let tn = t.norm();
    let mut out = Vec::new();
    for p in set.enumerate(&ring.one(), &hi)? {
        if !tn.is_multiple_of(&p.norm()) {
            continue;
        }
        if let Some(q) = t.div_exact(&p) {
            if set.member(&q)? {
                out.push((p, q));
            }
        }
    }
    Ok(out)
}

/// Pairs `(|m|, |n|)` of member absolute values with `|m|·|n| = |target|`,
/// `|m| < |n|` and neither equal to `|target|` (which also rules out `1`).
/// The search covers `|m| ≤ |bound|`.
pub fn bracket_preimages(target: &RingElement, bound: &RingElement) -> Result<Vec<(RingElement, RingElement)>> {
    let t = target.abs();
    Ok(member_factorizations(target, bound)?.into_iter().filter(|(p, q)| p < q && *p != t && *q != t).collect())
}

/// As [`bracket_preimages`] but excluding only `|m| = |n|`, the pairs whose
/// bracket vanishes. Always contains `(1, |target|)` when `|target| > 1`.
pub fn bracket_preimages_loose(target: &RingElement, bound: &RingElement) -> Result<Vec<(RingElement, RingElement)>> {
    Ok(member_factorizations(target, bound)?.into_iter().filter(|(p, q)| p < q).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Irreducibility {
    pub irreducible: bool,
    /// Set when `|N(x)| = 1` and the verdict is by convention.
    pub unit_convention: bool,
    /// A factorization `x = p·q` with `1 < |p| ≤ |q| < |x|`, if one exists.
    pub witness: Option<(RingElement, RingElement)>,
}

/// Whether `|x|` has no factorization into members `1 < |p| ≤ |q| < |x|`.
/// Elements of unit norm are powers of `α` up to sign and split into smaller
/// powers; they are declared irreducible and flagged, with the literal
/// factorization still reported.
pub fn monoid_irreducible(x: &RingElement, bound: &RingElement) -> Result<Irreducibility> {
    let ring = x.ring();
    let t = x.abs();
    if t <= ring.one() {
        PointSetSpec::new(Window::symmetric(ring)).require_member(x)?;
        return Err(Error::OutOfRange(format!("|{x}| must exceed 1")));
    }
    let witness = member_factorizations(x, bound)?.into_iter().find(|(p, q)| *p > ring.one() && p <= q && *q < t);
    let unit_convention = x.is_unit();
    Ok(Irreducibility { irreducible: unit_convention || witness.is_none(), unit_convention, witness })
}

/// Checks the window is of the form `[a,b]` with `a·b ≥ 0`.
fn require_aw_window(w: &Window) -> Result<()> {
    let ok = w.lo().closed && w.hi().closed && (&w.lo().endpoint * &w.hi().endpoint).sign() != Ordering::Less;
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedWindow(format!("{w}: need [a,b] with a*b >= 0")))
    }
}

/// `[L_n, L_m] = (m - n) χ_w(n' + m') L_{n+m}`.
pub fn aw_bracket(n: &RingElement, m: &RingElement, w: &Window) -> Result<FreeElement<RingElement>> {
    require_aw_window(w)?;
    let set = PointSetSpec::new(w.clone());
    set.require_member(n)?;
    set.require_member(m)?;
    let sum = n.checked_add(m)?;
    if w.contains(&sum.conjugate())? {
        Ok(FreeElement::term(sum, m - n))
    } else {
        Ok(FreeElement::zero())
    }
}

fn aw_bracket_free(
    x: &FreeElement<RingElement>,
    y: &FreeElement<RingElement>,
    w: &Window,
) -> Result<FreeElement<RingElement>> {
    let mut out = FreeElement::zero();
    for (n, c) in x.iter() {
        for (m, d) in y.iter() {
            let coeff = c * d;
            for (k, e) in aw_bracket(n, m, w)?.iter() {
                out.add_term(k.clone(), &coeff * e);
            }
        }
    }
    Ok(out)
}

/// Dimensions of the spans of `d`-fold left-nested brackets for
/// `d = 1..=depth`, as in [`crate::liealg::lower_central_probe`].
pub fn aw_lower_central_probe(generating: &[RingElement], depth: usize, w: &Window) -> Result<Vec<usize>> {
    require_aw_window(w)?;
    let set = PointSetSpec::new(w.clone());
    let mut gens = Vec::with_capacity(generating.len());
    for g in generating {
        set.require_member(g)?;
        gens.push(FreeElement::term(g.clone(), g.ring().one()));
    }
    let mut level = Basis::new();
    for g in &gens {
        level.insert(g);
    }
    let mut dims = Vec::with_capacity(depth);
    for d in 1..=depth {
        if d > 1 {
            let mut next = Basis::new();
            for v in level.members() {
                for g in &gens {
                    next.insert(&aw_bracket_free(v, g, w)?);
                }
            }
            level = next;
        }
        dims.push(level.rank());
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::RingSpec;

    const FIB: RingSpec = RingSpec::FIBONACCI;

    fn el(c0: i64, c1: i64) -> RingElement {
        FIB.element(c0, c1)
    }

    #[test]
    fn log_bracket_examples() {
        let t = log_bracket(&el(1, 1), &el(2, 2)).unwrap();
        assert!((t.coeff + 2f64.ln()).abs() < 1e-12);
        assert_eq!(t.key, el(4, 6));
        assert_eq!(log_bracket(&el(1, 1), &el(1, 1)).unwrap().coeff, 0.0);
        let t = log_bracket(&FIB.one(), &el(1, 1)).unwrap();
        assert_eq!(t.key, el(1, 1));
        let tau_sq = FIB.alpha_pow(2).approx().0;
        assert!((t.coeff + tau_sq.ln()).abs() < 1e-12);
        // signs are discarded
        assert_eq!(log_bracket(&el(-1, -1), &el(2, 2)).unwrap().key, el(4, 6));
    }

    #[test]
    fn log_bracket_errors() {
        assert!(matches!(log_bracket(&FIB.zero(), &FIB.one()), Err(Error::ZeroArgument)));
        assert!(matches!(log_bracket(&el(0, 2), &FIB.one()), Err(Error::NotMember { .. })));
    }

    #[test]
    fn log_antisymmetry() {
        let (m, n) = (el(2, 2), el(3, 4));
        assert_eq!(log_bracket(&m, &n).unwrap().coeff, -log_bracket(&n, &m).unwrap().coeff);
    }

    #[test]
    fn log_jacobi_instance() {
        let j = log_jacobi(&el(1, 1), &el(2, 2), &el(5, 7)).unwrap();
        assert!(j.keys_agree);
        assert!(j.residual.abs() < 1e-9);
    }

    #[test]
    fn int_bracket_examples() {
        assert_eq!(int_mult_bracket(2, 3).unwrap(), (-1, 6));
        assert_eq!(int_mult_bracket(4, 4).unwrap(), (0, 16));
        assert_eq!(int_mult_bracket(1, 5).unwrap(), (-4, 5));
        assert!(int_mult_bracket(0, 5).is_err());
    }

    #[test]
    fn logvir_residual_closed_form() {
        for m in 1..=12u64 {
            for n in 1..=12u64 {
                for k in 1..=12u64 {
                    let (mi, ni, ki) = (m as i64, n as i64, k as i64);
                    let expected = -(mi - ni) * (ni - ki) * (ki - mi);
                    assert_eq!(logvir_jacobi_residual(m, n, k).unwrap(), BigInt::from(expected));
                }
            }
        }
        assert_eq!(logvir_jacobi_residual(1, 2, 3).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn int_preimages() {
        assert!(int_bracket_preimages(7).is_empty());
        assert!(int_bracket_preimages(49).is_empty());
        assert_eq!(int_bracket_preimages(12), vec![(2, 6), (3, 4)]);
        assert!(int_bracket_preimages(1).is_empty());
    }

    #[test]
    fn preimage_examples() {
        let target = el(4, 5);
        assert!(bracket_preimages(&target, &target).unwrap().is_empty());
        let target = el(4, 6);
        let pre = bracket_preimages(&target, &target).unwrap();
        assert!(pre.contains(&(el(1, 1), el(2, 2))));
        assert!(pre.contains(&(el(0, 1), el(2, 4))));
        assert!(bracket_preimages(&FIB.one(), &FIB.one()).unwrap().is_empty());
        let loose = bracket_preimages_loose(&el(4, 5), &el(4, 5)).unwrap();
        assert_eq!(loose, vec![(FIB.one(), el(4, 5))]);
    }

    #[test]
    fn irreducibility_examples() {
        let r = monoid_irreducible(&el(4, 5), &el(4, 5)).unwrap();
        assert!(r.irreducible && !r.unit_convention && r.witness.is_none());
        let r = monoid_irreducible(&el(4, 6), &el(4, 6)).unwrap();
        assert!(!r.irreducible);
        let (p, q) = r.witness.unwrap();
        assert_eq!(&p * &q, el(4, 6));
        let r = monoid_irreducible(&el(1, 1), &el(1, 1)).unwrap();
        assert!(r.irreducible && r.unit_convention);
        // τ + 1 = τ·τ literally
        assert_eq!(r.witness, Some((el(0, 1), el(0, 1))));
        assert!(monoid_irreducible(&el(0, 2), &el(0, 2)).is_err());
        assert!(monoid_irreducible(&FIB.one(), &FIB.one()).is_err());
    }

    #[test]
    fn aw_examples() {
        let w = Window::closed(FIB.zero(), FIB.one()).unwrap();
        assert!(aw_bracket(&FIB.one(), &el(1, 1), &w).unwrap().is_zero());
        assert!(aw_bracket(&el(1, 1), &el(1, 1), &w).unwrap().is_zero());
        assert_eq!(aw_bracket(&FIB.zero(), &FIB.one(), &w).unwrap(), FreeElement::term(FIB.one(), FIB.one()));
        assert!(aw_bracket(&FIB.zero(), &FIB.one(), &Window::symmetric(FIB)).is_err());
        assert!(aw_bracket(&FIB.zero(), &FIB.one(), &Window::unit(FIB)).is_err());
    }

    #[test]
    fn aw_probe_examples() {
        let w = Window::closed(FIB.zero(), FIB.one()).unwrap();
        let gens = [FIB.one(), el(1, 1), el(2, 2)];
        let dims = aw_lower_central_probe(&gens, 8, &w).unwrap();
        assert!(dims.contains(&0));
        assert_eq!(aw_lower_central_probe(&gens[..1], 3, &w).unwrap(), vec![1, 0, 0]);
        assert_eq!(aw_lower_central_probe(&[], 3, &w).unwrap(), vec![0, 0, 0]);
    }
}
