//! Model sets `Σ(Ω) = { x ∈ Z[α] : x' ∈ Ω }` and the structure the golden
//! chain `Σ((0,1])` carries: tiles, parity, grading compatibility, graded
//! addition and self-similar windows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qring::{surd_floor, RingElement, RingSpec};
use crate::window::Window;

/// A model set, given intensionally by its ring and acceptance window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSetSpec {
    ring: RingSpec,
    window: Window,
}

impl PointSetSpec {
    pub fn new(window: Window) -> Self {
        PointSetSpec { ring: window.ring(), window }
    }

    /// `Σ((0,1])`; the Fibonacci chain for the golden-mean ring.
    pub fn chain(ring: RingSpec) -> Self {
        PointSetSpec::new(Window::unit(ring))
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn member(&self, x: &RingElement) -> Result<bool> {
        self.window.contains(&x.conjugate())
    }

    pub(crate) fn require_member(&self, x: &RingElement) -> Result<()> {
        if self.member(x)? {
            Ok(())
        } else {
            Err(Error::NotMember { x: x.to_string(), window: self.window.to_string() })
        }
    }

    /// All members in `[x_lo, x_hi]`, ascending.
    ///
    /// Since `x - x' = c1·√D`, the window and the range bound `c1` to an
    /// exact integer interval; for each `c1` the admissible `c0` form a
    /// second exact interval. Every candidate is then checked with the exact
    /// membership test, so open window boundaries are honored.
    pub fn enumerate(&self, x_lo: &RingElement, x_hi: &RingElement) -> Result<Vec<RingElement>> {
        for x in [x_lo, x_hi] {
            if x.ring() != self.ring {
                return Err(Error::RingMismatch(self.ring, x.ring()));
            }
        }
        if x_lo > x_hi {
            return Err(Error::InvertedRange { lo: x_lo.to_string(), hi: x_hi.to_string() });
        }
        let ring = self.ring;
        let w_lo = &self.window.lo().endpoint;
        let w_hi = &self.window.hi().endpoint;
        let c1_min = -floor_div_sqrt_d(&(w_hi - x_lo));
        let c1_max = floor_div_sqrt_d(&(x_hi - w_lo));

        let alpha = ring.alpha();
        let alpha_conj = ring.alpha_conj();
        let mut points = Vec::new();
        let mut c1 = c1_min;
        while c1 <= c1_max {
            let t = alpha.scale(&c1);
            let t_conj = alpha_conj.scale(&c1);
            let c0_min = (x_lo - &t).ceil().max((w_lo - &t_conj).ceil());
            let c0_max = (x_hi - &t).floor().min((w_hi - &t_conj).floor());
            let mut c0 = c0_min;
            while c0 <= c0_max {
                let x = RingElement::new(ring, c0.clone(), c1.clone());
                if self.member(&x)? && &x >= x_lo && &x <= x_hi {
                    points.push(x);
                }
                c0 += 1;
            }
            c1 += 1;
        }
        points.sort();
        Ok(points)
    }

    /// Gap lengths between consecutive members of `[x_lo, x_hi]`.
    pub fn tiles(&self, x_lo: &RingElement, x_hi: &RingElement) -> Result<TileReport> {
        let points = self.enumerate(x_lo, x_hi)?;
        if points.len() < 2 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let tiles: Vec<RingElement> = points.windows(2).map(|p| &p[1] - &p[0]).collect();
        let mut counts = BTreeMap::new();
        for t in &tiles {
            *counts.entry(t.clone()).or_insert(0usize) += 1;
        }
        let exceptional = counts.iter().filter(|(_, &n)| n == 1).map(|(t, _)| t.clone()).collect();
        Ok(TileReport { points, tiles, counts, exceptional })
    }

    /// Every pairwise product of members in `[x_lo, x_hi]` whose conjugate
    /// leaves the window.
    pub fn closure_report(&self, x_lo: &RingElement, x_hi: &RingElement) -> Result<ClosureReport> {
        let points = self.enumerate(x_lo, x_hi)?;
        let mut violations = Vec::new();
        let mut pairs = 0u64;
        for (i, x) in points.iter().enumerate() {
            for y in &points[i..] {
                pairs += 1;
                let product = x * y;
                if !self.member(&product)? {
                    violations.push(ProductViolation { x: x.clone(), y: y.clone(), product });
                }
            }
        }
        Ok(ClosureReport {
            window: self.window.to_string(),
            admissible: self.window.admissible_for_multiplication(),
            points: points.len(),
            pairs,
            violations,
        })
    }
}

/// `⌊y / √D⌋`, exactly.
fn floor_div_sqrt_d(y: &RingElement) -> BigInt {
    let ring = y.ring();
    let d = ring.discriminant();
    // y = (P + Q√D)/2, so y/√D = (Q·D + P·√D) / (2D)
    let p = y.c0() * 2 + y.c1() * ring.m();
    let q = y.c1();
    surd_floor(&(q * &d), &p, &d, &(&d * 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TileReport {
    pub points: Vec<RingElement>,
    pub tiles: Vec<RingElement>,
    pub counts: BTreeMap<RingElement, usize>,
    /// Lengths occurring exactly once in the enumerated range.
    pub exceptional: Vec<RingElement>,
}

impl TileReport {
    pub fn distinct_lengths(&self) -> Vec<RingElement> {
        self.counts.keys().cloned().collect()
    }

    /// Consecutive point pairs whose gap equals `length`.
    pub fn locations(&self, length: &RingElement) -> Vec<(RingElement, RingElement)> {
        self.points
            .windows(2)
            .zip(&self.tiles)
            .filter(|(_, t)| *t == length)
            .map(|(p, _)| (p[0].clone(), p[1].clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductViolation {
    pub x: RingElement,
    pub y: RingElement,
    pub product: RingElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub window: String,
    pub admissible: bool,
    pub points: usize,
    pub pairs: u64,
    pub violations: Vec<ProductViolation>,
}

/// The point of `Σ((0,1])` whose `α`-coefficient is `n2`:
/// `n2·α + ⌊1 - n2·α'⌋`. For the golden ring this is `n2·τ + ⌊n2/τ + 1⌋`.
pub fn chain_point(ring: RingSpec, n2: impl Into<BigInt>) -> RingElement {
    let n2 = n2.into();
    let c0 = (ring.one() - ring.alpha_conj().scale(&n2)).floor();
    RingElement::new(ring, c0, n2)
}

/// `n2·τ + ⌊n2/τ + 1⌋`, evaluated without floating point.
pub fn fibonacci_point(n2: impl Into<BigInt>) -> RingElement {
    chain_point(RingSpec::FIBONACCI, n2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Ambiguous,
}

/// Which golden-chain window parity is read against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityVariant {
    /// `Σ((0,1])`: even iff `x' ∈ (0, 1/τ]`, odd iff `x' ∈ (1/τ, 1]`.
    #[default]
    HalfOpen01,
    /// `Σ([0,1])`: the point with `x' = 1/τ` (that is, `-τ`) is ambiguous.
    Closed01,
}

pub fn parity(x: &RingElement, variant: ParityVariant) -> Result<Parity> {
    let ring = x.ring();
    if !ring.is_fibonacci() {
        return Err(Error::NotFibonacci(ring));
    }
    let window = match variant {
        ParityVariant::HalfOpen01 => Window::unit(ring),
        ParityVariant::Closed01 => Window::closed(ring.zero(), ring.one())?,
    };
    PointSetSpec::new(window).require_member(x)?;
    let conj = x.conjugate();
    let inv_tau = ring.alpha_inv();
    Ok(match (variant, conj.cmp(&inv_tau)) {
        (ParityVariant::Closed01, std::cmp::Ordering::Equal) => Parity::Ambiguous,
        (_, std::cmp::Ordering::Greater) => Parity::Odd,
        _ => Parity::Even,
    })
}

/// The conjugate-side window of points compatible with grading `a`: those
/// `x` with `x + α^a·y ∈ Σ((0,1])` for every `y ∈ Σ((0,1])`.
///
/// With `c = α'^a`, this is `(0, 1 - c]` when `c > 0` and `(-c, 1]` when
/// `c < 0`; for the golden ring, `(0, 1 - 1/τ^a]` for even `a` and
/// `(1/τ^a, 1]` for odd `a`.
pub fn compatibility_window(ring: RingSpec, a: u32) -> Result<Window> {
    if a == 0 {
        return Err(Error::ZeroGrading);
    }
    let c = ring.alpha_conj_pow(i64::from(a));
    if c.is_positive() {
        Window::open_closed(ring.zero(), ring.one() - c)
    } else {
        Window::open_closed(-c, ring.one())
    }
}

pub fn is_compatible(x: &RingElement, a: u32) -> Result<bool> {
    let ring = x.ring();
    PointSetSpec::chain(ring).require_member(x)?;
    compatibility_window(ring, a)?.contains(&x.conjugate())
}

pub fn compatible_gradings(x: &RingElement, a_max: u32) -> Result<Vec<u32>> {
    PointSetSpec::chain(x.ring()).require_member(x)?;
    let mut out = Vec::new();
    for a in 1..=a_max {
        if is_compatible(x, a)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// `x + α^a·y`. Never rejects its inputs; membership of the result is a
/// consequence of compatibility, not a precondition.
pub fn graded_add(x: &RingElement, a: u32, y: &RingElement) -> Result<RingElement> {
    let ring = x.ring();
    x.checked_add(&ring.alpha_pow(i64::from(a)).checked_mul(y)?)
}

/// `τ²x - τy`.
pub fn berman_moody(x: &RingElement, y: &RingElement) -> Result<RingElement> {
    let ring = x.ring();
    if !ring.is_fibonacci() {
        return Err(Error::NotFibonacci(ring));
    }
    (ring.alpha_pow(2) * x).checked_sub(&(ring.alpha() * y))
}

/// The window `W` with `α^a·Σ((0,1]) = Σ(W)`: `(0,1]` scaled by `α'^a`.
pub fn self_similar_window(ring: RingSpec, a: u32) -> Window {
    Window::unit(ring).scale(&ring.alpha_conj_pow(i64::from(a))).expect("units are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIB: RingSpec = RingSpec::FIBONACCI;

    fn el(c0: i64, c1: i64) -> RingElement {
        FIB.element(c0, c1)
    }

    fn listing() -> Vec<RingElement> {
        [
            (-2, -4),
            (-1, -3),
            (-1, -2),
            (0, -1),
            (1, 0),
            (1, 1),
            (2, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (4, 6),
            (5, 7),
            (5, 8),
            (6, 9),
            (7, 10),
        ]
        .into_iter()
        .map(|(c0, c1)| el(c0, c1))
        .collect()
    }

    #[test]
    fn member_examples() {
        let chain = PointSetSpec::chain(FIB);
        assert!(chain.member(&el(1, 1)).unwrap());
        assert!(!chain.member(&el(0, 2)).unwrap());
        assert!(!chain.member(&FIB.zero()).unwrap());
    }

    #[test]
    fn fibonacci_point_examples() {
        assert_eq!(fibonacci_point(0), el(1, 0));
        assert_eq!(fibonacci_point(-2), el(-1, -2));
        assert_eq!(fibonacci_point(5), el(4, 5));
        let generated: Vec<_> = (-4..=10).map(fibonacci_point).collect();
        assert_eq!(generated, listing());
    }

    #[test]
    fn enumerate_matches_listing() {
        let chain = PointSetSpec::chain(FIB);
        let got = chain.enumerate(&FIB.int(-9), &FIB.int(24)).unwrap();
        assert_eq!(got, listing());
        let got = chain.enumerate(&FIB.int(-7), &FIB.int(13)).unwrap();
        assert_eq!(got, listing()[1..10].to_vec());
    }

    #[test]
    fn enumerate_closed_unit_window() {
        let closed = PointSetSpec::new(Window::parse(FIB, "[0,1]").unwrap());
        // [τ-2, 2τ-2] ≈ [-0.38, 1.24]
        let got = closed.enumerate(&el(-2, 1), &el(-2, 2)).unwrap();
        assert_eq!(got, vec![FIB.zero(), FIB.one()]);
    }

    #[test]
    fn enumerate_rejects_inverted_range() {
        let chain = PointSetSpec::chain(FIB);
        assert!(matches!(chain.enumerate(&FIB.int(5), &FIB.int(4)), Err(Error::InvertedRange { .. })));
        assert_eq!(chain.enumerate(&FIB.int(3), &FIB.int(3)).unwrap(), vec![]);
    }

    #[test]
    fn enumerate_agrees_with_brute_force() {
        for text in ["(0,1]", "[0,1]", "[-1,1]", "(-1+t,1]", "[1-t,0)", "(0,2-t)"] {
            let s = PointSetSpec::new(Window::parse(FIB, text).unwrap());
            let (lo, hi) = (FIB.int(-15), FIB.int(15));
            let mut brute = Vec::new();
            for c0 in -40..=40 {
                for c1 in -40..=40 {
                    let x = el(c0, c1);
                    if s.member(&x).unwrap() && x >= lo && x <= hi {
                        brute.push(x);
                    }
                }
            }
            brute.sort();
            assert_eq!(s.enumerate(&lo, &hi).unwrap(), brute, "window {text}");
        }
    }

    #[test]
    fn tiles_of_the_chain() {
        let report = PointSetSpec::chain(FIB).tiles(&FIB.int(-20), &FIB.int(20)).unwrap();
        assert_eq!(report.distinct_lengths(), vec![el(0, 1), el(1, 1)]);
        assert!(report.exceptional.is_empty());
    }

    #[test]
    fn exceptional_tile_of_the_closed_window() {
        let s = PointSetSpec::new(Window::parse(FIB, "[0,1]").unwrap());
        let report = s.tiles(&FIB.int(-20), &FIB.int(20)).unwrap();
        assert_eq!(report.distinct_lengths(), vec![el(1, 0), el(0, 1), el(1, 1)]);
        assert_eq!(report.exceptional, vec![FIB.one()]);
        assert_eq!(report.locations(&FIB.one()), vec![(FIB.zero(), FIB.one())]);
    }

    #[test]
    fn tiles_need_two_points() {
        let chain = PointSetSpec::chain(FIB);
        assert!(matches!(chain.tiles(&FIB.int(2), &FIB.int(2)), Err(Error::TooFewPoints(0))));
        let two = chain.tiles(&FIB.one(), &el(1, 1)).unwrap();
        assert_eq!(two.tiles, vec![el(0, 1)]);
    }

    #[test]
    fn parity_examples() {
        use ParityVariant::*;
        assert_eq!(parity(&fibonacci_point(0), HalfOpen01).unwrap(), Parity::Odd);
        assert_eq!(parity(&fibonacci_point(1), HalfOpen01).unwrap(), Parity::Even);
        assert_eq!(parity(&el(0, -1), Closed01).unwrap(), Parity::Ambiguous);
        assert_eq!(parity(&el(0, -1), HalfOpen01).unwrap(), Parity::Even);
        assert_eq!(parity(&FIB.zero(), Closed01).unwrap(), Parity::Even);
        assert!(matches!(parity(&FIB.zero(), HalfOpen01), Err(Error::NotMember { .. })));
        let other = RingSpec::new(2, 1).unwrap();
        assert!(matches!(parity(&other.one(), HalfOpen01), Err(Error::NotFibonacci(_))));
    }

    #[test]
    fn compatibility_examples() {
        assert!(is_compatible(&el(1, 1), 2).unwrap());
        assert!(is_compatible(&FIB.one(), 1).unwrap());
        assert!(!is_compatible(&FIB.one(), 2).unwrap());
        assert!(matches!(is_compatible(&FIB.one(), 0), Err(Error::ZeroGrading)));
        assert!(matches!(is_compatible(&el(0, 2), 1), Err(Error::NotMember { .. })));
    }

    #[test]
    fn compatibility_windows_for_golden_ring() {
        assert_eq!(compatibility_window(FIB, 1).unwrap(), Window::parse(FIB, "(-1+t,1]").unwrap());
        assert_eq!(compatibility_window(FIB, 2).unwrap(), Window::parse(FIB, "(0,-1+t]").unwrap());
        assert_eq!(compatibility_window(FIB, 3).unwrap(), Window::parse(FIB, "(-3+2t,1]").unwrap());
    }

    #[test]
    fn compatible_gradings_examples() {
        let g = compatible_gradings(&FIB.one(), 4).unwrap();
        assert_eq!(g, vec![1, 3]);
        assert!(compatible_gradings(&el(1, 1), 2).unwrap().contains(&2));
        assert!(compatible_gradings(&el(1, 1), 0).unwrap().is_empty());
    }

    #[test]
    fn graded_add_examples() {
        assert_eq!(graded_add(&el(2, 2), 1, &el(2, 3)).unwrap(), el(5, 7));
        assert_eq!(graded_add(&el(2, 3), 2, &el(2, 2)).unwrap(), el(6, 9));
        let left = graded_add(&graded_add(&el(1, 1), 2, &el(4, 5)).unwrap(), 1, &el(2, 2)).unwrap();
        let right = graded_add(&el(1, 1), 2, &graded_add(&el(4, 5), 1, &el(2, 2)).unwrap()).unwrap();
        assert_eq!(left, el(12, 19));
        assert_eq!(right, el(16, 25));
        assert_eq!(graded_add(&el(4, 5), 7, &FIB.zero()).unwrap(), el(4, 5));
    }

    #[test]
    fn berman_moody_examples() {
        assert_eq!(berman_moody(&FIB.one(), &FIB.one()).unwrap(), FIB.one());
        assert_eq!(berman_moody(&el(1, 1), &FIB.one()).unwrap(), el(2, 2));
        assert_eq!(berman_moody(&FIB.zero(), &FIB.zero()).unwrap(), FIB.zero());
    }

    #[test]
    fn self_similar_window_examples() {
        assert_eq!(self_similar_window(FIB, 1), Window::parse(FIB, "[1-t,0)").unwrap());
        assert_eq!(self_similar_window(FIB, 2), Window::parse(FIB, "(0,2-t]").unwrap());
        assert_eq!(self_similar_window(FIB, 0), Window::unit(FIB));
    }

    #[test]
    fn closure_report_examples() {
        let (lo, hi) = (FIB.int(-7), FIB.int(13));
        for text in ["(0,1]", "[-1,1]"] {
            let r = PointSetSpec::new(Window::parse(FIB, text).unwrap()).closure_report(&lo, &hi).unwrap();
            assert!(r.violations.is_empty(), "{text}: {:?}", r.violations);
            assert!(r.admissible);
        }
        let bad = PointSetSpec::new(Window::parse(FIB, "[-1,2-t]").unwrap());
        let r = bad.closure_report(&lo, &hi).unwrap();
        assert!(!r.admissible);
        assert!(r.violations.iter().any(|v| v.x == FIB.int(-1) && v.y == FIB.int(-1)));
    }

    #[test]
    fn chain_point_in_other_rings() {
        for ring in [RingSpec::new(2, 1).unwrap(), RingSpec::new(3, -1).unwrap()] {
            let chain = PointSetSpec::chain(ring);
            for n2 in -50..=50 {
                let p = chain_point(ring, n2);
                assert!(chain.member(&p).unwrap(), "{ring}: {p}");
                assert_eq!(p.c1(), &BigInt::from(n2));
            }
        }
    }
}
