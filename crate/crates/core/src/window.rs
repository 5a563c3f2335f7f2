//! Acceptance windows: bounded real intervals with exact ring-element
//! endpoints and per-endpoint open/closed flags.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::qring::{RingElement, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Boundary {
    pub endpoint: RingElement,
    pub closed: bool,
}

impl Boundary {
    pub fn closed(endpoint: RingElement) -> Self {
        Boundary { endpoint, closed: true }
    }

    pub fn open(endpoint: RingElement) -> Self {
        Boundary { endpoint, closed: false }
    }
}

/// A non-empty connected interval of the real line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    lo: Boundary,
    hi: Boundary,
}

impl Window {
    pub fn new(lo: Boundary, hi: Boundary) -> Result<Self> {
        if lo.endpoint.ring() != hi.endpoint.ring() {
            return Err(Error::RingMismatch(lo.endpoint.ring(), hi.endpoint.ring()));
        }
        let w = Window { lo, hi };
        match w.lo.endpoint.cmp(&w.hi.endpoint) {
            Ordering::Less => Ok(w),
            Ordering::Equal if w.lo.closed && w.hi.closed => Ok(w),
            _ => Err(Error::EmptyWindow(w.to_string())),
        }
    }

    /// `[lo, hi]`
    pub fn closed(lo: RingElement, hi: RingElement) -> Result<Self> {
        Window::new(Boundary::closed(lo), Boundary::closed(hi))
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: RingElement, hi: RingElement) -> Result<Self> {
        Window::new(Boundary::open(lo), Boundary::closed(hi))
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: RingElement, hi: RingElement) -> Result<Self> {
        Window::new(Boundary::closed(lo), Boundary::open(hi))
    }

    /// `(lo, hi)`
    pub fn open(lo: RingElement, hi: RingElement) -> Result<Self> {
        Window::new(Boundary::open(lo), Boundary::open(hi))
    }

    /// `(0, 1]`, the window of the Fibonacci chain.
    pub fn unit(ring: RingSpec) -> Self {
        Window::open_closed(ring.zero(), ring.one()).expect("0 < 1")
    }

    /// `[-1, 1]`
    pub fn symmetric(ring: RingSpec) -> Self {
        Window::closed(ring.int(-1), ring.one()).expect("-1 < 1")
    }

    pub fn ring(&self) -> RingSpec {
        self.lo.endpoint.ring()
    }

    pub fn lo(&self) -> &Boundary {
        &self.lo
    }

    pub fn hi(&self) -> &Boundary {
        &self.hi
    }

    pub fn contains(&self, x: &RingElement) -> Result<bool> {
        if x.ring() != self.ring() {
            return Err(Error::RingMismatch(self.ring(), x.ring()));
        }
        let above = match x.cmp(&self.lo.endpoint) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo.closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi.endpoint) {
            Ordering::Less => true,
            Ordering::Equal => self.hi.closed,
            Ordering::Greater => false,
        };
        Ok(above && below)
    }

    /// The image `{u·x : x ∈ self}`. A negative factor swaps the endpoints,
    /// each keeping its own flag.
    pub fn scale(&self, u: &RingElement) -> Result<Window> {
        if u.ring() != self.ring() {
            return Err(Error::RingMismatch(self.ring(), u.ring()));
        }
        let image = |b: &Boundary| Boundary { endpoint: u * &b.endpoint, closed: b.closed };
        match u.sign() {
            Ordering::Equal => Err(Error::ZeroScale),
            Ordering::Greater => Window::new(image(&self.lo), image(&self.hi)),
            Ordering::Less => Window::new(image(&self.hi), image(&self.lo)),
        }
    }

    /// `-Ω`
    pub fn negate(&self) -> Window {
        self.scale(&self.ring().int(-1)).expect("nonzero factor")
    }

    /// Whether the model set over this window is closed under multiplication.
    ///
    /// The window must have the shape `[-α, β]` with `0 ≤ α ≤ 1` and
    /// `α² ≤ β ≤ 1`. Open endpoints are allowed except where a product of two
    /// attained endpoints lands exactly on an open one: a closed `-α` with
    /// an open `β = α² > 0` fails because `(-α)² = β` is attained.
    /// The closed singletons `{0}` and `{1}` are idempotent and also admitted.
    pub fn admissible_for_multiplication(&self) -> bool {
        let ring = self.ring();
        let lo = &self.lo.endpoint;
        let hi = &self.hi.endpoint;
        if lo == hi {
            return lo.is_zero() || lo.is_one();
        }
        let alpha = -lo;
        let alpha_sq = &alpha * &alpha;
        let shape = !alpha.is_negative() && alpha <= ring.one() && *hi <= ring.one() && *hi >= alpha_sq;
        if !shape {
            return false;
        }
        let square_escapes = self.lo.closed && !self.hi.closed && *hi == alpha_sq && alpha.is_positive();
        !square_escapes
    }

    /// Parses `"[lo,hi]"`, `"(lo,hi]"`, `"[lo,hi)"` or `"(lo,hi)"`.
    pub fn parse(ring: RingSpec, text: &str) -> Result<Window> {
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: format!("{msg} in {text:?}") };
        let trimmed = text.trim();
        let offset = text.len() - text.trim_start().len();
        let lo_closed = match trimmed.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(err(offset, "expected '[' or '('")),
        };
        let hi_closed = match trimmed.chars().last() {
            Some(']') if trimmed.len() > 1 => true,
            Some(')') if trimmed.len() > 1 => false,
            _ => return Err(err(offset + trimmed.len(), "expected ']' or ')'")),
        };
        let inner = &trimmed[1..trimmed.len() - 1];
        let comma = inner.find(',').ok_or_else(|| err(offset + 1, "expected ','"))?;
        let shift = |e: Error, base: usize| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + base, msg },
            other => other,
        };
        let lo = RingElement::parse(ring, &inner[..comma]).map_err(|e| shift(e, offset + 1))?;
        let hi = RingElement::parse(ring, &inner[comma + 1..]).map_err(|e| shift(e, offset + 2 + comma))?;
        Window::new(Boundary { endpoint: lo, closed: lo_closed }, Boundary { endpoint: hi, closed: hi_closed })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo.closed { '[' } else { '(' },
            self.lo.endpoint,
            self.hi.endpoint,
            if self.hi.closed { ']' } else { ')' }
        )
    }
}

impl serde::Serialize for Window {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIB: RingSpec = RingSpec::FIBONACCI;

    fn w(text: &str) -> Window {
        Window::parse(FIB, text).unwrap()
    }

    #[test]
    fn contains_examples() {
        let unit = Window::unit(FIB);
        assert!(unit.contains(&FIB.element(2, -1)).unwrap());
        assert!(!unit.contains(&FIB.zero()).unwrap());
        assert!(unit.contains(&FIB.one()).unwrap());
        let other = RingSpec::new(2, 1).unwrap();
        assert!(unit.contains(&other.one()).is_err());
    }

    #[test]
    fn scale_examples() {
        let unit = Window::unit(FIB);
        // τ' = 1 - τ < 0: (0,1] maps to [τ', 0)
        assert_eq!(unit.scale(&FIB.alpha_conj()).unwrap(), w("[1-t,0)"));
        assert_eq!(unit.scale(&FIB.one()).unwrap(), unit);
        // τ'² = 2 - τ > 0
        assert_eq!(unit.scale(&FIB.alpha_conj_pow(2)).unwrap(), w("(0,2-t]"));
        assert!(matches!(unit.scale(&FIB.zero()), Err(Error::ZeroScale)));
    }

    #[test]
    fn admissibility_examples() {
        assert!(w("[-1,1]").admissible_for_multiplication());
        assert!(w("(0,1]").admissible_for_multiplication());
        assert!(!w("[-1,2-t]").admissible_for_multiplication());
        assert!(w("[1-t,1]").admissible_for_multiplication());
        assert!(!w("[-1,1)").admissible_for_multiplication());
        assert!(w("(-1,1)").admissible_for_multiplication());
        assert!(!w("(-1+t,1]").admissible_for_multiplication());
        assert!(!w("[0,2]").admissible_for_multiplication());
        assert!(w("[0,0]").admissible_for_multiplication());
        assert!(w("[1,1]").admissible_for_multiplication());
        assert!(!w("[-1,-1]").admissible_for_multiplication());
        // β = α² with α = 1/τ: closed α attains α², so β must be closed too
        assert!(w("[1-t,2-t]").admissible_for_multiplication());
        assert!(!w("[1-t,2-t)").admissible_for_multiplication());
        assert!(w("(1-t,2-t)").admissible_for_multiplication());
    }

    #[test]
    fn admissibility_ignores_zero_endpoint_flag() {
        for (a, b) in [("(0,1]", "[0,1]"), ("(0,1)", "[0,1)"), ("(0,2-t]", "[0,2-t]")] {
            assert_eq!(w(a).admissible_for_multiplication(), w(b).admissible_for_multiplication());
        }
    }

    #[test]
    fn construction_rejects_empty() {
        assert!(Window::parse(FIB, "(0,0]").is_err());
        assert!(Window::parse(FIB, "[1,0]").is_err());
        assert!(Window::parse(FIB, "[0,0]").is_ok());
    }

    #[test]
    fn text_format() {
        for text in ["(0,1]", "[-1,1]", "[1-t,0)", "(0,2-t)"] {
            assert_eq!(w(text).to_string(), text);
        }
        assert_eq!(w("(-1+1t,1]"), Window::open_closed(FIB.element(-1, 1), FIB.one()).unwrap());
        assert_eq!(w(" [ -1 , 1 ] "), Window::symmetric(FIB));
        for bad in ["[-1,0.5]", "0,1]", "[0,1", "[0;1]", "", "[", "[]"] {
            assert!(Window::parse(FIB, bad).is_err(), "{bad:?}");
        }
        match Window::parse(FIB, "[-1,0.5]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
