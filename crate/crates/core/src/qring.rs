//! Exact arithmetic in quadratic integer rings `Z[α]`, where `α` is the
//! larger real root of `x² = m·x + ε` with `m ≥ 1` and `ε = ±1`.
//!
//! Elements are stored as `c0 + c1·α` with arbitrary-precision coefficients.
//! Every comparison goes through [`RingElement::sign`], which decides the sign
//! of `c0 + c1·α` by integer squaring; floating point is only produced by
//! [`RingElement::approx`] and is never consulted for decisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Defining data of a ring `Z[α]` with `α² = m·α + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRingSpec")]
pub struct RingSpec {
    m: u32,
    eps: i8,
}

#[derive(Deserialize)]
struct RawRingSpec {
    m: i64,
    eps: i64,
}

impl TryFrom<RawRingSpec> for RingSpec {
    type Error = Error;

    fn try_from(raw: RawRingSpec) -> Result<Self> {
        RingSpec::new(raw.m, raw.eps)
    }
}

impl RingSpec {
    /// The golden-mean ring: `τ² = τ + 1`.
    pub const FIBONACCI: RingSpec = RingSpec { m: 1, eps: 1 };

    pub fn new(m: i64, eps: i64) -> Result<Self> {
        let invalid = |reason| Err(Error::InvalidRing { m, eps, reason });
        if m < 1 || m > i64::from(u32::MAX) {
            return invalid("trace m must be a positive integer");
        }
        if eps != 1 && eps != -1 {
            return invalid("eps must be +1 or -1");
        }
        if eps == -1 && m < 3 {
            return invalid("eps = -1 requires m >= 3");
        }
        let d = BigInt::from(m) * m + 4 * eps;
        if d.sign() != num_bigint::Sign::Plus || is_square(&d) {
            return invalid("discriminant must be a positive non-square");
        }
        Ok(RingSpec { m: m as u32, eps: eps as i8 })
    }

    /// Parses `"m,eps"`, e.g. `"1,1"` or `"3,-1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let (m, eps) = text
            .split_once(',')
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected \"m,eps\", got {text:?}") })?;
        let parse_int = |s: &str, pos: usize| {
            s.trim().parse::<i64>().map_err(|e| Error::Parse { pos, msg: format!("{e} in {s:?}") })
        };
        RingSpec::new(parse_int(m, 0)?, parse_int(eps, m.len() + 1)?)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }

    pub fn is_fibonacci(&self) -> bool {
        *self == Self::FIBONACCI
    }

    /// `D = m² + 4ε`; `α - α' = √D`.
    pub fn discriminant(&self) -> BigInt {
        BigInt::from(self.m) * self.m + 4 * i32::from(self.eps)
    }

    pub fn zero(&self) -> RingElement {
        RingElement::new(*self, 0, 0)
    }

    pub fn one(&self) -> RingElement {
        RingElement::new(*self, 1, 0)
    }

    pub fn int(&self, n: impl Into<BigInt>) -> RingElement {
        RingElement::new(*self, n, 0)
    }

    pub fn element(&self, c0: impl Into<BigInt>, c1: impl Into<BigInt>) -> RingElement {
        RingElement::new(*self, c0, c1)
    }

    pub fn alpha(&self) -> RingElement {
        RingElement::new(*self, 0, 1)
    }

    /// The other root `α' = m - α`.
    pub fn alpha_conj(&self) -> RingElement {
        RingElement::new(*self, i64::from(self.m), -1)
    }

    /// `α⁻¹ = ε(α - m)`.
    pub fn alpha_inv(&self) -> RingElement {
        let e = i64::from(self.eps);
        RingElement::new(*self, -e * i64::from(self.m), e)
    }

    /// The generalized Fibonacci number `g_k` with `g_0 = 0`, `g_1 = 1` and
    /// `g_{k+1} = m·g_k + ε·g_{k-1}`, run backward for negative `k`.
    pub fn fib(&self, k: i64) -> BigInt {
        let m = BigInt::from(self.m);
        let eps = BigInt::from(self.eps);
        let (mut prev, mut cur) = (BigInt::zero(), BigInt::one()); // g_0, g_1
        if k >= 0 {
            if k == 0 {
                return prev;
            }
            for _ in 1..k {
                let next = &m * &cur + &eps * &prev;
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        } else {
            // walk (g_j, g_{j+1}) down from j = 0
            let (mut lo, mut hi) = (prev, cur);
            for _ in 0..(-k) {
                let below = &eps * (&hi - &m * &lo);
                hi = std::mem::replace(&mut lo, below);
            }
            lo
        }
    }

    /// `α^k` for any integer `k`; equals `g_k·α + ε·g_{k-1}`.
    pub fn alpha_pow(&self, k: i64) -> RingElement {
        let base = if k >= 0 { self.alpha() } else { self.alpha_inv() };
        base.pow(k.unsigned_abs())
    }

    /// `α'^k`, the conjugate of `α^k`.
    pub fn alpha_conj_pow(&self, k: i64) -> RingElement {
        self.alpha_pow(k).conjugate()
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^2={}x{:+}", self.m, self.eps)
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Sign of `a + b·√d` for a positive non-square `d`.
pub(crate) fn surd_sign(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.cmp(&BigInt::zero());
    let sb = b.cmp(&BigInt::zero());
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // opposite signs: the larger magnitude wins; equality is impossible
    if a * a > b * b * d {
        sa
    } else {
        sb
    }
}

/// `⌊(a + b·√d) / den⌋` for `den > 0` and a positive non-square `d`.
pub(crate) fn surd_floor(a: &BigInt, b: &BigInt, d: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let root = (b * b * d).sqrt();
    let floor_b_sqrt_d = if b.is_negative() { -root - 1 } else { root };
    // a + b√d lies strictly between consecutive integers when b ≠ 0, so no
    // multiple of den can separate it from a + ⌊b√d⌋
    (a + floor_b_sqrt_d).div_floor(den)
}

/// An element `c0 + c1·α` of `Z[α]`.
///
/// Arithmetic operators panic when the operands live in different rings; the
/// `checked_*` methods report [`Error::RingMismatch`] instead. The `Ord`
/// implementation orders by ring first and then by exact real value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingSpec,
    c0: BigInt,
    c1: BigInt,
}

impl RingElement {
    pub fn new(ring: RingSpec, c0: impl Into<BigInt>, c1: impl Into<BigInt>) -> Self {
        RingElement { ring, c0: c0.into(), c1: c1.into() }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn c0(&self) -> &BigInt {
        &self.c0
    }

    pub fn c1(&self) -> &BigInt {
        &self.c1
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c0.is_one() && self.c1.is_zero()
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring, other.ring))
        }
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement::new(self.ring, &self.c0 + &other.c0, &self.c1 + &other.c1))
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement::new(self.ring, &self.c0 - &other.c0, &self.c1 - &other.c1))
    }

    /// `(a+bα)(c+dα) = (ac + ε·bd) + (ad + bc + m·bd)α`.
    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let bd = &self.c1 * &other.c1;
        let c0 = &self.c0 * &other.c0 + &bd * i32::from(self.ring.eps);
        let c1 = &self.c0 * &other.c1 + &self.c1 * &other.c0 + bd * self.ring.m;
        Ok(RingElement::new(self.ring, c0, c1))
    }

    pub fn scale(&self, k: &BigInt) -> RingElement {
        RingElement::new(self.ring, &self.c0 * k, &self.c1 * k)
    }

    pub fn pow(&self, mut e: u64) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Galois conjugate: `α ↦ α' = m - α`.
    pub fn conjugate(&self) -> RingElement {
        RingElement::new(self.ring, &self.c0 + &self.c1 * self.ring.m, -&self.c1)
    }

    /// `x·x' = c0² + m·c0·c1 - ε·c1²`.
    pub fn norm(&self) -> BigInt {
        &self.c0 * &self.c0 + &self.c0 * &self.c1 * self.ring.m - &self.c1 * &self.c1 * i32::from(self.ring.eps)
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Exact sign of the real value.
    pub fn sign(&self) -> Ordering {
        // c0 + c1α = (2c0 + m·c1 + c1·√D) / 2
        let a = &self.c0 * 2 + &self.c1 * self.ring.m;
        surd_sign(&a, &self.c1, &self.ring.discriminant())
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> RingElement {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the real value.
    pub fn floor(&self) -> BigInt {
        let a = &self.c0 * 2 + &self.c1 * self.ring.m;
        surd_floor(&a, &self.c1, &self.ring.discriminant(), &BigInt::from(2))
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Exact quotient `self / divisor` when it exists in the ring.
    pub fn div_exact(&self, divisor: &RingElement) -> Option<RingElement> {
        if divisor.is_zero() || self.ring != divisor.ring {
            return None;
        }
        let n = divisor.norm();
        let num = self * &divisor.conjugate();
        let (q0, r0) = num.c0.div_rem(&n);
        let (q1, r1) = num.c1.div_rem(&n);
        (r0.is_zero() && r1.is_zero()).then(|| RingElement::new(self.ring, q0, q1))
    }

    /// Double-precision images of the element and of its conjugate.
    pub fn approx(&self) -> (f64, f64) {
        let sqrt_d = self.ring.discriminant().to_f64().unwrap_or(f64::NAN).sqrt();
        let m = f64::from(self.ring.m);
        let c0 = self.c0.to_f64().unwrap_or(f64::NAN);
        let c1 = self.c1.to_f64().unwrap_or(f64::NAN);
        (c0 + c1 * (m + sqrt_d) / 2.0, c0 + c1 * (m - sqrt_d) / 2.0)
    }

    /// Parses the text form `"<c0>+<c1>t"`; see [`fmt::Display`].
    pub fn parse(ring: RingSpec, text: &str) -> Result<RingElement> {
        parse_element(ring, text)
    }

    pub fn to_json(&self) -> RingElementJson {
        RingElementJson { c0: self.c0.to_string(), c1: self.c1.to_string() }
    }
}

impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring.cmp(&other.ring).then_with(|| {
            let diff = RingElement::new(self.ring, &self.c0 - &other.c0, &self.c1 - &other.c1);
            diff.sign()
        })
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).expect("ring elements from different rings")
            }
        }
        impl $trait<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::new(self.ring, -&self.c0, -&self.c1)
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::new(self.ring, -self.c0, -self.c1)
    }
}

/// Canonical text form: `"4+5t"`, `"-t"`, `"1"`, `"3-2t"`, `"0"`.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_t = |f: &mut fmt::Formatter<'_>, mag: &BigInt| {
            if mag.is_one() {
                write!(f, "t")
            } else {
                write!(f, "{mag}t")
            }
        };
        match (self.c0.is_zero(), self.c1.is_zero()) {
            (_, true) => write!(f, "{}", self.c0),
            (true, false) => {
                if self.c1.is_negative() {
                    write!(f, "-")?;
                }
                write_t(f, &self.c1.abs())
            }
            (false, false) => {
                write!(f, "{}{}", self.c0, if self.c1.is_negative() { '-' } else { '+' })?;
                write_t(f, &self.c1.abs())
            }
        }
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON form of a ring element; decimal strings keep arbitrary precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingElementJson {
    pub c0: String,
    pub c1: String,
}

impl RingElementJson {
    pub fn into_element(self, ring: RingSpec) -> Result<RingElement> {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| Error::Parse { pos: 0, msg: format!("{e} in {s:?}") });
        Ok(RingElement::new(ring, parse(&self.c0)?, parse(&self.c1)?))
    }
}

impl Serialize for RingElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

fn parse_element(ring: RingSpec, text: &str) -> Result<RingElement> {
    let bytes = text.as_bytes();
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: format!("{msg} in {text:?}") };
    let skip_ws = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };

    let mut c0: Option<BigInt> = None;
    let mut c1: Option<BigInt> = None;
    let mut i = skip_ws(0);
    if i == bytes.len() {
        return Err(err(i, "empty ring element"));
    }
    let mut first = true;
    while i < bytes.len() {
        let negative = match bytes[i] {
            b'+' => {
                i += 1;
                false
            }
            b'-' => {
                i += 1;
                true
            }
            _ if first => false,
            _ => return Err(err(i, "expected '+' or '-'")),
        };
        i = skip_ws(i);
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let digits = (i > start).then(|| text[start..i].parse::<BigInt>().expect("ascii digits"));
        if i < bytes.len() && bytes[i] == b't' {
            if c1.is_some() {
                return Err(err(i, "duplicate t term"));
            }
            i += 1;
            let mag = digits.unwrap_or_else(BigInt::one);
            c1 = Some(if negative { -mag } else { mag });
        } else {
            let Some(mag) = digits else {
                return Err(err(i, "expected digits or 't'"));
            };
            if c0.is_some() {
                return Err(err(start, "duplicate constant term"));
            }
            c0 = Some(if negative { -mag } else { mag });
        }
        first = false;
        i = skip_ws(i);
    }
    Ok(RingElement::new(ring, c0.unwrap_or_default(), c1.unwrap_or_default()))
}
