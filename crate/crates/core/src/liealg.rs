//! The graded associative product `J^a_m · J^b_n = J^{a+b}_{m + α^a n}` on
//! generators indexed by the model set `Σ([-1,1])`, its commutator Lie
//! algebra, and the equivalent semi-direct product form
//! `(m̂, a) ×_Φ (n̂, b) = (m̂ + Φ(a)·n̂, a + b)`.
//!
//! Generator validity comes in two flavors, see [`Mode`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::linalg::Basis;
use crate::modelset::{compatibility_window, PointSetSpec};
use crate::qring::{RingElement, RingElementJson, RingSpec};
use crate::window::Window;

/// Which index set the generators range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `J^0_0`, plus `J^a_m` with `m' ∈ (0,1]` compatible with grading `a`,
    /// plus their mirror images `m' ∈ [-1,0)` with `-m` compatible with `a`.
    /// Products that leave this set are reported as closure defects.
    StrictPaper,
    /// `J^a_0` for every `a ≥ 0`, plus `J^a_m` with `0 < |m'| ≤ 1 - |α'|^a`.
    /// Closed under the product by the triangle inequality.
    #[default]
    SymmetricClosed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::StrictPaper => "strict-paper",
            Mode::SymmetricClosed => "symmetric-closed",
        })
    }
}

/// The basis element `J^a_m`. Ordered by grading, then by the value of `m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    a: u32,
    m: RingElement,
}

impl Generator {
    /// Validating constructor.
    pub fn new(a: u32, m: RingElement, mode: Mode) -> Result<Generator> {
        match validity(a, &m, mode) {
            Ok(()) => Ok(Generator { a, m }),
            Err(reason) => Err(Error::InvalidGenerator { a, m: m.to_string(), reason }),
        }
    }

    /// `J^0_0`, the central element.
    pub fn center(ring: RingSpec) -> Generator {
        Generator { a: 0, m: ring.zero() }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn m(&self) -> &RingElement {
        &self.m
    }

    pub fn ring(&self) -> RingSpec {
        self.m.ring()
    }

    pub fn is_valid(&self, mode: Mode) -> bool {
        validity(self.a, &self.m, mode).is_ok()
    }

    /// Parses `J[a=2,m=1+t]`.
    pub fn parse(ring: RingSpec, text: &str, mode: Mode) -> Result<Generator> {
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: format!("{msg} in {text:?}") };
        let t = text.trim();
        let offset = text.len() - text.trim_start().len();
        let body = t
            .strip_prefix("J[")
            .ok_or_else(|| err(offset, "expected 'J['"))?
            .strip_suffix(']')
            .ok_or_else(|| err(offset + t.len(), "expected ']'"))?;
        let (a_part, m_part) = body.split_once(',').ok_or_else(|| err(offset + 2, "expected ','"))?;
        let a_text = a_part.trim().strip_prefix("a=").ok_or_else(|| err(offset + 2, "expected 'a='"))?;
        let a: u32 = a_text.trim().parse().map_err(|_| err(offset + 4, "grading must be a natural number"))?;
        let m_start = offset + 3 + a_part.len();
        let m_text = m_part.trim_start().strip_prefix("m=").ok_or_else(|| err(m_start, "expected 'm='"))?;
        let m = RingElement::parse(ring, m_text).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + m_start + 2, msg },
            other => other,
        })?;
        Generator::new(a, m, mode)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J[a={},m={}]", self.a, self.m)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn validity(a: u32, m: &RingElement, mode: Mode) -> std::result::Result<(), String> {
    let ring = m.ring();
    if m.is_zero() {
        return match mode {
            Mode::SymmetricClosed => Ok(()),
            Mode::StrictPaper if a == 0 => Ok(()),
            Mode::StrictPaper => Err("index 0 requires grading 0".into()),
        };
    }
    if a == 0 {
        return Err("grading 0 is only permitted with index 0".into());
    }
    let conj = m.conjugate();
    let contains = |w: Window, x: &RingElement| w.contains(x).expect("same ring");
    match mode {
        Mode::StrictPaper => {
            let positive = match conj.sign() {
                Ordering::Greater => m.clone(),
                _ => -m,
            };
            if !PointSetSpec::chain(ring).member(&positive).expect("same ring") {
                return Err("index is not in the model set over [-1,0) or (0,1]".into());
            }
            let w = compatibility_window(ring, a).expect("a >= 1");
            if contains(w, &positive.conjugate()) {
                Ok(())
            } else {
                Err(format!("index is not compatible with grading {a}"))
            }
        }
        Mode::SymmetricClosed => {
            let bound = ring.one() - ring.alpha_conj_pow(i64::from(a)).abs();
            if conj.abs() <= bound {
                Ok(())
            } else {
                Err(format!("|m'| exceeds 1 - |α'|^{a}"))
            }
        }
    }
}

/// Grading and index of `g·h` before any validity check.
pub fn raw_product(g: &Generator, h: &Generator) -> Result<(u32, RingElement)> {
    let ring = g.ring();
    let shifted = ring.alpha_pow(i64::from(g.a)).checked_mul(&h.m)?;
    let a = g.a.checked_add(h.a).ok_or_else(|| Error::OutOfRange("grading overflow".into()))?;
    Ok((a, &g.m + &shifted))
}

/// `J^a_m · J^b_n = J^{a+b}_{m + α^a·n}`.
pub fn assoc_product(g: &Generator, h: &Generator, mode: Mode) -> Result<Generator> {
    let (a, m) = raw_product(g, h)?;
    match validity(a, &m, mode) {
        Ok(()) => Ok(Generator { a, m }),
        Err(reason) => {
            Err(Error::ClosureDefect { left: g.to_string(), right: h.to_string(), a, m: m.to_string(), reason })
        }
    }
}

/// `[g, h] = g·h - h·g`.
pub fn bracket(g: &Generator, h: &Generator, mode: Mode) -> Result<FreeElement<Generator>> {
    let ring = g.ring();
    let gh = assoc_product(g, h, mode)?;
    let hg = assoc_product(h, g, mode)?;
    let mut out = FreeElement::term(gh, ring.one());
    out.add_term(hg, ring.int(-1));
    Ok(out)
}

/// Bilinear extension of [`bracket`].
pub fn bracket_free(
    x: &FreeElement<Generator>,
    y: &FreeElement<Generator>,
    mode: Mode,
) -> Result<FreeElement<Generator>> {
    let mut out = FreeElement::zero();
    for (g, c) in x.iter() {
        for (h, d) in y.iter() {
            let coeff = c * d;
            for (k, e) in bracket(g, h, mode)?.iter() {
                out.add_term(k.clone(), &coeff * e);
            }
        }
    }
    Ok(out)
}

/// `[[g,h],k] + [[h,k],g] + [[k,g],h]`.
pub fn jacobi_residual(g: &Generator, h: &Generator, k: &Generator, mode: Mode) -> Result<FreeElement<Generator>> {
    let basis = |x: &Generator| FreeElement::term(x.clone(), x.ring().one());
    let cyc = |x: &Generator, y: &Generator, z: &Generator| -> Result<FreeElement<Generator>> {
        bracket_free(&bracket(x, y, mode)?, &basis(z), mode)
    };
    let s = &cyc(g, h, k)? + &cyc(h, k, g)?;
    Ok(&s + &cyc(k, g, h)?)
}

/// All valid generators with index in `Σ([-1,1]) ∩ [lo, hi]` and grading
/// at most `a_max`.
pub fn valid_generators(
    ring: RingSpec,
    mode: Mode,
    lo: &RingElement,
    hi: &RingElement,
    a_max: u32,
) -> Result<Vec<Generator>> {
    let indices = PointSetSpec::new(Window::symmetric(ring)).enumerate(lo, hi)?;
    let mut out = Vec::new();
    for a in 0..=a_max {
        for m in &indices {
            if validity(a, m, mode).is_ok() {
                out.push(Generator { a, m: m.clone() });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDefect {
    pub left: String,
    pub right: String,
    pub a: u32,
    pub m: RingElement,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureProbeReport {
    pub mode: Mode,
    pub generators: usize,
    pub pairs: u64,
    pub defects: Vec<ProductDefect>,
}

/// Multiplies every ordered pair of valid generators in range and reports
/// products that are not valid generators.
pub fn closure_probe(
    ring: RingSpec,
    mode: Mode,
    lo: &RingElement,
    hi: &RingElement,
    a_max: u32,
) -> Result<ClosureProbeReport> {
    let gens = valid_generators(ring, mode, lo, hi, a_max)?;
    let mut defects = Vec::new();
    let mut pairs = 0u64;
    for g in &gens {
        for h in &gens {
            pairs += 1;
            let (a, m) = raw_product(g, h)?;
            if let Err(reason) = validity(a, &m, mode) {
                defects.push(ProductDefect { left: g.to_string(), right: h.to_string(), a, m, reason });
            }
        }
    }
    Ok(ClosureProbeReport { mode, generators: gens.len(), pairs, defects })
}

pub struct TriangularParts {
    pub neg: FreeElement<Generator>,
    pub center: FreeElement<Generator>,
    pub pos: FreeElement<Generator>,
}

/// Splits by the side of the index set: `m' < 0`, `m = 0`, `m' > 0`, so the
/// outer parts live over `Σ([-1,0))` and `Σ((0,1])`.
pub fn triangular_split(x: &FreeElement<Generator>) -> TriangularParts {
    let (center, rest) = x.partition(|g| g.m.is_zero());
    let (pos, neg) = rest.partition(|g| g.m.conjugate().is_positive());
    TriangularParts { neg, center, pos }
}

/// `J^a_m ↦ J^a_{-m}`.
pub fn mirror(g: &Generator) -> Generator {
    Generator { a: g.a, m: -&g.m }
}

/// Whether the index lies in `Σ([-|α'|^s, |α'|^s])`, the window of the
/// self-similar copy of the algebra scaled by `α^s`.
pub fn in_scaled_subalgebra(g: &Generator, s: u32) -> bool {
    let ring = g.ring();
    g.m.conjugate().abs() <= ring.alpha_conj_pow(i64::from(s)).abs()
}

/// A 2×2 integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhiMatrix(pub [[BigInt; 2]; 2]);

/// Entries as decimal strings, row by row.
impl Serialize for PhiMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.0.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

impl PhiMatrix {
    pub fn apply(&self, v: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        let m = &self.0;
        (&m[0][0] * &v.0 + &m[0][1] * &v.1, &m[1][0] * &v.0 + &m[1][1] * &v.1)
    }
}

impl Mul for &PhiMatrix {
    type Output = PhiMatrix;
    fn mul(self, o: &PhiMatrix) -> PhiMatrix {
        let (x, y) = (&self.0, &o.0);
        let entry = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        PhiMatrix([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }
}

/// The matrix of multiplication by `α^a` on coefficient pairs `(c0, c1)`:
/// `[[ε·g_{a-1}, ε·g_a], [g_a, g_{a+1}]]`; for the golden ring
/// `[[f_{a-1}, f_a], [f_a, f_{a+1}]]`. `Φ(0)` is the identity.
pub fn phi_matrix(ring: RingSpec, a: u32) -> PhiMatrix {
    let a = i64::from(a);
    let eps = BigInt::from(ring.eps());
    PhiMatrix([[&eps * ring.fib(a - 1), &eps * ring.fib(a)], [ring.fib(a), ring.fib(a + 1)]])
}

/// `(m̂, a)` with `m̂ = (m1, m2)` standing for `m1 + m2·α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SdpElement {
    pub ring: RingSpec,
    pub mhat: (BigInt, BigInt),
    pub a: u32,
}

impl SdpElement {
    pub fn from_generator(g: &Generator) -> Self {
        SdpElement { ring: g.ring(), mhat: (g.m.c0().clone(), g.m.c1().clone()), a: g.a }
    }

    pub fn index(&self) -> RingElement {
        RingElement::new(self.ring, self.mhat.0.clone(), self.mhat.1.clone())
    }
}

/// `(m̂, a) ×_Φ (n̂, b) = (m̂ + Φ(a)·n̂, a + b)`.
pub fn sdp_compose(x: &SdpElement, y: &SdpElement) -> Result<SdpElement> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch(x.ring, y.ring));
    }
    let shifted = phi_matrix(x.ring, x.a).apply(&y.mhat);
    Ok(SdpElement { ring: x.ring, mhat: (&x.mhat.0 + shifted.0, &x.mhat.1 + shifted.1), a: x.a + y.a })
}

/// Whether the semi-direct product reproduces the grading and index of
/// `g·h`.
pub fn sdp_equivalence_check(g: &Generator, h: &Generator) -> bool {
    let Ok((a, m)) = raw_product(g, h) else { return false };
    match sdp_compose(&SdpElement::from_generator(g), &SdpElement::from_generator(h)) {
        Ok(s) => s.a == a && s.index() == m,
        Err(_) => false,
    }
}

/// Dimension of the span of the `d`-fold left-nested brackets
/// `[[..[g1, g2], ..], gd]` of the generating set, for `d = 1..=depth`.
pub fn lower_central_probe(generating: &[Generator], depth: usize, mode: Mode) -> Result<Vec<usize>> {
    let basis_vecs: Vec<FreeElement<Generator>> =
        generating.iter().map(|g| FreeElement::term(g.clone(), g.ring().one())).collect();
    let mut level = Basis::new();
    for v in &basis_vecs {
        level.insert(v);
    }
    let mut dims = Vec::with_capacity(depth);
    for d in 1..=depth {
        if d > 1 {
            let mut next = Basis::new();
            for v in level.members() {
                for g in &basis_vecs {
                    next.insert(&bracket_free(v, g, mode)?);
                }
            }
            level = next;
        }
        dims.push(level.rank());
    }
    Ok(dims)
}

/// JSON form of one term of a free element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub coeff: RingElementJson,
    pub a: u32,
    pub m: RingElementJson,
}

pub fn free_element_json(x: &FreeElement<Generator>) -> Vec<TermJson> {
    x.iter().map(|(g, c)| TermJson { coeff: c.to_json(), a: g.a, m: g.m.to_json() }).collect()
}
