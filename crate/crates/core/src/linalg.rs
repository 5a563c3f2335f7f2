//! Exact linear algebra over the quotient field `Q(α)`, used to measure the
//! dimension of spans of free elements.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::free::FreeElement;
use crate::qring::{RingElement, RingSpec};

/// `p + q·α` with rational `p`, `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FieldElement {
    ring: RingSpec,
    p: BigRational,
    q: BigRational,
}

impl FieldElement {
    fn from_ring(x: &RingElement) -> Self {
        FieldElement {
            ring: x.ring(),
            p: BigRational::from_integer(x.c0().clone()),
            q: BigRational::from_integer(x.c1().clone()),
        }
    }

    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn mul(&self, o: &FieldElement) -> FieldElement {
        let m = BigRational::from_integer(BigInt::from(self.ring.m()));
        let eps = BigRational::from_integer(BigInt::from(self.ring.eps()));
        let qq = &self.q * &o.q;
        FieldElement { ring: self.ring, p: &self.p * &o.p + &eps * &qq, q: &self.p * &o.q + &self.q * &o.p + m * qq }
    }

    fn sub(&self, o: &FieldElement) -> FieldElement {
        FieldElement { ring: self.ring, p: &self.p - &o.p, q: &self.q - &o.q }
    }

    /// Conjugate over norm; the norm of a nonzero element never vanishes
    /// because `α` is irrational.
    fn inv(&self) -> FieldElement {
        let m = BigRational::from_integer(BigInt::from(self.ring.m()));
        let eps = BigRational::from_integer(BigInt::from(self.ring.eps()));
        let norm = &self.p * &self.p + &m * &self.p * &self.q - eps * &self.q * &self.q;
        FieldElement { ring: self.ring, p: (&self.p + m * &self.q) / &norm, q: -&self.q / norm }
    }

    fn one(ring: RingSpec) -> Self {
        FieldElement { ring, p: BigRational::one(), q: BigRational::zero() }
    }
}

type Row<K> = BTreeMap<K, FieldElement>;

/// Incrementally maintained reduced row echelon form. Accepted inputs are
/// kept verbatim so callers can keep computing with a spanning set of the
/// original ring-coefficient elements.
pub(crate) struct Basis<K: Ord + Clone> {
    rows: Vec<Row<K>>,
    pivots: BTreeMap<K, usize>,
    members: Vec<FreeElement<K>>,
}

impl<K: Ord + Clone> Basis<K> {
    pub(crate) fn new() -> Self {
        Basis { rows: Vec::new(), pivots: BTreeMap::new(), members: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn members(&self) -> &[FreeElement<K>] {
        &self.members
    }

    /// Adds `x` if it is independent of what is already spanned.
    pub(crate) fn insert(&mut self, x: &FreeElement<K>) -> bool {
        let mut v: Row<K> = x.iter().map(|(k, c)| (k.clone(), FieldElement::from_ring(c))).collect();
        // rows are zero at every pivot but their own, so one pass suffices
        let hits: Vec<usize> = v.keys().filter_map(|k| self.pivots.get(k).copied()).collect();
        for idx in hits {
            let row = &self.rows[idx];
            let pivot_key = row.keys().next().expect("nonempty row").clone();
            let Some(factor) = v.get(&pivot_key).cloned() else { continue };
            axpy(&mut v, &factor, row);
        }
        let Some((pivot_key, lead)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv();
        for c in v.values_mut() {
            *c = c.mul(&inv);
        }
        debug_assert_eq!(v[&pivot_key], FieldElement::one(lead.ring));
        for row in &mut self.rows {
            if let Some(factor) = row.get(&pivot_key).cloned() {
                axpy(row, &factor, &v);
            }
        }
        self.pivots.insert(pivot_key, self.rows.len());
        self.rows.push(v);
        self.members.push(x.clone());
        true
    }
}

/// `target -= factor * row`, dropping zeros.
fn axpy<K: Ord + Clone>(target: &mut Row<K>, factor: &FieldElement, row: &Row<K>) {
    for (k, c) in row {
        let delta = factor.mul(c);
        let updated = match target.get(k) {
            Some(t) => t.sub(&delta),
            None => FieldElement { ring: delta.ring, p: BigRational::zero(), q: BigRational::zero() }.sub(&delta),
        };
        if updated.is_zero() {
            target.remove(k);
        } else {
            target.insert(k.clone(), updated);
        }
    }
}
