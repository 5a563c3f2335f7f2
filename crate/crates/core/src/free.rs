//! Finite formal linear combinations with ring-element coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::qring::RingElement;

/// A sparse map from basis keys to nonzero coefficients. Zero coefficients
/// are never stored, so structural equality is equality of elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeElement<K: Ord> {
    terms: BTreeMap<K, RingElement>,
}

impl<K: Ord> Default for FreeElement<K> {
    fn default() -> Self {
        FreeElement { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> FreeElement<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: K, coeff: RingElement) -> Self {
        let mut x = Self::zero();
        x.add_term(key, coeff);
        x
    }

    pub fn add_term(&mut self, key: K, coeff: RingElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = &*c + &coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Option<&RingElement> {
        self.terms.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &RingElement)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Splits the terms with a predicate on the key; returns `(matching, rest)`.
    pub fn partition(&self, mut pred: impl FnMut(&K) -> bool) -> (Self, Self) {
        let (mut yes, mut no) = (Self::zero(), Self::zero());
        for (k, v) in &self.terms {
            if pred(k) {
                yes.terms.insert(k.clone(), v.clone());
            } else {
                no.terms.insert(k.clone(), v.clone());
            }
        }
        (yes, no)
    }
}

impl<K: Ord + Clone> FromIterator<(K, RingElement)> for FreeElement<K> {
    fn from_iter<I: IntoIterator<Item = (K, RingElement)>>(iter: I) -> Self {
        let mut x = Self::zero();
        for (k, c) in iter {
            x.add_term(k, c);
        }
        x
    }
}

impl<K: Ord + Clone> Add for &FreeElement<K> {
    type Output = FreeElement<K>;
    fn add(self, rhs: &FreeElement<K>) -> FreeElement<K> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl<K: Ord + Clone> Sub for &FreeElement<K> {
    type Output = FreeElement<K>;
    fn sub(self, rhs: &FreeElement<K>) -> FreeElement<K> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }
}

impl<K: Ord + Clone> Neg for &FreeElement<K> {
    type Output = FreeElement<K>;
    fn neg(self) -> FreeElement<K> {
        FreeElement { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
}

impl<K: Ord + fmt::Display> fmt::Display for FreeElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "({c})*{k}")?;
            }
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Display> fmt::Debug for FreeElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::RingSpec;

    const FIB: RingSpec = RingSpec::FIBONACCI;

    #[test]
    fn zero_coefficients_vanish() {
        let mut x = FreeElement::term("a", FIB.one());
        x.add_term("a", FIB.int(-1));
        assert!(x.is_zero());
        x.add_term("b", FIB.zero());
        assert!(x.is_zero());
    }

    #[test]
    fn arithmetic() {
        let x: FreeElement<&str> = [("a", FIB.one()), ("b", FIB.alpha())].into_iter().collect();
        let y: FreeElement<&str> = [("b", FIB.alpha()), ("c", FIB.int(2))].into_iter().collect();
        let s = &x + &y;
        assert_eq!(s.coeff(&"b"), Some(&FIB.element(0, 2)));
        assert_eq!(s.len(), 3);
        assert!((&x - &x).is_zero());
        assert_eq!(&(&x + &(-&x)), &FreeElement::zero());
        assert_eq!(x.scale(&FIB.zero()), FreeElement::zero());
        assert_eq!(x.scale(&FIB.alpha()).coeff(&"b"), Some(&FIB.element(1, 1)));
    }
}
