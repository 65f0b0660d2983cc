//! Finite formal linear combinations with cyclotomic coefficients.

use std::collections::BTreeMap;

use crate::exact::rational::Rational;
use crate::exact::CycloNumber;

/// `Σ c_k · k` with nonzero coefficients, kept in key order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, CycloNumber>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: CycloNumber) -> Self {
        let mut l = Self::new();
        l.add(k, c);
        l
    }

    pub fn add(&mut self, k: K, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: &CycloNumber) {
        for (k, v) in &other.terms {
            self.add(k.clone(), v * c);
        }
    }

    pub fn add_lin(&mut self, other: &Lin<K>) {
        for (k, v) in &other.terms {
            self.add(k.clone(), v.clone());
        }
    }

    pub fn scaled(&self, c: &CycloNumber) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, c);
        out
    }

    pub fn scaled_rational(&self, q: &Rational) -> Self {
        self.scaled(&CycloNumber::from_rational(q.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &CycloNumber)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn get(&self, k: &K) -> Option<&CycloNumber> {
        self.terms.get(k)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pop_first(&mut self) -> Option<(K, CycloNumber)> {
        self.terms.pop_first()
    }

    pub fn map_keys<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> Lin<J> {
        let mut out = Lin::new();
        for (k, v) in &self.terms {
            out.add(f(k), v.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, CycloNumber)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, CycloNumber)>>(iter: I) -> Self {
        let mut l = Lin::new();
        for (k, c) in iter {
            l.add(k, c);
        }
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_keys() {
        let mut l = Lin::single("a", CycloNumber::from_int(2));
        l.add("a", CycloNumber::from_int(-2));
        assert!(l.is_empty());
        l.add("b", CycloNumber::from_int(1));
        assert_eq!(l.scaled(&CycloNumber::from_int(3)).get(&"b"), Some(&CycloNumber::from_int(3)));
    }
}
