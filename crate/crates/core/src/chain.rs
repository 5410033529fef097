use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::scalar::{self, Scalar};

/// A finite formal linear combination with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for Chain<K> {
    fn default() -> Self {
        Chain {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        let mut c = Self::zero();
        c.add_term(k, scalar::int(1));
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Scalar)>) -> Self {
        let mut c = Self::zero();
        for (k, x) in terms {
            c.add_term(k, x);
        }
        c
    }

    pub fn add_term(&mut self, k: K, x: Scalar) {
        if x.is_zero() {
            return;
        }
        let slot = self.terms.entry(k);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(x);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += x;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain<K>, factor: &Scalar) {
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * factor);
        }
    }

    pub fn add(&mut self, other: &Chain<K>) {
        self.add_scaled(other, &scalar::int(1));
    }

    pub fn scaled(&self, factor: &Scalar) -> Self {
        let mut c = Self::zero();
        c.add_scaled(self, factor);
        c
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

    pub fn coeff(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Chain<L>) -> Chain<L> {
        let mut out = Chain::zero();
        for (k, x) in &self.terms {
            out.add_scaled(&f(k), x);
        }
        out
    }

    /// `{"label": "num/den", ...}` with labels rendered by `label`.
    pub fn to_json(&self, mut label: impl FnMut(&K) -> String) -> Value {
        let mut m = Map::new();
        for (k, x) in &self.terms {
            m.insert(label(k), Value::String(scalar::format(x)));
        }
        Value::Object(m)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Chain<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn cancellation_removes_terms() {
        let mut c = Chain::basis("a");
        c.add_term("b", int(2));
        c.add_term("a", int(-1));
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(&"b"), int(2));
        assert_eq!(c.coeff(&"a"), int(0));
    }

    #[test]
    fn json_labels() {
        let c = Chain::from_terms([(1u8, int(-1))]);
        assert_eq!(c.to_json(|k| k.to_string()).to_string(), r#"{"1":"-1"}"#);
    }
}
