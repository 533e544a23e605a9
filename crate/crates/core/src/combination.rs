//! Formal rational combinations `Σ c_F · [e_F]` of flat symbols.
//!
//! Balancing relations all evaluate to the zero vector, so comparing or
//! combining them only makes sense in the free module on flat symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::matroid::GroundSet;
use crate::set::ElementSet;
use crate::vector::{format_rational, RationalVector};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct FlatCombination {
    coeffs: BTreeMap<ElementSet, BigRational>,
}

impl FlatCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(set: ElementSet) -> Self {
        let mut c = Self::new();
        c.add(set, &BigRational::from_integer(1.into()));
        c
    }

    /// Adds `c · [e_set]`, dropping the symbol if its coefficient cancels.
    pub fn add(&mut self, set: ElementSet, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(set).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&set);
        }
    }

    pub fn add_combination(&mut self, other: &FlatCombination, scale: &BigRational) {
        for (&s, c) in &other.coeffs {
            self.add(s, &(c * scale));
        }
    }

    pub fn negated(&self) -> Self {
        FlatCombination { coeffs: self.coeffs.iter().map(|(&s, c)| (s, -c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, set: ElementSet) -> BigRational {
        self.coeffs.get(&set).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementSet, &BigRational)> {
        self.coeffs.iter().map(|(&s, c)| (s, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The vector `Σ c_F e_F ∈ Q^n`.
    pub fn evaluate(&self, n: usize) -> RationalVector {
        let mut v = RationalVector::zeros(n);
        for (&s, c) in &self.coeffs {
            v.add_indicator(s, c);
        }
        v
    }

    pub fn display<'a>(&'a self, ground: &'a GroundSet) -> impl fmt::Display + 'a {
        DisplayCombination { comb: self, ground }
    }
}

impl FromIterator<(ElementSet, i64)> for FlatCombination {
    fn from_iter<I: IntoIterator<Item = (ElementSet, i64)>>(iter: I) -> Self {
        let mut c = FlatCombination::new();
        for (s, k) in iter {
            c.add(s, &BigRational::from_integer(k.into()));
        }
        c
    }
}

impl fmt::Debug for FlatCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter().map(|(s, c)| (s, format_rational(c)))).finish()
    }
}

struct DisplayCombination<'a> {
    comb: &'a FlatCombination,
    ground: &'a GroundSet,
}

impl fmt::Display for DisplayCombination<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comb.is_zero() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.comb.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·e{}", format_rational(c), self.ground.format_set(s))?;
        }
        Ok(())
    }
}
