//! Exact vectors in `Q^E` and the `p/q` text encoding of rationals.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Formats a rational as `p` or `p/q` (lowest terms, positive denominator).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![BigRational::zero(); n])
    }

    /// The indicator vector `e_F`.
    pub fn indicator(set: ElementSet, n: usize) -> Self {
        RationalVector((0..n).map(|e| if set.contains(e) { BigRational::one() } else { BigRational::zero() }).collect())
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        RationalVector(values.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
    }

    /// Parses a comma-separated list such as `2,1,0,0` or `1/2,0,0,0`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::Parse("empty point".into()));
        }
        s.split(',').map(parse_rational).collect::<Result<Vec<_>>>().map(RationalVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigRational> {
        self.0
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalVector(self.0.iter().map(|x| x * c).collect())
    }

    /// `self += c * e_F`.
    pub fn add_indicator(&mut self, set: ElementSet, c: &BigRational) {
        for e in set {
            self.0[e] += c;
        }
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, found: self.len() })
        }
    }
}

impl From<Vec<BigRational>> for RationalVector {
    fn from(v: Vec<BigRational>) -> Self {
        RationalVector(v)
    }
}

impl Index<usize> for RationalVector {
    type Output = BigRational;

    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.len(), rhs.len());
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.len(), rhs.len());
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&format_rational(x))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(a ⊙ x) ⊕ (b ⊙ y)` in the min-plus semiring: coordinates `min(a + x_i, b + y_i)`.
pub fn tropical_combine(
    a: &BigRational,
    x: &RationalVector,
    b: &BigRational,
    y: &RationalVector,
) -> Result<RationalVector> {
    y.check_len(x.len())?;
    Ok(RationalVector(x.0.iter().zip(&y.0).map(|(xi, yi)| std::cmp::min(a + xi, b + yi)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_text_roundtrip() {
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(format_rational(&q(-4, 2)), "-2");
        assert_eq!(format_rational(&q(0, 5)), "0");
        assert_eq!(parse_rational(" -3/6 ").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn parse_point() {
        let v = RationalVector::parse("1/2,0,0,0").unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], q(1, 2));
        assert!(RationalVector::parse("").is_err());
    }

    #[test]
    fn indicator_vectors() {
        let f: ElementSet = [0, 1].into_iter().collect();
        assert_eq!(RationalVector::indicator(f, 4), RationalVector::from_integers([1, 1, 0, 0]));
        assert!(RationalVector::indicator(ElementSet::empty(), 4).is_zero());
        assert_eq!(RationalVector::indicator(ElementSet::full(4), 4), RationalVector::from_integers([1, 1, 1, 1]));
    }

    #[test]
    fn tropical_combination_examples() {
        let x = RationalVector::from_integers([1, 2]);
        let y = RationalVector::from_integers([2, 1]);
        let zero = BigRational::zero();
        assert_eq!(tropical_combine(&zero, &x, &zero, &y).unwrap(), RationalVector::from_integers([1, 1]));
        let z = RationalVector::zeros(2);
        assert_eq!(tropical_combine(&zero, &z, &q(5, 1), &z).unwrap(), z);
        assert!(matches!(
            tropical_combine(&zero, &x, &zero, &RationalVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
