//! Exact scalar arithmetic: rationals, polynomials and rational functions.

mod expr;
mod gcd;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

pub use expr::ScalarExpr;
pub use gcd::poly_gcd;
pub use poly::{Monomial, Poly, Var};

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("denominator vanishes at {0}")]
    PoleAtPoint(String),
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
}

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Builds the rational `n/d`. Panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A point with rational coordinates, keyed by variable name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalPoint {
    coords: BTreeMap<Var, Rational>,
}

impl RationalPoint {
    pub fn new() -> Self {
        RationalPoint::default()
    }

    pub fn from_pairs<I, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (V, Rational)>,
        V: Into<Var>,
    {
        RationalPoint {
            coords: pairs.into_iter().map(|(v, q)| (v.into(), q)).collect(),
        }
    }

    /// Zips coordinate names with values.
    pub fn from_coords(vars: &[Var], values: &[Rational]) -> Self {
        RationalPoint {
            coords: vars.iter().cloned().zip(values.iter().cloned()).collect(),
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Rational> {
        self.coords.get(v)
    }

    pub fn insert(&mut self, v: Var, q: Rational) {
        self.coords.insert(v, q);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Rational)> {
        self.coords.iter()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Values in the order of `vars`.
    pub fn values_for(&self, vars: &[Var]) -> Result<Vec<Rational>, SymbolicError> {
        vars.iter()
            .map(|v| {
                self.get(v)
                    .cloned()
                    .ok_or_else(|| SymbolicError::MissingVariable(v.name().to_string()))
            })
            .collect()
    }

    /// Merges two points; entries of `other` win on clashes.
    pub fn merged(&self, other: &RationalPoint) -> RationalPoint {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().map(|(k, v)| (k.clone(), v.clone())));
        RationalPoint { coords }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (v, q)) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={q}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
