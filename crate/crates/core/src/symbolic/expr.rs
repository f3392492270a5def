//! Rational functions in canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{poly_gcd, Poly, Rational, RationalPoint, SymbolicError, Var};

/// A quotient `num / den` of polynomials, kept reduced: numerator and
/// denominator are coprime and the denominator has leading coefficient one.
/// Structural equality therefore coincides with equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ScalarExpr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ScalarExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        ScalarExpr::constant(super::rat(n))
    }

    pub fn var(name: &str) -> Self {
        ScalarExpr::from_poly(Poly::var(Var::new(name)))
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds and normalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Ok(normalize_parts(num, den))
    }

    /// Canonical representative of an arbitrary quotient.
    pub fn normalize(num: &Poly, den: &Poly) -> Result<Self, SymbolicError> {
        ScalarExpr::new(num.clone(), den.clone())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn scale(&self, c: &Rational) -> ScalarExpr {
        if c.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<ScalarExpr, SymbolicError> {
        ScalarExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &ScalarExpr) -> Result<ScalarExpr, SymbolicError> {
        if rhs.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> ScalarExpr {
        ScalarExpr {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Exact partial derivative.
    pub fn differentiate(&self, v: &Var) -> ScalarExpr {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return ScalarExpr::from_poly(dn);
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return normalize_parts(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        normalize_parts(top, &self.den * &self.den)
    }

    /// Replaces variables by expressions. Variables without an image stay.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<Var, ScalarExpr>,
    ) -> Result<ScalarExpr, SymbolicError> {
        let n = subst_poly(&self.num, assignment);
        if self.den.is_one() {
            return Ok(n);
        }
        let d = subst_poly(&self.den, assignment);
        n.checked_div(&d)
    }

    /// Exact value at a point. The expression is already canonical, so removable
    /// singularities have been cancelled before evaluation.
    pub fn evaluate(&self, p: &RationalPoint) -> Result<Rational, SymbolicError> {
        let d = self.den.evaluate(p)?;
        if d.is_zero() {
            return Err(SymbolicError::PoleAtPoint(p.to_string()));
        }
        Ok(self.num.evaluate(p)? / d)
    }

    /// Renames variables.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> ScalarExpr {
        let a: BTreeMap<Var, Poly> = map
            .iter()
            .map(|(k, v)| (k.clone(), Poly::var(v.clone())))
            .collect();
        ScalarExpr {
            num: self.num.substitute(&a),
            den: self.den.substitute(&a),
        }
    }
}

fn subst_poly(p: &Poly, assignment: &BTreeMap<Var, ScalarExpr>) -> ScalarExpr {
    let polynomial = assignment.values().all(|e| e.is_polynomial());
    if polynomial {
        let a: BTreeMap<Var, Poly> = assignment
            .iter()
            .map(|(k, v)| (k.clone(), v.num.clone()))
            .collect();
        return ScalarExpr::from_poly(p.substitute(&a));
    }
    // Horner-free expansion term by term; denominators are combined as we go.
    let mut acc = ScalarExpr::zero();
    let mut cache: BTreeMap<(Var, u32), ScalarExpr> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut t = ScalarExpr::constant(c.clone());
        for (v, e) in m.powers() {
            let f = match assignment.get(v) {
                Some(img) => cache
                    .entry((v.clone(), *e))
                    .or_insert_with(|| img.pow(*e))
                    .clone(),
                None => ScalarExpr::from_poly(Poly::var(v.clone()).pow(*e)),
            };
            t = &t * &f;
        }
        acc = &acc + &t;
    }
    acc
}

fn normalize_parts(num: Poly, den: Poly) -> ScalarExpr {
    if num.is_zero() {
        return ScalarExpr::zero();
    }
    if let Some(c) = den.constant_value() {
        return ScalarExpr {
            num: num.scale(&c.recip()),
            den: Poly::one(),
        };
    }
    let g = poly_gcd(&num, &den);
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (
            num.div_exact(&g).expect("gcd divides numerator"),
            den.div_exact(&g).expect("gcd divides denominator"),
        )
    };
    let lc = den.leading_coefficient();
    let inv = lc.recip();
    ScalarExpr {
        num: num.scale(&inv),
        den: den.scale(&inv),
    }
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl From<Poly> for ScalarExpr {
    fn from(p: Poly) -> Self {
        ScalarExpr::from_poly(p)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(c: Rational) -> Self {
        ScalarExpr::constant(c)
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return ScalarExpr::from_poly(&self.num + &rhs.num);
            }
            return normalize_parts(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        normalize_parts(num, &self.den * &rhs.den)
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarExpr::from_poly(&self.num * &rhs.num);
        }
        normalize_parts(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`ScalarExpr::checked_div`] otherwise.
impl Div for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $f(self, rhs: ScalarExpr) -> ScalarExpr {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}
