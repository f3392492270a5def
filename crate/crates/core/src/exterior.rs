//! Coordinate patches, polynomial maps, vector fields and differential forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{ExprMatrix, Matrix, QMatrix};
use crate::symbolic::{Rational, RationalPoint, ScalarExpr, Var};

struct PatchData {
    name: String,
    coords: Vec<Var>,
    samples: Vec<RationalPoint>,
    constraints: Vec<ScalarExpr>,
}

/// An open subset of affine space: named coordinates, the sample points used
/// for pointwise checks, and polynomials required to be nonzero.
#[derive(Clone)]
pub struct Patch(Arc<PatchData>);

impl Patch {
    pub fn new(
        name: &str,
        coords: &[&str],
        samples: Vec<Vec<Rational>>,
        constraints: Vec<ScalarExpr>,
    ) -> Result<Patch> {
        let coords: Vec<Var> = coords.iter().map(|c| Var::new(c)).collect();
        let points = samples
            .iter()
            .map(|s| {
                if s.len() != coords.len() {
                    return Err(Error::InvalidPatch {
                        patch: name.to_string(),
                        reason: format!(
                            "sample has {} values for {} coordinates",
                            s.len(),
                            coords.len()
                        ),
                    });
                }
                Ok(RationalPoint::from_coords(&coords, s))
            })
            .collect::<Result<Vec<_>>>()?;
        Patch::with_points(name, coords, points, constraints)
    }

    pub fn with_points(
        name: &str,
        coords: Vec<Var>,
        samples: Vec<RationalPoint>,
        constraints: Vec<ScalarExpr>,
    ) -> Result<Patch> {
        let invalid = |reason: String| Error::InvalidPatch {
            patch: name.to_string(),
            reason,
        };
        let mut seen = BTreeSet::new();
        for c in &coords {
            if !seen.insert(c.clone()) {
                return Err(invalid(format!("duplicate coordinate `{c}`")));
            }
        }
        if samples.is_empty() {
            return Err(invalid("no sample points".into()));
        }
        for c in &constraints {
            if let Some(v) = c.vars().iter().find(|v| !seen.contains(*v)) {
                return Err(invalid(format!("constraint mentions unknown variable `{v}`")));
            }
        }
        let mut distinct = BTreeSet::new();
        for s in &samples {
            if s.len() != coords.len() || coords.iter().any(|c| s.get(c).is_none()) {
                return Err(invalid(format!("sample {s} does not match the coordinates")));
            }
            for c in &constraints {
                let v = c.evaluate(s)?;
                if v.is_zero() {
                    return Err(invalid(format!("sample {s} violates constraint {c} != 0")));
                }
            }
            if !distinct.insert(s.clone()) {
                return Err(invalid(format!("repeated sample {s}")));
            }
        }
        Ok(Patch(Arc::new(PatchData {
            name: name.to_string(),
            coords,
            samples,
            constraints,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn coords(&self) -> &[Var] {
        &self.0.coords
    }

    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn samples(&self) -> &[RationalPoint] {
        &self.0.samples
    }

    pub fn constraints(&self) -> &[ScalarExpr] {
        &self.0.constraints
    }

    pub fn index_of(&self, v: &Var) -> Option<usize> {
        self.0.coords.iter().position(|c| c == v)
    }

    pub fn coord(&self, i: usize) -> ScalarExpr {
        ScalarExpr::var(self.0.coords[i].name())
    }

    /// True when every constraint is nonzero at `p`.
    pub fn admits(&self, p: &RationalPoint) -> Result<bool> {
        for c in self.constraints() {
            if c.evaluate(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same data under a different sample set.
    pub fn with_samples(&self, samples: Vec<RationalPoint>) -> Result<Patch> {
        Patch::with_points(
            self.name(),
            self.coords().to_vec(),
            samples,
            self.constraints().to_vec(),
        )
    }

    pub fn ensure_same(&self, other: &Patch) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::PatchMismatch {
                expected: self.name().to_string(),
                found: other.name().to_string(),
            })
        }
    }
}

impl PartialEq for Patch {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name && self.0.coords == other.0.coords)
    }
}

impl Eq for Patch {}

impl fmt::Debug for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Patch({} {:?})", self.name(), self.coords())
    }
}

/// A map between patches given by one rational expression per target
/// coordinate, written in the source coordinates.
#[derive(Clone, Debug)]
pub struct SmoothMap {
    source: Patch,
    target: Patch,
    components: Vec<ScalarExpr>,
}

impl SmoothMap {
    pub fn new(source: &Patch, target: &Patch, components: Vec<ScalarExpr>) -> Result<SmoothMap> {
        if components.len() != target.dim() {
            return Err(Error::InvalidMap(format!(
                "{} components for target `{}` of dimension {}",
                components.len(),
                target.name(),
                target.dim()
            )));
        }
        let allowed: BTreeSet<Var> = source.coords().iter().cloned().collect();
        for c in &components {
            if let Some(v) = c.vars().iter().find(|v| !allowed.contains(*v)) {
                return Err(Error::InvalidMap(format!(
                    "component {c} uses `{v}`, not a coordinate of `{}`",
                    source.name()
                )));
            }
        }
        let map = SmoothMap {
            source: source.clone(),
            target: target.clone(),
            components,
        };
        for s in source.samples() {
            let img = map.apply(s)?;
            if !target.admits(&img)? {
                return Err(Error::InvalidMap(format!(
                    "sample {s} maps to {img}, outside `{}`",
                    target.name()
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(p: &Patch) -> SmoothMap {
        SmoothMap {
            source: p.clone(),
            target: p.clone(),
            components: (0..p.dim()).map(|i| p.coord(i)).collect(),
        }
    }

    /// The map picking the listed source coordinates, in order.
    pub fn projection(source: &Patch, target: &Patch, indices: &[usize]) -> Result<SmoothMap> {
        SmoothMap::new(
            source,
            target,
            indices.iter().map(|&i| source.coord(i)).collect(),
        )
    }

    pub fn source(&self) -> &Patch {
        &self.source
    }

    pub fn target(&self) -> &Patch {
        &self.target
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    /// Target coordinate names mapped to their component expressions.
    pub fn assignment(&self) -> BTreeMap<Var, ScalarExpr> {
        self.target
            .coords()
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect()
    }

    /// `e ∘ self` for a function `e` on the target.
    pub fn pull_scalar(&self, e: &ScalarExpr) -> Result<ScalarExpr> {
        Ok(e.substitute(&self.assignment())?)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &SmoothMap) -> Result<SmoothMap> {
        if g.target != self.source {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose `{}` after a map into `{}`",
                self.source.name(),
                g.target.name()
            )));
        }
        let a = g.assignment();
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&a))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(SmoothMap {
            source: g.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// Jacobian matrix, target dimension by source dimension.
    pub fn jacobian(&self) -> ExprMatrix {
        let mut j = Matrix::zeros(self.target.dim(), self.source.dim());
        for (r, c) in self.components.iter().enumerate() {
            for (k, v) in self.source.coords().iter().enumerate() {
                j.set(r, k, c.differentiate(v));
            }
        }
        j
    }

    pub fn jacobian_at(&self, p: &RationalPoint) -> Result<QMatrix> {
        Ok(self.jacobian().evaluate(p)?)
    }

    pub fn apply(&self, p: &RationalPoint) -> Result<RationalPoint> {
        let values = self
            .components
            .iter()
            .map(|c| c.evaluate(p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RationalPoint::from_coords(self.target.coords(), &values))
    }

    /// Component indices where the two maps differ, with the differences.
    pub fn differences(&self, other: &SmoothMap) -> Vec<(usize, ScalarExpr)> {
        self.components
            .iter()
            .zip(&other.components)
            .enumerate()
            .filter_map(|(i, (a, b))| {
                let d = a - b;
                (!d.is_zero()).then_some((i, d))
            })
            .collect()
    }

    pub fn same_as(&self, other: &SmoothMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.differences(other).is_empty()
    }

    pub fn with_endpoints(&self, source: &Patch, target: &Patch) -> Result<SmoothMap> {
        SmoothMap::new(source, target, self.components.clone())
    }
}

/// A vector field `Σ X_i ∂_i` on a patch.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    patch: Patch,
    components: Vec<ScalarExpr>,
}

impl VectorField {
    pub fn new(patch: &Patch, components: Vec<ScalarExpr>) -> Result<VectorField> {
        if components.len() != patch.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector field with {} components on `{}` of dimension {}",
                components.len(),
                patch.name(),
                patch.dim()
            )));
        }
        Ok(VectorField {
            patch: patch.clone(),
            components,
        })
    }

    pub fn zero(patch: &Patch) -> VectorField {
        VectorField {
            patch: patch.clone(),
            components: vec![ScalarExpr::zero(); patch.dim()],
        }
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(patch: &Patch, i: usize) -> VectorField {
        let mut v = VectorField::zero(patch);
        v.components[i] = ScalarExpr::one();
        v
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &ScalarExpr) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for (c, v) in self.components.iter().zip(self.patch.coords()) {
            if c.is_zero() {
                continue;
            }
            let d = f.differentiate(v);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.patch.ensure_same(&other.patch)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| &self.apply(b) - &other.apply(a))
            .collect();
        Ok(VectorField {
            patch: self.patch.clone(),
            components,
        })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.patch.ensure_same(&other.patch)?;
        Ok(VectorField {
            patch: self.patch.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, f: &ScalarExpr) -> VectorField {
        VectorField {
            patch: self.patch.clone(),
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn neg(&self) -> VectorField {
        self.scale(&ScalarExpr::int(-1))
    }

    pub fn evaluate(&self, p: &RationalPoint) -> Result<Vec<Rational>> {
        Ok(self
            .components
            .iter()
            .map(|c| c.evaluate(p))
            .collect::<std::result::Result<Vec<_>, _>>()?)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.components.iter().zip(self.patch.coords()) {
            if c.is_zero() {
                continue;
            }
            let term = format!("{}d/d{v}", coefficient_prefix(c));
            match (first, term.strip_prefix('-')) {
                (true, _) => f.write_str(&term)?,
                (false, Some(rest)) => write!(f, " - {rest}")?,
                (false, None) => write!(f, " + {term}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A differential form `Σ a_I dx_I` over strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    patch: Patch,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ScalarExpr>,
}

/// Sorts `idx` in place; returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl DifferentialForm {
    pub fn zero(patch: &Patch, degree: usize) -> DifferentialForm {
        DifferentialForm {
            patch: patch.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn function(patch: &Patch, f: ScalarExpr) -> DifferentialForm {
        let mut out = DifferentialForm::zero(patch, 0);
        out.add_term(vec![], f);
        out
    }

    /// The coordinate differential `dx_i`.
    pub fn dx(patch: &Patch, i: usize) -> DifferentialForm {
        let mut out = DifferentialForm::zero(patch, 1);
        out.add_term(vec![i], ScalarExpr::one());
        out
    }

    /// Sum of `coef * dx_{i1} ∧ ... ∧ dx_{ik}` over arbitrary index lists.
    pub fn from_terms(
        patch: &Patch,
        degree: usize,
        terms: Vec<(Vec<usize>, ScalarExpr)>,
    ) -> Result<DifferentialForm> {
        if degree > patch.dim() {
            return Err(Error::ShapeMismatch(format!(
                "degree {degree} exceeds dimension {} of `{}`",
                patch.dim(),
                patch.name()
            )));
        }
        let mut out = DifferentialForm::zero(patch, degree);
        for (mut idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= patch.dim()) {
                return Err(Error::ShapeMismatch(format!(
                    "index tuple {idx:?} for a {degree}-form on `{}`",
                    patch.name()
                )));
            }
            if let Some(neg) = sort_with_sign(&mut idx) {
                out.add_term(idx, if neg { -&c } else { c });
            }
        }
        Ok(out)
    }

    /// 1-form with the given components.
    pub fn one_form(patch: &Patch, components: Vec<ScalarExpr>) -> Result<DifferentialForm> {
        if components.len() != patch.dim() {
            return Err(Error::ShapeMismatch(format!(
                "1-form with {} components on `{}` of dimension {}",
                components.len(),
                patch.name(),
                patch.dim()
            )));
        }
        let mut out = DifferentialForm::zero(patch, 1);
        for (i, c) in components.into_iter().enumerate() {
            out.add_term(vec![i], c);
        }
        Ok(out)
    }

    /// 2-form from the matrix of its flat map: `B[j][i] = β(∂_i, ∂_j)`.
    pub fn from_skew_matrix(patch: &Patch, b: &ExprMatrix) -> Result<DifferentialForm> {
        if b.rows() != patch.dim() || b.cols() != patch.dim() {
            return Err(Error::ShapeMismatch("2-form matrix size".into()));
        }
        if !b.is_skew() {
            return Err(Error::NotSkew);
        }
        let mut out = DifferentialForm::zero(patch, 2);
        for i in 0..patch.dim() {
            for j in i + 1..patch.dim() {
                out.add_term(vec![i, j], b.get(j, i).clone());
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, idx: Vec<usize>, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarExpr)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> ScalarExpr {
        self.coeffs.get(idx).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_shape(&self, other: &DifferentialForm) -> Result<()> {
        self.patch.ensure_same(&other.patch)?;
        if self.degree != other.degree {
            return Err(Error::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DifferentialForm {
        self.scale(&ScalarExpr::int(-1))
    }

    pub fn scale(&self, f: &ScalarExpr) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.patch, self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(i.clone(), c * f);
        }
        out
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.patch.ensure_same(&other.patch)?;
        let degree = self.degree + other.degree;
        let mut out = DifferentialForm::zero(&self.patch, degree);
        if degree > self.patch.dim() {
            return Ok(out);
        }
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let mut idx: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some(neg) = sort_with_sign(&mut idx) {
                    let c = a * b;
                    out.add_term(idx, if neg { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.patch, self.degree + 1);
        if self.degree >= self.patch.dim() {
            return out;
        }
        for (idx, a) in &self.coeffs {
            for (j, v) in self.patch.coords().iter().enumerate() {
                if idx.contains(&j) {
                    continue;
                }
                let da = a.differentiate(v);
                if da.is_zero() {
                    continue;
                }
                let mut full = Vec::with_capacity(idx.len() + 1);
                full.push(j);
                full.extend_from_slice(idx);
                let neg = sort_with_sign(&mut full).expect("distinct indices");
                out.add_term(full, if neg { -&da } else { da });
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }

    /// Errors with the rendered `d` of the form unless it is closed.
    pub fn ensure_closed(&self) -> Result<()> {
        let d = self.exterior_derivative();
        if d.is_zero() {
            Ok(())
        } else {
            Err(Error::NotClosed(d.to_string()))
        }
    }

    /// `f*` of a form on `f`'s target.
    pub fn pullback(&self, f: &SmoothMap) -> Result<DifferentialForm> {
        f.target().ensure_same(&self.patch)?;
        let src = f.source();
        let mut out = DifferentialForm::zero(src, self.degree);
        if self.is_zero() {
            return Ok(out);
        }
        let a = f.assignment();
        let mut differentials: BTreeMap<usize, DifferentialForm> = BTreeMap::new();
        for (idx, c) in &self.coeffs {
            let mut term = DifferentialForm::function(src, c.substitute(&a)?);
            for &i in idx {
                let di = differentials.entry(i).or_insert_with(|| {
                    DifferentialForm::function(src, f.components()[i].clone())
                        .exterior_derivative()
                });
                term = term.wedge(di)?;
                if term.is_zero() {
                    break;
                }
            }
            for (k, v) in term.coeffs {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    /// `ι_v` of a form of positive degree.
    pub fn interior_product(&self, v: &VectorField) -> Result<DifferentialForm> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        self.patch.ensure_same(v.patch())?;
        Ok(self.contract(v))
    }

    fn contract(&self, v: &VectorField) -> DifferentialForm {
        if self.degree == 0 {
            return DifferentialForm::zero(&self.patch, 0);
        }
        let mut out = DifferentialForm::zero(&self.patch, self.degree - 1);
        for (idx, a) in &self.coeffs {
            for (m, &i) in idx.iter().enumerate() {
                let vi = &v.components()[i];
                if vi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(m);
                let c = a * vi;
                out.add_term(rest, if m % 2 == 1 { -&c } else { c });
            }
        }
        out
    }

    /// `L_v = d ι_v + ι_v d`.
    pub fn lie_derivative(&self, v: &VectorField) -> Result<DifferentialForm> {
        self.patch.ensure_same(v.patch())?;
        let a = self.contract(v).exterior_derivative();
        let b = self.exterior_derivative().contract(v);
        if self.degree == 0 {
            return Ok(b);
        }
        a.add(&b)
    }

    /// `β♭(v) = ι_v β` for a 2-form β.
    pub fn flat(&self, v: &VectorField) -> Result<DifferentialForm> {
        if self.degree != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: self.degree,
            });
        }
        self.interior_product(v)
    }

    /// Components of a 1-form.
    pub fn one_form_components(&self) -> Result<Vec<ScalarExpr>> {
        if self.degree != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                found: self.degree,
            });
        }
        Ok((0..self.patch.dim())
            .map(|i| self.coefficient(&[i]))
            .collect())
    }

    /// `η(X)` for a 1-form η.
    pub fn pair(&self, v: &VectorField) -> Result<ScalarExpr> {
        let c = self.one_form_components()?;
        self.patch.ensure_same(v.patch())?;
        let mut acc = ScalarExpr::zero();
        for (a, b) in c.iter().zip(v.components()) {
            if !a.is_zero() && !b.is_zero() {
                acc = &acc + &(a * b);
            }
        }
        Ok(acc)
    }

    /// Value of a 0-form.
    pub fn function_value(&self) -> Result<ScalarExpr> {
        if self.degree != 0 {
            return Err(Error::WrongDegree {
                expected: 0,
                found: self.degree,
            });
        }
        Ok(self.coefficient(&[]))
    }

    /// Matrix of the flat map of a 2-form: column `i` holds `ι_{∂_i} β`.
    pub fn two_form_matrix(&self) -> Result<ExprMatrix> {
        if self.degree != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: self.degree,
            });
        }
        let n = self.patch.dim();
        let mut m = Matrix::zeros(n, n);
        for (idx, c) in &self.coeffs {
            let (i, j) = (idx[0], idx[1]);
            m.set(j, i, c.clone());
            m.set(i, j, -c);
        }
        Ok(m)
    }

    pub fn two_form_matrix_at(&self, p: &RationalPoint) -> Result<QMatrix> {
        Ok(self.two_form_matrix()?.evaluate(p)?)
    }

    /// Moves the form to another patch with the same coordinates.
    pub fn on_patch(&self, patch: &Patch) -> Result<DifferentialForm> {
        if patch.coords() != self.patch.coords() {
            return Err(Error::PatchMismatch {
                expected: patch.name().to_string(),
                found: self.patch.name().to_string(),
            });
        }
        Ok(DifferentialForm {
            patch: patch.clone(),
            degree: self.degree,
            coeffs: self.coeffs.clone(),
        })
    }
}

fn coefficient_prefix(c: &ScalarExpr) -> String {
    if c.is_one() {
        return String::new();
    }
    if (-c).is_one() {
        return "-".into();
    }
    let s = c.to_string();
    if c.is_polynomial() && c.numerator().num_terms() == 1 {
        format!("{s}*")
    } else {
        format!("({s})*")
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            let term = if idx.is_empty() {
                c.to_string()
            } else {
                let names: Vec<String> = idx
                    .iter()
                    .map(|&i| format!("d{}", self.patch.coords()[i]))
                    .collect();
                format!("{}{}", coefficient_prefix(c), names.join("^"))
            };
            match (k, term.strip_prefix('-')) {
                (0, _) => f.write_str(&term)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn plane(coords: &[&str]) -> Patch {
        let n = coords.len();
        Patch::new(
            "P",
            coords,
            vec![vec![rat(0); n], (1..=n as i64).map(rat).collect()],
            vec![],
        )
        .unwrap()
    }

    fn v(n: &str) -> ScalarExpr {
        ScalarExpr::var(n)
    }

    #[test]
    fn wedge_examples() {
        let p = plane(&["x", "y", "z"]);
        let (dx, dy, dz) = (
            DifferentialForm::dx(&p, 0),
            DifferentialForm::dx(&p, 1),
            DifferentialForm::dx(&p, 2),
        );
        let area = dx.wedge(&dy).unwrap();
        assert_eq!(area.coefficient(&[0, 1]), ScalarExpr::one());
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let xdy = dy.scale(&v("x"));
        assert_eq!(xdy.wedge(&dz).unwrap().coefficient(&[1, 2]), v("x"));
        assert_eq!(dy.wedge(&dx).unwrap(), area.neg());
    }

    #[test]
    fn derivative_examples() {
        let p = plane(&["x", "y"]);
        let xdy = DifferentialForm::dx(&p, 1).scale(&v("x"));
        let area = DifferentialForm::dx(&p, 0)
            .wedge(&DifferentialForm::dx(&p, 1))
            .unwrap();
        assert_eq!(xdy.exterior_derivative(), area);
        assert!(area.exterior_derivative().is_zero());
        let x2 = DifferentialForm::function(&p, v("x").pow(2));
        assert_eq!(
            x2.exterior_derivative(),
            DifferentialForm::dx(&p, 0).scale(&v("x").scale(&rat(2)))
        );
    }

    #[test]
    fn pullback_examples() {
        let line = plane(&["u"]);
        let p = plane(&["x", "y"]);
        let uv = plane(&["u", "v"]);
        let area = DifferentialForm::dx(&p, 0)
            .wedge(&DifferentialForm::dx(&p, 1))
            .unwrap();
        let incl = SmoothMap::new(&line, &p, vec![v("u"), ScalarExpr::zero()]).unwrap();
        assert!(area.pullback(&incl).unwrap().is_zero());
        assert_eq!(area.pullback(&SmoothMap::identity(&p)).unwrap(), area);
        let f = SmoothMap::new(&uv, &p, vec![&v("u") + &v("v"), &v("u") - &v("v")]).unwrap();
        let pulled = area.pullback(&f).unwrap();
        assert_eq!(pulled.coefficient(&[0, 1]), ScalarExpr::int(-2));
    }

    #[test]
    fn interior_and_lie() {
        let p = plane(&["x", "y"]);
        let area = DifferentialForm::dx(&p, 0)
            .wedge(&DifferentialForm::dx(&p, 1))
            .unwrap();
        let ex = VectorField::coordinate(&p, 0);
        let ey = VectorField::coordinate(&p, 1);
        assert_eq!(area.interior_product(&ex).unwrap(), DifferentialForm::dx(&p, 1));
        assert_eq!(area.interior_product(&ey).unwrap(), DifferentialForm::dx(&p, 0).neg());
        let xex = ex.scale(&v("x"));
        assert!(DifferentialForm::dx(&p, 1).interior_product(&xex).unwrap().is_zero());
        assert_eq!(
            DifferentialForm::function(&p, v("x")).interior_product(&ex),
            Err(Error::DegreeZero)
        );

        let xdy = DifferentialForm::dx(&p, 1).scale(&v("x"));
        assert_eq!(xdy.lie_derivative(&ex).unwrap(), DifferentialForm::dx(&p, 1));
        assert!(DifferentialForm::dx(&p, 1).lie_derivative(&ex).unwrap().is_zero());
        assert_eq!(
            DifferentialForm::dx(&p, 0).lie_derivative(&xex).unwrap(),
            DifferentialForm::dx(&p, 0)
        );
    }

    #[test]
    fn flat_examples() {
        let p = plane(&["xi", "x"]);
        let form = DifferentialForm::dx(&p, 0)
            .wedge(&DifferentialForm::dx(&p, 1))
            .unwrap();
        let exi = VectorField::coordinate(&p, 0);
        assert_eq!(form.flat(&exi).unwrap(), DifferentialForm::dx(&p, 1));
        assert!(DifferentialForm::zero(&p, 2).flat(&exi).unwrap().is_zero());
        assert!(matches!(
            DifferentialForm::dx(&p, 0).flat(&exi),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn matrix_convention() {
        let p = plane(&["x", "y"]);
        let area = DifferentialForm::dx(&p, 0)
            .wedge(&DifferentialForm::dx(&p, 1))
            .unwrap();
        let b = area.two_form_matrix().unwrap();
        assert_eq!(b.column(0), vec![ScalarExpr::zero(), ScalarExpr::one()]);
        assert_eq!(DifferentialForm::from_skew_matrix(&p, &b).unwrap(), area);
    }

    #[test]
    fn rendering() {
        let p = plane(&["x", "y"]);
        let f = DifferentialForm::dx(&p, 0)
            .wedge(&DifferentialForm::dx(&p, 1))
            .unwrap()
            .scale(&(&v("x") + &v("y")).scale(&rat(-1)));
        assert_eq!(f.to_string(), "(-x - y)*dx^dy");
        assert_eq!(DifferentialForm::dx(&p, 1).scale(&v("y").scale(&rat(-1))).to_string(), "-y*dy");
    }
}
