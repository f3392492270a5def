//! Standard examples: cotangent groupoids of `ℝⁿ`, the pair groupoid of the
//! symplectic plane, and the unit groupoid of a Dirac manifold.

use crate::chart::{spread_samples, FiberChart};
use crate::dirac::DiracStructure;
use crate::error::Result;
use crate::exterior::{DifferentialForm, Patch, SmoothMap};
use crate::groupoid::{DLieGroupoid, GaugePair, GroupoidPresentation};
use crate::symbolic::ScalarExpr;

const SAMPLES: usize = 6;

fn patch(name: &str, coords: &[String]) -> Result<Patch> {
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    Patch::new(name, &refs, spread_samples(coords.len(), SAMPLES), vec![])
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn exprs(names: &[String]) -> Vec<ScalarExpr> {
    names.iter().map(|n| ScalarExpr::var(n)).collect()
}

fn cat<T: Clone>(parts: &[&[T]]) -> Vec<T> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// `T*ℝⁿ ⇉ ℝⁿ` with coordinates `x_i, xi_i`, source and target the base
/// point and multiplication fiberwise addition.
pub fn cotangent_presentation(n: usize) -> Result<GroupoidPresentation> {
    let x = names("x", n);
    let xi = names("xi", n);
    let (a, b, c) = (names("a", n), names("b", n), names("c", n));
    let m = patch("M", &x)?;
    let g = patch("G", &cat(&[&x, &xi]))?;
    let g2 = patch("G2", &cat(&[&x, &a, &b]))?;
    let g3 = patch("G3", &cat(&[&x, &a, &b, &c]))?;
    let (ex, exi) = (exprs(&x), exprs(&xi));
    let (ea, eb, ec) = (exprs(&a), exprs(&b), exprs(&c));
    let zero = vec![ScalarExpr::zero(); n];
    let s = SmoothMap::new(&g, &m, ex.clone())?;
    let t = s.clone();
    let u = SmoothMap::new(&m, &g, cat(&[&ex, &zero]))?;
    let neg: Vec<ScalarExpr> = exi.iter().map(|e| -e).collect();
    let i = SmoothMap::new(&g, &g, cat(&[&ex, &neg]))?;
    let pr1 = SmoothMap::new(&g2, &g, cat(&[&ex, &ea]))?;
    let pr2 = SmoothMap::new(&g2, &g, cat(&[&ex, &eb]))?;
    let sum: Vec<ScalarExpr> = ea.iter().zip(&eb).map(|(p, q)| p + q).collect();
    let mul = SmoothMap::new(&g2, &g, cat(&[&ex, &sum]))?;
    let pairs = FiberChart::new(pr1.clone(), pr2.clone(), s.clone(), t.clone())?;
    let q1 = SmoothMap::new(&g3, &g2, cat(&[&ex, &ea, &eb]))?;
    let q2 = SmoothMap::new(&g3, &g2, cat(&[&ex, &eb, &ec]))?;
    let triples = FiberChart::new(q1, q2, pr2, pr1)?;
    GroupoidPresentation::new(s, t, u, i, pairs, mul, triples)
}

/// `Σ dxi_i ∧ dx_i` on the cotangent groupoid.
pub fn canonical_form(g: &Patch, n: usize) -> Result<DifferentialForm> {
    let mut omega = DifferentialForm::zero(g, 2);
    for k in 0..n {
        omega = omega.add(&DifferentialForm::dx(g, n + k).wedge(&DifferentialForm::dx(g, k))?)?;
    }
    Ok(omega)
}

/// The cotangent groupoid of `ℝⁿ` with zero Poisson structure, target
/// aligned with `τ = Σ dxi_i ∧ dx_i`.
pub fn cotangent_groupoid(n: usize) -> Result<DLieGroupoid> {
    let p = cotangent_presentation(n)?;
    let tau = canonical_form(p.arrows(), n)?;
    let base = DiracStructure::cotangent(p.objects());
    let sigma = DifferentialForm::zero(p.arrows(), 2);
    DLieGroupoid::new(p, base, GaugePair::new(tau, sigma)?)
}

/// `ℝ² × ℝ² ⇉ ℝ²` with arrows `(x1, y1, x2, y2)` from `(x2, y2)` to
/// `(x1, y1)`.
pub fn pair_presentation() -> Result<GroupoidPresentation> {
    let pt = |k: usize| vec![format!("x{k}"), format!("y{k}")];
    let m = patch("M", &["x".to_string(), "y".to_string()])?;
    let g = patch("G", &cat(&[&pt(1), &pt(2)]))?;
    let g2 = patch("G2", &cat(&[&pt(1), &pt(2), &pt(3)]))?;
    let g3 = patch("G3", &cat(&[&pt(1), &pt(2), &pt(3), &pt(4)]))?;
    let e = |k: usize| exprs(&pt(k));
    let s = SmoothMap::new(&g, &m, e(2))?;
    let t = SmoothMap::new(&g, &m, e(1))?;
    let xy = exprs(&["x".to_string(), "y".to_string()]);
    let u = SmoothMap::new(&m, &g, cat(&[&xy, &xy]))?;
    let i = SmoothMap::new(&g, &g, cat(&[&e(2), &e(1)]))?;
    let pr1 = SmoothMap::new(&g2, &g, cat(&[&e(1), &e(2)]))?;
    let pr2 = SmoothMap::new(&g2, &g, cat(&[&e(2), &e(3)]))?;
    let mul = SmoothMap::new(&g2, &g, cat(&[&e(1), &e(3)]))?;
    let pairs = FiberChart::new(pr1.clone(), pr2.clone(), s.clone(), t.clone())?;
    let q1 = SmoothMap::new(&g3, &g2, cat(&[&e(1), &e(2), &e(3)]))?;
    let q2 = SmoothMap::new(&g3, &g2, cat(&[&e(2), &e(3), &e(4)]))?;
    let triples = FiberChart::new(q1, q2, pr2, pr1)?;
    GroupoidPresentation::new(s, t, u, i, pairs, mul, triples)
}

/// `dx ∧ dy` on the first two coordinates of a patch.
pub fn area_form(p: &Patch) -> Result<DifferentialForm> {
    DifferentialForm::dx(p, 0).wedge(&DifferentialForm::dx(p, 1))
}

/// The pair groupoid over `(ℝ², dx∧dy)` with gauge pair `(t*ω, s*ω)`.
pub fn pair_groupoid() -> Result<DLieGroupoid> {
    let p = pair_presentation()?;
    let omega = area_form(p.objects())?;
    let base = DiracStructure::from_two_form(&omega)?;
    let tau = omega.pullback(p.t())?;
    let sigma = omega.pullback(p.s())?;
    DLieGroupoid::new(p, base, GaugePair::new(tau, sigma)?)
}

/// `M ⇉ M` with every structure map the identity and zero gauge pair.
pub fn unit_groupoid(base: &DiracStructure) -> Result<DLieGroupoid> {
    let m = base.patch().clone();
    let id = SmoothMap::identity(&m);
    let pairs = FiberChart::new(id.clone(), id.clone(), id.clone(), id.clone())?;
    let triples = FiberChart::new(id.clone(), id.clone(), id.clone(), id.clone())?;
    let p = GroupoidPresentation::new(
        id.clone(),
        id.clone(),
        id.clone(),
        id.clone(),
        pairs,
        id.clone(),
        triples,
    )?;
    let zero = DifferentialForm::zero(&m, 2);
    DLieGroupoid::new(p, base.clone(), GaugePair::new(zero.clone(), zero)?)
}
