//! Morphisms `(f, β)` between Dirac manifolds, their composition, diagrams
//! with gauge equations, fiber products and the universal arrow.

use crate::dirac::{
    backward_image_at, backward_image_generic, transversality_report, DiracStructure,
};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap};
use crate::linear_dirac::LinearDiracSpace;
use crate::report::CheckReport;

/// A smooth map with a closed gauge 2-form on its source, subject to
/// `f*L_target = L_source + β`.
#[derive(Clone, Debug)]
pub struct DManMorphism {
    map: SmoothMap,
    gauge: DifferentialForm,
    source: DiracStructure,
    target: DiracStructure,
}

impl DManMorphism {
    pub fn new(
        map: SmoothMap,
        gauge: DifferentialForm,
        source: DiracStructure,
        target: DiracStructure,
    ) -> Result<Self> {
        map.source().ensure_same(source.patch())?;
        map.target().ensure_same(target.patch())?;
        map.source().ensure_same(gauge.patch())?;
        if gauge.degree() != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: gauge.degree(),
            });
        }
        gauge.ensure_closed()?;
        Ok(DManMorphism {
            map,
            gauge,
            source,
            target,
        })
    }

    /// `(Id, 0)`.
    pub fn identity(l: &DiracStructure) -> Self {
        DManMorphism {
            map: SmoothMap::identity(l.patch()),
            gauge: DifferentialForm::zero(l.patch(), 2),
            source: l.clone(),
            target: l.clone(),
        }
    }

    /// `(Id, β): (M, L) → (M, L + β)`.
    pub fn gauge_transformation(l: &DiracStructure, beta: &DifferentialForm) -> Result<Self> {
        let target = l.gauge_transform(beta)?;
        DManMorphism::new(SmoothMap::identity(l.patch()), beta.clone(), l.clone(), target)
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn gauge(&self) -> &DifferentialForm {
        &self.gauge
    }

    pub fn source(&self) -> &DiracStructure {
        &self.source
    }

    pub fn target(&self) -> &DiracStructure {
        &self.target
    }

    /// `self ∘ f`, i.e. `(g, β) ∘ (f, α) = (g ∘ f, f*β + α)`.
    pub fn compose(&self, f: &DManMorphism) -> Result<DManMorphism> {
        if !same_dirac(&f.target, &self.source) {
            return Err(Error::EndpointMismatch(format!(
                "target of the first morphism on `{}` is not the source on `{}`",
                f.target.patch().name(),
                self.source.patch().name()
            )));
        }
        let map = self.map.compose(&f.map)?;
        let gauge = self.gauge.pullback(&f.map)?.add(&f.gauge)?;
        Ok(DManMorphism {
            map,
            gauge,
            source: f.source.clone(),
            target: self.target.clone(),
        })
    }
}

/// Whether two structures coincide: structurally, or as subspaces at the
/// generic point.
pub fn same_dirac(a: &DiracStructure, b: &DiracStructure) -> bool {
    if a == b {
        return true;
    }
    if a.patch() != b.patch() {
        return false;
    }
    matches!(a.pairing_residual(b), Ok(None)) && a.generic_rank_full() && b.generic_rank_full()
}

/// Checks `f*L_target = L_source + β` at the generic point and at samples.
pub fn check_law(
    map: &SmoothMap,
    gauge: &DifferentialForm,
    source: &DiracStructure,
    target: &DiracStructure,
    id: &str,
) -> CheckReport {
    let title = "pullback of the target equals the gauged source";
    let shifted = match source.gauge_transform(gauge) {
        Ok(s) => s,
        Err(e) => return CheckReport::fail(id, title).with_note(e.to_string()),
    };
    let mut children = Vec::new();
    let gid = format!("{id}/generic");
    let gtitle = "equal at the generic point";
    children.push(match backward_image_generic(map, target) {
        Ok(pulled) => match pulled.pairing_residual(&shifted) {
            Ok(None) => CheckReport::check(
                gid,
                gtitle,
                pulled.generic_rank_full() && shifted.generic_rank_full(),
            ),
            Ok(Some((i, j, r))) => CheckReport::fail(gid, gtitle)
                .with_residual(r.to_string())
                .with_note(format!("pairing of pulled-back section {i} with gauged section {j}")),
            Err(e) => CheckReport::fail(gid, gtitle).with_note(e.to_string()),
        },
        Err(e) => CheckReport::fail(gid, gtitle).with_note(e.to_string()),
    });
    for (k, s) in map.source().samples().iter().enumerate() {
        let cid = format!("{id}/sample-{k}");
        let r = (|| -> Result<bool> {
            let pulled = backward_image_at(map, target, s)?;
            let here = LinearDiracSpace::from_basis_unchecked(shifted.frame_matrix_at(s)?);
            Ok(here.basis().rank() == source.dim() && pulled.subspace_equal(&here)?)
        })();
        children.push(match r {
            Ok(ok) => CheckReport::check(cid, "equal at sample", ok).with_witness(s.to_string()),
            Err(e) => CheckReport::fail(cid, "equal at sample")
                .with_witness(s.to_string())
                .with_note(e.to_string()),
        });
    }
    CheckReport::node(id, title, children)
}

pub fn check_morphism(m: &DManMorphism, id: &str) -> CheckReport {
    let closed = CheckReport::check(format!("{id}/closed"), "gauge part is closed", m.gauge.is_closed());
    let trans = transversality_report(&m.map, &m.target, id);
    let law = check_law(&m.map, &m.gauge, &m.source, &m.target, &format!("{id}/law"));
    CheckReport::node(id, "Dirac morphism", vec![closed, trans, law])
}

/// `first`, then `second`, equals `composite`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub first: usize,
    pub second: usize,
    pub composite: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub edges: Vec<(String, DManMorphism)>,
    pub triangles: Vec<Triangle>,
}

impl Diagram {
    pub fn new() -> Self {
        Diagram::default()
    }

    pub fn edge(&mut self, name: &str, m: DManMorphism) -> usize {
        self.edges.push((name.to_string(), m));
        self.edges.len() - 1
    }

    pub fn triangle(&mut self, first: usize, second: usize, composite: usize) {
        self.triangles.push(Triangle {
            first,
            second,
            composite,
        });
    }
}

/// Residual `β1 + f1*β2 − β3` of a triangle's gauge equation.
pub fn triangle_residual(
    f1: &SmoothMap,
    beta1: &DifferentialForm,
    beta2: &DifferentialForm,
    beta3: &DifferentialForm,
) -> Result<DifferentialForm> {
    beta1.add(&beta2.pullback(f1)?)?.sub(beta3)
}

fn check_triangle(d: &Diagram, t: &Triangle, id: &str) -> CheckReport {
    let title = format!(
        "{} then {} equals {}",
        d.edges[t.first].0, d.edges[t.second].0, d.edges[t.composite].0
    );
    let (e1, e2, e3) = (&d.edges[t.first].1, &d.edges[t.second].1, &d.edges[t.composite].1);
    let smooth_id = format!("{id}/smooth");
    let smooth = match e2.map.compose(&e1.map) {
        Ok(c) if c.source() == e3.map.source() && c.target() == e3.map.target() => {
            let diffs = c.differences(&e3.map);
            match diffs.first() {
                None => CheckReport::pass(smooth_id, "underlying maps commute"),
                Some((i, r)) => CheckReport::fail(smooth_id, "underlying maps commute")
                    .with_residual(r.to_string())
                    .with_note(format!("component {i}")),
            }
        }
        Ok(_) => CheckReport::fail(smooth_id, "underlying maps commute").with_note("endpoints differ"),
        Err(e) => CheckReport::fail(smooth_id, "underlying maps commute").with_note(e.to_string()),
    };
    let gauge_id = format!("{id}/gauge");
    let gtitle = "gauge equation b1 + f1*b2 = b3";
    let gauge = match triangle_residual(&e1.map, &e1.gauge, &e2.gauge, &e3.gauge) {
        Ok(r) if r.is_zero() => CheckReport::pass(gauge_id, gtitle),
        Ok(r) => CheckReport::fail(gauge_id, gtitle).with_residual(r.to_string()),
        Err(e) => CheckReport::fail(gauge_id, gtitle).with_note(e.to_string()),
    };
    CheckReport::node(id, title, vec![smooth, gauge])
}

/// Smooth commutativity and the gauge equation of every triangle.
pub fn check_diagram(d: &Diagram, id: &str) -> CheckReport {
    let children = d
        .triangles
        .iter()
        .enumerate()
        .map(|(k, t)| check_triangle(d, t, &format!("{id}/triangle-{k}")))
        .collect();
    CheckReport::node(id, "diagram commutes", children)
}

/// The fiber product `M ×_X N` with its projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub f: DManMorphism,
    pub g: DManMorphism,
    pub dirac: DiracStructure,
    pub pr1: DManMorphism,
    pub pr2: DManMorphism,
}

impl FiberProduct {
    /// The commuting square as a diagram with diagonal `f ∘ pr1`.
    pub fn square(&self) -> Result<Diagram> {
        let mut d = Diagram::new();
        let p1 = d.edge("pr1", self.pr1.clone());
        let p2 = d.edge("pr2", self.pr2.clone());
        let f = d.edge("f", self.f.clone());
        let g = d.edge("g", self.g.clone());
        let diag = d.edge("diagonal", self.f.compose(&self.pr1)?);
        d.triangle(p1, f, diag);
        d.triangle(p2, g, diag);
        Ok(d)
    }
}

/// `L = (f∘pr1)*L_X − pr1*β − pr2*α` on the supplied chart, with gauge parts
/// `pr2*α` on `pr1` and `pr1*β` on `pr2`.
pub fn fiber_product(
    f: &DManMorphism,
    g: &DManMorphism,
    chart: &Patch,
    pr1: &SmoothMap,
    pr2: &SmoothMap,
    id: &str,
) -> Result<(FiberProduct, CheckReport)> {
    chart.ensure_same(pr1.source())?;
    chart.ensure_same(pr2.source())?;
    pr1.target().ensure_same(f.map.source())?;
    pr2.target().ensure_same(g.map.source())?;
    let fp1 = f.map.compose(pr1)?;
    let gp2 = g.map.compose(pr2)?;
    let diffs = fp1.differences(&gp2);
    if let Some((i, r)) = diffs.first() {
        return Err(Error::SquareDoesNotCommute(format!("component {i}: {r}")));
    }
    if !same_dirac(f.target(), g.target()) {
        return Err(Error::EndpointMismatch(
            "the two morphisms land in different Dirac structures".into(),
        ));
    }
    let beta_up = f.gauge.pullback(pr1)?;
    let alpha_up = g.gauge.pullback(pr2)?;
    let base = backward_image_generic(&fp1, f.target())?;
    let dirac = base.gauge_transform(&beta_up.add(&alpha_up)?.neg())?;
    let p1 = DManMorphism::new(pr1.clone(), alpha_up, dirac.clone(), f.source.clone())?;
    let p2 = DManMorphism::new(pr2.clone(), beta_up, dirac.clone(), g.source.clone())?;
    let fp = FiberProduct {
        f: f.clone(),
        g: g.clone(),
        dirac,
        pr1: p1,
        pr2: p2,
    };
    let mut children = vec![
        crate::dirac::check_dirac(&fp.dirac, &format!("{id}/dirac")),
        check_morphism(&fp.pr1, &format!("{id}/pr1")),
        check_morphism(&fp.pr2, &format!("{id}/pr2")),
    ];
    children.push(check_diagram(&fp.square()?, &format!("{id}/square")));
    let report = CheckReport::node(id, "fiber product", children);
    Ok((fp, report))
}

/// Completes `h1, h2` into `(k, κ): Y → M ×_X N`. The smooth map `k` is
/// supplied; `κ` comes from the triangle through `pr2`,
/// `κ = η2 − k*(pr1*β)`, and is cross-checked against the triangle through
/// `pr1`, `κ = η1 − k*(pr2*α)`.
pub fn universal_arrow(
    fp: &FiberProduct,
    h1: &DManMorphism,
    h2: &DManMorphism,
    k: &SmoothMap,
    id: &str,
) -> Result<(DManMorphism, CheckReport)> {
    let fh1 = fp.f.map.compose(&h1.map)?;
    let gh2 = fp.g.map.compose(&h2.map)?;
    if let Some((i, r)) = fh1.differences(&gh2).first() {
        return Err(Error::OuterSquareFails(format!("component {i}: {r}")));
    }
    let outer = h1
        .gauge
        .add(&fp.f.gauge.pullback(&h1.map)?)?
        .sub(&h2.gauge.add(&fp.g.gauge.pullback(&h2.map)?)?)?;
    if !outer.is_zero() {
        return Err(Error::GaugeEquationFails(outer.to_string()));
    }
    let kappa = h2.gauge.sub(&fp.pr2.gauge.pullback(k)?)?;
    let alt = h1.gauge.sub(&fp.pr1.gauge.pullback(k)?)?;
    let agree = kappa.sub(&alt)?;
    let mut agree_entry = CheckReport::check(
        format!("{id}/kappa-forms-agree"),
        "both triangle forms of the gauge agree",
        agree.is_zero(),
    );
    if !agree.is_zero() {
        agree_entry = agree_entry.with_residual(agree.to_string());
    }
    let arrow = DManMorphism::new(k.clone(), kappa, h1.source.clone(), fp.dirac.clone())?;
    let mut d = Diagram::new();
    let ke = d.edge("k", arrow.clone());
    let p1 = d.edge("pr1", fp.pr1.clone());
    let p2 = d.edge("pr2", fp.pr2.clone());
    let e1 = d.edge("h1", h1.clone());
    let e2 = d.edge("h2", h2.clone());
    d.triangle(ke, p1, e1);
    d.triangle(ke, p2, e2);
    let children = vec![
        agree_entry,
        check_morphism(&arrow, &format!("{id}/k")),
        check_diagram(&d, &format!("{id}/triangles")),
    ];
    Ok((arrow, CheckReport::node(id, "universal arrow", children)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{rat, ScalarExpr};

    fn patch(name: &str, coords: &[&str]) -> Patch {
        let n = coords.len() as i64;
        Patch::new(
            name,
            coords,
            vec![
                (0..n).map(|_| rat(0)).collect(),
                (1..=n).map(rat).collect(),
                (0..n).map(|i| rat(3 - 2 * i)).collect(),
            ],
            vec![],
        )
        .unwrap()
    }

    fn v(n: &str) -> ScalarExpr {
        ScalarExpr::var(n)
    }

    fn area(p: &Patch) -> DifferentialForm {
        DifferentialForm::dx(p, 0).wedge(&DifferentialForm::dx(p, 1)).unwrap()
    }

    #[test]
    fn morphism_examples() {
        let plane = patch("plane", &["x", "y"]);
        let l = DiracStructure::tangent(&plane);
        let gt = DManMorphism::gauge_transformation(&l, &area(&plane)).unwrap();
        assert!(check_morphism(&gt, "gt").passed());

        let line = patch("line", &["u"]);
        let f = SmoothMap::new(&plane, &line, vec![&v("x") * &v("y")]).unwrap();
        let m = DManMorphism::new(
            f,
            DifferentialForm::zero(&plane, 2),
            DiracStructure::tangent(&plane),
            DiracStructure::tangent(&line),
        )
        .unwrap();
        assert!(check_morphism(&m, "smooth").passed());

        let incl = SmoothMap::new(&line, &plane, vec![v("u"), ScalarExpr::zero()]).unwrap();
        let leaf = DManMorphism::new(
            incl,
            DifferentialForm::zero(&line, 2),
            DiracStructure::tangent(&line),
            DiracStructure::from_two_form(&area(&plane)).unwrap(),
        )
        .unwrap();
        assert!(check_morphism(&leaf, "leaf").passed());

        let wrong = DManMorphism::new(
            SmoothMap::identity(&plane),
            DifferentialForm::zero(&plane, 2),
            DiracStructure::tangent(&plane),
            DiracStructure::from_two_form(&area(&plane)).unwrap(),
        )
        .unwrap();
        let r = check_morphism(&wrong, "wrong");
        assert!(r.failed());
        assert!(r.find("wrong/law/generic").unwrap().failed());
    }

    #[test]
    fn composition_examples() {
        let plane = patch("plane", &["x", "y"]);
        let l = DiracStructure::tangent(&plane);
        let a = DManMorphism::gauge_transformation(&l, &area(&plane).scale(&ScalarExpr::int(2))).unwrap();
        let b = DManMorphism::gauge_transformation(a.target(), &area(&plane)).unwrap();
        let c = b.compose(&a).unwrap();
        assert_eq!(c.gauge(), &area(&plane).scale(&ScalarExpr::int(3)));
        assert!(check_morphism(&c, "c").passed());
        let id = DManMorphism::identity(a.source());
        let same = a.compose(&id).unwrap();
        assert_eq!(same.gauge(), a.gauge());
        assert!(same.map().same_as(a.map()));
        assert!(matches!(a.compose(&b), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn composition_substitutes() {
        let line = patch("s", &["s"]);
        let mid = patch("u", &["u"]);
        let plane = patch("plane", &["x", "y"]);
        let g = SmoothMap::new(&line, &mid, vec![v("s").pow(2)]).unwrap();
        let f = SmoothMap::new(&mid, &plane, vec![v("u"), ScalarExpr::zero()]).unwrap();
        let beta_plane = area(&plane).scale(&v("x"));
        let gm = DManMorphism::new(
            g,
            DifferentialForm::zero(&line, 2),
            DiracStructure::tangent(&line),
            DiracStructure::tangent(&mid),
        )
        .unwrap();
        let fm = DManMorphism::new(
            f,
            DifferentialForm::zero(&mid, 2),
            DiracStructure::tangent(&mid),
            DiracStructure::from_two_form(&beta_plane).unwrap(),
        )
        .unwrap();
        let c = fm.compose(&gm).unwrap();
        assert_eq!(c.map().components()[0], v("s").pow(2));
        assert!(c.gauge().is_zero());
    }

    #[test]
    fn diagram_examples() {
        let plane = patch("plane", &["x", "y"]);
        let l = DiracStructure::tangent(&plane);
        let b1 = area(&plane);
        let b2 = area(&plane).scale(&ScalarExpr::int(5));
        let e1 = DManMorphism::gauge_transformation(&l, &b1).unwrap();
        let e2 = DManMorphism::gauge_transformation(e1.target(), &b2).unwrap();
        let e3 = DManMorphism::gauge_transformation(&l, &b1.add(&b2).unwrap()).unwrap();
        let mut d = Diagram::new();
        let (i1, i2, i3) = (d.edge("a", e1.clone()), d.edge("b", e2.clone()), d.edge("c", e3));
        d.triangle(i1, i2, i3);
        assert!(check_diagram(&d, "d").passed());

        let bad = DManMorphism::gauge_transformation(&l, &b1.add(&b2).unwrap().add(&area(&plane)).unwrap()).unwrap();
        let mut d = Diagram::new();
        let (i1, i2, i3) = (d.edge("a", e1), d.edge("b", e2), d.edge("c", bad));
        d.triangle(i1, i2, i3);
        let r = check_diagram(&d, "d");
        assert!(r.failed());
        assert_eq!(r.find("d/triangle-0/gauge").unwrap().residual.as_deref(), Some("-dx^dy"));
    }

    #[test]
    fn fiber_product_and_arrow() {
        let m = patch("M", &["a", "x"]);
        let n = patch("N", &["b", "x"]);
        let x = patch("X", &["x"]);
        let p = patch("P", &["a", "b", "x"]);
        let f = DManMorphism::new(
            SmoothMap::projection(&m, &x, &[1]).unwrap(),
            DifferentialForm::zero(&m, 2),
            DiracStructure::tangent(&m),
            DiracStructure::tangent(&x),
        )
        .unwrap();
        let g = DManMorphism::new(
            SmoothMap::projection(&n, &x, &[1]).unwrap(),
            DifferentialForm::zero(&n, 2),
            DiracStructure::tangent(&n),
            DiracStructure::tangent(&x),
        )
        .unwrap();
        let pr1 = SmoothMap::projection(&p, &m, &[0, 2]).unwrap();
        let pr2 = SmoothMap::projection(&p, &n, &[1, 2]).unwrap();
        let (fp, report) = fiber_product(&f, &g, &p, &pr1, &pr2, "fp").unwrap();
        assert!(report.passed(), "{}", report.to_text(false));
        let (k, r) = universal_arrow(&fp, &fp.pr1, &fp.pr2, &SmoothMap::identity(&p), "ua").unwrap();
        assert!(r.passed());
        assert!(k.gauge().is_zero());
    }

    #[test]
    fn gauged_fiber_product() {
        let m = patch("M", &["a", "x"]);
        let x = patch("X", &["x"]);
        let beta = area(&m).scale(&v("a"));
        let lm = DiracStructure::tangent(&m);
        let f = DManMorphism::new(
            SmoothMap::projection(&m, &x, &[1]).unwrap(),
            beta.clone(),
            lm.gauge_transform(&beta.neg()).unwrap(),
            DiracStructure::tangent(&x),
        )
        .unwrap();
        assert!(check_morphism(&f, "f").passed());
        let fid = DManMorphism::new(
            SmoothMap::identity(&m),
            DifferentialForm::zero(&m, 2),
            f.source().clone(),
            f.source().clone(),
        )
        .unwrap();
        let (fp, report) = fiber_product(&f, &f, &m, &SmoothMap::identity(&m), &SmoothMap::identity(&m), "fp").unwrap();
        assert!(report.passed(), "{}", report.to_text(false));
        let (k, r) = universal_arrow(&fp, &fid, &fid, &SmoothMap::identity(&m), "ua").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(k.gauge(), &beta.neg());
    }
}
