//! Principal bundles and bibundles of D-Lie groupoids: actions, principality
//! through division maps, pullbacks, bundle morphisms, descent of
//! characteristic forms, the bibundle of a morphism, tensor products and
//! nondegeneracy of characteristic forms.

use crate::chart::{form_identity, map_identity, FiberChart};
use crate::dirac::{backward_image_generic, error_entry, DiracStructure};
use crate::dman::{check_law, check_morphism, same_dirac, DManMorphism};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap};
use crate::groupoid::{check_dlie_morphism, DLieGroupoid, DLieMorphism, GaugePair};
use crate::linalg::Field;
use crate::report::{CheckReport, Status};

/// An action map on a fibered-product chart: `G ×_M P → P` for a left
/// action, `P ×_N H → P` for a right one.
#[derive(Clone, Debug)]
pub struct Action {
    chart: FiberChart,
    map: SmoothMap,
}

impl Action {
    pub fn new(chart: FiberChart, map: SmoothMap) -> Result<Self> {
        chart.patch().ensure_same(map.source())?;
        Ok(Action { chart, map })
    }

    pub fn chart(&self) -> &FiberChart {
        &self.chart
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    /// The action applied pointwise to two maps out of a common source.
    pub fn apply(&self, a: &SmoothMap, b: &SmoothMap) -> Result<SmoothMap> {
        self.map.compose(&self.chart.lift(a, b)?)
    }
}

/// For a left action, `d(p, q)` is the arrow with `d(p, q)·q = p`, defined
/// on pairs with the same image in the base. For a right action, `d(p, q)` is
/// the arrow with `p·d(p, q) = q`.
#[derive(Clone, Debug)]
pub struct DivisionMap {
    chart: FiberChart,
    map: SmoothMap,
}

impl DivisionMap {
    pub fn new(chart: FiberChart, map: SmoothMap) -> Result<Self> {
        chart.patch().ensure_same(map.source())?;
        Ok(DivisionMap { chart, map })
    }

    pub fn chart(&self) -> &FiberChart {
        &self.chart
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }
}

/// How principality of an action is established. Without a division map it
/// can only be attested.
#[derive(Clone, Debug)]
pub enum Principality {
    Division(DivisionMap),
    Attested,
}

/// A left `G`-bundle `s^P: P → N` with moment map `t^P: P → M`.
#[derive(Clone, Debug)]
pub struct PrincipalBundle {
    groupoid: DLieGroupoid,
    base: DiracStructure,
    s: SmoothMap,
    t: SmoothMap,
    action: Action,
    gauge: GaugePair,
    omega: DifferentialForm,
    principality: Principality,
}

impl PrincipalBundle {
    pub fn new(
        groupoid: DLieGroupoid,
        base: DiracStructure,
        s: SmoothMap,
        t: SmoothMap,
        action: Action,
        gauge: GaugePair,
        principality: Principality,
    ) -> Result<Self> {
        let p = s.source().clone();
        p.ensure_same(t.source())?;
        s.target().ensure_same(base.patch())?;
        t.target().ensure_same(groupoid.presentation().objects())?;
        p.ensure_same(action.map.target())?;
        p.ensure_same(gauge.tau().patch())?;
        if !action.chart.f().same_as(groupoid.presentation().s()) || !action.chart.g().same_as(&t)
        {
            return Err(Error::InvalidPatch {
                patch: action.chart.patch().name().to_string(),
                reason: "a left action chart is fibered over s and the moment map".into(),
            });
        }
        if let Principality::Division(d) = &principality {
            if !d.chart.f().same_as(&s) || !d.chart.g().same_as(&s) {
                return Err(Error::InvalidPatch {
                    patch: d.chart.patch().name().to_string(),
                    reason: "a left division chart is fibered over the bundle projection".into(),
                });
            }
            d.map.target().ensure_same(groupoid.presentation().arrows())?;
        }
        let omega = gauge.tau().sub(gauge.sigma())?;
        Ok(PrincipalBundle {
            groupoid,
            base,
            s,
            t,
            action,
            gauge,
            omega,
            principality,
        })
    }

    /// `G` acting on itself by left multiplication, over `s`.
    pub fn left_multiplication(g: &DLieGroupoid) -> Result<Self> {
        let p = g.presentation();
        let action = Action::new(p.pairs().clone(), p.m().clone())?;
        let chart = FiberChart::auto(p.s(), p.s())?;
        let inv = p.i().compose(chart.pr2())?;
        let d = p.m().compose(&p.pair(chart.pr1(), &inv)?)?;
        PrincipalBundle::new(
            g.clone(),
            g.base().clone(),
            p.s().clone(),
            p.t().clone(),
            action,
            g.gauge().clone(),
            Principality::Division(DivisionMap::new(chart, d)?),
        )
    }

    pub fn groupoid(&self) -> &DLieGroupoid {
        &self.groupoid
    }

    pub fn base(&self) -> &DiracStructure {
        &self.base
    }

    pub fn total(&self) -> &Patch {
        self.s.source()
    }

    pub fn s(&self) -> &SmoothMap {
        &self.s
    }

    pub fn t(&self) -> &SmoothMap {
        &self.t
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn gauge(&self) -> &GaugePair {
        &self.gauge
    }

    /// `Ω^P = τ^P − σ^P`.
    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn principality(&self) -> &Principality {
        &self.principality
    }

    /// The same bundle with another gauge pair.
    pub fn with_gauge(&self, gauge: GaugePair) -> Result<Self> {
        let mut b = self.clone();
        self.total().ensure_same(gauge.tau().patch())?;
        b.omega = gauge.tau().sub(gauge.sigma())?;
        b.gauge = gauge;
        Ok(b)
    }
}

fn principality_entry(
    pr: &Principality,
    action: &Action,
    left: bool,
    id: &str,
) -> CheckReport {
    let title = "the action is principal";
    match pr {
        Principality::Attested => {
            CheckReport::leaf(id, title, Status::Attested).with_note("attested: not verified")
        }
        Principality::Division(d) => {
            let (a, dc) = (&action.chart, &d.chart);
            let children = if left {
                vec![
                    map_identity(
                        format!("{id}/arrow"),
                        "d(g·p, p) = g",
                        dc.lift(&action.map, a.pr2()).and_then(|k| d.map.compose(&k)),
                        Ok(a.pr1().clone()),
                    ),
                    map_identity(
                        format!("{id}/point"),
                        "d(p, q)·q = p",
                        action.apply(&d.map, dc.pr2()),
                        Ok(dc.pr1().clone()),
                    ),
                ]
            } else {
                vec![
                    map_identity(
                        format!("{id}/arrow"),
                        "d(p, p·h) = h",
                        dc.lift(a.pr1(), &action.map).and_then(|k| d.map.compose(&k)),
                        Ok(a.pr2().clone()),
                    ),
                    map_identity(
                        format!("{id}/point"),
                        "p·d(p, q) = q",
                        action.apply(dc.pr1(), &d.map),
                        Ok(dc.pr2().clone()),
                    ),
                ]
            };
            CheckReport::node(id, title, children).with_note("verified through the division map")
        }
    }
}

/// Action axioms, invariance of the projection, left multiplicativity of
/// `Ω^P`, the moment condition `t^P*L_M = s^P*L_N + Ω^P`, submersion at
/// samples and principality.
pub fn check_principal_bundle(b: &PrincipalBundle, id: &str) -> CheckReport {
    let gp = b.groupoid.presentation();
    let act = &b.action;
    let a = &act.chart;
    let idp = SmoothMap::identity(b.total());
    let mut children = vec![
        map_identity(
            format!("{id}/unit"),
            "u(t^P(p))·p = p",
            gp.u().compose(&b.t).and_then(|ut| act.apply(&ut, &idp)),
            Ok(idp.clone()),
        ),
        map_identity(
            format!("{id}/moment"),
            "t^P(g·p) = t(g)",
            b.t.compose(&act.map),
            gp.t().compose(a.pr1()),
        ),
    ];
    let assoc = (|| -> Result<(SmoothMap, SmoothMap)> {
        let s2 = gp.s().compose(gp.pr2())?;
        let tri = FiberChart::auto(&s2, &b.t)?;
        let g1 = gp.pr1().compose(tri.pr1())?;
        let g2 = gp.pr2().compose(tri.pr1())?;
        let p = tri.pr2();
        let lhs = act.apply(&g1, &act.apply(&g2, p)?)?;
        let rhs = act.apply(&gp.m().compose(tri.pr1())?, p)?;
        Ok((lhs, rhs))
    })();
    let (l, r) = match assoc {
        Ok((l, r)) => (Ok(l), Ok(r)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    children.push(map_identity(
        format!("{id}/associativity"),
        "g1·(g2·p) = (g1g2)·p",
        l,
        r,
    ));
    children.push(map_identity(
        format!("{id}/invariance"),
        "s^P(g·p) = s^P(p)",
        b.s.compose(&act.map),
        b.s.compose(a.pr2()),
    ));
    let omega_g = b.groupoid.omega();
    children.push(form_identity(
        format!("{id}/multiplicative"),
        "m_L*Ω^P = pr1*Ω^G + pr2*Ω^P",
        b.omega.pullback(&act.map),
        omega_g
            .pullback(a.pr1())
            .and_then(|x| x.add(&b.omega.pullback(a.pr2())?)),
    ));
    // Gauge part of the action from the source equation, then the target one.
    let (sg, tg) = (b.groupoid.sigma(), b.groupoid.tau());
    let (sp, tp) = (b.gauge.sigma(), b.gauge.tau());
    let mu = (|| -> Result<DifferentialForm> {
        sg.pullback(a.pr1())?
            .add(&sp.pullback(a.pr2())?)?
            .sub(&sp.pullback(&act.map)?)
    })();
    children.push(form_identity(
        format!("{id}/target-gauge"),
        "μ_L + m_L*τ^P = pr1*τ^G + pr2*τ^P",
        mu.and_then(|m| m.add(&tp.pullback(&act.map)?)),
        tg.pullback(a.pr1()).and_then(|x| x.add(&tp.pullback(a.pr2())?)),
    ));
    let mut sub = Vec::new();
    for (k, x) in b.total().samples().iter().enumerate() {
        let cid = format!("{id}/submersion/sample-{k}");
        let title = "ds^P has full rank";
        sub.push(match b.s.jacobian_at(x) {
            Ok(j) => CheckReport::check(cid, title, j.rank() == b.base.patch().dim())
                .with_witness(x.to_string()),
            Err(e) => error_entry(&cid, title, &e),
        });
    }
    children.push(CheckReport::node(format!("{id}/submersion"), "s^P is a submersion", sub));
    let mid = format!("{id}/moments");
    let mtitle = "t^P*L_M = s^P*L_N + Ω^P";
    children.push(match backward_image_generic(&b.s, &b.base) {
        Ok(pulled) => {
            let mut r = check_law(&b.t, &b.omega, &pulled, b.groupoid.base(), &mid);
            r.title = mtitle.into();
            r
        }
        Err(e) => error_entry(&mid, mtitle, &e),
    });
    children.push(principality_entry(&b.principality, act, true, &format!("{id}/principal")));
    let mut report = CheckReport::node(id, "principal bundle", children);
    if !b.omega.is_zero() {
        report.add_note("characteristic form taken as Ω^P = τ^P − σ^P");
    }
    report
}

/// A bundle map `F: Q → P` with gauge part `β̃`, covering a Dirac morphism
/// `(f, β)` between the bases.
#[derive(Clone, Debug)]
pub struct BundleMorphism {
    map: SmoothMap,
    gauge: DifferentialForm,
    base: DManMorphism,
}

impl BundleMorphism {
    pub fn new(map: SmoothMap, gauge: DifferentialForm, base: DManMorphism) -> Result<Self> {
        map.source().ensure_same(gauge.patch())?;
        gauge.ensure_closed()?;
        Ok(BundleMorphism { map, gauge, base })
    }

    pub fn identity(b: &PrincipalBundle) -> Self {
        BundleMorphism {
            map: SmoothMap::identity(b.total()),
            gauge: DifferentialForm::zero(b.total(), 2),
            base: DManMorphism::identity(&b.base),
        }
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn gauge(&self) -> &DifferentialForm {
        &self.gauge
    }

    pub fn base(&self) -> &DManMorphism {
        &self.base
    }
}

/// The only gauge part making the source square commute:
/// `β̃ = σ^Q + (s^Q)*β − F*σ^P`.
pub fn unique_gauge(
    map: &SmoothMap,
    base: &DManMorphism,
    src: &PrincipalBundle,
    dst: &PrincipalBundle,
) -> Result<DifferentialForm> {
    src.gauge
        .sigma()
        .add(&base.gauge().pullback(&src.s)?)?
        .sub(&dst.gauge.sigma().pullback(map)?)
}

pub fn check_bundle_morphism(
    m: &BundleMorphism,
    src: &PrincipalBundle,
    dst: &PrincipalBundle,
    id: &str,
) -> CheckReport {
    let f = m.base.map();
    let beta = m.base.gauge();
    let aq = &src.action.chart;
    let omega_minus = beta
        .pullback(&src.s)
        .and_then(|sb| src.omega.sub(&sb));
    let gauge = match unique_gauge(&m.map, &m.base, src, dst) {
        Ok(g) => {
            let d = m.gauge.sub(&g);
            match d {
                Ok(d) if d.is_zero() => CheckReport::pass(format!("{id}/gauge"), "β̃ = σ^Q + (s^Q)*β − F*σ^P")
                    .with_witness(g.to_string())
                    .with_note("the source square determines the gauge part uniquely"),
                Ok(d) => CheckReport::fail(format!("{id}/gauge"), "β̃ = σ^Q + (s^Q)*β − F*σ^P")
                    .with_residual(d.to_string()),
                Err(e) => error_entry(&format!("{id}/gauge"), "gauge part", &e),
            }
        }
        Err(e) => error_entry(&format!("{id}/gauge"), "gauge part", &e),
    };
    let children = vec![
        map_identity(
            format!("{id}/equivariance"),
            "F(g·q) = g·F(q)",
            m.map.compose(&src.action.map),
            m.map
                .compose(aq.pr2())
                .and_then(|fq| dst.action.apply(aq.pr1(), &fq)),
        ),
        map_identity(
            format!("{id}/source"),
            "s^P∘F = f∘s^Q",
            dst.s.compose(&m.map),
            f.compose(&src.s),
        ),
        map_identity(
            format!("{id}/target"),
            "t^P∘F = t^Q",
            dst.t.compose(&m.map),
            Ok(src.t.clone()),
        ),
        form_identity(
            format!("{id}/characteristic"),
            "F*Ω^P = Ω^Q − (s^Q)*β",
            dst.omega.pullback(&m.map),
            omega_minus,
        ),
        gauge,
        form_identity(
            format!("{id}/target-gauge"),
            "F*τ^P + β̃ = τ^Q",
            dst.gauge
                .tau()
                .pullback(&m.map)
                .and_then(|x| x.add(&m.gauge)),
            Ok(src.gauge.tau().clone()),
        ),
        check_morphism(&m.base, &format!("{id}/base")),
    ];
    CheckReport::node(id, "principal bundle morphism", children)
}

/// `Q = P ×_{N2} N1` with `Ω^Q = pr1*Ω^P + pr2*β`, and the projection
/// `Q → P` as a bundle morphism.
pub fn pullback_bundle(
    b: &PrincipalBundle,
    f: &DManMorphism,
    chart: Option<FiberChart>,
    id: &str,
) -> Result<(PrincipalBundle, BundleMorphism, CheckReport)> {
    if check_principal_bundle(b, "bundle").failed() {
        return Err(Error::PrerequisiteFailed("the bundle does not verify".into()));
    }
    if !same_dirac(f.target(), &b.base) {
        return Err(Error::EndpointMismatch(
            "the base morphism does not land in the bundle's base".into(),
        ));
    }
    let q = match chart {
        Some(c) => {
            if !c.f().same_as(&b.s) || !c.g().same_as(f.map()) {
                return Err(Error::InvalidPatch {
                    patch: c.patch().name().to_string(),
                    reason: "pullback chart must be fibered over s^P and the base map".into(),
                });
            }
            c
        }
        None => FiberChart::auto(&b.s, f.map())?,
    };
    let gp = b.groupoid.presentation();
    let s_q = q.pr2().clone();
    let t_q = b.t.compose(q.pr1())?;
    let sigma = b.gauge.sigma().pullback(q.pr1())?;
    let tau = b
        .gauge
        .tau()
        .pullback(q.pr1())?
        .add(&f.gauge().pullback(q.pr2())?)?;
    let a = FiberChart::auto(gp.s(), &t_q)?;
    let moved = b.action.apply(a.pr1(), &q.pr1().compose(a.pr2())?)?;
    let act = q.lift(&moved, &q.pr2().compose(a.pr2())?)?;
    let principality = match &b.principality {
        Principality::Division(d) => {
            let dq = FiberChart::auto(&s_q, &s_q)?;
            let k = d
                .chart
                .lift(&q.pr1().compose(dq.pr1())?, &q.pr1().compose(dq.pr2())?)?;
            Principality::Division(DivisionMap::new(dq, d.map.compose(&k)?)?)
        }
        Principality::Attested => Principality::Attested,
    };
    let pulled = PrincipalBundle::new(
        b.groupoid.clone(),
        f.source().clone(),
        s_q,
        t_q,
        Action::new(a, act)?,
        GaugePair::new(tau, sigma)?,
        principality,
    )?;
    let gauge = unique_gauge(q.pr1(), f, &pulled, b)?;
    let proj = BundleMorphism::new(q.pr1().clone(), gauge, f.clone())?;
    let children = vec![
        check_principal_bundle(&pulled, &format!("{id}/bundle")),
        check_bundle_morphism(&proj, &pulled, b, &format!("{id}/projection")),
    ];
    let report = CheckReport::node(id, "pullback bundle", children);
    Ok((pulled, proj, report))
}

/// A local bundle `P_a` over a chart of the cover, with `φ_a: P|_{U_a} → P_a`
/// and the characteristic form of `P_a`.
#[derive(Clone, Debug)]
pub struct LocalPiece {
    pub phi: SmoothMap,
    pub omega: DifferentialForm,
}

/// `φ_ab: P_b → P_a` on the overlap.
#[derive(Clone, Debug)]
pub struct Transition {
    pub a: usize,
    pub b: usize,
    pub map: SmoothMap,
}

/// Glues target-aligned local characteristic forms into one form on the
/// global chart `total`, after checking `φ_ab∘φ_b = φ_a`, `φ_ab*Ω^a = Ω^b`,
/// the cocycle condition on triples and agreement on every overlap.
pub fn glue_characteristic_form(
    total: &Patch,
    pieces: &[LocalPiece],
    transitions: &[Transition],
    id: &str,
) -> Result<(DifferentialForm, CheckReport)> {
    if pieces.is_empty() {
        return Err(Error::Invalid("empty cover".into()));
    }
    let mut children = Vec::new();
    let mut local = Vec::with_capacity(pieces.len());
    for piece in pieces {
        if piece.phi.source().coords() != total.coords() {
            return Err(Error::InvalidPatch {
                patch: piece.phi.source().name().to_string(),
                reason: format!("restriction of `{}` must use its coordinates", total.name()),
            });
        }
        piece.phi.target().ensure_same(piece.omega.patch())?;
        local.push(piece.omega.pullback(&piece.phi)?.on_patch(total)?);
    }
    for tr in transitions {
        let (pa, pb) = (
            pieces.get(tr.a).ok_or_else(|| Error::Invalid(format!("no piece {}", tr.a)))?,
            pieces.get(tr.b).ok_or_else(|| Error::Invalid(format!("no piece {}", tr.b)))?,
        );
        let composed = tr.map.compose(&pb.phi.with_endpoints(pa.phi.source(), pb.phi.target())?)?;
        if let Some((i, r)) = composed.differences(&pa.phi).first() {
            return Err(Error::CocycleFails(format!(
                "φ_{}{}∘φ_{} differs from φ_{} in component {i} by {r}",
                tr.a, tr.b, tr.b, tr.a
            )));
        }
        let pulled = pa.omega.pullback(&tr.map)?;
        let d = pulled.sub(&pb.omega)?;
        if !d.is_zero() {
            return Err(Error::OverlapMismatch(d.to_string()));
        }
        children.push(CheckReport::pass(
            format!("{id}/transition-{}-{}", tr.a, tr.b),
            "transition is compatible with the local maps and forms",
        ));
    }
    for t1 in transitions {
        for t2 in transitions.iter().filter(|t| t.a == t1.b) {
            if let Some(t3) = transitions.iter().find(|t| t.a == t1.a && t.b == t2.b) {
                let comp = t1.map.compose(&t2.map)?;
                if let Some((i, r)) = comp.differences(&t3.map).first() {
                    return Err(Error::CocycleFails(format!(
                        "φ_{}{}∘φ_{}{} differs from φ_{}{} in component {i} by {r}",
                        t1.a, t1.b, t2.a, t2.b, t3.a, t3.b
                    )));
                }
                children.push(CheckReport::pass(
                    format!("{id}/cocycle-{}-{}-{}", t1.a, t1.b, t2.b),
                    "cocycle condition",
                ));
            }
        }
    }
    for a in 0..local.len() {
        for b in a + 1..local.len() {
            let d = local[a].sub(&local[b])?;
            if !d.is_zero() {
                return Err(Error::OverlapMismatch(d.to_string()));
            }
            children.push(CheckReport::pass(
                format!("{id}/overlap-{a}-{b}"),
                "local forms agree on the overlap",
            ));
        }
    }
    let glued = local.swap_remove(0);
    let report = CheckReport::node(id, "glued characteristic form", children)
        .with_witness(glued.to_string());
    Ok((glued, report))
}

/// A left principal bundle that also carries a commuting right action of a
/// second groupoid over the bundle's base.
#[derive(Clone, Debug)]
pub struct Bibundle {
    left: PrincipalBundle,
    right: DLieGroupoid,
    right_action: Action,
    right_principality: Option<Principality>,
}

impl Bibundle {
    pub fn new(
        left: PrincipalBundle,
        right: DLieGroupoid,
        right_action: Action,
        right_principality: Option<Principality>,
    ) -> Result<Self> {
        let hp = right.presentation();
        hp.objects().ensure_same(left.base.patch())?;
        if !same_dirac(right.base(), &left.base) {
            return Err(Error::EndpointMismatch(
                "the right groupoid's base structure differs from the bundle's base".into(),
            ));
        }
        left.total().ensure_same(right_action.map.target())?;
        if !right_action.chart.f().same_as(&left.s) || !right_action.chart.g().same_as(hp.t()) {
            return Err(Error::InvalidPatch {
                patch: right_action.chart.patch().name().to_string(),
                reason: "a right action chart is fibered over s^P and t".into(),
            });
        }
        if let Some(Principality::Division(d)) = &right_principality {
            if !d.chart.f().same_as(&left.t) || !d.chart.g().same_as(&left.t) {
                return Err(Error::InvalidPatch {
                    patch: d.chart.patch().name().to_string(),
                    reason: "a right division chart is fibered over t^P".into(),
                });
            }
            d.map.target().ensure_same(hp.arrows())?;
        }
        Ok(Bibundle {
            left,
            right,
            right_action,
            right_principality,
        })
    }

    /// `G` as a `(G, G)`-bibundle through left and right multiplication.
    pub fn unit(g: &DLieGroupoid) -> Result<Self> {
        let p = g.presentation();
        let left = PrincipalBundle::left_multiplication(g)?;
        let action = Action::new(p.pairs().clone(), p.m().clone())?;
        let chart = FiberChart::auto(p.t(), p.t())?;
        let inv = p.i().compose(chart.pr1())?;
        let d = p.m().compose(&p.pair(&inv, chart.pr2())?)?;
        Bibundle::new(
            left,
            g.clone(),
            action,
            Some(Principality::Division(DivisionMap::new(chart, d)?)),
        )
    }

    pub fn left(&self) -> &PrincipalBundle {
        &self.left
    }

    pub fn right_groupoid(&self) -> &DLieGroupoid {
        &self.right
    }

    pub fn right_action(&self) -> &Action {
        &self.right_action
    }

    pub fn right_principality(&self) -> Option<&Principality> {
        self.right_principality.as_ref()
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.left.omega
    }

    pub fn total(&self) -> &Patch {
        self.left.total()
    }

    pub fn with_gauge(&self, gauge: GaugePair) -> Result<Self> {
        let mut b = self.clone();
        b.left = self.left.with_gauge(gauge)?;
        Ok(b)
    }

    /// Equality of moment maps, actions and characteristic forms. Actions
    /// are compared on the other bibundle's action charts, so the two may use
    /// differently named fibered-product coordinates.
    pub fn same_data(&self, other: &Bibundle) -> bool {
        let (a, b) = (&self.left, &other.left);
        if a.total().coords() != b.total().coords() {
            return false;
        }
        let same_action = |x: &Action, y: &Action, first: &Patch, second: &Patch| {
            let c = &y.chart;
            (|| -> Result<bool> {
                let h1 = c.pr1().with_endpoints(c.patch(), first)?;
                let h2 = c.pr2().with_endpoints(c.patch(), second)?;
                let moved = x.apply(&h1, &h2)?;
                Ok(moved.differences(&y.map).is_empty())
            })()
            .unwrap_or(false)
        };
        let ga = a.groupoid.presentation().arrows();
        let ha = self.right.presentation().arrows();
        a.s.differences(&b.s).is_empty()
            && a.t.differences(&b.t).is_empty()
            && same_action(&a.action, &b.action, ga, a.total())
            && same_action(&self.right_action, &other.right_action, a.total(), ha)
            && b.omega.on_patch(a.total()).map(|o| o == a.omega).unwrap_or(false)
            && a.gauge.sigma().is_zero() == b.gauge.sigma().is_zero()
    }
}

/// Both actions, their multiplicativity and that they commute.
pub fn check_bibundle(b: &Bibundle, id: &str) -> CheckReport {
    let p = &b.left;
    let hp = b.right.presentation();
    let act = &b.right_action;
    let a = &act.chart;
    let idp = SmoothMap::identity(p.total());
    let mut right = vec![
        map_identity(
            format!("{id}/right/unit"),
            "p·u(s^P(p)) = p",
            hp.u().compose(&p.s).and_then(|us| act.apply(&idp, &us)),
            Ok(idp.clone()),
        ),
        map_identity(
            format!("{id}/right/moment"),
            "s^P(p·h) = s(h)",
            p.s.compose(&act.map),
            hp.s().compose(a.pr2()),
        ),
        map_identity(
            format!("{id}/right/invariance"),
            "t^P(p·h) = t^P(p)",
            p.t.compose(&act.map),
            p.t.compose(a.pr1()),
        ),
    ];
    let assoc = (|| -> Result<(SmoothMap, SmoothMap)> {
        let t1 = hp.t().compose(hp.pr1())?;
        let tri = FiberChart::auto(&p.s, &t1)?;
        let q = tri.pr1();
        let h1 = hp.pr1().compose(tri.pr2())?;
        let h2 = hp.pr2().compose(tri.pr2())?;
        let lhs = act.apply(&act.apply(q, &h1)?, &h2)?;
        let rhs = act.apply(q, &hp.m().compose(tri.pr2())?)?;
        Ok((lhs, rhs))
    })();
    let (l, r) = match assoc {
        Ok((l, r)) => (Ok(l), Ok(r)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    right.push(map_identity(
        format!("{id}/right/associativity"),
        "(p·h1)·h2 = p·(h1h2)",
        l,
        r,
    ));
    right.push(form_identity(
        format!("{id}/right/multiplicative"),
        "m_R*Ω^P = pr1*Ω^P + pr2*Ω^H",
        p.omega.pullback(&act.map),
        p.omega
            .pullback(a.pr1())
            .and_then(|x| x.add(&b.right.omega().pullback(a.pr2())?)),
    ));
    if let Some(pr) = &b.right_principality {
        right.push(principality_entry(pr, act, false, &format!("{id}/right/principal")));
    }
    let commute = (|| -> Result<(SmoothMap, SmoothMap)> {
        let la = &p.action;
        let sp = p.s.compose(la.chart.pr2())?;
        let x = FiberChart::auto(&sp, hp.t())?;
        let g = la.chart.pr1().compose(x.pr1())?;
        let q = la.chart.pr2().compose(x.pr1())?;
        let h = x.pr2();
        let lhs = act.apply(&la.map.compose(x.pr1())?, h)?;
        let rhs = la.apply(&g, &act.apply(&q, h)?)?;
        Ok((lhs, rhs))
    })();
    let (l, r) = match commute {
        Ok((l, r)) => (Ok(l), Ok(r)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    let children = vec![
        check_principal_bundle(p, &format!("{id}/left")),
        CheckReport::node(format!("{id}/right"), "right action", right),
        map_identity(format!("{id}/commute"), "(g·p)·h = g·(p·h)", l, r),
    ];
    CheckReport::node(id, "bibundle", children)
}

/// `P_F = G ×_{s,f} N` for `F: H → G` covering `f: N → M`, with
/// `Ω^{P_F} = pr1*Ω^G + pr2*β`, target aligned.
pub fn bundle_from_morphism(
    mor: &DLieMorphism,
    h: &DLieGroupoid,
    g: &DLieGroupoid,
    chart: Option<FiberChart>,
    id: &str,
) -> Result<(Bibundle, CheckReport)> {
    if check_dlie_morphism(mor, h, g, "morphism").failed() {
        return Err(Error::PrerequisiteFailed(
            "the D-Lie groupoid morphism does not verify".into(),
        ));
    }
    let gp = g.presentation();
    let hp = h.presentation();
    let f = mor.base_map();
    let c = match chart {
        Some(c) => {
            if !c.f().same_as(gp.s()) || !c.g().same_as(f) {
                return Err(Error::InvalidPatch {
                    patch: c.patch().name().to_string(),
                    reason: "chart must be fibered over s and the base map".into(),
                });
            }
            c
        }
        None => FiberChart::auto(gp.s(), f)?,
    };
    let t_p = gp.t().compose(c.pr1())?;
    let s_p = c.pr2().clone();
    let omega = g
        .omega()
        .pullback(c.pr1())?
        .add(&mor.beta().pullback(c.pr2())?)?;
    let gauge = GaugePair::new(omega, DifferentialForm::zero(c.patch(), 2))?;
    let la = FiberChart::auto(gp.s(), &t_p)?;
    let prod = gp.m().compose(&gp.pair(la.pr1(), &c.pr1().compose(la.pr2())?)?)?;
    let left_act = c.lift(&prod, &c.pr2().compose(la.pr2())?)?;
    let dc = FiberChart::auto(&s_p, &s_p)?;
    let inv = gp.i().compose(&c.pr1().compose(dc.pr2())?)?;
    let d = gp.m().compose(&gp.pair(&c.pr1().compose(dc.pr1())?, &inv)?)?;
    let left = PrincipalBundle::new(
        g.clone(),
        h.base().clone(),
        s_p.clone(),
        t_p,
        Action::new(la, left_act)?,
        gauge,
        Principality::Division(DivisionMap::new(dc, d)?),
    )?;
    let ra = FiberChart::auto(&s_p, hp.t())?;
    let fh = mor.arrow_map().compose(ra.pr2())?;
    let prod = gp.m().compose(&gp.pair(&c.pr1().compose(ra.pr1())?, &fh)?)?;
    let right_act = c.lift(&prod, &hp.s().compose(ra.pr2())?)?;
    let bib = Bibundle::new(left, h.clone(), Action::new(ra, right_act)?, None)?;
    let report = check_bibundle(&bib, id);
    Ok((bib, report))
}

/// The quotient of a tensor chart, with the quotient map and a section of it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub map: SmoothMap,
    pub section: SmoothMap,
}

impl Quotient {
    /// For `P ⊗ H` with `H` the unit bibundle: `(p, h) ↦ p·h`, with section
    /// `p ↦ (p, u(s^P(p)))`.
    pub fn right_unit(p: &Bibundle, chart: &FiberChart) -> Result<Quotient> {
        let hp = p.right.presentation();
        let map = p.right_action.apply(chart.pr1(), chart.pr2())?;
        let idp = SmoothMap::identity(p.total());
        let section = chart.lift(&idp, &hp.u().compose(&p.left.s)?)?;
        Ok(Quotient { map, section })
    }
}

/// `Ω̃ = pr1*Ω^P + pr2*Ω^Q` on `P ×_M Q`: invariance under the diagonal
/// action `g·(p, q) = (p·g⁻¹, g·q)`, horizontality at samples, and the
/// descended form when a quotient is supplied.
pub fn tensor_characteristic_form(
    p: &Bibundle,
    q: &Bibundle,
    chart: Option<FiberChart>,
    quotient: Option<&Quotient>,
    id: &str,
) -> Result<(Option<DifferentialForm>, CheckReport)> {
    let mid = q.left.groupoid.presentation();
    if !p.right.same_data(&q.left.groupoid) {
        return Err(Error::EndpointMismatch(
            "the right groupoid of the first factor is not the left groupoid of the second".into(),
        ));
    }
    let c = match chart {
        Some(c) => c,
        None => FiberChart::auto(&p.left.s, &q.left.t)?,
    };
    let tilde = p
        .omega()
        .pullback(c.pr1())?
        .add(&q.omega().pullback(c.pr2())?)?;
    let tq = q.left.t.compose(c.pr2())?;
    let a = FiberChart::auto(mid.s(), &tq)?;
    let inv = mid.i().compose(a.pr1())?;
    let moved_p = p.right_action.apply(&c.pr1().compose(a.pr2())?, &inv)?;
    let moved_q = q.left.action.apply(a.pr1(), &c.pr2().compose(a.pr2())?)?;
    let act = c.lift(&moved_p, &moved_q)?;
    let d = tilde.pullback(&act)?.sub(&tilde.pullback(a.pr2())?)?;
    if !d.is_zero() {
        return Err(Error::NotBasic(format!("not invariant, residual {d}")));
    }
    let mut children = vec![CheckReport::pass(
        format!("{id}/invariant"),
        "Ω̃ is invariant under the diagonal action",
    )];
    let units = a.lift(&mid.u().compose(&tq)?, &SmoothMap::identity(c.patch()))?;
    let mut horizontal = Vec::new();
    for (k, x) in c.patch().samples().iter().enumerate() {
        let y = units.apply(x)?;
        let ker = a.pr2().jacobian_at(&y)?.kernel();
        let ja = act.jacobian_at(&y)?;
        let b = tilde.two_form_matrix_at(x)?;
        for v in &ker {
            let w = b.mul_vec(&ja.mul_vec(v));
            if w.iter().any(|e| !e.is_zero()) {
                return Err(Error::NotBasic(format!("not horizontal at {x}")));
            }
        }
        horizontal.push(
            CheckReport::pass(format!("{id}/horizontal/sample-{k}"), "ι_v Ω̃ = 0 on orbit directions")
                .with_witness(x.to_string()),
        );
    }
    children.push(CheckReport::node(
        format!("{id}/horizontal"),
        "Ω̃ is horizontal",
        horizontal,
    ));
    let descended = match quotient {
        None => None,
        Some(qt) => {
            c.patch().ensure_same(qt.map.source())?;
            let back = qt.map.compose(&qt.section)?;
            if !back.same_as(&SmoothMap::identity(qt.map.target())) {
                return Err(Error::Invalid("the section is not a section of the quotient map".into()));
            }
            let omega = tilde.pullback(&qt.section)?;
            let d = omega.pullback(&qt.map)?.sub(&tilde)?;
            if !d.is_zero() {
                return Err(Error::NotBasic(format!("does not descend, residual {d}")));
            }
            children.push(
                CheckReport::pass(format!("{id}/descended"), "q*ω = Ω̃")
                    .with_witness(omega.to_string()),
            );
            Some(omega)
        }
    };
    let report = CheckReport::node(id, "tensor product characteristic form", children);
    Ok((descended, report))
}

fn symplectic_at_samples(g: &DLieGroupoid) -> bool {
    let arrows = g.presentation().arrows();
    g.is_target_aligned()
        && arrows.samples().iter().all(|x| {
            g.omega()
                .two_form_matrix_at(x)
                .map(|m| m.rank() == arrows.dim())
                .unwrap_or(false)
        })
}

/// `Ω^P` closed and of full rank at every sample, for a target-aligned
/// bibundle between symplectic groupoids; skipped otherwise.
pub fn check_nondegenerate(b: &Bibundle, id: &str) -> CheckReport {
    let title = "characteristic form is symplectic";
    if !symplectic_at_samples(&b.left.groupoid) || !symplectic_at_samples(&b.right) {
        return CheckReport::skipped(id, title)
            .with_note("the groupoids on either side are not symplectic");
    }
    if !b.left.gauge.sigma().is_zero() {
        return CheckReport::skipped(id, title).with_note("the bibundle is not target aligned");
    }
    let omega = b.omega();
    let mut children = vec![CheckReport::check(format!("{id}/closed"), "dΩ^P = 0", omega.is_closed())];
    let n = b.total().dim();
    for (k, x) in b.total().samples().iter().enumerate() {
        let cid = format!("{id}/sample-{k}");
        children.push(match omega.two_form_matrix_at(x) {
            Ok(m) => {
                let r = m.rank();
                let mut e = CheckReport::check(&cid, format!("rank {n}"), r == n)
                    .with_witness(x.to_string());
                if r != n {
                    e = e.with_residual(format!("rank {r}"));
                }
                e
            }
            Err(e) => error_entry(&cid, "rank", &e),
        });
    }
    CheckReport::node(id, title, children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::spread_samples;
    use crate::fixtures::{area_form, cotangent_groupoid, pair_groupoid, unit_groupoid};
    use crate::groupoid::target_align;
    use crate::report::Status;
    use crate::symbolic::ScalarExpr;

    fn doubled(g: &GaugePair) -> GaugePair {
        let two = ScalarExpr::int(2);
        GaugePair::new(g.tau().scale(&two), g.sigma().scale(&two)).unwrap()
    }

    #[test]
    fn left_multiplication_is_principal() {
        for g in [cotangent_groupoid(1), cotangent_groupoid(2), pair_groupoid()] {
            let b = PrincipalBundle::left_multiplication(&g.unwrap()).unwrap();
            let r = check_principal_bundle(&b, "lm");
            assert_eq!(r.status, Status::Pass, "{}", r.to_text(false));
            assert!(r.find("lm/principal/point").unwrap().passed());
        }
    }

    #[test]
    fn doubled_form_is_not_multiplicative() {
        let b = PrincipalBundle::left_multiplication(&cotangent_groupoid(2).unwrap()).unwrap();
        let b = b.with_gauge(doubled(b.gauge())).unwrap();
        let r = check_principal_bundle(&b, "lm");
        assert!(r.find("lm/multiplicative").unwrap().failed());
        assert!(r.find("lm/associativity").unwrap().passed());
    }

    #[test]
    fn attested_principality() {
        let b = PrincipalBundle::left_multiplication(&cotangent_groupoid(1).unwrap()).unwrap();
        let b = PrincipalBundle::new(
            b.groupoid().clone(),
            b.base().clone(),
            b.s().clone(),
            b.t().clone(),
            b.action().clone(),
            b.gauge().clone(),
            Principality::Attested,
        )
        .unwrap();
        let r = check_principal_bundle(&b, "lm");
        let entry = r.find("lm/principal").unwrap();
        assert_eq!(entry.status, Status::Attested);
        assert_eq!(entry.notes.as_deref(), Some("attested: not verified"));
        assert!(!r.failed());
    }

    #[test]
    fn pullback_along_identity_and_gauge() {
        let g = cotangent_groupoid(2).unwrap();
        let b = PrincipalBundle::left_multiplication(&g).unwrap();
        let (q, proj, r) = pullback_bundle(&b, &DManMorphism::identity(g.base()), None, "pb").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert!(proj.gauge().is_zero());
        assert_eq!(q.omega(), &b.omega().pullback(proj.map()).unwrap());

    }

    #[test]
    fn pullback_along_gauge_transformation() {
        let g = cotangent_groupoid(2).unwrap();
        let b = PrincipalBundle::left_multiplication(&g).unwrap();
        let beta = area_form(g.presentation().objects()).unwrap();
        let shifted = g.base().gauge_transform(&beta.neg()).unwrap();
        let f = DManMorphism::new(
            SmoothMap::identity(g.base().patch()),
            beta.clone(),
            shifted,
            g.base().clone(),
        )
        .unwrap();
        let (q, proj, r) = pullback_bundle(&b, &f, None, "pb").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        let c = FiberChart::auto(b.s(), f.map()).unwrap();
        let expected = b
            .omega()
            .pullback(c.pr1())
            .unwrap()
            .add(&beta.pullback(c.pr2()).unwrap())
            .unwrap();
        assert_eq!(q.omega(), &expected);
        assert_eq!(proj.gauge(), &beta.pullback(c.pr2()).unwrap());
    }

    #[test]
    fn pullback_along_projection() {
        let g = cotangent_groupoid(1).unwrap();
        let b = PrincipalBundle::left_multiplication(&g).unwrap();
        let m = g.presentation().objects();
        let n = Patch::new("N", &["x1", "y"], spread_samples(2, 6), vec![]).unwrap();
        let f = SmoothMap::projection(&n, m, &[0]).unwrap();
        let l = backward_image_generic(&f, g.base()).unwrap();
        let f = DManMorphism::new(f, DifferentialForm::zero(&n, 2), l, g.base().clone()).unwrap();
        let (q, _, r) = pullback_bundle(&b, &f, None, "pb").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(q.total().dim(), 3);
    }

    #[test]
    fn bundle_morphisms() {
        let g = cotangent_groupoid(1).unwrap();
        let b = PrincipalBundle::left_multiplication(&g).unwrap();
        let id = BundleMorphism::identity(&b);
        let r = check_bundle_morphism(&id, &b, &b, "id");
        assert!(r.passed(), "{}", r.to_text(false));
        let beta = unique_gauge(id.map(), id.base(), &b, &b).unwrap();
        assert!(beta.is_zero());

        let p = b.total();
        let x = ScalarExpr::var("x1");
        let xi = ScalarExpr::var("xi1");
        let stretch = SmoothMap::new(p, p, vec![x, &xi * &ScalarExpr::int(2)]).unwrap();
        let bad = BundleMorphism::new(stretch, DifferentialForm::zero(p, 2), id.base().clone()).unwrap();
        let r = check_bundle_morphism(&bad, &b, &b, "bad");
        assert!(r.find("bad/equivariance").unwrap().failed());
        assert!(r.find("bad/source").unwrap().passed());
    }

    fn cover_piece(g: &DLieGroupoid, name: &str, c: i64) -> LocalPiece {
        let arrows = g.presentation().arrows();
        let constraint = ScalarExpr::var("x1") - ScalarExpr::int(c);
        let samples: Vec<_> = spread_samples(2, 8)
            .into_iter()
            .filter(|s| s[0] != crate::symbolic::rat(c))
            .collect();
        let u = Patch::new(name, &["x1", "xi1"], samples, vec![constraint]).unwrap();
        LocalPiece {
            phi: SmoothMap::identity(arrows).with_endpoints(&u, arrows).unwrap(),
            omega: g.omega().clone(),
        }
    }

    #[test]
    fn gluing() {
        let g = cotangent_groupoid(1).unwrap();
        let total = g.presentation().arrows();
        let one = [cover_piece(&g, "U", 5)];
        let (form, _) = glue_characteristic_form(total, &one, &[], "glue").unwrap();
        assert_eq!(&form, g.omega());

        let two = [cover_piece(&g, "U0", 1), cover_piece(&g, "U1", -1)];
        let id = SmoothMap::identity(total);
        let transitions = [
            Transition { a: 0, b: 1, map: id.clone() },
            Transition { a: 1, b: 0, map: id.clone() },
        ];
        let (form, r) = glue_characteristic_form(total, &two, &transitions, "glue").unwrap();
        assert!(r.passed());
        assert!(r.find("glue/overlap-0-1").is_some());
        assert_eq!(&form, g.omega());

        let three = [two[0].clone(), two[1].clone(), cover_piece(&g, "U2", 3)];
        let transitions = [
            Transition { a: 0, b: 1, map: id.clone() },
            Transition { a: 1, b: 2, map: id.clone() },
            Transition { a: 0, b: 2, map: id.clone() },
        ];
        let (form, r) = glue_characteristic_form(total, &three, &transitions, "glue").unwrap();
        assert!(r.find("glue/cocycle-0-1-2").unwrap().passed());
        assert_eq!(&form, g.omega());

        let mut bad = two.clone();
        bad[1].omega = g.omega().scale(&ScalarExpr::int(2));
        let e = glue_characteristic_form(total, &bad, &[], "glue").unwrap_err();
        assert!(matches!(e, Error::OverlapMismatch(ref r) if !r.is_empty()));

        let shift = SmoothMap::new(
            total,
            total,
            vec![ScalarExpr::var("x1"), ScalarExpr::var("xi1") + ScalarExpr::int(1)],
        )
        .unwrap();
        let broken = [Transition { a: 0, b: 1, map: shift }];
        let e = glue_characteristic_form(total, &two, &broken, "glue").unwrap_err();
        assert!(matches!(e, Error::CocycleFails(_)));
    }

    #[test]
    fn unit_bibundles_verify() {
        for g in [cotangent_groupoid(1), cotangent_groupoid(2), pair_groupoid()] {
            let b = Bibundle::unit(&g.unwrap()).unwrap();
            let r = check_bibundle(&b, "unit");
            assert_eq!(r.status, Status::Pass, "{}", r.to_text(false));
        }
    }

    #[test]
    fn identity_morphism_gives_unit_bibundle() {
        let g = cotangent_groupoid(2).unwrap();
        let p = g.presentation();
        let id = crate::groupoid::DLieMorphism::new(
            SmoothMap::identity(p.arrows()),
            DifferentialForm::zero(p.arrows(), 2),
            SmoothMap::identity(p.objects()),
            DifferentialForm::zero(p.objects(), 2),
        )
        .unwrap();
        let (b, r) = bundle_from_morphism(&id, &g, &g, None, "pf").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert!(b.same_data(&Bibundle::unit(&g).unwrap()));
        assert_eq!(b.omega().on_patch(p.arrows()).unwrap(), *g.omega());
    }

    #[test]
    fn aligning_morphism_bibundle() {
        let pair = pair_groupoid().unwrap();
        let (aligned, iso, _) = target_align(&pair, "align").unwrap();
        let (b, r) = bundle_from_morphism(&iso, &pair, &aligned, None, "pf").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        let c = FiberChart::auto(aligned.presentation().s(), iso.base_map()).unwrap();
        assert_eq!(b.omega(), &aligned.omega().pullback(c.pr1()).unwrap());
    }

    #[test]
    fn gauge_weak_equivalence_bibundle() {
        let g = cotangent_groupoid(2).unwrap();
        let p = g.presentation();
        let gamma = area_form(p.objects()).unwrap();
        let f = crate::groupoid::DLieMorphism::with_derived_alpha(
            SmoothMap::identity(p.arrows()),
            SmoothMap::identity(p.objects()),
            gamma,
            &g,
            &g,
        )
        .unwrap();
        let (_, r) = bundle_from_morphism(&f, &g, &g, None, "we").unwrap();
        assert!(r.find("we/left/multiplicative").unwrap().passed());
        assert!(r.find("we/right/multiplicative").unwrap().passed());
        assert!(r.passed(), "{}", r.to_text(false));
    }

    #[test]
    fn tensor_with_unit_descends() {
        let h = cotangent_groupoid(1).unwrap();
        let unit = Bibundle::unit(&h).unwrap();
        let chart = FiberChart::auto(unit.left().s(), unit.left().t()).unwrap();
        let q = Quotient::right_unit(&unit, &chart).unwrap();
        let (omega, r) =
            tensor_characteristic_form(&unit, &unit, Some(chart.clone()), Some(&q), "tensor").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(omega.unwrap(), *unit.omega());

        let mutated = unit.with_gauge(doubled(unit.left().gauge())).unwrap();
        let e = tensor_characteristic_form(&mutated, &unit, Some(chart), None, "tensor").unwrap_err();
        assert!(matches!(e, Error::NotBasic(_)));
    }

    #[test]
    fn tensor_of_morphism_bibundle_with_unit() {
        let pair = pair_groupoid().unwrap();
        let (aligned, iso, _) = target_align(&pair, "align").unwrap();
        let (pf, _) = bundle_from_morphism(&iso, &pair, &aligned, None, "pf").unwrap();
        let unit = Bibundle::unit(&pair).unwrap();
        let chart = FiberChart::auto(pf.left().s(), unit.left().t()).unwrap();
        let q = Quotient::right_unit(&pf, &chart).unwrap();
        let (omega, r) = tensor_characteristic_form(&pf, &unit, Some(chart), Some(&q), "t").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(omega.unwrap(), *pf.omega());
    }

    #[test]
    fn nondegeneracy() {
        let cot = Bibundle::unit(&cotangent_groupoid(2).unwrap()).unwrap();
        let r = check_nondegenerate(&cot, "nd");
        assert_eq!(r.status, Status::Pass, "{}", r.to_text(false));

        let (aligned, _, _) = target_align(&pair_groupoid().unwrap(), "align").unwrap();
        let r = check_nondegenerate(&Bibundle::unit(&aligned).unwrap(), "nd");
        assert_eq!(r.status, Status::Pass, "{}", r.to_text(false));

        let total = cot.total();
        let flat = DifferentialForm::dx(total, 0)
            .wedge(&DifferentialForm::dx(total, 1))
            .unwrap();
        let degenerate = cot
            .with_gauge(GaugePair::new(flat, DifferentialForm::zero(total, 2)).unwrap())
            .unwrap();
        let r = check_nondegenerate(&degenerate, "nd");
        assert!(r.failed());
        assert!(r.find("nd/closed").unwrap().passed());

        let orbifold = unit_groupoid(cotangent_groupoid(1).unwrap().base()).unwrap();
        let r = check_nondegenerate(&Bibundle::unit(&orbifold).unwrap(), "nd");
        assert_eq!(r.status, Status::Skipped);
    }
}
