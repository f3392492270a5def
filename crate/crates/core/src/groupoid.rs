//! Lie groupoids in coordinates and the D-Lie groupoids they carry: gauge
//! pairs, the gauge parts of every structure map, target alignment and
//! homomorphisms.

use crate::chart::{form_identity, map_identity, FiberChart};
use crate::dirac::{backward_image_generic, compare_structures, error_entry, DiracStructure};
use crate::dman::{check_law, check_morphism, fiber_product, DManMorphism};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap};
use crate::report::CheckReport;

/// A Lie groupoid `G ⇉ M` on coordinate patches. `pairs` presents the
/// composable pairs `{(g, h) : s(g) = t(h)}` and `triples` the composable
/// triples as pairs of pairs sharing the middle arrow.
#[derive(Clone, Debug)]
pub struct GroupoidPresentation {
    arrows: Patch,
    objects: Patch,
    s: SmoothMap,
    t: SmoothMap,
    u: SmoothMap,
    i: SmoothMap,
    pairs: FiberChart,
    m: SmoothMap,
    triples: FiberChart,
}

impl GroupoidPresentation {
    pub fn new(
        s: SmoothMap,
        t: SmoothMap,
        u: SmoothMap,
        i: SmoothMap,
        pairs: FiberChart,
        m: SmoothMap,
        triples: FiberChart,
    ) -> Result<Self> {
        let arrows = s.source().clone();
        let objects = s.target().clone();
        arrows.ensure_same(t.source())?;
        objects.ensure_same(t.target())?;
        objects.ensure_same(u.source())?;
        arrows.ensure_same(u.target())?;
        arrows.ensure_same(i.source())?;
        arrows.ensure_same(i.target())?;
        pairs.patch().ensure_same(m.source())?;
        arrows.ensure_same(m.target())?;
        if !pairs.f().same_as(&s) || !pairs.g().same_as(&t) {
            return Err(Error::InvalidPatch {
                patch: pairs.patch().name().to_string(),
                reason: "composable pairs must be fibered over s on the left and t on the right"
                    .into(),
            });
        }
        if !triples.f().same_as(pairs.pr2()) || !triples.g().same_as(pairs.pr1()) {
            return Err(Error::InvalidPatch {
                patch: triples.patch().name().to_string(),
                reason: "composable triples must be pairs of pairs sharing the middle arrow"
                    .into(),
            });
        }
        Ok(GroupoidPresentation {
            arrows,
            objects,
            s,
            t,
            u,
            i,
            pairs,
            m,
            triples,
        })
    }

    pub fn arrows(&self) -> &Patch {
        &self.arrows
    }

    pub fn objects(&self) -> &Patch {
        &self.objects
    }

    pub fn s(&self) -> &SmoothMap {
        &self.s
    }

    pub fn t(&self) -> &SmoothMap {
        &self.t
    }

    pub fn u(&self) -> &SmoothMap {
        &self.u
    }

    pub fn i(&self) -> &SmoothMap {
        &self.i
    }

    pub fn m(&self) -> &SmoothMap {
        &self.m
    }

    pub fn pairs(&self) -> &FiberChart {
        &self.pairs
    }

    pub fn triples(&self) -> &FiberChart {
        &self.triples
    }

    pub fn pr1(&self) -> &SmoothMap {
        self.pairs.pr1()
    }

    pub fn pr2(&self) -> &SmoothMap {
        self.pairs.pr2()
    }

    /// The `k`-th arrow of a composable triple, `k` in `1..=3`.
    pub fn triple_pr(&self, k: usize) -> Result<SmoothMap> {
        match k {
            1 => self.pr1().compose(self.triples.pr1()),
            2 => self.pr2().compose(self.triples.pr1()),
            3 => self.pr2().compose(self.triples.pr2()),
            _ => Err(Error::Invalid(format!("no projection {k} on triples"))),
        }
    }

    /// `(a, b): Y → G⁽²⁾`.
    pub fn pair(&self, a: &SmoothMap, b: &SmoothMap) -> Result<SmoothMap> {
        self.pairs.lift(a, b)
    }

    fn id(&self) -> SmoothMap {
        SmoothMap::identity(&self.arrows)
    }

    /// `(u∘t) × Id`.
    pub fn unit_left(&self) -> Result<SmoothMap> {
        self.pair(&self.u.compose(&self.t)?, &self.id())
    }

    /// `Id × (u∘s)`.
    pub fn unit_right(&self) -> Result<SmoothMap> {
        self.pair(&self.id(), &self.u.compose(&self.s)?)
    }

    /// `i × Id`.
    pub fn inverse_left(&self) -> Result<SmoothMap> {
        self.pair(&self.i, &self.id())
    }

    /// `Id × i`.
    pub fn inverse_right(&self) -> Result<SmoothMap> {
        self.pair(&self.id(), &self.i)
    }

    /// `(m∘(pr1×pr2)) × pr3` on triples.
    pub fn assoc_left(&self) -> Result<SmoothMap> {
        self.pair(&self.m.compose(self.triples.pr1())?, &self.triple_pr(3)?)
    }

    /// `pr1 × (m∘(pr2×pr3))` on triples.
    pub fn assoc_right(&self) -> Result<SmoothMap> {
        self.pair(&self.triple_pr(1)?, &self.m.compose(self.triples.pr2())?)
    }
}

/// The groupoid axioms as identities of maps, and the submersion property of
/// `s` and `t` at every arrow sample.
pub fn verify_presentation(p: &GroupoidPresentation, id: &str) -> CheckReport {
    let idm = SmoothMap::identity(&p.objects);
    let idg = p.id();
    let row = |k: usize, title: &str, parts: Vec<CheckReport>| {
        CheckReport::node(format!("{id}/G{k}"), title, parts)
    };
    let sub = |k: usize, name: &str, title: &str, l: Result<SmoothMap>, r: Result<SmoothMap>| {
        map_identity(format!("{id}/G{k}/{name}"), title, l, r)
    };
    let mut children = vec![
        row(
            1,
            "units",
            vec![
                sub(1, "s", "s∘u = Id", p.s.compose(&p.u), Ok(idm.clone())),
                sub(1, "t", "t∘u = Id", p.t.compose(&p.u), Ok(idm.clone())),
            ],
        ),
        row(
            2,
            "source and target of products",
            vec![
                sub(2, "s", "s∘m = s∘pr2", p.s.compose(&p.m), p.s.compose(p.pr2())),
                sub(2, "t", "t∘m = t∘pr1", p.t.compose(&p.m), p.t.compose(p.pr1())),
            ],
        ),
        row(
            3,
            "source and target of inverses",
            vec![
                sub(3, "s", "s∘i = t", p.s.compose(&p.i), Ok(p.t.clone())),
                sub(3, "t", "t∘i = s", p.t.compose(&p.i), Ok(p.s.clone())),
            ],
        ),
    ];
    let leaf = |k: usize, title: &str, l: Result<SmoothMap>, r: Result<SmoothMap>| {
        map_identity(format!("{id}/G{k}"), title, l, r)
    };
    children.push(leaf(4, "i∘u = u", p.i.compose(&p.u), Ok(p.u.clone())));
    children.push(leaf(
        5,
        "m∘((u∘t)×Id) = Id",
        p.unit_left().and_then(|k| p.m.compose(&k)),
        Ok(idg.clone()),
    ));
    children.push(leaf(
        6,
        "m∘(Id×(u∘s)) = Id",
        p.unit_right().and_then(|k| p.m.compose(&k)),
        Ok(idg.clone()),
    ));
    children.push(leaf(
        7,
        "m∘(i×Id) = u∘s",
        p.inverse_left().and_then(|k| p.m.compose(&k)),
        p.u.compose(&p.s),
    ));
    children.push(leaf(
        8,
        "m∘(Id×i) = u∘t",
        p.inverse_right().and_then(|k| p.m.compose(&k)),
        p.u.compose(&p.t),
    ));
    children.push(leaf(
        9,
        "m∘(m×Id) = m∘(Id×m) on triples",
        p.assoc_left().and_then(|k| p.m.compose(&k)),
        p.assoc_right().and_then(|k| p.m.compose(&k)),
    ));
    let mut sub_children = Vec::new();
    for (name, map) in [("s", &p.s), ("t", &p.t)] {
        for (k, x) in p.arrows.samples().iter().enumerate() {
            let cid = format!("{id}/submersion/{name}/sample-{k}");
            let title = format!("d{name} has full rank");
            sub_children.push(match map.jacobian_at(x) {
                Ok(j) => CheckReport::check(cid, title, j.rank() == p.objects.dim())
                    .with_witness(x.to_string()),
                Err(e) => error_entry(&cid, &title, &e),
            });
        }
    }
    children.push(CheckReport::node(
        format!("{id}/submersion"),
        "source and target are submersions",
        sub_children,
    ));
    CheckReport::node(id, "Lie groupoid", children)
}

/// Closed 2-forms `(τ, σ)` on the arrows: the gauge parts of `t` and `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePair {
    tau: DifferentialForm,
    sigma: DifferentialForm,
}

impl GaugePair {
    pub fn new(tau: DifferentialForm, sigma: DifferentialForm) -> Result<Self> {
        tau.patch().ensure_same(sigma.patch())?;
        for f in [&tau, &sigma] {
            if f.degree() != 2 {
                return Err(Error::WrongDegree {
                    expected: 2,
                    found: f.degree(),
                });
            }
            f.ensure_closed()?;
        }
        Ok(GaugePair { tau, sigma })
    }

    pub fn tau(&self) -> &DifferentialForm {
        &self.tau
    }

    pub fn sigma(&self) -> &DifferentialForm {
        &self.sigma
    }
}

/// A Lie groupoid with a Dirac structure on its objects and a gauge pair.
#[derive(Clone, Debug)]
pub struct DLieGroupoid {
    presentation: GroupoidPresentation,
    base: DiracStructure,
    gauge: GaugePair,
    omega: DifferentialForm,
}

impl DLieGroupoid {
    pub fn new(
        presentation: GroupoidPresentation,
        base: DiracStructure,
        gauge: GaugePair,
    ) -> Result<Self> {
        presentation.objects.ensure_same(base.patch())?;
        presentation.arrows.ensure_same(gauge.tau.patch())?;
        let omega = gauge.tau.sub(&gauge.sigma)?;
        Ok(DLieGroupoid {
            presentation,
            base,
            gauge,
            omega,
        })
    }

    pub fn presentation(&self) -> &GroupoidPresentation {
        &self.presentation
    }

    pub fn base(&self) -> &DiracStructure {
        &self.base
    }

    pub fn gauge(&self) -> &GaugePair {
        &self.gauge
    }

    pub fn tau(&self) -> &DifferentialForm {
        &self.gauge.tau
    }

    pub fn sigma(&self) -> &DifferentialForm {
        &self.gauge.sigma
    }

    /// `Ω = τ − σ`.
    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    /// `L_G = s*L_M − σ`.
    pub fn arrow_dirac(&self) -> Result<DiracStructure> {
        backward_image_generic(&self.presentation.s, &self.base)?
            .gauge_transform(&self.gauge.sigma.neg())
    }

    /// `t*L_M − τ`, equal to [`Self::arrow_dirac`] when condition (i) holds.
    pub fn arrow_dirac_from_target(&self) -> Result<DiracStructure> {
        backward_image_generic(&self.presentation.t, &self.base)?
            .gauge_transform(&self.gauge.tau.neg())
    }

    /// `(s, σ): (G, L_G) → (M, L_M)`.
    pub fn source_morphism(&self) -> Result<DManMorphism> {
        DManMorphism::new(
            self.presentation.s.clone(),
            self.gauge.sigma.clone(),
            self.arrow_dirac()?,
            self.base.clone(),
        )
    }

    /// `(t, τ): (G, L_G) → (M, L_M)`.
    pub fn target_morphism(&self) -> Result<DManMorphism> {
        DManMorphism::new(
            self.presentation.t.clone(),
            self.gauge.tau.clone(),
            self.arrow_dirac()?,
            self.base.clone(),
        )
    }

    /// Whether `σ = 0`.
    pub fn is_target_aligned(&self) -> bool {
        self.gauge.sigma.is_zero()
    }

    /// Equality of all data: presentation maps, base structure and gauge pair.
    pub fn same_data(&self, other: &DLieGroupoid) -> bool {
        let a = &self.presentation;
        let b = &other.presentation;
        a.s.same_as(&b.s)
            && a.t.same_as(&b.t)
            && a.u.same_as(&b.u)
            && a.i.same_as(&b.i)
            && a.m.same_as(&b.m)
            && self.base == other.base
            && self.gauge == other.gauge
    }
}

/// `m*Ω − pr1*Ω − pr2*Ω` on composable pairs.
pub fn multiplicativity_defect(
    p: &GroupoidPresentation,
    omega: &DifferentialForm,
) -> Result<DifferentialForm> {
    omega
        .pullback(&p.m)?
        .sub(&omega.pullback(p.pr1())?)?
        .sub(&omega.pullback(p.pr2())?)
}

/// Conditions (i) `t*L_M = s*L_M + Ω` and (ii) multiplicativity of `Ω`,
/// plus the consistency of the two descriptions of `L_G` and the Dirac
/// structure on composable pairs.
pub fn check_dlie_conditions(g: &DLieGroupoid, id: &str) -> CheckReport {
    let p = &g.presentation;
    let cond_i = match backward_image_generic(&p.s, &g.base) {
        Ok(pulled) => check_law(&p.t, &g.omega, &pulled, &g.base, &format!("{id}/i")),
        Err(e) => error_entry(&format!("{id}/i"), "t*L_M = s*L_M + Ω", &e),
    };
    let mut cond_i = cond_i;
    cond_i.title = "t*L_M = s*L_M + Ω".into();
    let cond_ii = form_identity(
        format!("{id}/ii"),
        "Ω is multiplicative",
        multiplicativity_defect(p, &g.omega),
        Ok(DifferentialForm::zero(p.pairs.patch(), 2)),
    );
    let arrow = match (g.arrow_dirac(), g.arrow_dirac_from_target()) {
        (Ok(a), Ok(b)) => {
            compare_structures(&a, &b, &format!("{id}/arrow-dirac"), "s*L_M − σ = t*L_M − τ")
        }
        (Err(e), _) | (_, Err(e)) => {
            error_entry(&format!("{id}/arrow-dirac"), "s*L_M − σ = t*L_M − τ", &e)
        }
    };
    let pid = format!("{id}/composable");
    let composable = if cond_i.passed() {
        let r = (|| -> Result<CheckReport> {
            let (_, report) = fiber_product(
                &g.source_morphism()?,
                &g.target_morphism()?,
                p.pairs.patch(),
                p.pr1(),
                p.pr2(),
                &pid,
            )?;
            Ok(report)
        })();
        match r {
            Ok(mut rep) => {
                rep.title = "composable pairs as a fiber product of (s, σ) and (t, τ)".into();
                rep
            }
            Err(e) => error_entry(&pid, "composable pairs as a fiber product", &e),
        }
    } else {
        CheckReport::skipped(pid, "composable pairs as a fiber product")
            .with_note("condition (i) failed")
    };
    CheckReport::node(id, "D-Lie groupoid conditions", vec![cond_i, cond_ii, arrow, composable])
}

/// Gauge parts of the unit, multiplication and inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedGaugeParts {
    pub upsilon: DifferentialForm,
    pub mu: DifferentialForm,
    pub iota: DifferentialForm,
}

/// `υ = −u*σ`, `μ = pr1*σ + pr2*σ − m*σ`, `ι = τ − i*σ`, without checking
/// the D-Lie conditions.
pub fn gauge_parts(g: &DLieGroupoid) -> Result<DerivedGaugeParts> {
    let p = &g.presentation;
    let sigma = &g.gauge.sigma;
    Ok(DerivedGaugeParts {
        upsilon: sigma.pullback(&p.u)?.neg(),
        mu: sigma
            .pullback(p.pr1())?
            .add(&sigma.pullback(p.pr2())?)?
            .sub(&sigma.pullback(&p.m)?)?,
        iota: g.gauge.tau.sub(&sigma.pullback(&p.i)?)?,
    })
}

pub fn derive_gauge_parts(g: &DLieGroupoid) -> Result<DerivedGaugeParts> {
    let report = check_dlie_conditions(g, "conditions");
    if !report.passed() {
        return Err(Error::PrerequisiteFailed(
            "the D-Lie groupoid conditions do not hold".into(),
        ));
    }
    gauge_parts(g)
}

/// The gauge equation of every groupoid axiom, one entry per row.
pub fn verify_gauge_axioms(g: &DLieGroupoid, id: &str) -> Result<CheckReport> {
    let p = &g.presentation;
    if !verify_presentation(p, "presentation").passed() {
        return Err(Error::PrerequisiteFailed(
            "the underlying groupoid axioms do not hold".into(),
        ));
    }
    let parts = gauge_parts(g)?;
    let (tau, sigma) = (&g.gauge.tau, &g.gauge.sigma);
    let DerivedGaugeParts { upsilon, mu, iota } = &parts;
    let sum = |a: Result<DifferentialForm>, b: Result<DifferentialForm>| a?.add(&b?);
    let diff = |a: Result<DifferentialForm>, b: Result<DifferentialForm>| a?.sub(&b?);
    let ut = p.u.compose(&p.t);
    let us = p.u.compose(&p.s);
    let rows = vec![
        form_identity(
            format!("{id}/G1"),
            "u*σ + υ = 0",
            sum(sigma.pullback(&p.u), Ok(upsilon.clone())),
            Ok(DifferentialForm::zero(&p.objects, 2)),
        ),
        form_identity(
            format!("{id}/G2"),
            "m*σ + μ = pr1*σ + pr2*σ",
            sum(sigma.pullback(&p.m), Ok(mu.clone())),
            sum(sigma.pullback(p.pr1()), sigma.pullback(p.pr2())),
        ),
        form_identity(
            format!("{id}/G3"),
            "i*σ + ι = τ",
            sum(sigma.pullback(&p.i), Ok(iota.clone())),
            Ok(tau.clone()),
        ),
        form_identity(
            format!("{id}/G4"),
            "u*ι + υ = υ",
            sum(iota.pullback(&p.u), Ok(upsilon.clone())),
            Ok(upsilon.clone()),
        ),
        form_identity(
            format!("{id}/G5"),
            "((u∘t)×Id)*μ = (u∘t)*σ",
            p.unit_left().and_then(|k| mu.pullback(&k)),
            ut.clone().and_then(|k| sigma.pullback(&k)),
        ),
        form_identity(
            format!("{id}/G6"),
            "(Id×(u∘s))*μ = (u∘s)*τ",
            p.unit_right().and_then(|k| mu.pullback(&k)),
            us.clone().and_then(|k| tau.pullback(&k)),
        ),
        form_identity(
            format!("{id}/G7"),
            "(i×Id)*μ − i*σ = s*υ + σ",
            diff(p.inverse_left().and_then(|k| mu.pullback(&k)), sigma.pullback(&p.i)),
            sum(upsilon.pullback(&p.s), Ok(sigma.clone())),
        ),
        form_identity(
            format!("{id}/G8"),
            "(Id×i)*μ − i*τ = t*υ + τ",
            diff(p.inverse_right().and_then(|k| mu.pullback(&k)), tau.pullback(&p.i)),
            sum(upsilon.pullback(&p.t), Ok(tau.clone())),
        ),
        form_identity(
            format!("{id}/G9"),
            "(pr1×pr2)*μ + (m×Id)*μ = (pr2×pr3)*μ + (Id×m)*μ",
            sum(
                mu.pullback(p.triples.pr1()),
                p.assoc_left().and_then(|k| mu.pullback(&k)),
            ),
            sum(
                mu.pullback(p.triples.pr2()),
                p.assoc_right().and_then(|k| mu.pullback(&k)),
            ),
        ),
    ];
    Ok(CheckReport::node(id, "gauge equations of the groupoid axioms", rows)
        .with_note("gauge parts of u, m, i taken from their defining formulas"))
}

/// A homomorphism `F: G → H` covering `f: M → N`, with gauge parts `α` on
/// the arrows and `β` on the objects.
#[derive(Clone, Debug)]
pub struct DLieMorphism {
    arrow_map: SmoothMap,
    alpha: DifferentialForm,
    base_map: SmoothMap,
    beta: DifferentialForm,
}

impl DLieMorphism {
    pub fn new(
        arrow_map: SmoothMap,
        alpha: DifferentialForm,
        base_map: SmoothMap,
        beta: DifferentialForm,
    ) -> Result<Self> {
        arrow_map.source().ensure_same(alpha.patch())?;
        base_map.source().ensure_same(beta.patch())?;
        for f in [&alpha, &beta] {
            if f.degree() != 2 {
                return Err(Error::WrongDegree {
                    expected: 2,
                    found: f.degree(),
                });
            }
            f.ensure_closed()?;
        }
        Ok(DLieMorphism {
            arrow_map,
            alpha,
            base_map,
            beta,
        })
    }

    /// Takes `α` from `F*σ^H + α = s*β + σ^G`.
    pub fn with_derived_alpha(
        arrow_map: SmoothMap,
        base_map: SmoothMap,
        beta: DifferentialForm,
        src: &DLieGroupoid,
        dst: &DLieGroupoid,
    ) -> Result<Self> {
        let alpha = beta
            .pullback(&src.presentation.s)?
            .add(src.sigma())?
            .sub(&dst.sigma().pullback(&arrow_map)?)?;
        DLieMorphism::new(arrow_map, alpha, base_map, beta)
    }

    pub fn arrow_map(&self) -> &SmoothMap {
        &self.arrow_map
    }

    pub fn alpha(&self) -> &DifferentialForm {
        &self.alpha
    }

    pub fn base_map(&self) -> &SmoothMap {
        &self.base_map
    }

    pub fn beta(&self) -> &DifferentialForm {
        &self.beta
    }
}

pub fn check_dlie_morphism(
    mor: &DLieMorphism,
    src: &DLieGroupoid,
    dst: &DLieGroupoid,
    id: &str,
) -> CheckReport {
    let (gp, hp) = (&src.presentation, &dst.presentation);
    let ff = &mor.arrow_map;
    let f = &mor.base_map;
    let beta = &mor.beta;
    let alpha = &mor.alpha;
    let mut children = vec![
        map_identity(
            format!("{id}/source"),
            "s∘F = f∘s",
            hp.s.compose(ff),
            f.compose(&gp.s),
        ),
        map_identity(
            format!("{id}/target"),
            "t∘F = f∘t",
            hp.t.compose(ff),
            f.compose(&gp.t),
        ),
        map_identity(
            format!("{id}/multiplication"),
            "F∘m = m∘(F×F)",
            ff.compose(&gp.m),
            ff.compose(gp.pr1())
                .and_then(|a| Ok((a, ff.compose(gp.pr2())?)))
                .and_then(|(a, b)| hp.pair(&a, &b))
                .and_then(|k| hp.m.compose(&k)),
        ),
    ];
    let bid = format!("{id}/base");
    children.push(
        match DManMorphism::new(f.clone(), beta.clone(), src.base.clone(), dst.base.clone()) {
            Ok(m) => {
                let mut r = check_morphism(&m, &bid);
                r.title = "(f, β) is a Dirac morphism".into();
                r
            }
            Err(e) => error_entry(&bid, "(f, β) is a Dirac morphism", &e),
        },
    );
    let sb = beta.pullback(&gp.s);
    let tb = beta.pullback(&gp.t);
    children.push(form_identity(
        format!("{id}/characteristic"),
        "F*Ω^H = t*β − s*β + Ω^G",
        dst.omega.pullback(ff),
        tb.clone()
            .and_then(|t| t.sub(sb.as_ref().map_err(Clone::clone)?))
            .and_then(|d| d.add(&src.omega)),
    ));
    children.push(form_identity(
        format!("{id}/source-gauge"),
        "F*σ^H + α = s*β + σ^G",
        dst.sigma().pullback(ff).and_then(|x| x.add(alpha)),
        sb.clone().and_then(|x| x.add(src.sigma())),
    ));
    children.push(form_identity(
        format!("{id}/target-gauge"),
        "F*τ^H + α = t*β + τ^G",
        dst.tau().pullback(ff).and_then(|x| x.add(alpha)),
        tb.and_then(|x| x.add(src.tau())),
    ));
    let aid = format!("{id}/arrows");
    children.push(match (src.arrow_dirac(), dst.arrow_dirac()) {
        (Ok(lg), Ok(lh)) => {
            let mut r = check_law(ff, alpha, &lg, &lh, &aid);
            r.title = "F*L_H = L_G + α".into();
            r
        }
        (Err(e), _) | (_, Err(e)) => error_entry(&aid, "F*L_H = L_G + α", &e),
    });
    CheckReport::node(id, "D-Lie groupoid morphism", children)
}

/// The groupoid with gauge pair `(τ − σ, 0)` and the isomorphism `(Id, σ)`
/// onto it, with its report.
pub fn target_align(
    g: &DLieGroupoid,
    id: &str,
) -> Result<(DLieGroupoid, DLieMorphism, CheckReport)> {
    if !check_dlie_conditions(g, "conditions").passed() {
        return Err(Error::PrerequisiteFailed(
            "the D-Lie groupoid conditions do not hold".into(),
        ));
    }
    let p = &g.presentation;
    let aligned = DLieGroupoid::new(
        p.clone(),
        g.base.clone(),
        GaugePair::new(g.omega.clone(), DifferentialForm::zero(&p.arrows, 2))?,
    )?;
    let iso = DLieMorphism::new(
        SmoothMap::identity(&p.arrows),
        g.gauge.sigma.clone(),
        SmoothMap::identity(&p.objects),
        DifferentialForm::zero(&p.objects, 2),
    )?;
    let parts = gauge_parts(g)?;
    let sigma = &g.gauge.sigma;
    let mult = form_identity(
        format!("{id}/multiplication-gauge"),
        "m*σ + μ = pr1*σ + pr2*σ",
        sigma.pullback(&p.m).and_then(|x| x.add(&parts.mu)),
        sigma
            .pullback(p.pr1())
            .and_then(|x| x.add(&sigma.pullback(p.pr2())?)),
    );
    let sid = format!("{id}/arrow-dirac");
    let stitle = "aligned arrow structure is L_G + σ";
    let shifted = match (g.arrow_dirac(), aligned.arrow_dirac()) {
        (Ok(a), Ok(b)) => match a.gauge_transform(sigma) {
            Ok(a) => compare_structures(&a, &b, &sid, stitle),
            Err(e) => error_entry(&sid, stitle, &e),
        },
        (Err(e), _) | (_, Err(e)) => error_entry(&sid, stitle, &e),
    };
    let children = vec![
        check_dlie_conditions(&aligned, &format!("{id}/aligned")),
        shifted,
        mult,
        check_dlie_morphism(&iso, g, &aligned, &format!("{id}/isomorphism")),
    ];
    let report = CheckReport::node(id, "target alignment", children);
    Ok((aligned, iso, report))
}
