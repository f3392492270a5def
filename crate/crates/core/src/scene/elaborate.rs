//! Builds core objects from validated declarations.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebroid::{AlgebroidMorphism, AlgebroidPresentation, Attestations, DLieAlgebroid, ImForm};
use crate::bundles::{Action, Bibundle, BundleMorphism, DivisionMap, PrincipalBundle, Principality, Quotient, unique_gauge};
use crate::chart::{spread_samples, FiberChart};
use crate::dirac::{backward_image_generic, DiracStructure, GeneralizedSection};
use crate::dman::DManMorphism;
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap, VectorField};
use crate::fixtures::unit_groupoid;
use crate::groupoid::{DLieGroupoid, DLieMorphism, GaugePair, GroupoidPresentation};
use crate::linalg::ExprMatrix;
use crate::symbolic::{Rational, RationalPoint, ScalarExpr, Var};

use super::expr::{self, Scope};
use super::schema::{Decl, Kind};
use super::sexp::Node;

const DEFAULT_SAMPLES: usize = 6;

pub struct Groupoid {
    pub presentation: GroupoidPresentation,
    pub dlie: Option<DLieGroupoid>,
}

/// A morphism together with the names of its endpoints.
pub struct Between<T> {
    pub value: T,
    pub source: String,
    pub target: String,
}

/// Everything declared so far, by kind and name.
#[derive(Default)]
pub struct Env {
    pub patches: BTreeMap<String, Patch>,
    pub charts: BTreeMap<String, FiberChart>,
    pub maps: BTreeMap<String, SmoothMap>,
    pub forms: BTreeMap<String, DifferentialForm>,
    pub fields: BTreeMap<String, VectorField>,
    pub diracs: BTreeMap<String, DiracStructure>,
    pub morphisms: BTreeMap<String, DManMorphism>,
    pub gauges: BTreeMap<String, GaugePair>,
    pub groupoids: BTreeMap<String, Groupoid>,
    pub dlie_morphisms: BTreeMap<String, Between<DLieMorphism>>,
    pub actions: BTreeMap<String, Action>,
    pub divisions: BTreeMap<String, DivisionMap>,
    pub bundles: BTreeMap<String, PrincipalBundle>,
    pub bibundles: BTreeMap<String, Bibundle>,
    pub bundle_morphisms: BTreeMap<String, Between<BundleMorphism>>,
    pub quotients: BTreeMap<String, Quotient>,
    pub algebroids: BTreeMap<String, AlgebroidPresentation>,
    pub im_forms: BTreeMap<String, ImForm>,
    pub dlie_algebroids: BTreeMap<String, DLieAlgebroid>,
    pub algebroid_morphisms: BTreeMap<String, AlgebroidMorphism>,
    pub attestations: BTreeMap<String, Attestations>,
    failed: BTreeMap<(Kind, String), String>,
}

impl Scope for Env {
    fn form(&self, name: &str) -> Option<&DifferentialForm> {
        self.forms.get(name)
    }

    fn map(&self, name: &str) -> Option<&SmoothMap> {
        self.maps.get(name)
    }
}

pub fn name(node: &Node) -> &str {
    node.symbol().expect("validated reference")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

impl Env {
    fn lookup<'a, T>(&self, table: &'a BTreeMap<String, T>, kind: Kind, n: &str) -> Result<&'a T> {
        if let Some(v) = table.get(n) {
            return Ok(v);
        }
        Err(match self.failed.get(&(kind, n.to_string())) {
            Some(why) => Error::PrerequisiteFailed(format!("{kind} `{n}` is unavailable: {why}")),
            None => invalid(format!("no {kind} named `{n}`")),
        })
    }

    pub fn patch(&self, node: &Node) -> Result<Patch> {
        let n = name(node);
        if let Some(p) = self.patches.get(n) {
            return Ok(p.clone());
        }
        if self.charts.contains_key(n) || self.failed.contains_key(&(Kind::Chart, n.to_string())) {
            return Ok(self.chart(node)?.patch().clone());
        }
        self.lookup(&self.patches, Kind::Patch, n).cloned()
    }

    pub fn chart(&self, node: &Node) -> Result<&FiberChart> {
        self.lookup(&self.charts, Kind::Chart, name(node))
    }

    pub fn map(&self, node: &Node) -> Result<&SmoothMap> {
        self.lookup(&self.maps, Kind::Map, name(node))
    }

    pub fn form(&self, node: &Node) -> Result<&DifferentialForm> {
        self.lookup(&self.forms, Kind::Form, name(node))
    }

    pub fn field(&self, node: &Node) -> Result<&VectorField> {
        self.lookup(&self.fields, Kind::VectorField, name(node))
    }

    pub fn dirac(&self, node: &Node) -> Result<&DiracStructure> {
        self.lookup(&self.diracs, Kind::Dirac, name(node))
    }

    pub fn morphism(&self, node: &Node) -> Result<&DManMorphism> {
        self.lookup(&self.morphisms, Kind::Morphism, name(node))
    }

    pub fn groupoid(&self, node: &Node) -> Result<&Groupoid> {
        self.lookup(&self.groupoids, Kind::Groupoid, name(node))
    }

    pub fn dlie(&self, node: &Node) -> Result<&DLieGroupoid> {
        self.groupoid(node)?.dlie.as_ref().ok_or_else(|| {
            invalid(format!("groupoid `{}` has no :base and :gauge", name(node)))
        })
    }

    pub fn dlie_morphism(&self, node: &Node) -> Result<&Between<DLieMorphism>> {
        self.lookup(&self.dlie_morphisms, Kind::DLieMorphism, name(node))
    }

    pub fn bundle(&self, node: &Node) -> Result<&PrincipalBundle> {
        self.lookup(&self.bundles, Kind::Bundle, name(node))
    }

    pub fn bibundle(&self, node: &Node) -> Result<&Bibundle> {
        self.lookup(&self.bibundles, Kind::Bibundle, name(node))
    }

    pub fn is_bibundle(&self, node: &Node) -> bool {
        let n = name(node);
        self.bibundles.contains_key(n) || self.failed.contains_key(&(Kind::Bibundle, n.to_string()))
    }

    pub fn bundle_morphism(&self, node: &Node) -> Result<&Between<BundleMorphism>> {
        self.lookup(&self.bundle_morphisms, Kind::BundleMorphism, name(node))
    }

    pub fn quotient(&self, node: &Node) -> Result<&Quotient> {
        self.lookup(&self.quotients, Kind::Quotient, name(node))
    }

    pub fn dlie_algebroid(&self, node: &Node) -> Result<&DLieAlgebroid> {
        self.lookup(&self.dlie_algebroids, Kind::DLieAlgebroid, name(node))
    }

    /// An algebroid, or the underlying algebroid of a D-Lie algebroid.
    pub fn algebroid(&self, node: &Node) -> Result<&AlgebroidPresentation> {
        let n = name(node);
        if self.dlie_algebroids.contains_key(n)
            || self.failed.contains_key(&(Kind::DLieAlgebroid, n.to_string()))
        {
            return Ok(self.dlie_algebroid(node)?.algebroid());
        }
        self.lookup(&self.algebroids, Kind::Algebroid, n)
    }

    pub fn algebroid_morphism(&self, node: &Node) -> Result<&AlgebroidMorphism> {
        self.lookup(&self.algebroid_morphisms, Kind::AlgebroidMorphism, name(node))
    }

    pub fn attestation(&self, node: &Node) -> Result<&Attestations> {
        self.lookup(&self.attestations, Kind::Attestation, name(node))
    }

    fn matrix(&self, node: &Node, patch: &Patch) -> Result<ExprMatrix> {
        let rows = node
            .list()
            .expect("validated matrix")
            .iter()
            .map(|r| expr::scalars(r, patch, self))
            .collect::<Result<Vec<_>>>()?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::ShapeMismatch("matrix rows differ in length".into()));
        }
        Ok(ExprMatrix::from_rows(rows))
    }

    /// Elaborates one declaration; a failure is remembered so dependants
    /// report it.
    pub fn declare(&mut self, d: &Decl) -> Result<()> {
        let r = self.build(d);
        if let Err(e) = &r {
            self.failed.insert((d.kind, d.name.clone()), e.to_string());
        }
        r
    }

    fn build(&mut self, d: &Decl) -> Result<()> {
        let n = d.name.clone();
        let get = |k: &str| d.get(k);
        let need = |k: &str| d.get(k).ok_or_else(|| invalid(format!("`{}` needs :{k}", d.name)));
        match d.kind {
            Kind::Patch => {
                let coords: Vec<&str> = need("coords")?
                    .list()
                    .expect("validated coords")
                    .iter()
                    .map(name)
                    .collect();
                // Constraints are read on a throwaway patch with one sample.
                let origin = vec![vec![Rational::zero(); coords.len()]];
                let bare = Patch::new(&n, &coords, origin, vec![])?;
                let constraints = match get("constraints") {
                    Some(c) => expr::scalars(c, &bare, self)?,
                    None => vec![],
                };
                let samples = match get("samples") {
                    Some(s) => s
                        .list()
                        .expect("validated points")
                        .iter()
                        .map(|p| {
                            p.list()
                                .expect("validated point")
                                .iter()
                                .map(|v| v.number().expect("validated number").clone())
                                .collect()
                        })
                        .collect(),
                    None => {
                        let vars: Vec<Var> = bare.coords().to_vec();
                        let mut kept = Vec::new();
                        for s in spread_samples(coords.len(), DEFAULT_SAMPLES * 2) {
                            let p = RationalPoint::from_coords(&vars, &s);
                            let mut ok = true;
                            for c in &constraints {
                                ok = ok && !c.evaluate(&p)?.is_zero();
                            }
                            if ok && kept.len() < DEFAULT_SAMPLES {
                                kept.push(s);
                            }
                        }
                        kept
                    }
                };
                self.patches.insert(n.clone(), Patch::new(&n, &coords, samples, constraints)?);
            }
            Kind::Chart => {
                let chart = if let Some(pair) = get("auto") {
                    match pair.list().expect("validated names") {
                        [f, g] => FiberChart::auto(self.map(f)?, self.map(g)?)?,
                        _ => return Err(invalid(format!("chart `{n}`: :auto takes two maps"))),
                    }
                } else {
                    FiberChart::new(
                        self.map(need("pr1")?)?.clone(),
                        self.map(need("pr2")?)?.clone(),
                        self.map(need("f")?)?.clone(),
                        self.map(need("g")?)?.clone(),
                    )?
                };
                self.charts.insert(n, chart);
            }
            Kind::Map => {
                let from = self.patch(need("from")?)?;
                let to = self.patch(need("to")?)?;
                let comps = expr::scalars(need("components")?, &from, self)?;
                self.maps.insert(n, SmoothMap::new(&from, &to, comps)?);
            }
            Kind::Form => {
                let on = self.patch(need("on")?)?;
                let w = expr::form(need("expr")?, &on, self)?;
                self.forms.insert(n, w);
            }
            Kind::VectorField => {
                let on = self.patch(need("on")?)?;
                let comps = expr::scalars(need("components")?, &on, self)?;
                self.fields.insert(n, VectorField::new(&on, comps)?);
            }
            Kind::Dirac => {
                let l = self.build_dirac(d)?;
                self.diracs.insert(n, l);
            }
            Kind::Morphism => {
                let map = self.map(need("map")?)?.clone();
                let gauge = match get("gauge") {
                    Some(g) => self.form(g)?.clone(),
                    None => DifferentialForm::zero(map.source(), 2),
                };
                let src = self.dirac(need("source")?)?.clone();
                let dst = self.dirac(need("target")?)?.clone();
                self.morphisms.insert(n, DManMorphism::new(map, gauge, src, dst)?);
            }
            Kind::GaugePair => {
                let tau = self.form(need("tau")?)?.clone();
                let sigma = self.form(need("sigma")?)?.clone();
                self.gauges.insert(n, GaugePair::new(tau, sigma)?);
            }
            Kind::Groupoid => {
                let g = self.build_groupoid(d)?;
                self.groupoids.insert(n, g);
            }
            Kind::DLieMorphism => {
                let arrows = self.map(need("arrows")?)?.clone();
                let base = self.map(need("base")?)?.clone();
                let beta = match get("beta") {
                    Some(b) => self.form(b)?.clone(),
                    None => DifferentialForm::zero(base.source(), 2),
                };
                let (sn, tn) = (need("source")?, need("target")?);
                let value = match get("alpha") {
                    Some(a) => DLieMorphism::new(arrows, self.form(a)?.clone(), base, beta)?,
                    None => DLieMorphism::with_derived_alpha(arrows, base, beta, self.dlie(sn)?, self.dlie(tn)?)?,
                };
                self.dlie_morphisms.insert(
                    n,
                    Between {
                        value,
                        source: name(sn).to_string(),
                        target: name(tn).to_string(),
                    },
                );
            }
            Kind::Action => {
                let a = Action::new(self.chart(need("chart")?)?.clone(), self.map(need("map")?)?.clone())?;
                self.actions.insert(n, a);
            }
            Kind::Division => {
                let a = DivisionMap::new(self.chart(need("chart")?)?.clone(), self.map(need("map")?)?.clone())?;
                self.divisions.insert(n, a);
            }
            Kind::Bundle => {
                let b = if let Some(g) = get("left-multiplication") {
                    PrincipalBundle::left_multiplication(self.dlie(g)?)?
                } else {
                    let principality = match get("division") {
                        Some(v) => Principality::Division(self.lookup(&self.divisions, Kind::Division, name(v))?.clone()),
                        None => Principality::Attested,
                    };
                    PrincipalBundle::new(
                        self.dlie(need("groupoid")?)?.clone(),
                        self.dirac(need("base")?)?.clone(),
                        self.map(need("s")?)?.clone(),
                        self.map(need("t")?)?.clone(),
                        self.lookup(&self.actions, Kind::Action, name(need("action")?))?.clone(),
                        self.lookup(&self.gauges, Kind::GaugePair, name(need("gauge")?))?.clone(),
                        principality,
                    )?
                };
                self.bundles.insert(n, b);
            }
            Kind::Bibundle => {
                let b = if let Some(g) = get("unit") {
                    Bibundle::unit(self.dlie(g)?)?
                } else {
                    let division = match get("division") {
                        Some(v) => Some(Principality::Division(
                            self.lookup(&self.divisions, Kind::Division, name(v))?.clone(),
                        )),
                        None => None,
                    };
                    Bibundle::new(
                        self.bundle(need("left")?)?.clone(),
                        self.dlie(need("right")?)?.clone(),
                        self.lookup(&self.actions, Kind::Action, name(need("action")?))?.clone(),
                        division,
                    )?
                };
                self.bibundles.insert(n, b);
            }
            Kind::BundleMorphism => {
                let map = self.map(need("map")?)?.clone();
                let base = self.morphism(need("base")?)?.clone();
                let (sn, tn) = (need("source")?, need("target")?);
                let gauge = match get("gauge") {
                    Some(g) => self.form(g)?.clone(),
                    None => unique_gauge(&map, &base, self.bundle(sn)?, self.bundle(tn)?)?,
                };
                self.bundle_morphisms.insert(
                    n,
                    Between {
                        value: BundleMorphism::new(map, gauge, base)?,
                        source: name(sn).to_string(),
                        target: name(tn).to_string(),
                    },
                );
            }
            Kind::Quotient => {
                let q = Quotient {
                    map: self.map(need("map")?)?.clone(),
                    section: self.map(need("section")?)?.clone(),
                };
                self.quotients.insert(n, q);
            }
            Kind::Algebroid => {
                let a = self.build_algebroid(d)?;
                self.algebroids.insert(n, a);
            }
            Kind::ImForm => {
                let forms = need("forms")?
                    .list()
                    .expect("validated names")
                    .iter()
                    .map(|f| self.form(f).cloned())
                    .collect::<Result<Vec<_>>>()?;
                self.im_forms.insert(n, ImForm::new(forms)?);
            }
            Kind::DLieAlgebroid => {
                let a = if let Some(l) = get("from-dirac") {
                    DLieAlgebroid::from_dirac(self.dirac(l)?)?
                } else {
                    let alg = self.lookup(&self.algebroids, Kind::Algebroid, name(need("algebroid")?))?.clone();
                    let base = self.dirac(need("base")?)?.clone();
                    let im = match get("imform") {
                        Some(r) => self.lookup(&self.im_forms, Kind::ImForm, name(r))?.clone(),
                        None => ImForm::zero(alg.base(), alg.rank()),
                    };
                    DLieAlgebroid::new(alg, base, im)?
                };
                self.dlie_algebroids.insert(n, a);
            }
            Kind::AlgebroidMorphism => {
                let f = if let Some(a) = get("identity") {
                    AlgebroidMorphism::identity(self.algebroid(a)?)
                } else {
                    let map = self.map(need("map")?)?.clone();
                    let m = self.matrix(need("matrix")?, map.source())?;
                    AlgebroidMorphism::new(map, m)?
                };
                self.algebroid_morphisms.insert(n, f);
            }
            Kind::Attestation => {
                let flag = |k: &str| get(k).and_then(Node::symbol) == Some("true");
                self.attestations.insert(
                    n,
                    Attestations {
                        orbit_spaces: flag("orbit-spaces"),
                        monodromy: flag("monodromy"),
                        fundamental_groups: flag("fundamental-groups"),
                    },
                );
            }
            Kind::Check => {}
        }
        Ok(())
    }

    fn build_dirac(&self, d: &Decl) -> Result<DiracStructure> {
        let on = || {
            d.get("on")
                .ok_or_else(|| invalid(format!("dirac `{}` needs :on", d.name)))
                .and_then(|p| self.patch(p))
        };
        if let Some(k) = d.get("kind") {
            let p = on()?;
            return Ok(match k.symbol() {
                Some("tangent") => DiracStructure::tangent(&p),
                _ => DiracStructure::cotangent(&p),
            });
        }
        if let Some(m) = d.get("bivector") {
            let p = on()?;
            return DiracStructure::from_bivector(&p, &self.matrix(m, &p)?);
        }
        if let Some(w) = d.get("two-form") {
            return DiracStructure::from_two_form(self.form(w)?);
        }
        if let Some(m) = d.get("frame") {
            let p = on()?;
            let cols = self.matrix(m, &p)?;
            let frame = (0..cols.rows())
                .map(|k| GeneralizedSection::from_column(&p, &cols.row(k)))
                .collect::<Result<Vec<_>>>()?;
            return DiracStructure::from_frame(&p, frame);
        }
        if let Some(l) = d.get("from") {
            let beta = d
                .get("gauge")
                .ok_or_else(|| invalid(format!("dirac `{}`: :from needs :gauge", d.name)))?;
            return self.dirac(l)?.gauge_transform(self.form(beta)?);
        }
        if let Some(l) = d.get("pullback") {
            let f = d
                .get("along")
                .ok_or_else(|| invalid(format!("dirac `{}`: :pullback needs :along", d.name)))?;
            return backward_image_generic(self.map(f)?, self.dirac(l)?);
        }
        Err(invalid(format!(
            "dirac `{}` needs one of :kind, :bivector, :two-form, :frame, :from, :pullback",
            d.name
        )))
    }

    fn build_groupoid(&self, d: &Decl) -> Result<Groupoid> {
        if let Some(l) = d.get("unit-of") {
            let g = unit_groupoid(self.dirac(l)?)?;
            return Ok(Groupoid {
                presentation: g.presentation().clone(),
                dlie: Some(g),
            });
        }
        let need = |k: &str| d.get(k).ok_or_else(|| invalid(format!("groupoid `{}` needs :{k}", d.name)));
        let m = |k: &str| -> Result<SmoothMap> { Ok(self.map(need(k)?)?.clone()) };
        let presentation = GroupoidPresentation::new(
            m("s")?,
            m("t")?,
            m("u")?,
            m("i")?,
            self.chart(need("pairs")?)?.clone(),
            m("m")?,
            self.chart(need("triples")?)?.clone(),
        )?;
        let dlie = match (d.get("base"), d.get("gauge")) {
            (Some(b), Some(g)) => Some(DLieGroupoid::new(
                presentation.clone(),
                self.dirac(b)?.clone(),
                self.lookup(&self.gauges, Kind::GaugePair, name(g))?.clone(),
            )?),
            (None, None) => None,
            _ => return Err(invalid(format!("groupoid `{}`: give both :base and :gauge", d.name))),
        };
        Ok(Groupoid { presentation, dlie })
    }

    fn build_algebroid(&self, d: &Decl) -> Result<AlgebroidPresentation> {
        let on = || {
            d.get("on")
                .ok_or_else(|| invalid(format!("algebroid `{}` needs :on", d.name)))
                .and_then(|p| self.patch(p))
        };
        if d.get("kind").is_some() {
            return Ok(AlgebroidPresentation::tangent(&on()?));
        }
        if let Some(m) = d.get("poisson") {
            let p = on()?;
            return AlgebroidPresentation::cotangent(&p, &self.matrix(m, &p)?);
        }
        if let Some(l) = d.get("dirac") {
            return Ok(AlgebroidPresentation::from_dirac(self.dirac(l)?)?.0);
        }
        let anchor = match d.get("anchor") {
            Some(a) => a
                .list()
                .expect("validated names")
                .iter()
                .map(|v| self.field(v).cloned())
                .collect::<Result<Vec<_>>>()?,
            None => return Err(invalid(format!(
                "algebroid `{}` needs one of :kind, :poisson, :dirac, :anchor",
                d.name
            ))),
        };
        let base = match (d.get("on"), anchor.first()) {
            (Some(_), _) => on()?,
            (None, Some(v)) => v.patch().clone(),
            (None, None) => return Err(invalid(format!("algebroid `{}` needs :on", d.name))),
        };
        let r = anchor.len();
        let mut structure = vec![vec![vec![ScalarExpr::zero(); r]; r]; r];
        let mut given = vec![vec![false; r]; r];
        let entries = d.get("brackets").and_then(Node::list).unwrap_or(&[]);
        let parsed = entries
            .iter()
            .map(|e| {
                let [i, j, c] = e.list().expect("validated bracket") else {
                    unreachable!("validated bracket")
                };
                let (i, j) = (i.natural().expect("index"), j.natural().expect("index"));
                if i >= r || j >= r {
                    return Err(invalid(format!("bracket index out of range for rank {r}")));
                }
                let c = expr::scalars(c, &base, self)?;
                if c.len() != r {
                    return Err(Error::ShapeMismatch(format!(
                        "bracket [{i},{j}] has {} coefficients for rank {r}",
                        c.len()
                    )));
                }
                Ok((i, j, c))
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, j, c) in &parsed {
            structure[*i][*j] = c.clone();
            given[*i][*j] = true;
        }
        for (i, j, c) in &parsed {
            if !given[*j][*i] {
                structure[*j][*i] = c.iter().map(|x| -x).collect();
            }
        }
        AlgebroidPresentation::new(&base, anchor, structure)
    }
}
