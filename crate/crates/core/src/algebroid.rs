//! Lie algebroids in a global frame, infinitesimal multiplicative forms,
//! D-Lie algebroids and their morphisms, pullback algebroids and the
//! pointwise conditions of infinitesimal weak equivalence.

use crate::dirac::{check_dirac, error_entry, DiracStructure, GeneralizedSection};
use crate::dman::{check_morphism, DManMorphism};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap, VectorField};
use crate::groupoid::DLieGroupoid;
use crate::linalg::{ExprMatrix, Field, Matrix, QMatrix};
use crate::report::{CheckReport, Status};
use crate::symbolic::{Rational, RationalPoint, ScalarExpr};

/// A Lie algebroid of rank `r` over a patch, in a frame `e_1..e_r`:
/// anchors `ρ(e_i)` and structure functions `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug)]
pub struct AlgebroidPresentation {
    base: Patch,
    anchor: Vec<VectorField>,
    /// `structure[i][j][k] = c^k_{ij}`.
    structure: Vec<Vec<Vec<ScalarExpr>>>,
}

impl AlgebroidPresentation {
    pub fn new(
        base: &Patch,
        anchor: Vec<VectorField>,
        structure: Vec<Vec<Vec<ScalarExpr>>>,
    ) -> Result<Self> {
        let r = anchor.len();
        for v in &anchor {
            base.ensure_same(v.patch())?;
        }
        let shaped = structure.len() == r
            && structure
                .iter()
                .all(|row| row.len() == r && row.iter().all(|c| c.len() == r));
        if !shaped {
            return Err(Error::ShapeMismatch(format!(
                "structure functions must be {r}×{r}×{r}"
            )));
        }
        for c in structure.iter().flatten().flatten() {
            if let Some(v) = c.vars().iter().find(|v| base.index_of(v).is_none()) {
                return Err(Error::InvalidPatch {
                    patch: base.name().to_string(),
                    reason: format!("structure function mentions unknown variable `{v}`"),
                });
            }
        }
        Ok(AlgebroidPresentation {
            base: base.clone(),
            anchor,
            structure,
        })
    }

    /// `TM` with the coordinate frame.
    pub fn tangent(base: &Patch) -> Self {
        let n = base.dim();
        AlgebroidPresentation {
            base: base.clone(),
            anchor: (0..n).map(|i| VectorField::coordinate(base, i)).collect(),
            structure: zero_structure(n),
        }
    }

    /// `T*M` of a Poisson bivector in the frame `dx_j`, matching the graph
    /// frame `P e_j ⊕ dx_j`: `ρ(dx_j) = Σ_i π_ij ∂_i` and `[dx_i, dx_j] = d π_ji`.
    pub fn cotangent(base: &Patch, pi: &ExprMatrix) -> Result<Self> {
        let n = base.dim();
        if pi.rows() != n || pi.cols() != n || !pi.is_skew() {
            return Err(Error::NotSkew);
        }
        let anchor = (0..n)
            .map(|j| VectorField::new(base, pi.column(j)))
            .collect::<Result<Vec<_>>>()?;
        let structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| pi.get(j, i).differentiate(&base.coords()[k])).collect())
                    .collect()
            })
            .collect();
        AlgebroidPresentation::new(base, anchor, structure)
    }

    /// A Dirac structure as an algebroid in its own frame, with the Courant
    /// bracket, and its covector part as IM form.
    pub fn from_dirac(l: &DiracStructure) -> Result<(Self, ImForm)> {
        let frame = l.frame();
        let fm = l.frame_matrix();
        let r = frame.len();
        let mut structure = vec![vec![Vec::new(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let b = frame[i].courant_bracket(&frame[j])?;
                structure[i][j] = fm.solve(&b.column()).ok_or_else(|| {
                    Error::NotSmoothSubbundle(format!(
                        "the bracket of frame sections {i} and {j} leaves the structure"
                    ))
                })?;
            }
        }
        let anchor = frame.iter().map(|s| s.vector().clone()).collect();
        let im = ImForm::new(frame.iter().map(|s| s.covector().clone()).collect())?;
        Ok((AlgebroidPresentation::new(l.patch(), anchor, structure)?, im))
    }

    pub fn base(&self) -> &Patch {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[VectorField] {
        &self.anchor
    }

    pub fn structure(&self, i: usize, j: usize) -> &[ScalarExpr] {
        &self.structure[i][j]
    }

    /// The anchor of a section `Σ a_i e_i`.
    pub fn anchor_of(&self, a: &[ScalarExpr]) -> VectorField {
        let mut v = VectorField::zero(&self.base);
        for (ai, e) in a.iter().zip(&self.anchor) {
            v = v.add(&e.scale(ai)).expect("same patch");
        }
        v
    }

    /// `[a, b]` for sections given by coefficients in the frame.
    pub fn bracket(&self, a: &[ScalarExpr], b: &[ScalarExpr]) -> Vec<ScalarExpr> {
        let r = self.rank();
        let (ra, rb) = (self.anchor_of(a), self.anchor_of(b));
        let mut out: Vec<ScalarExpr> = (0..r).map(|k| &ra.apply(&b[k]) - &rb.apply(&a[k])).collect();
        for i in 0..r {
            for j in 0..r {
                let w = &a[i] * &b[j];
                if w.is_zero() {
                    continue;
                }
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    out[k] = &out[k] + &(&w * c);
                }
            }
        }
        out
    }

    /// `ρ` as an `n × r` matrix.
    pub fn anchor_matrix(&self) -> ExprMatrix {
        let n = self.base.dim();
        let cols: Vec<Vec<ScalarExpr>> = self.anchor.iter().map(|v| v.components().to_vec()).collect();
        Matrix::from_columns(n, &cols)
    }

    fn unit(&self, i: usize) -> Vec<ScalarExpr> {
        (0..self.rank())
            .map(|k| if k == i { ScalarExpr::one() } else { ScalarExpr::zero() })
            .collect()
    }
}

fn zero_structure(r: usize) -> Vec<Vec<Vec<ScalarExpr>>> {
    vec![vec![vec![ScalarExpr::zero(); r]; r]; r]
}

fn first_nonzero(v: &[ScalarExpr]) -> Option<(usize, &ScalarExpr)> {
    v.iter().enumerate().find(|(_, e)| !e.is_zero())
}

fn vector_leaf(id: String, title: &str, residual: &[ScalarExpr]) -> CheckReport {
    match first_nonzero(residual) {
        None => CheckReport::pass(id, title),
        Some((k, r)) => CheckReport::fail(id, title)
            .with_residual(r.to_string())
            .with_note(format!("component {k}")),
    }
}

/// Antisymmetry, anchor compatibility and the Jacobi identity on the frame.
pub fn check_algebroid(a: &AlgebroidPresentation, id: &str) -> CheckReport {
    let r = a.rank();
    let mut anti = Vec::new();
    let mut anchor = Vec::new();
    for i in 0..r {
        for j in i..r {
            let sum: Vec<ScalarExpr> = (0..r)
                .map(|k| &a.structure[i][j][k] + &a.structure[j][i][k])
                .collect();
            anti.push(vector_leaf(
                format!("{id}/antisymmetry/{i}-{j}"),
                "c^k_ij + c^k_ji = 0",
                &sum,
            ));
            if i == j {
                continue;
            }
            let lhs = a.anchor_of(&a.structure[i][j]);
            let title = "ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)]";
            let cid = format!("{id}/anchor/{i}-{j}");
            anchor.push(match a.anchor[i].bracket(&a.anchor[j]) {
                Ok(rhs) => vector_leaf(cid, title, lhs.add(&rhs.neg()).expect("same patch").components()),
                Err(e) => error_entry(&cid, title, &e),
            });
        }
    }
    let mut jacobi = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let (ei, ej, ek) = (a.unit(i), a.unit(j), a.unit(k));
                let t1 = a.bracket(&ei, &a.bracket(&ej, &ek));
                let t2 = a.bracket(&ej, &a.bracket(&ek, &ei));
                let t3 = a.bracket(&ek, &a.bracket(&ei, &ej));
                let sum: Vec<ScalarExpr> = (0..r).map(|m| &(&t1[m] + &t2[m]) + &t3[m]).collect();
                jacobi.push(vector_leaf(
                    format!("{id}/jacobi/{i}-{j}-{k}"),
                    "cyclic sum of [e_i, [e_j, e_k]] vanishes",
                    &sum,
                ));
            }
        }
    }
    CheckReport::node(
        id,
        "Lie algebroid",
        vec![
            CheckReport::node(format!("{id}/antisymmetry"), "antisymmetry", anti),
            CheckReport::node(format!("{id}/anchor"), "anchor is a bracket homomorphism", anchor),
            CheckReport::node(format!("{id}/jacobi"), "Jacobi identity", jacobi),
        ],
    )
}

/// `ρ*(e_i)`, one 1-form per frame element.
#[derive(Clone, Debug, PartialEq)]
pub struct ImForm {
    rho_star: Vec<DifferentialForm>,
}

impl ImForm {
    pub fn new(rho_star: Vec<DifferentialForm>) -> Result<Self> {
        for f in &rho_star {
            if f.degree() != 1 {
                return Err(Error::WrongDegree {
                    expected: 1,
                    found: f.degree(),
                });
            }
        }
        Ok(ImForm { rho_star })
    }

    /// `ρ*(dx_i) = dx_i` on a cotangent algebroid.
    pub fn identity_pairing(base: &Patch) -> Self {
        ImForm {
            rho_star: (0..base.dim()).map(|i| DifferentialForm::dx(base, i)).collect(),
        }
    }

    pub fn zero(base: &Patch, rank: usize) -> Self {
        ImForm {
            rho_star: vec![DifferentialForm::zero(base, 1); rank],
        }
    }

    pub fn forms(&self) -> &[DifferentialForm] {
        &self.rho_star
    }

    /// `ρ*` of a section `Σ a_i e_i`.
    pub fn of(&self, base: &Patch, a: &[ScalarExpr]) -> DifferentialForm {
        let mut out = DifferentialForm::zero(base, 1);
        for (ai, f) in a.iter().zip(&self.rho_star) {
            out = out.add(&f.scale(ai)).expect("same patch");
        }
        out
    }
}

/// An algebroid over a Dirac manifold with `ρ̃ = ρ ⊕ ρ*: A → L_M`.
#[derive(Clone, Debug)]
pub struct DLieAlgebroid {
    algebroid: AlgebroidPresentation,
    base_dirac: DiracStructure,
    im_form: ImForm,
}

impl DLieAlgebroid {
    pub fn new(algebroid: AlgebroidPresentation, base_dirac: DiracStructure, im_form: ImForm) -> Result<Self> {
        algebroid.base.ensure_same(base_dirac.patch())?;
        if im_form.rho_star.len() != algebroid.rank() {
            return Err(Error::ShapeMismatch(format!(
                "{} IM form entries for rank {}",
                im_form.rho_star.len(),
                algebroid.rank()
            )));
        }
        for f in &im_form.rho_star {
            algebroid.base.ensure_same(f.patch())?;
        }
        Ok(DLieAlgebroid {
            algebroid,
            base_dirac,
            im_form,
        })
    }

    /// `L_M` with `ρ̃` the identity.
    pub fn from_dirac(l: &DiracStructure) -> Result<Self> {
        let (a, im) = AlgebroidPresentation::from_dirac(l)?;
        DLieAlgebroid::new(a, l.clone(), im)
    }

    /// The rank-zero algebroid with `ρ̃ = 0`.
    pub fn trivial(l: &DiracStructure) -> Self {
        DLieAlgebroid {
            algebroid: AlgebroidPresentation {
                base: l.patch().clone(),
                anchor: vec![],
                structure: vec![],
            },
            base_dirac: l.clone(),
            im_form: ImForm { rho_star: vec![] },
        }
    }

    pub fn algebroid(&self) -> &AlgebroidPresentation {
        &self.algebroid
    }

    pub fn base_dirac(&self) -> &DiracStructure {
        &self.base_dirac
    }

    pub fn im_form(&self) -> &ImForm {
        &self.im_form
    }

    /// `ρ̃(a) = ρ(a) ⊕ ρ*(a)`.
    pub fn rho_tilde(&self, a: &[ScalarExpr]) -> Result<GeneralizedSection> {
        let base = &self.algebroid.base;
        GeneralizedSection::new(self.algebroid.anchor_of(a), self.im_form.of(base, a))
    }
}

/// `ρ*([e_i, e_j]) = L_{ρ(e_i)} ρ*(e_j) − ι_{ρ(e_j)} dρ*(e_i)` on all ordered
/// frame pairs.
pub fn check_im_form(d: &DLieAlgebroid, id: &str) -> Result<CheckReport> {
    let a = &d.algebroid;
    if check_algebroid(a, "algebroid").failed() {
        return Err(Error::PrerequisiteFailed("the algebroid does not verify".into()));
    }
    let r = a.rank();
    let rs = &d.im_form.rho_star;
    let mut children = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let cid = format!("{id}/{i}-{j}");
            let title = "ρ*([e_i, e_j]) = L_{ρ(e_i)} ρ*(e_j) − ι_{ρ(e_j)} dρ*(e_i)";
            let lhs = d.im_form.of(&a.base, &a.structure[i][j]);
            let rhs = rs[j]
                .lie_derivative(&a.anchor[i])
                .and_then(|l| l.sub(&rs[i].exterior_derivative().interior_product(&a.anchor[j])?));
            children.push(match rhs.and_then(|r| lhs.sub(&r)) {
                Ok(res) if res.is_zero() => CheckReport::pass(cid, title),
                Ok(res) => CheckReport::fail(cid, title).with_residual(res.to_string()),
                Err(e) => error_entry(&cid, title, &e),
            });
        }
    }
    Ok(CheckReport::node(id, "IM form is compatible with the bracket", children))
}

/// `ρ̃(e_i) ∈ L_M` generically and at samples, and `ρ̃` preserves brackets
/// with the Courant bracket on `L_M`.
pub fn check_dlie_algebroid(d: &DLieAlgebroid, id: &str) -> Result<CheckReport> {
    let a = &d.algebroid;
    if check_algebroid(a, "algebroid").failed() {
        return Err(Error::PrerequisiteFailed("the algebroid does not verify".into()));
    }
    if check_dirac(&d.base_dirac, "dirac").failed() {
        return Err(Error::PrerequisiteFailed("the base Dirac structure does not verify".into()));
    }
    let r = a.rank();
    let l = &d.base_dirac;
    let n = a.base.dim();
    let mut membership = Vec::new();
    for i in 0..r {
        let cid = format!("{id}/membership/{i}");
        let title = "ρ(e_i) ⊕ ρ*(e_i) ∈ L_M";
        let s = match d.rho_tilde(&a.unit(i)) {
            Ok(s) => s,
            Err(e) => {
                membership.push(error_entry(&cid, title, &e));
                continue;
            }
        };
        let mut entry = match l.membership_residual(&s) {
            Ok(None) => CheckReport::pass(&cid, title),
            Ok(Some((k, p))) => CheckReport::fail(&cid, title)
                .with_residual(p.to_string())
                .with_note(format!("pairing with frame element {k}")),
            Err(e) => error_entry(&cid, title, &e),
        };
        let col = s.column();
        for (k, x) in a.base.samples().iter().enumerate() {
            let sid = format!("{cid}/sample-{k}");
            let stitle = "membership at the sample";
            let at = (|| -> Result<bool> {
                let m = l.frame_matrix_at(x)?;
                let v = col
                    .iter()
                    .map(|c| c.evaluate(x))
                    .collect::<std::result::Result<Vec<Rational>, _>>()?;
                Ok(m.solve(&v).is_some() && m.rank() == n)
            })();
            entry.push(match at {
                Ok(ok) => CheckReport::check(sid, stitle, ok).with_witness(x.to_string()),
                Err(e) => error_entry(&sid, stitle, &e),
            });
        }
        membership.push(entry);
    }
    let mut brackets = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let cid = format!("{id}/bracket/{i}-{j}");
            let title = "[ρ̃(e_i), ρ̃(e_j)] = ρ̃([e_i, e_j])";
            let res = (|| -> Result<Vec<ScalarExpr>> {
                let lhs = d.rho_tilde(&a.unit(i))?.courant_bracket(&d.rho_tilde(&a.unit(j))?)?;
                let rhs = d.rho_tilde(&a.structure[i][j])?;
                Ok(lhs.column().iter().zip(rhs.column()).map(|(p, q)| p - &q).collect())
            })();
            brackets.push(match res {
                Ok(v) => match first_nonzero(&v) {
                    None => CheckReport::pass(cid, title),
                    Some((k, e)) => CheckReport::fail(cid, title)
                        .with_residual(e.to_string())
                        .with_note(if k < n {
                            format!("vector component {k}")
                        } else {
                            format!("covector component {}", k - n)
                        }),
                },
                Err(e) => error_entry(&cid, title, &e),
            });
        }
    }
    Ok(CheckReport::node(
        id,
        "D-Lie algebroid",
        vec![
            CheckReport::node(format!("{id}/membership"), "ρ̃ lands in L_M", membership),
            CheckReport::node(format!("{id}/bracket"), "ρ̃ is a bracket homomorphism", brackets),
        ],
    ))
}

/// Anchor and IM form read off a groupoid along its units.
#[derive(Clone, Debug)]
pub struct DerivedImForm {
    pub anchor: Vec<VectorField>,
    pub im_form: ImForm,
}

/// Vector fields spanning `ker ds` at the generic point.
pub fn source_kernel_frame(g: &DLieGroupoid) -> Result<Vec<VectorField>> {
    let p = g.presentation();
    p.s()
        .jacobian()
        .kernel()
        .into_iter()
        .map(|v| VectorField::new(p.arrows(), v))
        .collect()
}

/// For each `v` in the frame, the unique `η` with `t*η = ι_v Ω` along the
/// units, together with the anchor `dt(v)` there.
pub fn derive_im_form_from_groupoid(
    g: &DLieGroupoid,
    frame: &[VectorField],
    id: &str,
) -> Result<(DerivedImForm, CheckReport)> {
    let p = g.presentation();
    let m = p.objects();
    let u = p.u();
    let at_units = |e: &ScalarExpr| u.pull_scalar(e);
    let jt = p.t().jacobian().try_map(at_units)?;
    let js = p.s().jacobian().try_map(at_units)?;
    let omega = g.omega().two_form_matrix()?.try_map(at_units)?;
    let jt_dual = jt.transpose();
    let mut anchor = Vec::new();
    let mut forms = Vec::new();
    let mut children = Vec::new();
    for (k, v) in frame.iter().enumerate() {
        p.arrows().ensure_same(v.patch())?;
        let vu: Vec<ScalarExpr> = v.components().iter().map(at_units).collect::<Result<_>>()?;
        if let Some((i, r)) = first_nonzero(&js.mul_vec(&vu)) {
            return Err(Error::Invalid(format!(
                "frame field {k} is not in ker ds along the units: component {i} of ds(v) is {r}"
            )));
        }
        let rhs = omega.mul_vec(&vu);
        let eta = jt_dual.solve(&rhs).ok_or_else(|| {
            Error::NoSolution(format!("t*η = ι_v Ω has no solution for frame field {k}"))
        })?;
        if jt_dual.rank() < m.dim() {
            return Err(Error::NonUnique(format!(
                "t*η = ι_v Ω does not determine η for frame field {k}"
            )));
        }
        let eta = DifferentialForm::one_form(m, eta)?;
        children.push(
            CheckReport::pass(format!("{id}/{k}"), "t*η = ι_v Ω solved along the units")
                .with_witness(eta.to_string()),
        );
        anchor.push(VectorField::new(m, jt.mul_vec(&vu))?);
        forms.push(eta);
    }
    let report = CheckReport::node(id, "IM form of the groupoid", children);
    Ok((
        DerivedImForm {
            anchor,
            im_form: ImForm::new(forms)?,
        },
        report,
    ))
}

/// A base-covering algebroid morphism `F(e_i) = Σ_j F^j_i f*e'_j`, with the
/// coefficients `F^j_i` functions on the source base.
#[derive(Clone, Debug)]
pub struct AlgebroidMorphism {
    map: SmoothMap,
    /// `matrix[j][i] = F^j_i`.
    matrix: ExprMatrix,
}

impl AlgebroidMorphism {
    pub fn new(map: SmoothMap, matrix: ExprMatrix) -> Result<Self> {
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                if let Some(v) = matrix.get(i, j).vars().iter().find(|v| map.source().index_of(v).is_none()) {
                    return Err(Error::InvalidPatch {
                        patch: map.source().name().to_string(),
                        reason: format!("morphism coefficient mentions unknown variable `{v}`"),
                    });
                }
            }
        }
        Ok(AlgebroidMorphism { map, matrix })
    }

    pub fn identity(a: &AlgebroidPresentation) -> Self {
        AlgebroidMorphism {
            map: SmoothMap::identity(&a.base),
            matrix: Matrix::identity(a.rank()),
        }
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn matrix(&self) -> &ExprMatrix {
        &self.matrix
    }

    fn shape(&self, a: &AlgebroidPresentation, b: &AlgebroidPresentation) -> Result<()> {
        self.map.source().ensure_same(&a.base)?;
        self.map.target().ensure_same(&b.base)?;
        if self.matrix.rows() != b.rank() || self.matrix.cols() != a.rank() {
            return Err(Error::ShapeMismatch(format!(
                "morphism matrix is {}×{}, expected {}×{}",
                self.matrix.rows(),
                self.matrix.cols(),
                b.rank(),
                a.rank()
            )));
        }
        Ok(())
    }
}

/// Anchor compatibility `df ρ_A(e_i) = Σ_j F^j_i f*ρ_B(e'_j)` and bracket
/// compatibility with the Leibniz terms of the pulled-back frame.
fn underlying_morphism_checks(
    f: &AlgebroidMorphism,
    a: &AlgebroidPresentation,
    b: &AlgebroidPresentation,
    id: &str,
) -> Result<Vec<CheckReport>> {
    f.shape(a, b)?;
    let map = &f.map;
    let fm = &f.matrix;
    let (ra, rb) = (a.rank(), b.rank());
    let jf = map.jacobian();
    let rho_b = b.anchor_matrix().try_map(|e| map.pull_scalar(e))?;
    let pulled_c = |j: usize, l: usize, m: usize| map.pull_scalar(&b.structure[j][l][m]);
    let mut anchor = Vec::new();
    for i in 0..ra {
        let lhs = jf.mul_vec(a.anchor[i].components());
        let rhs = rho_b.mul_vec(&fm.column(i));
        let res: Vec<ScalarExpr> = lhs.iter().zip(&rhs).map(|(p, q)| p - q).collect();
        anchor.push(vector_leaf(
            format!("{id}/anchor/{i}"),
            "df ρ_A(e_i) = ρ_B(F(e_i))",
            &res,
        ));
    }
    let mut bracket = Vec::new();
    for i in 0..ra {
        for k in i + 1..ra {
            let mut res = Vec::with_capacity(rb);
            for m in 0..rb {
                let mut lhs = ScalarExpr::zero();
                for p in 0..ra {
                    lhs = &lhs + &(&a.structure[i][k][p] * fm.get(m, p));
                }
                let mut rhs = &a.anchor[i].apply(fm.get(m, k)) - &a.anchor[k].apply(fm.get(m, i));
                for j in 0..rb {
                    for l in 0..rb {
                        let w = fm.get(j, i) * fm.get(l, k);
                        if !w.is_zero() {
                            rhs = &rhs + &(&w * &pulled_c(j, l, m)?);
                        }
                    }
                }
                res.push(&lhs - &rhs);
            }
            bracket.push(vector_leaf(
                format!("{id}/bracket/{i}-{k}"),
                "F([e_i, e_k]) = [F(e_i), F(e_k)]",
                &res,
            ));
        }
    }
    Ok(vec![
        CheckReport::node(format!("{id}/anchor"), "anchor compatibility", anchor),
        CheckReport::node(format!("{id}/bracket"), "bracket compatibility", bracket),
    ])
}

/// Algebroid morphism identities, the base Dirac morphism, and
/// `f*(ρ*_B(F(e_i))) = ρ*_A(e_i) + ι_{ρ_A(e_i)} β`.
pub fn check_algebroid_morphism(
    f: &AlgebroidMorphism,
    base: &DManMorphism,
    a: &DLieAlgebroid,
    b: &DLieAlgebroid,
    id: &str,
) -> CheckReport {
    let title = "D-Lie algebroid morphism";
    if !base.map().same_as(&f.map) {
        let e = Error::EndpointMismatch("the base morphism covers a different map".into());
        return error_entry(id, title, &e);
    }
    let mut children = match underlying_morphism_checks(f, &a.algebroid, &b.algebroid, id) {
        Ok(c) => c,
        Err(e) => return error_entry(id, title, &e),
    };
    children.push(check_morphism(base, &format!("{id}/base")));
    let mut im = Vec::new();
    let src = &a.algebroid.base;
    for i in 0..a.algebroid.rank() {
        let cid = format!("{id}/im/{i}");
        let t = "f*(ρ*_B(F(e_i))) = ρ*_A(e_i) + ι_{ρ_A(e_i)} β";
        let res = (|| -> Result<DifferentialForm> {
            let mut lhs = DifferentialForm::zero(src, 1);
            for j in 0..b.algebroid.rank() {
                let pulled = b.im_form.rho_star[j].pullback(&f.map)?;
                lhs = lhs.add(&pulled.scale(f.matrix.get(j, i)))?;
            }
            let rhs = a.im_form.rho_star[i].add(&base.gauge().interior_product(&a.algebroid.anchor[i])?)?;
            lhs.sub(&rhs)
        })();
        im.push(match res {
            Ok(r) if r.is_zero() => CheckReport::pass(cid, t),
            Ok(r) => CheckReport::fail(cid, t).with_residual(r.to_string()),
            Err(e) => error_entry(&cid, t, &e),
        });
    }
    children.push(CheckReport::node(format!("{id}/im"), "IM forms are compatible", im));
    CheckReport::node(id, title, children)
}

/// An element `(b, w)` of `B ×_{ρ, df} TX`: coefficients of `b` in the frame
/// of `B`, as functions on `X`, and a vector field `w` on `X`.
#[derive(Clone, Debug)]
pub struct FiberedSection {
    pub coefficients: Vec<ScalarExpr>,
    pub vector: VectorField,
}

fn transverse_at(
    f: &SmoothMap,
    b: &AlgebroidPresentation,
    x: &RationalPoint,
) -> Result<bool> {
    let jf = f.jacobian_at(x)?;
    let y = f.apply(x)?;
    let rho = b.anchor_matrix().evaluate(&y)?;
    Ok(jf.hcat(&rho).rank() == b.base.dim())
}

/// `f^!B = B ×_{ρ, df} TX` over `X` with anchor the `TX` component. Without a
/// supplied frame, a kernel basis of `[f*ρ_B | −df]` is used.
pub fn pullback_algebroid(
    f: &SmoothMap,
    b: &AlgebroidPresentation,
    frame: Option<Vec<FiberedSection>>,
    id: &str,
) -> Result<(AlgebroidPresentation, CheckReport)> {
    let x = f.source();
    f.target().ensure_same(&b.base)?;
    let (rb, nx) = (b.rank(), x.dim());
    let mut trans = Vec::new();
    for (k, p) in x.samples().iter().enumerate() {
        if !transverse_at(f, b, p)? {
            return Err(Error::NotTransverse(format!("rank of [df | ρ_B] drops at {p}")));
        }
        trans.push(
            CheckReport::pass(format!("{id}/transverse/sample-{k}"), "[df | ρ_B] has full rank")
                .with_witness(p.to_string()),
        );
    }
    let rho = b.anchor_matrix().try_map(|e| f.pull_scalar(e))?;
    let constraint = rho.hcat(&f.jacobian().neg());
    let kernel = constraint.kernel();
    let frame = match frame {
        Some(fr) => fr,
        None => kernel
            .iter()
            .map(|v| {
                Ok(FiberedSection {
                    coefficients: v[..rb].to_vec(),
                    vector: VectorField::new(x, v[rb..].to_vec())?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let columns: Vec<Vec<ScalarExpr>> = frame
        .iter()
        .map(|s| {
            x.ensure_same(s.vector.patch())?;
            if s.coefficients.len() != rb {
                return Err(Error::ShapeMismatch(format!(
                    "fibered section has {} coefficients for rank {rb}",
                    s.coefficients.len()
                )));
            }
            Ok(s.coefficients.iter().chain(s.vector.components()).cloned().collect())
        })
        .collect::<Result<_>>()?;
    let fm = Matrix::from_columns(rb + nx, &columns);
    if !constraint.mul(&fm).is_zero() {
        return Err(Error::FrameDoesNotSpan(
            "a frame element does not satisfy ρ(b) = df(w)".into(),
        ));
    }
    if fm.rank() != frame.len() || frame.len() != kernel.len() {
        return Err(Error::FrameDoesNotSpan(format!(
            "{} independent elements supplied, the fibered product has rank {}",
            fm.rank(),
            kernel.len()
        )));
    }
    let r = frame.len();
    let mut structure = zero_structure(r);
    for i in 0..r {
        for j in 0..r {
            let (a, c) = (&frame[i], &frame[j]);
            let (wa, wc) = (&a.vector, &c.vector);
            let mut coeff: Vec<ScalarExpr> = (0..rb)
                .map(|m| &wa.apply(&c.coefficients[m]) - &wc.apply(&a.coefficients[m]))
                .collect();
            for p in 0..rb {
                for q in 0..rb {
                    let w = &a.coefficients[p] * &c.coefficients[q];
                    if w.is_zero() {
                        continue;
                    }
                    for (m, s) in coeff.iter_mut().enumerate() {
                        *s = &*s + &(&w * &f.pull_scalar(&b.structure[p][q][m])?);
                    }
                }
            }
            let v = wa.bracket(wc)?;
            let col: Vec<ScalarExpr> = coeff.into_iter().chain(v.components().iter().cloned()).collect();
            structure[i][j] = fm.solve(&col).ok_or_else(|| {
                Error::FrameDoesNotSpan(format!("bracket of frame elements {i} and {j} leaves the span"))
            })?;
        }
    }
    let anchor = frame.iter().map(|s| s.vector.clone()).collect();
    let pulled = AlgebroidPresentation::new(x, anchor, structure)?;
    let children = vec![
        CheckReport::node(format!("{id}/transverse"), "f is transverse to the orbits", trans),
        CheckReport::pass(format!("{id}/frame"), "the frame spans the fibered product")
            .with_witness(format!("rank {}", r)),
        check_algebroid(&pulled, &format!("{id}/algebroid")),
    ];
    Ok((pulled, CheckReport::node(id, "pullback algebroid", children)))
}

/// Declarations for the conditions that are not computed.
#[derive(Clone, Copy, Debug, Default)]
pub struct Attestations {
    pub orbit_spaces: bool,
    pub monodromy: bool,
    pub fundamental_groups: bool,
}

fn attestation(id: String, title: &str, given: bool) -> CheckReport {
    if given {
        CheckReport::leaf(id, title, Status::Attested).with_note("attested: not verified")
    } else {
        CheckReport::leaf(id, title, Status::Unattested)
    }
}

fn isotropy_at(a: &AlgebroidPresentation, x: &RationalPoint) -> Result<(QMatrix, Vec<Vec<Rational>>)> {
    let rho = a.anchor_matrix().evaluate(x)?;
    let kernel = rho.kernel();
    Ok((rho, kernel))
}

fn fiber_bracket(a: &AlgebroidPresentation, x: &RationalPoint, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
    let r = a.rank();
    let mut out = vec![Rational::zero(); r];
    for i in 0..r {
        for j in 0..r {
            let w = &u[i] * &v[j];
            if w.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = &*o + &(&w * &a.structure[i][j][k].evaluate(x)?);
            }
        }
    }
    Ok(out)
}

/// Transversality and isotropy conditions at every sample of the source
/// base, with the remaining conditions taken from attestations.
pub fn check_weak_equivalence(
    f: &AlgebroidMorphism,
    a: &AlgebroidPresentation,
    b: &AlgebroidPresentation,
    attest: Attestations,
    id: &str,
) -> Result<CheckReport> {
    let underlying = CheckReport::node("morphism", "", underlying_morphism_checks(f, a, b, "morphism")?);
    if underlying.failed() {
        return Err(Error::PrerequisiteFailed("the algebroid morphism does not verify".into()));
    }
    let mut transverse = Vec::new();
    let mut isotropy = Vec::new();
    for (k, x) in a.base.samples().iter().enumerate() {
        let w = x.to_string();
        transverse.push(
            CheckReport::check(
                format!("{id}/b/sample-{k}"),
                "rank [df | ρ_B] = dim of the target base",
                transverse_at(&f.map, b, x)?,
            )
            .with_witness(w.clone()),
        );
        let y = f.map.apply(x)?;
        let (_, ga) = isotropy_at(a, x)?;
        let (_, gb) = isotropy_at(b, &y)?;
        let fx = f.matrix.evaluate(x)?;
        let images: Vec<Vec<Rational>> = ga.iter().map(|v| fx.mul_vec(v)).collect();
        let mut problems = Vec::new();
        let rho_b = b.anchor_matrix().evaluate(&y)?;
        if images.iter().any(|v| !rho_b.mul_vec(v).iter().all(|e| e.is_zero())) {
            problems.push("F_x does not map isotropy into isotropy".to_string());
        }
        let image_rank = if images.is_empty() {
            0
        } else {
            Matrix::from_columns(b.rank(), &images).rank()
        };
        if ga.len() != gb.len() || image_rank != ga.len() {
            problems.push(format!(
                "isotropy dimensions {} and {}, image of rank {}",
                ga.len(),
                gb.len(),
                image_rank
            ));
        }
        for (p, u) in ga.iter().enumerate() {
            for (q, v) in ga.iter().enumerate().skip(p + 1) {
                let lhs = fx.mul_vec(&fiber_bracket(a, x, u, v)?);
                let rhs = fiber_bracket(b, &y, &images[p], &images[q])?;
                if lhs != rhs {
                    problems.push(format!("F_x does not preserve the bracket of isotropy vectors {p} and {q}"));
                }
            }
        }
        let cid = format!("{id}/c/sample-{k}");
        let title = "F_x restricts to an isomorphism of isotropy algebras";
        let mut entry = CheckReport::check(&cid, title, problems.is_empty())
            .with_witness(w)
            .with_note(format!("isotropy dimensions {} → {}", ga.len(), gb.len()));
        if let Some(p) = problems.first() {
            entry = entry.with_residual(p.clone());
        }
        isotropy.push(entry);
    }
    let children = vec![
        attestation(format!("{id}/a"), "orbit spaces are homeomorphic", attest.orbit_spaces),
        CheckReport::node(format!("{id}/b"), "F is transverse", transverse),
        CheckReport::node(format!("{id}/c"), "isotropy algebras are isomorphic", isotropy),
        attestation(format!("{id}/d"), "monodromy groups are isomorphic", attest.monodromy),
        attestation(
            format!("{id}/e"),
            "fundamental groups of orbits are isomorphic",
            attest.fundamental_groups,
        ),
    ];
    let mut report = CheckReport::node(id, "weak equivalence", children);
    if report.passed() {
        report.add_note("weak equivalence (computable conditions)");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::spread_samples;
    use crate::fixtures::{area_form, cotangent_groupoid, pair_groupoid, unit_groupoid};
    use crate::symbolic::rat;

    fn v(n: &str) -> ScalarExpr {
        ScalarExpr::var(n)
    }

    fn plane() -> Patch {
        Patch::new("M", &["x", "y"], spread_samples(2, 6), vec![]).unwrap()
    }

    fn symplectic_pi() -> ExprMatrix {
        Matrix::from_rows(vec![
            vec![ScalarExpr::zero(), ScalarExpr::one()],
            vec![-ScalarExpr::one(), ScalarExpr::zero()],
        ])
    }

    fn so3_patch() -> Patch {
        let mut samples = spread_samples(3, 5);
        samples.push(vec![rat(0), rat(0), rat(1)]);
        Patch::new("g", &["x", "y", "z"], samples, vec![]).unwrap()
    }

    /// `π_ij = −ε_ijk x_k`, whose cotangent algebroid has `c^k_ij = ε_ijk`.
    fn so3_pi() -> ExprMatrix {
        let z = ScalarExpr::zero();
        Matrix::from_rows(vec![
            vec![z.clone(), -v("z"), v("y")],
            vec![v("z"), z.clone(), -v("x")],
            vec![-v("y"), v("x"), z],
        ])
    }

    #[test]
    fn standard_algebroids() {
        assert!(check_algebroid(&AlgebroidPresentation::tangent(&plane()), "T").passed());
        let zero = Matrix::zeros(2, 2);
        let cot = AlgebroidPresentation::cotangent(&plane(), &zero).unwrap();
        assert!(check_algebroid(&cot, "Z").passed());
        let so3 = AlgebroidPresentation::cotangent(&so3_patch(), &so3_pi()).unwrap();
        let r = check_algebroid(&so3, "so3");
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(so3.structure(0, 1), &[ScalarExpr::zero(), ScalarExpr::zero(), ScalarExpr::one()]);
        assert_eq!(so3.structure(1, 2)[0], ScalarExpr::one());
        assert_eq!(so3.structure(2, 1)[0], -ScalarExpr::one());
    }

    #[test]
    fn broken_structure_functions() {
        let p = plane();
        let t = AlgebroidPresentation::tangent(&p);
        let mut c = zero_structure(2);
        c[0][1][0] = ScalarExpr::one();
        let a = AlgebroidPresentation::new(&p, t.anchor().to_vec(), c).unwrap();
        let r = check_algebroid(&a, "A");
        assert!(r.find("A/antisymmetry/0-1").unwrap().failed());
        assert!(r.find("A/anchor/0-1").unwrap().failed());
    }

    #[test]
    fn im_form_examples() {
        let p = plane();
        let zero = DiracStructure::cotangent(&p);
        let a = AlgebroidPresentation::cotangent(&p, &Matrix::zeros(2, 2)).unwrap();
        let d = DLieAlgebroid::new(a, zero, ImForm::identity_pairing(&p)).unwrap();
        assert!(check_im_form(&d, "im").unwrap().passed());

        let q = so3_patch();
        let graph = DiracStructure::from_bivector(&q, &so3_pi()).unwrap();
        let d = DLieAlgebroid::from_dirac(&graph).unwrap();
        assert!(check_im_form(&d, "im").unwrap().passed());

        let a = AlgebroidPresentation::cotangent(&q, &so3_pi()).unwrap();
        let mut forms = ImForm::identity_pairing(&q).forms().to_vec();
        let bump = DifferentialForm::dx(&q, 1).scale(&v("y"));
        forms[0] = forms[0].add(&bump).unwrap();
        let d = DLieAlgebroid::new(a, graph, ImForm::new(forms).unwrap()).unwrap();
        let r = check_im_form(&d, "im").unwrap();
        assert!(r.failed());
        let leaf = r.leaves().into_iter().find(|l| l.failed()).unwrap();
        assert!(leaf.residual.as_deref().is_some_and(|s| !s.is_empty()));
    }

    #[test]
    fn dlie_algebroid_examples() {
        let q = so3_patch();
        let graph = DiracStructure::from_bivector(&q, &so3_pi()).unwrap();
        let r = check_dlie_algebroid(&DLieAlgebroid::trivial(&graph), "triv").unwrap();
        assert!(r.passed());

        let p = plane();
        let pi = symplectic_pi();
        let l = DiracStructure::from_bivector(&p, &pi).unwrap();
        let a = AlgebroidPresentation::cotangent(&p, &pi).unwrap();
        let d = DLieAlgebroid::new(a.clone(), l.clone(), ImForm::identity_pairing(&p)).unwrap();
        let r = check_dlie_algebroid(&d, "sym").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));

        let neg = ImForm::new(ImForm::identity_pairing(&p).forms().iter().map(|f| f.neg()).collect()).unwrap();
        let d = DLieAlgebroid::new(a, l, neg).unwrap();
        let r = check_dlie_algebroid(&d, "sym").unwrap();
        assert!(r.find("sym/membership/0").unwrap().failed());

        let d = DLieAlgebroid::from_dirac(&graph).unwrap();
        assert!(check_dlie_algebroid(&d, "graph").unwrap().passed());
    }

    #[test]
    fn im_forms_from_groupoids() {
        for n in 1..=3 {
            let g = cotangent_groupoid(n).unwrap();
            let frame = source_kernel_frame(&g).unwrap();
            let (derived, r) = derive_im_form_from_groupoid(&g, &frame, "im").unwrap();
            assert!(r.passed());
            let m = g.presentation().objects();
            for (k, f) in derived.im_form.forms().iter().enumerate() {
                assert_eq!(f, &DifferentialForm::dx(m, k));
                assert!(derived.anchor[k].is_zero());
            }
            let a = AlgebroidPresentation::new(m, derived.anchor, zero_structure(n)).unwrap();
            let d = DLieAlgebroid::new(a, g.base().clone(), derived.im_form).unwrap();
            assert!(check_dlie_algebroid(&d, "d").unwrap().passed());
            assert!(check_im_form(&d, "im").unwrap().passed());
        }

        let g = pair_groupoid().unwrap();
        let frame = source_kernel_frame(&g).unwrap();
        let (derived, _) = derive_im_form_from_groupoid(&g, &frame, "im").unwrap();
        let m = g.presentation().objects();
        let omega = area_form(m).unwrap();
        for (anchor, eta) in derived.anchor.iter().zip(derived.im_form.forms()) {
            assert_eq!(eta, &omega.interior_product(anchor).unwrap());
        }
        let a = AlgebroidPresentation::new(m, derived.anchor, zero_structure(2)).unwrap();
        let d = DLieAlgebroid::new(a, g.base().clone(), derived.im_form).unwrap();
        assert!(check_dlie_algebroid(&d, "d").unwrap().passed());

        let orbifold = unit_groupoid(g.base()).unwrap();
        let frame = source_kernel_frame(&orbifold).unwrap();
        assert!(frame.is_empty());
        let stray = vec![VectorField::coordinate(orbifold.presentation().arrows(), 0)];
        assert!(matches!(
            derive_im_form_from_groupoid(&orbifold, &stray, "im"),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn zero_form_gives_zero_im_form() {
        let g = cotangent_groupoid(2).unwrap();
        let p = g.presentation();
        let zero = DifferentialForm::zero(p.arrows(), 2);
        let flat = DLieGroupoid::new(
            p.clone(),
            g.base().clone(),
            crate::groupoid::GaugePair::new(zero.clone(), zero).unwrap(),
        )
        .unwrap();
        let frame = source_kernel_frame(&flat).unwrap();
        let (derived, _) = derive_im_form_from_groupoid(&flat, &frame, "im").unwrap();
        assert!(derived.im_form.forms().iter().all(|f| f.is_zero()));
    }

    #[test]
    fn algebroid_morphisms() {
        let p = plane();
        let pi = symplectic_pi();
        let l = DiracStructure::from_bivector(&p, &pi).unwrap();
        let a = DLieAlgebroid::new(
            AlgebroidPresentation::cotangent(&p, &pi).unwrap(),
            l.clone(),
            ImForm::identity_pairing(&p),
        )
        .unwrap();
        let id = AlgebroidMorphism::identity(a.algebroid());
        let r = check_algebroid_morphism(&id, &DManMorphism::identity(&l), &a, &a, "id");
        assert!(r.passed(), "{}", r.to_text(false));

        let t = DiracStructure::tangent(&p);
        let beta = area_form(&p).unwrap();
        let src = DLieAlgebroid::from_dirac(&t).unwrap();
        let dst = DLieAlgebroid::from_dirac(&t.gauge_transform(&beta).unwrap()).unwrap();
        let f = AlgebroidMorphism::identity(src.algebroid());
        let base = DManMorphism::gauge_transformation(&t, &beta).unwrap();
        let r = check_algebroid_morphism(&f, &base, &src, &dst, "shift");
        assert!(r.passed(), "{}", r.to_text(false));

        let flipped = DManMorphism::new(
            SmoothMap::identity(&p),
            beta.neg(),
            t.clone(),
            t.gauge_transform(&beta).unwrap(),
        )
        .unwrap();
        let r = check_algebroid_morphism(&f, &flipped, &src, &dst, "flip");
        let leaf = r.find("flip/im/0").unwrap();
        assert!(leaf.failed());
        let twice = beta.interior_product(&src.algebroid().anchor()[0]).unwrap().scale(&ScalarExpr::int(2));
        assert_eq!(leaf.residual.as_deref(), Some(twice.to_string().as_str()));
    }

    #[test]
    fn pullback_algebroids() {
        let p = plane();
        let pi = symplectic_pi();
        let b = AlgebroidPresentation::cotangent(&p, &pi).unwrap();
        let frame: Vec<FiberedSection> = (0..2)
            .map(|j| FiberedSection {
                coefficients: b.unit(j),
                vector: b.anchor()[j].clone(),
            })
            .collect();
        let (same, r) = pullback_algebroid(&SmoothMap::identity(&p), &b, Some(frame), "pb").unwrap();
        assert!(r.passed());
        assert_eq!(same.structure, b.structure);

        let line = Patch::new("R", &["x"], spread_samples(1, 5), vec![]).unwrap();
        let proj = SmoothMap::projection(&p, &line, &[0]).unwrap();
        let (up, r) = pullback_algebroid(&proj, &AlgebroidPresentation::tangent(&line), None, "pb").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(up.rank(), 2);
        assert_eq!(up.anchor_matrix().rank(), 2);

        let t = Patch::new("X", &["s"], spread_samples(1, 5), vec![]).unwrap();
        let incl = SmoothMap::new(&t, &p, vec![v("s"), ScalarExpr::zero()]).unwrap();
        let (down, r) = pullback_algebroid(&incl, &b, None, "pb").unwrap();
        assert!(r.passed());
        assert_eq!(down.rank(), 1);

        let bad = vec![FiberedSection {
            coefficients: vec![ScalarExpr::one(), ScalarExpr::zero()],
            vector: VectorField::coordinate(&t, 0),
        }];
        assert!(matches!(
            pullback_algebroid(&incl, &b, Some(bad), "pb"),
            Err(Error::FrameDoesNotSpan(_))
        ));
        let flat = AlgebroidPresentation::cotangent(&p, &Matrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            pullback_algebroid(&incl, &flat, None, "pb"),
            Err(Error::NotTransverse(_))
        ));
    }

    #[test]
    fn weak_equivalences() {
        let p = plane();
        let b = AlgebroidPresentation::cotangent(&p, &symplectic_pi()).unwrap();
        let all = Attestations {
            orbit_spaces: true,
            monodromy: true,
            fundamental_groups: true,
        };
        let id = AlgebroidMorphism::identity(&b);
        let r = check_weak_equivalence(&id, &b, &b, all, "we").unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
        assert_eq!(r.notes.as_deref(), Some("weak equivalence (computable conditions)"));
        let r = check_weak_equivalence(&id, &b, &b, Attestations::default(), "we").unwrap();
        assert_eq!(r.status, Status::Unattested);
        assert!(r.find("we/c").unwrap().passed());

        let line = Patch::new("R", &["x"], spread_samples(1, 5), vec![]).unwrap();
        let a = AlgebroidPresentation::cotangent(&line, &Matrix::zeros(1, 1)).unwrap();
        let incl = SmoothMap::new(&line, &p, vec![v("x"), ScalarExpr::zero()]).unwrap();
        let f = AlgebroidMorphism::new(incl, Matrix::zeros(2, 1)).unwrap();
        let r = check_weak_equivalence(&f, &a, &b, all, "we").unwrap();
        assert!(r.find("we/b").unwrap().passed());
        assert!(r.find("we/c").unwrap().failed());

        let q = so3_patch();
        let so3 = AlgebroidPresentation::cotangent(&q, &so3_pi()).unwrap();
        let r = check_weak_equivalence(&AlgebroidMorphism::identity(&so3), &so3, &so3, all, "so3").unwrap();
        let last = r.find(&format!("so3/c/sample-{}", q.samples().len() - 1)).unwrap();
        assert!(last.passed());
        assert_eq!(last.notes.as_deref(), Some("isotropy dimensions 1 → 1"));
        let (_, kernel) = isotropy_at(&so3, &q.samples()[q.samples().len() - 1]).unwrap();
        assert_eq!(kernel.len(), 1);
        assert!(kernel[0][0].is_zero() && kernel[0][1].is_zero());
    }
}
