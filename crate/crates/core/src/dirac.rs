//! Dirac structures on patches, given by global frames of generalized
//! sections `X ⊕ η`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap, VectorField};
use crate::linalg::{ExprMatrix, Field, Matrix, QMatrix};
use crate::linear_dirac::{pairing_matrix, LinearDiracSpace};
use crate::report::{CheckReport, Status};
use crate::symbolic::{Rational, RationalPoint, ScalarExpr, Var};

/// A section `X ⊕ η` of `TM ⊕ T*M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSection {
    vector: VectorField,
    covector: DifferentialForm,
}

impl GeneralizedSection {
    pub fn new(vector: VectorField, covector: DifferentialForm) -> Result<Self> {
        vector.patch().ensure_same(covector.patch())?;
        if covector.degree() != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                found: covector.degree(),
            });
        }
        Ok(GeneralizedSection { vector, covector })
    }

    pub fn zero(patch: &Patch) -> Self {
        GeneralizedSection {
            vector: VectorField::zero(patch),
            covector: DifferentialForm::zero(patch, 1),
        }
    }

    /// From a column `(X_1..X_n, η_1..η_n)`.
    pub fn from_column(patch: &Patch, col: &[ScalarExpr]) -> Result<Self> {
        let n = patch.dim();
        if col.len() != 2 * n {
            return Err(Error::ShapeMismatch("generalized section column".into()));
        }
        GeneralizedSection::new(
            VectorField::new(patch, col[..n].to_vec())?,
            DifferentialForm::one_form(patch, col[n..].to_vec())?,
        )
    }

    pub fn patch(&self) -> &Patch {
        self.vector.patch()
    }

    pub fn vector(&self) -> &VectorField {
        &self.vector
    }

    pub fn covector(&self) -> &DifferentialForm {
        &self.covector
    }

    pub fn column(&self) -> Vec<ScalarExpr> {
        let mut c = self.vector.components().to_vec();
        c.extend(
            self.covector
                .one_form_components()
                .expect("covector part is a 1-form"),
        );
        c
    }

    /// `⟨X⊕η, Y⊕ζ⟩ = η(Y) + ζ(X)`.
    pub fn pairing(&self, other: &GeneralizedSection) -> Result<ScalarExpr> {
        Ok(&self.covector.pair(&other.vector)? + &other.covector.pair(&self.vector)?)
    }

    /// `[X⊕η, Y⊕ζ] = [X,Y] ⊕ (L_X ζ − ι_Y dη)`.
    pub fn courant_bracket(&self, other: &GeneralizedSection) -> Result<GeneralizedSection> {
        self.patch().ensure_same(other.patch())?;
        let v = self.vector.bracket(&other.vector)?;
        let lie = other.covector.lie_derivative(&self.vector)?;
        let deta = self.covector.exterior_derivative();
        let contracted = deta.interior_product(&other.vector)?;
        Ok(GeneralizedSection {
            vector: v,
            covector: lie.sub(&contracted)?,
        })
    }

    pub fn add(&self, other: &GeneralizedSection) -> Result<GeneralizedSection> {
        Ok(GeneralizedSection {
            vector: self.vector.add(&other.vector)?,
            covector: self.covector.add(&other.covector)?,
        })
    }

    pub fn scale(&self, f: &ScalarExpr) -> GeneralizedSection {
        GeneralizedSection {
            vector: self.vector.scale(f),
            covector: self.covector.scale(f),
        }
    }
}

impl std::fmt::Display for GeneralizedSection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) + ({})", self.vector, self.covector)
    }
}

/// A Dirac structure presented by `n` generalized sections on an
/// `n`-dimensional patch.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracStructure {
    patch: Patch,
    frame: Vec<GeneralizedSection>,
}

impl DiracStructure {
    pub fn from_frame(patch: &Patch, frame: Vec<GeneralizedSection>) -> Result<Self> {
        if frame.len() != patch.dim() {
            return Err(Error::ShapeMismatch(format!(
                "frame of {} sections on `{}` of dimension {}",
                frame.len(),
                patch.name(),
                patch.dim()
            )));
        }
        for s in &frame {
            patch.ensure_same(s.patch())?;
        }
        Ok(DiracStructure {
            patch: patch.clone(),
            frame,
        })
    }

    /// From a `2n × n` matrix whose columns are the frame.
    pub fn from_matrix(patch: &Patch, m: &ExprMatrix) -> Result<Self> {
        if m.rows() != 2 * patch.dim() || m.cols() != patch.dim() {
            return Err(Error::ShapeMismatch("frame matrix must be 2n x n".into()));
        }
        let frame = m
            .columns()
            .iter()
            .map(|c| GeneralizedSection::from_column(patch, c))
            .collect::<Result<Vec<_>>>()?;
        DiracStructure::from_frame(patch, frame)
    }

    /// `TM`, frame `∂_i ⊕ 0`.
    pub fn tangent(patch: &Patch) -> Self {
        let n = patch.dim();
        DiracStructure::from_matrix(patch, LinearDiracSpace::tangent(n).basis())
            .expect("tangent frame")
    }

    /// `T*M`, the graph of the zero bivector, frame `0 ⊕ dx_i`.
    pub fn cotangent(patch: &Patch) -> Self {
        let n = patch.dim();
        DiracStructure::from_matrix(patch, LinearDiracSpace::cotangent(n).basis())
            .expect("cotangent frame")
    }

    /// Graph of a 2-form: frame `∂_i ⊕ ι_{∂_i} ω`.
    pub fn from_two_form(omega: &DifferentialForm) -> Result<Self> {
        let b = omega.two_form_matrix()?;
        let g = LinearDiracSpace::graph_of_two_form(&b)?;
        DiracStructure::from_matrix(omega.patch(), g.basis())
    }

    /// Graph of a bivector with `P[i][j] = π(dx_i, dx_j)`: frame `P e_j ⊕ dx_j`.
    pub fn from_bivector(patch: &Patch, p: &ExprMatrix) -> Result<Self> {
        if p.rows() != patch.dim() || p.cols() != patch.dim() {
            return Err(Error::ShapeMismatch("bivector matrix size".into()));
        }
        let g = LinearDiracSpace::graph_of_bivector(p)?;
        DiracStructure::from_matrix(patch, g.basis())
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn frame(&self) -> &[GeneralizedSection] {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.patch.dim()
    }

    pub fn frame_matrix(&self) -> ExprMatrix {
        let cols: Vec<Vec<ScalarExpr>> = self.frame.iter().map(|s| s.column()).collect();
        Matrix::from_columns(2 * self.dim(), &cols)
    }

    pub fn frame_matrix_at(&self, p: &RationalPoint) -> Result<QMatrix> {
        Ok(self.frame_matrix().evaluate(p)?)
    }

    /// The fiber at a point as a linear Dirac space.
    pub fn fiber(&self, p: &RationalPoint) -> Result<LinearDiracSpace<Rational>> {
        Ok(LinearDiracSpace::from_basis_unchecked(self.frame_matrix_at(p)?))
    }

    /// `L + β`: frame `X_i ⊕ (η_i + ι_{X_i} β)`.
    pub fn gauge_transform(&self, beta: &DifferentialForm) -> Result<Self> {
        self.patch.ensure_same(beta.patch())?;
        if beta.degree() != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: beta.degree(),
            });
        }
        beta.ensure_closed()?;
        let frame = self
            .frame
            .iter()
            .map(|s| {
                let shift = beta.interior_product(&s.vector)?;
                Ok(GeneralizedSection {
                    vector: s.vector.clone(),
                    covector: s.covector.add(&shift)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DiracStructure {
            patch: self.patch.clone(),
            frame,
        })
    }

    /// Moves the structure onto another patch with the same coordinates.
    pub fn on_patch(&self, patch: &Patch) -> Result<Self> {
        if patch.coords() != self.patch.coords() {
            return Err(Error::PatchMismatch {
                expected: patch.name().to_string(),
                found: self.patch.name().to_string(),
            });
        }
        DiracStructure::from_matrix(patch, &self.frame_matrix())
    }

    /// True when the frame has rank `n` at the generic point.
    pub fn generic_rank_full(&self) -> bool {
        let m = self.frame_matrix();
        let n = self.dim();
        for s in self.patch.samples() {
            if let Ok(q) = m.evaluate(s) {
                if q.rank() == n {
                    return true;
                }
            }
        }
        m.rank() == n
    }

    /// The first nonzero entry of the pairing matrix against `other`, if any.
    /// For two generically Lagrangian frames, `None` means equal structures.
    pub fn pairing_residual(&self, other: &DiracStructure) -> Result<Option<(usize, usize, ScalarExpr)>> {
        self.patch.ensure_same(&other.patch)?;
        let p = pairing_matrix(&self.frame_matrix(), &other.frame_matrix())?;
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                if !p.get(i, j).is_zero() {
                    return Ok(Some((i, j, p.get(i, j).clone())));
                }
            }
        }
        Ok(None)
    }

    /// Generic-point membership of `v ⊕ η`: the pairings with the frame.
    /// Returns the first nonzero pairing, `None` when the section lies in `L`.
    pub fn membership_residual(&self, s: &GeneralizedSection) -> Result<Option<(usize, ScalarExpr)>> {
        for (k, e) in self.frame.iter().enumerate() {
            let p = s.pairing(e)?;
            if !p.is_zero() {
                return Ok(Some((k, p)));
            }
        }
        Ok(None)
    }
}

fn rank_defect_note(m: &QMatrix, n: usize) -> Option<usize> {
    let r = m.rank();
    (r != n).then_some(r)
}

/// Symbolic isotropy of the frame.
pub fn check_isotropy(d: &DiracStructure, id: &str) -> CheckReport {
    let title = "isotropy <e_i, e_j> = 0";
    let n = d.dim();
    for i in 0..n {
        for j in i..n {
            match d.frame[i].pairing(&d.frame[j]) {
                Ok(p) if p.is_zero() => {}
                Ok(p) => {
                    return CheckReport::fail(format!("{id}/isotropy"), title)
                        .with_residual(p.to_string())
                        .with_note(format!("pair ({i}, {j})"));
                }
                Err(e) => {
                    return CheckReport::fail(format!("{id}/isotropy"), title).with_note(e.to_string())
                }
            }
        }
    }
    CheckReport::pass(format!("{id}/isotropy"), title)
}

/// Rank `n` at the generic point and at every sample.
pub fn check_rank(d: &DiracStructure, id: &str) -> CheckReport {
    let n = d.dim();
    let m = d.frame_matrix();
    let mut children = Vec::new();
    let mut any_full = false;
    for (k, s) in d.patch.samples().iter().enumerate() {
        let cid = format!("{id}/rank/sample-{k}");
        let title = format!("rank {n} at sample");
        match m.evaluate(s) {
            Ok(q) => match rank_defect_note(&q, n) {
                None => {
                    any_full = true;
                    children.push(CheckReport::pass(cid, title).with_witness(s.to_string()));
                }
                Some(r) => children.push(
                    CheckReport::fail(cid, title)
                        .with_witness(s.to_string())
                        .with_residual(format!("rank {r}")),
                ),
            },
            Err(e) => children.push(
                CheckReport::fail(cid, title)
                    .with_witness(s.to_string())
                    .with_note(e.to_string()),
            ),
        }
    }
    let generic_ok = any_full || m.rank() == n;
    let mut generic = CheckReport::check(
        format!("{id}/rank/generic"),
        format!("rank {n} at the generic point"),
        generic_ok,
    );
    if any_full {
        generic.add_note("certified by a full-rank sample");
    }
    children.insert(0, generic);
    CheckReport::node(format!("{id}/rank"), "maximal rank", children)
        .with_note(format!("verified at {} points", d.patch.samples().len()))
}

fn involutivity_leaf(d: &DiracStructure, id: &str) -> CheckReport {
    let n = d.dim();
    let title = "involutivity <[e_i, e_j], e_k> = 0";
    let mut failures: Vec<(usize, usize, usize, ScalarExpr)> = Vec::new();
    let mut checked = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let br = match d.frame[i].courant_bracket(&d.frame[j]) {
                Ok(b) => b,
                Err(e) => {
                    return CheckReport::fail(format!("{id}/involutivity"), title)
                        .with_note(e.to_string())
                }
            };
            for k in 0..n {
                checked += 1;
                match br.pairing(&d.frame[k]) {
                    Ok(p) if p.is_zero() => {}
                    Ok(p) => failures.push((i, j, k, p)),
                    Err(e) => {
                        return CheckReport::fail(format!("{id}/involutivity"), title)
                            .with_note(e.to_string())
                    }
                }
            }
        }
    }
    if failures.is_empty() {
        return CheckReport::pass(format!("{id}/involutivity"), title)
            .with_note(format!("{checked} triples"));
    }
    let (i, j, k, r) = &failures[0];
    let listed: Vec<String> = failures
        .iter()
        .map(|(i, j, k, r)| format!("({i},{j},{k}): {r}"))
        .collect();
    CheckReport::fail(format!("{id}/involutivity"), title)
        .with_residual(r.to_string())
        .with_witness(format!("(i,j,k)=({i},{j},{k})"))
        .with_note(format!("failing triples {}", listed.join(", ")))
}

/// Involutivity through the pairing criterion; requires isotropy and rank.
pub fn check_involutive(d: &DiracStructure, id: &str) -> Result<CheckReport> {
    let iso = check_isotropy(d, id);
    let rank = check_rank(d, id);
    if !iso.passed() || !rank.passed() {
        return Err(Error::PrerequisiteFailed(
            "isotropy or rank check failed".into(),
        ));
    }
    Ok(involutivity_leaf(d, id))
}

/// Isotropy, rank and involutivity.
pub fn check_dirac(d: &DiracStructure, id: &str) -> CheckReport {
    let iso = check_isotropy(d, id);
    let rank = check_rank(d, id);
    let inv = if iso.passed() && rank.passed() {
        involutivity_leaf(d, id)
    } else {
        CheckReport::skipped(format!("{id}/involutivity"), "involutivity")
            .with_note("prerequisite failed")
    };
    CheckReport::node(id, "Dirac structure", vec![iso, rank, inv])
}

/// Scales each column to a primitive polynomial vector.
fn clear_denominators(col: &[ScalarExpr]) -> Vec<ScalarExpr> {
    use crate::symbolic::{poly_gcd, Poly};
    let mut den = Poly::one();
    for c in col {
        if !c.is_polynomial() {
            let g = poly_gcd(&den, c.denominator());
            den = (&den * c.denominator()).div_exact(&g).expect("lcm");
        }
    }
    let mut scaled: Vec<ScalarExpr> = col
        .iter()
        .map(|c| c * &ScalarExpr::from_poly(den.clone()))
        .collect();
    let mut g = Poly::zero();
    for c in &scaled {
        if !c.is_zero() {
            g = poly_gcd(&g, c.numerator());
        }
    }
    if !g.is_zero() && !g.is_constant() {
        let gi = ScalarExpr::from_poly(g);
        scaled = scaled.iter().map(|c| c / &gi).collect();
    }
    scaled
}

/// Generic-point backward image `f*L` as a frame, before any sample checks.
pub fn backward_image_generic(f: &SmoothMap, l: &DiracStructure) -> Result<DiracStructure> {
    f.target().ensure_same(l.patch())?;
    let a: BTreeMap<Var, ScalarExpr> = f.assignment();
    let composed = l.frame_matrix().try_map(|e| e.substitute(&a))?;
    let space = LinearDiracSpace::from_basis_unchecked(composed);
    let j = f.jacobian();
    let pulled = space.backward_image(&j)?;
    let cols: Vec<Vec<ScalarExpr>> = pulled
        .basis()
        .columns()
        .iter()
        .map(|c| clear_denominators(c))
        .collect();
    DiracStructure::from_matrix(f.source(), &Matrix::from_columns(2 * f.source().dim(), &cols))
}

/// Pointwise backward image of `L` at `f(x)` along `df_x`.
pub fn backward_image_at(
    f: &SmoothMap,
    l: &DiracStructure,
    x: &RationalPoint,
) -> Result<LinearDiracSpace<Rational>> {
    let y = f.apply(x)?;
    let fiber = l.fiber(&y)?;
    fiber.backward_image(&f.jacobian_at(x)?)
}

/// `rank [df_x | ρ(L_{f(x)})] = dim target`.
pub fn transverse_at(f: &SmoothMap, l: &DiracStructure, x: &RationalPoint) -> Result<bool> {
    let y = f.apply(x)?;
    let fiber = l.fiber(&y)?;
    let j = f.jacobian_at(x)?;
    Ok(j.hcat(&fiber.vector_block()).rank() == f.target().dim())
}

/// Transversality entries at every source sample. Points where the map is not
/// transverse are reported as skipped, since transversality is only sufficient.
pub fn transversality_report(f: &SmoothMap, l: &DiracStructure, id: &str) -> CheckReport {
    let mut children = Vec::new();
    for (k, s) in f.source().samples().iter().enumerate() {
        let cid = format!("{id}/transversality/sample-{k}");
        let title = "df(TN) + anchor(L) spans the target tangent space";
        children.push(match transverse_at(f, l, s) {
            Ok(true) => CheckReport::pass(cid, title).with_witness(s.to_string()),
            Ok(false) => CheckReport::skipped(cid, title)
                .with_witness(s.to_string())
                .with_note("not transverse here; smoothness rests on the rank checks"),
            Err(e) => CheckReport::fail(cid, title)
                .with_witness(s.to_string())
                .with_note(e.to_string()),
        });
    }
    let n = children.len();
    CheckReport::node(format!("{id}/transversality"), "transversality", children)
        .with_note(format!("verified at {n} points"))
}

/// `f*L` with its report: transversality and the rank of the produced frame
/// at every source sample.
pub fn pullback_dirac(
    f: &SmoothMap,
    l: &DiracStructure,
    id: &str,
) -> Result<(DiracStructure, CheckReport)> {
    let pulled = backward_image_generic(f, l)?;
    let trans = transversality_report(f, l, id);
    let n = f.source().dim();
    let m = pulled.frame_matrix();
    let mut rank_children = Vec::new();
    for (k, s) in f.source().samples().iter().enumerate() {
        let q = m.evaluate(s)?;
        let r = q.rank();
        if r != n {
            return Err(Error::NotSmoothSubbundle(s.to_string()));
        }
        // The generic frame must agree with the pointwise backward image.
        let pointwise = backward_image_at(f, l, s)?;
        let same = LinearDiracSpace::from_basis_unchecked(q).subspace_equal(&pointwise)?;
        rank_children.push(
            CheckReport::check(
                format!("{id}/frame/sample-{k}"),
                format!("frame has rank {n} and matches the pointwise backward image"),
                same,
            )
            .with_witness(s.to_string()),
        );
    }
    let frame = CheckReport::node(format!("{id}/frame"), "pulled-back frame", rank_children);
    let report = CheckReport::node(id, "pullback Dirac structure", vec![trans, frame]);
    Ok((pulled, report))
}

/// `ω(v, w) = η(w)` for any `η` with `v ⊕ η ∈ L_x`.
pub fn leaf_two_form_at_point(
    l: &DiracStructure,
    x: &RationalPoint,
    v: &[Rational],
    w: &[Rational],
) -> Result<Rational> {
    let n = l.dim();
    if v.len() != n || w.len() != n {
        return Err(Error::ShapeMismatch("tangent vector length".into()));
    }
    let fiber = l.fiber(x)?;
    let anchor = fiber.vector_block();
    let cov = fiber.covector_block();
    let cv = anchor
        .solve(v)
        .ok_or_else(|| Error::NotInOrbitDirection(x.to_string()))?;
    if anchor.solve(w).is_none() {
        return Err(Error::NotInOrbitDirection(x.to_string()));
    }
    let eta = cov.mul_vec(&cv);
    let value = dot(&eta, w);
    // Any other solution differs by a kernel element of the anchor; its
    // covector must vanish on w.
    for k in anchor.kernel() {
        let alt: Vec<Rational> = eta
            .iter()
            .zip(cov.mul_vec(&k))
            .map(|(a, b)| Field::add(a, &b))
            .collect();
        if dot(&alt, w) != value {
            return Err(Error::Invalid(
                "leafwise 2-form is not well defined at this point".into(),
            ));
        }
    }
    Ok(value)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(<Rational as Field>::zero(), |acc, (x, y)| Field::add(&acc, &Field::mul(x, y)))
}

/// Equality of two structures on the same patch: generic-point pairing plus
/// pointwise subspace equality at every sample.
pub fn compare_structures(
    a: &DiracStructure,
    b: &DiracStructure,
    id: &str,
    title: &str,
) -> CheckReport {
    let mut children = Vec::new();
    let generic_id = format!("{id}/generic");
    let generic = match a.pairing_residual(b) {
        Ok(None) => {
            let full = a.generic_rank_full() && b.generic_rank_full();
            CheckReport::check(generic_id, "equal at the generic point", full)
        }
        Ok(Some((i, j, r))) => CheckReport::fail(generic_id, "equal at the generic point")
            .with_residual(r.to_string())
            .with_note(format!("pairing of sections {i} and {j}")),
        Err(e) => CheckReport::fail(generic_id, "equal at the generic point").with_note(e.to_string()),
    };
    children.push(generic);
    for (k, s) in a.patch().samples().iter().enumerate() {
        let cid = format!("{id}/sample-{k}");
        let r = (|| -> Result<bool> {
            let fa = a.fiber(s)?;
            let fb = b.fiber(s)?;
            Ok(fa.basis().rank() == a.dim() && fa.subspace_equal(&fb)?)
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

/// Reports an error from a construction as a failed entry.
pub fn error_entry(id: &str, title: &str, e: &Error) -> CheckReport {
    CheckReport::leaf(id, title, Status::Fail).with_note(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn patch(name: &str, coords: &[&str]) -> Patch {
        let n = coords.len() as i64;
        Patch::new(
            name,
            coords,
            vec![
                (0..n).map(|_| rat(0)).collect(),
                (1..=n).map(rat).collect(),
                (0..n).map(|i| rat(2 - i)).collect(),
            ],
            vec![],
        )
        .unwrap()
    }

    fn v(n: &str) -> ScalarExpr {
        ScalarExpr::var(n)
    }

    fn bivector(entries: [[ScalarExpr; 3]; 3]) -> ExprMatrix {
        Matrix::from_rows(entries.iter().map(|r| r.to_vec()).collect())
    }

    fn so3() -> ExprMatrix {
        let z = ScalarExpr::zero();
        bivector([
            [z.clone(), v("z"), -v("y")],
            [-v("z"), z.clone(), v("x")],
            [v("y"), -v("x"), z],
        ])
    }

    #[test]
    fn courant_examples() {
        let p = patch("P", &["x", "y"]);
        let ex = GeneralizedSection::new(VectorField::coordinate(&p, 0), DifferentialForm::zero(&p, 1)).unwrap();
        let ey_xdy = GeneralizedSection::new(
            VectorField::coordinate(&p, 1),
            DifferentialForm::dx(&p, 1).scale(&v("x")),
        )
        .unwrap();
        let b = ex.courant_bracket(&ey_xdy).unwrap();
        assert!(b.vector().is_zero());
        assert_eq!(b.covector(), &DifferentialForm::dx(&p, 1));
        let dx = GeneralizedSection::new(VectorField::zero(&p), DifferentialForm::dx(&p, 0)).unwrap();
        let dy = GeneralizedSection::new(VectorField::zero(&p), DifferentialForm::dx(&p, 1)).unwrap();
        assert_eq!(dx.courant_bracket(&dy).unwrap(), GeneralizedSection::zero(&p));
    }

    #[test]
    fn so3_is_dirac() {
        let p = patch("g", &["x", "y", "z"]);
        let l = DiracStructure::from_bivector(&p, &so3()).unwrap();
        assert!(check_dirac(&l, "L").passed());
        assert!(check_dirac(&DiracStructure::cotangent(&p), "Z").passed());
    }

    #[test]
    fn non_jacobi_bivector_fails() {
        let p = patch("g", &["x", "y", "z"]);
        let z = ScalarExpr::zero();
        // {x,y} = x, {y,z} = x, {z,x} = y
        let m = bivector([
            [z.clone(), v("x"), -v("y")],
            [-v("x"), z.clone(), v("x")],
            [v("y"), -v("x"), z],
        ]);
        let l = DiracStructure::from_bivector(&p, &m).unwrap();
        let r = check_dirac(&l, "L");
        assert!(r.failed());
        let inv = r.find("L/involutivity").unwrap();
        assert!(inv.failed());
        assert_eq!(inv.residual.as_deref(), Some("y"));
    }

    #[test]
    fn pullback_examples() {
        let line = patch("line", &["u"]);
        let plane = patch("plane", &["x", "y"]);
        let area = DifferentialForm::dx(&plane, 0)
            .wedge(&DifferentialForm::dx(&plane, 1))
            .unwrap();
        let graph = DiracStructure::from_two_form(&area).unwrap();
        let incl = SmoothMap::new(&line, &plane, vec![v("u"), ScalarExpr::zero()]).unwrap();
        let (pulled, report) = pullback_dirac(&incl, &graph, "pb").unwrap();
        assert!(report.passed());
        assert!(compare_structures(&pulled, &DiracStructure::tangent(&line), "c", "eq").passed());

        let (same, _) = pullback_dirac(&SmoothMap::identity(&plane), &graph, "id").unwrap();
        assert!(compare_structures(&same, &graph, "c", "eq").passed());

        let base = patch("base", &["x"]);
        let proj = SmoothMap::projection(&plane, &base, &[0]).unwrap();
        let (pulled, report) = pullback_dirac(&proj, &DiracStructure::cotangent(&base), "pr").unwrap();
        assert!(report.passed());
        let expected = DiracStructure::from_matrix(
            &plane,
            &Matrix::from_rows(vec![
                vec![ScalarExpr::zero(), ScalarExpr::zero()],
                vec![ScalarExpr::zero(), ScalarExpr::one()],
                vec![ScalarExpr::one(), ScalarExpr::zero()],
                vec![ScalarExpr::zero(), ScalarExpr::zero()],
            ]),
        )
        .unwrap();
        assert!(compare_structures(&pulled, &expected, "c", "eq").passed());
    }

    #[test]
    fn gauge_transform_examples() {
        let plane = patch("plane", &["x", "y"]);
        let area = DifferentialForm::dx(&plane, 0)
            .wedge(&DifferentialForm::dx(&plane, 1))
            .unwrap();
        let t = DiracStructure::tangent(&plane);
        let g = t.gauge_transform(&area).unwrap();
        assert!(compare_structures(&g, &DiracStructure::from_two_form(&area).unwrap(), "c", "eq").passed());
        assert_eq!(t.gauge_transform(&DifferentialForm::zero(&plane, 2)).unwrap(), t);
        let back = g.gauge_transform(&area.neg()).unwrap();
        assert!(compare_structures(&back, &t, "c", "eq").passed());
        let open = DifferentialForm::dx(&plane, 0)
            .wedge(&DifferentialForm::dx(&plane, 1))
            .unwrap()
            .scale(&v("x"));
        assert!(open.is_closed());
        let three = patch("three", &["x", "y", "z"]);
        let not_closed = DifferentialForm::dx(&three, 0)
            .wedge(&DifferentialForm::dx(&three, 1))
            .unwrap()
            .scale(&v("z"));
        assert!(matches!(
            DiracStructure::tangent(&three).gauge_transform(&not_closed),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn leaf_form_examples() {
        let plane = patch("plane", &["x", "y"]);
        let area = DifferentialForm::dx(&plane, 0)
            .wedge(&DifferentialForm::dx(&plane, 1))
            .unwrap();
        let g = DiracStructure::from_two_form(&area).unwrap();
        let o = RationalPoint::from_coords(plane.coords(), &[rat(0), rat(0)]);
        assert_eq!(
            leaf_two_form_at_point(&g, &o, &[rat(1), rat(0)], &[rat(0), rat(1)]).unwrap(),
            rat(1)
        );
        let z = DiracStructure::cotangent(&plane);
        assert_eq!(
            leaf_two_form_at_point(&z, &o, &[rat(0), rat(0)], &[rat(0), rat(0)]).unwrap(),
            rat(0)
        );
        assert!(matches!(
            leaf_two_form_at_point(&z, &o, &[rat(1), rat(0)], &[rat(0), rat(0)]),
            Err(Error::NotInOrbitDirection(_))
        ));

        let p3 = patch("g", &["x", "y", "z"]);
        let l = DiracStructure::from_bivector(&p3, &so3()).unwrap();
        let x = RationalPoint::from_coords(p3.coords(), &[rat(0), rat(0), rat(1)]);
        let pm = so3().evaluate(&x).unwrap();
        let vx = pm.column(0);
        let vy = pm.column(1);
        assert_eq!(leaf_two_form_at_point(&l, &x, &vx, &vy).unwrap(), rat(1));
    }
}
