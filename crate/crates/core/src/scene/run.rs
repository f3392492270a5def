//! Runs the `check` declarations of a scene.

use crate::algebroid::{
    check_algebroid, check_algebroid_morphism, check_dlie_algebroid, check_im_form,
    check_weak_equivalence, derive_im_form_from_groupoid, pullback_algebroid,
    source_kernel_frame, Attestations,
};
use crate::bundles::{
    bundle_from_morphism, check_bibundle, check_bundle_morphism, check_nondegenerate,
    check_principal_bundle, glue_characteristic_form, pullback_bundle,
    tensor_characteristic_form, LocalPiece, Quotient, Transition,
};
use crate::chart::FiberChart;
use crate::dirac::{check_dirac, error_entry};
use crate::dman::{check_diagram, check_morphism, fiber_product, universal_arrow, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::{
    check_dlie_conditions, check_dlie_morphism, derive_gauge_parts, target_align,
    verify_gauge_axioms, verify_presentation,
};
use crate::report::CheckReport;

use super::elaborate::{name, Env};
use super::schema::{Decl, Kind, SceneFile};
use super::sexp::Node;

/// Elaborates every declaration in order and runs each check. Failures
/// become failed entries; nothing here aborts.
pub fn run_checks(scene: &SceneFile) -> CheckReport {
    let mut env = Env::default();
    let mut children = Vec::new();
    for d in &scene.decls {
        if d.kind == Kind::Check {
            children.push(run_check(&env, d));
        } else if let Err(e) = env.declare(d) {
            let id = format!("declare/{}/{}", d.kind, d.name);
            children.push(error_entry(&id, &format!("{} `{}`", d.kind, d.name), &e));
        }
    }
    CheckReport::root(children)
}

fn run_check(env: &Env, d: &Decl) -> CheckReport {
    let verb = d.verb.as_deref().unwrap_or_default();
    match dispatch(env, d, verb) {
        Ok(r) => r,
        Err(e) => error_entry(&d.name, verb, &e),
    }
}

fn arg<'a>(d: &'a Decl, key: &str) -> Result<&'a Node> {
    d.get(key)
        .ok_or_else(|| Error::Invalid(format!("check `{}` needs :{key}", d.name)))
}

fn items(node: &Node) -> &[Node] {
    node.list().expect("validated list")
}

fn optional_chart(env: &Env, d: &Decl) -> Result<Option<FiberChart>> {
    d.get("chart").map(|c| env.chart(c).cloned()).transpose()
}

fn dispatch(env: &Env, d: &Decl, verb: &str) -> Result<CheckReport> {
    let id = d.name.as_str();
    Ok(match verb {
        "check-dirac" => check_dirac(env.dirac(arg(d, "dirac")?)?, id),
        "check-morphism" => check_morphism(env.morphism(arg(d, "morphism")?)?, id),
        "check-diagram" => {
            let mut diagram = Diagram::new();
            let mut edges: Vec<(String, usize)> = Vec::new();
            for t in items(arg(d, "triangles")?) {
                let mut idx = [0; 3];
                for (k, m) in items(t).iter().enumerate() {
                    let n = name(m);
                    idx[k] = match edges.iter().find(|(e, _)| e == n) {
                        Some((_, i)) => *i,
                        None => {
                            let i = diagram.edge(n, env.morphism(m)?.clone());
                            edges.push((n.to_string(), i));
                            i
                        }
                    };
                }
                diagram.triangle(idx[0], idx[1], idx[2]);
            }
            check_diagram(&diagram, id)
        }
        "fiber-product" => {
            let c = env.chart(arg(d, "chart")?)?;
            let f = env.morphism(arg(d, "f")?)?;
            let g = env.morphism(arg(d, "g")?)?;
            fiber_product(f, g, c.patch(), c.pr1(), c.pr2(), id)?.1
        }
        "universal-arrow" => {
            let c = env.chart(arg(d, "chart")?)?;
            let f = env.morphism(arg(d, "f")?)?;
            let g = env.morphism(arg(d, "g")?)?;
            let (fp, fp_report) =
                fiber_product(f, g, c.patch(), c.pr1(), c.pr2(), &format!("{id}/fiber-product"))?;
            let h1 = env.morphism(arg(d, "h1")?)?;
            let h2 = env.morphism(arg(d, "h2")?)?;
            let k = env.map(arg(d, "k")?)?;
            let (_, arrow) = universal_arrow(&fp, h1, h2, k, &format!("{id}/arrow"))?;
            CheckReport::node(id, "universal arrow", vec![fp_report, arrow])
        }
        "check-groupoid" => verify_presentation(&env.groupoid(arg(d, "groupoid")?)?.presentation, id),
        "check-dlie" => check_dlie_conditions(env.dlie(arg(d, "groupoid")?)?, id),
        "derive-gauge-parts" => {
            let parts = derive_gauge_parts(env.dlie(arg(d, "groupoid")?)?)?;
            let leaf = |k: &str, title: &str, w: &crate::exterior::DifferentialForm| {
                CheckReport::pass(format!("{id}/{k}"), title).with_note(format!("{k} = {w}"))
            };
            CheckReport::node(
                id,
                "gauge parts of the structure maps",
                vec![
                    leaf("upsilon", "gauge part of u", &parts.upsilon),
                    leaf("mu", "gauge part of m", &parts.mu),
                    leaf("iota", "gauge part of i", &parts.iota),
                ],
            )
        }
        "check-gauge-axioms" => verify_gauge_axioms(env.dlie(arg(d, "groupoid")?)?, id)?,
        "target-align" => {
            let g = env.dlie(arg(d, "groupoid")?)?;
            let (aligned, _, mut report) = target_align(g, id)?;
            let again = format!("{id}/idempotent");
            let title = "aligning twice changes nothing";
            report.push(match target_align(&aligned, "again") {
                Ok((twice, _, _)) => CheckReport::check(&again, title, twice.same_data(&aligned)),
                Err(e) => error_entry(&again, title, &e),
            });
            report
        }
        "check-dlie-morphism" => {
            let m = env.dlie_morphism(arg(d, "morphism")?)?;
            let src = env_dlie_named(env, &m.source)?;
            let dst = env_dlie_named(env, &m.target)?;
            check_dlie_morphism(&m.value, src, dst, id)
        }
        "check-bundle" => {
            let b = arg(d, "bundle")?;
            if env.is_bibundle(b) {
                check_bibundle(env.bibundle(b)?, id)
            } else {
                check_principal_bundle(env.bundle(b)?, id)
            }
        }
        "pullback-bundle" => {
            let b = env.bundle(arg(d, "bundle")?)?;
            let f = env.morphism(arg(d, "along")?)?;
            pullback_bundle(b, f, optional_chart(env, d)?, id)?.2
        }
        "check-bundle-morphism" => {
            let m = env.bundle_morphism(arg(d, "morphism")?)?;
            let src = env.bundles.get(&m.source).ok_or_else(|| missing("bundle", &m.source))?;
            let dst = env.bundles.get(&m.target).ok_or_else(|| missing("bundle", &m.target))?;
            check_bundle_morphism(&m.value, src, dst, id)
        }
        "glue" => {
            let total = env.patch(arg(d, "total")?)?;
            let pieces = items(arg(d, "pieces")?)
                .iter()
                .map(|p| {
                    let [phi, w] = items(p) else { unreachable!("validated piece") };
                    Ok(LocalPiece {
                        phi: env.map(phi)?.clone(),
                        omega: env.form(w)?.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let transitions = d
                .get("transitions")
                .map(items)
                .unwrap_or(&[])
                .iter()
                .map(|t| {
                    let [a, b, m] = items(t) else { unreachable!("validated transition") };
                    Ok(Transition {
                        a: a.natural().expect("index"),
                        b: b.natural().expect("index"),
                        map: env.map(m)?.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (omega, mut report) = glue_characteristic_form(&total, &pieces, &transitions, id)?;
            if let Some(w) = d.get("expect") {
                report.push(expected_form(&format!("{id}/expected"), &omega, env.form(w)?));
            }
            report
        }
        "bundle-from-morphism" => {
            let m = env.dlie_morphism(arg(d, "morphism")?)?;
            let h = env_dlie_named(env, &m.source)?;
            let g = env_dlie_named(env, &m.target)?;
            let (b, mut report) = bundle_from_morphism(&m.value, h, g, optional_chart(env, d)?, id)?;
            if let Some(e) = d.get("expect") {
                report.push(CheckReport::check(
                    format!("{id}/expected"),
                    format!("agrees with `{}`", name(e)),
                    b.same_data(env.bibundle(e)?),
                ));
            }
            report
        }
        "tensor" => {
            let p = env.bibundle(arg(d, "left")?)?;
            let q = env.bibundle(arg(d, "right")?)?;
            let chart = match optional_chart(env, d)? {
                Some(c) => c,
                None => FiberChart::auto(p.left().s(), q.left().t())?,
            };
            let quotient = match (d.get("quotient"), d.get("right-unit").and_then(Node::symbol)) {
                (Some(qn), _) => Some(env.quotient(qn)?.clone()),
                (None, Some("true")) => Some(Quotient::right_unit(p, &chart)?),
                _ => None,
            };
            let (omega, mut report) = tensor_characteristic_form(p, q, Some(chart), quotient.as_ref(), id)?;
            if let Some(w) = d.get("expect") {
                let entry = match &omega {
                    Some(o) => expected_form(&format!("{id}/expected"), o, env.form(w)?),
                    None => CheckReport::fail(format!("{id}/expected"), "descended form expected")
                        .with_note("no quotient given"),
                };
                report.push(entry);
            }
            report
        }
        "check-nondegenerate" => check_nondegenerate(env.bibundle(arg(d, "bibundle")?)?, id),
        "check-algebroid" => check_algebroid(env.algebroid(arg(d, "algebroid")?)?, id),
        "check-im-form" => check_im_form(env.dlie_algebroid(arg(d, "algebroid")?)?, id)?,
        "check-dlie-algebroid" => check_dlie_algebroid(env.dlie_algebroid(arg(d, "algebroid")?)?, id)?,
        "derive-im-form" => {
            let g = env.dlie(arg(d, "groupoid")?)?;
            let frame = match d.get("frame") {
                Some(f) => items(f).iter().map(|v| env.field(v).cloned()).collect::<Result<Vec<_>>>()?,
                None => source_kernel_frame(g)?,
            };
            let (derived, mut report) = derive_im_form_from_groupoid(g, &frame, id)?;
            if let Some(e) = d.get("expect") {
                let want = items(e);
                let got = derived.im_form.forms();
                if want.len() != got.len() {
                    report.push(
                        CheckReport::fail(format!("{id}/expected"), "expected forms")
                            .with_note(format!("{} forms derived, {} expected", got.len(), want.len())),
                    );
                }
                for (k, (w, g)) in want.iter().zip(got).enumerate() {
                    report.push(expected_form(&format!("{id}/expected-{k}"), g, env.form(w)?));
                }
            }
            report
        }
        "check-algebroid-morphism" => check_algebroid_morphism(
            env.algebroid_morphism(arg(d, "morphism")?)?,
            env.morphism(arg(d, "base")?)?,
            env.dlie_algebroid(arg(d, "source")?)?,
            env.dlie_algebroid(arg(d, "target")?)?,
            id,
        ),
        "pullback-algebroid" => {
            let f = env.map(arg(d, "map")?)?;
            pullback_algebroid(f, env.algebroid(arg(d, "algebroid")?)?, None, id)?.1
        }
        "check-weak-equivalence" => {
            let attest = match d.get("attestation") {
                Some(a) => *env.attestation(a)?,
                None => Attestations::default(),
            };
            check_weak_equivalence(
                env.algebroid_morphism(arg(d, "morphism")?)?,
                env.algebroid(arg(d, "source")?)?,
                env.algebroid(arg(d, "target")?)?,
                attest,
                id,
            )?
        }
        other => return Err(Error::Invalid(format!("unknown verb `{other}`"))),
    })
}

fn missing(kind: &str, n: &str) -> Error {
    Error::PrerequisiteFailed(format!("{kind} `{n}` is unavailable"))
}

fn env_dlie_named<'a>(env: &'a Env, n: &str) -> Result<&'a crate::groupoid::DLieGroupoid> {
    env.groupoids
        .get(n)
        .ok_or_else(|| missing("groupoid", n))?
        .dlie
        .as_ref()
        .ok_or_else(|| Error::Invalid(format!("groupoid `{n}` has no :base and :gauge")))
}

fn expected_form(
    eid: &str,
    got: &crate::exterior::DifferentialForm,
    want: &crate::exterior::DifferentialForm,
) -> CheckReport {
    let title = "agrees with the expected form";
    match want.on_patch(got.patch()).and_then(|w| got.sub(&w)) {
        Ok(r) if r.is_zero() => CheckReport::pass(eid, title),
        Ok(r) => CheckReport::fail(eid, title).with_residual(r.to_string()),
        Err(e) => error_entry(eid, title, &e),
    }
}
