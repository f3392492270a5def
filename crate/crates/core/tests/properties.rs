use dman_core::bundles::{glue_characteristic_form, LocalPiece, Transition};
use dman_core::chart::spread_samples;
use dman_core::dirac::{check_involutive, DiracStructure};
use dman_core::dman::same_dirac;
use dman_core::exterior::{DifferentialForm, Patch, SmoothMap};
use dman_core::linalg::{ExprMatrix, Matrix, QMatrix};
use dman_core::linear_dirac::{is_lagrangian, LinearDiracSpace};
use dman_core::report::{CheckReport, Status};
use dman_core::scene::parse_scene;
use dman_core::symbolic::{rat, Rational, ScalarExpr, Var};
use dman_core::Error;
use proptest::prelude::*;

fn v(n: &str) -> ScalarExpr {
    ScalarExpr::var(n)
}

fn skew(n: usize, entries: &[i64]) -> QMatrix {
    let mut rows = vec![vec![rat(0); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            rows[i][j] = rat(entries[k]);
            rows[j][i] = rat(-entries[k]);
            k += 1;
        }
    }
    Matrix::from_rows(rows)
}

fn dense(rows: usize, cols: usize, entries: &[i64]) -> QMatrix {
    Matrix::from_rows(
        (0..rows)
            .map(|i| (0..cols).map(|j| rat(entries[i * cols + j])).collect())
            .collect(),
    )
}

fn small() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 16)
}

/// Graph of a bivector or of a 2-form, pulled back by an arbitrary matrix.
fn lagrangian(n: usize, kind: u8, e: &[i64], a: &[i64]) -> LinearDiracSpace<Rational> {
    let base = match kind % 3 {
        0 => LinearDiracSpace::graph_of_bivector(&skew(n, e)).unwrap(),
        1 => LinearDiracSpace::graph_of_two_form(&skew(n, e)).unwrap(),
        _ => LinearDiracSpace::tangent(n),
    };
    base.backward_image(&dense(n, n, a)).unwrap()
}

// {F, x_k} = Σ_a P_ak ∂_a F, summed cyclically.
fn jacobiator(p: &ExprMatrix) -> ScalarExpr {
    let vars = [Var::new("x"), Var::new("y"), Var::new("z")];
    let mut total = ScalarExpr::zero();
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        for (a, va) in vars.iter().enumerate() {
            total = &total + &(&p.get(i, j).differentiate(va) * p.get(a, k));
        }
    }
    total
}

fn affine(c: &[i64]) -> ScalarExpr {
    let mut e = ScalarExpr::int(c[0]);
    for (n, k) in ["x", "y", "z"].into_iter().zip(&c[1..4]) {
        e = &e + &v(n).scale(&rat(*k));
    }
    e
}

fn bivector(c: &[i64]) -> ExprMatrix {
    let (a, b, d) = (affine(&c[0..4]), affine(&c[4..8]), affine(&c[8..12]));
    let z = ScalarExpr::zero();
    Matrix::from_rows(vec![
        vec![z.clone(), a.clone(), -&d],
        vec![-&a, z.clone(), b.clone()],
        vec![d, -&b, z],
    ])
}

fn plane() -> Patch {
    Patch::new("M", &["x", "y"], spread_samples(2, 5), vec![]).unwrap()
}

fn area(m: &Patch, coefficient: ScalarExpr) -> DifferentialForm {
    DifferentialForm::dx(m, 0)
        .wedge(&DifferentialForm::dx(m, 1))
        .unwrap()
        .scale(&coefficient)
}

fn quadratic(c: &[i64]) -> ScalarExpr {
    let (x, y) = (v("x"), v("y"));
    &(&ScalarExpr::int(c[0]) + &x.scale(&rat(c[1]))) + &(&(&x * &y).scale(&rat(c[2])) + &y.pow(2).scale(&rat(c[3])))
}

fn status_tree(codes: &[u8]) -> CheckReport {
    let leaf = |k: usize, c: u8| {
        let s = match c % 5 {
            0 => Status::Pass,
            1 => Status::Fail,
            2 => Status::Attested,
            3 => Status::Unattested,
            _ => Status::Skipped,
        };
        CheckReport::leaf(format!("g{}/l{k}", k % 3), "leaf", s)
    };
    let groups = (0..3)
        .map(|g| {
            let kids = codes
                .iter()
                .enumerate()
                .filter(|(k, _)| k % 3 == g)
                .map(|(k, c)| leaf(k, *c))
                .collect();
            CheckReport::node(format!("g{g}"), "group", kids)
        })
        .collect();
    CheckReport::root(groups)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn backward_images_stay_lagrangian(n in 1usize..=4, m in 1usize..=4, kind in 0u8..3, e in small(), a in small(), c in small()) {
        let l = lagrangian(n, kind, &e, &a);
        let back = l.backward_image(&dense(n, m, &c)).unwrap();
        prop_assert!(is_lagrangian(back.basis()).unwrap().is_none());
    }

    #[test]
    fn backward_image_is_functorial(n in 1usize..=3, kind in 0u8..3, e in small(), a in small(), b in small(), c in small()) {
        let l = lagrangian(n, kind, &e, &a);
        let (f, g) = (dense(n, n, &b), dense(n, n, &c));
        let stepwise = l.backward_image(&f).unwrap().backward_image(&g).unwrap();
        let direct = l.backward_image(&f.mul(&g)).unwrap();
        prop_assert!(stepwise.subspace_equal(&direct).unwrap());
    }

    #[test]
    fn gauge_shift_commutes_with_backward_image(n in 1usize..=3, m in 1usize..=3, kind in 0u8..3, e in small(), a in small(), b in small(), c in small()) {
        let l = lagrangian(n, kind, &e, &a);
        let beta = skew(n, &b);
        let f = dense(n, m, &c);
        let left = l.gauge_shift(&beta).unwrap().backward_image(&f).unwrap();
        let right = l.backward_image(&f).unwrap().gauge_shift(&f.transpose().mul(&beta).mul(&f)).unwrap();
        prop_assert!(left.subspace_equal(&right).unwrap());
    }

    #[test]
    fn involutivity_agrees_with_the_jacobiator(c in prop::collection::vec(-2i64..=2, 12)) {
        let p = Patch::new("R3", &["x", "y", "z"], spread_samples(3, 5), vec![]).unwrap();
        let pi = bivector(&c);
        let l = DiracStructure::from_bivector(&p, &pi).unwrap();
        prop_assert_eq!(check_involutive(&l, "inv").unwrap().passed(), jacobiator(&pi).is_zero());
    }

    #[test]
    fn closed_gauge_transformations_compose(c in small(), d in small()) {
        let m = plane();
        let l = DiracStructure::from_two_form(&area(&m, ScalarExpr::one())).unwrap();
        let (b1, b2) = (area(&m, quadratic(&c)), area(&m, quadratic(&d)));
        let stepwise = l.gauge_transform(&b1).unwrap().gauge_transform(&b2).unwrap();
        let direct = l.gauge_transform(&b1.add(&b2).unwrap()).unwrap();
        prop_assert!(same_dirac(&stepwise, &direct));
        let back = stepwise.gauge_transform(&b1.add(&b2).unwrap().neg()).unwrap();
        prop_assert!(same_dirac(&back, &l));
    }

    #[test]
    fn exterior_derivative_squares_to_zero_and_commutes_with_pullback(c in small(), d in small()) {
        let m = plane();
        let one = DifferentialForm::one_form(&m, vec![quadratic(&c), quadratic(&d)]).unwrap();
        prop_assert!(one.exterior_derivative().exterior_derivative().is_zero());
        let line = Patch::new("line", &["t"], spread_samples(1, 5), vec![]).unwrap();
        let t = v("t");
        let curve = SmoothMap::new(&line, &m, vec![&t * &t, &t + &ScalarExpr::int(c[4])]).unwrap();
        let f = DifferentialForm::function(&m, quadratic(&d));
        let lhs = f.exterior_derivative().pullback(&curve).unwrap();
        let rhs = f.pullback(&curve).unwrap().exterior_derivative();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn glued_forms_restrict_to_the_pieces(c in small(), cuts in prop::collection::btree_set(-3i64..=3, 1..4), bump in 1i64..=3) {
        let total = Patch::new("G", &["x", "y"], spread_samples(2, 8), vec![]).unwrap();
        let omega = area(&total, quadratic(&c));
        let pieces: Vec<LocalPiece> = cuts
            .iter()
            .enumerate()
            .map(|(k, cut)| {
                let samples = spread_samples(2, 8).into_iter().filter(|s| s[0] != rat(*cut)).collect();
                let u = Patch::new(&format!("U{k}"), &["x", "y"], samples, vec![v("x") - ScalarExpr::int(*cut)]).unwrap();
                LocalPiece { phi: SmoothMap::identity(&total).with_endpoints(&u, &total).unwrap(), omega: omega.clone() }
            })
            .collect();
        let id = SmoothMap::identity(&total);
        let transitions: Vec<Transition> = (1..pieces.len())
            .map(|b| Transition { a: 0, b, map: id.clone() })
            .collect();
        let (glued, report) = glue_characteristic_form(&total, &pieces, &transitions, "glue").unwrap();
        prop_assert!(report.passed());
        for p in &pieces {
            prop_assert_eq!(glued.pullback(&p.phi).unwrap(), p.omega.pullback(&p.phi).unwrap());
        }
        if pieces.len() > 1 {
            let mut bad = pieces.clone();
            bad[1].omega = omega.add(&area(&total, ScalarExpr::int(bump))).unwrap();
            let mismatch = matches!(glue_characteristic_form(&total, &bad, &transitions, "glue"), Err(Error::OverlapMismatch(_)));
            prop_assert!(mismatch);
        }
    }

    #[test]
    fn report_statuses_aggregate(codes in prop::collection::vec(0u8..5, 0..12), prefix in 0usize..3) {
        let r = status_tree(&codes);
        let leaves: Vec<Status> = r.leaves().iter().filter(|l| l.id.contains('/')).map(|l| l.status).collect();
        let any = |s: Status| leaves.contains(&s);
        let want = if any(Status::Fail) {
            Status::Fail
        } else if any(Status::Unattested) {
            Status::Unattested
        } else {
            Status::Pass
        };
        prop_assert_eq!(r.status, want);
        prop_assert_eq!(r.exit_code(), match want { Status::Fail => 1, Status::Unattested => 2, _ => 0 });
        let group = format!("g{prefix}");
        let f = r.filtered(&group);
        prop_assert!(f.children.len() <= 1);
        prop_assert!(f.leaves().iter().all(|l| l.id == "root" || l.id.starts_with(&group)));
    }

    #[test]
    fn printed_scenes_reparse(
        names in prop::collection::btree_set("[a-z][a-z0-9]{0,4}", 2..5),
        coefficients in prop::collection::vec((-9i64..=9, 1i64..=5), 3),
        samples in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..4),
        decimal in 0u32..100,
    ) {
        let names: Vec<String> = names.into_iter().map(|n| format!("w{n}")).collect();
        let mut text = String::from("; generated\n(patch M :coords (x y) :samples (");
        for s in &samples {
            text.push_str(&format!("({} {}) ", s[0], s[1]));
        }
        text.push_str("))\n");
        let [(a, b), (c, d), (e, f)] = [coefficients[0], coefficients[1], coefficients[2]];
        for (k, n) in names.iter().enumerate() {
            text.push_str(&format!(
                "(form {n} :on M :expr (* (+ {a}/{b} (* {c}/{d} x) (^ y {k}) 0.{decimal:02}) (^ dx dy)))\n"
            ));
        }
        text.push_str(&format!("(dirac L :two-form {})\n(check c check-dirac :dirac L)\n", names[0]));
        text.push_str(&format!("(form g :on M :expr (- {e}/{f}))\n"));
        let parsed = parse_scene(&text).unwrap();
        let printed = parsed.print();
        let reparsed = parse_scene(&printed).unwrap();
        prop_assert_eq!(&reparsed, &parsed);
        prop_assert_eq!(reparsed.print(), printed);
    }
}
