//! Charts presenting fibered products `A ×_X B`, together with the checks
//! shared by every module that verifies identities of maps and forms.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap};
use crate::report::CheckReport;
use crate::symbolic::{rat, Rational, RationalPoint, ScalarExpr, Var};

/// A patch standing for `{(a, b) : f(a) = g(b)}` with its two projections.
///
/// Every chart coordinate must occur verbatim as a component of one of the
/// projections; this is what makes pairs of maps liftable into the chart.
#[derive(Clone, Debug)]
pub struct FiberChart {
    patch: Patch,
    pr1: SmoothMap,
    pr2: SmoothMap,
    f: SmoothMap,
    g: SmoothMap,
    // For each chart coordinate: (which projection, component index).
    recover: Vec<(usize, usize)>,
}

impl FiberChart {
    pub fn new(pr1: SmoothMap, pr2: SmoothMap, f: SmoothMap, g: SmoothMap) -> Result<Self> {
        let patch = pr1.source().clone();
        patch.ensure_same(pr2.source())?;
        pr1.target().ensure_same(f.source())?;
        pr2.target().ensure_same(g.source())?;
        f.target().ensure_same(g.target())?;
        let fp1 = f.compose(&pr1)?;
        let gp2 = g.compose(&pr2)?;
        if let Some((i, r)) = fp1.differences(&gp2).first() {
            return Err(Error::SquareDoesNotCommute(format!("component {i}: {r}")));
        }
        let mut recover = Vec::with_capacity(patch.dim());
        for k in 0..patch.dim() {
            let c = patch.coord(k);
            let found = [&pr1, &pr2].iter().enumerate().find_map(|(side, p)| {
                p.components().iter().position(|e| *e == c).map(|j| (side, j))
            });
            match found {
                Some(r) => recover.push(r),
                None => {
                    return Err(Error::InvalidPatch {
                        patch: patch.name().to_string(),
                        reason: format!(
                            "coordinate `{}` is not a component of either projection",
                            patch.coords()[k]
                        ),
                    })
                }
            }
        }
        Ok(FiberChart {
            patch,
            pr1,
            pr2,
            f,
            g,
            recover,
        })
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    /// Builds the chart when one of the two maps is a coordinate projection:
    /// the chart coordinates are those of the other factor followed by the
    /// coordinates the projection forgets, primed where names clash.
    pub fn auto(f: &SmoothMap, g: &SmoothMap) -> Result<Self> {
        let (swap, idx) = match (projection_indices(g), projection_indices(f)) {
            (Some(idx), _) => (false, idx),
            (None, Some(idx)) => (true, idx),
            (None, None) => {
                return Err(Error::Invalid(format!(
                    "no chart for the fiber product of `{}` and `{}`: neither map is a coordinate projection",
                    f.source().name(),
                    g.source().name()
                )))
            }
        };
        let (other, proj) = if swap { (g, f) } else { (f, g) };
        let (a, b) = (other.source(), proj.source());
        let mut coords: Vec<Var> = a.coords().to_vec();
        let mut renamed: BTreeMap<usize, Var> = BTreeMap::new();
        for (k, c) in b.coords().iter().enumerate() {
            if idx.contains(&k) {
                continue;
            }
            let mut name = c.name().to_string();
            while coords.iter().any(|v| v.name() == name) {
                name.push('\'');
            }
            let v = Var::new(&name);
            coords.push(v.clone());
            renamed.insert(k, v);
        }
        // The projection side expressed on the chart.
        let b_components: Vec<ScalarExpr> = (0..b.dim())
            .map(|k| match renamed.get(&k) {
                Some(v) => ScalarExpr::var(v.name()),
                None => {
                    let j = idx.iter().position(|&i| i == k).expect("projected index");
                    other.components()[j].clone()
                }
            })
            .collect();
        let a_components: Vec<ScalarExpr> = (0..a.dim()).map(|k| a.coord(k)).collect();
        let rename_map: BTreeMap<Var, ScalarExpr> = b
            .coords()
            .iter()
            .cloned()
            .zip(b_components.iter().cloned())
            .collect();
        let mut constraints = a.constraints().to_vec();
        for c in b.constraints() {
            constraints.push(c.substitute(&rename_map)?);
        }
        let mut samples: Vec<RationalPoint> = Vec::new();
        'outer: for d in 0..a.samples().len() + b.samples().len() {
            for (i, pa) in a.samples().iter().enumerate() {
                let Some(pb) = d.checked_sub(i).and_then(|j| b.samples().get(j)) else {
                    continue;
                };
                let mut p = pa.clone();
                for (k, v) in &renamed {
                    let val = pb.get(&b.coords()[*k]).expect("sample coordinate").clone();
                    p.insert(v.clone(), val);
                }
                let mut ok = !samples.contains(&p);
                for c in &constraints {
                    ok = ok && !num_traits::Zero::is_zero(&c.evaluate(&p)?);
                }
                if ok {
                    samples.push(p);
                    if samples.len() == AUTO_SAMPLES {
                        break 'outer;
                    }
                }
            }
        }
        let name = format!("{}×{}", f.source().name(), g.source().name());
        let patch = Patch::with_points(&name, coords, samples, constraints)?;
        let on_a = SmoothMap::new(&patch, a, a_components)?;
        let on_b = SmoothMap::new(&patch, b, b_components)?;
        let (pr1, pr2) = if swap { (on_b, on_a) } else { (on_a, on_b) };
        FiberChart::new(pr1, pr2, f.clone(), g.clone())
    }


    pub fn pr1(&self) -> &SmoothMap {
        &self.pr1
    }

    pub fn pr2(&self) -> &SmoothMap {
        &self.pr2
    }

    pub fn f(&self) -> &SmoothMap {
        &self.f
    }

    pub fn g(&self) -> &SmoothMap {
        &self.g
    }

    /// The map `(h1, h2): Y → A ×_X B`, verified against both projections.
    pub fn lift(&self, h1: &SmoothMap, h2: &SmoothMap) -> Result<SmoothMap> {
        h1.source().ensure_same(h2.source())?;
        let fh1 = self.f.compose(h1)?;
        let gh2 = self.g.compose(h2)?;
        if let Some((i, r)) = fh1.differences(&gh2).first() {
            return Err(Error::SquareDoesNotCommute(format!(
                "pair does not land in `{}`: component {i} differs by {r}",
                self.patch.name()
            )));
        }
        let components = self
            .recover
            .iter()
            .map(|&(side, j)| {
                let h = if side == 0 { h1 } else { h2 };
                h.components()[j].clone()
            })
            .collect();
        let k = SmoothMap::new(h1.source(), &self.patch, components)?;
        for (p, h) in [(&self.pr1, h1), (&self.pr2, h2)] {
            let back = p.compose(&k)?;
            if let Some((i, r)) = back.differences(h).first() {
                return Err(Error::InvalidMap(format!(
                    "lift into `{}` does not project back: component {i} differs by {r}",
                    self.patch.name()
                )));
            }
        }
        Ok(k)
    }
}

const AUTO_SAMPLES: usize = 12;

/// Indices of the source coordinates a map picks, when every component is a
/// distinct coordinate.
fn projection_indices(map: &SmoothMap) -> Option<Vec<usize>> {
    let src = map.source();
    let mut out = Vec::new();
    for c in map.components() {
        let k = (0..src.dim()).find(|&k| src.coord(k) == *c)?;
        if out.contains(&k) {
            return None;
        }
        out.push(k);
    }
    Some(out)
}

/// `count` distinct small integer points in dimension `dim`, spread so that
/// no coordinate is constant across the set.
pub fn spread_samples(dim: usize, count: usize) -> Vec<Vec<Rational>> {
    (0..count as i64)
        .map(|k| {
            (0..dim as i64)
                .map(|j| {
                    if j == 0 {
                        rat(k - count as i64 / 2)
                    } else {
                        rat((k * (2 * j + 3) + j * j + 1) % 7 - 3)
                    }
                })
                .collect()
        })
        .collect()
}

/// `lhs = rhs` for maps, component by component.
pub fn map_identity(
    id: impl Into<String>,
    title: impl Into<String>,
    lhs: Result<SmoothMap>,
    rhs: Result<SmoothMap>,
) -> CheckReport {
    let (id, title) = (id.into(), title.into());
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => match a.differences(&b).first() {
            None => CheckReport::pass(id, title),
            Some((i, r)) => CheckReport::fail(id, title)
                .with_residual(r.to_string())
                .with_note(format!("component {i}")),
        },
        (Err(e), _) | (_, Err(e)) => CheckReport::fail(id, title).with_note(e.to_string()),
    }
}

/// `lhs = rhs` for forms, with the difference as residual.
pub fn form_identity(
    id: impl Into<String>,
    title: impl Into<String>,
    lhs: Result<DifferentialForm>,
    rhs: Result<DifferentialForm>,
) -> CheckReport {
    let (id, title) = (id.into(), title.into());
    match lhs.and_then(|a| rhs.and_then(|b| a.sub(&b))) {
        Ok(d) if d.is_zero() => CheckReport::pass(id, title),
        Ok(d) => CheckReport::fail(id, title).with_residual(d.to_string()),
        Err(e) => CheckReport::fail(id, title).with_note(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(name: &str, c: &str) -> Patch {
        Patch::new(name, &[c], vec![vec![rat(0)], vec![rat(1)], vec![rat(-2)]], vec![]).unwrap()
    }

    #[test]
    fn lift_into_product() {
        let a = Patch::new(
            "A",
            &["x", "a"],
            vec![vec![rat(0), rat(1)], vec![rat(1), rat(2)]],
            vec![],
        )
        .unwrap();
        let x = line("X", "x");
        let c = Patch::new(
            "C",
            &["x", "a", "b"],
            vec![vec![rat(0), rat(1), rat(3)], vec![rat(1), rat(2), rat(5)]],
            vec![],
        )
        .unwrap();
        let v = |n: &str| ScalarExpr::var(n);
        let pr1 = SmoothMap::new(&c, &a, vec![v("x"), v("a")]).unwrap();
        let pr2 = SmoothMap::new(&c, &a, vec![v("x"), v("b")]).unwrap();
        let f = SmoothMap::new(&a, &x, vec![v("x")]).unwrap();
        let chart = FiberChart::new(pr1, pr2, f.clone(), f).unwrap();
        let swap = SmoothMap::new(&a, &a, vec![v("x"), &v("a") * &v("a")]).unwrap();
        let k = chart.lift(&SmoothMap::identity(&a), &swap).unwrap();
        assert_eq!(k.components()[2].to_string(), "a^2");
        let off = SmoothMap::new(&a, &a, vec![&v("x") + &ScalarExpr::one(), v("a")]).unwrap();
        assert!(matches!(
            chart.lift(&SmoothMap::identity(&a), &off),
            Err(Error::SquareDoesNotCommute(_))
        ));
    }

    #[test]
    fn auto_chart() {
        let g = Patch::new("G", &["x", "xi"], spread_samples(2, 5), vec![]).unwrap();
        let m = line("M", "x");
        let s = SmoothMap::new(&g, &m, vec![ScalarExpr::var("x")]).unwrap();
        let c = FiberChart::auto(&s, &s).unwrap();
        let names: Vec<&str> = c.patch().coords().iter().map(|v| v.name()).collect();
        assert_eq!(names, ["x", "xi", "xi'"]);
        assert_eq!(c.pr2().components()[1].to_string(), "xi'");
        assert!(c.patch().samples().len() >= 5);

        let n = Patch::new("N", &["u", "v"], spread_samples(2, 4), vec![]).unwrap();
        let sq = SmoothMap::new(&n, &m, vec![&ScalarExpr::var("u") * &ScalarExpr::var("v")]).unwrap();
        let c = FiberChart::auto(&s, &sq).unwrap();
        let names: Vec<&str> = c.patch().coords().iter().map(|v| v.name()).collect();
        assert_eq!(names, ["u", "v", "xi"]);
        assert_eq!(c.pr1().components()[0].to_string(), "u*v");
        assert!(FiberChart::auto(&sq, &sq).is_err());
    }

    #[test]
    fn spread_is_distinct() {
        let s = spread_samples(4, 9);
        let set: std::collections::BTreeSet<_> = s.iter().cloned().collect();
        assert_eq!(set.len(), 9);
        assert!(s.iter().all(|p| p.len() == 4));
    }
}
