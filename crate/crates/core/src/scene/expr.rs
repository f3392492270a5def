//! Prefix expressions over coordinates, differentials and declared forms.

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Patch, SmoothMap};
use crate::symbolic::{ScalarExpr, Var};

use super::sexp::{Atom, Node, NodeKind};

/// Named forms and maps visible to expressions.
pub trait Scope {
    fn form(&self, name: &str) -> Option<&DifferentialForm>;
    fn map(&self, name: &str) -> Option<&SmoothMap>;
}

#[derive(Clone, Debug)]
pub enum Value {
    Scalar(ScalarExpr),
    Form(DifferentialForm),
}

fn invalid(node: &Node, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("{}:{}: {msg}", node.pos.line, node.pos.col))
}

impl Value {
    fn into_form(self, patch: &Patch) -> DifferentialForm {
        match self {
            Value::Scalar(s) => DifferentialForm::function(patch, s),
            Value::Form(f) => f,
        }
    }
}

/// Evaluates to a scalar; a 0-form counts as a scalar.
pub fn scalar(node: &Node, patch: &Patch, scope: &dyn Scope) -> Result<ScalarExpr> {
    match eval(node, patch, scope)? {
        Value::Scalar(s) => Ok(s),
        Value::Form(f) if f.degree() == 0 => f.function_value(),
        Value::Form(f) => Err(invalid(node, format!("expected a scalar, found a {}-form", f.degree()))),
    }
}

/// Evaluates to a form; scalars become 0-forms.
pub fn form(node: &Node, patch: &Patch, scope: &dyn Scope) -> Result<DifferentialForm> {
    Ok(eval(node, patch, scope)?.into_form(patch))
}

pub fn scalars(node: &Node, patch: &Patch, scope: &dyn Scope) -> Result<Vec<ScalarExpr>> {
    let items = node.list().ok_or_else(|| invalid(node, "expected a list"))?;
    items.iter().map(|n| scalar(n, patch, scope)).collect()
}

fn combine(
    node: &Node,
    patch: &Patch,
    a: Value,
    b: Value,
    on_scalars: impl Fn(&ScalarExpr, &ScalarExpr) -> Result<ScalarExpr>,
    on_forms: impl Fn(&DifferentialForm, &DifferentialForm) -> Result<DifferentialForm>,
) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(on_scalars(&x, &y)?)),
        (a, b) => {
            let (x, y) = (a.into_form(patch), b.into_form(patch));
            on_forms(&x, &y).map(Value::Form).map_err(|e| invalid(node, e))
        }
    }
}

fn fold(
    node: &Node,
    patch: &Patch,
    values: Vec<Value>,
    empty: ScalarExpr,
    on_scalars: impl Fn(&ScalarExpr, &ScalarExpr) -> Result<ScalarExpr> + Copy,
    on_forms: impl Fn(&DifferentialForm, &DifferentialForm) -> Result<DifferentialForm> + Copy,
) -> Result<Value> {
    let mut it = values.into_iter();
    let Some(first) = it.next() else {
        return Ok(Value::Scalar(empty));
    };
    it.try_fold(first, |acc, v| combine(node, patch, acc, v, on_scalars, on_forms))
}

pub fn eval(node: &Node, patch: &Patch, scope: &dyn Scope) -> Result<Value> {
    match &node.kind {
        NodeKind::Atom(Atom::Number(q)) => Ok(Value::Scalar(ScalarExpr::constant(q.clone()))),
        NodeKind::Atom(Atom::Symbol(s)) => symbol(node, s, patch, scope),
        NodeKind::Atom(_) => Err(invalid(node, "expected an expression")),
        NodeKind::List(items) => {
            let (head, args) = items
                .split_first()
                .ok_or_else(|| invalid(node, "empty expression"))?;
            let op = head
                .symbol()
                .ok_or_else(|| invalid(head, "expected an operator"))?;
            apply(node, op, args, patch, scope)
        }
    }
}

fn symbol(node: &Node, s: &str, patch: &Patch, scope: &dyn Scope) -> Result<Value> {
    let v = Var::new(s);
    if patch.index_of(&v).is_some() {
        return Ok(Value::Scalar(ScalarExpr::var(s)));
    }
    if let Some(i) = s.strip_prefix('d').and_then(|c| patch.index_of(&Var::new(c))) {
        return Ok(Value::Form(DifferentialForm::dx(patch, i)));
    }
    if let Some(f) = scope.form(s) {
        return f
            .on_patch(patch)
            .map(Value::Form)
            .map_err(|_| invalid(node, format!("form `{s}` does not live on `{}`", patch.name())));
    }
    Err(invalid(node, format!("unknown symbol `{s}` on `{}`", patch.name())))
}

fn apply(node: &Node, op: &str, args: &[Node], patch: &Patch, scope: &dyn Scope) -> Result<Value> {
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(invalid(node, format!("`{op}` takes {n} arguments")))
        }
    };
    let values = || {
        args.iter()
            .map(|a| eval(a, patch, scope))
            .collect::<Result<Vec<_>>>()
    };
    match op {
        "+" => fold(node, patch, values()?, ScalarExpr::zero(), |x, y| Ok(x + y), |x, y| x.add(y)),
        "-" => {
            let mut vs = values()?;
            if vs.is_empty() {
                return Err(invalid(node, "`-` needs an argument"));
            }
            let first = vs.remove(0);
            if vs.is_empty() {
                return Ok(match first {
                    Value::Scalar(s) => Value::Scalar(-s),
                    Value::Form(f) => Value::Form(f.neg()),
                });
            }
            vs.into_iter().try_fold(first, |acc, v| {
                combine(node, patch, acc, v, |x, y| Ok(x - y), |x, y| x.sub(y))
            })
        }
        "*" => fold(node, patch, values()?, ScalarExpr::one(), |x, y| Ok(x * y), |x, y| x.wedge(y)),
        "/" => {
            arity(2)?;
            let num = eval(&args[0], patch, scope)?;
            let den = scalar(&args[1], patch, scope)?;
            if den.is_zero() {
                return Err(invalid(&args[1], "division by zero"));
            }
            let inv = den.recip()?;
            Ok(match num {
                Value::Scalar(s) => Value::Scalar(&s * &inv),
                Value::Form(f) => Value::Form(f.scale(&inv)),
            })
        }
        "^" => {
            arity(2)?;
            let base = eval(&args[0], patch, scope)?;
            if let (Value::Scalar(b), Some(n)) = (&base, args[1].natural()) {
                let n = u32::try_from(n).map_err(|_| invalid(&args[1], "exponent too large"))?;
                return Ok(Value::Scalar(b.pow(n)));
            }
            let rhs = eval(&args[1], patch, scope)?;
            combine(node, patch, base, rhs, |x, y| Ok(x * y), |x, y| x.wedge(y))
        }
        "d" => {
            arity(1)?;
            Ok(Value::Form(form(&args[0], patch, scope)?.exterior_derivative()))
        }
        "pullback" => {
            arity(2)?;
            let name = args[1]
                .symbol()
                .ok_or_else(|| invalid(&args[1], "expected a map name"))?;
            let f = scope
                .map(name)
                .ok_or_else(|| invalid(&args[1], format!("unknown map `{name}`")))?;
            f.source()
                .ensure_same(patch)
                .map_err(|_| invalid(node, format!("map `{name}` does not start on `{}`", patch.name())))?;
            let inner = form(&args[0], f.target(), scope)?;
            inner.pullback(f).map(Value::Form).map_err(|e| invalid(node, e))
        }
        _ => Err(invalid(node, format!("unknown operator `{op}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::sexp::read_all;
    use crate::symbolic::rat;
    use std::collections::BTreeMap;

    struct Names(BTreeMap<String, DifferentialForm>, BTreeMap<String, SmoothMap>);

    impl Scope for Names {
        fn form(&self, name: &str) -> Option<&DifferentialForm> {
            self.0.get(name)
        }
        fn map(&self, name: &str) -> Option<&SmoothMap> {
            self.1.get(name)
        }
    }

    fn plane() -> Patch {
        Patch::new("M", &["x", "y"], vec![vec![rat(1), rat(2)]], vec![]).unwrap()
    }

    fn node(t: &str) -> Node {
        read_all(t).unwrap().remove(0)
    }

    #[test]
    fn forms_and_scalars() {
        let m = plane();
        let scope = Names(BTreeMap::new(), BTreeMap::new());
        let w = form(&node("(+ (* 1 (^ dx dy)))"), &m, &scope).unwrap();
        let area = DifferentialForm::dx(&m, 0).wedge(&DifferentialForm::dx(&m, 1)).unwrap();
        assert_eq!(w, area);
        let s = scalar(&node("(- (^ x 2) (/ y 2) 0.5)"), &m, &scope).unwrap();
        let want = &(&ScalarExpr::var("x").pow(2) - &ScalarExpr::var("y").scale(&crate::symbolic::ratio(1, 2)))
            - &ScalarExpr::constant(crate::symbolic::ratio(1, 2));
        assert_eq!(s, want);
        let dxy = form(&node("(d (* x y))"), &m, &scope).unwrap();
        assert_eq!(dxy.degree(), 1);
        assert!(scalar(&node("dx"), &m, &scope).is_err());
        assert!(scalar(&node("z"), &m, &scope).is_err());
        assert!(form(&node("(+ dx (^ dx dy))"), &m, &scope).is_err());
    }

    #[test]
    fn named_forms_and_pullbacks() {
        let m = plane();
        let g = Patch::new("G", &["a", "b", "c", "e"], vec![vec![rat(0); 4]], vec![]).unwrap();
        let t = SmoothMap::new(&g, &m, vec![ScalarExpr::var("a"), ScalarExpr::var("b")]).unwrap();
        let area = DifferentialForm::dx(&m, 0).wedge(&DifferentialForm::dx(&m, 1)).unwrap();
        let scope = Names(
            [("w".to_string(), area.clone())].into(),
            [("t".to_string(), t.clone())].into(),
        );
        let tau = form(&node("(pullback w t)"), &g, &scope).unwrap();
        assert_eq!(tau, area.pullback(&t).unwrap());
        let twice = form(&node("(* 2 w)"), &m, &scope).unwrap();
        assert_eq!(twice, area.scale(&ScalarExpr::int(2)));
        assert!(form(&node("(pullback w t)"), &m, &scope).is_err());
    }
}
