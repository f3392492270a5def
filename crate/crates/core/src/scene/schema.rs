//! Declaration kinds, the keyword shapes each accepts, and the check verbs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::sexp::{read_all, Node, Pos};
use super::SceneError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Patch,
    Chart,
    Map,
    Form,
    VectorField,
    Dirac,
    Morphism,
    GaugePair,
    Groupoid,
    DLieMorphism,
    Action,
    Division,
    Bundle,
    Bibundle,
    BundleMorphism,
    Quotient,
    Algebroid,
    ImForm,
    DLieAlgebroid,
    AlgebroidMorphism,
    Attestation,
    Check,
}

pub const KINDS: &[Kind] = &[
    Kind::Patch,
    Kind::Chart,
    Kind::Map,
    Kind::Form,
    Kind::VectorField,
    Kind::Dirac,
    Kind::Morphism,
    Kind::GaugePair,
    Kind::Groupoid,
    Kind::DLieMorphism,
    Kind::Action,
    Kind::Division,
    Kind::Bundle,
    Kind::Bibundle,
    Kind::BundleMorphism,
    Kind::Quotient,
    Kind::Algebroid,
    Kind::ImForm,
    Kind::DLieAlgebroid,
    Kind::AlgebroidMorphism,
    Kind::Attestation,
    Kind::Check,
];

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Patch => "patch",
            Kind::Chart => "chart",
            Kind::Map => "map",
            Kind::Form => "form",
            Kind::VectorField => "vectorfield",
            Kind::Dirac => "dirac",
            Kind::Morphism => "morphism",
            Kind::GaugePair => "gaugepair",
            Kind::Groupoid => "groupoid",
            Kind::DLieMorphism => "dlie-morphism",
            Kind::Action => "action",
            Kind::Division => "division",
            Kind::Bundle => "bundle",
            Kind::Bibundle => "bibundle",
            Kind::BundleMorphism => "bundle-morphism",
            Kind::Quotient => "quotient",
            Kind::Algebroid => "algebroid",
            Kind::ImForm => "imform",
            Kind::DLieAlgebroid => "dlie-algebroid",
            Kind::AlgebroidMorphism => "algebroid-morphism",
            Kind::Attestation => "attestation",
            Kind::Check => "check",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        KINDS.iter().copied().find(|k| k.keyword() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The shape of a keyword's value.
#[derive(Clone, Copy, Debug)]
pub enum Shape {
    Ref(&'static [Kind]),
    Refs(&'static [Kind]),
    Expr,
    Exprs,
    /// A list of lists of expressions.
    Matrix,
    /// A list of lists of numbers.
    Points,
    /// A list of distinct symbols.
    Coords,
    Bool,
    Word(&'static [&'static str]),
    /// `((i j (c0 c1 ...)) ...)`: bracket `[e_i, e_j] = Σ c_k e_k`.
    Brackets,
    /// `((phi form) ...)`.
    Pieces,
    /// `((a b map) ...)`.
    Transitions,
    /// `((first second composite) ...)` of morphisms.
    Triangles,
}

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub key: &'static str,
    pub shape: Shape,
    pub required: bool,
}

macro_rules! req {
    ($key:literal, $shape:expr) => {
        Param {
            key: $key,
            shape: $shape,
            required: true,
        }
    };
}

macro_rules! opt {
    ($key:literal, $shape:expr) => {
        Param {
            key: $key,
            shape: $shape,
            required: false,
        }
    };
}

const PATCHLIKE: &[Kind] = &[Kind::Patch, Kind::Chart];
const MAP: &[Kind] = &[Kind::Map];
const FORM: &[Kind] = &[Kind::Form];
const DIRAC: &[Kind] = &[Kind::Dirac];
const CHART: &[Kind] = &[Kind::Chart];
const MORPHISM: &[Kind] = &[Kind::Morphism];
const GROUPOID: &[Kind] = &[Kind::Groupoid];
const BUNDLELIKE: &[Kind] = &[Kind::Bundle, Kind::Bibundle];
const BUNDLE: &[Kind] = &[Kind::Bundle];
const BIBUNDLE: &[Kind] = &[Kind::Bibundle];
const ALGEBROIDLIKE: &[Kind] = &[Kind::Algebroid, Kind::DLieAlgebroid];
const DLIE_ALGEBROID: &[Kind] = &[Kind::DLieAlgebroid];

pub fn params(kind: Kind) -> &'static [Param] {
    use Shape::*;
    match kind {
        Kind::Patch => &[
            req!("coords", Coords),
            opt!("samples", Points),
            opt!("constraints", Exprs),
        ],
        Kind::Chart => &[
            opt!("auto", Refs(MAP)),
            opt!("pr1", Ref(MAP)),
            opt!("pr2", Ref(MAP)),
            opt!("f", Ref(MAP)),
            opt!("g", Ref(MAP)),
        ],
        Kind::Map => &[
            req!("from", Ref(PATCHLIKE)),
            req!("to", Ref(PATCHLIKE)),
            req!("components", Exprs),
        ],
        Kind::Form => &[req!("on", Ref(PATCHLIKE)), req!("expr", Expr)],
        Kind::VectorField => &[req!("on", Ref(PATCHLIKE)), req!("components", Exprs)],
        Kind::Dirac => &[
            opt!("on", Ref(PATCHLIKE)),
            opt!("kind", Word(&["tangent", "cotangent"])),
            opt!("bivector", Matrix),
            opt!("two-form", Ref(FORM)),
            opt!("frame", Matrix),
            opt!("from", Ref(DIRAC)),
            opt!("gauge", Ref(FORM)),
            opt!("pullback", Ref(DIRAC)),
            opt!("along", Ref(MAP)),
        ],
        Kind::Morphism => &[
            req!("map", Ref(MAP)),
            opt!("gauge", Ref(FORM)),
            req!("source", Ref(DIRAC)),
            req!("target", Ref(DIRAC)),
        ],
        Kind::GaugePair => &[req!("tau", Ref(FORM)), req!("sigma", Ref(FORM))],
        Kind::Groupoid => &[
            opt!("unit-of", Ref(DIRAC)),
            opt!("s", Ref(MAP)),
            opt!("t", Ref(MAP)),
            opt!("u", Ref(MAP)),
            opt!("i", Ref(MAP)),
            opt!("m", Ref(MAP)),
            opt!("pairs", Ref(CHART)),
            opt!("triples", Ref(CHART)),
            opt!("base", Ref(DIRAC)),
            opt!("gauge", Ref(&[Kind::GaugePair])),
        ],
        Kind::DLieMorphism => &[
            req!("arrows", Ref(MAP)),
            req!("base", Ref(MAP)),
            opt!("alpha", Ref(FORM)),
            opt!("beta", Ref(FORM)),
            req!("source", Ref(GROUPOID)),
            req!("target", Ref(GROUPOID)),
        ],
        Kind::Action | Kind::Division => &[req!("chart", Ref(CHART)), req!("map", Ref(MAP))],
        Kind::Bundle => &[
            opt!("left-multiplication", Ref(GROUPOID)),
            opt!("groupoid", Ref(GROUPOID)),
            opt!("base", Ref(DIRAC)),
            opt!("s", Ref(MAP)),
            opt!("t", Ref(MAP)),
            opt!("action", Ref(&[Kind::Action])),
            opt!("gauge", Ref(&[Kind::GaugePair])),
            opt!("division", Ref(&[Kind::Division])),
        ],
        Kind::Bibundle => &[
            opt!("unit", Ref(GROUPOID)),
            opt!("left", Ref(BUNDLE)),
            opt!("right", Ref(GROUPOID)),
            opt!("action", Ref(&[Kind::Action])),
            opt!("division", Ref(&[Kind::Division])),
        ],
        Kind::BundleMorphism => &[
            req!("map", Ref(MAP)),
            req!("base", Ref(MORPHISM)),
            opt!("gauge", Ref(FORM)),
            req!("source", Ref(BUNDLE)),
            req!("target", Ref(BUNDLE)),
        ],
        Kind::Quotient => &[req!("map", Ref(MAP)), req!("section", Ref(MAP))],
        Kind::Algebroid => &[
            opt!("on", Ref(PATCHLIKE)),
            opt!("kind", Word(&["tangent"])),
            opt!("poisson", Matrix),
            opt!("dirac", Ref(DIRAC)),
            opt!("anchor", Refs(&[Kind::VectorField])),
            opt!("brackets", Brackets),
        ],
        Kind::ImForm => &[req!("forms", Refs(FORM))],
        Kind::DLieAlgebroid => &[
            opt!("from-dirac", Ref(DIRAC)),
            opt!("algebroid", Ref(&[Kind::Algebroid])),
            opt!("base", Ref(DIRAC)),
            opt!("imform", Ref(&[Kind::ImForm])),
        ],
        Kind::AlgebroidMorphism => &[
            opt!("identity", Ref(ALGEBROIDLIKE)),
            opt!("map", Ref(MAP)),
            opt!("matrix", Matrix),
        ],
        Kind::Attestation => &[
            opt!("orbit-spaces", Bool),
            opt!("monodromy", Bool),
            opt!("fundamental-groups", Bool),
        ],
        Kind::Check => &[],
    }
}

/// Check verbs, one per checkable operation, with their arguments.
pub const VERBS: &[&str] = &[
    "check-dirac",
    "check-morphism",
    "check-diagram",
    "fiber-product",
    "universal-arrow",
    "check-groupoid",
    "check-dlie",
    "derive-gauge-parts",
    "check-gauge-axioms",
    "target-align",
    "check-dlie-morphism",
    "check-bundle",
    "pullback-bundle",
    "check-bundle-morphism",
    "glue",
    "bundle-from-morphism",
    "tensor",
    "check-nondegenerate",
    "check-algebroid",
    "check-im-form",
    "check-dlie-algebroid",
    "derive-im-form",
    "check-algebroid-morphism",
    "pullback-algebroid",
    "check-weak-equivalence",
];

pub fn verb_params(verb: &str) -> Option<&'static [Param]> {
    use Shape::*;
    Some(match verb {
        "check-dirac" => &[req!("dirac", Ref(DIRAC))],
        "check-morphism" => &[req!("morphism", Ref(MORPHISM))],
        "check-diagram" => &[req!("triangles", Triangles)],
        "fiber-product" => &[
            req!("f", Ref(MORPHISM)),
            req!("g", Ref(MORPHISM)),
            req!("chart", Ref(CHART)),
        ],
        "universal-arrow" => &[
            req!("f", Ref(MORPHISM)),
            req!("g", Ref(MORPHISM)),
            req!("chart", Ref(CHART)),
            req!("h1", Ref(MORPHISM)),
            req!("h2", Ref(MORPHISM)),
            req!("k", Ref(MAP)),
        ],
        "check-groupoid" | "check-dlie" | "derive-gauge-parts" | "check-gauge-axioms"
        | "target-align" => &[req!("groupoid", Ref(GROUPOID))],
        "check-dlie-morphism" => &[req!("morphism", Ref(&[Kind::DLieMorphism]))],
        "check-bundle" => &[req!("bundle", Ref(BUNDLELIKE))],
        "pullback-bundle" => &[
            req!("bundle", Ref(BUNDLE)),
            req!("along", Ref(MORPHISM)),
            opt!("chart", Ref(CHART)),
        ],
        "check-bundle-morphism" => &[req!("morphism", Ref(&[Kind::BundleMorphism]))],
        "glue" => &[
            req!("total", Ref(PATCHLIKE)),
            req!("pieces", Pieces),
            opt!("transitions", Transitions),
            opt!("expect", Ref(FORM)),
        ],
        "bundle-from-morphism" => &[
            req!("morphism", Ref(&[Kind::DLieMorphism])),
            opt!("chart", Ref(CHART)),
            opt!("expect", Ref(BIBUNDLE)),
        ],
        "tensor" => &[
            req!("left", Ref(BIBUNDLE)),
            req!("right", Ref(BIBUNDLE)),
            opt!("chart", Ref(CHART)),
            opt!("quotient", Ref(&[Kind::Quotient])),
            opt!("right-unit", Bool),
            opt!("expect", Ref(FORM)),
        ],
        "check-nondegenerate" => &[req!("bibundle", Ref(BIBUNDLE))],
        "check-algebroid" => &[req!("algebroid", Ref(ALGEBROIDLIKE))],
        "check-im-form" | "check-dlie-algebroid" => &[req!("algebroid", Ref(DLIE_ALGEBROID))],
        "derive-im-form" => &[
            req!("groupoid", Ref(GROUPOID)),
            opt!("frame", Refs(&[Kind::VectorField])),
            opt!("expect", Refs(FORM)),
        ],
        "check-algebroid-morphism" => &[
            req!("morphism", Ref(&[Kind::AlgebroidMorphism])),
            req!("base", Ref(MORPHISM)),
            req!("source", Ref(DLIE_ALGEBROID)),
            req!("target", Ref(DLIE_ALGEBROID)),
        ],
        "pullback-algebroid" => &[req!("map", Ref(MAP)), req!("algebroid", Ref(ALGEBROIDLIKE))],
        "check-weak-equivalence" => &[
            req!("morphism", Ref(&[Kind::AlgebroidMorphism])),
            req!("source", Ref(ALGEBROIDLIKE)),
            req!("target", Ref(ALGEBROIDLIKE)),
            opt!("attestation", Ref(&[Kind::Attestation])),
        ],
        _ => return None,
    })
}

/// One declaration: `(kind name :key value ...)`, or for checks
/// `(check id verb :key value ...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub kind: Kind,
    pub name: String,
    pub verb: Option<String>,
    pub options: Vec<(String, Node)>,
    pub pos: Pos,
}

impl Decl {
    pub fn get(&self, key: &str) -> Option<&Node> {
        self.options.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}", self.kind, self.name)?;
        if let Some(v) = &self.verb {
            write!(f, " {v}")?;
        }
        for (k, v) in &self.options {
            write!(f, " :{k} {v}")?;
        }
        f.write_str(")")
    }
}

/// A parsed scene: declarations in source order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SceneFile {
    pub decls: Vec<Decl>,
}

impl SceneFile {
    /// Canonical text: one declaration per line.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for d in &self.decls {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        out
    }

    pub fn checks(&self) -> impl Iterator<Item = &Decl> {
        self.decls.iter().filter(|d| d.kind == Kind::Check)
    }
}

fn syntax(pos: Pos, expected: impl Into<String>) -> SceneError {
    SceneError::Syntax {
        line: pos.line,
        col: pos.col,
        expected: expected.into(),
    }
}

struct Validator {
    declared: BTreeMap<Kind, BTreeSet<String>>,
}

impl Validator {
    fn reference(&self, node: &Node, kinds: &[Kind]) -> Result<(), SceneError> {
        let name = node.symbol().ok_or_else(|| syntax(node.pos, "name"))?;
        if kinds
            .iter()
            .any(|k| self.declared.get(k).is_some_and(|s| s.contains(name)))
        {
            return Ok(());
        }
        Err(SceneError::UnknownReference {
            line: node.pos.line,
            col: node.pos.col,
            name: name.to_string(),
        })
    }

    fn shape(&self, node: &Node, shape: Shape) -> Result<(), SceneError> {
        let list = |what: &str| node.list().ok_or_else(|| syntax(node.pos, what.to_string()));
        match shape {
            Shape::Ref(kinds) => self.reference(node, kinds),
            Shape::Refs(kinds) => {
                for n in list("list of names")? {
                    self.reference(n, kinds)?;
                }
                Ok(())
            }
            Shape::Expr => Ok(()),
            Shape::Exprs => list("list of expressions").map(|_| ()),
            Shape::Matrix => {
                for row in list("list of rows")? {
                    row.list().ok_or_else(|| syntax(row.pos, "row of expressions"))?;
                }
                Ok(())
            }
            Shape::Points => {
                for p in list("list of points")? {
                    for v in p.list().ok_or_else(|| syntax(p.pos, "point"))? {
                        v.number().ok_or_else(|| syntax(v.pos, "number"))?;
                    }
                }
                Ok(())
            }
            Shape::Coords => {
                let mut seen = BTreeSet::new();
                for c in list("list of coordinate names")? {
                    let s = c.symbol().ok_or_else(|| syntax(c.pos, "coordinate name"))?;
                    if !seen.insert(s) {
                        return Err(SceneError::DuplicateName {
                            line: c.pos.line,
                            col: c.pos.col,
                            name: s.to_string(),
                        });
                    }
                }
                Ok(())
            }
            Shape::Bool => match node.symbol() {
                Some("true" | "false") => Ok(()),
                _ => Err(syntax(node.pos, "`true` or `false`")),
            },
            Shape::Word(words) => match node.symbol() {
                Some(w) if words.contains(&w) => Ok(()),
                _ => Err(syntax(node.pos, one_of(words.iter().copied()))),
            },
            Shape::Brackets => {
                for e in list("list of brackets")? {
                    match e.list() {
                        Some([i, j, c]) if i.natural().is_some() && j.natural().is_some() => {
                            c.list().ok_or_else(|| syntax(c.pos, "list of coefficients"))?;
                        }
                        _ => return Err(syntax(e.pos, "(i j (c0 c1 ...))")),
                    }
                }
                Ok(())
            }
            Shape::Pieces => {
                for e in list("list of pieces")? {
                    match e.list() {
                        Some([phi, form]) => {
                            self.reference(phi, MAP)?;
                            self.reference(form, FORM)?;
                        }
                        _ => return Err(syntax(e.pos, "(map form)")),
                    }
                }
                Ok(())
            }
            Shape::Transitions => {
                for e in list("list of transitions")? {
                    match e.list() {
                        Some([a, b, m]) if a.natural().is_some() && b.natural().is_some() => {
                            self.reference(m, MAP)?;
                        }
                        _ => return Err(syntax(e.pos, "(a b map)")),
                    }
                }
                Ok(())
            }
            Shape::Triangles => {
                for e in list("list of triangles")? {
                    match e.list() {
                        Some(items @ [_, _, _]) => {
                            for m in items {
                                self.reference(m, MORPHISM)?;
                            }
                        }
                        _ => return Err(syntax(e.pos, "(first second composite)")),
                    }
                }
                Ok(())
            }
        }
    }

    fn decl(&mut self, node: &Node) -> Result<Decl, SceneError> {
        let items = node
            .list()
            .ok_or_else(|| syntax(node.pos, "`(` starting a declaration"))?;
        let head = items
            .first()
            .ok_or_else(|| syntax(node.pos, "declaration kind"))?;
        let kind = head
            .symbol()
            .and_then(Kind::parse)
            .ok_or_else(|| syntax(head.pos, one_of(KINDS.iter().map(|k| k.keyword()))))?;
        let name_node = items
            .get(1)
            .ok_or_else(|| syntax(node.pos, "name after the declaration kind"))?;
        let name = name_node
            .symbol()
            .ok_or_else(|| syntax(name_node.pos, "name"))?
            .to_string();
        let mut rest = &items[2..];
        let (verb, params) = if kind == Kind::Check {
            let v = rest.first().ok_or_else(|| syntax(node.pos, "check verb"))?;
            let verb = v.symbol().unwrap_or_default();
            let params = verb_params(verb).ok_or_else(|| syntax(v.pos, one_of(VERBS.iter().copied())))?;
            rest = &rest[1..];
            (Some(verb.to_string()), params)
        } else {
            (None, params(kind))
        };
        let mut options: Vec<(String, Node)> = Vec::new();
        let mut k = 0;
        while k < rest.len() {
            let key_node = &rest[k];
            let key = key_node.keyword().ok_or_else(|| syntax(key_node.pos, "keyword"))?;
            let param = params.iter().find(|p| p.key == key).ok_or_else(|| {
                syntax(key_node.pos, one_of(params.iter().map(|p| p.key).map(|k| format!(":{k}"))))
            })?;
            if options.iter().any(|(o, _)| o == key) {
                return Err(syntax(key_node.pos, format!("a keyword other than the repeated `:{key}`")));
            }
            let value = rest
                .get(k + 1)
                .ok_or_else(|| syntax(key_node.pos, format!("value after `:{key}`")))?;
            self.shape(value, param.shape)?;
            options.push((key.to_string(), value.clone()));
            k += 2;
        }
        if let Some(p) = params
            .iter()
            .find(|p| p.required && !options.iter().any(|(o, _)| o == p.key))
        {
            return Err(syntax(node.pos, format!("`:{}`", p.key)));
        }
        let names = self.declared.entry(kind).or_default();
        if !names.insert(name.clone()) {
            return Err(SceneError::DuplicateName {
                line: name_node.pos.line,
                col: name_node.pos.col,
                name,
            });
        }
        Ok(Decl {
            kind,
            name,
            verb,
            options,
            pos: node.pos,
        })
    }
}

fn one_of<S: AsRef<str>>(items: impl Iterator<Item = S>) -> String {
    let all: Vec<String> = items.map(|s| format!("`{}`", s.as_ref())).collect();
    format!("one of {}", all.join(", "))
}

/// Parses and validates a scene: grammar, unique names per kind and
/// references to earlier declarations only.
pub fn parse_scene(text: &str) -> Result<SceneFile, SceneError> {
    let mut v = Validator {
        declared: BTreeMap::new(),
    };
    let decls = read_all(text)?
        .iter()
        .map(|n| v.decl(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SceneFile { decls })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_declaration() {
        let s = parse_scene("(patch M :coords (x y) :samples ((0 0) (1 2)))").unwrap();
        assert_eq!(s.decls.len(), 1);
        assert_eq!(s.decls[0].kind, Kind::Patch);
        assert_eq!(s.decls[0].get("samples").unwrap().list().unwrap().len(), 2);
    }

    #[test]
    fn duplicate_coordinate() {
        let e = parse_scene("(patch M :coords (x x))").unwrap_err();
        match e {
            SceneError::DuplicateName { line, col, name } => {
                assert_eq!((line, col, name.as_str()), (1, 21, "x"));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn names_are_unique_per_kind() {
        let e = parse_scene("(patch M :coords (x))\n(patch M :coords (y))").unwrap_err();
        assert!(matches!(e, SceneError::DuplicateName { line: 2, col: 8, .. }));
        // The same name under two kinds is fine.
        parse_scene("(patch M :coords (x))\n(form M :on M :expr dx)").unwrap();
    }

    #[test]
    fn forward_references_rejected() {
        let e = parse_scene("(form w :on M :expr dx)\n(patch M :coords (x))").unwrap_err();
        assert!(matches!(e, SceneError::UnknownReference { line: 1, col: 13, .. }));
        let e = parse_scene("(check c check-dirac :dirac L)").unwrap_err();
        assert!(matches!(e, SceneError::UnknownReference { .. }));
    }

    #[test]
    fn grammar_errors() {
        for (text, at) in [
            ("(frob M)", (1, 2)),
            ("(patch M :coords (x) :colour red)", (1, 22)),
            ("(patch M)", (1, 1)),
            ("(patch M :coords (x) :coords (y))", (1, 22)),
            ("(patch M :coords (x) :samples (1))", (1, 32)),
            ("(check c check-everything)", (1, 10)),
            ("(patch 3 :coords (x))", (1, 8)),
        ] {
            let e = parse_scene(text).unwrap_err();
            assert!(matches!(e, SceneError::Syntax { .. }), "{text}: {e}");
            assert_eq!((e.line(), e.col()), at, "{text}: {e}");
        }
    }

    #[test]
    fn every_verb_has_parameters() {
        for v in VERBS {
            assert!(verb_params(v).is_some(), "{v}");
        }
        assert_eq!(VERBS.len(), 25);
    }

    #[test]
    fn printing_round_trips() {
        let text = "; scene\n(patch M :coords (x y) :samples ((0.5 0) (1 -2/3)))\n(form w :on M :expr (+ (* 1 (^ dx dy))))\n(check c check-dirac :dirac L)";
        let err = parse_scene(text).unwrap_err();
        assert!(matches!(err, SceneError::UnknownReference { .. }));
        let text = &text[..text.rfind('\n').unwrap()];
        let s = parse_scene(text).unwrap();
        let printed = s.print();
        assert_eq!(
            printed,
            "(patch M :coords (x y) :samples ((1/2 0) (1 -2/3)))\n(form w :on M :expr (+ (* 1 (^ dx dy))))\n"
        );
        assert_eq!(parse_scene(&printed).unwrap(), s);
    }
}
