//! Scene files: an s-expression language declaring patches, maps, forms,
//! Dirac structures, groupoids, bundles and algebroids, followed by `check`
//! declarations that run the verifiers.
//!
//! ```text
//! (patch M :coords (x y) :samples ((0 0) (1 2)))
//! (form w :on M :expr (^ dx dy))
//! (dirac L :two-form w)
//! (check c check-dirac :dirac L)
//! ```

mod elaborate;
mod expr;
mod run;
mod schema;
mod sexp;

pub use run::run_checks;
pub use schema::{params, parse_scene, verb_params, Decl, Kind, Param, SceneFile, Shape, KINDS, VERBS};
pub use sexp::{Atom, Node, NodeKind, Pos};

use crate::report::{CheckReport, Format};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SceneError {
    #[error("{line}:{col}: syntax error: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("{line}:{col}: duplicate name `{name}`")]
    DuplicateName { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unknown reference `{name}`")]
    UnknownReference { line: usize, col: usize, name: String },
}

impl SceneError {
    pub fn line(&self) -> usize {
        match self {
            SceneError::Syntax { line, .. }
            | SceneError::DuplicateName { line, .. }
            | SceneError::UnknownReference { line, .. } => *line,
        }
    }

    pub fn col(&self) -> usize {
        match self {
            SceneError::Syntax { col, .. }
            | SceneError::DuplicateName { col, .. }
            | SceneError::UnknownReference { col, .. } => *col,
        }
    }
}

pub fn emit_report(r: &CheckReport, format: Format, color: bool) -> Vec<u8> {
    r.emit(format, color).into_bytes()
}
