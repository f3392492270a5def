//! Check reports: a tree of named checks with statuses, residuals and
//! witnesses, rendered as JSON or as an indented text tree.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Attested,
    Unattested,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Attested => "attested",
            Status::Unattested => "unattested",
            Status::Skipped => "skipped",
        }
    }

    fn marker(self) -> &'static str {
        match self {
            Status::Pass => "✔",
            Status::Fail => "✘",
            _ => "◌",
        }
    }

    fn color(self) -> &'static str {
        match self {
            Status::Pass => "\x1b[32m",
            Status::Fail => "\x1b[31m",
            Status::Attested => "\x1b[36m",
            Status::Unattested => "\x1b[33m",
            Status::Skipped => "\x1b[90m",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub title: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub children: Vec<CheckReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl CheckReport {
    pub fn leaf(id: impl Into<String>, title: impl Into<String>, status: Status) -> Self {
        CheckReport {
            id: id.into(),
            title: title.into(),
            status,
            residual: None,
            witness: None,
            notes: None,
            children: Vec::new(),
        }
    }

    pub fn pass(id: impl Into<String>, title: impl Into<String>) -> Self {
        CheckReport::leaf(id, title, Status::Pass)
    }

    pub fn fail(id: impl Into<String>, title: impl Into<String>) -> Self {
        CheckReport::leaf(id, title, Status::Fail)
    }

    pub fn skipped(id: impl Into<String>, title: impl Into<String>) -> Self {
        CheckReport::leaf(id, title, Status::Skipped)
    }

    /// Pass or fail by a boolean.
    pub fn check(id: impl Into<String>, title: impl Into<String>, ok: bool) -> Self {
        CheckReport::leaf(id, title, if ok { Status::Pass } else { Status::Fail })
    }

    /// A parent whose status is derived from its children.
    pub fn node(
        id: impl Into<String>,
        title: impl Into<String>,
        children: Vec<CheckReport>,
    ) -> Self {
        let mut r = CheckReport::pass(id, title);
        r.children = children;
        r.status = aggregate(&r.children);
        r
    }

    /// The root of a scene run.
    pub fn root(children: Vec<CheckReport>) -> Self {
        CheckReport::node("root", "scene", children)
    }

    pub fn with_residual(mut self, r: impl Into<String>) -> Self {
        self.residual = Some(r.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.add_note(n);
        self
    }

    pub fn add_note(&mut self, n: impl Into<String>) {
        let n = n.into();
        self.notes = Some(match self.notes.take() {
            Some(old) => format!("{old}; {n}"),
            None => n,
        });
    }

    pub fn push(&mut self, child: CheckReport) {
        self.children.push(child);
        self.status = aggregate(&self.children);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Depth-first search for an entry by id.
    pub fn find(&self, id: &str) -> Option<&CheckReport> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }

    /// First descendant (or self) whose id ends with `suffix`.
    pub fn find_suffix(&self, suffix: &str) -> Option<&CheckReport> {
        if self.id.ends_with(suffix) {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find_suffix(suffix))
    }

    /// Keeps the entries whose id starts with `prefix`, with their subtrees,
    /// and the ancestors leading to them. The root is always kept.
    pub fn filtered(&self, prefix: &str) -> CheckReport {
        let mut r = self.clone();
        r.children = self.children.iter().filter_map(|c| c.prune(prefix)).collect();
        r.status = aggregate(&r.children);
        r
    }

    fn prune(&self, prefix: &str) -> Option<CheckReport> {
        if self.id.starts_with(prefix) {
            return Some(self.clone());
        }
        let kept: Vec<CheckReport> = self.children.iter().filter_map(|c| c.prune(prefix)).collect();
        if kept.is_empty() {
            return None;
        }
        let mut r = self.clone();
        r.children = kept;
        r.status = aggregate(&r.children);
        Some(r)
    }

    /// Every leaf entry, in order.
    pub fn leaves(&self) -> Vec<&CheckReport> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }

    /// Process exit code for this report as a root.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            Status::Unattested => 2,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self, color: bool) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0, color);
        out
    }

    pub fn emit(&self, format: Format, color: bool) -> String {
        match format {
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
            Format::Text => self.to_text(color),
        }
    }

    fn write_text(&self, out: &mut String, depth: usize, color: bool) {
        let pad = "  ".repeat(depth);
        let marker = if color {
            format!("{}{}\x1b[0m", self.status.color(), self.status.marker())
        } else {
            self.status.marker().to_string()
        };
        let _ = writeln!(
            out,
            "{pad}{marker} {} [{}] {}",
            self.id,
            self.status.as_str(),
            self.title
        );
        if let Some(r) = &self.residual {
            let _ = writeln!(out, "{pad}    residual: {r}");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "{pad}    witness: {w}");
        }
        if let Some(n) = &self.notes {
            let _ = writeln!(out, "{pad}    notes: {n}");
        }
        for c in &self.children {
            c.write_text(out, depth + 1, color);
        }
    }
}

fn aggregate(children: &[CheckReport]) -> Status {
    if children.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if children.iter().any(|c| c.status == Status::Unattested) {
        Status::Unattested
    } else {
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_root_json() {
        let r = CheckReport::root(vec![]);
        let compact = serde_json::to_string(&r).unwrap();
        assert_eq!(
            compact,
            r#"{"id":"root","title":"scene","status":"pass","children":[]}"#
        );
    }

    #[test]
    fn aggregation() {
        let r = CheckReport::root(vec![CheckReport::pass("a", "a"), CheckReport::fail("b", "b")]);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
        let r = CheckReport::root(vec![CheckReport::leaf("a", "a", Status::Attested)]);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.children[0].status, Status::Attested);
        let r = CheckReport::root(vec![
            CheckReport::leaf("a", "a", Status::Unattested),
            CheckReport::skipped("b", "b"),
        ]);
        assert_eq!(r.status, Status::Unattested);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn key_order() {
        let r = CheckReport::fail("x", "t")
            .with_residual("y")
            .with_witness("(x=0)")
            .with_note("n");
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"id":"x","title":"t","status":"fail","residual":"y","witness":"(x=0)","notes":"n","children":[]}"#
        );
    }

    #[test]
    fn text_markers() {
        let r = CheckReport::root(vec![CheckReport::pass("a", "first"), CheckReport::skipped("b", "second")]);
        let t = r.to_text(false);
        assert!(t.starts_with("✔ root [pass] scene\n"));
        assert!(t.contains("  ◌ b [skipped] second"));
    }

    #[test]
    fn filtering() {
        let r = CheckReport::root(vec![
            CheckReport::node("a", "a", vec![CheckReport::pass("a/x", "x"), CheckReport::fail("a/y", "y")]),
            CheckReport::fail("b", "b"),
        ]);
        let f = r.filtered("a/x");
        assert_eq!(f.status, Status::Pass);
        assert_eq!(f.children.len(), 1);
        assert_eq!(f.children[0].children.len(), 1);
        assert_eq!(r.filtered("a").children[0].children.len(), 2);
        assert!(r.filtered("zzz").children.is_empty());
    }
}
