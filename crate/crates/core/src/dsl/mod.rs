//! The `.qmachine` language: a machine is declared by its basis rules, an
//! extension clause and a requirement, then compiled and checked.
//!
//! ```text
//! machine clone {
//!     on |0> -> |0>|0>;
//!     on |1> -> |1>|1>;
//!     extend linear;
//!     require universal on bloch target clone;
//! }
//! ```

pub mod ast;
mod compile;
pub mod lexer;
pub mod parser;
mod printer;

use std::fmt;

pub use compile::{check_compiled, compile, CheckOptions, CompiledMachine, MachineReport, Requirement};
pub use printer::pretty_print;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(line: usize, col: usize) -> Self {
        Self { line, col }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub text: String,
    /// File path or `<stdin>`.
    pub origin: String,
}

impl SourceUnit {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            origin: origin.into(),
        }
    }

    /// Position just past the last character.
    pub fn end_pos(&self) -> Pos {
        let mut pos = Pos::new(1, 1);
        for ch in self.text.chars() {
            if ch == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
        }
        pos
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn error(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            pos,
            message: message.into(),
        }
    }

    pub fn warning(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            pos,
            message: message.into(),
        }
    }

    pub fn line(&self) -> usize {
        self.pos.line
    }

    pub fn column(&self) -> usize {
        self.pos.col
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `origin:line:col: severity: message`
    pub fn render(&self, origin: &str) -> String {
        format!(
            "{origin}:{}:{}: {}: {}",
            self.pos.line, self.pos.col, self.severity, self.message
        )
    }
}

/// Tokenizes and parses. Diagnostics from both stages are merged and sorted
/// by position.
pub fn parse_source(src: &SourceUnit) -> parser::Parsed {
    let lexed = lexer::tokenize(src);
    let mut parsed = parser::parse(&lexed.tokens, src.end_pos());
    let mut diagnostics = lexed.diagnostics;
    diagnostics.append(&mut parsed.diagnostics);
    diagnostics.sort_by_key(|d| d.pos);
    parsed.diagnostics = diagnostics;
    parsed
}

/// Parses and compiles. Fails with every diagnostic collected if any of them
/// is an error.
pub fn compile_source(src: &SourceUnit) -> Result<Vec<CompiledMachine>, Vec<Diagnostic>> {
    let parsed = parse_source(src);
    if parsed.diagnostics.iter().any(Diagnostic::is_error) {
        return Err(parsed.diagnostics);
    }
    let (machines, mut diagnostics) = compile(&parsed.ast);
    diagnostics.sort_by_key(|d| d.pos);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(diagnostics);
    }
    Ok(machines)
}

/// Parses, compiles and checks every machine in `src`.
pub fn check_source(src: &SourceUnit, opts: &CheckOptions) -> Result<Vec<MachineReport>, Vec<Diagnostic>> {
    let machines = compile_source(src)?;
    machines
        .iter()
        .map(|m| {
            check_compiled(m, opts).map_err(|e| vec![Diagnostic::error(m.pos, format!("check failed: {e}"))])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLONE: &str = "machine clone {\n    on |0> -> |0>|0>;\n    on |1> -> |1>|1>;\n    extend linear;\n    require universal on bloch target clone;\n}\n";

    fn diags(text: &str) -> Vec<Diagnostic> {
        match compile_source(&SourceUnit::new(text, "t.qmachine")) {
            Ok(_) => vec![],
            Err(d) => d,
        }
    }

    #[test]
    fn cloning_text_parses() {
        let parsed = parse_source(&SourceUnit::new(CLONE, "t"));
        assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
        assert_eq!(parsed.ast.machines.len(), 1);
        assert_eq!(parsed.ast.machines[0].statements.len(), 4);
    }

    #[test]
    fn missing_extension() {
        let d = diags("machine m { on |0> -> |00>; on |1> -> |11>; require basis; }");
        assert!(d.iter().any(|d| d.message == "machine must declare extension"), "{d:?}");
    }

    #[test]
    fn duplicate_rule() {
        let d = diags("machine m { on |0> -> |00>; on |0> -> |11>; extend linear; require basis; }");
        assert!(d.iter().any(|d| d.message.starts_with("duplicate basis rule")), "{d:?}");
    }

    #[test]
    fn recovery_reports_every_bad_statement() {
        let d = diags("machine m {\n on |0> -> ;\n on |1> |11>;\n extend linear;\n require basis;\n}");
        let lines: Vec<usize> = d.iter().map(|d| d.line()).collect();
        assert_eq!(lines, vec![2, 3], "{d:?}");
    }

    #[test]
    fn render_format() {
        let d = Diagnostic::error(Pos::new(3, 7), "boom");
        assert_eq!(d.render("x.qmachine"), "x.qmachine:3:7: error: boom");
    }

    #[test]
    fn end_pos_counts_characters() {
        assert_eq!(SourceUnit::new("ab\nc", "t").end_pos(), Pos::new(2, 2));
    }
}
