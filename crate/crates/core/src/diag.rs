//! Source positions and compiler diagnostics.

use std::fmt;

use thiserror::Error;

/// Position of a character in the source: 1-based line, 0-based column
/// counted in Unicode scalar values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Pos { line, column }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Scan,
    Parse,
    Model,
    Alignment,
    Emit,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Scan => "scan",
            Stage::Parse => "parse",
            Stage::Model => "model",
            Stage::Alignment => "alignment",
            Stage::Emit => "emit",
        })
    }
}

/// A compile error with an optional source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Error {
    pub stage: Stage,
    pub message: String,
    pub pos: Option<Pos>,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(
                f,
                "{} error at line {}, column {}: {}",
                self.stage,
                p.line,
                p.column + 1,
                self.message
            ),
            None => write!(f, "{} error: {}", self.stage, self.message),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn new(stage: Stage, message: impl Into<String>, pos: Option<Pos>) -> Self {
        Error {
            stage,
            message: message.into(),
            pos,
        }
    }

    pub fn scan(message: impl Into<String>, pos: Pos) -> Self {
        Self::new(Stage::Scan, message, Some(pos))
    }

    pub fn parse(message: impl Into<String>, pos: Pos) -> Self {
        Self::new(Stage::Parse, message, Some(pos))
    }

    pub fn model(message: impl Into<String>, pos: Option<Pos>) -> Self {
        Self::new(Stage::Model, message, pos)
    }

    pub fn alignment(message: impl Into<String>, pos: Pos) -> Self {
        Self::new(Stage::Alignment, message, Some(pos))
    }

    pub fn emit(message: impl Into<String>) -> Self {
        Self::new(Stage::Emit, message, None)
    }

    /// Renders the error rustc-style, with the offending source line and a
    /// caret under the column. Columns are shown 1-based.
    pub fn render(&self, path: &str, source: &str) -> String {
        render(path, source, "error", &self.to_line(), self.pos)
    }

    fn to_line(&self) -> String {
        format!("{}: {}", self.stage, self.message)
    }
}

/// Non-fatal message, e.g. an unrecognized parameter assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub message: String,
    pub pos: Pos,
}

impl Warning {
    pub fn render(&self, path: &str, source: &str) -> String {
        render(path, source, "warning", &self.message, Some(self.pos))
    }
}

fn render(path: &str, source: &str, level: &str, message: &str, pos: Option<Pos>) -> String {
    let Some(pos) = pos else {
        return format!("{level}: {message}\n  --> {path}\n");
    };
    let mut out = format!(
        "{level}: {message}\n  --> {path}:{}:{}\n",
        pos.line,
        pos.column + 1
    );
    if let Some(text) = source.lines().nth(pos.line.saturating_sub(1)) {
        let text = text.strip_suffix('\r').unwrap_or(text);
        let gutter = pos.line.to_string().len();
        let pad = " ".repeat(gutter);
        // Tabs are a scan error, so each scalar is one column wide.
        let caret_pad: String = text
            .chars()
            .take(pos.column)
            .map(|c| if c == '\t' { '\t' } else { ' ' })
            .collect();
        out.push_str(&format!(
            "{pad} |\n{} | {text}\n{pad} | {caret_pad}^\n",
            pos.line
        ));
    }
    out
}
