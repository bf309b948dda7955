//! Parameter assignments and grip tables.
//!
//! A grip table lists, row by row, the symbols used for each string; the
//! column index within a row is the fret. A `PARS` selects its table with
//! `bünde = <name>`.

use std::collections::{BTreeMap, HashMap};

use crate::diag::{Error, Pos, Result, Warning};
use crate::scanner::{is_identifier, tokenize_text, SourceLine, Token};

/// Largest string or fret index the XML model can carry.
pub const MAX_INDEX: usize = 12;

pub const DURATIO_MANET: &str = "duratioManet";
pub const DURATIO_CADENS: &str = "duratioCadens";
pub const BUENDE: &str = "bünde";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parameters {
    /// Permits the carry token `-` in time lines.
    pub duratio_manet: bool,
    /// Drops duration symbols to just above the topmost grip of their column.
    pub duratio_cadens: bool,
    /// Unrecognized scalar assignments, kept verbatim.
    pub extra: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GripTable {
    pub name: String,
    pub rows: Vec<Vec<String>>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assignment {
    Scalar {
        name: String,
        value: String,
        pos: Pos,
    },
    Table(GripTable),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grip {
    pub string: u8,
    pub fret: u8,
}

/// Symbol lookup built from one [`GripTable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMap {
    table: String,
    entries: HashMap<String, Grip>,
}

impl SymbolMap {
    pub fn table_name(&self) -> &str {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, symbol: &str) -> Option<Grip> {
        self.entries.get(symbol).copied()
    }

    /// Looks up a grip symbol written at `pos`.
    pub fn lookup(&self, symbol: &str, pos: Pos) -> Result<Grip> {
        self.get(symbol).ok_or_else(|| {
            Error::model(
                format!(
                    "unknown grip symbol '{symbol}' (not in table '{}')",
                    self.table
                ),
                Some(pos),
            )
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Grip)> {
        self.entries.iter().map(|(s, g)| (s.as_str(), *g))
    }
}

pub fn build_symbol_map(table: &GripTable) -> Result<SymbolMap> {
    if table.rows.len() > MAX_INDEX + 1 {
        return Err(Error::model(
            format!(
                "table '{}' has {} rows; at most {} strings are representable",
                table.name,
                table.rows.len(),
                MAX_INDEX + 1
            ),
            Some(table.pos),
        ));
    }
    let mut entries = HashMap::new();
    for (string, row) in table.rows.iter().enumerate() {
        if row.len() > MAX_INDEX + 1 {
            return Err(Error::model(
                format!(
                    "row {string} of table '{}' has {} symbols; at most {} frets are representable",
                    table.name,
                    row.len(),
                    MAX_INDEX + 1
                ),
                Some(table.pos),
            ));
        }
        for (fret, symbol) in row.iter().enumerate() {
            let grip = Grip {
                string: string as u8,
                fret: fret as u8,
            };
            if entries.insert(symbol.clone(), grip).is_some() {
                return Err(Error::model(
                    format!("symbol '{symbol}' occurs twice in table '{}'", table.name),
                    Some(table.pos),
                ));
            }
        }
    }
    Ok(SymbolMap {
        table: table.name.clone(),
        entries,
    })
}

/// Splits whitespace tokens further at `(`, `)` and `=`.
fn assignment_tokens(lines: &[&SourceLine]) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for line in lines {
        for tok in tokenize_text(&line.text, line.number, false)? {
            let mut start = tok.column;
            let mut buf = String::new();
            for (i, c) in tok.text.chars().enumerate() {
                if matches!(c, '(' | ')' | '=') {
                    if !buf.is_empty() {
                        out.push(Token {
                            text: std::mem::take(&mut buf),
                            column: start,
                            line: tok.line,
                        });
                    }
                    out.push(Token {
                        text: c.to_string(),
                        column: tok.column + i,
                        line: tok.line,
                    });
                    start = tok.column + i + 1;
                } else {
                    if buf.is_empty() {
                        start = tok.column + i;
                    }
                    buf.push(c);
                }
            }
            if !buf.is_empty() {
                out.push(Token {
                    text: buf,
                    column: start,
                    line: tok.line,
                });
            }
        }
    }
    Ok(out)
}

/// Parses one assignment whose head is `line`; `followers` are its
/// continuation lines (a table spanning several lines).
pub fn parse_assignment(line: &SourceLine, followers: &[SourceLine]) -> Result<Assignment> {
    let all: Vec<&SourceLine> = std::iter::once(line).chain(followers).collect();
    let tokens = assignment_tokens(&all)?;
    let mut it = tokens.into_iter().peekable();

    let name = it
        .next()
        .ok_or_else(|| Error::parse("empty assignment", Pos::new(line.number, 0)))?;
    if !is_identifier(&name.text) {
        return Err(Error::parse(
            format!("'{}' is not a valid parameter name", name.text),
            name.pos(),
        ));
    }
    match it.next() {
        Some(t) if t.text == "=" => {}
        Some(t) => {
            return Err(Error::parse(
                format!("expected '=' but found '{}'", t.text),
                t.pos(),
            ))
        }
        None => return Err(Error::parse("expected '=' after the name", name.pos())),
    }
    let first = it
        .next()
        .ok_or_else(|| Error::parse(format!("missing value for '{}'", name.text), name.pos()))?;

    if first.text == ")" {
        return Err(Error::parse("unbalanced ')'", first.pos()));
    }
    if first.text != "(" {
        if let Some(extra) = it.next() {
            return Err(Error::parse(
                format!(
                    "unexpected '{}' after the value of '{}'",
                    extra.text, name.text
                ),
                extra.pos(),
            ));
        }
        return Ok(Assignment::Scalar {
            pos: name.pos(),
            name: name.text,
            value: first.text,
        });
    }

    // ( (a b c) (d e) ... )
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut seen: HashMap<String, Pos> = HashMap::new();
    let mut closed = false;
    while let Some(tok) = it.next() {
        match tok.text.as_str() {
            ")" => {
                closed = true;
                break;
            }
            "(" => {
                let mut row = Vec::new();
                loop {
                    let Some(sym) = it.next() else {
                        return Err(Error::parse("unbalanced '(' in table row", tok.pos()));
                    };
                    match sym.text.as_str() {
                        ")" => break,
                        "(" | "=" => {
                            return Err(Error::parse(
                                format!("unexpected '{}' inside a table row", sym.text),
                                sym.pos(),
                            ))
                        }
                        _ => {
                            if let Some(prev) = seen.insert(sym.text.clone(), sym.pos()) {
                                return Err(Error::parse(
                                    format!(
                                        "symbol '{}' defined twice in table '{}' (first at line {}, column {})",
                                        sym.text,
                                        name.text,
                                        prev.line,
                                        prev.column + 1
                                    ),
                                    sym.pos(),
                                ));
                            }
                            row.push(sym.text);
                        }
                    }
                }
                rows.push(row);
            }
            _ => {
                return Err(Error::parse(
                    format!("table rows must be parenthesized, found '{}'", tok.text),
                    tok.pos(),
                ))
            }
        }
    }
    if !closed {
        return Err(Error::parse("unbalanced '(' in table", first.pos()));
    }
    if let Some(extra) = it.next() {
        return Err(Error::parse(
            format!("unexpected '{}' after the table", extra.text),
            extra.pos(),
        ));
    }
    if rows.is_empty() {
        return Err(Error::parse(
            format!("table '{}' has no rows", name.text),
            first.pos(),
        ));
    }
    Ok(Assignment::Table(GripTable {
        pos: name.pos(),
        name: name.text,
        rows,
    }))
}

fn parse_flag(name: &str, value: &str, pos: Pos) -> Result<bool> {
    match value {
        "est" => Ok(true),
        "nonEst" => Ok(false),
        _ => Err(Error::parse(
            format!("'{name}' takes 'est' or 'nonEst', not '{value}'"),
            pos,
        )),
    }
}

/// Assignments in force at some point of the file. A `PARS` starts from a
/// copy of the file-level scope.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    pub params: Parameters,
    tables: BTreeMap<String, GripTable>,
    selected: Option<(String, Pos)>,
}

impl Scope {
    pub fn apply(&mut self, assignment: Assignment, warnings: &mut Vec<Warning>) -> Result<()> {
        match assignment {
            Assignment::Table(table) => {
                self.tables.insert(table.name.clone(), table);
            }
            Assignment::Scalar { name, value, pos } => match name.as_str() {
                DURATIO_MANET => self.params.duratio_manet = parse_flag(&name, &value, pos)?,
                DURATIO_CADENS => self.params.duratio_cadens = parse_flag(&name, &value, pos)?,
                BUENDE => {
                    if !self.tables.contains_key(&value) {
                        return Err(Error::model(
                            format!("'{BUENDE}' refers to undefined table '{value}'"),
                            Some(pos),
                        ));
                    }
                    self.selected = Some((value, pos));
                }
                _ => {
                    warnings.push(Warning {
                        message: format!("unrecognized parameter '{name}' kept as '{value}'"),
                        pos,
                    });
                    self.params.extra.insert(name, value);
                }
            },
        }
        Ok(())
    }

    pub fn table(&self, name: &str) -> Option<&GripTable> {
        self.tables.get(name)
    }

    /// The table chosen by the last `bünde` assignment in scope.
    pub fn selected_table(&self) -> Option<&GripTable> {
        self.selected.as_ref().and_then(|(n, _)| self.tables.get(n))
    }
}
