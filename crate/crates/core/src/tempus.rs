//! Time lines: duration symbols, dots, beams and the carry operator.
//!
//! Grammar of one token:
//!
//! ```text
//! stem  := '_'? ('I' | 'T' | 'F' | 'E') '.'? '_'?     (also `F_.` for `F._`)
//! dots  := '.' | '..' | '...'
//! carry := '-'
//! ```
//!
//! Stems are read as modern note values: `I` = 1/4 and each further class
//! halves it. A dot suffix multiplies by 3/2. Standalone dots stand for the
//! long values 1/2, 3/4 and 1/1.

use std::fmt;

use crate::diag::{Error, Pos, Result};
use crate::prelude::Parameters;
use crate::rational::Rational;
use crate::scanner::{tokenize, LineKind, SourceLine, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stem {
    I,
    T,
    F,
    E,
}

impl Stem {
    pub const ALL: [Stem; 4] = [Stem::I, Stem::T, Stem::F, Stem::E];

    pub fn from_char(c: char) -> Option<Stem> {
        match c {
            'I' => Some(Stem::I),
            'T' => Some(Stem::T),
            'F' => Some(Stem::F),
            'E' => Some(Stem::E),
            _ => None,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Stem::I => 'I',
            Stem::T => 'T',
            Stem::F => 'F',
            Stem::E => 'E',
        }
    }

    pub fn flags(self) -> u32 {
        match self {
            Stem::I => 0,
            Stem::T => 1,
            Stem::F => 2,
            Stem::E => 3,
        }
    }

    pub fn value(self) -> Rational {
        Rational::new(1, 4 << self.flags()).expect("nonzero denominator")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DurationClass {
    Stem(Stem),
    /// Standalone `.`, `..` or `...`.
    Dots,
    /// `-`: the previous duration still holds.
    Carry,
}

impl fmt::Display for DurationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DurationClass::Stem(s) => write!(f, "{}", s.letter()),
            DurationClass::Dots => f.write_str("dots"),
            DurationClass::Carry => f.write_str("carry"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationToken {
    pub source: String,
    pub class: DurationClass,
    /// 0 or 1 for stems, 1..=3 for standalone dots, 0 for carry.
    pub dots: u8,
    pub beam_begin: bool,
    pub beam_end: bool,
    pub value: Rational,
    pub column: usize,
    pub line: usize,
}

impl DurationToken {
    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }
}

fn dot_factor() -> Rational {
    Rational::new(3, 2).expect("nonzero denominator")
}

/// Value of a standalone run of `count` dots.
pub fn dots_value(count: u8) -> Option<Rational> {
    match count {
        1 => Rational::new(1, 2).ok(),
        2 => Rational::new(3, 4).ok(),
        3 => Some(Rational::ONE),
        _ => None,
    }
}

/// Parses one time-line token. `prev` is the nearest preceding non-carry
/// token of the same `PARS`, needed to resolve `-`.
pub fn parse_duration_token(
    token: &Token,
    params: &Parameters,
    prev: Option<&DurationToken>,
) -> Result<DurationToken> {
    let text = token.text.as_str();
    let pos = token.pos();
    let mk = |class, dots, beam_begin, beam_end, value| DurationToken {
        source: text.to_string(),
        class,
        dots,
        beam_begin,
        beam_end,
        value,
        column: token.column,
        line: token.line,
    };

    if text == "-" {
        if !params.duratio_manet {
            return Err(Error::parse("carry '-' requires 'duratioManet = est'", pos));
        }
        let prev = prev
            .ok_or_else(|| Error::parse("carry '-' has no preceding duration to continue", pos))?;
        return Ok(mk(DurationClass::Carry, 0, false, false, prev.value));
    }
    if text.contains('-') {
        return Err(Error::parse(
            format!("'{text}': the carry '-' stands alone and cannot take beam markers"),
            pos,
        ));
    }
    if !text.is_empty() && text.chars().all(|c| c == '.') {
        let n = text.len() as u8;
        let value = dots_value(n)
            .ok_or_else(|| Error::parse(format!("'{text}': at most three standalone dots"), pos))?;
        return Ok(mk(DurationClass::Dots, n, false, false, value));
    }

    let invalid = || {
        Error::parse(
            format!("'{text}' is not a duration symbol (expected I, T, F, E with optional '.' and '_', dots, or '-')"),
            pos,
        )
    };
    let (rest, beam_end) = match text.strip_prefix('_') {
        Some(r) => (r, true),
        None => (text, false),
    };
    // Both `F._` and `F_.` are accepted for a dotted stem opening a beam.
    let (letter, dotted, beam_begin) = if let Some(r) = rest.strip_suffix("_.") {
        (r, true, true)
    } else {
        let (r, begin) = match rest.strip_suffix('_') {
            Some(r) => (r, true),
            None => (rest, false),
        };
        match r.strip_suffix('.') {
            Some(r) => (r, true, begin),
            None => (r, false, begin),
        }
    };
    let mut chars = letter.chars();
    let stem = match (chars.next(), chars.next()) {
        (Some(c), None) => Stem::from_char(c).ok_or_else(invalid)?,
        (Some(c), Some(_))
            if Stem::from_char(c).is_some() && letter[1..].chars().all(|c| c == '.') =>
        {
            return Err(Error::parse(
                format!("'{text}': stems take at most one dot"),
                pos,
            ))
        }
        _ => return Err(invalid()),
    };
    let mut value = stem.value();
    if dotted {
        value = value * dot_factor();
    }
    Ok(mk(
        DurationClass::Stem(stem),
        dotted as u8,
        beam_begin,
        beam_end,
        value,
    ))
}

/// Parses a `T` line. `carry_from` is the last non-carry token seen earlier
/// in the same `PARS` (from a previous system), if any.
pub fn parse_tempus_line(
    line: &SourceLine,
    params: &Parameters,
    carry_from: Option<&DurationToken>,
) -> Result<Vec<DurationToken>> {
    debug_assert_eq!(line.kind, LineKind::TempusLine);
    let tokens = tokenize(line)?;
    let mut iter = tokens.iter();
    match iter.next() {
        Some(t) if t.text == "T" => {}
        Some(t) => return Err(Error::parse("time line must start with 'T'", t.pos())),
        None => return Err(Error::parse("empty time line", Pos::new(line.number, 0))),
    }
    let mut out: Vec<DurationToken> = Vec::new();
    let mut last = carry_from.cloned();
    for tok in iter {
        let d = parse_duration_token(tok, params, last.as_ref())?;
        if d.class != DurationClass::Carry {
            last = Some(d.clone());
        }
        out.push(d);
    }
    if out.is_empty() {
        return Err(Error::parse(
            "time line has no duration symbols after 'T'",
            Pos::new(line.number, 0),
        ));
    }
    Ok(out)
}

/// Checks that beam markers pair up within one system.
pub fn validate_beams(tokens: &[DurationToken]) -> Result<()> {
    let mut open: Option<&DurationToken> = None;
    for t in tokens {
        if t.beam_end && open.take().is_none() {
            return Err(Error::model(
                format!("beam end without begin at '{}'", t.source),
                Some(t.pos()),
            ));
        }
        if t.beam_begin {
            if let Some(o) = open {
                return Err(Error::model(
                    format!(
                        "beam begin at '{}' while the beam from column {} is still open",
                        t.source,
                        o.column + 1
                    ),
                    Some(t.pos()),
                ));
            }
            open = Some(t);
        }
    }
    match open {
        Some(o) => Err(Error::model(
            format!("unclosed beam starting at '{}'", o.source),
            Some(o.pos()),
        )),
        None => Ok(()),
    }
}
