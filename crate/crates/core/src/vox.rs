//! Voice lines (`VOX name events...`) and the parameter tracks below them.

use crate::diag::{Error, Pos, Result};
use crate::scanner::{tokenize, LineKind, SourceLine};

/// Suffix marking *laissez vibrer*.
pub const PROLONGATE: char = '+';

/// Terminal marker on a parameter track line; carries no event.
pub const TRACK_END: &str = r"\\";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub track: String,
    /// Quoted content without the quotes, followed by anything glued to the
    /// closing quote (e.g. a trailing `!`).
    pub text: String,
    pub column: usize,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GripToken {
    pub symbol: String,
    pub prolongate: bool,
    pub column: usize,
    pub line: usize,
    pub voice: String,
    pub annotations: Vec<Annotation>,
}

impl GripToken {
    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    /// The token as written in the source.
    pub fn source_text(&self) -> String {
        let mut s = self.symbol.clone();
        if self.prolongate {
            s.push(PROLONGATE);
        }
        s
    }

    pub fn annotation(&self, track: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.track == track)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voice {
    pub name: String,
    pub line: usize,
    pub grips: Vec<GripToken>,
}

impl Voice {
    pub fn grip_at(&self, column: usize) -> Option<&GripToken> {
        self.grips.iter().find(|g| g.column == column)
    }

    /// Attaches annotations previously checked by [`parse_param_track`].
    pub fn attach(&mut self, annotations: Vec<Annotation>) -> Result<()> {
        for a in annotations {
            let pos = Pos::new(a.line, a.column);
            let grip = self
                .grips
                .iter_mut()
                .find(|g| g.column == a.column)
                .ok_or_else(|| {
                    Error::alignment(
                        format!(
                            "'{}' annotation is not under an event of voice '{}'",
                            a.track, self.name
                        ),
                        pos,
                    )
                })?;
            if grip.annotation(&a.track).is_some() {
                return Err(Error::parse(
                    format!(
                        "event '{}' already has a '{}' annotation",
                        grip.source_text(),
                        a.track
                    ),
                    pos,
                ));
            }
            grip.annotations.push(a);
        }
        Ok(())
    }
}

pub fn parse_vox_line(line: &SourceLine) -> Result<Voice> {
    debug_assert_eq!(line.kind, LineKind::VoxLine);
    let tokens = tokenize(line)?;
    let mut it = tokens.into_iter();
    match it.next() {
        Some(t) if t.text == "VOX" => {}
        Some(t) => return Err(Error::parse("voice line must start with 'VOX'", t.pos())),
        None => return Err(Error::parse("empty voice line", Pos::new(line.number, 0))),
    }
    let name = it.next().ok_or_else(|| {
        Error::parse(
            "'VOX' must be followed by a voice name",
            Pos::new(line.number, 0),
        )
    })?;
    let mut grips = Vec::new();
    for tok in it {
        let (symbol, prolongate) = match tok.text.strip_suffix(PROLONGATE) {
            Some(s) => (s, true),
            None => (tok.text.as_str(), false),
        };
        if symbol.is_empty() {
            return Err(Error::parse("'+' must follow a grip symbol", tok.pos()));
        }
        if symbol.contains(PROLONGATE) {
            return Err(Error::parse(
                format!("'{}': '+' may only appear once, as a suffix", tok.text),
                tok.pos(),
            ));
        }
        grips.push(GripToken {
            symbol: symbol.to_string(),
            prolongate,
            column: tok.column,
            line: tok.line,
            voice: name.text.clone(),
            annotations: Vec::new(),
        });
    }
    Ok(Voice {
        name: name.text,
        line: line.number,
        grips,
    })
}

/// Parses a parameter track such as `edit "..."` and checks that every
/// annotation starts in the same column as an event of `voice`.
pub fn parse_param_track(line: &SourceLine, voice: &Voice) -> Result<Vec<Annotation>> {
    debug_assert_eq!(line.kind, LineKind::ParamTrackLine);
    let tokens = tokenize(line)?;
    let Some((head, payload)) = tokens.split_first() else {
        return Err(Error::parse(
            "empty parameter track",
            Pos::new(line.number, 0),
        ));
    };
    let payload = match payload.split_last() {
        Some((last, rest)) if last.text == TRACK_END => rest,
        _ => payload,
    };
    let mut out = Vec::with_capacity(payload.len());
    for tok in payload {
        let text = tok
            .text
            .strip_prefix('"')
            .and_then(|t| t.rfind('"').map(|i| (t, i)))
            .map(|(t, i)| format!("{}{}", &t[..i], &t[i + 1..]))
            .ok_or_else(|| {
                Error::parse(
                    format!(
                        "'{}' values must be double-quoted, found '{}'",
                        head.text, tok.text
                    ),
                    tok.pos(),
                )
            })?;
        if voice.grip_at(tok.column).is_none() {
            return Err(Error::alignment(
                format!(
                    "'{}' annotation does not start under an event of voice '{}'",
                    head.text, voice.name
                ),
                tok.pos(),
            ));
        }
        out.push(Annotation {
            track: head.text.clone(),
            text,
            column: tok.column,
            line: tok.line,
        });
    }
    Ok(out)
}
