//! Assembly of systems into columns with exact time positions.
//!
//! A system is one `T` line plus the `VOX` lines below it. Every grip must
//! start in the column of a duration symbol; each duration symbol with its
//! grips becomes one [`Columna`]. All systems of a `PARS` form one sequence
//! of columns and the time position runs on across system boundaries.

use std::ops::Range;

use crate::diag::{Error, Pos, Result, Warning};
use crate::prelude::{
    build_symbol_map, parse_assignment, Parameters, Scope, SymbolMap, BUENDE, MAX_INDEX,
};
use crate::rational::Rational;
use crate::scanner::{is_identifier, tokenize, LineKind, SourceLine};
use crate::tempus::{parse_tempus_line, validate_beams, DurationClass, DurationToken};
use crate::vox::{parse_param_track, parse_vox_line, Annotation, Voice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trabes {
    Initialis,
    Terminalis,
}

impl Trabes {
    pub fn as_str(self) -> &'static str {
        match self {
            Trabes::Initialis => "initialis",
            Trabes::Terminalis => "terminalis",
        }
    }
}

/// One grip: a string stopped at a fret and plucked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sonum {
    pub source: String,
    pub string: u8,
    pub fret: u8,
    pub prolongate: bool,
    /// 1 + index of the voice line within its system.
    pub ypos: u8,
    pub annotations: Vec<Annotation>,
    pub column: usize,
    pub line: usize,
}

impl Sonum {
    pub fn annotation(&self, track: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.track == track)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Columna {
    pub numerus: usize,
    pub duration: DurationToken,
    pub duration_ypos: u8,
    pub trabes: Option<Trabes>,
    pub summa: Rational,
    pub sona: Vec<Sonum>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsModel {
    pub name: String,
    pub line: usize,
    pub columns: Vec<Columna>,
    pub parameters: Parameters,
    pub table_name: String,
    /// Column index ranges, one per source system.
    pub systems: Vec<Range<usize>>,
}

impl ParsModel {
    /// Time position just after the last column.
    pub fn total_duration(&self) -> Rational {
        self.columns
            .last()
            .map_or(Rational::ZERO, |c| c.summa + c.duration.value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScoreModel {
    pub partes: Vec<ParsModel>,
}

impl ScoreModel {
    pub fn pars(&self, name: &str) -> Option<&ParsModel> {
        self.partes.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Compilation {
    pub score: ScoreModel,
    pub warnings: Vec<Warning>,
}

pub fn assign_trabes(token: &DurationToken) -> Result<Option<Trabes>> {
    match (token.beam_begin, token.beam_end) {
        (true, true) => Err(Error::model(
            format!(
                "'{}' both ends and begins a beam, which the output model cannot represent; \
                 split it into two symbols",
                token.source
            ),
            Some(token.pos()),
        )),
        (true, false) => Ok(Some(Trabes::Initialis)),
        (false, true) => Ok(Some(Trabes::Terminalis)),
        (false, false) => Ok(None),
    }
}

/// Builds the columns of one system. Numbering starts at `first_numerus`;
/// time positions are left at zero for [`compute_summa`].
pub fn build_system(
    tempus: &[DurationToken],
    voices: &[Voice],
    symbols: &SymbolMap,
    first_numerus: usize,
) -> Result<Vec<Columna>> {
    let Some(first) = tempus.first() else {
        return Err(Error::model("system without duration symbols", None));
    };
    if voices.len() > MAX_INDEX {
        return Err(Error::model(
            format!(
                "{} voice lines in one system; at most {MAX_INDEX} fit the output model",
                voices.len()
            ),
            Some(Pos::new(voices[MAX_INDEX].line, 0)),
        ));
    }
    validate_beams(tempus)?;

    let mut columns = tempus
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Ok(Columna {
                numerus: first_numerus + i,
                duration: d.clone(),
                duration_ypos: 0,
                trabes: assign_trabes(d)?,
                summa: Rational::ZERO,
                sona: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    for (vi, voice) in voices.iter().enumerate() {
        let ypos = (vi + 1) as u8;
        for grip in &voice.grips {
            let Some(idx) = tempus.iter().position(|d| d.column == grip.column) else {
                return Err(Error::alignment(
                    format!(
                        "grip '{}' of voice '{}' does not start under a duration symbol of the time line at line {}",
                        grip.source_text(),
                        voice.name,
                        first.line
                    ),
                    grip.pos(),
                ));
            };
            let g = symbols.lookup(&grip.symbol, grip.pos())?;
            columns[idx].sona.push(Sonum {
                source: grip.symbol.clone(),
                string: g.string,
                fret: g.fret,
                prolongate: grip.prolongate,
                ypos,
                annotations: grip.annotations.clone(),
                column: grip.column,
                line: grip.line,
            });
        }
    }

    for c in &columns {
        if c.sona.is_empty() {
            return Err(Error::model(
                format!("duration '{}' has no grip below it", c.duration.source),
                Some(c.duration.pos()),
            ));
        }
    }
    Ok(columns)
}

/// Sets each column's time position to the sum of all preceding durations.
pub fn compute_summa(columns: &mut [Columna]) {
    let mut acc = Rational::ZERO;
    for c in columns {
        c.summa = acc;
        acc = acc + c.duration.value;
    }
}

/// Vertical placement of the duration symbols. With `duratioCadens` each
/// symbol drops to the row just above the topmost grip of its column.
pub fn assign_duration_ypos(columns: &mut [Columna], params: &Parameters) {
    for c in columns {
        c.duration_ypos = if params.duratio_cadens {
            c.sona
                .iter()
                .map(|s| s.ypos)
                .min()
                .unwrap_or(1)
                .saturating_sub(1)
        } else {
            0
        };
    }
}

struct RawSystem<'a> {
    tempus: &'a SourceLine,
    voices: Vec<(&'a SourceLine, Vec<&'a SourceLine>)>,
}

struct RawPars<'a> {
    name: String,
    header: &'a SourceLine,
    assignments: Vec<(&'a SourceLine, Vec<SourceLine>)>,
    systems: Vec<RawSystem<'a>>,
}

fn parse_pars_header(line: &SourceLine) -> Result<String> {
    let tokens = tokenize(line)?;
    match tokens.as_slice() {
        [_, name] if is_identifier(&name.text) => Ok(name.text.clone()),
        [_, name] => Err(Error::parse(
            format!("'{}' is not a valid PARS name", name.text),
            name.pos(),
        )),
        [kw] => Err(Error::parse("'PARS' must be followed by a name", kw.pos())),
        [_, _, extra, ..] => Err(Error::parse(
            "unexpected text after the PARS name",
            extra.pos(),
        )),
        [] => unreachable!("classified lines are nonblank"),
    }
}

/// Builds the score of one scanned file.
pub fn build_score(lines: &[SourceLine]) -> Result<Compilation> {
    let mut warnings = Vec::new();
    let mut file_scope = Scope::default();
    let mut raw: Vec<RawPars> = Vec::new();

    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        i += 1;
        match line.kind {
            LineKind::Blank => {}
            LineKind::Assignment => {
                let start = i;
                while i < lines.len()
                    && matches!(lines[i].kind, LineKind::TableContinuation | LineKind::Blank)
                {
                    i += 1;
                }
                let followers: Vec<SourceLine> = lines[start..i]
                    .iter()
                    .filter(|l| l.kind == LineKind::TableContinuation)
                    .cloned()
                    .collect();
                match raw.last_mut() {
                    Some(p) => p.assignments.push((line, followers)),
                    None => file_scope.apply(parse_assignment(line, &followers)?, &mut warnings)?,
                }
            }
            LineKind::TableContinuation => {
                return Err(Error::parse(
                    "table row outside an assignment",
                    Pos::new(line.number, 0),
                ))
            }
            LineKind::ParsHeader => {
                let name = parse_pars_header(line)?;
                if let Some(prev) = raw.iter().find(|p| p.name == name) {
                    return Err(Error::model(
                        format!(
                            "PARS '{name}' is already defined at line {}",
                            prev.header.number
                        ),
                        Some(Pos::new(line.number, 0)),
                    ));
                }
                raw.push(RawPars {
                    name,
                    header: line,
                    assignments: Vec::new(),
                    systems: Vec::new(),
                });
            }
            LineKind::TempusLine => {
                let pars = raw.last_mut().ok_or_else(|| {
                    Error::parse("time line outside of any PARS", Pos::new(line.number, 0))
                })?;
                pars.systems.push(RawSystem {
                    tempus: line,
                    voices: Vec::new(),
                });
            }
            LineKind::VoxLine => {
                let system = raw
                    .last_mut()
                    .and_then(|p| p.systems.last_mut())
                    .ok_or_else(|| {
                        Error::parse(
                            "voice line without a preceding time line",
                            Pos::new(line.number, 0),
                        )
                    })?;
                system.voices.push((line, Vec::new()));
            }
            LineKind::ParamTrackLine => {
                let voice = raw
                    .last_mut()
                    .and_then(|p| p.systems.last_mut())
                    .and_then(|s| s.voices.last_mut())
                    .ok_or_else(|| {
                        Error::parse(
                            "parameter track without a voice line",
                            Pos::new(line.number, 0),
                        )
                    })?;
                voice.1.push(line);
            }
        }
    }

    let partes = raw
        .into_iter()
        .map(|p| build_pars(p, &file_scope, &mut warnings))
        .collect::<Result<Vec<_>>>()?;
    Ok(Compilation {
        score: ScoreModel { partes },
        warnings,
    })
}

fn build_pars(raw: RawPars, file_scope: &Scope, warnings: &mut Vec<Warning>) -> Result<ParsModel> {
    let mut scope = file_scope.clone();
    for (line, followers) in &raw.assignments {
        scope.apply(parse_assignment(line, followers)?, warnings)?;
    }
    let header_pos = Pos::new(raw.header.number, 0);
    let table = scope.selected_table().ok_or_else(|| {
        Error::model(
            format!(
                "PARS '{}' has no '{BUENDE}' assignment selecting a grip table",
                raw.name
            ),
            Some(header_pos),
        )
    })?;
    let symbols = build_symbol_map(table)?;
    if raw.systems.is_empty() {
        return Err(Error::model(
            format!("PARS '{}' contains no system (time line)", raw.name),
            Some(header_pos),
        ));
    }

    let params = scope.params.clone();
    let mut columns: Vec<Columna> = Vec::new();
    let mut systems = Vec::new();
    let mut carry_from: Option<DurationToken> = None;
    for sys in &raw.systems {
        let tempus = parse_tempus_line(sys.tempus, &params, carry_from.as_ref())?;
        if let Some(last) = tempus
            .iter()
            .rev()
            .find(|d| d.class != DurationClass::Carry)
        {
            carry_from = Some(last.clone());
        }
        let mut voices = Vec::with_capacity(sys.voices.len());
        for (vline, tracks) in &sys.voices {
            let mut voice = parse_vox_line(vline)?;
            for t in tracks {
                let anns = parse_param_track(t, &voice)?;
                voice.attach(anns)?;
            }
            voices.push(voice);
        }
        let start = columns.len();
        columns.extend(build_system(&tempus, &voices, &symbols, start)?);
        systems.push(start..columns.len());
    }
    compute_summa(&mut columns);
    assign_duration_ypos(&mut columns, &params);

    Ok(ParsModel {
        name: raw.name,
        line: raw.header.number,
        columns,
        parameters: params,
        table_name: table.name.clone(),
        systems,
    })
}

/// Scans and builds a whole source text.
pub fn compile(source: &str) -> Result<Compilation> {
    let lines = crate::scanner::scan(source)?;
    build_score(&lines)
}
