//! XML output: one `tabulatura` document per `PARS`, plus its DTD.

use std::fmt::Write as _;

use crate::diag::{Error, Result};
use crate::model::{Columna, ParsModel, Sonum};
use crate::rational::Rational;

/// File name the emitted documents reference in their DOCTYPE.
pub const DTD_FILE_NAME: &str = "tabulatura.dtd";

/// Annotation track written as the `edit` attribute of `sonum`.
pub const EDIT_TRACK: &str = "edit";

const DENOMINATORS: [u64; 7] = [1, 2, 4, 8, 16, 32, 64];
const MAX_ENUM: u8 = 12;

const DTD: &str = r#"<!ELEMENT tabulatura (columna)*  >

<!ELEMENT columna (duratio, sonum+) >

<!ELEMENT duratio EMPTY>
<!ATTLIST duratio source CDATA                          #REQUIRED
                  numerus CDATA                         #REQUIRED
                  ypos   (0|1|2|3|4|5|6|7|8|9|10|11|12) #REQUIRED
                  trabes (initialis|terminalis)         #IMPLIED
                  duratio.num    CDATA                  #REQUIRED
                  duratio.den    (1|2|4|8|16|32|64)     #REQUIRED
                  summaPraecedentium.num  CDATA         #REQUIRED
                  summaPraecedentium.den  (1|2|4|8|16|32|64) #REQUIRED
>

<!ELEMENT sonum EMPTY>
<!ATTLIST sonum source CDATA  #REQUIRED
                  fret   (0|1|2|3|4|5|6|7|8|9|10|11|12) #REQUIRED
                  string (0|1|2|3|4|5|6|7|8|9|10|11|12) #REQUIRED
                  prolongate (yes)                      #IMPLIED
                  ypos   (0|1|2|3|4|5|6|7|8|9|10|11|12) #REQUIRED
                  finger  (p|i|m|a|o)                   #IMPLIED
                  edit    CDATA                         #IMPLIED
>
"#;

/// The document type of the emitted XML. `sonum` carries an additional
/// optional `edit` attribute for editorial annotations.
pub fn emit_dtd() -> &'static str {
    DTD
}

/// Escapes text for a single-quoted attribute value.
pub fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\'' => out.push_str("&apos;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            _ => out.push(c),
        }
    }
    out
}

fn check_den(what: &str, numerus: usize, r: Rational) -> Result<()> {
    if DENOMINATORS.contains(&r.den()) {
        Ok(())
    } else {
        Err(Error::emit(format!(
            "column {numerus}: {what} {r} has a denominator outside 1, 2, 4, ..., 64"
        )))
    }
}

fn check_small(what: &str, numerus: usize, v: u8) -> Result<()> {
    if v <= MAX_ENUM {
        Ok(())
    } else {
        Err(Error::emit(format!(
            "column {numerus}: {what} {v} exceeds {MAX_ENUM}"
        )))
    }
}

struct Attrs(String);

impl Attrs {
    fn new(tag: &str) -> Self {
        Attrs(format!("<{tag}"))
    }

    fn add(mut self, name: &str, value: impl std::fmt::Display) -> Self {
        let value = escape_attr(&value.to_string());
        let _ = write!(self.0, " {name}='{value}'");
        self
    }

    fn add_opt(self, name: &str, value: Option<impl std::fmt::Display>) -> Self {
        match value {
            Some(v) => self.add(name, v),
            None => self,
        }
    }

    fn close(mut self) -> String {
        self.0.push_str(" />");
        self.0
    }
}

fn duratio_element(c: &Columna) -> Result<String> {
    check_small("duration ypos", c.numerus, c.duration_ypos)?;
    check_den("time position", c.numerus, c.summa)?;
    check_den("duration", c.numerus, c.duration.value)?;
    Ok(Attrs::new("duratio")
        .add("source", &c.duration.source)
        .add("numerus", c.numerus)
        .add("ypos", c.duration_ypos)
        .add_opt("trabes", c.trabes.map(|t| t.as_str()))
        .add("summaPraecedentium.num", c.summa.num())
        .add("summaPraecedentium.den", c.summa.den())
        .add("duratio.num", c.duration.value.num())
        .add("duratio.den", c.duration.value.den())
        .close())
}

fn sonum_element(numerus: usize, s: &Sonum) -> Result<String> {
    check_small("fret", numerus, s.fret)?;
    check_small("string", numerus, s.string)?;
    check_small("grip ypos", numerus, s.ypos)?;
    Ok(Attrs::new("sonum")
        .add("source", &s.source)
        .add("fret", s.fret)
        .add("string", s.string)
        .add_opt("prolongate", s.prolongate.then_some("yes"))
        .add("ypos", s.ypos)
        .add_opt("edit", s.annotation(EDIT_TRACK).map(|a| a.text.as_str()))
        .close())
}

/// Serializes one `PARS` as a `tabulatura` document.
pub fn emit_pars(model: &ParsModel) -> Result<String> {
    let mut out = String::new();
    out.push_str("<?xml version='1.0' encoding='UTF-8'?>\n");
    let _ = writeln!(out, "<!DOCTYPE tabulatura SYSTEM '{DTD_FILE_NAME}'>");
    out.push_str("<tabulatura>\n");
    for c in &model.columns {
        out.push_str("  <columna>\n");
        let _ = writeln!(out, "    {}", duratio_element(c)?);
        for s in &c.sona {
            let _ = writeln!(out, "    {}", sonum_element(c.numerus, s)?);
        }
        out.push_str("  </columna>\n");
    }
    out.push_str("</tabulatura>\n");
    Ok(out)
}
