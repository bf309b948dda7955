//! Command-line driver: read one source file, compile it, write the
//! requested outputs.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::model::{compile, ParsModel};
use crate::svg::{render_pars, RenderConfig};
use crate::xml::{emit_dtd, emit_pars, DTD_FILE_NAME};

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: the source has errors.
pub const EXIT_INVALID: i32 = 1;
/// Exit status: usage or I/O problem.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub input: PathBuf,
    pub xml_dir: Option<PathBuf>,
    pub svg_dir: Option<PathBuf>,
    pub emit_dtd: bool,
    pub pars: Option<String>,
    pub check_only: bool,
    pub render: RenderConfig,
}

impl RunOptions {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunOptions {
            input: input.into(),
            xml_dir: None,
            svg_dir: None,
            emit_dtd: false,
            pars: None,
            check_only: false,
            render: RenderConfig::default(),
        }
    }

    fn has_action(&self) -> bool {
        self.xml_dir.is_some() || self.svg_dir.is_some() || self.emit_dtd || self.check_only
    }
}

struct Output {
    path: PathBuf,
    contents: String,
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a truncated file behind.
fn write_atomically(out: &Output) -> io::Result<()> {
    let dir = out.path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(out.contents.as_bytes())?;
    tmp.persist(&out.path).map_err(|e| e.error)?;
    Ok(())
}

fn output_name(stem: &str, pars: &ParsModel, ext: &str) -> String {
    format!("{stem}.{}.{ext}", pars.name)
}

/// Runs one invocation; diagnostics go to `stderr`, a DTD requested without
/// an XML directory goes to `stdout`. Returns the process exit status.
pub fn run(opts: &RunOptions, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if !opts.has_action() {
        let _ = writeln!(
            stderr,
            "error: nothing to do; pass --xml, --svg, --dtd or --check"
        );
        return EXIT_USAGE;
    }
    if let Err(e) = opts.render.validate() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    let path_str = opts.input.display().to_string();
    let source = match fs::read_to_string(&opts.input) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {path_str}: {e}");
            return EXIT_USAGE;
        }
    };

    let compiled = match compile(&source) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render(&path_str, &source));
            return EXIT_INVALID;
        }
    };
    for w in &compiled.warnings {
        let _ = write!(stderr, "{}", w.render(&path_str, &source));
    }

    let partes: Vec<&ParsModel> = match &opts.pars {
        Some(name) => match compiled.score.pars(name) {
            Some(p) => vec![p],
            None => {
                let names: Vec<&str> = compiled
                    .score
                    .partes
                    .iter()
                    .map(|p| p.name.as_str())
                    .collect();
                let available = if names.is_empty() {
                    "none".to_string()
                } else {
                    names.join(", ")
                };
                let _ = writeln!(
                    stderr,
                    "error: {path_str}: no PARS named '{name}' (available: {available})"
                );
                return EXIT_INVALID;
            }
        },
        None => compiled.score.partes.iter().collect(),
    };

    let stem = opts
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let mut outputs = Vec::new();
    for p in &partes {
        if let Some(dir) = &opts.xml_dir {
            match emit_pars(p) {
                Ok(xml) => outputs.push(Output {
                    path: dir.join(output_name(&stem, p, "xml")),
                    contents: xml,
                }),
                Err(e) => {
                    let _ = write!(stderr, "{}", e.render(&path_str, &source));
                    return EXIT_INVALID;
                }
            }
        }
        if let Some(dir) = &opts.svg_dir {
            outputs.push(Output {
                path: dir.join(output_name(&stem, p, "svg")),
                contents: render_pars(p, &opts.render),
            });
        }
    }
    if opts.emit_dtd {
        if let Some(dir) = &opts.xml_dir {
            outputs.push(Output {
                path: dir.join(DTD_FILE_NAME),
                contents: emit_dtd().to_string(),
            });
        }
    }

    if opts.check_only {
        let columns: usize = partes.iter().map(|p| p.columns.len()).sum();
        let _ = writeln!(
            stderr,
            "{path_str}: ok ({} PARS, {columns} columns)",
            partes.len()
        );
        return EXIT_OK;
    }

    for out in &outputs {
        if let Some(dir) = out.path.parent() {
            if let Err(e) = fs::create_dir_all(dir) {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", dir.display());
                return EXIT_USAGE;
            }
        }
        if let Err(e) = write_atomically(out) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", out.path.display());
            return EXIT_USAGE;
        }
    }
    if opts.emit_dtd && opts.xml_dir.is_none() {
        let _ = stdout.write_all(emit_dtd().as_bytes());
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "Tab = ( (1 a f) (2 b g) )
PARS uno
bünde = Tab
T      I  T
VOX v1 a  b
PARS duo
bünde = Tab
T      I
VOX v1 f
";

    fn setup(src: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("piece.tab");
        fs::write(&input, src).unwrap();
        (dir, input)
    }

    fn exec(opts: &RunOptions) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(opts, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn writes_one_file_per_pars() {
        let (dir, input) = setup(SRC);
        let mut opts = RunOptions::new(&input);
        opts.xml_dir = Some(dir.path().join("xml"));
        opts.svg_dir = Some(dir.path().join("svg"));
        opts.emit_dtd = true;
        let (code, _, err) = exec(&opts);
        assert_eq!(code, EXIT_OK, "{err}");
        for f in [
            "xml/piece.uno.xml",
            "xml/piece.duo.xml",
            "svg/piece.uno.svg",
            "svg/piece.duo.svg",
            "xml/tabulatura.dtd",
        ] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
    }

    #[test]
    fn pars_filter() {
        let (dir, input) = setup(SRC);
        let mut opts = RunOptions::new(&input);
        opts.xml_dir = Some(dir.path().to_path_buf());
        opts.pars = Some("duo".into());
        assert_eq!(exec(&opts).0, EXIT_OK);
        assert!(dir.path().join("piece.duo.xml").exists());
        assert!(!dir.path().join("piece.uno.xml").exists());

        opts.pars = Some("tres".into());
        let (code, _, err) = exec(&opts);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("tres") && err.contains("uno, duo"), "{err}");
    }

    #[test]
    fn check_writes_nothing() {
        let (dir, input) = setup(SRC);
        let mut opts = RunOptions::new(&input);
        opts.check_only = true;
        opts.xml_dir = Some(dir.path().join("xml"));
        assert_eq!(exec(&opts).0, EXIT_OK);
        assert!(!dir.path().join("xml").exists());
    }

    #[test]
    fn errors_leave_no_output() {
        let (dir, input) = setup(&SRC.replace("VOX v1 a  b", "VOX v1 a   b"));
        let mut opts = RunOptions::new(&input);
        opts.xml_dir = Some(dir.path().join("xml"));
        let (code, _, err) = exec(&opts);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("piece.tab:5:12"), "{err}");
        assert!(!dir.path().join("xml").exists());
    }

    #[test]
    fn usage_and_io_errors() {
        let (_dir, input) = setup(SRC);
        assert_eq!(exec(&RunOptions::new(&input)).0, EXIT_USAGE);
        let mut opts = RunOptions::new("/nonexistent/x.tab");
        opts.check_only = true;
        assert_eq!(exec(&opts).0, EXIT_USAGE);
        let mut opts = RunOptions::new(&input);
        opts.check_only = true;
        opts.render.margin = -1.0;
        assert_eq!(exec(&opts).0, EXIT_USAGE);
    }

    #[test]
    fn dtd_to_stdout_without_xml_dir() {
        let (_dir, input) = setup(SRC);
        let mut opts = RunOptions::new(&input);
        opts.emit_dtd = true;
        let (code, out, _) = exec(&opts);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, emit_dtd());
    }
}
