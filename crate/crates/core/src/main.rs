use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};

use tabula::cli::{run, RunOptions};
use tabula::svg::RenderConfig;

/// Compile a column-aligned lute tablature source into XML and SVG.
#[derive(Debug, Parser)]
#[command(name = "tabula", version, about)]
#[command(group(
    ArgGroup::new("action")
        .required(true)
        .multiple(true)
        .args(["xml", "svg", "dtd", "check"])
))]
struct Args {
    /// Source file.
    input: PathBuf,

    /// Write one `<stem>.<pars>.xml` per PARS into DIR.
    #[arg(long, value_name = "DIR")]
    xml: Option<PathBuf>,

    /// Write one `<stem>.<pars>.svg` control graphic per PARS into DIR.
    #[arg(long, value_name = "DIR")]
    svg: Option<PathBuf>,

    /// Write tabulatura.dtd next to the XML output (or to stdout without --xml).
    #[arg(long)]
    dtd: bool,

    /// Only process the PARS with this name.
    #[arg(long, value_name = "NAME")]
    pars: Option<String>,

    /// Validate the source without writing anything.
    #[arg(long)]
    check: bool,

    #[arg(long, default_value_t = RenderConfig::default().column_spacing, hide_short_help = true)]
    column_spacing: f64,
    #[arg(long, default_value_t = RenderConfig::default().row_spacing, hide_short_help = true)]
    row_spacing: f64,
    #[arg(long, default_value_t = RenderConfig::default().stem_height, hide_short_help = true)]
    stem_height: f64,
    #[arg(long, default_value_t = RenderConfig::default().font_size, hide_short_help = true)]
    font_size: f64,
    #[arg(long, default_value_t = RenderConfig::default().margin, hide_short_help = true)]
    margin: f64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        input: args.input,
        xml_dir: args.xml,
        svg_dir: args.svg,
        emit_dtd: args.dtd,
        pars: args.pars,
        check_only: args.check,
        render: RenderConfig {
            column_spacing: args.column_spacing,
            row_spacing: args.row_spacing,
            stem_height: args.stem_height,
            font_size: args.font_size,
            margin: args.margin,
        },
    };
    let code = run(&opts, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
