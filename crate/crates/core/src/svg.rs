//! Control graphic: a plain SVG drawing of one `PARS` for proofreading
//! against the source.
//!
//! Each source system becomes one horizontal band. Columns are evenly
//! spaced; durations are drawn as stems with flags or beams, grips as text
//! at their source row, and every column gets its number underneath. The
//! only `<text>` elements are grips and column numbers.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Columna, ParsModel, Trabes};
use crate::tempus::DurationClass;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderConfig {
    pub column_spacing: f64,
    pub row_spacing: f64,
    pub stem_height: f64,
    pub font_size: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("render setting '{name}' must be a positive number, got {value}")]
pub struct InvalidConfig {
    pub name: &'static str,
    pub value: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            column_spacing: 28.0,
            row_spacing: 18.0,
            stem_height: 24.0,
            font_size: 12.0,
            margin: 20.0,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), InvalidConfig> {
        for (name, value) in [
            ("column_spacing", self.column_spacing),
            ("row_spacing", self.row_spacing),
            ("stem_height", self.stem_height),
            ("font_size", self.font_size),
            ("margin", self.margin),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(InvalidConfig { name, value });
            }
        }
        Ok(())
    }
}

/// Formats a coordinate with at most two decimals and no trailing zeros.
fn n(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Band {
    top: f64,
    /// Number of grip rows below the time line.
    rows: u8,
}

impl Band {
    fn row_y(&self, cfg: &RenderConfig, row: u8) -> f64 {
        self.top + cfg.stem_height + f64::from(row) * cfg.row_spacing
    }

    fn height(&self, cfg: &RenderConfig) -> f64 {
        cfg.stem_height + (f64::from(self.rows) + 1.5) * cfg.row_spacing
    }
}

fn flag_count(c: &Columna) -> u32 {
    match c.duration.class {
        DurationClass::Stem(s) => s.flags(),
        _ => 0,
    }
}

/// Renders the control graphic of one `PARS`.
pub fn render_pars(model: &ParsModel, cfg: &RenderConfig) -> String {
    let widest = model.systems.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut bands = Vec::with_capacity(model.systems.len());
    let mut y = cfg.margin;
    for range in &model.systems {
        let rows = model.columns[range.clone()]
            .iter()
            .flat_map(|c| c.sona.iter().map(|s| s.ypos))
            .max()
            .unwrap_or(0);
        let band = Band { top: y, rows };
        y += band.height(cfg);
        bands.push(band);
    }
    let width = 2.0 * cfg.margin + widest.saturating_sub(1) as f64 * cfg.column_spacing;
    let height = y + cfg.margin;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns='http://www.w3.org/2000/svg' width='{w}' height='{h}' viewBox='0 0 {w} {h}'>",
        w = n(width),
        h = n(height)
    );
    let _ = writeln!(
        out,
        "  <g font-family='serif' font-size='{}' text-anchor='middle' stroke='black' stroke-width='1.2' fill='black'>",
        n(cfg.font_size)
    );
    let _ = writeln!(out, "  <title>{}</title>", escape_text(&model.name));

    for (range, band) in model.systems.iter().zip(&bands) {
        let _ = writeln!(
            out,
            "  <g class='system' data-columns='{}-{}'>",
            range.start,
            range.end.saturating_sub(1)
        );
        let columns = &model.columns[range.clone()];
        let x_of = |i: usize| cfg.margin + i as f64 * cfg.column_spacing;
        let stem_top = |c: &Columna| band.row_y(cfg, c.duration_ypos) - cfg.stem_height;
        let stem_bottom = |c: &Columna| band.row_y(cfg, c.duration_ypos) - cfg.font_size * 0.5;

        let mut beam_start: Option<usize> = None;
        for (i, c) in columns.iter().enumerate() {
            let x = x_of(i);
            let top = stem_top(c);
            let bottom = stem_bottom(c);
            if c.trabes == Some(Trabes::Initialis) {
                beam_start = Some(i);
            }
            let beamed = beam_start.is_some();
            match c.duration.class {
                DurationClass::Stem(_) => {
                    let _ = writeln!(
                        out,
                        "    <line class='stem' x1='{x}' y1='{b}' x2='{x}' y2='{t}' />",
                        x = n(x),
                        b = n(bottom),
                        t = n(top)
                    );
                    if !beamed {
                        for k in 0..flag_count(c) {
                            let fy = top + f64::from(k) * 4.0;
                            let _ = writeln!(
                                out,
                                "    <path class='flag' d='M{} {} l6 5' fill='none' />",
                                n(x),
                                n(fy)
                            );
                        }
                    }
                    if c.duration.dots > 0 {
                        let _ = writeln!(
                            out,
                            "    <circle class='dot' cx='{}' cy='{}' r='1.6' />",
                            n(x + 5.0),
                            n(bottom - 2.0)
                        );
                    }
                }
                DurationClass::Dots => {
                    let count = c.duration.dots;
                    for k in 0..count {
                        let dx = (f64::from(k) - f64::from(count - 1) / 2.0) * 5.0;
                        let _ = writeln!(
                            out,
                            "    <circle class='dot' cx='{}' cy='{}' r='1.8' />",
                            n(x + dx),
                            n(bottom - 4.0)
                        );
                    }
                }
                DurationClass::Carry => {
                    let _ = writeln!(
                        out,
                        "    <line class='carry' x1='{x}' y1='{b}' x2='{x}' y2='{t}' stroke-dasharray='2 2' opacity='0.35' />",
                        x = n(x),
                        b = n(bottom),
                        t = n(top)
                    );
                }
            }
            if c.trabes == Some(Trabes::Terminalis) {
                if let Some(s) = beam_start.take() {
                    let first = &columns[s];
                    let (x1, y1) = (x_of(s), stem_top(first));
                    let mut d = String::new();
                    for k in 0..flag_count(first).max(1) {
                        let off = f64::from(k) * 4.0;
                        if !d.is_empty() {
                            d.push(' ');
                        }
                        let _ = write!(d, "M{} {} L{} {}", n(x1), n(y1 + off), n(x), n(top + off));
                    }
                    let _ = writeln!(
                        out,
                        "    <path class='beam' data-from='{}' data-to='{}' d='{d}' stroke-width='2.5' fill='none' />",
                        first.numerus, c.numerus
                    );
                }
            }

            for s in &c.sona {
                let label = if s.prolongate {
                    format!("{}+", s.source)
                } else {
                    s.source.clone()
                };
                let _ = writeln!(
                    out,
                    "    <text class='sonum' x='{}' y='{}' stroke='none'>{}</text>",
                    n(x),
                    n(band.row_y(cfg, s.ypos)),
                    escape_text(&label)
                );
            }
            let _ = writeln!(
                out,
                "    <text class='numerus' x='{}' y='{}' stroke='none' font-size='{}' fill='#666'>{}</text>",
                n(x),
                n(band.row_y(cfg, band.rows + 1)),
                n(cfg.font_size * 0.7),
                c.numerus
            );
        }
        out.push_str("  </g>\n");
    }
    out.push_str("  </g>\n</svg>\n");
    out
}
