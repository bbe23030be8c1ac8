//! Static plot documents: self-contained SVG, or a gnuplot script over the CSV files.
//!
//! Curves are drawn on their own grids; nothing is resampled. Legend entries
//! follow a fixed order (Coulomb, Poincaré, symmetric, Lorentzian references,
//! then anything else in input order) and each gets a fixed colour.

use std::fmt::Write as _;

use gauge_lineshape::{Error, GaugeRepresentation, Spectrum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PlotFormat {
    Svg,
    Gnuplot,
}

impl PlotFormat {
    pub fn extension(self) -> &'static str {
        match self {
            PlotFormat::Svg => "svg",
            PlotFormat::Gnuplot => "gp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlotStyle {
    pub title: String,
    pub subtitle: String,
    pub x_label: String,
    pub y_label: String,
    /// Plot `ln S`.
    pub log_scale: bool,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 70.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#7f7f7f", "#ff7f0e", "#9467bd", "#8c564b", "#17becf",
];

fn rank(key: &str) -> usize {
    match key {
        "coulomb" => 0,
        "poincare" => 1,
        "symmetric" => 2,
        "lorentzian" => 3,
        "lorentzian+laser" => 4,
        _ => 5,
    }
}

/// Legend text for a spectrum's representation key.
pub fn legend_label(key: &str) -> String {
    match key {
        "lorentzian" => "bare Lorentzian".into(),
        "lorentzian+laser" => "Lorentzian + laser".into(),
        other => other
            .parse::<GaugeRepresentation>()
            .map(|r| r.label())
            .unwrap_or_else(|_| other.to_string()),
    }
}

// legend order, with colour indices
fn ordered<'a>(spectra: &[&'a Spectrum]) -> Vec<(&'a Spectrum, &'static str)> {
    let mut idx: Vec<usize> = (0..spectra.len()).collect();
    idx.sort_by_key(|&i| (rank(&spectra[i].meta.representation), i));
    let mut extra = 5;
    idx.into_iter()
        .map(|i| {
            let r = rank(&spectra[i].meta.representation);
            let colour = if r < 5 {
                PALETTE[r]
            } else {
                let c = PALETTE[extra % PALETTE.len()];
                extra += 1;
                c
            };
            (spectra[i], colour)
        })
        .collect()
}

fn transform(v: f64, log: bool) -> Option<f64> {
    if log {
        (v > 0.0).then(|| v.ln())
    } else {
        Some(v)
    }
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = nice_step(hi - lo, 6);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn bounds(spectra: &[&Spectrum], log: bool) -> Result<(f64, f64, f64, f64), Error> {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for s in spectra {
        for (g, v) in s.grid().iter().zip(s.values()) {
            x = (x.0.min(*g), x.1.max(*g));
            if let Some(t) = transform(*v, log) {
                y = (y.0.min(t), y.1.max(t));
            }
        }
    }
    if !y.0.is_finite() {
        return Err(Error::Domain(
            "no positive values to plot on a logarithmic scale".into(),
        ));
    }
    if !log && y.0 >= 0.0 {
        y.0 = 0.0;
    }
    if y.1 <= y.0 {
        y.1 = y.0 + 1.0;
    }
    let pad = 0.05 * (y.1 - y.0);
    let y_lo = if !log && y.0 == 0.0 { 0.0 } else { y.0 - pad };
    if x.1 <= x.0 {
        x.1 = x.0 + 1.0;
    }
    Ok((x.0, x.1, y_lo, y.1 + pad))
}

/// Renders the spectra into a standalone SVG document.
pub fn emit_svg(spectra: &[&Spectrum], style: &PlotStyle) -> Result<String, Error> {
    if spectra.is_empty() {
        return Err(Error::Config("nothing to plot".into()));
    }
    let (x0, x1, y0, y1) = bounds(spectra, style.log_scale)?;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="28" font-size="18" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&style.title)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="50" font-size="12" text-anchor="middle" fill="#444">{}</text>"##,
        WIDTH / 2.0,
        escape(&style.subtitle)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    let (xt, xd) = ticks(x0, x1);
    for t in xt {
        let px = sx(t);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle">{t:.xd$}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0
        );
    }
    let (yt, yd) = ticks(y0, y1);
    for t in yt {
        let py = sy(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{t:.yd$}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&style.y_label)
    );

    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath></defs>"#
    );
    let _ = writeln!(out, r#"<g clip-path="url(#plot-area)">"#);
    let curves = ordered(spectra);
    for (s, colour) in &curves {
        let mut d = String::new();
        let mut pen_down = false;
        for (g, v) in s.grid().iter().zip(s.values()) {
            match transform(*v, style.log_scale) {
                Some(t) => {
                    let _ = write!(
                        d,
                        "{}{:.2},{:.2} ",
                        if pen_down { "L" } else { "M" },
                        sx(*g),
                        sy(t)
                    );
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            d.trim_end()
        );
    }
    let _ = writeln!(out, "</g>");

    if curves.len() > 1 {
        // about 7 px per character at font-size 12
        let longest = curves
            .iter()
            .map(|(s, _)| legend_label(&s.meta.representation).chars().count())
            .max()
            .unwrap_or(0);
        let width = 58.0 + 7.0 * longest as f64;
        let lx = LEFT + pw - width - 10.0;
        let _ = writeln!(
            out,
            r##"<rect x="{lx:.2}" y="{:.2}" width="{width:.2}" height="{:.2}" fill="white" stroke="#999"/>"##,
            TOP + 10.0,
            20.0 * curves.len() as f64 + 10.0
        );
        for (k, (s, colour)) in curves.iter().enumerate() {
            let y = TOP + 28.0 + 20.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
                lx + 10.0,
                lx + 40.0,
                lx + 48.0,
                y + 4.0,
                escape(&legend_label(&s.meta.representation))
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// A gnuplot script drawing `files[i]`, which must hold `spectra[i]`.
pub fn emit_gnuplot(
    spectra: &[&Spectrum],
    files: &[String],
    style: &PlotStyle,
    output: &str,
) -> Result<String, Error> {
    if spectra.is_empty() {
        return Err(Error::Config("nothing to plot".into()));
    }
    if files.len() != spectra.len() {
        return Err(Error::Config(
            "every plotted spectrum needs its data file".into(),
        ));
    }
    let quote = |s: &str| s.replace('\'', "''");
    let mut out = String::new();
    let _ = writeln!(
        out,
        "set terminal svg size {WIDTH},{HEIGHT} dynamic font 'Helvetica,12'"
    );
    let _ = writeln!(out, "set output '{}'", quote(output));
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(
        out,
        "set title '{}\\n{}' noenhanced",
        quote(&style.title),
        quote(&style.subtitle)
    );
    let _ = writeln!(out, "set xlabel '{}' noenhanced", quote(&style.x_label));
    let _ = writeln!(out, "set ylabel '{}' noenhanced", quote(&style.y_label));
    let _ = writeln!(out, "set key top right noenhanced");
    let column = if style.log_scale {
        "($2 > 0 ? log($2) : NaN)"
    } else {
        "2"
    };
    let order: Vec<(usize, &str)> = {
        let refs = ordered(spectra);
        refs.iter()
            .map(|(s, c)| {
                (
                    spectra
                        .iter()
                        .position(|x| std::ptr::eq(*x, *s))
                        .expect("curve comes from input"),
                    *c,
                )
            })
            .collect()
    };
    let lines: Vec<String> = order
        .iter()
        .map(|(i, colour)| {
            format!(
                "'{}' every ::1 using 1:{column} with lines lw 2 lc rgb '{colour}' title '{}'",
                quote(&files[*i]),
                quote(&legend_label(&spectra[*i].meta.representation))
            )
        })
        .collect();
    let _ = writeln!(out, "plot {}", lines.join(", \\\n     "));
    Ok(out)
}
