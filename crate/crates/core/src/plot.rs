//! Minimal SVG line plots of the CSV exports.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::{read_timing_csv, Table};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = ["steelblue", "firebrick", "seagreen", "rebeccapurple", "darkorange", "teal"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Curvatures and inputs against time.
    Trajectory,
    /// Reference and simulated tip paths in the plane.
    Rollout,
    /// Iteration time against timestep, log-log, with the real-time diagonal.
    Timing,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trajectory" => Ok(PlotKind::Trajectory),
            "rollout" => Ok(PlotKind::Rollout),
            "timing" => Ok(PlotKind::Timing),
            other => Err(Error::InvalidArgument(format!(
                "unknown plot kind `{other}` (expected trajectory, rollout or timing)"
            ))),
        }
    }
}

struct Series {
    id: String,
    points: Vec<(f64, f64)>,
    dashed: bool,
}

struct Axes {
    title: String,
    x_label: String,
    y_label: String,
    log: bool,
    equal_aspect: bool,
}

fn bounds(series: &[Series], log: bool) -> Result<(f64, f64, f64, f64)> {
    let tf = |v: f64| if log { v.log10() } else { v };
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in series.iter().flat_map(|s| &s.points) {
        if log && (x <= 0.0 || y <= 0.0) {
            return Err(Error::InvalidCsv("log axes need positive values".into()));
        }
        let (x, y) = (tf(x), tf(y));
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidCsv("non-finite value in plot data".into()));
        }
        b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
    }
    if !b.0.is_finite() {
        return Err(Error::InvalidCsv("nothing to plot".into()));
    }
    let pad = |lo: f64, hi: f64| {
        let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x0, x1) = pad(b.0, b.1);
    let (y0, y1) = pad(b.2, b.3);
    Ok((x0, x1, y0, y1))
}

fn render(axes: &Axes, series: &[Series]) -> Result<String> {
    let (mut x0, mut x1, mut y0, mut y1) = bounds(series, axes.log)?;
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    if axes.equal_aspect {
        let scale = ((x1 - x0) / pw).max((y1 - y0) / ph);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        (x0, x1) = (cx - scale * pw / 2.0, cx + scale * pw / 2.0);
        (y0, y1) = (cy - scale * ph / 2.0, cy + scale * ph / 2.0);
    }
    let tf = |v: f64| if axes.log { v.log10() } else { v };
    let sx = |x: f64| MARGIN + (tf(x) - x0) / (x1 - x0) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - (tf(y) - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="dimgray"/>"#
    );
    let tick = |v: f64| if axes.log { format!("1e{v:.1}") } else { format!("{v:.3}") };
    for (i, (xv, yv)) in [(x0, y0), (x1, y1)].into_iter().enumerate() {
        let px = MARGIN + i as f64 * pw;
        let py = HEIGHT - MARGIN - i as f64 * ph;
        let _ = writeln!(svg, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, HEIGHT - MARGIN + 16.0, tick(xv));
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{py:.1}" text-anchor="end">{}</text>"#, MARGIN - 4.0, tick(yv));
    }
    let _ = writeln!(svg, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, axes.title);
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, axes.x_label);
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        axes.y_label
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline id="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            s.id,
            pts.join(" ")
        );
        let ly = MARGIN + 14.0 + 16.0 * i as f64;
        let lx = WIDTH - MARGIN - 110.0;
        let _ = writeln!(svg, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}"{dash}/>"#, lx + 18.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, lx + 24.0, ly + 4.0, s.id);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn columns(table: &Table, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    Ok(table.column(x)?.into_iter().zip(table.column(y)?).collect())
}

/// Renders a CSV produced by `generate`, `simulate` or `benchmark`.
pub fn render_csv(kind: PlotKind, csv_text: &str) -> Result<String> {
    match kind {
        PlotKind::Trajectory => {
            let table = Table::read(csv_text.as_bytes())?;
            let mut series = Vec::new();
            for prefix in ["q", "u"] {
                for i in 1.. {
                    let name = format!("{prefix}{i}");
                    if table.column_index(&name).is_none() {
                        break;
                    }
                    series.push(Series {
                        points: columns(&table, "t", &name)?,
                        id: name,
                        dashed: prefix == "u",
                    });
                }
            }
            if series.is_empty() {
                return Err(Error::InvalidCsv("no q or u columns".into()));
            }
            let axes = Axes {
                title: "Flat trajectory".into(),
                x_label: "t [s]".into(),
                y_label: "q [rad], u".into(),
                log: false,
                equal_aspect: false,
            };
            render(&axes, &series)
        }
        PlotKind::Rollout => {
            let table = Table::read(csv_text.as_bytes())?;
            let series = vec![
                Series {
                    id: "reference".into(),
                    points: columns(&table, "rx_ref", "ry_ref")?,
                    dashed: true,
                },
                Series {
                    id: "simulated".into(),
                    points: columns(&table, "rx", "ry")?,
                    dashed: false,
                },
            ];
            let axes = Axes {
                title: "Tip path".into(),
                x_label: "x [m]".into(),
                y_label: "y [m]".into(),
                log: false,
                equal_aspect: true,
            };
            render(&axes, &series)
        }
        PlotKind::Timing => {
            let points = read_timing_csv(csv_text.as_bytes())?;
            let lo = points.iter().map(|p| p.dt).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p.dt).fold(0.0, f64::max);
            let series = vec![
                Series {
                    id: "t_avg".into(),
                    points: points.iter().map(|p| (p.dt, p.t_avg)).collect(),
                    dashed: false,
                },
                Series {
                    id: "realtime".into(),
                    points: vec![(lo, lo), (hi, hi)],
                    dashed: true,
                },
            ];
            let axes = Axes {
                title: "Iteration time vs timestep".into(),
                x_label: "dt [s]".into(),
                y_label: "t_avg [s]".into(),
                log: true,
                equal_aspect: false,
            };
            render(&axes, &series)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_kind() {
        assert!("histogram".parse::<PlotKind>().is_err());
        assert_eq!("timing".parse::<PlotKind>().unwrap(), PlotKind::Timing);
    }

    #[test]
    fn rollout_has_both_paths() {
        let csv = "t,q1,q2,qd1,qd2,rx,ry,rx_ref,ry_ref,err\n0,1,1,0,0,0.2,0.1,0.2,0.1,0\n0.01,1,1,0,0,0.21,0.1,0.2,0.11,0.01\n";
        let svg = render_csv(PlotKind::Rollout, csv).unwrap();
        assert!(svg.contains(r#"id="reference""#) && svg.contains(r#"id="simulated""#));
    }

    #[test]
    fn timing_has_diagonal() {
        let csv = "dt,t_avg,speedup\n0.0001,3e-6,33\n0.001,3.2e-6,312\n";
        let svg = render_csv(PlotKind::Timing, csv).unwrap();
        assert!(svg.contains(r#"id="t_avg""#) && svg.contains(r#"id="realtime""#));
    }

    #[test]
    fn empty_and_malformed() {
        assert!(render_csv(PlotKind::Trajectory, "").is_err());
        assert!(render_csv(PlotKind::Rollout, "t,q1\n0,1\n").is_err());
        assert!(render_csv(PlotKind::Timing, "dt,t_avg,speedup\n0,1,1\n").is_err());
    }
}
