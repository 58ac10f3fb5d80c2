//! Experiment result tables, CSV emission, and static SVG sweep plots.
//!
//! CSV schema: `param,empirical_nats,predicted_nats,discrepancy_nats,flags`
//! with UTF-8 text, LF line endings and 12 significant digits. Infinite
//! information values are written as the literal token `inf-flag`; a missing
//! prediction leaves its cells empty. No NaN is ever emitted.

use crate::error::Result;
use crate::prob::InfoValue;
use std::fmt::Write as _;
use std::path::Path;

/// One sweep point.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub param: String,
    pub empirical: InfoValue,
    pub predicted: Option<f64>,
    pub flags: Vec<String>,
}

impl ReportRow {
    pub fn new(param: impl Into<String>, empirical: InfoValue, predicted: Option<f64>) -> Self {
        Self {
            param: param.into(),
            empirical,
            predicted,
            flags: Vec::new(),
        }
    }

    pub fn with_flag(mut self, flag: impl Into<String>) -> Self {
        self.flags.push(flag.into());
        self
    }

    /// empirical - predicted, when both are available and finite.
    pub fn discrepancy(&self) -> Option<f64> {
        match (self.empirical, self.predicted) {
            (InfoValue::Finite(e), Some(p)) => Some(e - p),
            _ => None,
        }
    }
}

/// Run metadata. Kept out of the CSV so identical configurations produce
/// byte-identical files.
#[derive(Debug, Clone, Default)]
pub struct ReportMeta {
    pub seed: u64,
    pub samples: usize,
    pub mesh_cells: usize,
    pub wall_ms: u128,
}

/// Named scalar results and sweep tables ready for emission.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub title: String,
    pub rows: Vec<ReportRow>,
    pub meta: ReportMeta,
}

fn fmt_sig(v: f64) -> String {
    debug_assert!(v.is_finite());
    format!("{v:.11e}")
}

impl ExperimentReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            rows: Vec::new(),
            meta: ReportMeta::default(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,empirical_nats,predicted_nats,discrepancy_nats,flags\n");
        for row in &self.rows {
            let empirical = match row.empirical {
                InfoValue::Finite(v) => fmt_sig(v),
                InfoValue::Infinite => "inf-flag".to_string(),
            };
            let predicted = match row.predicted {
                Some(p) => fmt_sig(p),
                None => String::new(),
            };
            let discrepancy = match (row.empirical, row.predicted) {
                (InfoValue::Finite(e), Some(p)) => fmt_sig(e - p),
                (InfoValue::Infinite, Some(_)) => "inf-flag".to_string(),
                (_, None) => String::new(),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.param,
                empirical,
                predicted,
                discrepancy,
                row.flags.join(";")
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Static scatter-plus-dashed-prediction panel of the sweep.
    pub fn write_svg(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_svg())?;
        Ok(())
    }

    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 420.0;
        const ML: f64 = 60.0;
        const MR: f64 = 20.0;
        const MT: f64 = 40.0;
        const MB: f64 = 50.0;

        let points: Vec<(f64, f64, Option<f64>)> = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let x = r.param.parse::<f64>().unwrap_or(i as f64);
                r.empirical.nats().map(|e| (x, e, r.predicted))
            })
            .collect();

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
        );
        let _ = writeln!(svg, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            W / 2.0,
            self.title
        );

        if !points.is_empty() {
            let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
            let mut ys: Vec<f64> = points.iter().map(|p| p.1).collect();
            ys.extend(points.iter().filter_map(|p| p.2));
            let (xmin, xmax) = bounds(&xs);
            let (ymin, ymax) = bounds(&ys);
            let sx = |x: f64| ML + (x - xmin) / (xmax - xmin).max(1e-12) * (W - ML - MR);
            let sy = |y: f64| H - MB - (y - ymin) / (ymax - ymin).max(1e-12) * (H - MT - MB);

            // axes
            let _ = writeln!(
                svg,
                "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
                H - MB,
                W - MR,
                H - MB
            );
            let _ = writeln!(
                svg,
                "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
                H - MB
            );
            for (label, x, y, anchor) in [
                (format!("{xmin:.3}"), sx(xmin), H - MB + 18.0, "middle"),
                (format!("{xmax:.3}"), sx(xmax), H - MB + 18.0, "middle"),
                (format!("{ymin:.3}"), ML - 6.0, sy(ymin) + 4.0, "end"),
                (format!("{ymax:.3}"), ML - 6.0, sy(ymax) + 4.0, "end"),
            ] {
                let _ = writeln!(
                    svg,
                    "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"{anchor}\">{label}</text>"
                );
            }

            let dashed: Vec<String> = points
                .iter()
                .filter_map(|&(x, _, p)| p.map(|v| format!("{:.2},{:.2}", sx(x), sy(v))))
                .collect();
            if dashed.len() >= 2 {
                let _ = writeln!(
                    svg,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"#555\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>",
                    dashed.join(" ")
                );
            }
            for &(x, e, _) in &points {
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"#1f6fb2\"/>",
                    sx(x),
                    sy(e)
                );
            }
        }
        let _ = writeln!(svg, "</svg>");
        svg
    }
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    (lo, hi)
}
