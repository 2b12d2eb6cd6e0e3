//! Minimal self-contained SVG line plots for sweep output. No rendering
//! dependencies; the output is deterministic for a given input.

use crate::experiments::{SweepParameter, SweepRow};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

struct Axis {
    min: f64,
    max: f64,
}

impl Axis {
    fn from_values(values: impl Iterator<Item = f64>) -> Axis {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() || !max.is_finite() {
            return Axis { min: 0.0, max: 1.0 };
        }
        if min == max {
            min -= 1.0;
            max += 1.0;
        }
        Axis { min, max }
    }

    fn ticks(&self, count: usize) -> Vec<f64> {
        (0..=count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / count as f64)
            .collect()
    }
}

fn polyline(points: &[(f64, f64)], colour: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    format!(
        "  <polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

/// Render sweep rows as a self-contained SVG chart with one line per
/// model column present in the rows.
pub fn sweep_plot_svg(parameter: SweepParameter, rows: &[SweepRow]) -> String {
    let x_axis = Axis::from_values(rows.iter().map(|r| r.value));
    let y_axis = Axis::from_values(
        rows.iter()
            .flat_map(|r| [r.proposed_db, r.specular_db].into_iter().flatten()),
    );

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |v: f64| MARGIN_LEFT + (v - x_axis.min) / (x_axis.max - x_axis.min) * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (y_axis.max - v) / (y_axis.max - y_axis.min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_LEFT}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    ));
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM
    ));

    for tick in x_axis.ticks(5) {
        let x = to_x(tick);
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{tick:.2}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 18.0
        ));
    }
    for tick in y_axis.ticks(5) {
        let y = to_y(tick);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{tick:.1}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        match parameter {
            SweepParameter::D1 => "d1 (m)",
            SweepParameter::D2 => "d2 (m)",
            SweepParameter::Theta2 => "theta2 (deg)",
        }
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.2})\">attenuation (dB)</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    let proposed: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.proposed_db.map(|db| (to_x(r.value), to_y(db))))
        .collect();
    if !proposed.is_empty() {
        svg.push_str(&polyline(&proposed, "#1f77b4"));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#1f77b4\">proposed</text>\n",
            WIDTH - MARGIN_RIGHT - 150.0,
            MARGIN_TOP + 14.0
        ));
    }
    let specular: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.specular_db.map(|db| (to_x(r.value), to_y(db))))
        .collect();
    if !specular.is_empty() {
        svg.push_str(&polyline(&specular, "#d62728"));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#d62728\">specular</text>\n",
            WIDTH - MARGIN_RIGHT - 70.0,
            MARGIN_TOP + 14.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}
