//! Deterministic SVG heatmaps of sweep metrics: altitude on x, signed L/D
//! on y, one filled rectangle per cell.
//!
//! Colors follow a rainbow scale defined as an HSV hue sweep from 270
//! degrees (violet, minimum) to 0 degrees (red, maximum), linear in the
//! metric over cleanly completed cells; every other cell is white. All
//! geometry is integer and all numbers are formatted with Rust's default
//! shortest round-trip notation, so identical input renders identical bytes.

use swingby_core::maneuver::{ManeuverKind, ManeuverStatus};

use crate::csvout::kind_name;
use crate::sweep::{SweepCell, SweepTable};

/// A sweep metric that can be mapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Voe,
    TurnAngle,
    TofBand,
    ActualPericenterAltitude,
    ActualApproachAngle,
    DeltaV,
    VoeContribution,
    DeltaContribution,
}

#[derive(Debug, thiserror::Error)]
#[error("unknown metric {0:?}; expected one of {names:?}", names = Metric::ALL.map(|m| m.column_name()))]
pub struct UnknownMetric(pub String);

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Voe,
        Metric::TurnAngle,
        Metric::TofBand,
        Metric::ActualPericenterAltitude,
        Metric::ActualApproachAngle,
        Metric::DeltaV,
        Metric::VoeContribution,
        Metric::DeltaContribution,
    ];

    /// The matching results.csv column.
    pub fn column_name(self) -> &'static str {
        match self {
            Metric::Voe => "voe_km2_s2",
            Metric::TurnAngle => "turn_angle_deg",
            Metric::TofBand => "tof_band_s",
            Metric::ActualPericenterAltitude => "actual_peri_alt_km",
            Metric::ActualApproachAngle => "actual_psi_deg",
            Metric::DeltaV => "delta_v_km_s",
            Metric::VoeContribution => "voe_contrib_pct",
            Metric::DeltaContribution => "delta_contrib_pct",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, UnknownMetric> {
        Metric::ALL
            .into_iter()
            .find(|m| m.column_name() == name)
            .ok_or_else(|| UnknownMetric(name.to_string()))
    }

    /// The plotted value of a cell; `None` renders white.
    fn extract(self, cell: &SweepCell) -> Option<f64> {
        if cell.status != ManeuverStatus::Ok {
            return None;
        }
        let value = match self {
            Metric::Voe => cell.metrics?.voe_km2_s2,
            Metric::TurnAngle => cell.metrics?.turn_angle_deg,
            Metric::TofBand => cell.metrics?.tof_band_s,
            Metric::ActualPericenterAltitude => cell.metrics?.actual_pericenter_altitude_km,
            Metric::ActualApproachAngle => cell.metrics?.actual_approach_angle_deg,
            Metric::DeltaV => cell.metrics?.delta_v_km_s,
            Metric::VoeContribution => cell.voe_contrib_pct?,
            Metric::DeltaContribution => cell.delta_contrib_pct?,
        };
        value.is_finite().then_some(value)
    }
}

/// File name under the sweep output directory.
pub fn figure_filename(metric: Metric, psi_deg: f64, kind: ManeuverKind) -> String {
    format!("heatmap_{}_{}_{}.svg", metric.column_name(), psi_deg, kind_name(kind))
}

/// Hue in degrees to an sRGB hex string, at full saturation and value.
fn hue_to_hex(hue: f64) -> String {
    let h = hue.rem_euclid(360.0) / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let to_byte = |c: f64| (c * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", to_byte(r), to_byte(g), to_byte(b))
}

/// Violet (min) to red (max).
fn color_for(t: f64) -> String {
    hue_to_hex(270.0 * (1.0 - t.clamp(0.0, 1.0)))
}

pub struct Rendered {
    pub svg: String,
    /// Normalization range over plotted cells; `None` when nothing plotted.
    pub min: Option<f64>,
    pub max: Option<f64>,
}

/// Renders one (metric, kind, psi) selection of the table. The axis vectors
/// must be the plan's grids; cells are located by exact coordinate match.
pub fn render_heatmap(
    table: &SweepTable,
    altitudes_km: &[f64],
    ld_values: &[f64],
    metric: Metric,
    kind: ManeuverKind,
    psi_deg: f64,
) -> Rendered {
    let ncols = altitudes_km.len().max(1);
    let nrows = ld_values.len().max(1);
    let cw = (640 / ncols).clamp(8, 40);
    let ch = (400 / nrows).clamp(8, 24);
    let (ml, mt, mr, mb) = (80usize, 50usize, 120usize, 55usize);
    let grid_w = ncols * cw;
    let grid_h = nrows * ch;
    let width = ml + grid_w + mr;
    let height = mt + grid_h + mb;

    // Values laid out row-major by (ld index, altitude index).
    let mut values: Vec<Option<f64>> = vec![None; ncols * nrows];
    for cell in &table.cells {
        if cell.kind != kind || cell.psi_deg != psi_deg {
            continue;
        }
        let col = altitudes_km.iter().position(|&a| a == cell.altitude_km);
        let row = ld_values.iter().position(|&l| l == cell.signed_ld);
        if let (Some(col), Some(row)) = (col, row) {
            values[row * ncols + col] = metric.extract(cell);
        }
    }

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values.iter().flatten() {
        min = min.min(*v);
        max = max.max(*v);
    }
    let range = (min.is_finite() && max.is_finite()).then_some((min, max));

    let t_of = |v: f64| -> f64 {
        match range {
            Some((lo, hi)) if hi > lo => (v - lo) / (hi - lo),
            _ => 0.0,
        }
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#fbfbfb\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{} | {} | psi {}</text>\n",
        width / 2,
        metric.column_name(),
        kind_name(kind),
        psi_deg
    ));

    // Cells: L/D increases upward.
    for (row, _) in ld_values.iter().enumerate() {
        for (col, _) in altitudes_km.iter().enumerate() {
            let x = ml + col * cw;
            let y = mt + (nrows - 1 - row) * ch;
            let fill = match values[row * ncols + col] {
                Some(v) => color_for(t_of(v)),
                None => "#ffffff".to_string(),
            };
            svg.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{cw}\" height=\"{ch}\" fill=\"{fill}\" \
                 stroke=\"#d0d0d0\" stroke-width=\"1\"/>\n"
            ));
        }
    }

    // Axes: end labels plus titles.
    let label = |svg: &mut String, x: usize, y: usize, anchor: &str, text: String| {
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"{anchor}\">{text}</text>\n"
        ));
    };
    if let (Some(first), Some(last)) = (altitudes_km.first(), altitudes_km.last()) {
        label(&mut svg, ml + cw / 2, mt + grid_h + 18, "middle", format!("{first}"));
        label(&mut svg, ml + grid_w - cw / 2, mt + grid_h + 18, "middle", format!("{last}"));
    }
    label(
        &mut svg,
        ml + grid_w / 2,
        mt + grid_h + 40,
        "middle",
        "projected pericenter altitude, km".to_string(),
    );
    if let (Some(first), Some(last)) = (ld_values.first(), ld_values.last()) {
        label(&mut svg, ml - 8, mt + grid_h - ch / 2 + 4, "end", format!("{first}"));
        label(&mut svg, ml - 8, mt + ch / 2 + 4, "end", format!("{last}"));
    }
    label(&mut svg, ml - 8, mt - 12, "end", "signed L/D".to_string());

    // Color bar, max (red) on top.
    let bar_x = ml + grid_w + 30;
    let bar_w = 18;
    let segments = 64usize;
    for i in 0..segments {
        let t = 1.0 - i as f64 / (segments - 1) as f64;
        let seg_y = mt + i * grid_h / segments;
        let seg_h = mt + (i + 1) * grid_h / segments - seg_y;
        svg.push_str(&format!(
            "<rect x=\"{bar_x}\" y=\"{seg_y}\" width=\"{bar_w}\" height=\"{seg_h}\" \
             fill=\"{}\"/>\n",
            color_for(t)
        ));
    }
    if let Some((lo, hi)) = range {
        label(&mut svg, bar_x + bar_w + 6, mt + 12, "start", format!("{hi:.4e}"));
        label(&mut svg, bar_x + bar_w + 6, mt + grid_h, "start", format!("{lo:.4e}"));
    }
    svg.push_str("</svg>\n");

    Rendered {
        svg,
        min: range.map(|(lo, _)| lo),
        max: range.map(|(_, hi)| hi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use swingby_core::maneuver::ManeuverMetrics;

    fn metrics(voe: f64) -> ManeuverMetrics {
        ManeuverMetrics {
            voe_km2_s2: voe,
            turn_angle_deg: 80.0,
            tof_band_s: 500.0,
            actual_pericenter_altitude_km: 250.0,
            actual_approach_angle_deg: 90.0,
            pericenter_altitude_deviation_km: 0.0,
            approach_angle_deviation_deg: 0.0,
            delta_v_km_s: 0.0,
        }
    }

    fn cell(altitude: f64, ld: f64, status: ManeuverStatus, voe: f64) -> SweepCell {
        SweepCell {
            kind: ManeuverKind::Agam,
            psi_deg: 270.0,
            altitude_km: altitude,
            signed_ld: ld,
            aoa_deg: 5.0,
            bank_deg: 0.0,
            status,
            metrics: Some(metrics(voe)),
            voe_contrib_pct: None,
            delta_contrib_pct: None,
            failure: None,
        }
    }

    fn grid_table(statuses: [[ManeuverStatus; 2]; 2], voes: [[f64; 2]; 2]) -> SweepTable {
        let mut cells = Vec::new();
        for (row, ld) in [-1.0, 1.0].into_iter().enumerate() {
            for (col, altitude) in [240.0, 250.0].into_iter().enumerate() {
                cells.push(cell(altitude, ld, statuses[row][col], voes[row][col]));
            }
        }
        SweepTable {
            baselines: vec![],
            cells,
        }
    }

    const OK: ManeuverStatus = ManeuverStatus::Ok;

    #[test]
    fn rendering_is_deterministic() {
        let table = grid_table([[OK, OK], [OK, OK]], [[1.0, 2.0], [3.0, 4.0]]);
        let a = render_heatmap(&table, &[240.0, 250.0], &[-1.0, 1.0], Metric::Voe,
            ManeuverKind::Agam, 270.0);
        let b = render_heatmap(&table, &[240.0, 250.0], &[-1.0, 1.0], Metric::Voe,
            ManeuverKind::Agam, 270.0);
        assert_eq!(a.svg, b.svg);
        assert_eq!(a.min, Some(1.0));
        assert_eq!(a.max, Some(4.0));
        // Extremes get the scale's end colors.
        assert!(a.svg.contains(&color_for(0.0)));
        assert!(a.svg.contains(&color_for(1.0)));
    }

    #[test]
    fn uniform_values_render_a_single_hue() {
        let table = grid_table([[OK, OK], [OK, OK]], [[5.0; 2]; 2]);
        let r = render_heatmap(&table, &[240.0, 250.0], &[-1.0, 1.0], Metric::Voe,
            ManeuverKind::Agam, 270.0);
        assert_eq!(r.min, r.max);
        let violet = color_for(0.0);
        let cell_rects = r.svg.matches(&violet).count();
        // Four cells plus the bottom color-bar segment share the hue.
        assert!(cell_rects >= 4, "expected uniform violet cells");
        assert_eq!(r.svg.matches("#ffffff").count(), 0);
    }

    #[test]
    fn flagged_cells_are_white() {
        let table = grid_table(
            [[OK, ManeuverStatus::Collision], [OK, OK]],
            [[1.0, 2.0], [3.0, 4.0]],
        );
        let r = render_heatmap(&table, &[240.0, 250.0], &[-1.0, 1.0], Metric::Voe,
            ManeuverKind::Agam, 270.0);
        assert_eq!(r.svg.matches("#ffffff").count(), 1);
        // The flagged value does not shape the scale.
        assert_eq!(r.max, Some(4.0));
        assert_eq!(r.min, Some(1.0));
    }

    #[test]
    fn metric_names_round_trip() {
        for metric in Metric::ALL {
            assert_eq!(Metric::from_name(metric.column_name()).unwrap(), metric);
        }
        assert!(Metric::from_name("vorticity").is_err());
    }

    #[test]
    fn filenames_follow_the_documented_pattern() {
        assert_eq!(
            figure_filename(Metric::Voe, 270.0, ManeuverKind::Pagam),
            "heatmap_voe_km2_s2_270_pagam.svg"
        );
    }

    #[test]
    fn hue_endpoints_are_violet_and_red() {
        assert_eq!(color_for(0.0), "#8000ff");
        assert_eq!(color_for(1.0), "#ff0000");
    }
}
