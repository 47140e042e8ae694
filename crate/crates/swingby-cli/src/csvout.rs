//! Long-format CSV export of a sweep table: one row per evaluated cell,
//! baselines first, UTF-8 with LF endings. Numbers are written in Rust's
//! shortest round-trip scientific notation, so a reload recovers the exact
//! binary values.

use std::io::Write;
use std::path::Path;

use swingby_core::maneuver::ManeuverKind;

use crate::sweep::{SweepCell, SweepTable};

pub const CSV_HEADER: &str = "planet,kind,psi_deg,altitude_km,signed_ld,aoa_deg,bank_deg,\
status,voe_km2_s2,turn_angle_deg,tof_band_s,actual_peri_alt_km,actual_psi_deg,delta_v_km_s,\
voe_contrib_pct,delta_contrib_pct";

pub fn kind_name(kind: ManeuverKind) -> &'static str {
    match kind {
        ManeuverKind::Gam => "gam",
        ManeuverKind::Agam => "agam",
        ManeuverKind::Pagam => "pagam",
    }
}

fn push_number(row: &mut String, value: f64) {
    row.push(',');
    row.push_str(&format!("{value:e}"));
}

fn push_optional(row: &mut String, value: Option<f64>) {
    match value {
        Some(v) => push_number(row, v),
        None => row.push(','),
    }
}

fn cell_row(planet: &str, cell: &SweepCell) -> String {
    let mut row = String::with_capacity(160);
    row.push_str(planet);
    row.push(',');
    row.push_str(kind_name(cell.kind));
    push_number(&mut row, cell.psi_deg);
    push_number(&mut row, cell.altitude_km);
    push_number(&mut row, cell.signed_ld);
    push_number(&mut row, cell.aoa_deg);
    push_number(&mut row, cell.bank_deg);
    row.push(',');
    row.push_str(&cell.status.to_string());

    // Only a clean pass carries measurements into the export; flagged cells
    // keep the metric columns empty.
    let exported = if cell.status == swingby_core::maneuver::ManeuverStatus::Ok {
        cell.metrics
    } else {
        None
    };
    match exported {
        Some(m) => {
            push_number(&mut row, m.voe_km2_s2);
            push_number(&mut row, m.turn_angle_deg);
            push_number(&mut row, m.tof_band_s);
            push_number(&mut row, m.actual_pericenter_altitude_km);
            push_number(&mut row, m.actual_approach_angle_deg);
            push_number(&mut row, m.delta_v_km_s);
            push_optional(&mut row, cell.voe_contrib_pct);
            push_optional(&mut row, cell.delta_contrib_pct);
        }
        None => row.push_str(",,,,,,,,"),
    }
    row
}

/// The whole table as CSV text.
pub fn table_to_csv(planet: &str, table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for cell in table.rows() {
        out.push_str(&cell_row(planet, cell));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, planet: &str, table: &SweepTable) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(table_to_csv(planet, table).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use swingby_core::maneuver::{ManeuverMetrics, ManeuverStatus};

    fn metrics() -> ManeuverMetrics {
        ManeuverMetrics {
            voe_km2_s2: -202.25,
            turn_angle_deg: 83.5,
            tof_band_s: 850.25,
            actual_pericenter_altitude_km: 249.75,
            actual_approach_angle_deg: 91.25,
            pericenter_altitude_deviation_km: -0.25,
            approach_angle_deviation_deg: 1.25,
            delta_v_km_s: 0.0,
        }
    }

    fn ok_cell() -> SweepCell {
        SweepCell {
            kind: ManeuverKind::Agam,
            psi_deg: 90.0,
            altitude_km: 250.0,
            signed_ld: -1.5,
            aoa_deg: 9.5,
            bank_deg: 180.0,
            status: ManeuverStatus::Ok,
            metrics: Some(metrics()),
            voe_contrib_pct: Some(12.5),
            delta_contrib_pct: None,
            failure: None,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let table = SweepTable {
            baselines: vec![],
            cells: vec![],
        };
        let text = table_to_csv("venus", &table);
        assert_eq!(text, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn single_cell_gives_two_lines_and_full_metrics() {
        let table = SweepTable {
            baselines: vec![],
            cells: vec![ok_cell()],
        };
        let text = table_to_csv("venus", &table);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "venus,agam,9e1,2.5e2,-1.5e0,9.5e0,1.8e2,Ok,-2.0225e2,8.35e1,8.5025e2,2.4975e2,\
             9.125e1,0e0,1.25e1,"
        );
        assert!(!text.contains('\r'), "LF endings only");
    }

    #[test]
    fn flagged_cells_leave_metric_columns_empty() {
        let mut cell = ok_cell();
        cell.status = ManeuverStatus::BelowBand;
        let table = SweepTable {
            baselines: vec![],
            cells: vec![cell],
        };
        let text = table_to_csv("venus", &table);
        let row = text.lines().nth(1).unwrap();
        assert!(row.contains(",BelowBand,,,,,,,,"), "got: {row}");
        assert_eq!(row.matches(',').count(), CSV_HEADER.matches(',').count());
    }

    #[test]
    fn numbers_round_trip_exactly() {
        let table = SweepTable {
            baselines: vec![],
            cells: vec![ok_cell()],
        };
        let text = table_to_csv("venus", &table);
        let row = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[8].parse::<f64>().unwrap(), -202.25);
        assert_eq!(fields[10].parse::<f64>().unwrap(), 850.25);
        assert_eq!(fields[14].parse::<f64>().unwrap(), 12.5);
    }
}
