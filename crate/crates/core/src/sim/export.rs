//! CSV trajectory logs and flat summary records.

use std::io::Write;

use serde::Serialize;

use super::{SummaryMetrics, Trajectory};

pub const TRAJECTORY_COLUMNS: [&str; 13] = [
    "t", "s_m", "x", "y", "v_m", "phi_m_deg", "r", "q_deg", "theta_m_deg", "q_dot", "q_prime", "k_m", "a_m",
];

pub fn write_trajectory_csv<W: Write>(out: W, trajectory: &Trajectory) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_COLUMNS)?;
    for p in &trajectory.samples {
        let row = [
            p.t,
            p.s_m,
            p.pos.x,
            p.pos.y,
            p.v_m,
            p.phi_m.to_degrees(),
            p.r,
            p.q.to_degrees(),
            p.theta_m.to_degrees(),
            p.q_dot,
            p.q_prime,
            p.k_m,
            p.a_m,
        ];
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SummaryRecord<'a> {
    #[serde(flatten)]
    metrics: &'a SummaryMetrics,
    terminal_q_deg: f64,
    terminal_phi_deg: f64,
}

/// Flat `key = value` record of a run summary.
pub fn summary_record(summary: &SummaryMetrics) -> String {
    let record = SummaryRecord {
        metrics: summary,
        terminal_q_deg: summary.terminal_q.to_degrees(),
        terminal_phi_deg: summary.terminal_phi.to_degrees(),
    };
    toml::to_string(&record).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Termination, TrajectorySample};

    #[test]
    fn header_and_row_count() {
        let traj = Trajectory {
            samples: vec![TrajectorySample::default(); 3],
        };
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,s_m,x,y,v_m,phi_m_deg,r,q_deg,theta_m_deg,q_dot,q_prime,k_m,a_m");
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn summary_is_flat() {
        let m = crate::sim::summarize(&Trajectory::default(), Termination::Horizon);
        let text = summary_record(&m);
        assert!(text.contains("terminated = \"horizon\""));
        assert!(!text.contains('['));
    }
}
