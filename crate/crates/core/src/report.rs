//! Verification against the reference tables, closed-form reports, and the
//! CSV series behind the profile, capture and trajectory plots.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::capture::{capture_ratio, capture_region_analytic, ManeuverLimit};
use crate::closed_form::{
    curvature_bound, curvature_increment, flight_path_length, max_relative_distance, profile_samples,
    terminal_impact_angle, ClosedFormInputs,
};
use crate::error::{GuidanceError, Result};
use crate::kinematics::GuidanceParams;
use crate::sim::{par_map, simulate_time_domain, SimConfig, SummaryMetrics};
use crate::tables::{all_cases, Quantity, ReferenceCase};

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error(transparent)]
    Guidance(#[from] GuidanceError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative, for the analytic increment and max distance.
    pub analytic_rel: f64,
    /// Absolute metres, for the analytic flight path.
    pub analytic_path: f64,
    pub sim_path: f64,
    pub sim_increment: f64,
    pub sim_distance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic_rel: 5e-6,
            analytic_path: 0.05,
            sim_path: 1.0,
            sim_increment: 1e-4,
            sim_distance: 0.5,
        }
    }
}

impl Tolerances {
    pub fn zero() -> Self {
        Self {
            analytic_rel: 0.0,
            analytic_path: 0.0,
            sim_path: 0.0,
            sim_increment: 0.0,
            sim_distance: 0.0,
        }
    }
}

/// Half a unit in the sixth significant figure, relative. Analytic cells
/// within this of the tabulated value pass regardless of the tolerances.
pub const PRINT_PRECISION_REL: f64 = 5e-6;

pub fn matches_print_precision(value: f64, reference: f64) -> bool {
    (value - reference).abs() <= PRINT_PRECISION_REL * reference.abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub computed: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub pass: bool,
    /// Set when the computation itself failed.
    pub failure: Option<String>,
}

impl Comparison {
    fn new(computed: Result<f64>, reference: f64, pass: impl Fn(f64, f64) -> bool) -> Self {
        match computed {
            Ok(computed) => {
                let abs_error = (computed - reference).abs();
                Self {
                    computed,
                    reference,
                    abs_error,
                    rel_error: abs_error / reference.abs(),
                    pass: computed.is_finite() && pass(computed, abs_error),
                    failure: None,
                }
            }
            Err(e) => Self {
                computed: f64::NAN,
                reference,
                abs_error: f64::NAN,
                rel_error: f64::NAN,
                pass: false,
                failure: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRow {
    pub table: &'static str,
    pub nav_gain: f64,
    pub theta0_deg: f64,
    pub quantity: &'static str,
    pub analytic: Comparison,
    pub simulation: Comparison,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub tolerances: Tolerances,
    pub rows: Vec<VerificationRow>,
}

impl VerificationReport {
    pub fn comparisons(&self) -> impl Iterator<Item = &Comparison> {
        self.rows.iter().flat_map(|r| [&r.analytic, &r.simulation])
    }

    pub fn all_pass(&self) -> bool {
        self.comparisons().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.comparisons().filter(|c| !c.pass).count()
    }

    /// Plain-text pass/fail matrix, one line per row.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mark = |c: &Comparison| if c.pass { "pass" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<14} {:>4} {:>7} {:<24} {:>16} {:>12} {:>5} {:>16} {:>12} {:>5}",
            "table", "N", "theta0", "quantity", "analytic", "ref", "", "simulated", "ref", ""
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<14} {:>4} {:>7} {:<24} {:>16.6} {:>12} {:>5} {:>16.6} {:>12} {:>5}",
                r.table,
                r.nav_gain,
                r.theta0_deg,
                r.quantity,
                r.analytic.computed,
                r.analytic.reference,
                mark(&r.analytic),
                r.simulation.computed,
                r.simulation.reference,
                mark(&r.simulation),
            );
        }
        let total = 2 * self.rows.len();
        let _ = writeln!(out, "{} of {} comparisons pass", total - self.failures(), total);
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "table",
            "nav_gain",
            "theta0_deg",
            "quantity",
            "analytic",
            "analytic_ref",
            "analytic_abs_error",
            "analytic_rel_error",
            "analytic_pass",
            "simulated",
            "simulated_ref",
            "simulated_abs_error",
            "simulated_rel_error",
            "simulated_pass",
        ])?;
        for r in &self.rows {
            let mut rec = vec![
                r.table.to_string(),
                r.nav_gain.to_string(),
                r.theta0_deg.to_string(),
                r.quantity.to_string(),
            ];
            for c in [&r.analytic, &r.simulation] {
                rec.extend([
                    c.computed.to_string(),
                    c.reference.to_string(),
                    c.abs_error.to_string(),
                    c.rel_error.to_string(),
                    c.pass.to_string(),
                ]);
            }
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Analytic value of one tabulated quantity.
pub fn analytic_value(case: &ReferenceCase, q: Quantity) -> Result<f64> {
    let cfg = reference_config(case)?;
    let inputs = cfg.closed_form_inputs()?;
    match q {
        Quantity::FlightPath => flight_path_length(&inputs),
        Quantity::CurvatureIncrement => Ok(curvature_increment(&inputs)),
        Quantity::MaxDistance => max_relative_distance(&inputs),
    }
}

fn simulated_value(summary: &SummaryMetrics, q: Quantity) -> f64 {
    match q {
        Quantity::FlightPath => summary.flight_path,
        Quantity::CurvatureIncrement => summary.curvature_increment,
        Quantity::MaxDistance => summary.max_r,
    }
}

/// The reference scenario for a tabulated case: time domain, drag 0.1 m/s^2.
pub fn reference_config(case: &ReferenceCase) -> Result<SimConfig> {
    let cfg = SimConfig::reference(case.theta0_deg.to_radians(), GuidanceParams::new(case.nav_gain)?);
    cfg.validate()?;
    Ok(cfg)
}

/// Recomputes every tabulated cell analytically and by simulation.
pub fn verify_tables(tol: &Tolerances, workers: Option<usize>) -> VerificationReport {
    let cases: Vec<_> = all_cases().collect();
    let runs = par_map(&cases, workers, |(_, case)| {
        reference_config(case)
            .and_then(|cfg| simulate_time_domain(&cfg))
            .and_then(|out| out.require_intercept())
            .map(|out| out.summary)
    });

    let mut rows = Vec::with_capacity(3 * cases.len());
    for ((table, case), run) in cases.iter().zip(&runs) {
        for q in Quantity::ALL {
            let reference = case.theory(q);
            let analytic = Comparison::new(analytic_value(case, q), reference, |v, abs| {
                let within = match q {
                    Quantity::FlightPath => abs <= tol.analytic_path,
                    _ => abs <= tol.analytic_rel * reference.abs(),
                };
                within || matches_print_precision(v, reference)
            });
            let sim_tol = match q {
                Quantity::FlightPath => tol.sim_path,
                Quantity::CurvatureIncrement => tol.sim_increment,
                Quantity::MaxDistance => tol.sim_distance,
            };
            let computed = run.clone().map(|s| simulated_value(&s, q));
            let simulation = Comparison::new(computed, case.simulation(q), |_, abs| abs <= sim_tol);
            rows.push(VerificationRow {
                table,
                nav_gain: case.nav_gain,
                theta0_deg: case.theta0_deg,
                quantity: q.label(),
                analytic,
                simulation,
            });
        }
    }
    VerificationReport {
        tolerances: *tol,
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub nav_gain: f64,
    pub theta0_deg: f64,
    pub r0: f64,
    pub q0_deg: f64,
    pub max_distance: f64,
    /// For `N <= 2` this is the value at `cutoff_r`.
    pub max_curvature: f64,
    pub curvature_unbounded: bool,
    pub cutoff_r: f64,
    pub curvature_increment: f64,
    pub flight_path: f64,
    pub terminal_angle_deg: f64,
}

impl ClosedFormReport {
    pub fn compute(inputs: &ClosedFormInputs, cutoff_r: f64) -> Result<Self> {
        let bound = curvature_bound(inputs, cutoff_r)?;
        Ok(Self {
            nav_gain: inputs.n(),
            theta0_deg: inputs.theta_m0.to_degrees(),
            r0: inputs.r0,
            q0_deg: inputs.q0.to_degrees(),
            max_distance: max_relative_distance(inputs)?,
            max_curvature: bound.value,
            curvature_unbounded: bound.unbounded,
            cutoff_r,
            curvature_increment: curvature_increment(inputs),
            flight_path: flight_path_length(inputs)?,
            terminal_angle_deg: terminal_impact_angle(inputs)?.to_degrees(),
        })
    }

    pub fn record(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }
}

/// Closed-form profiles against normalised range for each gain.
pub fn write_profile_csv<W: Write>(
    out: W,
    families: &[ClosedFormInputs],
    count: usize,
) -> std::result::Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["nav_gain", "theta0_deg", "branch", "r_over_r0", "q_prime", "r_prime", "theta_m_deg", "k_m"])
        ?;
    for inputs in families {
        for (branch, p) in profile_samples(inputs, count)? {
            w.write_record([
                inputs.n().to_string(),
                inputs.theta_m0.to_degrees().to_string(),
                branch.as_str().to_string(),
                (p.r / inputs.r0).to_string(),
                p.q_prime.to_string(),
                p.r_prime.to_string(),
                p.theta_m.to_degrees().to_string(),
                p.k_m.to_string(),
            ])
            ?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Closed-form quantities against the initial leading angle for each gain.
/// Rows where a quantity is undefined carry `NaN`.
pub fn write_initial_angle_csv<W: Write>(
    out: W,
    r0: f64,
    gains: &[GuidanceParams],
    theta0_deg: &[f64],
    cutoff_r: f64,
) -> std::result::Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "nav_gain",
        "theta0_deg",
        "max_distance",
        "max_curvature",
        "curvature_unbounded",
        "curvature_increment",
        "flight_path",
    ])
    ?;
    for &gain in gains {
        for &deg in theta0_deg {
            let inputs = ClosedFormInputs::new(r0, deg.to_radians(), 0.0, gain)?;
            let bound = curvature_bound(&inputs, cutoff_r).ok();
            w.write_record([
                gain.nav_gain.to_string(),
                deg.to_string(),
                max_relative_distance(&inputs).unwrap_or(f64::NAN).to_string(),
                bound.map_or(f64::NAN, |b| b.value).to_string(),
                bound.is_some_and(|b| b.unbounded).to_string(),
                curvature_increment(&inputs).to_string(),
                flight_path_length(&inputs).unwrap_or(f64::NAN).to_string(),
            ])
            ?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row of an analytic capture-boundary sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub r0: f64,
    pub v_max: f64,
    pub capture_ratio: f64,
    pub full: bool,
    pub forward_deg: f64,
    pub rear_deg: f64,
}

/// Analytic capture boundaries for each `(r0, v_max)` pair.
pub fn capture_boundaries(pairs: &[(f64, f64)], alpha: f64, gain: GuidanceParams) -> Result<Vec<BoundaryRow>> {
    pairs
        .iter()
        .map(|&(r0, v_max)| {
            let limit = ManeuverLimit::new(alpha, v_max)?;
            let region = capture_region_analytic(r0, &limit, gain)?;
            let deg = |x: Option<f64>| x.map_or(f64::NAN, f64::to_degrees);
            Ok(BoundaryRow {
                r0,
                v_max,
                capture_ratio: capture_ratio(r0, &limit, gain),
                full: region.full,
                forward_deg: deg(region.forward_boundary()),
                rear_deg: deg(region.rear_boundary()),
            })
        })
        .collect()
}

pub fn write_boundary_csv<W: Write>(out: W, rows: &[BoundaryRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r0", "v_max", "capture_ratio", "region", "forward_deg", "rear_deg"])?;
    for r in rows {
        w.write_record([
            r.r0.to_string(),
            r.v_max.to_string(),
            r.capture_ratio.to_string(),
            if r.full { "full" } else { "partial" }.to_string(),
            r.forward_deg.to_string(),
            r.rear_deg.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
