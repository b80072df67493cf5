//! `ppn`: scenario runs, closed-form reports, capture sweeps and table checks.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 numeric or run failure.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use ppn_core::capture::{
    self, boundary_record, capture_region_analytic, capture_region_empirical, ManeuverLimit, SweepOptions,
};
use ppn_core::closed_form::ClosedFormInputs;
use ppn_core::config::{Case, DomainChoice, LimitMode, Limits, ScenarioConfig};
use ppn_core::report::{self, ClosedFormReport, Tolerances};
use ppn_core::sim::{self, export, par_map, SimOutcome, Termination};
use ppn_core::{GuidanceError, GuidanceParams};

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Verification(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl From<GuidanceError> for Failure {
    fn from(e: GuidanceError) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<ppn_core::config::ConfigError> for Failure {
    fn from(e: ppn_core::config::ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<report::ExportError> for Failure {
    fn from(e: report::ExportError) -> Self {
        match e {
            report::ExportError::Guidance(g) => g.into(),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(format!("{}: {e}", path.display()))
}

type CliResult<T = ()> = Result<T, Failure>;

/// `lo:hi:step`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Sweep {
    lo: f64,
    hi: f64,
    step: f64,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let [lo, hi, step] = parts[..] else {
            return Err("expected lo:hi:step".into());
        };
        if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
            return Err("need finite lo <= hi and step > 0".into());
        }
        Ok(Self { lo, hi, step })
    }
}

impl Sweep {
    fn values(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

#[derive(Parser)]
#[command(name = "ppn", version, about = "Planar PPN engagement toolkit in the arc-length domain")]
struct Cli {
    /// Worker threads for batch runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every case of a scenario and write trajectory CSVs and summaries.
    Simulate(SimulateArgs),
    /// Closed-form metrics and sampled profiles for each gain and angle.
    ClosedForm(ClosedFormArgs),
    /// Analytic capture boundaries over a range or speed sweep.
    Capture(CaptureArgs),
    /// Recompute both reference tables and print a pass/fail matrix.
    Verify(VerifyArgs),
    /// Write the data series behind the standard plots.
    SweepFigures(FigureArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario file; the reference engagement when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the gain list with a single gain.
    #[arg(long)]
    gain: Option<f64>,
    /// Replace the leading-angle list (repeatable).
    #[arg(long = "theta0-deg", allow_negative_numbers = true)]
    theta0_deg: Vec<f64>,
    /// Drag deceleration, m/s^2.
    #[arg(long)]
    drag: Option<f64>,
    /// Lateral acceleration limit, m/s^2.
    #[arg(long)]
    alpha: Option<f64>,
    /// Time step, s.
    #[arg(long)]
    step: Option<f64>,
    /// Arc-length step, m.
    #[arg(long)]
    arc_step: Option<f64>,
    /// `time`, `arclength` or `both`.
    #[arg(long, value_parser = parse_domain)]
    domain: Option<DomainChoice>,
    /// Print the resolved scenario as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

fn parse_domain(s: &str) -> Result<DomainChoice, String> {
    match s {
        "time" => Ok(DomainChoice::Time),
        "arclength" => Ok(DomainChoice::Arclength),
        "both" => Ok(DomainChoice::Both),
        _ => Err(format!("unknown domain {s:?} (time, arclength, both)")),
    }
}

#[derive(Args)]
struct ClosedFormArgs {
    /// Navigation gain (repeatable).
    #[arg(long, required = true)]
    gain: Vec<f64>,
    /// Initial leading angle, deg (repeatable).
    #[arg(long = "theta0-deg", required = true, allow_negative_numbers = true)]
    theta0_deg: Vec<f64>,
    /// Initial range, m.
    #[arg(long, default_value_t = 20000.0)]
    r0: f64,
    /// Initial LOS angle, deg.
    #[arg(long, default_value_t = -120.0, allow_negative_numbers = true)]
    q0_deg: f64,
    /// Profile samples per branch.
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Range at which curvature is reported when it does not decay (N <= 2).
    #[arg(long, default_value_t = sim::DEFAULT_KILL_RADIUS)]
    cutoff_r: f64,
    /// Write closed_form.toml and profiles.csv here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CaptureArgs {
    /// Lateral acceleration limit, m/s^2.
    #[arg(long)]
    alpha: Option<f64>,
    /// Navigation gain.
    #[arg(long, default_value_t = 3.0)]
    gain: f64,
    /// Missile speed, m/s.
    #[arg(long, default_value_t = 500.0)]
    speed: f64,
    /// Initial range, m.
    #[arg(long, default_value_t = 20000.0)]
    r0: f64,
    /// Sweep the initial range instead, `lo:hi:step` in m.
    #[arg(long, conflicts_with = "v_range")]
    r0_range: Option<Sweep>,
    /// Sweep the speed instead, `lo:hi:step` in m/s.
    #[arg(long)]
    v_range: Option<Sweep>,
    /// Also sweep the leading angle by simulation at the given `r0` and speed.
    #[arg(long)]
    empirical: bool,
    /// Angle step of the empirical sweep, deg.
    #[arg(long, default_value_t = 0.25)]
    resolution_deg: f64,
    /// Write the boundary CSV and summaries here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Multiply every default tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Also write the full comparison as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Lateral acceleration limit for the capture series; skipped when absent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Leading angle of the profile series, deg.
    #[arg(long = "theta0-deg", default_value_t = 60.0, allow_negative_numbers = true)]
    theta0_deg: f64,
    /// Keep every n-th integrator step in trajectory logs.
    #[arg(long, default_value_t = 10)]
    log_every: usize,
}

fn create_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_failure(path, e))
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn simulate(args: SimulateArgs, workers: Option<usize>) -> CliResult {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(g) = args.gain {
        cfg.cases.gains = vec![g];
    }
    if !args.theta0_deg.is_empty() {
        cfg.cases.theta0_deg = Some(args.theta0_deg.clone());
    }
    if let Some(d) = args.drag {
        cfg.engagement.drag = d;
    }
    if let Some(alpha) = args.alpha {
        let limits = cfg.limits.get_or_insert(Limits {
            alpha,
            mode: LimitMode::Acceleration,
            v_max: None,
        });
        limits.alpha = alpha;
    }
    if let Some(h) = args.step {
        cfg.integrator.time_step = h;
    }
    if let Some(h) = args.arc_step {
        cfg.integrator.arc_step = h;
    }
    if let Some(d) = args.domain {
        cfg.integrator.domain = d;
    }
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }

    let cases = cfg.cases()?;
    if args.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    if cases.is_empty() {
        eprintln!("warning: scenario has no cases; nothing to do");
        return Ok(());
    }

    let dir = cfg.output.dir.clone();
    create_dir(&dir)?;
    let runs = par_map(&cases, workers, |case| case.domain.simulate(&case.sim));
    let mut failed = 0;
    for (case, run) in cases.iter().zip(runs) {
        let result = run.map_err(Failure::from).and_then(|out| write_case(case, &out, &dir));
        match result {
            Ok(Termination::Intercept) => println!("{}: intercept", case.stem()),
            Ok(t) => {
                println!("{}: {t}", case.stem());
                failed += 1;
            }
            Err(e) => {
                eprintln!("error: {}: {}", case.stem(), failure_message(&e));
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Numeric(format!("{failed} of {} runs did not intercept", cases.len())));
    }
    Ok(())
}

fn write_case(case: &Case, out: &SimOutcome, dir: &Path) -> CliResult<Termination> {
    let csv = dir.join(format!("{}.csv", case.stem()));
    export::write_trajectory_csv(create(&csv)?, &out.trajectory).map_err(|e| io_failure(&csv, e))?;
    let summary = dir.join(format!("{}.toml", case.stem()));
    write_text(&summary, &export::summary_record(&out.summary))?;
    Ok(out.summary.terminated)
}

fn failure_message(f: &Failure) -> String {
    match f {
        Failure::Usage(m) | Failure::Numeric(m) => m.clone(),
        Failure::Verification(n) => format!("{n} comparisons failed"),
    }
}

fn closed_form(args: ClosedFormArgs) -> CliResult {
    let mut families = Vec::new();
    let mut degs = Vec::new();
    for &n in &args.gain {
        let gain = GuidanceParams::new(n)?;
        for &deg in &args.theta0_deg {
            families.push(ClosedFormInputs::new(args.r0, deg.to_radians(), args.q0_deg.to_radians(), gain)?);
            degs.push(deg);
        }
    }
    let mut records = String::new();
    for (inputs, &deg) in families.iter().zip(&degs) {
        let mut rec = ClosedFormReport::compute(inputs, args.cutoff_r)?;
        // Report the angles as given rather than after a radian round trip.
        rec.theta0_deg = deg;
        rec.q0_deg = args.q0_deg;
        records.push_str(&format!("[[case]]\n{}\n", rec.record()));
    }
    print!("{records}");
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_text(&dir.join("closed_form.toml"), &records)?;
        let path = dir.join("profiles.csv");
        report::write_profile_csv(create(&path)?, &families, args.points)?;
    }
    Ok(())
}

fn capture(args: CaptureArgs, workers: Option<usize>) -> CliResult {
    let alpha = args
        .alpha
        .ok_or_else(|| Failure::Usage("--alpha is required: the maneuver limit has no default".into()))?;
    let gain = GuidanceParams::new(args.gain)?;
    let limit = ManeuverLimit::new(alpha, args.speed)?;

    let pairs: Vec<(f64, f64)> = match (args.r0_range, args.v_range) {
        (Some(r), _) => r.values().into_iter().map(|r0| (r0, args.speed)).collect(),
        (None, Some(v)) => v.values().into_iter().map(|v| (args.r0, v)).collect(),
        (None, None) => vec![(args.r0, args.speed)],
    };
    let rows = report::capture_boundaries(&pairs, alpha, gain)?;
    let region = capture_region_analytic(args.r0, &limit, gain)?;
    let sweep = if args.empirical {
        let options = SweepOptions {
            workers,
            ..SweepOptions::default()
        };
        Some(capture_region_empirical(args.r0, &limit, gain, args.resolution_deg, &options)?)
    } else {
        None
    };
    let record = boundary_record(args.r0, &limit, gain, &region, sweep.as_ref());
    print!("{record}");

    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join("capture_boundaries.csv");
            report::write_boundary_csv(create(&path)?, &rows).map_err(|e| io_failure(&path, e))?;
            write_text(&dir.join("capture.toml"), &record)?;
            if let Some(s) = &sweep {
                let path = dir.join("capture_sweep.csv");
                capture::write_region_csv(create(&path)?, s).map_err(|e| io_failure(&path, e))?;
            }
        }
        None if pairs.len() > 1 => {
            report::write_boundary_csv(std::io::stdout().lock(), &rows).map_err(|e| Failure::Numeric(e.to_string()))?;
        }
        None => {}
    }
    Ok(())
}

fn verify(args: VerifyArgs, workers: Option<usize>) -> CliResult {
    if !(args.tolerance_scale >= 0.0 && args.tolerance_scale.is_finite()) {
        return Err(Failure::Usage("--tolerance-scale must be a non-negative number".into()));
    }
    let d = Tolerances::default();
    let k = args.tolerance_scale;
    let tol = Tolerances {
        analytic_rel: d.analytic_rel * k,
        analytic_path: d.analytic_path * k,
        sim_path: d.sim_path * k,
        sim_increment: d.sim_increment * k,
        sim_distance: d.sim_distance * k,
    };
    let rep = report::verify_tables(&tol, workers);
    print!("{}", rep.render());
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        let path = dir.join("verification.csv");
        rep.write_csv(create(&path)?).map_err(|e| io_failure(&path, e))?;
    }
    if rep.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verification(rep.failures()))
    }
}

fn sweep_figures(args: FigureArgs, workers: Option<usize>) -> CliResult {
    let dir = &args.out;
    let r0 = 20000.0;
    let q0 = -120f64.to_radians();
    let profile_gains = [1.5, 2.0, 2.5, 3.0, 4.0, 5.0];
    let table_gains = [2.0, 3.0, 4.0, 5.0, 6.0];

    let families = profile_gains
        .iter()
        .map(|&n| ClosedFormInputs::new(r0, args.theta0_deg.to_radians(), q0, GuidanceParams::new(n)?))
        .collect::<Result<Vec<_>, _>>()?;
    let gains = table_gains
        .iter()
        .map(|&n| GuidanceParams::new(n))
        .collect::<Result<Vec<_>, _>>()?;
    let angles: Vec<f64> = (0..180).map(f64::from).collect();
    let mut scenario = ScenarioConfig::default();
    scenario.integrator.log_every = args.log_every.max(1);
    scenario.cases.gains = vec![3.0];
    scenario.cases.theta0_deg = Some(vec![-60.0, -30.0, 30.0, 60.0, 90.0, 120.0]);
    let mut cases: Vec<_> = scenario.cases()?.into_iter().map(|c| ("leading_angles", c)).collect();
    scenario.cases.gains = table_gains.to_vec();
    scenario.cases.theta0_deg = Some(vec![120.0]);
    cases.extend(scenario.cases()?.into_iter().map(|c| ("gains", c)));

    create_dir(dir)?;
    let path = dir.join("profiles.csv");
    report::write_profile_csv(create(&path)?, &families, 200)?;
    let path = dir.join("initial_angle.csv");
    report::write_initial_angle_csv(create(&path)?, r0, &gains, &angles, sim::DEFAULT_KILL_RADIUS)?;

    match args.alpha {
        Some(alpha) => {
            let gain = GuidanceParams::new(3.0)?;
            let by_r0: Vec<_> = Sweep { lo: 1000.0, hi: 30000.0, step: 500.0 }
                .values()
                .into_iter()
                .map(|r| (r, 500.0))
                .collect();
            let by_v: Vec<_> = Sweep { lo: 100.0, hi: 1000.0, step: 10.0 }
                .values()
                .into_iter()
                .map(|v| (r0, v))
                .collect();
            for (name, pairs) in [("capture_vs_r0.csv", by_r0), ("capture_vs_speed.csv", by_v)] {
                let rows = report::capture_boundaries(&pairs, alpha, gain)?;
                let path = dir.join(name);
                report::write_boundary_csv(create(&path)?, &rows).map_err(|e| io_failure(&path, e))?;
            }
        }
        None => eprintln!("warning: no --alpha given; capture series skipped"),
    }

    // The N = 3, 120 deg run belongs to both sets, so each set gets its own directory.
    let traj = dir.join("trajectories");
    for set in ["leading_angles", "gains"] {
        create_dir(&traj.join(set))?;
    }
    let runs = par_map(&cases, workers, |(_, case)| case.domain.simulate(&case.sim));
    for ((set, case), run) in cases.iter().zip(runs) {
        match write_case(case, &run?, &traj.join(set))? {
            Termination::Intercept => {}
            t => eprintln!("warning: {}: {t}", case.stem()),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a, cli.workers),
        Command::ClosedForm(a) => closed_form(a),
        Command::Capture(a) => capture(a, cli.workers),
        Command::Verify(a) => verify(a, cli.workers),
        Command::SweepFigures(a) => sweep_figures(a, cli.workers),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification(n) => eprintln!("verification failed: {n} comparisons out of tolerance"),
                other => eprintln!("error: {}", failure_message(other)),
            }
            ExitCode::from(f.code())
        }
    }
}
