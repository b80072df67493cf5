use super::{SummaryMetrics, Termination, Trajectory, TrajectorySample};

/// Vertex height of the parabola through three points, or `None` when the
/// points do not describe an interior maximum.
fn parabolic_peak(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<f64> {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a < 0.0) || !a.is_finite() {
        return None;
    }
    let b = d01 - a * (x0 + x1);
    let xv = -b / (2.0 * a);
    if xv < x0 || xv > x2 {
        return None;
    }
    Some(y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1))
}

fn refined_max(samples: &[TrajectorySample], value: impl Fn(&TrajectorySample) -> f64) -> f64 {
    let Some((i, best)) = samples
        .iter()
        .map(&value)
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return f64::NAN;
    };
    if i == 0 || i + 1 >= samples.len() {
        return best;
    }
    let pt = |j: usize| (samples[j].s_m, value(&samples[j]));
    parabolic_peak(pt(i - 1), pt(i), pt(i + 1)).map_or(best, |peak| peak.max(best))
}

/// Scalar metrics of a logged run.
///
/// The path is the final arc length, the curvature increment the trapezoidal
/// integral of `|k_m|` over arc length, and the range and curvature maxima
/// are refined with a parabola through the three samples around the peak.
pub fn summarize(trajectory: &Trajectory, terminated: Termination) -> SummaryMetrics {
    let samples = &trajectory.samples;
    let last = samples.last().copied().unwrap_or_default();
    let curvature_increment = samples
        .windows(2)
        .map(|w| 0.5 * (w[0].k_m.abs() + w[1].k_m.abs()) * (w[1].s_m - w[0].s_m))
        .sum();
    SummaryMetrics {
        miss_distance: last.r,
        flight_time: last.t,
        flight_path: last.s_m,
        curvature_increment,
        max_r: refined_max(samples, |s| s.r),
        max_k: refined_max(samples, |s| s.k_m.abs()),
        terminal_q: last.q,
        terminal_phi: last.phi_m,
        terminated,
        max_commanded_k: samples.iter().map(|s| s.k_m.abs()).fold(0.0, f64::max),
        saturated: false,
    }
}
