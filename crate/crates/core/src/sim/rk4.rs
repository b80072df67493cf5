use crate::error::{GuidanceError, Result};

/// One classical fourth-order Runge–Kutta step of width `h` for the
/// autonomous system `y' = rhs(y)`.
pub fn rk4_step<const D: usize, F>(y: &[f64; D], h: f64, rhs: F) -> Result<[f64; D]>
where
    F: Fn(&[f64; D]) -> [f64; D],
{
    let offset = |base: &[f64; D], k: &[f64; D], scale: f64| {
        let mut out = *base;
        for (o, d) in out.iter_mut().zip(k) {
            *o += scale * d;
        }
        out
    };
    let k1 = rhs(y);
    let k2 = rhs(&offset(y, &k1, 0.5 * h));
    let k3 = rhs(&offset(y, &k2, 0.5 * h));
    let k4 = rhs(&offset(y, &k3, h));
    let mut next = *y;
    for i in 0..D {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(GuidanceError::NonFinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_is_identity() {
        let y = [1.0, -2.0, 3.5];
        assert_eq!(rk4_step(&y, 0.1, |_| [0.0; 3]).unwrap(), y);
    }

    #[test]
    fn exponential_growth() {
        let mut y = [1.0];
        for _ in 0..1000 {
            y = rk4_step(&y, 1e-3, |y| [y[0]]).unwrap();
        }
        let e = std::f64::consts::E;
        assert!(((y[0] - e) / e).abs() < 1e-12, "{}", y[0]);
    }

    #[test]
    fn non_finite_is_reported() {
        assert_eq!(rk4_step(&[1.0], 1.0, |_| [f64::INFINITY]), Err(GuidanceError::NonFinite));
    }
}
