//! Embedded Dormand-Prince 5(4) integrator with adaptive step control.
//!
//! Works on flat `&[f64]` states so both the five-variable maser system and
//! vectorized density matrices share one kernel. FSAL: the last stage of an
//! accepted step seeds the next one.

use crate::error::{Error, Result};

// Butcher tableau (Dormand & Prince 1980).
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights coincide with the last row of A (FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone)]
pub struct Dopri5Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Hard cap on the step size, seconds.
    pub max_step: Option<f64>,
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_step: None,
            initial_step: None,
            max_steps: 50_000_000,
        }
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end`.
///
/// `on_accept` runs after every accepted step and may veto the trajectory by
/// returning an error (used for runtime invariant checks and sampling). When
/// `sample_dt` is set, steps are clamped so the trajectory lands exactly on
/// `t0 + k*sample_dt`.
pub fn integrate<F, S>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    sample_dt: Option<f64>,
    opts: &Dopri5Options,
    mut on_accept: S,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    S: FnMut(f64, &[f64]) -> Result<()>,
{
    if !(t_end > t0) {
        return Err(Error::InvalidParameter(format!(
            "integration span must be positive: t0 = {t0:e}, t_end = {t_end:e}"
        )));
    }
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; n]).collect();
    let mut y_stage = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    let mut next_sample_idx: u64 = 1;

    rhs(t, &y, &mut k[0]);
    on_accept(t, &y)?;

    let span = t_end - t0;
    let mut h = opts.initial_step.unwrap_or(span * 1e-6);
    if let Some(hm) = opts.max_step {
        h = h.min(hm);
    }
    if let Some(dt) = sample_dt {
        h = h.min(dt);
    }

    let mut steps = 0usize;
    while t < t_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepBudgetExhausted { steps, time: t });
        }
        // clamp to the next sample boundary and the end point
        let mut target = t_end;
        if let Some(dt) = sample_dt {
            let boundary = t0 + next_sample_idx as f64 * dt;
            if boundary < target {
                target = boundary;
            }
        }
        if t + h >= target {
            h = target - t;
        }
        let h_floor = 16.0 * f64::EPSILON * t.abs().max(span.abs());
        if h <= h_floor {
            return Err(Error::StepSizeUnderflow { time: t });
        }

        // stages 2..7
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            rhs(t + C[s] * h, &y_stage, &mut tail[0]);
        }

        // 5th-order solution and embedded error
        let mut err_sq = 0.0;
        for i in 0..n {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for s in 0..7 {
                if B5[s] != 0.0 {
                    acc5 += B5[s] * k[s][i];
                }
                if B4[s] != 0.0 {
                    acc4 += B4[s] * k[s][i];
                }
            }
            y5[i] = y[i] + h * acc5;
            let e = h * (acc5 - acc4);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / n as f64).sqrt();

        if !err.is_finite() {
            // blow-up inside the step; shrink hard
            h *= 0.1;
            if h <= h_floor {
                return Err(Error::StepSizeUnderflow { time: t });
            }
            continue;
        }

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y5);
            k.swap(0, 6); // FSAL
            if let Some(dt) = sample_dt {
                let boundary = t0 + next_sample_idx as f64 * dt;
                if (t - boundary).abs() <= 4.0 * f64::EPSILON * boundary.abs().max(1e-300) {
                    next_sample_idx += 1;
                }
            }
            on_accept(t, &y)?;
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if let Some(hm) = opts.max_step {
            h = h.min(hm);
        }
    }
    Ok(y)
}
