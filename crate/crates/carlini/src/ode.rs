//! Adaptive Dormand–Prince 5(4) for the two-state problems used internally
//! (log-companion WKB integration, the nonlinear perturbation oracle).

use crate::{Error, Result};

pub(crate) type State = [f64; 2];

#[derive(Clone, Copy, Debug)]
pub(crate) struct Rk45Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Abort with a divergence error when |y| exceeds this.
    pub max_magnitude: Option<f64>,
}

impl Default for Rk45Options {
    fn default() -> Self {
        Rk45Options {
            rtol: 1e-12,
            atol: 1e-12,
            max_steps: 2_000_000,
            max_magnitude: None,
        }
    }
}

// Dormand–Prince coefficients (the classic RK5(4)7M tableau).
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// embedded 4th-order weights
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

fn axpy(y: &State, h: f64, coeffs: &[(f64, &State)]) -> State {
    let mut out = *y;
    for &(c, k) in coeffs {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrate from `t0` to `t_end`, calling `on_point` at every requested
/// target in `targets` (must be sorted ascending, all within [t0, t_end]).
/// Steps are clipped so each target is hit exactly.
pub(crate) fn integrate_visit<F, V>(
    f: F,
    t0: f64,
    y0: State,
    t_end: f64,
    targets: &[f64],
    opts: &Rk45Options,
    mut on_point: V,
) -> Result<State>
where
    F: Fn(f64, &State) -> State,
    V: FnMut(f64, &State),
{
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut next_target = 0usize;
    while next_target < targets.len() && targets[next_target] <= t0 {
        on_point(targets[next_target], &y);
        next_target += 1;
    }
    if t_end == t0 {
        return Ok(y);
    }
    let span = t_end - t0;
    let mut h = (span / 100.0).min(0.1).max(1e-8);
    let mut steps = 0usize;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::numeric("ODE step budget exhausted"));
        }
        steps += 1;
        let mut clipped = false;
        if t + h >= t_end {
            h = t_end - t;
            clipped = true;
        }
        if next_target < targets.len() && t + h >= targets[next_target] {
            h = targets[next_target] - t;
            clipped = true;
        }
        if h <= t.abs().max(1.0) * 1e-15 {
            if clipped {
                // degenerate sliver left by clipping: treat as arrived
                if next_target < targets.len() && (targets[next_target] - t).abs() <= 1e-12 {
                    on_point(targets[next_target], &y);
                    next_target += 1;
                    h = (span / 100.0).min(0.1);
                    continue;
                }
                break;
            }
            return Err(Error::numeric(format!("ODE step underflow at t = {t}")));
        }

        let y2 = axpy(&y, h, &[(A21, &k1)]);
        let k2 = f(t + h / 5.0, &y2);
        let y3 = axpy(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = f(t + 3.0 * h / 10.0, &y3);
        let y4 = axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = f(t + 4.0 * h / 5.0, &y4);
        let y5 = axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = f(t + 8.0 * h / 9.0, &y5);
        let y6 = axpy(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        let k6 = f(t + h, &y6);
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new);
        let y_low = axpy(
            &y,
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );

        let mut err = 0.0_f64;
        for i in 0..2 {
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            let e = (y_new[i] - y_low[i]) / scale;
            err += e * e;
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 || h <= 1e-13 {
            t += h;
            y = y_new;
            k1 = k7; // FSAL
            if let Some(cap) = opts.max_magnitude {
                if y[0].abs() > cap || !y[0].is_finite() || !y[1].is_finite() {
                    return Err(Error::Divergence { x: t });
                }
            }
            while next_target < targets.len() && t >= targets[next_target] - 1e-14 {
                on_point(targets[next_target], &y);
                next_target += 1;
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(span);
    }
    while next_target < targets.len() {
        on_point(targets[next_target], &y);
        next_target += 1;
    }
    Ok(y)
}

pub(crate) fn integrate_to<F>(f: F, t0: f64, y0: State, t_end: f64, opts: &Rk45Options) -> Result<State>
where
    F: Fn(f64, &State) -> State,
{
    integrate_visit(f, t0, y0, t_end, &[], opts, |_, _| {})
}
