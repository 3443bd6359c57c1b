//! Regular-perturbation cascade for `y″ + y + αy² = b`.
//!
//! Writing `y = Y + αY⁽¹⁾ + α²Y⁽²⁾ + α³Y⁽³⁾ + …` and matching powers of the
//! small parameter α gives one driven linear oscillator per order:
//!
//! ```text
//! Y″   + Y   = b
//! Y⁽¹⁾″ + Y⁽¹⁾ = −Y²
//! Y⁽²⁾″ + Y⁽²⁾ = −2YY⁽¹⁾
//! Y⁽³⁾″ + Y⁽³⁾ = −(Y⁽¹⁾)² − 2YY⁽²⁾
//! ```
//!
//! The base solves with `Y(0) = y₀, Y′(0) = 0`; every correction carries
//! homogeneous zero initial data, which makes the cascade unique. Each
//! oscillator is solved exactly: solutions live in the ring of trigonometric
//! polynomials (x-powers times sin/cos of integer frequencies), closed under
//! products and under the variation-of-parameters integral
//!
//! ```text
//! u(x) = sin x ∫₀ˣ F cos t dt − cos x ∫₀ˣ F sin t dt,
//! ```
//!
//! which produces the resonant x·sin/x·cos (secular) terms automatically.
//! Those secular terms grow linearly, so accuracy claims are stated on
//! [0, 2π]; the truncation error there scales like α^{N+1}.

use std::collections::BTreeMap;

use crate::ode::{self, Rk45Options};
use crate::{Error, Result};

/// Problem statement: `y″ + y + αy² = b`, `y(0) = y₀`, `y′(0) = 0`,
/// truncation order N ≤ 3, validation interval [0, L].
#[derive(Clone, Copy, Debug)]
pub struct PerturbProblem {
    pub alpha: f64,
    pub b: f64,
    pub y0: f64,
    pub order: usize,
    pub length: f64,
}

impl PerturbProblem {
    pub fn new(alpha: f64, b: f64, y0: f64, order: usize, length: f64) -> Result<Self> {
        if order > 3 {
            return Err(Error::domain(format!("cascade order must be ≤ 3, got {order}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::domain(format!("interval length must be positive, got {length}")));
        }
        if !alpha.is_finite() || !b.is_finite() || !y0.is_finite() {
            return Err(Error::domain("alpha, b, y0 must be finite".to_string()));
        }
        Ok(PerturbProblem {
            alpha,
            b,
            y0,
            order,
            length,
        })
    }
}

/// Basis kind of one trig-poly term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Cos,
    Sin,
}

/// Sparse trigonometric polynomial: Σ c · x^j · {cos, sin}(m x).
#[derive(Clone, Debug, Default)]
struct TrigPoly {
    // (x power, frequency, kind) → coefficient
    terms: BTreeMap<(u32, u32, Kind), f64>,
}

impl TrigPoly {
    fn constant(c: f64) -> Self {
        let mut p = TrigPoly::default();
        p.push(c, 0, 0, Kind::Cos);
        p
    }

    fn push(&mut self, coeff: f64, xpow: u32, freq: u32, kind: Kind) {
        if coeff == 0.0 {
            return;
        }
        // sin(0·x) ≡ 0
        if freq == 0 && kind == Kind::Sin {
            return;
        }
        let entry = self.terms.entry((xpow, freq, kind)).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.remove(&(xpow, freq, kind));
        }
    }

    fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (&(j, m, k), &c) in &other.terms {
            out.push(c, j, m, k);
        }
        out
    }

    fn scale(&self, s: f64) -> TrigPoly {
        let mut out = TrigPoly::default();
        for (&(j, m, k), &c) in &self.terms {
            out.push(c * s, j, m, k);
        }
        out
    }

    /// Product via the product-to-sum identities; signed frequencies are
    /// folded back with cos(−m) = cos m, sin(−m) = −sin m.
    fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = TrigPoly::default();
        for (&(j1, m1, k1), &c1) in &self.terms {
            for (&(j2, m2, k2), &c2) in &other.terms {
                let j = j1 + j2;
                let c = 0.5 * c1 * c2;
                let (sum, diff) = (m1 + m2, m1 as i64 - m2 as i64);
                match (k1, k2) {
                    (Kind::Cos, Kind::Cos) => {
                        // cos a cos b = ½[cos(a−b) + cos(a+b)]
                        out.push(c, j, diff.unsigned_abs() as u32, Kind::Cos);
                        out.push(c, j, sum, Kind::Cos);
                    }
                    (Kind::Sin, Kind::Sin) => {
                        // sin a sin b = ½[cos(a−b) − cos(a+b)]
                        out.push(c, j, diff.unsigned_abs() as u32, Kind::Cos);
                        out.push(-c, j, sum, Kind::Cos);
                    }
                    (Kind::Sin, Kind::Cos) => {
                        // sin a cos b = ½[sin(a+b) + sin(a−b)]
                        out.push(c, j, sum, Kind::Sin);
                        let s = diff.signum() as f64;
                        out.push(c * s, j, diff.unsigned_abs() as u32, Kind::Sin);
                    }
                    (Kind::Cos, Kind::Sin) => {
                        // cos a sin b = ½[sin(a+b) − sin(a−b)]
                        out.push(c, j, sum, Kind::Sin);
                        let s = diff.signum() as f64;
                        out.push(-c * s, j, diff.unsigned_abs() as u32, Kind::Sin);
                    }
                }
            }
        }
        out
    }

    /// Antiderivative with F(0) = 0.
    fn integral(&self) -> TrigPoly {
        let mut out = TrigPoly::default();
        for (&(j, m, k), &c) in &self.terms {
            integrate_term(&mut out, c, j, m, k);
        }
        // fix the constant so the definite integral from 0 is direct
        let at_zero = out.eval(0.0);
        out.push(-at_zero, 0, 0, Kind::Cos);
        out
    }

    fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (&(j, m, k), &c) in &self.terms {
            let osc = match k {
                Kind::Cos => (f64::from(m) * x).cos(),
                Kind::Sin => (f64::from(m) * x).sin(),
            };
            acc += c * x.powi(j as i32) * osc;
        }
        acc
    }
}

/// ∫ c x^j trig(mx) dx by the usual integration-by-parts ladder.
fn integrate_term(out: &mut TrigPoly, c: f64, j: u32, m: u32, k: Kind) {
    if m == 0 {
        // k is Cos here (sin(0x) terms never get stored)
        out.push(c / (j as f64 + 1.0), j + 1, 0, Kind::Cos);
        return;
    }
    let mf = f64::from(m);
    match k {
        Kind::Cos => {
            // ∫x^j cos = x^j sin/m − (j/m)∫x^{j−1} sin
            out.push(c / mf, j, m, Kind::Sin);
            if j > 0 {
                integrate_term(out, -c * j as f64 / mf, j - 1, m, Kind::Sin);
            }
        }
        Kind::Sin => {
            // ∫x^j sin = −x^j cos/m + (j/m)∫x^{j−1} cos
            out.push(-c / mf, j, m, Kind::Cos);
            if j > 0 {
                integrate_term(out, c * j as f64 / mf, j - 1, m, Kind::Cos);
            }
        }
    }
}

/// Particular solution of `u″ + u = F` with u(0) = u′(0) = 0, by variation
/// of parameters (see module docs). Exact in the trig-poly ring.
fn driven_oscillator(forcing: &TrigPoly) -> TrigPoly {
    let mut sin1 = TrigPoly::default();
    sin1.push(1.0, 0, 1, Kind::Sin);
    let mut cos1 = TrigPoly::default();
    cos1.push(1.0, 0, 1, Kind::Cos);
    let ic = forcing.mul(&cos1).integral();
    let is = forcing.mul(&sin1).integral();
    sin1.mul(&ic).add(&cos1.mul(&is).scale(-1.0))
}

/// The truncated cascade `Σ_{k≤N} α^k Y⁽ᵏ⁾` with exact closed-form terms.
#[derive(Clone, Debug)]
pub struct CascadeSolution {
    alpha: f64,
    terms: Vec<TrigPoly>,
}

impl CascadeSolution {
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let mut weight = 1.0;
        for term in &self.terms {
            acc += weight * term.eval(x);
            weight *= self.alpha;
        }
        acc
    }

    /// The k-th cascade term Y⁽ᵏ⁾ evaluated alone (without its α^k weight).
    pub fn term(&self, k: usize, x: f64) -> Option<f64> {
        self.terms.get(k).map(|t| t.eval(x))
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }
}

/// Build the cascade through `problem.order`.
pub fn cascade_solution(problem: &PerturbProblem) -> CascadeSolution {
    // base: Y = b + (y0 − b) cos x
    let mut base = TrigPoly::constant(problem.b);
    base.push(problem.y0 - problem.b, 0, 1, Kind::Cos);
    let mut terms = vec![base];

    if problem.order >= 1 {
        let y = &terms[0];
        terms.push(driven_oscillator(&y.mul(y).scale(-1.0)));
    }
    if problem.order >= 2 {
        let f = terms[0].mul(&terms[1]).scale(-2.0);
        terms.push(driven_oscillator(&f));
    }
    if problem.order >= 3 {
        let f = terms[1]
            .mul(&terms[1])
            .scale(-1.0)
            .add(&terms[0].mul(&terms[2]).scale(-2.0));
        terms.push(driven_oscillator(&f));
    }
    CascadeSolution {
        alpha: problem.alpha,
        terms,
    }
}

/// Direct adaptive integration of the full nonlinear equation — the oracle
/// the cascade is checked against. Divergence beyond |y| = 1e6 is an error.
pub struct NonlinearOracle {
    problem: PerturbProblem,
}

pub fn nonlinear_oracle(problem: &PerturbProblem) -> NonlinearOracle {
    NonlinearOracle { problem: *problem }
}

impl NonlinearOracle {
    fn rhs(&self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
        let (alpha, b) = (self.problem.alpha, self.problem.b);
        move |_, y| [y[1], b - y[0] - alpha * y[0] * y[0]]
    }

    fn options() -> Rk45Options {
        Rk45Options {
            rtol: 1e-12,
            atol: 1e-12,
            max_magnitude: Some(1e6),
            ..Rk45Options::default()
        }
    }

    /// y(x) at a single point.
    pub fn at(&self, x: f64) -> Result<f64> {
        if !(0.0..=self.problem.length).contains(&x) {
            return Err(Error::domain(format!("x = {x} outside [0, {}]", self.problem.length)));
        }
        let y = ode::integrate_to(self.rhs(), 0.0, [self.problem.y0, 0.0], x, &Self::options())?;
        Ok(y[0])
    }

    /// y at each point of a sorted ascending grid, one integration pass.
    pub fn on_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        if xs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("grid must be sorted ascending".to_string()));
        }
        if let Some(&last) = xs.last() {
            if last > self.problem.length || xs[0] < 0.0 {
                return Err(Error::domain("grid outside [0, L]".to_string()));
            }
        }
        let mut out = Vec::with_capacity(xs.len());
        ode::integrate_visit(
            self.rhs(),
            0.0,
            [self.problem.y0, 0.0],
            *xs.last().unwrap_or(&0.0),
            xs,
            &Self::options(),
            |_, y| out.push(y[0]),
        )?;
        Ok(out)
    }
}

/// One (alpha, order, sup-error) measurement.
#[derive(Clone, Copy, Debug)]
pub struct ScalingRow {
    pub alpha: f64,
    pub order: usize,
    pub sup_error: f64,
}

/// Sup-error of the cascade against the oracle over [0, L] and the fitted
/// slope of log(sup-error) against log α, expected ≈ N + 1.
#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
}

const SCALING_GRID: usize = 257;

/// Measure the α^{N+1} truncation scaling over the supplied alphas
/// (at least three, geometrically spaced).
pub fn order_scaling_report(problem: &PerturbProblem, alphas: &[f64]) -> Result<ScalingReport> {
    if alphas.len() < 3 {
        return Err(Error::domain("need at least 3 alphas for a scaling fit".to_string()));
    }
    if alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::domain("alphas must be positive".to_string()));
    }
    let xs: Vec<f64> = (0..SCALING_GRID)
        .map(|i| problem.length * i as f64 / (SCALING_GRID - 1) as f64)
        .collect();
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let sub = PerturbProblem { alpha, ..*problem };
        let cascade = cascade_solution(&sub);
        let oracle = nonlinear_oracle(&sub).on_grid(&xs)?;
        let sup = xs
            .iter()
            .zip(&oracle)
            .map(|(&x, &y)| (cascade.eval(x) - y).abs())
            .fold(0.0_f64, f64::max);
        rows.push(ScalingRow {
            alpha,
            order: problem.order,
            sup_error: sup,
        });
    }
    let n = rows.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for row in &rows {
        if row.sup_error <= 0.0 {
            return Err(Error::DegenerateFit);
        }
        let x = row.alpha.ln();
        let y = row.sup_error.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(ScalingReport { rows, slope })
}
