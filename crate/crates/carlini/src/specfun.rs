//! Special-function and quadrature substrate.
//!
//! Everything here is deliberately oracle-grade rather than fast: ascending
//! series with explicit truncation bounds, Gauss–Legendre panels halved to a
//! requested tolerance, and bracketed root solves. The rest of the crate
//! leans on these as independent cross-checks, so none of them may share a
//! code path with the things they verify.
//!
//! Large quantities (p!, g^p, e^{pf}) are carried in log domain through
//! [`LogValue`]: at p = 200 the raw products overflow `f64` long before the
//! final ratios become interesting.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Sign carried alongside a log-magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A real number stored as `sign · exp(log_magnitude)`.
///
/// `sign == Zero` forces `log_magnitude == -∞`; multiplication adds
/// log-magnitudes and multiplies signs.
#[derive(Clone, Copy, Debug)]
pub struct LogValue {
    log_magnitude: f64,
    sign: Sign,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue {
            log_magnitude: f64::NEG_INFINITY,
            sign: Sign::Zero,
        }
    }

    pub fn one() -> Self {
        LogValue {
            log_magnitude: 0.0,
            sign: Sign::Positive,
        }
    }

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            LogValue::zero()
        } else if v > 0.0 {
            LogValue {
                log_magnitude: v.ln(),
                sign: Sign::Positive,
            }
        } else {
            LogValue {
                log_magnitude: (-v).ln(),
                sign: Sign::Negative,
            }
        }
    }

    pub fn from_parts(sign: Sign, log_magnitude: f64) -> Self {
        if sign == Sign::Zero || log_magnitude == f64::NEG_INFINITY {
            LogValue::zero()
        } else {
            LogValue {
                log_magnitude,
                sign,
            }
        }
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Back to a plain `f64`; may under- or overflow for extreme magnitudes.
    pub fn value(&self) -> f64 {
        self.sign.as_f64() * self.log_magnitude.exp()
    }

    /// |self/other − 1|, evaluated in log domain. Opposite signs give ∞.
    pub fn rel_deviation(&self, other: &LogValue) -> f64 {
        match (self.sign, other.sign) {
            (Sign::Zero, Sign::Zero) => 0.0,
            (a, b) if a != b => f64::INFINITY,
            _ => ((self.log_magnitude - other.log_magnitude).exp() - 1.0).abs(),
        }
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::from_parts(self.sign.mul(rhs.sign), self.log_magnitude + rhs.log_magnitude)
    }
}

/// ln Γ(x) for real x (Lanczos, g = 7), with reflection for x < 1/2.
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π/sin(πx)
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().abs().ln()
            - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

const BESSEL_TERM_CAP: usize = 500;

/// Bessel function of the first kind, integer order, by ascending series.
///
/// The series is truncated when a term drops below 1e−18 of the partial sum
/// (at most 500 terms). For arguments large enough that the alternating
/// series cancels catastrophically (|x| beyond the order), the integral
/// definition `J_n(x) = (1/π)∫₀^π cos(nθ − x sin θ) dθ` takes over.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() >= 1e6 {
        return Err(Error::domain(format!("bessel_j requires |x| < 1e6, got {x}")));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let ax = x.abs();
    let flip = x < 0.0 && n % 2 == 1; // J_n(−x) = (−1)^n J_n(x)
    let v = if ax > f64::from(n).max(30.0) {
        bessel_j_via_integral(n, ax)?
    } else {
        bessel_j_series(n, ax)?
    };
    Ok(if flip { -v } else { v })
}

fn bessel_j_series(n: u32, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let ln_t0 = f64::from(n) * half.ln() - ln_gamma(f64::from(n) + 1.0);
    if ln_t0 < -745.0 {
        return Ok(0.0); // below subnormal range
    }
    let q = half * half;
    let mut term = ln_t0.exp();
    let mut sum = term;
    for k in 1..=BESSEL_TERM_CAP {
        let kf = k as f64;
        term *= -q / (kf * (f64::from(n) + kf));
        sum += term;
        // terms decrease monotonically once k ≥ x/2
        if kf >= half && term.abs() < 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(Error::numeric(format!(
        "bessel_j({n}, {x}) series not converged in {BESSEL_TERM_CAP} terms"
    )))
}

/// The integral definition `(1/π)∫₀^π cos(nθ − x sin θ) dθ`.
///
/// Public because the tests use it as the oracle against the series route.
pub fn bessel_j_via_integral(n: u32, x: f64) -> Result<f64> {
    let spec = QuadratureSpec::new(48, Scheme::GaussLegendre, 1e-13)?;
    let v = integrate(
        |t| (f64::from(n) * t - x * t.sin()).cos(),
        0.0,
        std::f64::consts::PI,
        &spec,
    )?;
    Ok(v / std::f64::consts::PI)
}

/// J_n′(x) through the recurrence J_n′ = (J_{n−1} − J_{n+1})/2, J_0′ = −J_1.
pub fn bessel_j_prime(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(-bessel_j(1, x)?);
    }
    Ok(0.5 * (bessel_j(n - 1, x)? - bessel_j(n + 1, x)?))
}

/// Modified Bessel function I_p(x) in log domain, real order p ≥ 0.
///
/// All series terms are positive, so the sum is accumulated in a scaled
/// linear representation and renormalized whenever it threatens overflow.
pub fn bessel_i(p: f64, x: f64) -> Result<LogValue> {
    if !(p >= 0.0) || !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_i requires p ≥ 0, x ≥ 0, got ({p}, {x})")));
    }
    if x == 0.0 {
        return Ok(if p == 0.0 { LogValue::one() } else { LogValue::zero() });
    }
    let half = 0.5 * x;
    let q = half * half;
    let mut log_scale = p * half.ln() - ln_gamma(p + 1.0);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    // terms decay once m > x/2; allow the cap to scale with the argument
    let cap = BESSEL_TERM_CAP.max(x as usize + 200);
    for m in 1..=cap {
        let mf = m as f64;
        term *= q / (mf * (p + mf));
        sum += term;
        if term < 1e-18 * sum {
            return Ok(LogValue::from_parts(Sign::Positive, log_scale + sum.ln()));
        }
        if sum > 1e250 {
            log_scale += sum.ln();
            term /= sum;
            sum = 1.0;
        }
    }
    Err(Error::numeric(format!("bessel_i({p}, {x}) series not converged in {cap} terms")))
}

/// Regularized lower incomplete gamma P(s, x) = γ(s, x)/Γ(s).
///
/// Series for x < s + 1, Lentz continued fraction for the upper tail
/// otherwise — the standard split.
pub fn reg_inc_gamma_lower(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !(x >= 0.0) {
        return Err(Error::domain(format!(
            "reg_inc_gamma_lower requires s > 0, x ≥ 0, got ({s}, {x})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_prefix = s * x.ln() - x - ln_gamma(s);
    if x < s + 1.0 {
        // ascending series for γ(s, x)
        let mut ap = s;
        let mut del = 1.0 / s;
        let mut sum = del;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                return Ok((sum.ln() + ln_prefix).exp().min(1.0));
            }
        }
        Err(Error::numeric(format!("incomplete gamma series stalled at ({s}, {x})")))
    } else {
        // continued fraction for Q(s, x), modified Lentz
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=500 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                let q = (h.ln() + ln_prefix).exp();
                return Ok((1.0 - q).clamp(0.0, 1.0));
            }
        }
        Err(Error::numeric(format!(
            "incomplete gamma continued fraction stalled at ({s}, {x})"
        )))
    }
}

/// Quadrature scheme selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    GaussLegendre,
    CompositeSimpson,
}

/// Panel quadrature configuration: `node_count` nodes per panel, panels
/// halved until two successive estimates differ by at most `abs_tol`.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    node_count: usize,
    scheme: Scheme,
    abs_tol: f64,
}

impl QuadratureSpec {
    pub fn new(node_count: usize, scheme: Scheme, abs_tol: f64) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::domain(format!("node_count must be ≥ 2, got {node_count}")));
        }
        if !(abs_tol >= 0.0) || !abs_tol.is_finite() {
            return Err(Error::domain(format!("abs_tol must be finite and ≥ 0, got {abs_tol}")));
        }
        Ok(QuadratureSpec {
            node_count,
            scheme,
            abs_tol,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }
}

impl Default for QuadratureSpec {
    /// Gauss–Legendre, 64 nodes per panel, 1e−12: smooth-integrand default.
    fn default() -> Self {
        QuadratureSpec {
            node_count: 64,
            scheme: Scheme::GaussLegendre,
            abs_tol: 1e-12,
        }
    }
}

fn gl_nodes(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Arc::clone(v);
    }
    let computed = Arc::new(compute_gl_nodes(n));
    cache.lock().unwrap().insert(n, Arc::clone(&computed));
    computed
}

/// Nodes and weights of n-point Gauss–Legendre on [−1, 1], by Newton
/// iteration on the Legendre recurrence.
fn compute_gl_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        out.push((-z, w));
        if n - 1 - i != i {
            out.push((z, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn panel_pass<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize, spec: &QuadratureSpec) -> f64 {
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    match spec.scheme {
        Scheme::GaussLegendre => {
            let nodes = gl_nodes(spec.node_count);
            for k in 0..panels {
                let lo = a + k as f64 * width;
                let mid = lo + 0.5 * width;
                let half = 0.5 * width;
                let mut acc = 0.0;
                for &(x, w) in nodes.iter() {
                    acc += w * f(mid + half * x);
                }
                total += acc * half;
            }
        }
        Scheme::CompositeSimpson => {
            // node_count intervals per panel, rounded up to even
            let m = (spec.node_count + 1) & !1;
            let h = width / m as f64;
            for k in 0..panels {
                let lo = a + k as f64 * width;
                let mut acc = f(lo) + f(lo + width);
                for j in 1..m {
                    let w = if j % 2 == 1 { 4.0 } else { 2.0 };
                    acc += w * f(lo + j as f64 * h);
                }
                total += acc * h / 3.0;
            }
        }
    }
    total
}

const MAX_HALVINGS: usize = 14;

/// Panel quadrature of `f` over `[a, b]` with halving to `spec.abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("integrate requires finite a ≤ b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut panels = 1;
    let mut prev = panel_pass(&f, a, b, panels, spec);
    for _ in 0..MAX_HALVINGS {
        panels *= 2;
        let cur = panel_pass(&f, a, b, panels, spec);
        if (cur - prev).abs() <= spec.abs_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numeric(format!(
        "quadrature refinement budget exhausted on [{a}, {b}] (tol {})",
        spec.abs_tol
    )))
}

const ROOT_ITER_CAP: u32 = 400;

/// Bisection root solve on a bracket with a sign change.
///
/// Terminates when the bracket width drops to `tol` (or an endpoint hits an
/// exact zero).
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tol must be > 0, got {tol}")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() * fhi.signum() > 0.0 {
        return Err(Error::Bracketing { lo, hi });
    }
    for _ in 0..ROOT_ITER_CAP {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        what: "bisection".into(),
        iterations: ROOT_ITER_CAP,
    })
}

/// Bracketed solve refined with Newton steps where the supplied derivative
/// helps; falls back to bisection whenever a Newton step leaves the bracket.
pub fn find_root_with_derivative<F, D>(f: F, df: D, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tol must be > 0, got {tol}")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() * fhi.signum() > 0.0 {
        return Err(Error::Bracketing { lo, hi });
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..ROOT_ITER_CAP {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence {
        what: "safeguarded newton".into(),
        iterations: ROOT_ITER_CAP,
    })
}
