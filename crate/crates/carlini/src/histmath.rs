//! The exponential equation `x^x = y` and companions.
//!
//! Taking logs turns `x^x = y` into `x ln x = z` with `z = ln y`. On the
//! reals: a single root above 1/e for z > 0, two roots for z ∈ (−1/e, 0)
//! (the map x ln x bottoms out at −1/e), and none for z < −1/e. The series
//!
//! ```text
//! x = 1 + z + Σ_{n≥2} (−1)^{n−1} (n−1)^{n−1} z^n / n!
//! ```
//!
//! converges on |z| < 1/e to the branch through x = 1.
//!
//! Beyond the reals the roots are infinite in number. Writing `x = R e^{iα}`
//! and splitting `x ln x = z` (with `ln x = ln R + iα` along the branch)
//! into real and imaginary parts gives the one-parameter family
//!
//! ```text
//! x = −(z sin α / α) e^{iα},   ln(−z) = ln(α/sin α) − α cot α    (z < 0)
//! ```
//!
//! with one conjugate pair per window α ∈ (2kπ, (2k+1)π), k ≥ 1, plus the
//! principal pair in (0, π) exactly when z < −1/e. These are the same roots
//! as `x = e^{W_k(z)}` for the k-th Lambert branch, which is kept as an
//! independent cross-check (Halley iteration from the asymptotic seed).
//!
//! Also here: Euler's assignment of a value to `Σ (−1)^n n!` via the
//! Gompertz integral, the conjugate function pair `f = x − 1/x`,
//! `φ = x + 1/x` (with `φ² − f² = 4`) and the table-free quadratic/cubic
//! solvers built on it, and the golden-ratio/Fibonacci pair.

use num_complex::Complex64;

use crate::specfun::{self, QuadratureSpec, Scheme};
use crate::{Error, Result};

const INV_E: f64 = 1.0 / std::f64::consts::E;

/// One complex root of `x ln x = z`.
///
/// `branch_index` 0 is the branch through the reals (nonreal only when
/// z < −1/e); index k ≥ 1 is the k-th conjugate pair (α-window
/// (2kπ, (2k+1)π)), matching Lambert branch W_k. Conjugate partners share
/// the index and carry opposite-sign `alpha`. The residual is
/// `|x·(ln R + iα) − z|` with the branch-consistent logarithm.
#[derive(Clone, Copy, Debug)]
pub struct BranchRoot {
    pub x: Complex64,
    pub alpha: f64,
    pub branch_index: i32,
    pub residual: f64,
}

/// Which real root of `x^x = y` to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealBranch {
    /// The root ≥ 1/e (exists for all y > e^{−1/e}).
    Upper,
    /// The root < 1/e (exists for y ∈ (e^{−1/e}, 1)).
    Lower,
}

/// Power-series solution of `x ln x = z` on |z| < 1/e.
///
/// Terms are assembled in log domain ((n−1)^{n−1}/n! overflows f64 raw well
/// before the series stops mattering); summation stops at 1e−14 relative.
pub fn xx_series(z: f64, terms: usize) -> Result<f64> {
    if !(z.abs() < INV_E) {
        return Err(Error::OutOfRadius { z, radius: INV_E });
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let ln_abs_z = z.abs().ln();
    let mut sum = 1.0 + z;
    for n in 2..=terms.max(2) {
        let nf = n as f64;
        let ln_mag = (nf - 1.0) * (nf - 1.0).ln() + nf * ln_abs_z - specfun::ln_gamma(nf + 1.0);
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 } * if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * ln_mag.exp();
        sum += term;
        if term.abs() < 1e-14 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::numeric(format!(
        "xx_series(z={z}) not converged within {terms} terms"
    )))
}

/// Real root of `x^x = y` on the requested branch, by bracketed Newton.
///
/// For `ln y < −1/e` there is no real root ([`Error::NoRealRoot`]); the
/// complex branches from [`xx_complex_roots`] take over there.
pub fn xx_newton(y: f64, branch: RealBranch) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("y must be positive and finite, got {y}")));
    }
    let z = y.ln();
    if z < -INV_E {
        return Err(Error::NoRealRoot);
    }
    let h = |x: f64| x * x.ln() - z;
    let dh = |x: f64| x.ln() + 1.0;
    match branch {
        RealBranch::Upper => {
            if z == 0.0 {
                return Ok(1.0);
            }
            if z == -INV_E {
                return Ok(INV_E);
            }
            // x ln x is increasing above 1/e; double the cap until bracketed
            let mut hi = 2.0_f64.max(z + 2.0);
            while h(hi) < 0.0 {
                hi *= 2.0;
            }
            let root = specfun::find_root_with_derivative(h, dh, INV_E, hi, 1e-15)?;
            Ok(polish(root, z))
        }
        RealBranch::Lower => {
            if !(z < 0.0) {
                return Err(Error::domain(format!(
                    "lower branch requires y in (e^(-1/e), 1), got y = {y}"
                )));
            }
            if z == -INV_E {
                return Ok(INV_E);
            }
            let root = specfun::find_root_with_derivative(h, dh, f64::MIN_POSITIVE, INV_E, 1e-15)?;
            Ok(polish(root, z))
        }
    }
}

// one full-precision Newton step to squeeze out the bracket-width tolerance
fn polish(x: f64, z: f64) -> f64 {
    let step = (x * x.ln() - z) / (x.ln() + 1.0);
    let better = x - step;
    if better.is_finite() && better > 0.0 {
        better
    } else {
        x
    }
}

/// `ln(α/sin α) − α cot α`, the branch equation's left side.
fn alpha_equation(alpha: f64) -> f64 {
    let s = alpha.sin();
    (alpha / s).ln() - alpha * alpha.cos() / s
}

/// Solve the α-equation in one admissible window.
/// Window k ≥ 1 is (2kπ, (2k+1)π); window 0 is (0, π), where a solution
/// exists only for ln(−z) > −1 (that is, z < −1/e).
fn solve_alpha_window(target: f64, k: u32) -> Result<f64> {
    let base = 2.0 * f64::from(k) * std::f64::consts::PI;
    let top = base + std::f64::consts::PI;
    // the equation runs from −∞ to +∞ across each k ≥ 1 window; on the
    // principal window it runs from −1 to +∞, so small |z| finds no branch
    let mut lo = base + 1e-9 * (base + 1.0);
    let mut hi = top - 1e-9 * top;
    if k == 0 && alpha_equation(lo) >= target {
        return Err(Error::domain(
            "no branch in the principal alpha window (z above -1/e has real roots instead)"
                .to_string(),
        ));
    }
    while alpha_equation(lo) > target {
        lo = base + 0.1 * (lo - base);
        if lo - base < 1e-300 {
            return Err(Error::numeric("alpha window collapsed at the left edge".to_string()));
        }
    }
    if alpha_equation(hi) < target {
        return Err(Error::domain(format!(
            "no branch in alpha window {k} for this argument"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if alpha_equation(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn root_from_alpha(z: f64, alpha: f64, k: i32) -> BranchRoot {
    let r = -z * alpha.sin() / alpha;
    let x = Complex64::from_polar(r, alpha);
    let log_x = Complex64::new(r.ln(), alpha);
    let residual = (x * log_x - z).norm();
    BranchRoot {
        x,
        alpha,
        branch_index: k,
        residual,
    }
}

fn conjugate_pair(z: f64, alpha: f64, k: i32) -> Result<[BranchRoot; 2]> {
    let upper = root_from_alpha(z, alpha, k);
    if upper.residual > 1e-10 {
        return Err(Error::numeric(format!(
            "branch {k} residual {} exceeds 1e-10",
            upper.residual
        )));
    }
    let lower = BranchRoot {
        x: upper.x.conj(),
        alpha: -alpha,
        ..upper
    };
    Ok([upper, lower])
}

/// Complex roots of `x ln x = z` for z < 0: the conjugate pair in each
/// α-window (2kπ, (2k+1)π) for k = 1..=k_max — exactly `k_max` pairs,
/// whether or not real roots also exist.
///
/// Roots come out conjugate-closed: (+α, −α) partners adjacent, k ascending.
pub fn xx_complex_roots(z: f64, k_max: u32) -> Result<Vec<BranchRoot>> {
    if !(z < 0.0) {
        return Err(Error::domain(format!(
            "the alpha parameterization is exposed for z < 0, got {z}"
        )));
    }
    if k_max < 1 {
        return Err(Error::domain("k_max must be ≥ 1".to_string()));
    }
    let target = (-z).ln();
    let mut out = Vec::with_capacity(2 * k_max as usize);
    for k in 1..=k_max {
        out.extend(conjugate_pair(z, solve_alpha_window(target, k)?, k as i32)?);
    }
    Ok(out)
}

/// The principal conjugate pair (branch index 0, α ∈ (0, π)), which is
/// nonreal exactly when z < −1/e — the regime with no real roots at all.
/// For z ∈ (−1/e, 0) the α-equation has no solution in (0, π) (the two
/// real roots live on branch 0 instead) and this returns the branch error.
pub fn xx_principal_pair(z: f64) -> Result<[BranchRoot; 2]> {
    if !(z < 0.0) {
        return Err(Error::domain(format!(
            "the alpha parameterization is exposed for z < 0, got {z}"
        )));
    }
    conjugate_pair(z, solve_alpha_window((-z).ln(), 0)?, 0)
}

const HALLEY_ITER_CAP: u32 = 100;

/// Lambert W on branch k by Halley iteration from the asymptotic seed
/// `ln z + 2πik − ln(ln z + 2πik)`. Cross-check route for the α-roots.
pub fn lambert_w(z: Complex64, k: i32) -> Result<Complex64> {
    let l1 = z.ln() + Complex64::new(0.0, 2.0 * std::f64::consts::PI * f64::from(k));
    // the asymptotic seed degenerates when |L1| is small (k = 0, z near 1);
    // ln(1 + z) is a serviceable starting point in that pocket
    let mut w = if l1.norm() > 1.2 {
        l1 - l1.ln()
    } else {
        (z + 1.0).ln()
    };
    if !w.is_finite() {
        return Err(Error::domain(format!("lambert_w seed undefined for z = {z}, k = {k}")));
    }
    for _ in 0..HALLEY_ITER_CAP {
        let ew = w.exp();
        let f = w * ew - z;
        if f.norm() < 1e-15 * (z.norm() + w.norm() * ew.norm()) {
            return Ok(w);
        }
        let fp = ew * (w + 1.0);
        let fpp = ew * (w + 2.0);
        let denom = fp - f * fpp / (2.0 * fp);
        let step = f / denom;
        w -= step;
        if step.norm() < 1e-16 * w.norm() {
            return Ok(w);
        }
    }
    Err(Error::Convergence {
        what: format!("lambert_w({z}, {k})"),
        iterations: HALLEY_ITER_CAP,
    })
}

/// Euler's "sum" of `Σ (−1)^n n!`: the Gompertz integral, computed by two
/// independent parameterizations that must agree to 1e−10.
pub fn euler_divergent_sum() -> Result<f64> {
    let spec = QuadratureSpec::new(64, Scheme::GaussLegendre, 1e-13)?;
    // ∫₀¹ (1/t) e^{1−1/t} dt, substituting u = 1/t − 1 …
    let substituted = specfun::integrate(|u| (-u).exp() / (1.0 + u), 0.0, 40.0, &spec)?;
    // … and the original form (integrand → 0 as t → 0⁺ faster than any power)
    let direct = specfun::integrate(
        |t| if t == 0.0 { 0.0 } else { (1.0 - 1.0 / t).exp() / t },
        0.0,
        1.0,
        &spec,
    )?;
    if (substituted - direct).abs() > 1e-10 {
        return Err(Error::numeric(format!(
            "Gompertz parameterizations disagree: {substituted} vs {direct}"
        )));
    }
    Ok(substituted)
}

/// Partial sums of `Σ (−1)^n n!`: 1, 0, 2, −4, 20, …
pub fn euler_divergent_partial_sums(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut acc = 0.0_f64;
    let mut fact = 1.0_f64;
    for n in 0..count {
        if n > 0 {
            fact *= n as f64;
        }
        acc += if n % 2 == 0 { fact } else { -fact };
        out.push(acc);
    }
    out
}

/// The conjugate function `f(x) = x − 1/x`.
pub fn conj_f(x: f64) -> f64 {
    x - 1.0 / x
}

/// The conjugate function `φ(x) = x + 1/x`; `φ² − f² = 4` for all x ≠ 0.
pub fn conj_phi(x: f64) -> f64 {
    x + 1.0 / x
}

/// Both roots of `p² − ap = b` (b > 0) through the conjugate pair:
/// `m = a/√b`, `x = (m + √(m²+4))/2`, roots `x√b` and `−√b/x`.
pub fn conj_solve_quadratic(a: f64, b: f64) -> Result<[f64; 2]> {
    if !(b > 0.0) {
        return Err(Error::domain(format!("b must be > 0, got {b}")));
    }
    let sqrt_b = b.sqrt();
    let m = a / sqrt_b;
    let x = 0.5 * (m + (m * m + 4.0).sqrt());
    Ok([x * sqrt_b, -sqrt_b / x])
}

/// The real root of `p³ + ap = b` (a > 0, monotone cubic) by the identity
/// `f(x³) = f(x)³ + 3f(x)`: substitute `p = q√(a/3)` and read q = f(x) off
/// `x³ = (m + √(m²+4))/2` with `m = (3/a)^{3/2} b`.
pub fn conj_solve_cubic(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("a must be > 0, got {a}")));
    }
    let m = (3.0 / a).powf(1.5) * b;
    let x_cubed = 0.5 * (m + (m * m + 4.0).sqrt());
    let x = x_cubed.cbrt();
    let q = x - 1.0 / x;
    Ok(q * (a / 3.0).sqrt())
}

/// λ = (−1 + √5)/2, the positive root of x² + x − 1 (divergence angle 2πλ).
pub fn golden_ratio_root() -> f64 {
    0.5 * (5.0_f64.sqrt() - 1.0)
}

/// The sequence 1, 2, 3, 5, 8, … (each term the sum of the previous two,
/// starting 1, 2 — note the offset against the modern F₁ = F₂ = 1 indexing).
pub fn fibonacci(n: u32) -> Result<u64> {
    let (mut a, mut b) = (1u64, 2u64); // F(0), F(1)
    if n == 0 {
        return Ok(a);
    }
    for _ in 1..n {
        let next = a.checked_add(b).ok_or(Error::Overflow)?;
        a = b;
        b = next;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn series_trivial_and_residual() {
        assert_eq!(xx_series(0.0, 10).unwrap(), 1.0);
        let x = xx_series(0.2, 400).unwrap();
        assert!((x * x.ln() - 0.2).abs() < 1e-10);
        let x = xx_series(-0.3, 400).unwrap();
        assert!((x * x.ln() + 0.3).abs() < 1e-10);
    }

    #[test]
    fn series_out_of_radius() {
        assert!(matches!(xx_series(0.4, 100), Err(Error::OutOfRadius { .. })));
        assert!(matches!(xx_series(-0.4, 100), Err(Error::OutOfRadius { .. })));
    }

    #[test]
    fn series_and_newton_agree_inside_radius() {
        for i in -8..=8 {
            let z = 0.04 * i as f64;
            let series = xx_series(z, 600).unwrap();
            let branch = if z < 0.0 && series < 1.0 {
                // the series follows the branch through x = 1 (upper)
                RealBranch::Upper
            } else {
                RealBranch::Upper
            };
            let newton = xx_newton(z.exp(), branch).unwrap();
            assert!(
                (series - newton).abs() < 1e-12,
                "z = {z}: {series} vs {newton}"
            );
        }
    }

    #[test]
    fn newton_exact_points() {
        assert!((xx_newton(4.0, RealBranch::Upper).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(xx_newton(1.0, RealBranch::Upper).unwrap(), 1.0);
        assert!((xx_newton(27.0, RealBranch::Upper).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn newton_lower_branch() {
        let x = xx_newton(0.8, RealBranch::Lower).unwrap();
        assert!(x < INV_E);
        assert!((x * x.ln() - 0.8_f64.ln()).abs() < 1e-12);
        // upper root of the same y sits above 1/e
        let upper = xx_newton(0.8, RealBranch::Upper).unwrap();
        assert!(upper > INV_E && upper < 1.0);
        assert!((upper.powf(upper) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn newton_no_real_root_redirects() {
        let y = (-1.0_f64).exp(); // ln y = −1 < −1/e
        assert!(matches!(xx_newton(y, RealBranch::Upper), Err(Error::NoRealRoot)));
        assert!(matches!(xx_newton(y, RealBranch::Lower), Err(Error::NoRealRoot)));
        assert!(xx_newton(0.9, RealBranch::Lower).is_ok());
    }

    #[test]
    fn complex_roots_residuals_and_conjugacy() {
        for &z in &[-0.2, -1.0, -5.0] {
            let roots = xx_complex_roots(z, 5).unwrap();
            assert_eq!(roots.len(), 10);
            for pair in roots.chunks(2) {
                assert!(pair[0].residual < 1e-10);
                let conj = pair[0].x.conj();
                assert_eq!(pair[1].x, conj);
                assert_eq!(pair[1].alpha, -pair[0].alpha);
                assert_eq!(pair[1].branch_index, pair[0].branch_index);
            }
        }
    }

    #[test]
    fn complex_roots_match_lambert_branches() {
        for &z in &[-0.2, -1.0, -5.0] {
            let mut roots = xx_complex_roots(z, 5).unwrap();
            if z < -INV_E {
                roots.extend(xx_principal_pair(z).unwrap());
            }
            for root in roots.iter().filter(|r| r.alpha > 0.0) {
                let w = lambert_w(Complex64::new(z, 0.0), root.branch_index).unwrap();
                let xw = w.exp();
                assert!(
                    (root.x - xw).norm() < 1e-9,
                    "z={z} k={}: {} vs {xw}",
                    root.branch_index,
                    root.x
                );
                // the branch parameter is exactly Im W_k
                assert!((root.alpha - w.im).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn complex_roots_alpha_strictly_increasing_and_im_distinct() {
        let roots = xx_complex_roots(-1.0, 5).unwrap();
        let uppers: Vec<&BranchRoot> = roots.iter().filter(|r| r.alpha > 0.0).collect();
        for pair in uppers.windows(2) {
            assert!(pair[1].alpha > pair[0].alpha);
            assert!((pair[1].x.im - pair[0].x.im).abs() > 1e-12);
        }
    }

    #[test]
    fn complex_roots_domain() {
        assert!(xx_complex_roots(0.5, 3).is_err());
        assert!(xx_complex_roots(-1.0, 0).is_err());
    }

    #[test]
    fn principal_pair_only_below_minus_inv_e() {
        // z = −0.2 > −1/e: two real roots exist instead of a branch-0 pair
        assert!(matches!(xx_principal_pair(-0.2), Err(Error::Domain(_))));
        // z = −1 < −1/e: branch 0 is nonreal;
        // frozen against e^{W_0(−1)} = e^{−0.3181…+1.3372…i}
        let pair = xx_principal_pair(-1.0).unwrap();
        assert_eq!(pair[0].branch_index, 0);
        let principal = if pair[0].alpha > 0.0 { &pair[0] } else { &pair[1] };
        assert!(principal.residual < 1e-10);
        assert_relative_eq!(principal.x.re, 0.16837637908722291, max_relative = 1e-10);
        assert_relative_eq!(principal.x.im, 0.7077541887847276, max_relative = 1e-10);
    }

    #[test]
    fn divergent_sum_value_and_bracketing() {
        let v = euler_divergent_sum().unwrap();
        assert!((v - 0.5963473623231941).abs() < 1e-9);
        let sums = euler_divergent_partial_sums(8);
        assert_eq!(&sums[0..4], &[1.0, 0.0, 2.0, -4.0]);
        // the two smallest-term truncations bracket the integral …
        assert!(sums[1] < v && v < sums[0]);
        // … with error bounded by the first omitted term
        assert!((v - sums[0]).abs() <= 1.0); // omitted term after S₀ is 1! = 1
        assert!((v - sums[1]).abs() <= 2.0); // omitted after S₁ is 2! = 2
        // terms grow: |S_n − S_{n−1}| = n! eventually increases
        let diffs: Vec<f64> = sums.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(diffs.windows(2).skip(1).all(|d| d[1] > d[0]));
    }

    #[test]
    fn conjugate_pair_identity() {
        for &x in &[0.3, 1.0, -2.7, 11.0] {
            let (f, phi) = (conj_f(x), conj_phi(x));
            assert_relative_eq!(phi * phi - f * f, 4.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn quadratic_by_conjugate_tables() {
        let r = conj_solve_quadratic(0.0, 1.0).unwrap();
        assert_eq!(r, [1.0, -1.0]);
        let r = conj_solve_quadratic(3.0, 4.0).unwrap();
        assert_relative_eq!(r[0], 4.0, epsilon = 1e-12);
        assert_relative_eq!(r[1], -1.0, epsilon = 1e-12);
        for root in r {
            assert!((root * root - 3.0 * root - 4.0).abs() < 1e-10);
        }
        // Vieta: product of roots = −b
        let r = conj_solve_quadratic(1.7, 2.9).unwrap();
        assert_relative_eq!(r[0] * r[1], -2.9, max_relative = 1e-12);
    }

    #[test]
    fn cubic_by_conjugate_identity() {
        // p³ + 3p = 4 has p = 1 (via x = φ, the golden ratio)
        let p = conj_solve_cubic(3.0, 4.0).unwrap();
        assert_relative_eq!(p, 1.0, epsilon = 1e-12);
        assert_eq!(conj_solve_cubic(3.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(conj_solve_cubic(3.0, -4.0).unwrap(), -1.0, epsilon = 1e-12);
        // residual on a few (a, b)
        for &(a, b) in &[(0.5, 2.0), (2.0, -7.0), (9.0, 0.3)] {
            let p = conj_solve_cubic(a, b).unwrap();
            assert!((p * p * p + a * p - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn golden_ratio_and_fibonacci() {
        let lambda = golden_ratio_root();
        assert_relative_eq!(lambda, 0.6180339887498949, epsilon = 1e-15);
        assert!((lambda * lambda + lambda - 1.0).abs() < 1e-15);
        assert!((lambda * (1.0 + lambda) - 1.0).abs() < 1e-15);

        assert_eq!(fibonacci(0).unwrap(), 1);
        assert_eq!(fibonacci(1).unwrap(), 2);
        assert_eq!(fibonacci(4).unwrap(), 8);
        for n in 2..=90 {
            assert_eq!(
                fibonacci(n).unwrap(),
                fibonacci(n - 1).unwrap() + fibonacci(n - 2).unwrap()
            );
        }
        // F(n)/F(n+1) → λ
        let ratio = fibonacci(40).unwrap() as f64 / fibonacci(41).unwrap() as f64;
        assert!((ratio - lambda).abs() < 1e-10);
        assert!(matches!(fibonacci(92), Err(Error::Overflow)));
    }

    #[test]
    fn lambert_w_principal_branch_real_values() {
        // W_0(1) = Ω
        let w = lambert_w(Complex64::new(1.0, 0.0), 0).unwrap();
        assert_relative_eq!(w.re, 0.5671432904097838, max_relative = 1e-12);
        assert!(w.im.abs() < 1e-12);
    }
}
