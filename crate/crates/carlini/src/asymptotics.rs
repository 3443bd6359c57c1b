//! Large-index behaviour of the series coefficients and the limit constants.
//!
//! With `f = √(1−c²)` and `α = c/(1+f)`, the corrected large-p formulas are
//!
//! ```text
//! P_p ≈ (1/p)(αe^f)^p (1 + 4/(3√(2pπ) f³))
//! Q_p ≈ −(2 (1−c²)^{1/4} / (p√p √(2π))) (αe^f)^p
//! ```
//!
//! so both series converge whenever `αe^f = c e^{√(1−c²)}/(1+√(1−c²)) < 1`,
//! which holds for every eccentricity below 1. The historical (erroneous)
//! analysis replaced f by `g = √(1+c²)` and predicted divergence beyond the
//! root of `c e^g/(1+g) = 1` — the limit constant ≈ 0.66274 — with the
//! companion radius threshold `ln c + √(1+c²) = ln 2` ≈ 0.62. Both the
//! corrected margin and the erroneous ratio are exposed so the two stories
//! can be compared numerically.
//!
//! Everything p-indexed is returned as a log-domain [`LogValue`]; at p = 200
//! the factor (αe^f)^p alone is ~1e−40.

use crate::specfun::{self, LogValue, Sign};
use crate::{Error, Result};

/// Which formula produced an [`AsymptoticEstimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymVariant {
    JacobiP,
    JacobiQ,
    CarliniErroneousPRatio,
    CarliniPprime,
}

/// A log-domain asymptotic value tagged with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticEstimate {
    pub value: LogValue,
    pub index: u32,
    pub eccentricity: f64,
    pub variant: AsymVariant,
}

fn check_inputs(c: f64, p: u32) -> Result<()> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::domain(format!("eccentricity must lie in [0, 1), got {c}")));
    }
    if p < 1 {
        return Err(Error::domain("index p must be ≥ 1".to_string()));
    }
    Ok(())
}

/// `f = √(1−c²)` and `α = c/(1+f)`.
fn f_alpha(c: f64) -> (f64, f64) {
    let f = (1.0 - c * c).sqrt();
    (f, c / (1.0 + f))
}

/// Corrected large-p estimate of the true-anomaly coefficient P_p.
///
/// The circular orbit c = 0 returns the exact sign-zero estimate (every
/// coefficient vanishes) rather than an error.
pub fn jacobi_p_asym(c: f64, p: u32) -> Result<AsymptoticEstimate> {
    check_inputs(c, p)?;
    let value = if c == 0.0 {
        LogValue::zero()
    } else {
        let (f, alpha) = f_alpha(c);
        let pf = f64::from(p);
        let correction = 1.0 + 4.0 / (3.0 * (2.0 * pf * std::f64::consts::PI).sqrt() * f.powi(3));
        LogValue::from_parts(
            Sign::Positive,
            -pf.ln() + pf * (alpha.ln() + f) + correction.ln(),
        )
    };
    Ok(AsymptoticEstimate {
        value,
        index: p,
        eccentricity: c,
        variant: AsymVariant::JacobiP,
    })
}

/// Corrected large-p estimate of the radius coefficient Q_p (always negative).
pub fn jacobi_q_asym(c: f64, p: u32) -> Result<AsymptoticEstimate> {
    check_inputs(c, p)?;
    let value = if c == 0.0 {
        LogValue::zero()
    } else {
        let (f, alpha) = f_alpha(c);
        let pf = f64::from(p);
        LogValue::from_parts(
            Sign::Negative,
            2.0_f64.ln() + 0.25 * (1.0 - c * c).ln()
                - 1.5 * pf.ln()
                - 0.5 * (2.0 * std::f64::consts::PI).ln()
                + pf * (alpha.ln() + f),
        )
    };
    Ok(AsymptoticEstimate {
        value,
        index: p,
        eccentricity: c,
        variant: AsymVariant::JacobiQ,
    })
}

/// The historical convergence ratio `(c/(1+g)) e^g` with the erroneous
/// `g = √(1+c²)`. Crosses 1 exactly at the limit constant.
pub fn carlini_erroneous_ratio(c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::domain(format!("eccentricity must lie in [0, 1), got {c}")));
    }
    let g = (1.0 + c * c).sqrt();
    Ok(c / (1.0 + g) * g.exp())
}

/// Corrected convergence margin `1 − c e^{√(1−c²)}/(1+√(1−c²))`, strictly
/// positive on [0, 1).
pub fn corrected_convergence_margin(c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::domain(format!("eccentricity must lie in [0, 1), got {c}")));
    }
    let (f, alpha) = f_alpha(c);
    Ok(1.0 - alpha * f.exp())
}

const LIMIT_BRACKET: (f64, f64) = (0.3, 0.95);

/// The limit constant: root of `c e^{√(1+c²)}/(1+√(1+c²)) = 1` (≈ 0.66274).
pub fn carlini_laplace_constant(tol: f64) -> Result<f64> {
    specfun::find_root(
        |c| {
            let g = (1.0 + c * c).sqrt();
            c / (1.0 + g) * g.exp() - 1.0
        },
        LIMIT_BRACKET.0,
        LIMIT_BRACKET.1,
        tol,
    )
}

/// The radius-series threshold: root of `ln c + √(1+c²) = ln 2` (≈ 0.62).
pub fn carlini_radius_threshold(tol: f64) -> Result<f64> {
    specfun::find_root(
        |c| c.ln() + (1.0 + c * c).sqrt() - 2.0_f64.ln(),
        LIMIT_BRACKET.0,
        LIMIT_BRACKET.1,
        tol,
    )
}

/// The finite-sum contribution to P_p:
/// `P′ = (2α^p/p) e^{pf} · P(p+1, pf)` with the regularized lower incomplete
/// gamma carrying `(1/p!)∫₀^{pf} x^p e^{−x} dx`.
pub fn carlini_p_prime(c: f64, p: u32) -> Result<AsymptoticEstimate> {
    check_inputs(c, p)?;
    let value = if c == 0.0 {
        LogValue::zero()
    } else {
        let (f, alpha) = f_alpha(c);
        let pf = f64::from(p);
        let gamma = specfun::reg_inc_gamma_lower(pf + 1.0, pf * f)?;
        if gamma == 0.0 {
            LogValue::zero()
        } else {
            LogValue::from_parts(
                Sign::Positive,
                2.0_f64.ln() + pf * alpha.ln() - pf.ln() + pf * f + gamma.ln(),
            )
        }
    };
    Ok(AsymptoticEstimate {
        value,
        index: p,
        eccentricity: c,
        variant: AsymVariant::CarliniPprime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{fourier_quadrature, Family};
    use approx::assert_relative_eq;

    #[test]
    fn p_asym_small_index_arithmetic() {
        // p = 1, c = 0.5: (αe^f)(1 + 4/(3√(2π) f³)) assembled by hand
        let est = jacobi_p_asym(0.5, 1).unwrap();
        let f = 0.75_f64.sqrt();
        let alpha = 0.5 / (1.0 + f);
        let expect = alpha * f.exp()
            * (1.0 + 4.0 / (3.0 * (2.0 * std::f64::consts::PI).sqrt() * f.powi(3)));
        assert_relative_eq!(est.value.value(), expect, max_relative = 1e-13);
        assert!(expect > 1.15 && expect < 1.17); // ≈ 0.637·1.819
    }

    #[test]
    fn p_asym_zero_eccentricity_vanishes() {
        assert!(jacobi_p_asym(0.0, 7).unwrap().value.is_zero());
        assert!(jacobi_q_asym(0.0, 7).unwrap().value.is_zero());
        assert!(carlini_p_prime(0.0, 7).unwrap().value.is_zero());
    }

    #[test]
    fn p_asym_tracks_exact_coefficients() {
        let exact = fourier_quadrature(Family::TrueAnomalySine, 0.5, 200).unwrap();
        let est = jacobi_p_asym(0.5, 200).unwrap();
        let rel = est.value.rel_deviation(&LogValue::from_value(exact));
        assert!(rel < 0.02, "relative error {rel}");
    }

    #[test]
    fn q_asym_sign_and_accuracy() {
        let est = jacobi_q_asym(0.5, 100).unwrap();
        assert_eq!(est.value.sign(), Sign::Negative);
        let exact = fourier_quadrature(Family::RadiusMeanCosine, 0.5, 100).unwrap();
        assert!(exact < 0.0);
        let rel = est.value.rel_deviation(&LogValue::from_value(exact));
        assert!(rel < 0.05, "relative error {rel}");
    }

    #[test]
    fn q_asym_doubling_slope_matches_ratio() {
        // log|Q| drops by ≈ p·ln(ratio) when p doubles 50 → 100
        let q50 = jacobi_q_asym(0.5, 50).unwrap().value.log_magnitude();
        let q100 = jacobi_q_asym(0.5, 100).unwrap().value.log_magnitude();
        let ratio: f64 = 0.63706;
        let expected = 50.0 * ratio.ln();
        let measured = q100 - q50;
        assert!(
            (measured - expected).abs() < 0.05_f64 * expected.abs() + 1.5,
            "measured {measured}, expected ≈ {expected}"
        );
    }

    #[test]
    fn q_asym_base_approaches_one_near_unit_eccentricity() {
        // as c → 1⁻ the geometric base tends to 1: only polynomial decay left
        let c = 0.999999;
        let (f, alpha) = f_alpha(c);
        assert!(alpha * f.exp() > 0.999);
        let est = jacobi_q_asym(c, 10).unwrap();
        // |Q| ≈ 2(1−c²)^{1/4}/(10^{1.5}√(2π)) up to the ≈1 geometric factor
        let poly = 2.0 * (1.0 - c * c).powf(0.25) / (10.0_f64.powf(1.5) * (2.0 * std::f64::consts::PI).sqrt());
        assert_relative_eq!(est.value.value().abs(), poly, max_relative = 0.01);
    }

    #[test]
    fn erroneous_ratio_crossings() {
        // ≈ 1 at the printed constant, < 1 below, > 1 above
        assert!((carlini_erroneous_ratio(0.66274).unwrap() - 1.0).abs() < 1e-4);
        let at_half = carlini_erroneous_ratio(0.5).unwrap();
        assert!(at_half < 1.0);
        assert_relative_eq!(at_half, 0.7220928939182486, max_relative = 1e-12);
        assert!(carlini_erroneous_ratio(0.8).unwrap() > 1.0);
    }

    #[test]
    fn limit_constant_and_threshold() {
        let c = carlini_laplace_constant(1e-10).unwrap();
        assert!((c - 0.6627434193492) < 1e-8 && (0.6627434193492 - c) < 1e-8);
        let ratio = carlini_erroneous_ratio(c).unwrap();
        assert!((ratio - 1.0).abs() < 1e-7);

        let t = carlini_radius_threshold(1e-10).unwrap();
        assert!((t - 0.61746901).abs() < 1e-6);
        assert!((t.ln() + (1.0 + t * t).sqrt() - 2.0_f64.ln()).abs() < 1e-8);
        assert!(t < c);
    }

    #[test]
    fn erroneous_ratio_monotone_on_bracket() {
        let mut prev = 0.0;
        for i in 0..=30 {
            let c = 0.5 + 0.3 * i as f64 / 30.0;
            let r = carlini_erroneous_ratio(c).unwrap();
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn corrected_margin_positive_everywhere() {
        assert_eq!(corrected_convergence_margin(0.0).unwrap(), 1.0);
        for i in 0..=99 {
            let c = i as f64 / 100.0;
            assert!(corrected_convergence_margin(c).unwrap() > 0.0, "margin at {c}");
        }
        let tight = corrected_convergence_margin(0.99).unwrap();
        assert!(tight > 0.0 && tight < 0.01);
        // positive right at the erroneous constant, where the old ratio said 1
        assert!(corrected_convergence_margin(0.66274).unwrap() > 0.15);
    }

    #[test]
    fn p_prime_small_index_assembly() {
        // p = 1, c = 0.5: 2α e^f P(2, f)
        let est = carlini_p_prime(0.5, 1).unwrap();
        let f = 0.75_f64.sqrt();
        let alpha = 0.5 / (1.0 + f);
        let expect = 2.0 * alpha * f.exp() * crate::specfun::reg_inc_gamma_lower(2.0, f).unwrap();
        assert_relative_eq!(est.value.value(), expect, max_relative = 1e-12);
    }

    #[test]
    fn p_prime_root_test_trend() {
        // |P′|^{1/p} approaches αe^f from below; the gap shrinks monotonically
        let c = 0.3;
        let (f, alpha) = f_alpha(c);
        let target = alpha * f.exp();
        let mut prev_gap = f64::INFINITY;
        for p in [20u32, 50, 100] {
            let est = carlini_p_prime(c, p).unwrap();
            let root = (est.value.log_magnitude() / f64::from(p)).exp();
            let gap = (root - target).abs();
            assert!(gap < prev_gap, "gap not shrinking at p={p}: {gap} vs {prev_gap}");
            prev_gap = gap;
        }
        assert!(prev_gap < 0.025);
    }

    #[test]
    fn signs_of_asymptotics() {
        for c in [0.1, 0.3, 0.5, 0.9] {
            assert_eq!(jacobi_p_asym(c, 17).unwrap().value.sign(), Sign::Positive);
            assert_eq!(jacobi_q_asym(c, 17).unwrap().value.sign(), Sign::Negative);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(jacobi_p_asym(1.0, 5).is_err());
        assert!(jacobi_p_asym(0.5, 0).is_err());
        assert!(carlini_erroneous_ratio(-0.1).is_err());
    }

    #[test]
    fn asymptotic_error_decreases_with_index() {
        for c in [0.3, 0.5] {
            let mut prev = f64::INFINITY;
            for p in [50u32, 100, 200] {
                let exact = fourier_quadrature(Family::TrueAnomalySine, c, p).unwrap();
                let est = jacobi_p_asym(c, p).unwrap();
                let rel = est.value.rel_deviation(&LogValue::from_value(exact));
                assert!(rel < prev, "error not decreasing at c={c}, p={p}");
                prev = rel;
            }
        }
    }

    #[test]
    fn root_test_agreement_with_rate_fit() {
        // exp(fit slope) matches the asymptotic base αe^f within 1% at c = 0.5
        let table = crate::fourier::CoefficientTable::build(
            Family::TrueAnomalySine,
            0.5,
            200,
            crate::fourier::Source::FourierQuadrature,
        )
        .unwrap();
        let rate = crate::fourier::empirical_geometric_rate(&table, 50, 200).unwrap();
        let (f, alpha) = f_alpha(0.5);
        assert!((rate / (alpha * f.exp()) - 1.0).abs() < 0.01);
    }
}
