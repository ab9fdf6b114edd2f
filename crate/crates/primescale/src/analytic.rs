//! Numerical estimators used by the statistical observations: the
//! principal-value logarithmic integral li(x), the sigmoid weight
//! psi(x) = x^e / (1 + x^e), and the density threshold e^(8^k).

use crate::error::{Error, Result};

/// Tuning for the estimators.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorConfig {
    /// Relative quadrature tolerance for li; must lie in (0, 1e-6].
    pub tolerance: f64,
    /// Exponent of the psi weight.
    pub psi_exponent: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { tolerance: 1e-9, psi_exponent: 0.06 }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-6) {
            return Err(Error::Config(format!(
                "quadrature tolerance must be in (0, 1e-6], got {}",
                self.tolerance
            )));
        }
        if !(self.psi_exponent > 0.0) {
            return Err(Error::Config(format!(
                "psi exponent must be positive, got {}",
                self.psi_exponent
            )));
        }
        Ok(())
    }
}

// Integrand 1/ln(t), with the removable endpoint 1/ln(0+) = 0.
fn inv_log(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        1.0 / t.ln()
    }
}

// Symmetric pairing of the principal-value singularity at t = 1:
// g(u) = 1/ln(1+u) + 1/ln(1-u). The 1/u poles cancel; near zero the
// expansion g(u) = 1 + u^2/12 + O(u^3) avoids catastrophic cancellation.
fn paired(u: f64) -> f64 {
    if u < 1e-4 {
        1.0 + u * u / 12.0
    } else if u >= 1.0 {
        1.0 / f64::ln(2.0)
    } else {
        1.0 / u.ln_1p() + 1.0 / (-u).ln_1p()
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    refine(f, a, b, fa, fm, fb, whole, abs_tol, 60)
}

fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    // fixed-panel pass just to scale the absolute tolerance
    let panels = 64;
    let h = (b - a) / panels as f64;
    let mut coarse = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        coarse += simpson(f(x0), f(x0 + 0.5 * h), f(x0 + h), h);
    }
    let abs_tol = rel_tol * coarse.abs().max(1.0);
    integrate(&f, a, b, abs_tol)
}

/// Principal-value logarithmic integral li(x) for x > 1.
///
/// Integrates the symmetric pairing of the singularity at t = 1 plus the
/// smooth remainder, with adaptive Simpson quadrature at the configured
/// relative tolerance.
pub fn li(x: f64, cfg: &EstimatorConfig) -> Result<f64> {
    cfg.validate()?;
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("li(x) requires finite x > 1, got {x}")));
    }
    let tol = cfg.tolerance;
    let value = if x >= 2.0 {
        // li(x) = INT_0^1 g(u) du + INT_2^x dt/ln t
        adaptive(paired, 0.0, 1.0, tol) + adaptive(inv_log, 2.0, x, tol)
    } else {
        // pair only up to x-1, leaving INT_0^(2-x) dt/ln t
        adaptive(paired, 0.0, x - 1.0, tol) + adaptive(inv_log, 0.0, 2.0 - x, tol)
    };
    Ok(value)
}

/// Sigmoid weight psi(x) = x^e / (1 + x^e); lies in (1/2, 1) for x > 1.
pub fn psi(x: f64, cfg: &EstimatorConfig) -> f64 {
    debug_assert!(x > 0.0, "psi requires x > 0");
    let p = x.powf(cfg.psi_exponent);
    p / (1.0 + p)
}

/// Natural logarithm of the density threshold e^(8^k) beyond which the
/// primes cannot be dense under the level-k partition. Returned in log
/// domain (the value itself overflows f64 from k = 2 on).
pub fn density_threshold_ln(k: u32) -> f64 {
    assert!(k >= 1);
    8f64.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 30-digit arbitrary-precision
    // arithmetic before this module was written.
    const LI_2: f64 = 1.045_163_780_117_492_8;
    const LI_10: f64 = 6.165_599_504_787_298;
    const LI_1E5: f64 = 9_629.809_001_050_798;
    const LI_REFERENCE_N: f64 = 3_871_016.794_845_363;

    fn cfg() -> EstimatorConfig {
        EstimatorConfig::default()
    }

    /// Independent route: li(x) = gamma + ln(ln x) + sum (ln x)^k / (k * k!),
    /// evaluated directly from the series.
    fn li_series(x: f64) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let y = x.ln();
        let mut sum = EULER_GAMMA + y.ln();
        let mut term = 1.0f64;
        for k in 1..200 {
            term *= y / k as f64;
            let contribution = term / k as f64;
            sum += contribution;
            if contribution.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    }

    #[test]
    fn li_matches_frozen_references() {
        let c = cfg();
        assert!((li(2.0, &c).unwrap() - LI_2).abs() < 1e-8);
        assert!((li(10.0, &c).unwrap() - LI_10).abs() < 1e-7);
        assert!((li(1e5, &c).unwrap() - LI_1E5).abs() / LI_1E5 < 1e-8);
        let n = 65_536_000.0;
        assert!((li(n, &c).unwrap() - LI_REFERENCE_N).abs() / LI_REFERENCE_N < 1e-8);
    }

    #[test]
    fn li_matches_series_route() {
        let c = cfg();
        for x in [2.0, 3.0, 10.0, 1e3, 1e5, 65_536_000.0] {
            let quad = li(x, &c).unwrap();
            let series = li_series(x);
            assert!(
                (quad - series).abs() / series.abs() < 1e-8,
                "x={x}: quadrature {quad} vs series {series}"
            );
        }
    }

    #[test]
    fn li_rejects_bad_domain() {
        assert!(matches!(li(1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(li(0.5, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(li(f64::NAN, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn li_strictly_increasing_beyond_two() {
        let c = cfg();
        let mut last = li(2.0, &c).unwrap();
        for x in [2.5, 3.0, 5.0, 10.0, 100.0, 1e4] {
            let v = li(x, &c).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn halving_tolerance_stays_within_coarse_bound() {
        for x in [2.0, 100.0, 65_536_000.0] {
            let coarse_cfg = EstimatorConfig { tolerance: 1e-7, ..cfg() };
            let fine_cfg = EstimatorConfig { tolerance: 5e-8, ..cfg() };
            let coarse = li(x, &coarse_cfg).unwrap();
            let fine = li(x, &fine_cfg).unwrap();
            assert!((coarse - fine).abs() <= 1e-7 * coarse.abs().max(1.0));
        }
    }

    #[test]
    fn li_continuous_at_branch_point() {
        let c = cfg();
        let below = li(2.0 - 1e-9, &c).unwrap();
        let at = li(2.0, &c).unwrap();
        assert!((below - at).abs() < 1e-6);
    }

    #[test]
    fn psi_basics() {
        let c = cfg();
        assert_eq!(psi(1.0, &c), 0.5);
        let mut last = 0.0;
        for x in [0.5, 1.0, 10.0, 1e4, 65_536_000.0] {
            let v = psi(x, &c);
            assert!(v > last);
            last = v;
        }
        // value frozen from the reference interval
        assert!((psi(65_536_000.0, &c) - 0.746_473).abs() < 1e-6);
        assert!(psi(65_536_000.0, &c) < 1.0);
    }

    #[test]
    fn density_thresholds() {
        assert!((density_threshold_ln(1).exp() - 2_980.958).abs() < 1e-2);
        assert_eq!(density_threshold_ln(2), 64.0);
        assert_eq!(density_threshold_ln(3), 512.0);
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(EstimatorConfig { tolerance: 1e-3, ..cfg() }.validate().is_err());
        assert!(EstimatorConfig { tolerance: 0.0, ..cfg() }.validate().is_err());
        assert!(EstimatorConfig { psi_exponent: 0.0, ..cfg() }.validate().is_err());
    }
}
