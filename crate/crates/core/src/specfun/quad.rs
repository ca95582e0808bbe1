//! Adaptive Gauss–Kronrod (G10/K21) quadrature on finite and semi-infinite intervals.
//!
//! Semi-infinite integrals `∫_lo^∞ f(t) dt` are mapped onto `[0, 1)` with
//! `t = lo + u/(1−u)`, `dt = du/(1−u)²`. The Kronrod nodes never touch `u = 1`,
//! so the integrand is never evaluated at infinity.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::domain(
                "QuadratureSpec",
                format!(
                    "need rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1 (got {}, {}, {})",
                    self.rel_tol, self.abs_tol, self.max_subdivisions
                ),
            ));
        }
        Ok(())
    }

    pub(crate) fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        // Gauss nodes are the odd Kronrod indices.
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::domain(
            "integrate",
            format!("integrand is not finite on [{a}, {b}]"),
        ));
    }
    Ok(Segment { a, b, value, error })
}

fn adaptive<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut segments = vec![kronrod21(&mut f, a, b)?];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(Estimate {
                value,
                error,
                subdivisions: segments.len(),
            });
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: value,
                error_bound: error,
                subdivisions: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval cannot be split further in floating point.
            return Err(Error::NonConvergence {
                estimate: value,
                error_bound: error,
                subdivisions: segments.len() + 1,
            });
        }
        segments.push(kronrod21(&mut f, seg.a, mid)?);
        segments.push(kronrod21(&mut f, mid, seg.b)?);
    }
}

/// Integrates a fallible integrand over `[lo, hi]`, `hi` possibly `+∞`.
pub fn try_integrate<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if lo.is_nan() || hi.is_nan() || lo == f64::NEG_INFINITY || lo == f64::INFINITY {
        return Err(Error::domain(
            "integrate",
            format!("unsupported bounds [{lo}, {hi}]"),
        ));
    }
    if hi == f64::INFINITY {
        return adaptive(
            |u| {
                let w = 1.0 - u;
                let v = f(lo + u / w)?;
                Ok(v / (w * w))
            },
            0.0,
            1.0,
            spec,
        );
    }
    if hi == lo {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    if hi < lo {
        let est = adaptive(f, hi, lo, spec)?;
        return Ok(Estimate {
            value: -est.value,
            ..est
        });
    }
    adaptive(f, lo, hi, spec)
}

/// Integrates `f` over `[lo, hi]` (`hi` may be `f64::INFINITY`) to within
/// `max(abs_tol, rel_tol·|result|)`.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), lo, hi, spec).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    const ERFC3_TAIL: f64 = 1.957_719_323_677_976e-5;

    fn check(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, exact: f64) {
        let got = integrate(f, lo, hi, &QuadratureSpec::default()).unwrap();
        assert!(
            (got - exact).abs() <= 1e-10_f64.max(1e-8 * exact.abs()),
            "[{lo}, {hi}]: got {got}, want {exact}"
        );
    }

    #[test]
    fn known_integrals() {
        check(|t| (-t).exp(), 0.0, f64::INFINITY, 1.0);
        check(|t| 1.0 / (1.0 + t * t), 0.0, f64::INFINITY, PI / 2.0);
        // antiderivative −e^{−πt²}/(2π)
        check(|t| t * (-PI * t * t).exp(), 0.0, f64::INFINITY, 1.0 / (2.0 * PI));
        check(|t| (-t * t).exp(), 0.0, f64::INFINITY, PI.sqrt() / 2.0);
        check(|t| t * t, 0.0, 3.0, 9.0);
        check(|t| t.sin(), 0.0, PI, 2.0);
        check(|t| t.cos(), 0.0, PI / 2.0, 1.0);
        check(|t| 1.0 / t, 1.0, E, 1.0);
        check(|t| t.ln(), 1.0, E, 1.0);
        check(|t| 1.0 / t.sqrt(), 0.0, 1.0, 2.0);
        check(|t| t.sqrt(), 0.0, 4.0, 16.0 / 3.0);
        check(|t| 1.0 / (t * t), 1.0, f64::INFINITY, 1.0);
        check(|t| 1.0 / (1.0 + t).powi(3), 0.0, f64::INFINITY, 0.5);
        check(|t| t * (-t).exp(), 0.0, f64::INFINITY, 1.0);
        check(|t| t.powi(3) * (-t).exp(), 0.0, f64::INFINITY, 6.0);
        check(|t| (-2.0 * t).exp() * t.sin(), 0.0, f64::INFINITY, 0.2);
        check(|t| 1.0 / (1.0 + t * t), -1.0, 1.0, PI / 2.0);
        check(|t| t.exp(), 0.0, 1.0, E - 1.0);
        check(|t| 1.0 / (4.0 + t * t), 0.0, f64::INFINITY, PI / 4.0);
        check(|t| (1.0 - t * t).sqrt(), -1.0, 1.0, PI / 2.0);
        check(|t| (-t).exp() * t.sqrt(), 0.0, f64::INFINITY, PI.sqrt() / 2.0);
        // ∫_{-3}^∞ e^{-u²} du = √π − (√π/2)·erfc(3)
        check(|t| (-(t - 5.0).powi(2)).exp(), 2.0, f64::INFINITY, PI.sqrt() - ERFC3_TAIL);
    }

    #[test]
    fn reversed_and_empty_bounds() {
        let spec = QuadratureSpec::default();
        let fwd = integrate(|t| t * t, 0.0, 2.0, &spec).unwrap();
        let rev = integrate(|t| t * t, 2.0, 0.0, &spec).unwrap();
        assert!((fwd + rev).abs() < 1e-14);
        assert_eq!(integrate(|t| t, 1.0, 1.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn exhausted_budget_reports_estimate() {
        let spec = QuadratureSpec::new(1e-14, 0.0, 3).unwrap();
        let err = integrate(|t| (50.0 * t).sin().abs(), 0.0, 10.0, &spec).unwrap_err();
        match err {
            Error::NonConvergence {
                estimate,
                error_bound,
                subdivisions,
            } => {
                assert!(estimate.is_finite() && error_bound > 0.0);
                assert_eq!(subdivisions, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::new(0.0, 0.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-6, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-6, 0.0, 0).is_err());
    }
}
