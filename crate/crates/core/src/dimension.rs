//! Joint bandwidth/compute dimensioning.
//!
//! Area, distance and resolution sit at their quantile bounds (`A = κ₄`,
//! `r = κ₃`, `s = κ₅`). For a given compute capacity `H` the waiting-time
//! budget `T(H)` is the M/D/1 quantile and the bandwidth `B(H)` is the smallest
//! one meeting the deadline, which leaves a convex scalar problem in `H`.

use serde::{Deserialize, Serialize};

use crate::capacity::{capacity_il, capacity_nl, NetworkConfig, PowerRegime};
use crate::error::{Binding, Error, Result};
use crate::geometry::{kappa3, kappa4, GeneralizedGamma, GeometryModel};
use crate::offload::{mdone_wait_ccdf, mdone_wait_quantile, min_resolution, InferenceModel, TrafficModel};
use crate::specfun::lambert_w0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QosSpec {
    /// End-to-end deadline `D`, seconds.
    pub d_max: f64,
    pub omega_min: f64,
    pub eta_r: f64,
    pub eta_a: f64,
    pub a_min: f64,
    pub rho_max: f64,
}

impl Default for QosSpec {
    fn default() -> Self {
        Self {
            d_max: 0.5,
            omega_min: 0.8,
            eta_r: 0.999,
            eta_a: 0.999,
            a_min: 0.9,
            rho_max: 0.99,
        }
    }
}

impl QosSpec {
    pub fn validate(&self, inf: &InferenceModel) -> Result<()> {
        if !(self.d_max > 0.0 && self.d_max.is_finite()) {
            return Err(Error::Config(format!("qos.d_max must be positive, got {}", self.d_max)));
        }
        for (name, v) in [
            ("omega_min", self.omega_min),
            ("eta_r", self.eta_r),
            ("eta_a", self.eta_a),
            ("rho_max", self.rho_max),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("qos.{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.a_min < inf.c3) {
            return Err(Error::Config(format!(
                "qos.a_min must be below inference.c3 = {}, got {}",
                inf.c3, self.a_min
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostSpec {
    pub beta1: f64,
    pub beta2: f64,
    pub vartheta: f64,
    /// FLOPS per unit of `H` in the cost. `H` itself is in TFLOPS, so the
    /// default of 1e12 prices compute per FLOPS.
    pub compute_unit_flops: f64,
}

impl Default for CostSpec {
    fn default() -> Self {
        Self {
            beta1: 0.5,
            beta2: 1e-6,
            vartheta: 1.0,
            compute_unit_flops: 1e12,
        }
    }
}

impl CostSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta1) {
            return Err(Error::Config(format!("cost.beta1 must lie in [0, 1], got {}", self.beta1)));
        }
        if !(self.beta2 > 0.0 && self.beta2.is_finite()) {
            return Err(Error::Config(format!("cost.beta2 must be positive, got {}", self.beta2)));
        }
        if !(self.vartheta >= 0.0 && self.vartheta.is_finite()) {
            return Err(Error::Config(format!("cost.vartheta must be >= 0, got {}", self.vartheta)));
        }
        if !(self.compute_unit_flops > 0.0 && self.compute_unit_flops.is_finite()) {
            return Err(Error::Config(format!(
                "cost.compute_unit_flops must be positive, got {}",
                self.compute_unit_flops
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NoiseLimited,
    InterferenceLimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    CondT,
    CondRho,
    Both,
    NotGuaranteed,
}

impl Certificate {
    pub fn holds(self) -> bool {
        self != Certificate::NotGuaranteed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Bits per pixel after compression, `θ/ξ`.
    pub kappa1: f64,
    /// Traffic over admissible load, `λ/ρ_max`.
    pub kappa2: f64,
    /// Worst-case serving distance, km.
    pub kappa3: f64,
    /// Worst-case cell area, km².
    pub kappa4: f64,
    /// Minimum resolution, pixels.
    pub kappa5: f64,
}

/// Everything that defines one dimensioning instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub network: NetworkConfig,
    pub traffic: TrafficModel,
    pub inference: InferenceModel,
    pub qos: QosSpec,
    pub cost: CostSpec,
    pub max_dist_fit: GeneralizedGamma,
    pub area_fit: GeneralizedGamma,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            traffic: TrafficModel::default(),
            inference: InferenceModel::default(),
            qos: QosSpec::default(),
            cost: CostSpec::default(),
            max_dist_fit: GeneralizedGamma::MAX_DISTANCE,
            area_fit: GeneralizedGamma::CELL_AREA,
        }
    }
}

impl Scenario {
    pub fn geometry(&self) -> GeometryModel {
        GeometryModel {
            lambda_b: self.network.lambda_b,
            max_dist_fit: self.max_dist_fit,
            area_fit: self.area_fit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        self.traffic.validate()?;
        self.inference.validate()?;
        self.qos.validate(&self.inference)?;
        self.cost.validate()?;
        self.geometry().validate()
    }
}

/// Search limits that turn unbounded growth into a clean infeasibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Largest admissible bandwidth, Hz.
    pub b_ceiling: f64,
    /// Largest admissible compute capacity, TFLOPS.
    pub h_ceiling: f64,
    /// Relative tolerance of the search in `H`.
    pub h_rel_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            b_ceiling: 1e10,
            h_ceiling: 1e9,
            h_rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionSolution {
    /// Bandwidth per frame transmission, Hz.
    pub b_opt: f64,
    /// Compute capacity per server, TFLOPS.
    pub h_opt: f64,
    /// Waiting-time budget, s.
    pub t_opt: f64,
    /// Aggregation area, km².
    pub a_opt: f64,
    pub r_fixed: f64,
    pub s_fixed: f64,
    pub rho_opt: f64,
    /// Service time at the optimum, s.
    pub ts_opt: f64,
    /// Cost per km², including the constant area term.
    pub objective: f64,
    pub certificate: Certificate,
    pub regime: Regime,
}

impl DimensionSolution {
    /// Compute capacity per processed frame, `H/(λA)`.
    pub fn compute_per_frame(&self, traffic: &TrafficModel) -> f64 {
        self.h_opt / (traffic.lambda_rate * self.a_opt)
    }
}

pub fn compute_constants(
    net: &NetworkConfig,
    traffic: &TrafficModel,
    inf: &InferenceModel,
    qos: &QosSpec,
    geom: &GeometryModel,
) -> Result<DerivedConstants> {
    net.validate()?;
    traffic.validate()?;
    inf.validate()?;
    qos.validate(inf)?;
    Ok(DerivedConstants {
        kappa1: traffic.theta_bits / traffic.xi_compress,
        kappa2: traffic.lambda_rate / qos.rho_max,
        kappa3: kappa3(geom, qos.eta_r)?,
        kappa4: kappa4(geom, qos.eta_a)?,
        kappa5: min_resolution(inf, qos.a_min)?,
    })
}

/// Rate model of the worst-case user at `r = κ₃`.
enum Link {
    Noise { cfg: NetworkConfig, r: f64 },
    /// Spectral efficiencies of the fractional and peak branches, bit/s/Hz.
    Interference { eta_low: f64, eta_peak: f64 },
}

impl Link {
    fn new(net: &NetworkConfig, r: f64, regime: Regime) -> Result<Self> {
        Ok(match regime {
            Regime::NoiseLimited => Link::Noise { cfg: *net, r },
            Regime::InterferenceLimited => Link::Interference {
                eta_low: capacity_il(net, 1.0, r, Some(PowerRegime::Fractional))?,
                eta_peak: capacity_il(net, 1.0, r, Some(PowerRegime::Peak))?,
            },
        })
    }

    /// Rate of the binding branch, `min(φ_low, φ_peak)`.
    fn rate(&self, b: f64) -> Result<f64> {
        match self {
            Link::Noise { cfg, r } => Ok(capacity_nl(cfg, b, *r, Some(PowerRegime::Fractional))?
                .min(capacity_nl(cfg, b, *r, Some(PowerRegime::Peak))?)),
            Link::Interference { eta_low, eta_peak } => Ok(b * eta_low.min(*eta_peak)),
        }
    }

    /// Smallest bandwidth delivering `rate`, or `None` above `ceiling`.
    fn bandwidth_for(&self, rate: f64, ceiling: f64) -> Result<Option<f64>> {
        match self {
            Link::Interference { eta_low, eta_peak } => {
                let b = rate / eta_low.min(*eta_peak);
                Ok((b <= ceiling).then_some(b))
            }
            Link::Noise { .. } => {
                if self.rate(ceiling)? < rate {
                    return Ok(None);
                }
                let mut hi = 1e3f64.min(ceiling);
                let mut lo = 0.0;
                while self.rate(hi)? < rate {
                    lo = hi;
                    hi = (hi * 2.0).min(ceiling);
                }
                for _ in 0..200 {
                    if hi - lo <= 1e-13 * hi {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if mid <= 0.0 {
                        break;
                    }
                    if self.rate(mid)? >= rate {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Ok(Some(hi))
            }
        }
    }
}

/// Reduced problem: everything as a function of `H` alone.
struct Reduced {
    k: DerivedConstants,
    link: Link,
    payload: f64,
    work: f64,
    lambda: f64,
    d_max: f64,
    p_tail: f64,
    h_floor: f64,
    settings: SolverSettings,
    cost: CostSpec,
    lambda_b: f64,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    h: f64,
    t: f64,
    ts: f64,
    rho: f64,
    /// `None` when the deadline or bandwidth ceiling cannot be met.
    b: Option<f64>,
    objective: f64,
}

impl Reduced {
    fn new(s: &Scenario, regime: Regime, settings: SolverSettings) -> Result<Self> {
        s.validate()?;
        let k = compute_constants(&s.network, &s.traffic, &s.inference, &s.qos, &s.geometry())?;
        let work = s.inference.work(k.kappa5);
        Ok(Self {
            link: Link::new(&s.network, k.kappa3, regime)?,
            payload: s.traffic.payload_bits_at(k.kappa5),
            work,
            lambda: s.traffic.lambda_rate,
            d_max: s.qos.d_max,
            p_tail: 1.0 - s.qos.omega_min,
            h_floor: k.kappa4 * work * k.kappa2,
            settings,
            cost: s.cost,
            lambda_b: s.network.lambda_b,
            k,
        })
    }

    fn load(&self, h: f64) -> f64 {
        self.lambda * self.k.kappa4 * self.work / h
    }

    fn eval(&self, h: f64) -> Result<Point> {
        let ts = self.work / h;
        let rho = self.load(h);
        let t = mdone_wait_quantile(rho, ts, self.p_tail)?;
        let budget = self.d_max - t - ts;
        let b = if budget > 0.0 {
            self.link.bandwidth_for(self.payload / budget, self.settings.b_ceiling)?
        } else {
            None
        };
        let objective = match b {
            Some(b) => self.cost_of(b, h),
            None => f64::INFINITY,
        };
        Ok(Point { h, t, ts, rho, b, objective })
    }

    fn cost_of(&self, b: f64, h: f64) -> f64 {
        let c = &self.cost;
        c.beta1 * self.lambda * b + (1.0 - c.beta1) * c.beta2 * self.lambda_b * h * c.compute_unit_flops
    }

    /// Smallest feasible `H`.
    fn feasible_edge(&self) -> Result<Point> {
        let h_max = self.settings.h_ceiling;
        if self.h_floor > h_max {
            return Err(Error::infeasible(
                Binding::Stability,
                format!(
                    "stability floor H = {:.6e} TFLOPS exceeds the ceiling {:.6e}",
                    self.h_floor, h_max
                ),
            ));
        }
        let floor = self.eval(self.h_floor)?;
        if floor.b.is_some() {
            return Ok(floor);
        }
        let top = self.eval(h_max)?;
        if top.b.is_none() {
            let budget = self.d_max - top.t - top.ts;
            return Err(if budget <= 0.0 {
                Error::infeasible(
                    Binding::Deadline,
                    format!(
                        "deadline {} s leaves no uplink budget even at H = {:.3e} TFLOPS",
                        self.d_max, h_max
                    ),
                )
            } else {
                Error::infeasible(
                    Binding::Bandwidth,
                    format!(
                        "uplink budget {:.6e} s needs more than {:.3e} Hz",
                        budget, self.settings.b_ceiling
                    ),
                )
            });
        }
        // bisection in log H; `lo` infeasible, `hi` feasible
        let (mut lo, mut hi) = (self.h_floor.ln(), h_max.ln());
        let mut best = top;
        for _ in 0..200 {
            if hi - lo <= 1e-14 * hi.abs().max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let p = self.eval(mid.exp())?;
            if p.b.is_some() {
                hi = mid;
                best = p;
            } else {
                lo = mid;
            }
        }
        Ok(best)
    }

    fn minimize(&self) -> Result<Point> {
        let edge = self.feasible_edge()?;
        let h0 = edge.h;
        let mut best = edge;
        let consider = |p: Point, best: &mut Point| {
            if p.objective < best.objective || (p.objective == best.objective && p.h < best.h) {
                *best = p;
            }
        };

        // Expand H0 + Δ·2^k until the objective turns upward.
        let mut delta = h0 * 1e-3;
        let mut prev = edge;
        let mut before_prev = edge;
        let mut cur = self.eval(h0 + delta)?;
        consider(cur, &mut best);
        let mut steps = 0;
        while cur.objective < prev.objective {
            before_prev = prev;
            prev = cur;
            delta *= 2.0;
            let h = h0 + delta;
            if h > self.settings.h_ceiling {
                break;
            }
            cur = self.eval(h)?;
            consider(cur, &mut best);
            steps += 1;
            if steps > 200 {
                return Err(Error::IterationLimit {
                    func: "solve",
                    iterations: steps,
                });
            }
        }
        let (mut a, mut b) = (before_prev.h, cur.h.min(self.settings.h_ceiling));

        // Golden-section search on [a, b].
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut p1 = self.eval(x1)?;
        let mut p2 = self.eval(x2)?;
        consider(p1, &mut best);
        consider(p2, &mut best);
        let mut iterations = 0;
        while (b - a) > self.settings.h_rel_tol * x1.abs() {
            if p1.objective <= p2.objective {
                b = x2;
                x2 = x1;
                p2 = p1;
                x1 = b - inv_phi * (b - a);
                p1 = self.eval(x1)?;
                consider(p1, &mut best);
            } else {
                a = x1;
                x1 = x2;
                p1 = p2;
                x2 = a + inv_phi * (b - a);
                p2 = self.eval(x2)?;
                consider(p2, &mut best);
            }
            iterations += 1;
            if iterations > 500 {
                break;
            }
        }
        Ok(best)
    }
}

/// Solves the dimensioning problem with default search limits.
pub fn solve(s: &Scenario, regime: Regime) -> Result<DimensionSolution> {
    solve_with(s, regime, SolverSettings::default())
}

pub fn solve_with(s: &Scenario, regime: Regime, settings: SolverSettings) -> Result<DimensionSolution> {
    let red = Reduced::new(s, regime, settings)?;
    let p = red.minimize()?;
    let b = p.b.expect("minimizer is feasible");
    let mut sol = DimensionSolution {
        b_opt: b,
        h_opt: p.h,
        t_opt: p.t,
        a_opt: red.k.kappa4,
        r_fixed: red.k.kappa3,
        s_fixed: red.k.kappa5,
        rho_opt: p.rho,
        ts_opt: p.ts,
        objective: p.objective + s.cost.vartheta * red.k.kappa4,
        certificate: Certificate::NotGuaranteed,
        regime,
    };
    sol.certificate = check_optimality(&sol, &s.inference, &s.qos);
    Ok(sol)
}

/// Load above which every admissible waiting budget lies in the convex part of the tail.
pub fn rho_threshold(omega_min: f64) -> f64 {
    1.0 + lambert_w0(-omega_min / std::f64::consts::E).expect("argument lies on the principal branch")
}

/// Sufficient global-optimality conditions: `T* ≥ T_s*` or `ρ* ≥ 1 + W₀(−ω_min/e)`.
pub fn check_optimality(sol: &DimensionSolution, inf: &InferenceModel, qos: &QosSpec) -> Certificate {
    let ts = inf.work(sol.s_fixed) / sol.h_opt;
    let cond_t = sol.t_opt >= ts;
    let cond_rho = sol.rho_opt >= rho_threshold(qos.omega_min);
    match (cond_t, cond_rho) {
        (true, true) => Certificate::Both,
        (true, false) => Certificate::CondT,
        (false, true) => Certificate::CondRho,
        (false, false) => Certificate::NotGuaranteed,
    }
}

/// Uplink rate of the worst-case user at the solution's bandwidth.
pub fn worst_case_rate(sol: &DimensionSolution, net: &NetworkConfig) -> Result<f64> {
    Link::new(net, sol.r_fixed, sol.regime)?.rate(sol.b_opt)
}

/// Analytic `P(T_ul + T_w + T_s ≤ D)` for the worst-case user of the solution.
pub fn end_to_end_success_prob(
    sol: &DimensionSolution,
    net: &NetworkConfig,
    traffic: &TrafficModel,
    inf: &InferenceModel,
    qos: &QosSpec,
) -> Result<f64> {
    let rate = worst_case_rate(sol, net)?;
    let t_ul = traffic.payload_bits_at(sol.s_fixed) / rate;
    let ts = inf.work(sol.s_fixed) / sol.h_opt;
    let slack = qos.d_max - t_ul - ts;
    if slack < 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - mdone_wait_ccdf(sol.rho_opt, ts, slack)?)
}

/// Relative slack of every constraint at a solution (nonnegative when satisfied).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `((1−ω_min) − P(T_w > T))/(1−ω_min)`.
    pub waiting: f64,
    /// `(D − T_ul − T − T_s)/D` for the fractional-power branch.
    pub delay_fractional: f64,
    /// Same for the peak-power branch.
    pub delay_peak: f64,
    /// `(H − A(c1 s³+c2)κ₂)/H`.
    pub stability: f64,
    /// `(A − κ₄)/κ₄`.
    pub area: f64,
}

impl Residuals {
    pub fn min(&self) -> f64 {
        [self.waiting, self.delay_fractional, self.delay_peak, self.stability, self.area]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn constraint_residuals(sol: &DimensionSolution, s: &Scenario) -> Result<Residuals> {
    let k = compute_constants(&s.network, &s.traffic, &s.inference, &s.qos, &s.geometry())?;
    let p_tail = 1.0 - s.qos.omega_min;
    let ts = s.inference.work(sol.s_fixed) / sol.h_opt;
    let payload = s.traffic.payload_bits_at(sol.s_fixed);
    let branch = |regime: PowerRegime| -> Result<f64> {
        let rate = match sol.regime {
            Regime::NoiseLimited => capacity_nl(&s.network, sol.b_opt, sol.r_fixed, Some(regime))?,
            Regime::InterferenceLimited => capacity_il(&s.network, sol.b_opt, sol.r_fixed, Some(regime))?,
        };
        Ok((s.qos.d_max - payload / rate - sol.t_opt - ts) / s.qos.d_max)
    };
    Ok(Residuals {
        waiting: (p_tail - mdone_wait_ccdf(sol.rho_opt, ts, sol.t_opt)?) / p_tail,
        delay_fractional: branch(PowerRegime::Fractional)?,
        delay_peak: branch(PowerRegime::Peak)?,
        stability: (sol.h_opt - sol.a_opt * s.inference.work(sol.s_fixed) * k.kappa2) / sol.h_opt,
        area: (sol.a_opt - k.kappa4) / k.kappa4,
    })
}

/// One solve per `β₁`, ordered by `β₁`. Per-point failures are kept in place.
pub fn pareto_sweep(s: &Scenario, regime: Regime, beta1_grid: &[f64]) -> Vec<(f64, Result<DimensionSolution>)> {
    let mut grid: Vec<f64> = beta1_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let run = |&beta1: &f64| {
        let res = if beta1 > 0.0 && beta1 < 1.0 {
            let mut sc = *s;
            sc.cost.beta1 = beta1;
            solve(&sc, regime)
        } else {
            Err(Error::Config(format!("beta1 must lie in (0, 1), got {beta1}")))
        };
        (beta1, res)
    };
    crate::par::map(&grid, run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_from_defaults() {
        let s = Scenario {
            network: NetworkConfig {
                lambda_b: 2.0,
                ..NetworkConfig::default()
            },
            ..Scenario::default()
        };
        let k = compute_constants(&s.network, &s.traffic, &s.inference, &s.qos, &s.geometry()).unwrap();
        assert_eq!(k.kappa1, 12.0);
        assert!((k.kappa2 - 101.010_101_010_101).abs() < 1e-9);
        assert!((k.kappa5 - 424.42).abs() < 0.01);
        assert!(k.kappa3 > 0.0 && k.kappa4 > 0.0);
    }

    #[test]
    fn load_threshold() {
        assert!((rho_threshold(0.8) - 0.528).abs() < 1e-3);
    }

    fn manual(t: f64, h: f64, rho: f64) -> DimensionSolution {
        DimensionSolution {
            b_opt: 1e6,
            h_opt: h,
            t_opt: t,
            a_opt: 1.0,
            r_fixed: 1.0,
            s_fixed: 424.42,
            rho_opt: rho,
            ts_opt: InferenceModel::default().work(424.42) / h,
            objective: 0.0,
            certificate: Certificate::NotGuaranteed,
            regime: Regime::NoiseLimited,
        }
    }

    #[test]
    fn certificate_cases() {
        let inf = InferenceModel::default();
        let qos = QosSpec::default();
        let ts = inf.work(424.42) / 10.0;
        let c = check_optimality(&manual(0.0, 10.0, 0.6), &inf, &qos);
        assert!(matches!(c, Certificate::CondRho | Certificate::Both));
        assert!(matches!(
            check_optimality(&manual(2.0 * ts, 10.0, 0.1), &inf, &qos),
            Certificate::CondT | Certificate::Both
        ));
        assert_eq!(check_optimality(&manual(0.0, 10.0, 0.3), &inf, &qos), Certificate::NotGuaranteed);
        assert_eq!(check_optimality(&manual(2.0 * ts, 10.0, 0.9), &inf, &qos), Certificate::Both);
    }

    #[test]
    fn baseline_noise_limited_solution_is_consistent() {
        let s = Scenario {
            network: NetworkConfig {
                lambda_b: 2.0,
                ..NetworkConfig::default()
            },
            ..Scenario::default()
        };
        let sol = solve(&s, Regime::NoiseLimited).unwrap();
        let res = constraint_residuals(&sol, &s).unwrap();
        assert!(res.min() >= -1e-6, "{res:?}");
        // the waiting-time and the binding delay constraint are active
        assert!(res.waiting.abs() < 1e-6 || sol.rho_opt <= 1.0 - s.qos.omega_min);
        assert!(res.delay_fractional.min(res.delay_peak).abs() < 1e-6, "{res:?}");
        assert!(sol.rho_opt <= s.qos.rho_max * (1.0 + 1e-12));
        let p = end_to_end_success_prob(&sol, &s.network, &s.traffic, &s.inference, &s.qos).unwrap();
        assert!(p >= s.qos.omega_min - 1e-6, "{p}");
    }

    #[test]
    fn tiny_deadline_is_infeasible() {
        let s = Scenario {
            qos: QosSpec {
                d_max: 1e-12,
                ..QosSpec::default()
            },
            ..Scenario::default()
        };
        match solve(&s, Regime::NoiseLimited) {
            Err(Error::Infeasible { cause, .. }) => assert_eq!(cause, Binding::Deadline),
            other => panic!("expected deadline infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn bandwidth_ceiling_is_reported() {
        let settings = SolverSettings {
            b_ceiling: 1e3,
            ..SolverSettings::default()
        };
        match solve_with(&Scenario::default(), Regime::NoiseLimited, settings) {
            Err(Error::Infeasible { cause, .. }) => assert_eq!(cause, Binding::Bandwidth),
            other => panic!("expected bandwidth infeasibility, got {other:?}"),
        }
    }
}
