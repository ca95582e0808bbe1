use rayon::prelude::*;
use serde_json::json;

use edgedim::capacity::{capacity_il, capacity_nl, NetworkConfig};
use edgedim::dimension::{
    compute_constants, constraint_residuals, end_to_end_success_prob, pareto_sweep, rho_threshold, solve, Certificate,
    DerivedConstants, DimensionSolution, Regime, Residuals, Scenario,
};
use edgedim::geometry::{distance_cdf, gen_gamma_cdf};
use edgedim::montecarlo::{
    empirical_geometry, ks_distance, mc_capacity_il, mc_capacity_nl, mc_wait_ccdf, sim_end_to_end, InterfererModel,
    SimSeed, SimWindow,
};
use edgedim::offload::mdone_wait_ccdf;
use edgedim::Error;

use crate::config::ScenarioConfig;
use crate::grid::{apply, product, Axis};
use crate::output::{num, Table};

/// Text to emit and the process exit code that goes with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: u8,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, code: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    Usage(String),
    /// A computation failed after the inputs were accepted; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn internal(e: Error) -> CliError {
    CliError::Internal(e.to_string())
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::NoiseLimited => "noise_limited",
        Regime::InterferenceLimited => "interference_limited",
    }
}

fn certificate_name(c: Certificate) -> &'static str {
    match c {
        Certificate::CondT => "cond_t",
        Certificate::CondRho => "cond_rho",
        Certificate::Both => "both",
        Certificate::NotGuaranteed => "not_guaranteed",
    }
}

/// Axes from the flags, falling back to the config's sweep section.
fn resolve_axes(cfg: &ScenarioConfig, flags: &[String], extra: &[&'static str]) -> CliResult<Vec<Axis>> {
    let axes: Result<Vec<Axis>, String> = if flags.is_empty() {
        match &cfg.sweep {
            Some(sw) => Axis::new(&sw.parameter, sw.values.clone(), extra).map(|a| vec![a]),
            None => Ok(Vec::new()),
        }
    } else {
        flags.iter().map(|f| Axis::parse(f, extra)).collect()
    };
    let axes = axes.map_err(CliError::Usage)?;
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!("axis {} given twice", a.name)));
        }
    }
    Ok(axes)
}

fn describe(axes: &[Axis], point: &[f64]) -> String {
    axes.iter()
        .zip(point)
        .map(|(a, v)| format!("{}={v}", a.name))
        .collect::<Vec<_>>()
        .join(", ")
}

fn run_parallel<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

// ---------------------------------------------------------------- capacity

pub struct CapacityArgs {
    pub axes: Vec<String>,
    pub bandwidth: f64,
    pub distance: f64,
}

pub fn capacity_sweep(cfg: &ScenarioConfig, args: &CapacityArgs) -> CliResult<Outcome> {
    let axes = resolve_axes(cfg, &args.axes, &["r", "b"])?;
    if axes.is_empty() {
        return Err(CliError::Usage(
            "capacity-sweep needs at least one --axis (or a [sweep] section)".into(),
        ));
    }
    let points: Vec<(Vec<f64>, NetworkConfig, f64, f64)> = product(&axes)
        .into_iter()
        .map(|p| {
            let mut c = cfg.clone();
            let (mut b, mut r) = (args.bandwidth, args.distance);
            for (a, &v) in axes.iter().zip(&p) {
                match a.name {
                    "r" => r = v,
                    "b" => b = v,
                    name => apply(&mut c, name, v).map_err(CliError::Usage)?,
                }
            }
            let net = c.network.to_config();
            let checked = net
                .validate()
                .map_err(|e| e.to_string())
                .and_then(|_| if r > 0.0 { Ok(()) } else { Err(format!("r must be positive, got {r}")) })
                .and_then(|_| if b > 0.0 { Ok(()) } else { Err(format!("b must be positive, got {b}")) });
            checked.map_err(|e| CliError::Usage(format!("sweep point {}: {e}", describe(&axes, &p))))?;
            Ok((p, net, b, r))
        })
        .collect::<CliResult<_>>()?;

    let regime = cfg.regime;
    let values = run_parallel(&points, |(_, net, b, r)| match regime {
        Regime::NoiseLimited => capacity_nl(net, *b, *r, None),
        Regime::InterferenceLimited => capacity_il(net, *b, *r, None),
    });

    // r, b, m_antennas and epsilon always have their own columns
    let echoed: Vec<usize> = (0..axes.len())
        .filter(|&i| !["r", "b", "m_antennas", "epsilon"].contains(&axes[i].name))
        .collect();
    let mut header = vec!["regime".to_string()];
    header.extend(echoed.iter().map(|&i| axes[i].name.to_string()));
    header.extend(
        ["b_hz", "r_km", "m_antennas", "epsilon", "r_th_km", "power_regime", "capacity_bps", "spectral_efficiency"]
            .map(String::from),
    );
    let mut table = Table::new(header);
    for ((p, net, b, r), cap) in points.iter().zip(values) {
        let cap = cap.map_err(internal)?;
        let r_th = net.power_threshold();
        let mut row = vec![regime_name(regime).to_string()];
        row.extend(echoed.iter().map(|&i| num(p[i])));
        row.extend([
            num(*b),
            num(*r),
            net.m_antennas.to_string(),
            num(net.epsilon),
            num(r_th),
            if *r <= r_th { "fractional" } else { "peak" }.to_string(),
            num(cap),
            num(cap / b),
        ]);
        table.push(row);
    }
    Ok(Outcome::ok(table.to_csv()))
}

// ---------------------------------------------------------------- dimension

/// A solution together with the quantities recomputed for emission.
struct Checked {
    sol: DimensionSolution,
    constants: DerivedConstants,
    residuals: Residuals,
    success: f64,
}

const RESIDUAL_TOL: f64 = 1e-6;

/// Recomputes constraints at the solution and rejects anything that would emit an invalid row.
fn check(sol: DimensionSolution, s: &Scenario) -> CliResult<Checked> {
    let k = compute_constants(&s.network, &s.traffic, &s.inference, &s.qos, &s.geometry()).map_err(internal)?;
    let residuals = constraint_residuals(&sol, s).map_err(internal)?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
    let mut problems = Vec::new();
    if residuals.min() < -RESIDUAL_TOL {
        problems.push(format!("constraint violated, residuals {residuals:?}"));
    }
    if !(close(sol.r_fixed, k.kappa3) && close(sol.a_opt, k.kappa4) && close(sol.s_fixed, k.kappa5)) {
        problems.push("r, A or s left its lower bound".into());
    }
    if !(sol.rho_opt > 0.0 && sol.rho_opt <= s.qos.rho_max * (1.0 + 1e-12)) {
        problems.push(format!("load {} outside (0, rho_max]", sol.rho_opt));
    }
    if ![sol.b_opt, sol.h_opt, sol.objective].iter().all(|x| x.is_finite() && *x > 0.0) {
        problems.push("nonpositive or nonfinite resource".into());
    }
    // a zero waiting budget is fine when P(Tw > 0) = rho already meets the tail target
    if !(sol.t_opt.is_finite() && sol.t_opt >= 0.0) {
        problems.push(format!("waiting budget {} is negative or nonfinite", sol.t_opt));
    }
    if !problems.is_empty() {
        return Err(CliError::Internal(format!("emitted solution is invalid: {}", problems.join("; "))));
    }
    let success = end_to_end_success_prob(&sol, &s.network, &s.traffic, &s.inference, &s.qos).map_err(internal)?;
    Ok(Checked {
        sol,
        constants: k,
        residuals,
        success,
    })
}

/// Bandwidth and compute parts of the objective.
fn cost_terms(sol: &DimensionSolution, s: &Scenario) -> (f64, f64) {
    let c = &s.cost;
    (
        c.beta1 * s.traffic.lambda_rate * sol.b_opt,
        (1.0 - c.beta1) * c.beta2 * s.network.lambda_b * sol.h_opt * c.compute_unit_flops,
    )
}

const RESULT_COLUMNS: [&str; 14] = [
    "status",
    "binding",
    "b_opt",
    "h_opt",
    "t_opt",
    "a_opt",
    "rho_opt",
    "objective",
    "certificate",
    "per_frame_bandwidth",
    "per_frame_compute",
    "success_probability",
    "min_residual",
    "regime",
];

/// Result row cells in `RESULT_COLUMNS` order; infeasible points leave the numbers empty.
fn result_cells(res: &Result<Checked, (String, String)>, s: &Scenario, regime: Regime) -> Vec<String> {
    match res {
        Ok(c) => vec![
            "ok".into(),
            String::new(),
            num(c.sol.b_opt),
            num(c.sol.h_opt),
            num(c.sol.t_opt),
            num(c.sol.a_opt),
            num(c.sol.rho_opt),
            num(c.sol.objective),
            certificate_name(c.sol.certificate).into(),
            num(c.sol.b_opt),
            num(c.sol.compute_per_frame(&s.traffic)),
            num(c.success),
            num(c.residuals.min()),
            regime_name(regime).into(),
        ],
        Err((binding, _)) => {
            let mut row = vec!["infeasible".into(), binding.clone()];
            row.extend(std::iter::repeat_n(String::new(), 11));
            row.push(regime_name(regime).into());
            row
        }
    }
}

/// Solves and checks one scenario; infeasibility becomes `(binding, detail)`.
fn solve_checked(s: &Scenario, regime: Regime) -> CliResult<Result<Checked, (String, String)>> {
    match solve(s, regime) {
        Ok(sol) => check(sol, s).map(Ok),
        Err(Error::Infeasible { cause, detail }) => Ok(Err((cause.to_string(), detail))),
        Err(e) => Err(internal(e)),
    }
}

pub struct DimensionArgs {
    pub axes: Vec<String>,
    pub proportional_reuse: bool,
}

pub fn dimension(cfg: &ScenarioConfig, args: &DimensionArgs) -> CliResult<Outcome> {
    let axes = resolve_axes(cfg, &args.axes, &[])?;
    if args.proportional_reuse {
        if !axes.iter().any(|a| a.name == "lambda_b") {
            return Err(CliError::Usage("--proportional-reuse needs a lambda_b axis".into()));
        }
        if axes.iter().any(|a| a.name == "delta") {
            return Err(CliError::Usage("--proportional-reuse sets delta; do not sweep it as well".into()));
        }
    }
    if axes.is_empty() {
        return dimension_single(cfg);
    }
    let ratio = cfg.network.delta / cfg.network.lambda_b;
    let points: Vec<(Vec<f64>, Scenario)> = product(&axes)
        .into_iter()
        .map(|p| {
            let mut c = cfg.clone();
            for (a, &v) in axes.iter().zip(&p) {
                apply(&mut c, a.name, v).map_err(CliError::Usage)?;
            }
            if args.proportional_reuse {
                c.network.delta = ratio * c.network.lambda_b;
            }
            let s = c.scenario();
            s.validate()
                .map_err(|e| CliError::Usage(format!("sweep point {}: {e}", describe(&axes, &p))))?;
            Ok((p, s))
        })
        .collect::<CliResult<_>>()?;

    let regime = cfg.regime;
    let results = run_parallel(&points, |(_, s)| solve_checked(s, regime));

    let mut header: Vec<String> = axes.iter().map(|a| a.name.to_string()).collect();
    if args.proportional_reuse {
        header.push("delta".into());
    }
    header.extend(RESULT_COLUMNS.map(String::from));
    let mut table = Table::new(header);
    let mut any_infeasible = false;
    for ((p, s), res) in points.iter().zip(results) {
        let res = res?;
        any_infeasible |= res.is_err();
        let mut row: Vec<String> = p.iter().map(|&v| num(v)).collect();
        if args.proportional_reuse {
            row.push(num(s.network.delta));
        }
        row.extend(result_cells(&res, s, regime));
        table.push(row);
    }
    Ok(Outcome {
        body: table.to_csv(),
        code: if any_infeasible { 3 } else { 0 },
    })
}

fn dimension_single(cfg: &ScenarioConfig) -> CliResult<Outcome> {
    let s = cfg.scenario();
    let regime = cfg.regime;
    let value = match solve_checked(&s, regime)? {
        Ok(c) => {
            let (b_cost, h_cost) = cost_terms(&c.sol, &s);
            json!({
                "status": "ok",
                "regime": regime_name(regime),
                "solution": c.sol,
                "certificate": {
                    "status": certificate_name(c.sol.certificate),
                    "guaranteed": c.sol.certificate.holds(),
                    "rho_threshold": rho_threshold(s.qos.omega_min),
                },
                "residuals": c.residuals,
                "min_residual": c.residuals.min(),
                "constants": c.constants,
                "per_frame": {
                    "bandwidth_hz": c.sol.b_opt,
                    "compute_tflops": c.sol.compute_per_frame(&s.traffic),
                },
                "cost_terms": { "bandwidth": b_cost, "compute": h_cost },
                "success_probability": c.success,
            })
        }
        Err((binding, detail)) => {
            let body = json!({ "status": "infeasible", "regime": regime_name(regime), "binding": binding, "detail": detail });
            return Ok(Outcome {
                body: pretty(&body),
                code: 3,
            });
        }
    };
    Ok(Outcome::ok(pretty(&value)))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- pareto

/// `i/22` for `i = 1..=21`.
pub fn default_beta_grid() -> Vec<f64> {
    (1..=21).map(|i| i as f64 / 22.0).collect()
}

pub fn pareto(cfg: &ScenarioConfig, grid: &[f64]) -> CliResult<Outcome> {
    if grid.is_empty() {
        return Err(CliError::Usage("pareto grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
        return Err(CliError::Usage(format!("beta1 values must lie in (0, 1), got {bad}")));
    }
    let s = cfg.scenario();
    let regime = cfg.regime;
    let mut header = vec!["beta1".to_string()];
    header.extend(RESULT_COLUMNS.map(String::from));
    header.extend(["b_cost", "h_cost", "cost_ratio", "comparable"].map(String::from));
    let mut table = Table::new(header);
    let mut any_infeasible = false;
    for (beta1, res) in pareto_sweep(&s, regime, grid) {
        let mut sc = s;
        sc.cost.beta1 = beta1;
        let res = match res {
            Ok(sol) => Ok(check(sol, &sc)?),
            Err(Error::Infeasible { cause, detail }) => Err((cause.to_string(), detail)),
            Err(e) => return Err(internal(e)),
        };
        any_infeasible |= res.is_err();
        let mut row = vec![num(beta1)];
        row.extend(result_cells(&res, &sc, regime));
        match &res {
            Ok(c) => {
                let (b_cost, h_cost) = cost_terms(&c.sol, &sc);
                let ratio = b_cost / h_cost;
                row.extend([num(b_cost), num(h_cost), num(ratio), ((0.1..=10.0).contains(&ratio)).to_string()]);
            }
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        table.push(row);
    }
    Ok(Outcome {
        body: table.to_csv(),
        code: if any_infeasible { 3 } else { 0 },
    })
}

// ---------------------------------------------------------------- validate

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Geometry,
    CapacityNl,
    CapacityIl,
    Queue,
    EndToEnd,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Geometry, Check::CapacityNl, Check::CapacityIl, Check::Queue, Check::EndToEnd];

    pub fn name(self) -> &'static str {
        match self {
            Check::Geometry => "geometry",
            Check::CapacityNl => "capacity_nl",
            Check::CapacityIl => "capacity_il",
            Check::Queue => "queue",
            Check::EndToEnd => "end_to_end",
        }
    }

    /// Default sample budget.
    pub fn default_n(self) -> u64 {
        match self {
            Check::Geometry | Check::CapacityIl | Check::EndToEnd => 100_000,
            Check::CapacityNl | Check::Queue => 1_000_000,
        }
    }

    fn stream(self) -> u64 {
        self as u64
    }
}

pub struct ValidateArgs {
    pub checks: Vec<Check>,
    pub n: Option<u64>,
    pub rho: Vec<f64>,
    pub bandwidth: f64,
    pub distance: f64,
}

struct Line {
    pass: bool,
    text: String,
}

fn line(pass: bool, check: Check, text: String) -> Line {
    Line {
        pass,
        text: format!("{} [{}] {text}", if pass { "PASS" } else { "FAIL" }, check.name()),
    }
}

/// Relative-error tolerances of the capacity checks.
const NL_TOL: f64 = 0.01;
const IL_TOL: f64 = 0.03;
/// Kolmogorov–Smirnov bound for the exact nearest-distance law.
const KS_TOL: f64 = 0.01;
/// Sup-distance bound for the fitted cell laws.
const FIT_TOL: f64 = 0.03;

pub fn validate(cfg: &ScenarioConfig, args: &ValidateArgs) -> CliResult<Outcome> {
    if args.n == Some(0) {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    if args.checks.is_empty() {
        return Err(CliError::Usage("nothing to validate".into()));
    }
    if let Some(bad) = args.rho.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(CliError::Usage(format!("--rho values must lie in (0, 1), got {bad}")));
    }
    if !(args.bandwidth > 0.0 && args.bandwidth.is_finite() && args.distance > 0.0 && args.distance.is_finite()) {
        return Err(CliError::Usage("--bandwidth and --distance must be positive".into()));
    }
    let s = cfg.scenario();
    let mut lines = Vec::new();
    for &c in &args.checks {
        let n = args.n.unwrap_or(c.default_n());
        let seed = SimSeed::new(cfg.seed.seed).with_stream(cfg.seed.stream_id.wrapping_add(c.stream()));
        let out = match c {
            Check::Geometry => validate_geometry(&s, n, seed),
            Check::CapacityNl => validate_capacity(&s.network, Regime::NoiseLimited, args, n, seed),
            Check::CapacityIl => validate_capacity(&s.network, Regime::InterferenceLimited, args, n, seed),
            Check::Queue => validate_queue(&args.rho, n, seed),
            Check::EndToEnd => validate_end_to_end(&s, cfg.regime, n, seed),
        };
        lines.extend(out.map_err(internal)?);
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    let mut body: String = lines.iter().map(|l| format!("{}\n", l.text)).collect();
    body.push_str(&format!("summary: {passed}/{} passed\n", lines.len()));
    Ok(Outcome {
        body,
        code: if passed == lines.len() { 0 } else { 4 },
    })
}

/// Half-width of the 95% Dvoretzky–Kiefer–Wolfowitz band.
fn dkw95(n: usize) -> f64 {
    ((2.0f64 / 0.05).ln() / (2.0 * n as f64)).sqrt()
}

fn validate_geometry(s: &Scenario, n: u64, seed: SimSeed) -> edgedim::Result<Vec<Line>> {
    let scale = s.network.lambda_b.sqrt();
    let window = SimWindow::new(3.0 / scale, 2.5 / scale)?;
    let g = empirical_geometry(s.network.lambda_b, &window, seed, n)?;
    let ks = ks_distance(&g.nearest, |x| distance_cdf(x).unwrap_or(f64::NAN));
    let area = ks_distance(&g.area, |x| gen_gamma_cdf(&s.area_fit, x).unwrap_or(f64::NAN));
    let maxd = ks_distance(&g.max_distance, |x| gen_gamma_cdf(&s.max_dist_fit, x).unwrap_or(f64::NAN));
    let c = Check::Geometry;
    Ok(vec![
        line(
            ks < KS_TOL,
            c,
            format!(
                "nearest distance: KS {ks:.5} < {KS_TOL} (95% DKW band {:.5}, n={})",
                dkw95(g.nearest.len()),
                g.nearest.len()
            ),
        ),
        line(
            area < FIT_TOL,
            c,
            format!(
                "cell area fit: sup {area:.5} < {FIT_TOL} (95% DKW band {:.5}, n={})",
                dkw95(g.area.len()),
                g.area.len()
            ),
        ),
        line(
            maxd < FIT_TOL,
            c,
            format!(
                "max distance fit: sup {maxd:.5} < {FIT_TOL} (95% DKW band {:.5}, n={})",
                dkw95(g.max_distance.len()),
                g.max_distance.len()
            ),
        ),
    ])
}

fn validate_capacity(
    net: &NetworkConfig,
    regime: Regime,
    args: &ValidateArgs,
    n: u64,
    seed: SimSeed,
) -> edgedim::Result<Vec<Line>> {
    let (b, r) = (args.bandwidth, args.distance);
    let (exact, mc, tol, check) = match regime {
        Regime::NoiseLimited => (
            capacity_nl(net, b, r, None)?,
            mc_capacity_nl(net, b, r, None, n, seed)?,
            NL_TOL,
            Check::CapacityNl,
        ),
        Regime::InterferenceLimited => {
            let window = SimWindow::new(20.0 / net.lambda_b.sqrt(), 0.0)?;
            (
                capacity_il(net, b, r, None)?,
                mc_capacity_il(net, b, r, None, &window, InterfererModel::Iid, n, seed)?,
                IL_TOL,
                Check::CapacityIl,
            )
        }
    };
    let rel = mc.mean / exact - 1.0;
    let (lo, hi) = mc.ci95();
    Ok(vec![line(
        rel.abs() < tol,
        check,
        format!(
            "B={b:e} r={r}: closed form {exact:.6e}, simulated {:.6e} CI [{lo:.6e}, {hi:.6e}], |rel err| {:.2e} < {tol} (n={n})",
            mc.mean,
            rel.abs()
        ),
    )])
}

fn validate_queue(rhos: &[f64], n: u64, seed: SimSeed) -> edgedim::Result<Vec<Line>> {
    let ratios = [0.0, 0.5, 1.0, 2.0, 5.0];
    let mut lines = Vec::new();
    for (i, &rho) in rhos.iter().enumerate() {
        let props = mc_wait_ccdf(rho, 1.0, &ratios, n, seed.with_stream(seed.stream_id.wrapping_add(16 * i as u64)))?;
        for (&x, p) in ratios.iter().zip(&props) {
            let exact = mdone_wait_ccdf(rho, 1.0, x)?;
            let (lo, hi) = p.ci95();
            lines.push(line(
                lo <= exact && exact <= hi,
                Check::Queue,
                format!(
                    "rho={rho} T/Ts={x}: analytic {exact:.6} vs simulated {:.6} CI [{lo:.6}, {hi:.6}] (n={})",
                    p.estimate(),
                    p.trials
                ),
            ));
        }
        let point = mdone_wait_ccdf(rho, 1.0, 1.0)?;
        let closed = 1.0 - (1.0 - rho) * rho.exp();
        let err = (point - closed).abs();
        lines.push(line(
            err <= 1e-12,
            Check::Queue,
            format!("rho={rho}: P(Tw > Ts) = {point:.15} vs 1-(1-rho)e^rho, |diff| {err:.1e} <= 1e-12"),
        ));
    }
    Ok(lines)
}

fn validate_end_to_end(s: &Scenario, regime: Regime, n: u64, seed: SimSeed) -> edgedim::Result<Vec<Line>> {
    let sol = match solve(s, regime) {
        Ok(sol) => sol,
        Err(Error::Infeasible { cause, detail }) => {
            return Ok(vec![line(
                false,
                Check::EndToEnd,
                format!("{}: no feasible solution ({cause}): {detail}", regime_name(regime)),
            )])
        }
        Err(e) => return Err(e),
    };
    let analytic = end_to_end_success_prob(&sol, &s.network, &s.traffic, &s.inference, &s.qos)?;
    let p = sim_end_to_end(&sol, s, n, seed)?;
    let (lo, hi) = p.ci95();
    let omega = s.qos.omega_min;
    Ok(vec![line(
        hi >= omega,
        Check::EndToEnd,
        format!(
            "{}: simulated success {:.5} CI [{lo:.5}, {hi:.5}] vs omega_min {omega} (analytic {analytic:.5}, n={})",
            regime_name(regime),
            p.estimate(),
            p.trials
        ),
    )])
}
