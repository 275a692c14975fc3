//! Path simulation of the Dunkl process.
//!
//! The continuous part (Brownian motion plus the drift `Σ k(α) α/⟨α,x⟩`) is
//! advanced by Euler–Maruyama; each root's reflection clock, with intensity
//! `k(α)/⟨α,x⟩²`, is thinned per step by a Bernoulli trial.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::rng::{purpose, PathRng};
use crate::rootsys::{RootSystem, GEOM_TOL};

/// `dt ≤ c·⟨α,x⟩²` near reflecting hyperplanes.
pub const HYPERPLANE_STEP_FACTOR: f64 = 0.1;
/// `dt ≤ c·dist(x,∂D)²` near the domain boundary, when refinement is on.
pub const BOUNDARY_STEP_FACTOR: f64 = 0.25;
pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;
/// Positions closer than this to a hyperplane are counted as near misses.
pub const NEAR_HYPERPLANE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub dt_base: f64,
    pub dt_floor: f64,
    pub adaptive: bool,
    /// Shrink the step near `∂D` so exits overshoot by `O(√dt_floor)` only.
    pub boundary_refine: bool,
    pub jump_cap_per_step: u32,
    pub seed: u64,
    pub paths: u64,
    pub max_steps: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt_base: 1e-3,
            dt_floor: 1e-7,
            adaptive: true,
            boundary_refine: true,
            jump_cap_per_step: 1,
            seed: 0,
            paths: 10_000,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl SimConfig {
    pub fn new(seed: u64, paths: u64) -> Self {
        SimConfig {
            seed,
            paths,
            ..SimConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_base > 0.0 && self.dt_floor > 0.0) {
            return Err(Error::Config("dt_base and dt_floor must be positive".into()));
        }
        if self.dt_floor > self.dt_base {
            return Err(Error::Config(format!(
                "dt_floor {} exceeds dt_base {}",
                self.dt_floor, self.dt_base
            )));
        }
        if self.paths == 0 {
            return Err(Error::Config("paths must be at least 1".into()));
        }
        if self.jump_cap_per_step == 0 {
            return Err(Error::Config("jump_cap_per_step must be at least 1".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathState {
    pub position: Vec<f64>,
    pub clock: f64,
    pub steps: u64,
    /// Indexed like `sys.roots()`.
    pub jump_count_per_root: Vec<u64>,
    pub occupation: BTreeMap<String, f64>,
    /// Post-step positions within [`NEAR_HYPERPLANE`] of a hyperplane.
    pub near_hyperplane: u64,
}

impl PathState {
    pub fn new(sys: &RootSystem, x0: &[f64]) -> Self {
        PathState {
            position: x0.to_vec(),
            clock: 0.0,
            steps: 0,
            jump_count_per_root: vec![0; sys.roots().len()],
            occupation: BTreeMap::new(),
            near_hyperplane: 0,
        }
    }

    pub fn total_jumps(&self) -> u64 {
        self.jump_count_per_root.iter().sum()
    }

    pub fn add_occupation(&mut self, region: &str, dt: f64) {
        *self.occupation.entry(region.to_string()).or_insert(0.0) += dt;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitRecord {
    pub exit_point: Vec<f64>,
    pub exit_time: f64,
    pub exited_by_jump: bool,
    pub path_seed_index: u64,
    pub steps: u64,
}

/// What the driver reports to an observer after each step.
#[derive(Debug)]
pub struct StepEvent<'a> {
    pub before: &'a [f64],
    /// Position after the diffusion move, before any reflection.
    pub diffused: &'a [f64],
    pub after: &'a [f64],
    pub dt: f64,
    pub clock: f64,
    /// Last root that fired in this step.
    pub jumped: Option<usize>,
}

fn check_off_hyperplanes(sys: &RootSystem, x: &[f64]) -> Result<()> {
    for (i, (alpha, &k)) in sys.roots().iter().zip(sys.multiplicities()).enumerate() {
        if k != 0.0 && dot(alpha, x).abs() <= GEOM_TOL {
            return Err(Error::Singularity { root: i });
        }
    }
    Ok(())
}

/// `Σ k(α) α / ⟨α,x⟩`.
pub fn drift(sys: &RootSystem, x: &[f64]) -> Result<Vec<f64>> {
    check_off_hyperplanes(sys, x)?;
    let mut out = vec![0.0; sys.dim()];
    for (alpha, &k) in sys.roots().iter().zip(sys.multiplicities()) {
        if k == 0.0 {
            continue;
        }
        let c = k / dot(alpha, x);
        for (o, a) in out.iter_mut().zip(alpha) {
            *o += c * a;
        }
    }
    Ok(out)
}

/// Reflection intensities `k(α)/⟨α,x⟩²`, indexed like `sys.roots()`.
pub fn jump_intensities(sys: &RootSystem, x: &[f64]) -> Result<Vec<f64>> {
    check_off_hyperplanes(sys, x)?;
    Ok(sys
        .roots()
        .iter()
        .zip(sys.multiplicities())
        .map(|(alpha, &k)| {
            if k == 0.0 {
                0.0
            } else {
                let a = dot(alpha, x);
                k / (a * a)
            }
        })
        .collect())
}

/// Scratch space reused across steps of one path.
struct Workspace {
    ax: Vec<f64>,
    before: Vec<f64>,
    diffused: Vec<f64>,
    fired: Vec<usize>,
}

impl Workspace {
    fn new(sys: &RootSystem) -> Self {
        Workspace {
            ax: vec![0.0; sys.roots().len()],
            before: vec![0.0; sys.dim()],
            diffused: vec![0.0; sys.dim()],
            fired: Vec::new(),
        }
    }
}

/// One Euler step with thinned reflections, in place. Roots whose
/// hyperplane contains the current position do not fire. Returns the last
/// root that fired.
fn step_in_place(
    sys: &RootSystem,
    state: &mut PathState,
    dt: f64,
    cap: u32,
    rng: &mut PathRng,
    ws: &mut Workspace,
) -> Option<usize> {
    let roots = sys.roots();
    let ks = sys.multiplicities();
    let x = &mut state.position;
    ws.before.copy_from_slice(x);
    for (a, alpha) in ws.ax.iter_mut().zip(roots) {
        *a = dot(alpha, x);
    }
    let sq = dt.sqrt();
    for xi in x.iter_mut() {
        *xi += sq * rng.normal();
    }
    for ((alpha, &k), &a) in roots.iter().zip(ks).zip(&ws.ax) {
        if k == 0.0 || dt > HYPERPLANE_STEP_FACTOR * a * a {
            continue;
        }
        let c = k * dt / a;
        for (xi, ai) in x.iter_mut().zip(alpha) {
            *xi += c * ai;
        }
    }
    // Too close for an explicit drift step (the floor binds): solve
    // u' = v + k·dt/u' along α/|α|, staying on the pre-step side.
    for ((alpha, &k), &a) in roots.iter().zip(ks).zip(&ws.ax) {
        if k == 0.0 || dt <= HYPERPLANE_STEP_FACTOR * a * a {
            continue;
        }
        let v = dot(alpha, x) / SQRT_2;
        let side = if a.abs() > GEOM_TOL { a.signum() } else { v.signum() };
        let disc = (v * v + 4.0 * k * dt).sqrt();
        let u = if side >= 0.0 {
            if v >= 0.0 { 0.5 * (v + disc) } else { 2.0 * k * dt / (disc - v) }
        } else if v <= 0.0 {
            0.5 * (v - disc)
        } else {
            -2.0 * k * dt / (disc + v)
        };
        let c = (u - v) / SQRT_2;
        for (xi, ai) in x.iter_mut().zip(alpha) {
            *xi += c * ai;
        }
    }
    ws.diffused.copy_from_slice(x);

    ws.fired.clear();
    for (i, (&k, &a)) in ks.iter().zip(&ws.ax).enumerate() {
        if k == 0.0 || a.abs() <= GEOM_TOL {
            continue;
        }
        let rate = k / (a * a);
        if rng.uniform() < -(-rate * dt).exp_m1() {
            ws.fired.push(i);
        }
    }
    let mut last = None;
    if !ws.fired.is_empty() {
        let mut n = 0;
        while !ws.fired.is_empty() && n < cap {
            let pick = if ws.fired.len() == 1 {
                0
            } else {
                // proportional to the pre-step rates
                let rate = |i: usize| ks[i] / (ws.ax[i] * ws.ax[i]);
                let total: f64 = ws.fired.iter().map(|&i| rate(i)).sum();
                let mut u = rng.uniform() * total;
                let mut j = ws.fired.len() - 1;
                for (pos, &i) in ws.fired.iter().enumerate() {
                    u -= rate(i);
                    if u < 0.0 {
                        j = pos;
                        break;
                    }
                }
                j
            };
            let root = ws.fired.swap_remove(pick);
            let alpha = &roots[root];
            let c = dot(alpha, x);
            for (xi, ai) in x.iter_mut().zip(alpha) {
                *xi -= c * ai;
            }
            state.jump_count_per_root[root] += 1;
            last = Some(root);
            n += 1;
        }
    }
    state.clock += dt;
    state.steps += 1;
    if roots
        .iter()
        .zip(ks)
        .any(|(alpha, &k)| k != 0.0 && dot(alpha, x).abs() < NEAR_HYPERPLANE)
    {
        state.near_hyperplane += 1;
    }
    last
}

/// Advances `state` by one step of size `dt`. Returns the last root that
/// fired, if any.
pub fn step(sys: &RootSystem, state: &mut PathState, dt: f64, jump_cap_per_step: u32, rng: &mut PathRng) -> Option<usize> {
    let mut ws = Workspace::new(sys);
    step_in_place(sys, state, dt, jump_cap_per_step.max(1), rng, &mut ws)
}

/// Step size at `x`: `dt_base`, shrunk near hyperplanes and (optionally)
/// near `∂D`, floored at `dt_floor`.
pub fn adaptive_dt(sys: &RootSystem, cfg: &SimConfig, x: &[f64], domain: Option<&Domain>) -> f64 {
    let mut dt = cfg.dt_base;
    if cfg.adaptive {
        for (alpha, &k) in sys.roots().iter().zip(sys.multiplicities()) {
            if k != 0.0 {
                let a = dot(alpha, x);
                dt = dt.min(HYPERPLANE_STEP_FACTOR * a * a);
            }
        }
    }
    if cfg.boundary_refine {
        if let Some(d) = domain.and_then(|d| d.boundary_distance(x)) {
            dt = dt.min(BOUNDARY_STEP_FACTOR * d * d);
        }
    }
    dt.max(cfg.dt_floor)
}

/// Runs until the post-step position leaves `domain` or the clock reaches
/// `t_end`. Returns whether the path exited.
#[allow(clippy::too_many_arguments)]
pub fn drive(
    sys: &RootSystem,
    domain: Option<&Domain>,
    t_end: Option<f64>,
    cfg: &SimConfig,
    path_index: u64,
    rng: &mut PathRng,
    state: &mut PathState,
    observer: &mut dyn FnMut(&StepEvent),
) -> Result<bool> {
    let mut ws = Workspace::new(sys);
    let cap = cfg.jump_cap_per_step.max(1);
    let start_steps = state.steps;
    loop {
        let mut dt = adaptive_dt(sys, cfg, &state.position, domain);
        if let Some(t) = t_end {
            let remaining = t - state.clock;
            if remaining <= 0.0 {
                return Ok(false);
            }
            // absorb a sliver rather than take a near-zero final step
            if remaining < dt * (1.0 + 1e-9) || remaining - dt < 1e-12 * t {
                dt = remaining;
            }
        }
        if state.steps - start_steps >= cfg.max_steps {
            return Err(Error::NonTermination {
                path: path_index,
                steps: state.steps,
            });
        }
        let jumped = step_in_place(sys, state, dt, cap, rng, &mut ws);
        if t_end.is_some_and(|t| t - state.clock < 1e-12 * t) {
            state.clock = t_end.unwrap_or(state.clock);
        }
        observer(&StepEvent {
            before: &ws.before,
            diffused: &ws.diffused,
            after: &state.position,
            dt,
            clock: state.clock,
            jumped,
        });
        if !state.position.iter().all(|v| v.is_finite()) {
            return Err(Error::Invariant(format!("path {path_index} left the finite range")));
        }
        if domain.is_some_and(|d| !d.contains(&state.position)) {
            return Ok(true);
        }
    }
}

fn check_start(sys: &RootSystem, domain: &Domain, x0: &[f64]) -> Result<()> {
    if x0.len() != sys.dim() {
        return Err(Error::Config(format!(
            "start point has dimension {}, root system {}",
            x0.len(),
            sys.dim()
        )));
    }
    if !domain.contains(x0) {
        return Err(Error::Domain(format!("start point {x0:?} is not inside the domain")));
    }
    Ok(())
}

/// Exit record using an explicit stream and observer; `state` carries over
/// clock and counters, so multi-stage runs compose.
pub fn simulate_until_exit_with(
    sys: &RootSystem,
    domain: &Domain,
    cfg: &SimConfig,
    path_index: u64,
    rng: &mut PathRng,
    state: &mut PathState,
    observer: &mut dyn FnMut(&StepEvent),
) -> Result<ExitRecord> {
    check_start(sys, domain, &state.position)?;
    let mut by_jump = false;
    let mut obs = |e: &StepEvent| {
        by_jump = e.jumped.is_some();
        observer(e)
    };
    drive(sys, Some(domain), None, cfg, path_index, rng, state, &mut obs)?;
    Ok(ExitRecord {
        exit_point: state.position.clone(),
        exit_time: state.clock,
        exited_by_jump: by_jump,
        path_seed_index: path_index,
        steps: state.steps,
    })
}

/// First exit from the open `domain`, on stream `(cfg.seed, path_index)`.
pub fn simulate_until_exit(
    sys: &RootSystem,
    domain: &Domain,
    x0: &[f64],
    cfg: &SimConfig,
    path_index: u64,
) -> Result<ExitRecord> {
    let mut rng = PathRng::new(cfg.seed, purpose::EXIT, path_index);
    let mut state = PathState::new(sys, x0);
    simulate_until_exit_with(sys, domain, cfg, path_index, &mut rng, &mut state, &mut |_| {})
}

/// Runs the free process to `t_end` (the last step is shortened).
pub fn simulate_to_time(sys: &RootSystem, x0: &[f64], t_end: f64, cfg: &SimConfig, path_index: u64) -> Result<PathState> {
    if !(t_end >= 0.0) {
        return Err(Error::Config(format!("t_end must be nonnegative, got {t_end}")));
    }
    let mut rng = PathRng::new(cfg.seed, purpose::TIME, path_index);
    let mut state = PathState::new(sys, x0);
    if t_end > 0.0 {
        drive(sys, None, Some(t_end), cfg, path_index, &mut rng, &mut state, &mut |_| {})?;
    }
    Ok(state)
}

/// Positions of one free path at each of the increasing `times`.
pub fn simulate_snapshots(sys: &RootSystem, x0: &[f64], times: &[f64], cfg: &SimConfig, path_index: u64) -> Result<Vec<Vec<f64>>> {
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Config("snapshot times must be nonnegative and increasing".into()));
    }
    let mut rng = PathRng::new(cfg.seed, purpose::TIME, path_index);
    let mut state = PathState::new(sys, x0);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t > state.clock {
            drive(sys, None, Some(t), cfg, path_index, &mut rng, &mut state, &mut |_| {})?;
        }
        out.push(state.position.clone());
    }
    Ok(out)
}

/// Total time spent in the open ball `B(0, r)` over the whole (transient)
/// path from `x0`, `|x0| ≤ r`.
///
/// The path is followed until it leaves `B(0, escape·r)`. Since `|X|` is a
/// Bessel process of index λ (jumps preserve the norm), the path returns to
/// `B̄(0, r)` from `y` with probability `(r/|y|)^{2λ}`, and the remaining
/// occupation depends on the radius alone; a return is simulated by
/// restarting on the sphere of radius `r`.
pub fn occupation_time_mc(sys: &RootSystem, r: f64, x0: &[f64], escape: f64, cfg: &SimConfig, path_index: u64) -> Result<f64> {
    let lam = sys.lambda();
    if !(lam > 0.0) {
        return Err(Error::NonPositiveLambda {
            lambda: lam,
            gamma: sys.gamma(),
            dim: sys.dim(),
        });
    }
    if !(escape > 1.0) || !(r > 0.0) {
        return Err(Error::Config("occupation needs r > 0 and escape factor > 1".into()));
    }
    let outer = Domain::centered_ball(sys.dim(), escape * r)?;
    let mut rng = PathRng::new(cfg.seed, purpose::OCCUPATION, path_index);
    let mut state = PathState::new(sys, x0);
    let r2 = r * r;
    let mut occupied = 0.0;
    const MAX_RETURNS: u32 = 100_000;
    for _ in 0..MAX_RETURNS {
        let mut obs = |e: &StepEvent| {
            if dot(e.before, e.before) < r2 {
                occupied += e.dt;
            }
        };
        drive(sys, Some(&outer), None, cfg, path_index, &mut rng, &mut state, &mut obs)?;
        let rho = dot(&state.position, &state.position).sqrt();
        if rng.uniform() >= (r / rho).powf(2.0 * lam) {
            return Ok(occupied);
        }
        let s = r / rho;
        for v in state.position.iter_mut() {
            *v *= s;
        }
    }
    Err(Error::NonTermination {
        path: path_index,
        steps: state.steps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub path_index: u64,
    pub t: f64,
    pub position: Vec<f64>,
    pub jumped: Option<usize>,
}

/// Exit simulation that also records every step.
pub fn simulate_with_trace(
    sys: &RootSystem,
    domain: &Domain,
    x0: &[f64],
    cfg: &SimConfig,
    path_index: u64,
) -> Result<(ExitRecord, Vec<TraceRow>)> {
    let mut rng = PathRng::new(cfg.seed, purpose::EXIT, path_index);
    let mut state = PathState::new(sys, x0);
    let mut rows = vec![TraceRow {
        path_index,
        t: 0.0,
        position: x0.to_vec(),
        jumped: None,
    }];
    let rec = simulate_until_exit_with(sys, domain, cfg, path_index, &mut rng, &mut state, &mut |e| {
        rows.push(TraceRow {
            path_index,
            t: e.clock,
            position: e.after.to_vec(),
            jumped: e.jumped,
        })
    })?;
    Ok((rec, rows))
}

/// CSV with header `path_index,t,x1..xd,jumped_root_or_none`.
pub fn write_trace_csv(rows: &[TraceRow], dim: usize, mut w: impl Write) -> std::io::Result<()> {
    let coords: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    writeln!(w, "path_index,t,{},jumped_root_or_none", coords.join(","))?;
    for row in rows {
        let xs: Vec<String> = row.position.iter().map(|v| format!("{v:e}")).collect();
        let j = row.jumped.map_or("none".to_string(), |r| r.to_string());
        writeln!(w, "{},{:e},{},{}", row.path_index, row.t, xs.join(","), j)?;
    }
    Ok(())
}
