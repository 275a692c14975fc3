//! Harmonic measure, the Dirichlet solver `h(x) = E^x[f(X_τ)]`, and
//! statistical checks of the identities the solver relies on.

use serde::{Deserialize, Serialize};

use crate::domain::{gamma_d_membership, Domain};
use crate::dunkl_algebra::{default_step, dunkl_laplacian_numeric, ScalarField};
use crate::error::{Error, Result};
use crate::process::{simulate_until_exit, simulate_until_exit_with, drive, ExitRecord, PathState, SimConfig};
use crate::quadrature::gauss_legendre_nodes;
use crate::rng::{purpose, PathRng};
use crate::rootsys::RootSystem;
use crate::stats::{par_map_indexed, MeanEstimate};

/// Empirical harmonic measure `H_D(x, ·)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMeasureEstimate {
    pub base_point: Vec<f64>,
    pub samples: Vec<ExitRecord>,
    pub n: usize,
}

impl HarmonicMeasureEstimate {
    /// `∫ f dH_D(x,·)` over the sample. Reusing one estimate for several
    /// data functions keeps the map `f ↦ estimate` monotone.
    pub fn integrate(&self, f: &ScalarField) -> Result<MeanEstimate> {
        let mut vals = Vec::with_capacity(self.n);
        for s in &self.samples {
            let v = f.eval(&s.exit_point);
            if !v.is_finite() {
                return Err(Error::Data {
                    point: s.exit_point.clone(),
                });
            }
            vals.push(v);
        }
        Ok(MeanEstimate::from_samples(&vals))
    }

    pub fn mean_exit_time(&self) -> MeanEstimate {
        let t: Vec<f64> = self.samples.iter().map(|s| s.exit_time).collect();
        MeanEstimate::from_samples(&t)
    }

    pub fn jump_exit_fraction(&self) -> f64 {
        self.samples.iter().filter(|s| s.exited_by_jump).count() as f64 / self.n.max(1) as f64
    }
}

fn harmonic_measure_offset(
    sys: &RootSystem,
    domain: &Domain,
    x: &[f64],
    cfg: &SimConfig,
    first_path: u64,
) -> Result<HarmonicMeasureEstimate> {
    cfg.validate()?;
    let samples = par_map_indexed(cfg.paths, |j| simulate_until_exit(sys, domain, x, cfg, first_path + j))?;
    Ok(HarmonicMeasureEstimate {
        base_point: x.to_vec(),
        n: samples.len(),
        samples,
    })
}

/// `cfg.paths` exit records from `x`, on path indices `0..paths`.
pub fn harmonic_measure(sys: &RootSystem, domain: &Domain, x: &[f64], cfg: &SimConfig) -> Result<HarmonicMeasureEstimate> {
    harmonic_measure_offset(sys, domain, x, cfg, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub points: Vec<Vec<f64>>,
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub n_paths: u64,
    pub seed: u64,
    pub dt_base: f64,
    pub boundary_data: String,
    /// False when D is not W-invariant: the estimate is still `H_D f`, but
    /// uniqueness of the Dirichlet solution is not guaranteed there.
    pub w_invariant: bool,
    pub version: String,
    pub config_echo: Option<serde_json::Value>,
}

impl SolveReport {
    /// Header `x1..xd,estimate,std_error,n_paths`.
    pub fn to_csv(&self) -> String {
        let d = self.points.first().map_or(0, Vec::len);
        let mut out: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
        out.extend(["estimate", "std_error", "n_paths"].map(String::from));
        let mut s = out.join(",");
        s.push('\n');
        for ((p, e), se) in self.points.iter().zip(&self.estimates).zip(&self.std_errors) {
            let mut row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            row.push(format!("{e:.12e}"));
            row.push(format!("{se:.6e}"));
            row.push(self.n_paths.to_string());
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Monte Carlo solution of the Dirichlet problem at each point. Point `i`
/// uses path indices `i·paths .. (i+1)·paths`, so points are independent.
pub fn solve_dirichlet(
    sys: &RootSystem,
    domain: &Domain,
    f: &ScalarField,
    points: &[Vec<f64>],
    cfg: &SimConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    for p in points {
        if p.len() != sys.dim() || !domain.contains(p) {
            return Err(Error::Domain(format!("evaluation point {p:?} is not inside the domain")));
        }
    }
    let mut estimates = Vec::with_capacity(points.len());
    let mut std_errors = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let hm = harmonic_measure_offset(sys, domain, p, cfg, i as u64 * cfg.paths)?;
        let e = hm.integrate(f)?;
        estimates.push(e.mean);
        std_errors.push(e.std_error);
    }
    Ok(SolveReport {
        points: points.to_vec(),
        estimates,
        std_errors,
        n_paths: cfg.paths,
        seed: cfg.seed,
        dt_base: cfg.dt_base,
        boundary_data: f.name().to_string(),
        w_invariant: domain.is_w_invariant(sys),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_echo: None,
    })
}

/// Fraction of exit points lying in `Γ_D` within `tol`.
pub fn support_check(sys: &RootSystem, domain: &Domain, est: &HarmonicMeasureEstimate, tol: f64) -> Result<f64> {
    if est.samples.is_empty() {
        return Err(Error::Config("support check needs at least one exit sample".into()));
    }
    let hits = est
        .samples
        .iter()
        .filter(|s| gamma_d_membership(sys, domain, &s.exit_point, tol))
        .count();
    Ok(hits as f64 / est.samples.len() as f64)
}

/// Difference of two estimates of the same quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|`.
    pub residual: f64,
    pub std_error: f64,
}

impl Residual {
    pub fn new(lhs: f64, rhs: f64, std_error: f64) -> Self {
        Residual {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            std_error,
        }
    }

    /// `residual ≤ 3σ + relative_margin·|rhs| + absolute_margin`.
    pub fn within(&self, relative_margin: f64, absolute_margin: f64) -> bool {
        self.residual <= 3.0 * self.std_error + relative_margin * self.rhs.abs() + absolute_margin
    }
}

/// `|H_U h(x) − h(x)|`.
pub fn mean_value_check(sys: &RootSystem, h: &ScalarField, u: &Domain, x: &[f64], cfg: &SimConfig) -> Result<Residual> {
    let hm = harmonic_measure(sys, u, x, cfg)?;
    let e = hm.integrate(h)?;
    Ok(Residual::new(e.mean, h.eval(x), e.std_error))
}

/// Two-stage estimate (exit `V`, restart, exit `D`) against the one-stage
/// estimate, on independent streams.
pub fn tower_check(
    sys: &RootSystem,
    d: &Domain,
    v: &Domain,
    f: &ScalarField,
    x: &[f64],
    cfg: &SimConfig,
) -> Result<Residual> {
    cfg.validate()?;
    if !d.compactly_contains(v, sys.dim())? {
        return Err(Error::Config("the inner domain must be compactly contained in the outer one".into()));
    }
    if !v.contains(x) {
        return Err(Error::Domain(format!("start point {x:?} is not inside the inner domain")));
    }
    let one = harmonic_measure(sys, d, x, cfg)?.integrate(f)?;
    let two: Vec<f64> = par_map_indexed(cfg.paths, |j| {
        let mut rng = PathRng::new(cfg.seed, purpose::SECOND_STAGE, j);
        let mut state = PathState::new(sys, x);
        simulate_until_exit_with(sys, v, cfg, j, &mut rng, &mut state, &mut |_| {})?;
        if d.contains(&state.position) {
            let mut rng2 = PathRng::new(cfg.seed, purpose::RESTART, j);
            simulate_until_exit_with(sys, d, cfg, j, &mut rng2, &mut state, &mut |_| {})?;
        }
        let val = f.eval(&state.position);
        if !val.is_finite() {
            return Err(Error::Data {
                point: state.position.clone(),
            });
        }
        Ok(val)
    })?;
    let two = MeanEstimate::from_samples(&two);
    Ok(Residual::new(two.mean, one.mean, one.std_error.hypot(two.std_error)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynkinReport {
    /// `E^x[f(X_τ)] − f(x)`.
    pub boundary_side: MeanEstimate,
    /// `½ E^x[∫_0^τ Δ_k f(X_s) ds]`.
    pub occupation_side: MeanEstimate,
    /// Paired per-path difference; its standard error is the combined σ.
    pub residual: Residual,
    /// Steps whose Δ_k f evaluation was skipped for hyperplane proximity.
    pub skipped_steps: u64,
    pub total_steps: u64,
}

/// Both sides of Dynkin's formula on the same paths. `Δ_k f` is evaluated
/// numerically at the left end of each step.
pub fn dynkin_check(sys: &RootSystem, d: &Domain, f: &ScalarField, x: &[f64], cfg: &SimConfig) -> Result<DynkinReport> {
    cfg.validate()?;
    let fx = f.eval(x);
    let per_path = par_map_indexed(cfg.paths, |j| {
        let mut rng = PathRng::new(cfg.seed, purpose::EXIT, j);
        let mut state = PathState::new(sys, x);
        let mut integral = 0.0;
        let mut skipped = 0u64;
        let mut failure = None;
        let rec = simulate_until_exit_with(sys, d, cfg, j, &mut rng, &mut state, &mut |e| {
            match dunkl_laplacian_numeric(sys, f, e.before, default_step(e.before)) {
                Ok(v) => integral += v * e.dt,
                Err(Error::Proximity { .. }) => skipped += 1,
                Err(other) => failure = Some(other),
            }
        })?;
        if let Some(err) = failure {
            return Err(err);
        }
        Ok((f.eval(&rec.exit_point) - fx, 0.5 * integral, skipped, rec.steps))
    })?;
    let lhs: Vec<f64> = per_path.iter().map(|p| p.0).collect();
    let rhs: Vec<f64> = per_path.iter().map(|p| p.1).collect();
    let diff: Vec<f64> = per_path.iter().map(|p| p.0 - p.1).collect();
    let l = MeanEstimate::from_samples(&lhs);
    let r = MeanEstimate::from_samples(&rhs);
    let dd = MeanEstimate::from_samples(&diff);
    Ok(DynkinReport {
        boundary_side: l,
        occupation_side: r,
        residual: Residual::new(l.mean, r.mean, dd.std_error),
        skipped_steps: per_path.iter().map(|p| p.2).sum(),
        total_steps: per_path.iter().map(|p| p.3).sum(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxPrincipleOutcome {
    pub holds: bool,
    /// First estimate outside `[lo − 3σ, hi + 3σ]`.
    pub witness: Option<(Vec<f64>, f64)>,
}

/// Checks that solver estimates lie between the extreme boundary values.
pub fn max_principle_check(report: &SolveReport, lo: f64, hi: f64) -> MaxPrincipleOutcome {
    for ((p, &e), &se) in report.points.iter().zip(&report.estimates).zip(&report.std_errors) {
        if e < lo - 3.0 * se || e > hi + 3.0 * se {
            return MaxPrincipleOutcome {
                holds: false,
                witness: Some((p.clone(), e)),
            };
        }
    }
    MaxPrincipleOutcome {
        holds: true,
        witness: None,
    }
}

/// `P^z[τ_D ≤ t]` for each `t`, from paths started at the boundary point
/// `z`. The base step is capped at `min(t)/100`.
pub fn regularity_probe(
    sys: &RootSystem,
    d: &Domain,
    z: &[f64],
    t_list: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<(f64, MeanEstimate)>> {
    cfg.validate()?;
    if z.len() != sys.dim() {
        return Err(Error::Config("probe point has the wrong dimension".into()));
    }
    let on_boundary = !d.contains(z) && d.in_closure(z, 1e-9);
    if !on_boundary {
        return Err(Error::Config(format!("probe point {z:?} is not on the boundary")));
    }
    if t_list.is_empty() || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Config("probe times must be positive".into()));
    }
    let t_max = t_list.iter().copied().fold(0.0, f64::max);
    let t_min = t_list.iter().copied().fold(f64::INFINITY, f64::min);
    let run = SimConfig {
        dt_base: cfg.dt_base.min(t_min / 100.0).max(cfg.dt_floor),
        ..cfg.clone()
    };
    let taus = par_map_indexed(cfg.paths, |j| {
        let mut rng = PathRng::new(cfg.seed, purpose::PROBE, j);
        let mut state = PathState::new(sys, z);
        let exited = drive(sys, Some(d), Some(t_max), &run, j, &mut rng, &mut state, &mut |_| {})?;
        Ok(if exited { state.clock } else { f64::INFINITY })
    })?;
    Ok(t_list
        .iter()
        .map(|&t| {
            let hits: Vec<f64> = taus.iter().map(|&tau| if tau <= t { 1.0 } else { 0.0 }).collect();
            (t, MeanEstimate::from_samples(&hits))
        })
        .collect())
}

/// `P^z[τ_D ≤ t]` from an interior start, for contrast with boundary probes.
pub fn exit_probability_by(sys: &RootSystem, d: &Domain, x: &[f64], t: f64, cfg: &SimConfig) -> Result<MeanEstimate> {
    let hits = par_map_indexed(cfg.paths, |j| {
        let mut rng = PathRng::new(cfg.seed, purpose::PROBE, j);
        let mut state = PathState::new(sys, x);
        let exited = drive(sys, Some(d), Some(t), cfg, j, &mut rng, &mut state, &mut |_| {})?;
        Ok(if exited { 1.0 } else { 0.0 })
    })?;
    Ok(MeanEstimate::from_samples(&hits))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualitySettings {
    /// Half-width of the truncated integration range.
    pub half_width: f64,
    /// Gauss–Legendre panels per unit length.
    pub panels_per_unit: usize,
    /// Paths per quadrature node inside the interval.
    pub paths_per_node: u64,
}

impl Default for DualitySettings {
    fn default() -> Self {
        DualitySettings {
            half_width: 3.0,
            panels_per_unit: 8,
            paths_per_node: 2000,
        }
    }
}

/// Both sides of `⟨H_Dψ, Δ_kφ⟩_k = ⟨Δ_kψ, H_Dφ⟩_k` in one dimension with
/// `D = (−a, a)`. Inside `D` the harmonic extensions are estimated by Monte
/// Carlo at the quadrature nodes (the same exits serve both sides); outside
/// `D` they equal the data.
pub fn duality_check(
    sys: &RootSystem,
    half_length: f64,
    psi: &ScalarField,
    phi: &ScalarField,
    settings: DualitySettings,
    cfg: &SimConfig,
) -> Result<Residual> {
    if sys.dim() != 1 {
        return Err(Error::Capability("the duality check is one-dimensional".into()));
    }
    cfg.validate()?;
    let a = half_length;
    let l = settings.half_width;
    if !(a > 0.0 && l > a) {
        return Err(Error::Config("need 0 < interval half-length < integration half-width".into()));
    }
    let edge = [psi.eval(&[l]), psi.eval(&[-l]), phi.eval(&[l]), phi.eval(&[-l])];
    let scale = [0.0, a, -a]
        .iter()
        .map(|&y| psi.eval(&[y]).abs().max(phi.eval(&[y]).abs()))
        .fold(1e-300, f64::max);
    if edge.iter().any(|v| v.abs() > 1e-6 * scale) {
        return Err(Error::Accuracy {
            what: "duality quadrature truncation (data not negligible at the range ends)".into(),
            partial: f64::NAN,
        });
    }
    let domain = Domain::centered_ball(1, a)?;
    // pieces [−l,−a], [−a,0], [0,a], [a,l] with equal panel density
    let pieces = [(-l, -a), (-a, 0.0), (0.0, a), (a, l)];
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (lo, hi) in pieces {
        let panels = (((hi - lo) * settings.panels_per_unit as f64).ceil() as usize).max(2);
        let (x, w) = gauss_legendre_nodes(lo, hi, panels);
        nodes.extend(x);
        weights.extend(w);
    }
    let lap = |f: &ScalarField, y: f64| dunkl_laplacian_numeric(sys, f, &[y], default_step(&[y]));
    let inner = SimConfig {
        paths: settings.paths_per_node,
        ..cfg.clone()
    };
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut var = 0.0;
    for (i, (&y, &w)) in nodes.iter().zip(&weights).enumerate() {
        let wk = w * sys.weight(&[y]);
        let lphi = lap(phi, y)?;
        let lpsi = lap(psi, y)?;
        if domain.contains(&[y]) {
            let hm = harmonic_measure_offset(sys, &domain, &[y], &inner, i as u64 * inner.paths)?;
            let paired: Vec<f64> = hm
                .samples
                .iter()
                .map(|s| lphi * psi.eval(&s.exit_point) - lpsi * phi.eval(&s.exit_point))
                .collect();
            let hpsi = hm.integrate(psi)?.mean;
            let hphi = hm.integrate(phi)?.mean;
            lhs += wk * hpsi * lphi;
            rhs += wk * lpsi * hphi;
            let e = MeanEstimate::from_samples(&paired);
            var += (wk * e.std_error).powi(2);
        } else {
            lhs += wk * psi.eval(&[y]) * lphi;
            rhs += wk * lpsi * phi.eval(&[y]);
        }
    }
    Ok(Residual::new(lhs, rhs, var.sqrt()))
}

/// Exact pairing used for the duality check when `H_D` is known in closed
/// form: `⟨hψ, Δ_kφ⟩_k − ⟨Δ_kψ, hφ⟩_k` by the same quadrature.
pub fn pairing_with_extension(
    sys: &RootSystem,
    half_length: f64,
    psi: &ScalarField,
    phi: &ScalarField,
    extension: &dyn Fn(&ScalarField, f64) -> f64,
    settings: DualitySettings,
) -> Result<(f64, f64)> {
    let a = half_length;
    let l = settings.half_width;
    let pieces = [(-l, -a), (-a, 0.0), (0.0, a), (a, l)];
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (lo, hi) in pieces {
        let panels = (((hi - lo) * settings.panels_per_unit as f64).ceil() as usize).max(2);
        let (x, w) = gauss_legendre_nodes(lo, hi, panels);
        for (&y, &w) in x.iter().zip(&w) {
            let wk = w * sys.weight(&[y]);
            let lphi = dunkl_laplacian_numeric(sys, phi, &[y], default_step(&[y]))?;
            let lpsi = dunkl_laplacian_numeric(sys, psi, &[y], default_step(&[y]))?;
            lhs += wk * extension(psi, y) * lphi;
            rhs += wk * lpsi * extension(phi, y);
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;

    fn z2() -> RootSystem {
        RootSystem::new(Family::Z2Product, 2, &[0.7, 0.7]).unwrap()
    }

    fn x1() -> ScalarField {
        ScalarField::new("x1", |x| x[0])
    }

    #[test]
    fn constants_are_exact() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        let cfg = SimConfig::new(1, 200);
        let rep = solve_dirichlet(&sys, &d, &ScalarField::constant(0.7), &[vec![0.2, 0.1]], &cfg).unwrap();
        assert!((rep.estimates[0] - 0.7).abs() < 1e-15);
        assert!(rep.std_errors[0] < 1e-15);
        assert!(rep.to_csv().starts_with("x1,x2,estimate,std_error,n_paths\n"));
        assert!(rep.w_invariant);
    }

    #[test]
    fn exits_leave_the_domain_and_fail_on_bad_data() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        let hm = harmonic_measure(&sys, &d, &[0.3, 0.2], &SimConfig::new(2, 100)).unwrap();
        assert_eq!(hm.n, 100);
        assert!(hm.samples.iter().all(|s| !d.contains(&s.exit_point)));
        let bad = ScalarField::new("bad", |x| if x[0] > 0.0 { f64::NAN } else { 0.0 });
        assert!(matches!(hm.integrate(&bad), Err(Error::Data { .. })));
        assert!(support_check(&sys, &d, &HarmonicMeasureEstimate { base_point: vec![0.0, 0.0], samples: vec![], n: 0 }, 0.1).is_err());
    }

    #[test]
    fn monotone_in_boundary_data() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        let hm = harmonic_measure(&sys, &d, &[0.1, 0.4], &SimConfig::new(3, 300)).unwrap();
        let f = hm.integrate(&x1()).unwrap().mean;
        let g = hm.integrate(&ScalarField::new("x1+x2^2", |x| x[0] + x[1] * x[1])).unwrap().mean;
        assert!(f <= g);
    }

    #[test]
    fn tower_rejects_non_nested() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        let err = tower_check(&sys, &d, &d, &x1(), &[0.1, 0.1], &SimConfig::new(1, 10));
        assert!(matches!(err, Err(Error::Config(_))));
        let v = Domain::centered_ball(2, 0.5).unwrap();
        let r = tower_check(&sys, &d, &v, &ScalarField::constant(1.0), &[0.1, 0.1], &SimConfig::new(1, 50)).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn dynkin_with_zero_field() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        let r = dynkin_check(&sys, &d, &ScalarField::constant(0.0), &[0.0, 0.0], &SimConfig::new(1, 50)).unwrap();
        assert_eq!(r.residual.residual, 0.0);
    }

    #[test]
    fn max_principle_finds_injected_violation() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        let pts = vec![vec![0.0, 0.0], vec![0.3, 0.0], vec![0.0, 0.5]];
        let mut rep = solve_dirichlet(&sys, &d, &x1(), &pts, &SimConfig::new(5, 200)).unwrap();
        assert!(max_principle_check(&rep, -1.0, 1.0).holds);
        rep.estimates[1] = 2.0;
        let out = max_principle_check(&rep, -1.0, 1.0);
        assert!(!out.holds);
        assert_eq!(out.witness, Some((vec![0.3, 0.0], 2.0)));
    }

    #[test]
    fn probe_needs_boundary_point() {
        let sys = z2();
        let d = Domain::centered_ball(2, 1.0).unwrap();
        assert!(matches!(
            regularity_probe(&sys, &d, &[0.5, 0.0], &[1e-3], &SimConfig::new(1, 10)),
            Err(Error::Config(_))
        ));
        let interior = exit_probability_by(&sys, &d, &[0.0, 0.5], 1e-3, &SimConfig::new(1, 200)).unwrap();
        assert_eq!(interior.mean, 0.0);
    }

    #[test]
    fn duality_is_symmetric_for_equal_fields() {
        let sys = RootSystem::new(Family::Z2Product, 1, &[0.8]).unwrap();
        let bump = ScalarField::new("bump", |x| {
            let u = (x[0] - 0.9) / 0.5;
            if u.abs() < 1.0 {
                (1.0 - u * u).powi(4)
            } else {
                0.0
            }
        });
        let s = DualitySettings {
            paths_per_node: 20,
            ..DualitySettings::default()
        };
        let r = duality_check(&sys, 1.0, &bump, &bump, s, &SimConfig::new(1, 1)).unwrap();
        assert!(r.residual < 1e-12 * r.lhs.abs().max(1.0));
    }
}
