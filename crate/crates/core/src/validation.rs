//! The acceptance suite: every closed-form identity the solver rests on,
//! checked at a declared tolerance. `Scale::Full` uses the stated sample
//! sizes; `Scale::Quick` shrinks them for smoke runs and determinism checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{
    duality_check, dynkin_check, harmonic_measure, mean_value_check, pairing_with_extension,
    regularity_probe, solve_dirichlet, support_check, tower_check, DualitySettings, Residual,
};
use crate::domain::Domain;
use crate::dunkl_algebra::{dunkl_laplacian_poly, dunkl_t, ScalarField};
use crate::error::{Error, Result};
use crate::kernels::{occupation_time_ball, KernelContext};
use crate::linalg::{dot, norm};
use crate::oracles::{
    bessel_j_exact, brownian_reference, harmonicity_defect, interval_harmonic_extension, kummer_exact,
    reference_g, sample_off_hyperplanes,
};
use crate::poly::RationalPoly;
use crate::process::{occupation_time_mc, simulate_snapshots, SimConfig};
use crate::rootsys::{Family, RootSystem};
use crate::specialfns::{bessel_j_normalized, kummer_m};
use crate::stats::{par_map_indexed, MeanEstimate};

pub const ALL_CRITERIA: [u32; 14] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];
/// Relative discretization margin added to 3σ in Monte Carlo checks.
pub const MC_MARGIN: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Quick,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Scale::Quick),
            "full" => Ok(Scale::Full),
            other => Err(Error::Config(format!("unknown suite {other:?} (expected quick or full)"))),
        }
    }
}

impl Scale {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    GreaterThan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub statistic: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(label: impl Into<String>, statistic: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            statistic,
            relation: Relation::AtMost,
            bound,
            passed: statistic <= bound,
        }
    }

    pub fn at_least(label: impl Into<String>, statistic: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            statistic,
            relation: Relation::AtLeast,
            bound,
            passed: statistic >= bound,
        }
    }

    pub fn greater_than(label: impl Into<String>, statistic: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            statistic,
            relation: Relation::GreaterThan,
            bound,
            passed: statistic > bound,
        }
    }

    /// `|estimate − exact| ≤ 3σ + margin·|exact|`.
    pub fn mc(label: impl Into<String>, est: MeanEstimate, exact: f64) -> Self {
        Self::at_most(
            label,
            (est.mean - exact).abs(),
            3.0 * est.std_error + MC_MARGIN * exact.abs(),
        )
    }

    pub fn residual(label: impl Into<String>, r: &Residual, extra: f64) -> Self {
        Self::at_most(label, r.residual, 3.0 * r.std_error + extra)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionOutcome {
    pub fn new(id: u32, title: &str, checks: Vec<Check>) -> Self {
        CriterionOutcome {
            id,
            title: title.to_string(),
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
        }
    }

    /// `criterion N [PASS|FAIL] title (worst: ...)`.
    pub fn summary_line(&self) -> String {
        let worst = self
            .checks
            .iter()
            .find(|c| !c.passed)
            .or_else(|| self.checks.first())
            .map(|c| format!("{}: {:.4e} {} {:.4e}", c.label, c.statistic, relation_symbol(c.relation), c.bound))
            .unwrap_or_default();
        format!(
            "criterion {:>2} [{}] {} ({} checks; {}{})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.checks.len(),
            if self.passed { "first " } else { "failed " },
            worst
        )
    }
}

fn relation_symbol(r: Relation) -> &'static str {
    match r {
        Relation::AtMost => "<=",
        Relation::AtLeast => ">=",
        Relation::GreaterThan => ">",
    }
}

/// One CSV row per check: `criterion,label,statistic,relation,bound,passed`.
pub fn suite_csv(outcomes: &[CriterionOutcome]) -> String {
    let mut s = String::from("criterion,label,statistic,relation,bound,passed\n");
    for o in outcomes {
        for c in &o.checks {
            s.push_str(&format!(
                "{},{},{:.12e},{},{:.12e},{}\n",
                o.id,
                c.label.replace(',', ";"),
                c.statistic,
                relation_symbol(c.relation),
                c.bound,
                c.passed
            ));
        }
    }
    s
}

fn sim(seed: u64, id: u32, paths: u64) -> SimConfig {
    SimConfig::new(seed.wrapping_mul(1_000_003).wrapping_add(id as u64), paths)
}

fn z2(k: &[f64]) -> Result<RootSystem> {
    RootSystem::new(Family::Z2Product, k.len(), k)
}

/// Runs one criterion.
pub fn run_criterion(id: u32, scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    match id {
        1 => criterion_algebra(scale, seed),
        2 => criterion_barrier(),
        3 => criterion_normalization(),
        4 => criterion_chapman_kolmogorov(),
        5 => criterion_occupation(scale, seed),
        6 => criterion_moments(scale, seed),
        7 => criterion_dirichlet(scale, seed),
        8 => criterion_support(scale, seed),
        9 => criterion_tower_dynkin(scale, seed),
        10 => criterion_brownian(scale, seed),
        11 => criterion_duality(scale, seed),
        12 => criterion_regularity(scale, seed),
        13 => criterion_special_functions(scale),
        14 => criterion_determinism(seed),
        other => Err(Error::Config(format!("no acceptance criterion {other}"))),
    }
}

pub fn run_suite(scale: Scale, seed: u64, ids: &[u32]) -> Result<Vec<CriterionOutcome>> {
    ids.iter().map(|&id| run_criterion(id, scale, seed)).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> RationalPoly {
    let n_terms = rng.random_range(1..=8);
    let terms = (0..n_terms).map(|_| {
        let deg = rng.random_range(0..=max_degree);
        let mut e = vec![0u32; dim];
        for _ in 0..deg {
            e[rng.random_range(0..dim)] += 1;
        }
        let c = rng.random_range(-9i64..=9);
        (e, BigRational::from_integer(BigInt::from(if c == 0 { 1 } else { c })))
    });
    RationalPoly::from_terms(dim, terms)
}

/// Multiplicity `m/64` with `m` uniform in `0..=128`, exact in binary.
fn random_k(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0..=128) as f64 / 64.0
}

fn criterion_algebra(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa19e);
    let total = scale.pick(20, 200);
    let mut systems = Vec::new();
    for d in 1..=3 {
        let k: Vec<f64> = (0..d).map(|_| random_k(&mut rng)).collect();
        systems.push(RootSystem::new_allow_recurrent(Family::Z2Product, d, &k)?);
    }
    systems.push(RootSystem::new_allow_recurrent(Family::AType, 3, &[random_k(&mut rng)])?);
    let mut non_commuting = 0usize;
    let mut checks = Vec::new();
    for (s_idx, sys) in systems.iter().enumerate() {
        let d = sys.dim();
        let per = total / systems.len();
        for _ in 0..per {
            let p = random_poly(&mut rng, d, 6);
            for i in 0..d {
                for j in i + 1..d {
                    let ij = dunkl_t(sys, i, &dunkl_t(sys, j, &p)?)?;
                    let ji = dunkl_t(sys, j, &dunkl_t(sys, i, &p)?)?;
                    if ij != ji {
                        non_commuting += 1;
                    }
                }
            }
        }
        // Δ_k|x|² against 2d + 4γ built from the exact multiplicities
        let mut gamma = BigRational::zero();
        for &k in sys.multiplicities() {
            gamma += crate::oracles::exact_rational(k)?;
        }
        let expect = BigRational::from_integer(BigInt::from(2 * d)) + BigRational::from_integer(BigInt::from(4)) * gamma;
        let got = dunkl_laplacian_poly(sys, &RationalPoly::norm_squared(d))?;
        let ok = got == RationalPoly::constant(d, expect);
        checks.push(Check::at_most(
            format!("laplacian of |x|^2 system {s_idx} ({} d={d})", sys.family()),
            if ok { 0.0 } else { 1.0 },
            0.0,
        ));
    }
    checks.insert(0, Check::at_most(format!("non-commuting pairs over {total} polynomials"), non_commuting as f64, 0.0));
    Ok(CriterionOutcome::new(1, "exact operator algebra", checks))
}

fn criterion_barrier() -> Result<CriterionOutcome> {
    let systems = [
        z2(&[0.7, 0.7])?,
        RootSystem::new(Family::AType, 3, &[0.7])?,
        RootSystem::new(Family::BType, 3, &[0.3, 0.4])?,
    ];
    let mut checks = Vec::new();
    for sys in &systems {
        let g = reference_g(sys)?;
        let pts = sample_off_hyperplanes(sys, 0.5, 2.0, 0.05, 100, 0xba77);
        let defect = harmonicity_defect(sys, &g, &pts)?;
        checks.push(Check::at_most(
            format!("max |lap_k g| |x|^(2 lambda+2), {} d={}", sys.family(), sys.dim()),
            defect,
            1e-4,
        ));
    }
    Ok(CriterionOutcome::new(2, "barrier harmonicity", checks))
}

fn criterion_normalization() -> Result<CriterionOutcome> {
    let mut checks = Vec::new();
    for k in [0.6, 1.3] {
        for (d, points) in [
            (1usize, vec![vec![0.4], vec![-1.3]]),
            (2, vec![vec![0.4, -0.3], vec![1.2, 0.7]]),
        ] {
            let sys = z2(&vec![k; d])?;
            let ctx = KernelContext::new(&sys)?;
            for t in [0.5, 1.0] {
                for x in &points {
                    let m = ctx.total_mass(t, x)?;
                    checks.push(Check::at_most(format!("mass d={d} k={k} t={t} x={x:?}"), (m - 1.0).abs(), 1e-6));
                }
            }
        }
    }
    Ok(CriterionOutcome::new(3, "heat kernel normalization", checks))
}

fn criterion_chapman_kolmogorov() -> Result<CriterionOutcome> {
    let mut checks = Vec::new();
    for k in [0.6, 1.2] {
        let sys = z2(&[k])?;
        let ctx = KernelContext::new(&sys)?;
        for (s, t) in [(0.3, 0.7), (0.5, 0.5)] {
            for (x, y) in [(0.3, -0.8), (1.1, 0.4)] {
                let lhs = ctx.integrate_against_weight(&[x], s, &|z| Ok(ctx.heat_kernel(s, &[x], z)? * ctx.heat_kernel(t, z, &[y])?))?;
                let rhs = ctx.heat_kernel(s + t, &[x], &[y])?;
                checks.push(Check::at_most(format!("k={k} s={s} t={t} x={x} y={y}"), (lhs - rhs).abs(), 1e-6));
            }
        }
    }
    Ok(CriterionOutcome::new(4, "Chapman-Kolmogorov", checks))
}

fn criterion_occupation(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let sys = z2(&[0.7, 0.7])?;
    let cfg = sim(seed, 5, scale.pick(2_000, 100_000));
    let mut checks = Vec::new();
    for x in [[0.0, 0.0], [0.5, 0.0]] {
        let v = par_map_indexed(cfg.paths, |j| occupation_time_mc(&sys, 1.0, &x, 2.0, &cfg, j))?;
        let est = MeanEstimate::from_samples(&v);
        checks.push(Check::mc(format!("occupation of B(0,1) from {x:?}"), est, occupation_time_ball(&sys, 1.0, &x)?));
    }
    Ok(CriterionOutcome::new(5, "occupation time of a ball", checks))
}

fn criterion_moments(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let cfg = sim(seed, 6, scale.pick(2_000, 100_000));
    let times = [0.5, 1.0];
    let mut checks = Vec::new();
    for sys in [z2(&[0.7, 0.7])?, RootSystem::new(Family::AType, 3, &[0.5])?] {
        let d = sys.dim();
        let origin = vec![0.0; d];
        let snaps = par_map_indexed(cfg.paths, |j| simulate_snapshots(&sys, &origin, &times, &cfg, j))?;
        for (i, &t) in times.iter().enumerate() {
            let sq: Vec<f64> = snaps.iter().map(|s| dot(&s[i], &s[i])).collect();
            let exact = (d as f64 + 2.0 * sys.gamma()) * t;
            checks.push(Check::mc(format!("E|X_t|^2 {} d={d} t={t}", sys.family()), MeanEstimate::from_samples(&sq), exact));
        }
    }
    Ok(CriterionOutcome::new(6, "second moment", checks))
}

fn criterion_dirichlet(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let cfg = sim(seed, 7, scale.pick(2_000, 100_000));
    let sys = z2(&[0.7, 0.7])?;
    let ball = Domain::centered_ball(2, 1.0)?;
    let x1 = ScalarField::new("x1", |x| x[0]);
    let points = vec![vec![0.0, 0.0], vec![0.3, 0.0], vec![0.0, 0.5]];
    let rep = solve_dirichlet(&sys, &ball, &x1, &points, &cfg)?;
    let mut checks = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let est = MeanEstimate {
            mean: rep.estimates[i],
            std_error: rep.std_errors[i],
            n: rep.n_paths as usize,
        };
        checks.push(Check::mc(format!("ball, f=x1 at {p:?}"), est, p[0]));
    }
    let dih = RootSystem::new(Family::Dihedral(3), 2, &[0.6])?;
    let g = reference_g(&dih)?;
    let annulus = Domain::annulus(0.5, 2.0)?;
    for (i, p) in [vec![1.0, 0.0], vec![0.0, 0.8], vec![-1.2, 0.7]].iter().enumerate() {
        let c = SimConfig {
            seed: cfg.seed.wrapping_add(1 + i as u64),
            ..cfg.clone()
        };
        let r = mean_value_check(&dih, &g.field, &annulus, p, &c)?;
        checks.push(Check::at_most(
            format!("annulus, f=g_lambda at {p:?}"),
            r.residual,
            3.0 * r.std_error + MC_MARGIN * r.rhs.abs(),
        ));
    }
    Ok(CriterionOutcome::new(7, "Dirichlet exactness via uniqueness", checks))
}

fn criterion_support(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let sys = z2(&[0.7, 0.7])?;
    let d = Domain::ball(vec![0.6, 0.0], 0.3)?;
    let reflected = Domain::ball(vec![-0.6, 0.0], 0.3)?;
    let cfg = sim(seed, 8, scale.pick(2_000, 10_000));
    let x = [0.6, 0.0];
    let reflected_fraction = |c: &SimConfig| -> Result<(MeanEstimate, f64)> {
        let hm = harmonic_measure(&sys, &d, &x, c)?;
        let tol = 3.0 * c.dt_base.sqrt();
        let support = support_check(&sys, &d, &hm, tol)?;
        let hits: Vec<f64> = hm
            .samples
            .iter()
            .map(|s| if reflected.in_closure(&s.exit_point, 1e-9) { 1.0 } else { 0.0 })
            .collect();
        Ok((MeanEstimate::from_samples(&hits), support))
    };
    let (main, support) = reflected_fraction(&cfg)?;
    let pilot_cfg = SimConfig {
        dt_base: 2.0 * cfg.dt_base,
        seed: cfg.seed.wrapping_add(17),
        ..cfg.clone()
    };
    let (pilot, _) = reflected_fraction(&pilot_cfg)?;
    let checks = vec![
        Check::at_least("fraction of exits in Gamma_D (tol 3 sqrt(dt))", support, 0.999),
        Check::greater_than("fraction of exits in the reflected ball", main.mean, 0.0),
        Check::at_most(
            "reflected fraction vs half-resolution pilot",
            (main.mean - pilot.mean).abs(),
            3.0 * main.std_error.hypot(pilot.std_error),
        ),
    ];
    Ok(CriterionOutcome::new(8, "support of the harmonic measure", checks))
}

/// `s(r)` equal to 1 up to `r = 2.5`, 0 beyond 3, C² in between.
fn smooth_cutoff(r: f64) -> f64 {
    if r <= 2.5 {
        1.0
    } else if r >= 3.0 {
        0.0
    } else {
        let u = (r - 2.5) / 0.5;
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

fn criterion_tower_dynkin(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let sys = z2(&[0.7, 0.7])?;
    let cfg = sim(seed, 9, scale.pick(2_000, 40_000));
    let d = Domain::centered_ball(2, 1.0)?;
    let v = Domain::centered_ball(2, 0.5)?;
    let x1 = ScalarField::new("x1", |x| x[0]);
    let tower = tower_check(&sys, &d, &v, &x1, &[0.2, 0.1], &cfg)?;
    let r2 = ScalarField::new("|x|^2 cut off", |x| dot(x, x) * smooth_cutoff(norm(x)));
    let x1c = ScalarField::new("x1 cut off", |x| x[0] * smooth_cutoff(norm(x)));
    let dyn_r2 = dynkin_check(&sys, &d, &r2, &[0.0, 0.0], &cfg)?;
    let dyn_x1 = dynkin_check(&sys, &d, &x1c, &[0.2, 0.1], &cfg)?;
    let checks = vec![
        Check::residual("tower D=B(0,1) V=B(0,0.5) f=x1", &tower, 0.0),
        Check::residual("Dynkin f=|x|^2 from 0", &dyn_r2.residual, 0.0),
        Check::residual("Dynkin f=x1 from (0.2,0.1)", &dyn_x1.residual, 0.0),
    ];
    Ok(CriterionOutcome::new(9, "tower property and Dynkin formula", checks))
}

fn criterion_brownian(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let sys = RootSystem::new_allow_recurrent(Family::Z2Product, 2, &[0.0, 0.0])?;
    let cfg = sim(seed, 10, scale.pick(2_000, 100_000));
    let ball = Domain::centered_ball(2, 1.0)?;
    let hm = harmonic_measure(&sys, &ball, &[0.0, 0.0], &cfg)?;
    let x1 = ScalarField::new("x1", |x| x[0]);
    let rep = solve_dirichlet(&sys, &ball, &x1, &[vec![0.3, 0.0]], &SimConfig { seed: cfg.seed + 1, ..cfg.clone() })?;
    let est = MeanEstimate {
        mean: rep.estimates[0],
        std_error: rep.std_errors[0],
        n: rep.n_paths as usize,
    };
    let checks = vec![
        Check::mc("mean exit time from the center", hm.mean_exit_time(), brownian_reference(2, 1.0, &[0.0, 0.0])?),
        Check::mc("harmonic extension of x1 at (0.3,0)", est, 0.3),
    ];
    Ok(CriterionOutcome::new(10, "k = 0 reduces to Brownian motion", checks))
}

fn bump(center: f64, radius: f64) -> ScalarField {
    ScalarField::new(format!("bump({center},{radius})"), move |x: &[f64]| {
        let u = (x[0] - center) / radius;
        if u.abs() < 1.0 {
            (1.0 - u * u).powi(4)
        } else {
            0.0
        }
    })
}

fn criterion_duality(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let sys = z2(&[0.8])?;
    let cfg = sim(seed, 11, 1);
    let settings = DualitySettings {
        paths_per_node: scale.pick(200, 2_000),
        ..DualitySettings::default()
    };
    let pairs = [
        (bump(1.1, 0.5), bump(0.3, 0.9)),
        (bump(-0.4, 0.5), bump(1.3, 0.5)),
    ];
    let mut checks = Vec::new();
    for (i, (psi, phi)) in pairs.iter().enumerate() {
        let c = SimConfig {
            seed: cfg.seed.wrapping_add(i as u64),
            ..cfg.clone()
        };
        let r = duality_check(&sys, 1.0, psi, phi, settings, &c)?;
        // the same quadrature with the closed-form extension measures the
        // quadrature error of the pairing itself
        let (l, rr) = pairing_with_extension(&sys, 1.0, psi, phi, &|f, y| interval_harmonic_extension(f, 1.0, y), settings)?;
        let quad_tol = (l - rr).abs().max(1e-6 * l.abs().max(rr.abs()).max(1e-3));
        checks.push(Check::residual(format!("pair {i}: {} / {}", psi.name(), phi.name()), &r, quad_tol));
    }
    Ok(CriterionOutcome::new(11, "duality of the harmonic extension", checks))
}

fn criterion_regularity(scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let sys = z2(&[0.7, 0.7])?;
    let cfg = sim(seed, 12, scale.pick(1_000, 10_000));
    let ball = Domain::centered_ball(2, 1.0)?;
    let annulus = Domain::annulus(0.5, 2.0)?;
    let mut checks = Vec::new();
    for (name, d, z) in [
        ("B(0,1) at (1,0)", &ball, [1.0, 0.0]),
        ("C(0.5,2) at (0.5,0)", &annulus, [0.5, 0.0]),
        ("C(0.5,2) at (2,0)", &annulus, [2.0, 0.0]),
    ] {
        let p = regularity_probe(&sys, d, &z, &[1e-3], &cfg)?;
        checks.push(Check::at_least(format!("P[tau <= 1e-3], {name}"), p[0].1.mean, 0.99));
    }
    Ok(CriterionOutcome::new(12, "regular boundary points", checks))
}

fn criterion_special_functions(scale: Scale) -> Result<CriterionOutcome> {
    let k_step = scale.pick(1.0, 0.25);
    let s_step = scale.pick(10.0, 2.5);
    let mut worst_m: f64 = 0.0;
    let mut n_m = 0;
    let mut k = 0.0;
    while k <= 3.0 + 1e-12 {
        let mut s = -20.0;
        while s <= 20.0 + 1e-12 {
            let exact = kummer_exact(k, 2.0 * k + 1.0, s)?;
            let v = kummer_m(k, 2.0 * k + 1.0, s)?;
            worst_m = worst_m.max(((v - exact) / exact).abs());
            n_m += 1;
            s += s_step;
        }
        k += k_step;
    }
    let mut worst_j: f64 = 0.0;
    let mut n_j = 0;
    for lam in [-0.5, -0.25, 0.0, 0.5, 1.0, 1.5, 2.5] {
        let mut z = 0.0;
        while z <= 20.0 + 1e-12 {
            let exact = bessel_j_exact(lam, z)?;
            let v = bessel_j_normalized(lam, z)?;
            worst_j = worst_j.max(((v - exact) / exact).abs());
            n_j += 1;
            z += scale.pick(2.5, 0.625);
        }
    }
    let checks = vec![
        Check::at_most(format!("Kummer M(k,2k+1,s), {n_m} grid points, max rel error"), worst_m, 1e-10),
        Check::at_most(format!("j_lambda, {n_j} grid points, max rel error"), worst_j, 1e-10),
    ];
    Ok(CriterionOutcome::new(13, "special functions against exact series", checks))
}

/// Re-runs two Monte Carlo criteria at quick scale and compares the
/// serialized outcomes byte for byte.
fn criterion_determinism(seed: u64) -> Result<CriterionOutcome> {
    let ids = [7, 12];
    let a = run_suite(Scale::Quick, seed, &ids)?;
    let b = run_suite(Scale::Quick, seed, &ids)?;
    let same_csv = suite_csv(&a) == suite_csv(&b);
    let same_json = serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok();
    let checks = vec![
        Check::at_most("CSV differs between identical runs", if same_csv { 0.0 } else { 1.0 }, 0.0),
        Check::at_most("JSON differs between identical runs", if same_json { 0.0 } else { 1.0 }, 0.0),
    ];
    Ok(CriterionOutcome::new(14, "determinism", checks))
}
