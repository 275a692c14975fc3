use dunkl_core::dirichlet::harmonic_measure;
use dunkl_core::domain::Domain;
use dunkl_core::dunkl_algebra::{dunkl_laplacian_poly, ScalarField};
use dunkl_core::kernels::occupation_time_ball;
use dunkl_core::poly::RationalPoly;
use dunkl_core::process::{simulate_to_time, simulate_until_exit, SimConfig};
use dunkl_core::rootsys::{Family, RootSystem};
use dunkl_core::stats::{par_map_indexed, MeanEstimate};
use num_bigint::BigInt;
use num_rational::BigRational;

fn mono(e: &[u32]) -> RationalPoly {
    RationalPoly::monomial(e.to_vec(), BigRational::from_integer(BigInt::from(1)))
}

/// Weighted least-squares intercept of `ys` against `xs` and its standard error.
fn intercept(xs: &[f64], ys: &[f64], ses: &[f64]) -> (f64, f64) {
    let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&x, &y), &e) in xs.iter().zip(ys).zip(ses) {
        let w = 1.0 / (e * e);
        s += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * y;
        sxy += w * x * y;
    }
    let det = s * sxx - sx * sx;
    ((sxx * sy - sx * sxy) / det, (sxx / det).sqrt())
}

#[test]
fn small_time_increments_match_the_generator() {
    let sys = RootSystem::new(Family::Z2Product, 2, &[0.7, 0.4]).unwrap();
    let x = [0.4, 0.3];
    let fs = [mono(&[1, 0]), mono(&[2, 0]), mono(&[1, 1]), mono(&[2, 1])];
    let steps = [1e-2, 5e-3, 2.5e-3];
    let mut ratios = vec![Vec::new(); fs.len()];
    let mut errors = vec![Vec::new(); fs.len()];
    for (i, &dt) in steps.iter().enumerate() {
        let mut cfg = SimConfig::new(100 + i as u64, 200_000);
        cfg.dt_base = dt;
        let ends = par_map_indexed(cfg.paths, |j| simulate_to_time(&sys, &x, dt, &cfg, j).map(|s| s.position)).unwrap();
        for (m, f) in fs.iter().enumerate() {
            let fx = f.eval(&x);
            let vals: Vec<f64> = ends.iter().map(|y| (f.eval(y) - fx) / dt).collect();
            let est = MeanEstimate::from_samples(&vals);
            ratios[m].push(est.mean);
            errors[m].push(est.std_error);
        }
    }
    for (m, f) in fs.iter().enumerate() {
        let want = 0.5 * dunkl_laplacian_poly(&sys, f).unwrap().eval(&x);
        let (b0, se) = intercept(&steps, &ratios[m], &errors[m]);
        assert!((b0 - want).abs() <= 3.0 * se, "f{m}: intercept {b0} ± {se}, want {want}");
    }
}

#[test]
fn paths_never_land_on_hyperplanes() {
    let sys = RootSystem::new(Family::Z2Product, 2, &[0.7, 0.7]).unwrap();
    let cfg = SimConfig::new(3, 100);
    let states = par_map_indexed(cfg.paths, |j| simulate_to_time(&sys, &[0.05, 0.02], 10.0, &cfg, j)).unwrap();
    let steps: u64 = states.iter().map(|s| s.steps).sum();
    let near: u64 = states.iter().map(|s| s.near_hyperplane).sum();
    assert!(steps >= 1_000_000, "only {steps} steps");
    assert_eq!(near, 0);
}

#[test]
fn scheduling_does_not_change_results() {
    let sys = RootSystem::new(Family::AType, 3, &[0.5]).unwrap();
    let d = Domain::centered_ball(3, 1.0).unwrap();
    let x = [0.3, -0.1, 0.05];
    let cfg = SimConfig::new(21, 400);
    let parallel = harmonic_measure(&sys, &d, &x, &cfg).unwrap();
    let serial: Vec<_> = (0..cfg.paths).map(|j| simulate_until_exit(&sys, &d, &x, &cfg, j).unwrap()).collect();
    assert_eq!(parallel.samples, serial);
    let again = harmonic_measure(&sys, &d, &x, &cfg).unwrap();
    assert_eq!(parallel, again);
}

#[test]
fn mean_exit_time_is_bounded_by_enclosing_ball_occupation() {
    let sys = RootSystem::new(Family::Z2Product, 2, &[0.5, 0.9]).unwrap();
    let d = Domain::ball(vec![0.6, 0.0], 0.3).unwrap();
    let x = [0.6, 0.05];
    let h = harmonic_measure(&sys, &d, &x, &SimConfig::new(8, 5000)).unwrap();
    let tau = h.mean_exit_time();
    let bound = occupation_time_ball(&sys, 0.95, &x).unwrap();
    assert!(tau.mean.is_finite());
    assert!(tau.mean <= bound + 3.0 * tau.std_error, "{} > {bound}", tau.mean);
}

fn quadrant(y: &[f64]) -> usize {
    (y[0] < 0.0) as usize + 2 * (y[1] < 0.0) as usize
}

#[test]
fn harmonic_measure_is_equivariant() {
    let sys = RootSystem::new(Family::Z2Product, 2, &[0.5, 0.9]).unwrap();
    let d = Domain::centered_ball(2, 1.0).unwrap();
    assert!(d.is_w_invariant(&sys));
    let x = [0.35, 0.2];
    let n = 20_000u64;
    let base = harmonic_measure(&sys, &d, &x, &SimConfig::new(31, n)).unwrap();
    let mut p = [0.0; 4];
    for s in &base.samples {
        p[quadrant(&s.exit_point)] += 1.0 / n as f64;
    }
    for (gi, g) in sys.group().iter().enumerate() {
        let gx = g.apply(&x);
        let moved = harmonic_measure(&sys, &d, &gx, &SimConfig::new(40 + gi as u64, n)).unwrap();
        let mut q = [0.0; 4];
        for s in &moved.samples {
            // pull back by g, which is its own inverse in this group
            q[quadrant(&g.apply(&s.exit_point))] += 1.0 / n as f64;
        }
        for c in 0..4 {
            let se = (2.0 * p[c] * (1.0 - p[c]) / n as f64).sqrt().max(1.0 / n as f64);
            assert!((p[c] - q[c]).abs() <= 3.0 * se, "g{gi} quadrant {c}: {} vs {}", p[c], q[c]);
        }
    }
}

#[test]
fn estimates_are_monotone_in_the_data() {
    let sys = RootSystem::new(Family::BType, 2, &[0.4, 0.6]).unwrap();
    let d = Domain::centered_ball(2, 1.0).unwrap();
    let h = harmonic_measure(&sys, &d, &[0.2, 0.5], &SimConfig::new(2, 2000)).unwrap();
    let lo = ScalarField::new("lo", |y: &[f64]| y[0] * y[1]);
    let hi = ScalarField::new("hi", |y: &[f64]| y[0] * y[1] + (y[0] - 0.3).powi(2));
    assert!(h.integrate(&lo).unwrap().mean <= h.integrate(&hi).unwrap().mean);
    let one = ScalarField::constant(1.0);
    assert_eq!(h.integrate(&one).unwrap().mean, 1.0);
}
