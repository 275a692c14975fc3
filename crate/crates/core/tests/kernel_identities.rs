use dunkl_core::dunkl_algebra::dunkl_laplacian_fn;
use dunkl_core::dirichlet::harmonic_measure;
use dunkl_core::domain::Domain;
use dunkl_core::kernels::KernelContext;
use dunkl_core::process::SimConfig;
use dunkl_core::quadrature::gauss_legendre_nodes;
use dunkl_core::rootsys::{Family, RootSystem};
use dunkl_core::stats::MeanEstimate;

fn line(k: f64) -> (RootSystem, KernelContext) {
    let sys = RootSystem::new(Family::Z2Product, 1, &[k]).unwrap();
    let ctx = KernelContext::new(&sys).unwrap();
    (sys, ctx)
}

fn bump(c: f64, r: f64) -> impl Fn(&[f64]) -> f64 {
    move |y: &[f64]| {
        let u = (y[0] - c) / r;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - u * u)).exp()
        }
    }
}

#[test]
fn green_function_inverts_the_laplacian() {
    let (sys, ctx) = line(0.8);
    let (c, r) = (0.9, 0.6);
    let f = bump(c, r);
    for x in [0.7, -0.5, 1.1] {
        let mut total = 0.0;
        // Δ_k f is also supported on the mirror image of supp f.
        for sign in [1.0, -1.0] {
            let (lo, hi) = if sign > 0.0 { (c - r, c + r) } else { (-c - r, -c + r) };
            let mut pieces = vec![lo, hi];
            if lo < x && x < hi {
                pieces.insert(1, x);
            }
            for w in pieces.windows(2) {
                let (nodes, weights) = gauss_legendre_nodes(w[0], w[1], 24);
                for (y, q) in nodes.iter().zip(&weights) {
                    let lap = dunkl_laplacian_fn(&sys, &f, &[*y], 1e-4).unwrap();
                    total += q * ctx.green_function(&[x], &[*y]).unwrap() * lap * sys.weight(&[*y]);
                }
            }
        }
        let want = -2.0 * f(&[x]);
        assert!((total - want).abs() < 1e-3, "x = {x}: {total} vs {want}");
    }
}

fn green_average(ctx: &KernelContext, points: impl Iterator<Item = Vec<f64>>, y: &[f64]) -> MeanEstimate {
    let vals: Vec<f64> = points.map(|z| ctx.green_function(&z, y).unwrap()).collect();
    MeanEstimate::from_samples(&vals)
}

#[test]
fn green_function_is_excessive() {
    let (sys, ctx) = line(0.8);
    let d = Domain::centered_ball(1, 1.0).unwrap();
    let mut cfg = SimConfig::new(11, 2000);
    cfg.dt_base = 1e-4;
    for (x, y) in [(0.3, 1.5), (-0.6, 2.0)] {
        let h = harmonic_measure(&sys, &d, &[x], &cfg).unwrap();
        let avg = green_average(&ctx, h.samples.iter().map(|s| s.exit_point.clone()), &[y]);
        let direct = ctx.green_function(&[x], &[y]).unwrap();
        assert!(avg.mean <= direct + 3.0 * avg.std_error, "{} > {direct}", avg.mean);
    }
}

#[test]
fn exchange_identity_on_an_offset_interval() {
    let (sys, ctx) = line(0.8);
    let d = Domain::ball(vec![0.2], 1.0).unwrap();
    let (x, y) = ([0.3], [-0.4]);
    let mut cfg = SimConfig::new(5, 4000);
    cfg.dt_base = 1e-4;
    let hx = harmonic_measure(&sys, &d, &x, &cfg).unwrap();
    cfg.seed = 6;
    let hy = harmonic_measure(&sys, &d, &y, &cfg).unwrap();
    assert!(hx.jump_exit_fraction() > 0.0 || hy.jump_exit_fraction() > 0.0);
    let a = green_average(&ctx, hx.samples.iter().map(|s| s.exit_point.clone()), &y);
    let b = green_average(&ctx, hy.samples.iter().map(|s| s.exit_point.clone()), &x);
    let diff = a.minus(&b);
    let bound = 3.0 * diff.std_error + 0.02 * a.mean.abs().max(b.mean.abs());
    assert!(diff.mean.abs() <= bound, "{} vs {} (bound {bound})", a.mean, b.mean);
}
