//! Reference values that do not depend on the simulator: closed-form
//! Δ_k-harmonic functions, classical Brownian quantities, and exact
//! rational partial sums of the series behind `specialfns`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::dunkl_algebra::{default_step, dunkl_laplacian_numeric, is_dunkl_harmonic, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::poly::RationalPoly;
use crate::rootsys::{Family, RootSystem};

/// Points per self-test at registration.
pub const SELF_TEST_POINTS: usize = 100;
/// Allowed `|Δ_k f(x)|` relative to the local scale `|x|^{m−2}`.
pub const SELF_TEST_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySet {
    All,
    Only(Vec<Family>),
}

impl FamilySet {
    pub fn contains(&self, f: Family) -> bool {
        match self {
            FamilySet::All => true,
            FamilySet::Only(v) => v.contains(&f),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub name: String,
    pub field: ScalarField,
    pub valid_region: Domain,
    pub applicable_families: FamilySet,
    /// Degree `m` of homogeneity; `|x|^{m−2}` sets the self-test scale.
    pub homogeneity: f64,
    pub provenance: String,
}

/// Random points with `|x| ∈ [r_lo, r_hi]` at distance ≥ `margin` from
/// every hyperplane of a root with nonzero multiplicity.
pub fn sample_off_hyperplanes(sys: &RootSystem, r_lo: f64, r_hi: f64, margin: f64, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = sys.dim();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let nv = norm(&v);
        if !(nv > 1e-3 && nv <= 1.0) {
            continue;
        }
        let r = rng.random_range(r_lo..=r_hi);
        let x: Vec<f64> = v.iter().map(|c| c * r / nv).collect();
        let clear = sys
            .roots()
            .iter()
            .zip(sys.multiplicities())
            .all(|(a, &k)| k == 0.0 || dot(a, &x).abs() / std::f64::consts::SQRT_2 >= margin);
        if clear {
            out.push(x);
        }
    }
    out
}

/// Largest `|Δ_k f(x)| / |x|^{m−2}` over the self-test points.
pub fn harmonicity_defect(sys: &RootSystem, sol: &ReferenceSolution, points: &[Vec<f64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in points {
        let lap = dunkl_laplacian_numeric(sys, &sol.field, x, default_step(x))?;
        let scale = norm(x).powf(sol.homogeneity - 2.0);
        worst = worst.max(lap.abs() / scale);
    }
    Ok(worst)
}

fn register(sys: &RootSystem, sol: ReferenceSolution) -> Result<ReferenceSolution> {
    let pts = sample_off_hyperplanes(sys, 0.5, 2.0, 0.05, SELF_TEST_POINTS, 0x5e1f);
    let defect = harmonicity_defect(sys, &sol, &pts)?;
    if defect > SELF_TEST_TOL {
        return Err(Error::Invariant(format!(
            "{} fails its harmonicity self-test (defect {defect:e})",
            sol.name
        )));
    }
    Ok(sol)
}

/// The barrier `g(x) = |x|^{−2λ}`, Δ_k-harmonic off the origin for every
/// root system.
pub fn reference_g(sys: &RootSystem) -> Result<ReferenceSolution> {
    let lam = sys.lambda();
    if !(lam > 0.0) {
        return Err(Error::NonPositiveLambda {
            lambda: lam,
            gamma: sys.gamma(),
            dim: sys.dim(),
        });
    }
    let field = ScalarField::new("g_lambda", move |x: &[f64]| dot(x, x).powf(-lam));
    register(
        sys,
        ReferenceSolution {
            name: "g_lambda".into(),
            field,
            valid_region: Domain::annulus(0.5, 2.0)?,
            applicable_families: FamilySet::All,
            homogeneity: -2.0 * lam,
            provenance: "radial barrier |x|^(-2 lambda)".into(),
        },
    )
}

/// `u(x) = g(x) − r^{−2λ}`: positive in `B(0,r) \ {0}`, zero on the sphere.
pub fn barrier_u(sys: &RootSystem, r: f64) -> Result<ScalarField> {
    let lam = sys.lambda();
    if !(lam > 0.0) {
        return Err(Error::NonPositiveLambda {
            lambda: lam,
            gamma: sys.gamma(),
            dim: sys.dim(),
        });
    }
    let shift = r.powf(-2.0 * lam);
    Ok(ScalarField::new("barrier_u", move |x: &[f64]| dot(x, x).powf(-lam) - shift))
}

/// `x_i` and `x_i x_j` (i < j) for `(Z₂)^d`, each with an exact certificate
/// `Δ_k p = 0`.
pub fn reference_harmonic_polys(sys: &RootSystem) -> Result<Vec<ReferenceSolution>> {
    if sys.family() != Family::Z2Product {
        return Err(Error::Capability("harmonic polynomial catalog covers (Z2)^d only".into()));
    }
    let d = sys.dim();
    let mut candidates: Vec<(String, RationalPoly, f64)> = (0..d)
        .map(|i| (format!("x{}", i + 1), RationalPoly::variable(d, i), 1.0))
        .collect();
    for i in 0..d {
        for j in i + 1..d {
            let p = RationalPoly::variable(d, i) * RationalPoly::variable(d, j);
            candidates.push((format!("x{}x{}", i + 1, j + 1), p, 2.0));
        }
    }
    let bound = Domain::centered_ball(d, 2.0)?;
    let mut out = Vec::with_capacity(candidates.len());
    for (name, p, m) in candidates {
        if !is_dunkl_harmonic(sys, &p)? {
            return Err(Error::Invariant(format!("{name} is not Dunkl-harmonic")));
        }
        let sol = ReferenceSolution {
            field: ScalarField::from_poly(name.clone(), p),
            name,
            valid_region: bound.clone(),
            applicable_families: FamilySet::Only(vec![Family::Z2Product]),
            homogeneity: m,
            provenance: "exact polynomial certificate".into(),
        };
        out.push(register(sys, sol)?);
    }
    Ok(out)
}

/// Expected exit time of Brownian motion (generator ½Δ) from `B(0,r)`:
/// `(r² − |x|²)/d`.
pub fn brownian_reference(d: usize, r: f64, x: &[f64]) -> Result<f64> {
    let x2 = dot(x, x);
    if x.len() != d || x2 > r * r {
        return Err(Error::Domain(format!("need |x| <= r in dimension {d}")));
    }
    Ok((r * r - x2) / d as f64)
}

/// Harmonic extension of `f` from the complement of `(−a, a)` in one
/// dimension: affine inside (1 and `y` span the Δ_k-harmonic functions on
/// an interval for `(Z₂)`), `f` itself outside.
pub fn interval_harmonic_extension(f: &ScalarField, a: f64, y: f64) -> f64 {
    if y.abs() < a {
        ((a + y) * f.eval(&[a]) + (a - y) * f.eval(&[-a])) / (2.0 * a)
    } else {
        f.eval(&[y])
    }
}

/// Exact binary value of a finite float.
pub fn exact_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

fn sum_until_negligible(mut next: impl FnMut(usize, &BigRational) -> BigRational, min_terms: usize) -> Result<f64> {
    // stop once the term is below 10^-40 of the sum
    let cutoff = BigRational::from_integer(BigInt::from(10).pow(40));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for n in 0..20_000 {
        term = next(n, &term);
        sum += &term;
        if term.is_zero() || (n >= min_terms && term.abs() * &cutoff < sum.abs()) {
            return sum
                .to_f64()
                .ok_or_else(|| Error::Invariant("rational series value out of range".into()));
        }
    }
    Err(Error::Accuracy {
        what: "exact series oracle".into(),
        partial: sum.to_f64().unwrap_or(f64::NAN),
    })
}

/// `M(a, b, s)` by exact rational summation of the defining series.
pub fn kummer_exact(a: f64, b: f64, s: f64) -> Result<f64> {
    let (a, b, s) = (exact_rational(a)?, exact_rational(b)?, exact_rational(s)?);
    let min_terms = s.abs().ceil().to_integer().to_usize().unwrap_or(0) + 2;
    sum_until_negligible(
        |n, t| {
            let n = BigRational::from_integer(BigInt::from(n));
            t * (&a + &n) / (&b + &n) * &s / (n + BigRational::one())
        },
        min_terms,
    )
}

/// `j_λ(z) = Σ (−z²/4)^n / (n! (λ+1)_n)`, exactly.
pub fn bessel_j_exact(lam: f64, z: f64) -> Result<f64> {
    let (lam, z) = (exact_rational(lam)?, exact_rational(z)?);
    let q = -(&z * &z) / BigRational::from_integer(BigInt::from(4));
    let min_terms = z.abs().ceil().to_integer().to_usize().unwrap_or(0) + 2;
    sum_until_negligible(
        |n, t| {
            let n1 = BigRational::from_integer(BigInt::from(n + 1));
            t * &q / (&n1 * (&lam + &n1))
        },
        min_terms,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrier_values() {
        let sys = RootSystem::new(Family::Z2Product, 3, &[0.5, 0.25, 0.25]).unwrap();
        assert!((sys.lambda() - 1.5).abs() < 1e-15);
        let g = reference_g(&sys).unwrap();
        assert!((g.field.eval(&[2.0, 0.0, 0.0]) - 0.125).abs() < 1e-15);
        let u = barrier_u(&sys, 1.0).unwrap();
        assert!(u.eval(&[0.3, 0.2, 0.1]) > 0.0);
        assert!(u.eval(&[0.6, 0.8, 0.0]).abs() < 1e-12);
        for fam in [(Family::AType, vec![0.7]), (Family::Dihedral(5), vec![0.4]), (Family::BType, vec![0.3, 0.4])] {
            let dim = if fam.0 == Family::Dihedral(5) { 2 } else { 3 };
            let s = RootSystem::new(fam.0, dim, &fam.1).unwrap();
            reference_g(&s).unwrap();
        }
    }

    #[test]
    fn polynomial_catalog() {
        let sys = RootSystem::new(Family::Z2Product, 3, &[0.7, 1.1, 0.3]).unwrap();
        let cat = reference_harmonic_polys(&sys).unwrap();
        let names: Vec<&str> = cat.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["x1", "x2", "x3", "x1x2", "x1x3", "x2x3"]);
        // x1² is rejected: Δ_k x1² = 2 + 4k1
        let sq = RationalPoly::variable(3, 0) * RationalPoly::variable(3, 0);
        assert!(!is_dunkl_harmonic(&sys, &sq).unwrap());
        let a = RootSystem::new(Family::AType, 3, &[0.5]).unwrap();
        assert!(matches!(reference_harmonic_polys(&a), Err(Error::Capability(_))));
    }

    #[test]
    fn brownian_values() {
        assert_eq!(brownian_reference(2, 1.0, &[0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(brownian_reference(2, 1.0, &[1.0, 0.0]).unwrap(), 0.0);
        assert!(brownian_reference(2, 1.0, &[1.5, 0.0]).is_err());
        // d = 3, k ≡ 0: λ = 1/2 and the occupation time of the ball bounds the exit time
        let sys = RootSystem::new(Family::Z2Product, 3, &[0.0, 0.0, 0.0]).unwrap();
        for i in 0..=10 {
            let x = [0.1 * i as f64, 0.0, 0.0];
            let exit = brownian_reference(3, 1.0, &x).unwrap();
            let occ = crate::kernels::occupation_time_ball(&sys, 1.0, &x).unwrap();
            assert!(exit <= occ + 1e-15);
        }
    }

    #[test]
    fn exact_series() {
        assert!((kummer_exact(1.0, 2.0, 1.0).unwrap() - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert_eq!(kummer_exact(0.0, 1.0, -7.5).unwrap(), 1.0);
        // M(1,2,s) = (e^s − 1)/s at a negative argument: no cancellation in exact arithmetic
        let s: f64 = -20.0;
        let v = kummer_exact(1.0, 2.0, s).unwrap();
        assert!((v - s.exp_m1() / s).abs() < 1e-15 * v.abs());
        // j_{1/2}(z) = sin z / z
        let z = 2.75;
        assert!((bessel_j_exact(0.5, z).unwrap() - z.sin() / z).abs() < 1e-15);
        assert_eq!(bessel_j_exact(1.3, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn interval_extension() {
        let f = ScalarField::new("f", |x| x[0] * x[0]);
        assert!((interval_harmonic_extension(&f, 1.0, 0.25) - 1.0).abs() < 1e-15);
        assert_eq!(interval_harmonic_extension(&f, 1.0, 1.5), 2.25);
    }
}
