//! Dunkl operators on polynomials (exact) and the Dunkl Laplacian of smooth
//! black-box functions (finite differences plus exact reflection terms).
//!
//! Coordinate indices are 0-based throughout.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::poly::{Coeff, FloatPoly, MultivariatePolynomial, RationalPoly};
use crate::rootsys::RootSystem;

type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real function on ℝ^d, optionally with the region where it is C².
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    eval: FieldFn,
    region: Option<Domain>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self.name)
    }
}

impl ScalarField {
    pub fn new(name: impl Into<String>, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField {
            name: name.into(),
            eval: Arc::new(eval),
            region: None,
        }
    }

    pub fn with_region(mut self, region: Domain) -> Self {
        self.region = Some(region);
        self
    }

    pub fn from_poly<C: Coeff + Send + Sync + 'static>(name: impl Into<String>, p: MultivariatePolynomial<C>) -> Self {
        let fp = p.to_float();
        Self::new(name, move |x| fp.eval(x))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const {c}"), move |_| c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn region(&self) -> Option<&Domain> {
        self.region.as_ref()
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
}

/// Root directions and multiplicities over a coefficient field.
struct Operator<C: Coeff> {
    directions: Vec<Vec<C>>,
    reflections: Vec<Vec<Vec<C>>>,
    multiplicities: Vec<C>,
}

impl<C: Coeff> Operator<C> {
    fn new(directions: Vec<Vec<C>>, multiplicities: Vec<C>) -> Self {
        let reflections = directions
            .iter()
            .map(|v| {
                let d = v.len();
                let n2 = v.iter().fold(C::zero(), |acc, c| acc + c.clone() * c.clone());
                let two = C::one() + C::one();
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let delta = if i == j { C::one() } else { C::zero() };
                                delta - two.clone() * v[i].clone() * v[j].clone() / n2.clone()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Operator {
            directions,
            reflections,
            multiplicities,
        }
    }

    /// `∂_i p + Σ_α k(α) α_i (p − p∘σ_α)/⟨α, x⟩`; the quotient is invariant
    /// under rescaling α, so unnormalized directions are used as-is.
    fn apply(&self, i: usize, p: &MultivariatePolynomial<C>) -> Result<MultivariatePolynomial<C>> {
        let mut out = p.derivative(i);
        for ((v, sigma), k) in self.directions.iter().zip(&self.reflections).zip(&self.multiplicities) {
            if k.is_zero() || v[i].is_zero() {
                continue;
            }
            let diff = p.clone() - p.compose_linear(sigma);
            if diff.is_zero() {
                continue;
            }
            let quotient = diff.divide_by_linear(v)?;
            out = out + quotient.scale(&(k.clone() * v[i].clone()));
        }
        Ok(out)
    }

    fn laplacian(&self, p: &MultivariatePolynomial<C>) -> Result<MultivariatePolynomial<C>> {
        let mut acc = MultivariatePolynomial::zero(p.dim());
        for i in 0..p.dim() {
            acc = acc + self.apply(i, &self.apply(i, p)?)?;
        }
        Ok(acc)
    }
}

fn rational_operator(sys: &RootSystem) -> Result<Operator<BigRational>> {
    let dirs = sys.rational_directions().ok_or_else(|| {
        Error::Capability(format!(
            "family {} has no rational realization; use the floating-point operators",
            sys.family()
        ))
    })?;
    let ks = sys
        .multiplicities()
        .iter()
        .map(|&k| BigRational::from_f64(k).ok_or_else(|| Error::Config(format!("multiplicity {k}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Operator::new(dirs.to_vec(), ks))
}

fn float_operator(sys: &RootSystem) -> Operator<f64> {
    Operator::new(sys.roots().to_vec(), sys.multiplicities().to_vec())
}

fn check_dim<C: Coeff>(sys: &RootSystem, p: &MultivariatePolynomial<C>) -> Result<()> {
    if p.dim() != sys.dim() {
        return Err(Error::Config(format!(
            "polynomial in {} variables, root system in dimension {}",
            p.dim(),
            sys.dim()
        )));
    }
    Ok(())
}

/// Exact Dunkl operator `T_i` (0-based `i`).
pub fn dunkl_t(sys: &RootSystem, i: usize, p: &RationalPoly) -> Result<RationalPoly> {
    check_dim(sys, p)?;
    if i >= sys.dim() {
        return Err(Error::Config(format!("coordinate index {i} out of range")));
    }
    rational_operator(sys)?.apply(i, p)
}

/// Exact Dunkl Laplacian `Σ_i T_i²`.
pub fn dunkl_laplacian_poly(sys: &RootSystem, p: &RationalPoly) -> Result<RationalPoly> {
    check_dim(sys, p)?;
    rational_operator(sys)?.laplacian(p)
}

/// `T_i` with floating coefficients, for realizations with irrational roots.
pub fn dunkl_t_float(sys: &RootSystem, i: usize, p: &FloatPoly) -> Result<FloatPoly> {
    check_dim(sys, p)?;
    if i >= sys.dim() {
        return Err(Error::Config(format!("coordinate index {i} out of range")));
    }
    float_operator(sys).apply(i, p)
}

pub fn dunkl_laplacian_float(sys: &RootSystem, p: &FloatPoly) -> Result<FloatPoly> {
    check_dim(sys, p)?;
    float_operator(sys).laplacian(p)
}

/// Default finite-difference step at `x`.
pub fn default_step(x: &[f64]) -> f64 {
    1e-4 * norm(x).max(1.0)
}

/// `Δ_k f(x) = Δf + 2 Σ k(α) (⟨∇f, α⟩/⟨α, x⟩ − (f(x) − f(σ_α x))/⟨α, x⟩²)`
/// with central differences for `Δf` and `∇f`.
pub fn dunkl_laplacian_numeric(sys: &RootSystem, f: &ScalarField, x: &[f64], h: f64) -> Result<f64> {
    dunkl_laplacian_fn(sys, &|y: &[f64]| f.eval(y), x, h)
}

pub fn dunkl_laplacian_fn(sys: &RootSystem, f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Result<f64> {
    let d = sys.dim();
    if x.len() != d {
        return Err(Error::Config("point dimension mismatch".into()));
    }
    for (i, alpha) in sys.roots().iter().enumerate() {
        if sys.multiplicity(i) == 0.0 {
            continue;
        }
        // |α| = √2
        let distance = dot(alpha, x).abs() / std::f64::consts::SQRT_2;
        if distance < 10.0 * h {
            return Err(Error::Proximity {
                root: i,
                distance,
                step: h,
            });
        }
    }
    let fx = f(x);
    let mut y = x.to_vec();
    let mut lap = 0.0;
    let mut grad = vec![0.0; d];
    for i in 0..d {
        y[i] = x[i] + h;
        let fp = f(&y);
        y[i] = x[i] - h;
        let fm = f(&y);
        y[i] = x[i];
        lap += (fp - 2.0 * fx + fm) / (h * h);
        grad[i] = (fp - fm) / (2.0 * h);
    }
    let mut extra = 0.0;
    for (i, alpha) in sys.roots().iter().enumerate() {
        let k = sys.multiplicity(i);
        if k == 0.0 {
            continue;
        }
        let ax = dot(alpha, x);
        let reflected = sys.reflect(x, i);
        extra += k * (dot(&grad, alpha) / ax - (fx - f(&reflected)) / (ax * ax));
    }
    Ok(lap + 2.0 * extra)
}

/// Exact certificate that `Δ_k p = 0`.
pub fn is_dunkl_harmonic(sys: &RootSystem, p: &RationalPoly) -> Result<bool> {
    Ok(dunkl_laplacian_poly(sys, p)?.is_zero())
}

/// `2d + 4γ` as an exact rational, the Dunkl Laplacian of `|x|²`.
pub fn laplacian_of_norm_sq(sys: &RootSystem) -> Result<BigRational> {
    let d = BigRational::from_integer((sys.dim() as i64).into());
    let mut gamma = BigRational::zero();
    for &k in sys.multiplicities() {
        gamma += BigRational::from_f64(k).ok_or_else(|| Error::Config(format!("multiplicity {k}")))?;
    }
    let two = BigRational::one() + BigRational::one();
    Ok(two.clone() * d + two.clone() * two * gamma)
}
