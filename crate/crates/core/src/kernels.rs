//! Closed-form kernels for the product group (Z₂)^d and for k ≡ 0: the
//! Dunkl kernel, the heat kernel of ½Δ_k, its normalization constant, the
//! Green function and the expected occupation time of a centered ball.
//!
//! For (Z₂)^d the Dunkl kernel factorizes,
//! `e^{−⟨x,y⟩} E_k(x,y) = ∏ M(k_i, 2k_i+1, −2 x_i y_i)`, and the heat kernel
//! with it. Every other family is rejected unless k ≡ 0.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{dist, dot, norm_sq};
use crate::quadrature::{integrate, integrate_breaks, QuadSettings};
use crate::rootsys::RootSystem;
use crate::specialfns::{gamma_fn, kummer_m, kummer_m_scaled};

/// Truncation half-width of line integrals, in units of `√t`.
pub const TRUNCATION_WIDTHS: f64 = 14.0;

#[derive(Debug, Clone)]
pub struct KernelContext {
    dim: usize,
    /// `k_i` per coordinate (all zero in the k ≡ 0 case).
    coord_k: Vec<f64>,
    gamma: f64,
    lambda: f64,
    c_k: f64,
    quad: QuadSettings,
}

/// `∫_ℝ e^{−s²/2} (2s²)^k ds = 2^{2k+1/2} Γ(k + 1/2)`.
fn c_k_one_dim_closed(k: f64) -> Result<f64> {
    Ok(2f64.powf(2.0 * k + 0.5) * gamma_fn(k + 0.5)?)
}

fn c_k_one_dim_quadrature(k: f64, quad: QuadSettings) -> Result<f64> {
    let half = integrate(
        |s: f64| (-s * s / 2.0).exp() * (2.0 * s * s).powf(k),
        0.0,
        TRUNCATION_WIDTHS + 4.0 * k.sqrt(),
        quad,
    )?;
    Ok(2.0 * half)
}

/// `c_k = ∫ e^{−|y|²/2} w_k(y) dy`, computed as a product of one-dimensional
/// quadratures and checked against the Gamma-function closed form.
pub fn normalization_c_k(sys: &RootSystem) -> Result<f64> {
    let coord_k = coordinate_multiplicities(sys)?;
    let quad = QuadSettings::default();
    let mut numeric = 1.0;
    let mut closed = 1.0;
    for &k in &coord_k {
        numeric *= c_k_one_dim_quadrature(k, quad)?;
        closed *= c_k_one_dim_closed(k)?;
    }
    if ((numeric - closed) / closed).abs() > 1e-8 {
        return Err(Error::Invariant(format!(
            "normalization constant: quadrature {numeric} vs closed form {closed}"
        )));
    }
    Ok(numeric)
}

fn coordinate_multiplicities(sys: &RootSystem) -> Result<Vec<f64>> {
    if let Some(k) = sys.z2_multiplicities() {
        return Ok(k);
    }
    if sys.is_trivial_multiplicity() {
        return Ok(vec![0.0; sys.dim()]);
    }
    Err(Error::Capability(format!(
        "closed-form kernels need the product family or k = 0, got {}",
        sys.family()
    )))
}

impl KernelContext {
    pub fn new(sys: &RootSystem) -> Result<Self> {
        Self::with_quadrature(sys, QuadSettings::default())
    }

    pub fn with_quadrature(sys: &RootSystem, quad: QuadSettings) -> Result<Self> {
        let coord_k = coordinate_multiplicities(sys)?;
        let c_k = normalization_c_k(sys)?;
        let ctx = KernelContext {
            dim: sys.dim(),
            coord_k,
            gamma: sys.gamma(),
            lambda: sys.lambda(),
            c_k,
            quad,
        };
        ctx.self_check()?;
        Ok(ctx)
    }

    /// `∫ p_1(0, y) w_k(y) dy = 1`, one coordinate at a time.
    fn self_check(&self) -> Result<()> {
        let mut total = 1.0;
        for i in 0..self.dim {
            let k = self.coord_k[i];
            let c1 = c_k_one_dim_closed(k)?;
            let mass = 2.0
                * integrate(
                    |s: f64| {
                        // the one-dimensional factor of p_1(0, ·) w_k
                        (-s * s / 2.0).exp() / c1 * (2.0 * s * s).powf(k)
                    },
                    0.0,
                    TRUNCATION_WIDTHS + 4.0 * k.sqrt(),
                    self.quad,
                )?;
            total *= mass;
        }
        let expected_ck: f64 = self
            .coord_k
            .iter()
            .map(|&k| c_k_one_dim_closed(k))
            .product::<Result<f64>>()?;
        if (total - 1.0).abs() > 1e-8 || ((self.c_k - expected_ck) / expected_ck).abs() > 1e-8 {
            return Err(Error::Invariant(format!(
                "heat kernel mass at t = 1 is {total}, not 1"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c_k(&self) -> f64 {
        self.c_k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coordinate_multiplicities(&self) -> &[f64] {
        &self.coord_k
    }

    pub fn quad(&self) -> QuadSettings {
        self.quad
    }

    /// `w_k(y) = ∏ (2 y_i²)^{k_i}`.
    pub fn weight(&self, y: &[f64]) -> f64 {
        self.coord_k
            .iter()
            .zip(y)
            .map(|(&k, &v)| if k == 0.0 { 1.0 } else { (2.0 * v * v).powf(k) })
            .product()
    }

    /// `E_k(x, y) = e^{⟨x,y⟩} ∏ M(k_i, 2k_i+1, −2 x_i y_i)`.
    pub fn dunkl_kernel(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let mut prod = dot(x, y).exp();
        for ((&k, &a), &b) in self.coord_k.iter().zip(x).zip(y) {
            prod *= kummer_m(k, 2.0 * k + 1.0, -2.0 * a * b)?;
        }
        Ok(prod)
    }

    /// One coordinate of `exp(−(x²+y²)/2t) E_k(x/√t, y/√t)` evaluated
    /// without overflow.
    fn heat_factor(k: f64, t: f64, a: f64, b: f64) -> Result<f64> {
        let s = -2.0 * a * b / t;
        if k == 0.0 {
            return Ok((-(a - b) * (a - b) / (2.0 * t)).exp());
        }
        // for s > 0, e^{−(a−b)²/2t} e^{s} = e^{−(a+b)²/2t} absorbs the scaling
        let c = if s <= 0.0 { a - b } else { a + b };
        let gauss = (-c * c / (2.0 * t)).exp();
        if gauss == 0.0 {
            return Ok(0.0);
        }
        Ok(gauss * kummer_m_scaled(k, 2.0 * k + 1.0, s)?)
    }

    /// `p_t(x, y) = exp(−(|x|²+|y|²)/2t) E_k(x/√t, y/√t) / (c_k t^{γ+d/2})`,
    /// the transition density of the Dunkl process with respect to
    /// `w_k(y) dy`.
    pub fn heat_kernel(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("heat kernel needs t > 0, got {t}")));
        }
        let mut prod = 1.0 / (self.c_k * t.powf(self.gamma + self.dim as f64 / 2.0));
        for ((&k, &a), &b) in self.coord_k.iter().zip(x).zip(y) {
            prod *= Self::heat_factor(k, t, a, b)?;
        }
        Ok(prod)
    }

    /// `G(x, y) = ∫_0^∞ p_t(x, y) dt`. Infinite on the diagonal for d ≥ 2.
    ///
    /// On `[0, 1]` the substitution `t = s²` removes the `t^{−1/2}` diagonal
    /// singularity of the one-dimensional case; on `[1, ∞)` the substitution
    /// `t = v^{−1/λ}` turns the `t^{−(λ+1)}` tail into a bounded integrand.
    pub fn green_function(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if !(self.lambda > 0.0) {
            return Err(Error::NonPositiveLambda {
                lambda: self.lambda,
                gamma: self.gamma,
                dim: self.dim,
            });
        }
        let r = dist(x, y);
        if r == 0.0 && self.dim >= 2 {
            return Ok(f64::INFINITY);
        }
        let mut err = None;
        let mut head = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            match self.heat_kernel(s * s, x, y) {
                Ok(v) => 2.0 * s * v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        };
        // geometric breakpoints around the peak at s ≈ r
        let mut breaks = vec![0.0, 1.0];
        let mut b = (r / 8.0).max(1e-6);
        while b < 1.0 {
            breaks.push(b);
            b *= 2.0;
        }
        let head_val = integrate_breaks(&mut head, &breaks, self.quad)?;
        let lam = self.lambda;
        let mut tail = |v: f64| {
            if v == 0.0 {
                // limit of t^{λ+1} p_t / λ as t → ∞
                return self.tail_limit() / lam;
            }
            let t = v.powf(-1.0 / lam);
            match self.heat_kernel(t, x, y) {
                Ok(p) => p * t.powf(lam + 1.0) / lam,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        };
        let tail_val = integrate_breaks(&mut tail, &[0.0, 0.5, 1.0], self.quad)?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(head_val + tail_val)
    }

    fn tail_limit(&self) -> f64 {
        1.0 / self.c_k
    }

    /// Mass `∫ p_t(x, y) w_k(y) dy` by nested quadrature (d ≤ 2).
    pub fn total_mass(&self, t: f64, x: &[f64]) -> Result<f64> {
        self.integrate_against_weight(x, t, &|y| self.heat_kernel(t, x, y))
    }

    /// `∫ g(y) w_k(y) dy` over a box of half-width `TRUNCATION_WIDTHS·√t`
    /// around `x` (clamped to contain the origin's reflection of `x`), for
    /// d ≤ 2, splitting at 0 and at `±x_i`.
    pub fn integrate_against_weight(
        &self,
        x: &[f64],
        t: f64,
        g: &dyn Fn(&[f64]) -> Result<f64>,
    ) -> Result<f64> {
        let width = TRUNCATION_WIDTHS * t.sqrt();
        let axis = |c: f64| -> Vec<f64> {
            let lo = -c.abs() - width;
            let hi = c.abs() + width;
            vec![lo, -c.abs(), 0.0, c.abs(), hi]
        };
        let mut err = None;
        let out = match self.dim {
            1 => {
                let mut f = |a: f64| match g(&[a]) {
                    Ok(v) => v * self.weight(&[a]),
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                };
                integrate_breaks(&mut f, &axis(x[0]), self.quad)?
            }
            2 => {
                let inner_quad = QuadSettings {
                    rel_tol: self.quad.rel_tol * 0.1,
                    ..self.quad
                };
                let mut outer = |a: f64| {
                    let mut inner = |b: f64| match g(&[a, b]) {
                        Ok(v) => v * self.weight(&[a, b]),
                        Err(e) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    };
                    match integrate_breaks(&mut inner, &axis(x[1]), inner_quad) {
                        Ok(v) => v,
                        Err(e) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    }
                };
                let mut e2 = None;
                let v = integrate_breaks(&mut outer, &axis(x[0]), self.quad).unwrap_or_else(|e| {
                    e2 = Some(e);
                    0.0
                });
                if let Some(e) = e2 {
                    return Err(e);
                }
                v
            }
            d => {
                return Err(Error::Capability(format!(
                    "weighted quadrature is implemented for d <= 2, got {d}"
                )))
            }
        };
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// `E_k(x, y)` for the product family or k ≡ 0.
pub fn dunkl_kernel_z2(ctx: &KernelContext, x: &[f64], y: &[f64]) -> Result<f64> {
    ctx.dunkl_kernel(x, y)
}

pub fn heat_kernel(ctx: &KernelContext, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    ctx.heat_kernel(t, x, y)
}

pub fn green_function(ctx: &KernelContext, x: &[f64], y: &[f64]) -> Result<f64> {
    ctx.green_function(x, y)
}

/// Expected total time spent in `B(0, r)` started from `x` with `|x| ≤ r`:
/// `r²/(2λ) − |x|²/(2λ+2)`.
pub fn occupation_time_ball(sys: &RootSystem, r: f64, x: &[f64]) -> Result<f64> {
    let lam = sys.lambda();
    if !(lam > 0.0) {
        return Err(Error::NonPositiveLambda {
            lambda: lam,
            gamma: sys.gamma(),
            dim: sys.dim(),
        });
    }
    let x2 = norm_sq(x);
    if !(r > 0.0) || x2 > r * r * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "occupation formula needs |x| <= r, got |x| = {}, r = {r}",
            x2.sqrt()
        )));
    }
    Ok(r * r / (2.0 * lam) - x2 / (2.0 * lam + 2.0))
}

/// Expected time spent in `B(0, r)` from a start with `|x| ≥ r`:
/// `r^{2λ+2} / (λ (2λ+2) |x|^{2λ})`.
pub fn occupation_time_ball_outside(sys: &RootSystem, r: f64, x: &[f64]) -> Result<f64> {
    let lam = sys.lambda();
    if !(lam > 0.0) {
        return Err(Error::NonPositiveLambda {
            lambda: lam,
            gamma: sys.gamma(),
            dim: sys.dim(),
        });
    }
    let x2 = norm_sq(x);
    if x2 < r * r * (1.0 - 1e-12) {
        return Err(Error::Domain("start point lies inside the ball".into()));
    }
    Ok(r.powf(2.0 * lam + 2.0) / (lam * (2.0 * lam + 2.0) * x2.powf(lam)))
}

/// Classical Newtonian kernel of ½Δ in ℝ³: `1/(2π|x−y|)`.
pub fn brownian_green_3d(x: &[f64], y: &[f64]) -> f64 {
    1.0 / (2.0 * PI * dist(x, y))
}
