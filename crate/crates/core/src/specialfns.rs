//! Kummer's confluent hypergeometric function, the normalized Bessel
//! function and Gamma.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAccuracy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesAccuracy {
    fn default() -> Self {
        SeriesAccuracy {
            rel_tol: 1e-12,
            max_terms: 500,
        }
    }
}

impl SeriesAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) || max_terms < 10 {
            return Err(Error::Config(format!(
                "series accuracy needs 0 < rel_tol < 1 and max_terms >= 10, got {rel_tol}, {max_terms}"
            )));
        }
        Ok(SeriesAccuracy { rel_tol, max_terms })
    }

    /// The peak term of a series in `s` sits near index `|s|`, so the budget
    /// grows with the argument.
    fn budget(&self, s: f64) -> usize {
        self.max_terms + (2.0 * s.abs()).ceil() as usize
    }
}

const RESCALE_AT: f64 = 1e250;

/// Above this argument the scaled function is summed from its large-`s`
/// asymptotic series, whose smallest term is of order `e^{−s}`.
pub const ASYMPTOTIC_FROM: f64 = 200.0;

/// `e^{−s} M(a, b, s) ~ Γ(b)/Γ(a) s^{a−b} Σ (b−a)_n (1−a)_n / (n! sⁿ)`.
fn kummer_scaled_asymptotic(a: f64, b: f64, s: f64, acc: SeriesAccuracy) -> Result<f64> {
    let prefactor = (statrs::function::gamma::ln_gamma(b) - statrs::function::gamma::ln_gamma(a)
        + (a - b) * s.ln())
    .exp();
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 1..=acc.max_terms {
        let nf = n as f64;
        let next = term * (b - a + nf - 1.0) * (nf - a) / (nf * s);
        if next.abs() >= term.abs() && n > 1 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= acc.rel_tol * 1e-2 * sum.abs() {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::Accuracy {
        what: format!("asymptotic Kummer series M({a}, {b}, {s})"),
        partial: prefactor * sum,
    })
}

/// `e^{−s} M(a, b, s)` for `s ≥ 0`, summed with running rescaling so that
/// neither the terms nor `e^s` overflow.
fn kummer_scaled_positive(a: f64, b: f64, s: f64, acc: SeriesAccuracy) -> Result<f64> {
    debug_assert!(s >= 0.0);
    if s == 0.0 || a == 0.0 {
        return Ok((-s).exp());
    }
    if s > ASYMPTOTIC_FROM {
        return kummer_scaled_asymptotic(a, b, s, acc);
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut log_scale = 0.0_f64;
    let budget = acc.budget(s);
    for n in 1..=budget {
        let nf = n as f64;
        let ratio = (a + nf - 1.0) / (b + nf - 1.0) * s / nf;
        term *= ratio;
        sum += term;
        if sum > RESCALE_AT {
            term /= RESCALE_AT;
            sum /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        // Past the peak the ratios decrease monotonically, so the tail is
        // dominated by a geometric series.
        let next = (a + nf) / (b + nf) * s / (nf + 1.0);
        if nf > s && next < 1.0 && term * next / (1.0 - next) <= acc.rel_tol * sum {
            return Ok(sum * (log_scale - s).exp());
        }
    }
    Err(Error::Accuracy {
        what: format!("Kummer series M({a}, {b}, {s})"),
        partial: sum * (log_scale - s).exp(),
    })
}

/// `e^{−max(s,0)} M(a, b, s)`: bounded for the arguments the heat kernel
/// needs, where `M` itself may overflow.
pub fn kummer_m_scaled(a: f64, b: f64, s: f64) -> Result<f64> {
    kummer_m_scaled_with(a, b, s, SeriesAccuracy::default())
}

pub fn kummer_m_scaled_with(a: f64, b: f64, s: f64, acc: SeriesAccuracy) -> Result<f64> {
    check_kummer_args(a, b, s)?;
    if a == 0.0 {
        return Ok(if s > 0.0 { (-s).exp() } else { 1.0 });
    }
    if s >= 0.0 {
        kummer_scaled_positive(a, b, s, acc)
    } else {
        // M(a, b, s) = e^s M(b − a, b, −s)
        kummer_scaled_positive(b - a, b, -s, acc)
    }
}

/// Kummer's function `M(a, b, s) = Σ (a)_n/(b)_n · sⁿ/n!`.
///
/// Negative arguments go through `M(a,b,s) = e^s M(b−a,b,−s)`, which turns
/// the alternating series into one of positive terms.
pub fn kummer_m(a: f64, b: f64, s: f64) -> Result<f64> {
    kummer_m_with(a, b, s, SeriesAccuracy::default())
}

pub fn kummer_m_with(a: f64, b: f64, s: f64, acc: SeriesAccuracy) -> Result<f64> {
    let scaled = kummer_m_scaled_with(a, b, s, acc)?;
    Ok(if s > 0.0 { scaled * s.exp() } else { scaled })
}

/// The raw series with no transformation. Accurate only when `|s|` is small
/// enough that the alternating terms do not cancel.
pub fn kummer_m_raw(a: f64, b: f64, s: f64, acc: SeriesAccuracy) -> Result<f64> {
    check_kummer_args(a, b, s)?;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 1..=acc.budget(s) {
        let nf = n as f64;
        term *= (a + nf - 1.0) / (b + nf - 1.0) * s / nf;
        sum += term;
        if term == 0.0 || (nf > s.abs() && term.abs() <= acc.rel_tol * sum.abs() * 0.1) {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        what: format!("raw Kummer series M({a}, {b}, {s})"),
        partial: sum,
    })
}

fn check_kummer_args(a: f64, b: f64, s: f64) -> Result<()> {
    if !(b > 0.0) || !(a >= 0.0) || !s.is_finite() || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "Kummer M(a, b, s) needs a >= 0, b > 0 and finite s; got ({a}, {b}, {s})"
        )));
    }
    Ok(())
}

/// Double-double accumulator for the alternating Bessel series.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = Dd::two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = Dd::two_sum(s, e);
        Dd { hi, lo }
    }

    fn mul_f64(self, x: f64) -> Dd {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        let (hi, lo) = Dd::two_sum(p, e + self.lo * x);
        Dd { hi, lo }
    }

    fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        let r = self.add(Dd::from(q1).mul_f64(-x));
        let q2 = r.hi / x;
        let (hi, lo) = Dd::two_sum(q1, q2);
        Dd { hi, lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Normalized Bessel function
/// `j_λ(z) = Γ(λ+1) Σ (−1)ⁿ z²ⁿ / (4ⁿ n! Γ(n+λ+1))`.
pub fn bessel_j_normalized(lam: f64, z: f64) -> Result<f64> {
    bessel_j_normalized_with(lam, z, SeriesAccuracy::default())
}

pub fn bessel_j_normalized_with(lam: f64, z: f64, acc: SeriesAccuracy) -> Result<f64> {
    if !(lam > -1.0) || !z.is_finite() {
        return Err(Error::Domain(format!("j_lambda needs lambda > -1 and finite z; got ({lam}, {z})")));
    }
    let q = -(z * z) / 4.0;
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let mut max_term = 1.0_f64;
    for n in 1..=acc.budget(z) {
        let nf = n as f64;
        term = term.mul_f64(q).div_f64(nf * (lam + nf));
        sum = sum.add(term);
        let t = term.hi.abs();
        max_term = max_term.max(t);
        // stop once terms are negligible against both the sum and the
        // cancellation floor set by the largest term
        if nf * nf > q.abs() && t <= acc.rel_tol * sum.hi.abs().max(1e-16 * max_term) {
            return Ok(sum.value());
        }
    }
    Err(Error::Accuracy {
        what: format!("Bessel series j_{lam}({z})"),
        partial: sum.value(),
    })
}

/// Γ(x), backed by `statrs`' Lanczos approximation with reflection.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Domain(format!("Gamma has a pole at {x}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("Gamma argument {x} is not finite")));
    }
    Ok(statrs::function::gamma::gamma(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn kummer_trivial_values() {
        assert_eq!(kummer_m(0.7, 2.4, 0.0).unwrap(), 1.0);
        for s in [-30.0, -1.0, 0.5, 12.0] {
            assert!((kummer_m(0.0, 1.0, s).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(rel(kummer_m(1.0, 2.0, 1.0).unwrap(), E - 1.0) < 1e-11);
    }

    #[test]
    fn kummer_closed_form_family() {
        // M(1, 2, s) = (e^s − 1)/s
        for s in [-20.0, -3.5, -0.1, 0.3, 4.0, 25.0] {
            let expect = (f64::exp(s) - 1.0) / s;
            assert!(rel(kummer_m(1.0, 2.0, s).unwrap(), expect) < 1e-11, "s = {s}");
        }
        // M(a, a, s) = e^s
        assert!(rel(kummer_m(2.5, 2.5, -7.0).unwrap(), (-7.0f64).exp()) < 1e-11);
    }

    #[test]
    fn kummer_large_arguments_stay_finite() {
        let v = kummer_m_scaled(0.8, 2.6, 5000.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let w = kummer_m(0.8, 2.6, -5000.0).unwrap();
        assert!(w.is_finite() && w > 0.0);
        // asymptotically M(a,b,−s) ~ Γ(b)/Γ(b−a) s^{−a}
        let asym = gamma_fn(2.6).unwrap() / gamma_fn(1.8).unwrap() * 5000f64.powf(-0.8);
        assert!(rel(w, asym) < 1e-3);
    }

    #[test]
    fn kummer_rejects_bad_parameters() {
        assert!(matches!(kummer_m(1.0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(kummer_m(1.0, 2.0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn kummer_reports_non_convergence() {
        let acc = SeriesAccuracy::new(1e-15, 10).unwrap();
        // the budget covers 10 + 2|s| terms; a huge b slows nothing, so
        // force failure with a tolerance that cannot be met
        let tight = SeriesAccuracy { rel_tol: 1e-300, ..acc };
        match kummer_m_with(0.5, 1.5, 3.0, tight) {
            Err(Error::Accuracy { partial, .. }) => assert!(partial > 0.0 && partial.is_finite()),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_j_normalized(0.3, 0.0).unwrap(), 1.0);
        // j_{1/2}(z) = sin z / z
        for z in [0.5, 2.0, PI, 7.5, 15.0] {
            let v = bessel_j_normalized(0.5, z).unwrap();
            assert!((v - z.sin() / z).abs() < 1e-12, "z = {z}: {v}");
        }
        // j_{−1/2}(z) = cos z
        assert!((bessel_j_normalized(-0.5, 3.0).unwrap() - 3f64.cos()).abs() < 1e-12);
        assert_eq!(
            bessel_j_normalized(1.7, 2.3).unwrap(),
            bessel_j_normalized(1.7, -2.3).unwrap()
        );
        assert!(bessel_j_normalized(-1.0, 1.0).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma_fn(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-13);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-3.0).is_err());
    }

    #[test]
    fn accuracy_validation() {
        assert!(SeriesAccuracy::new(1.5, 100).is_err());
        assert!(SeriesAccuracy::new(1e-12, 5).is_err());
        assert!(SeriesAccuracy::new(1e-12, 500).is_ok());
    }
}
