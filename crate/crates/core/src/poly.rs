//! Sparse multivariate polynomials over an exact or floating coefficient
//! field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field. Implemented for `BigRational` (exact) and `f64`.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> {
    fn to_f64(&self) -> f64;
    /// Whether a leftover remainder coefficient may be treated as zero.
    fn negligible(&self, scale: f64) -> bool;
}

impl Coeff for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Coeff for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-9 * scale.max(1.0)
    }
}

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct MultivariatePolynomial<C: Coeff = BigRational> {
    dim: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type RationalPoly = MultivariatePolynomial<BigRational>;
pub type FloatPoly = MultivariatePolynomial<f64>;

impl<C: Coeff> MultivariatePolynomial<C> {
    pub fn zero(dim: usize) -> Self {
        MultivariatePolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn monomial(exponent: Exponent, c: C) -> Self {
        let dim = exponent.len();
        let mut p = Self::zero(dim);
        p.add_term(exponent, c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must match dimension");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c.clone() * from_u32::<C>(e[i]));
        }
        out
    }

    /// Classical Laplacian.
    pub fn laplacian(&self) -> Self {
        (0..self.dim).fold(Self::zero(self.dim), |acc, i| {
            acc + self.derivative(i).derivative(i)
        })
    }

    /// `p(Mx)` for a `d × d` matrix given by rows.
    pub fn compose_linear(&self, rows: &[Vec<C>]) -> Self {
        let d = self.dim;
        let forms: Vec<Self> = rows
            .iter()
            .map(|row| Self::linear_form(row))
            .collect();
        // cache powers of each linear form
        let mut powers: Vec<Vec<Self>> = vec![vec![Self::constant(d, C::one())]; d];
        let mut out = Self::zero(d);
        for (e, c) in &self.terms {
            let mut term = Self::constant(d, c.clone());
            for i in 0..d {
                let k = e[i] as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().clone() * forms[i].clone();
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term * powers[i][k].clone();
                }
            }
            out = out + term;
        }
        out
    }

    /// `Σ a_j x_j`.
    pub fn linear_form(a: &[C]) -> Self {
        let d = a.len();
        Self::from_terms(
            d,
            a.iter().enumerate().map(|(j, c)| {
                let mut e = vec![0; d];
                e[j] = 1;
                (e, c.clone())
            }),
        )
    }

    /// Exact division by the linear form `Σ a_j x_j`. Fails if a nonzero
    /// remainder is left.
    pub fn divide_by_linear(&self, a: &[C]) -> Result<Self> {
        let j = a
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Invariant("division by the zero linear form".into()))?;
        let lead = a[j].clone();
        let scale = self
            .terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max);
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.dim);
        loop {
            // the term with the largest power of x_j goes first
            let pick = rem
                .terms
                .iter()
                .filter(|(e, _)| e[j] > 0)
                .max_by(|(e1, _), (e2, _)| e1[j].cmp(&e2[j]).then_with(|| e1.cmp(e2)))
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = pick else { break };
            let mut qe = e.clone();
            qe[j] -= 1;
            let qc = c / lead.clone();
            for (l, al) in a.iter().enumerate() {
                if al.is_zero() {
                    continue;
                }
                let mut te = qe.clone();
                te[l] += 1;
                rem.add_term(te, -(qc.clone() * al.clone()));
            }
            // floating coefficients may leave dust at the cancelled exponent
            if let Some(v) = rem.terms.get(&e) {
                if v.negligible(scale) {
                    rem.terms.remove(&e);
                }
            }
            quotient.add_term(qe, qc);
        }
        if rem.terms.values().any(|c| !c.negligible(scale)) {
            return Err(Error::Invariant(format!(
                "division by a linear form left a remainder with {} term(s)",
                rem.n_terms()
            )));
        }
        Ok(quotient)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64()
                    * e.iter()
                        .zip(x)
                        .map(|(&k, &xi)| xi.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn to_float(&self) -> FloatPoly {
        MultivariatePolynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_f64()))
                .filter(|(_, c)| *c != 0.0)
                .collect(),
        }
    }
}

impl RationalPoly {
    /// `Σ_i x_i²`.
    pub fn norm_squared(dim: usize) -> Self {
        Self::from_terms(
            dim,
            (0..dim).map(|i| {
                let mut e = vec![0; dim];
                e[i] = 2;
                (e, BigRational::one())
            }),
        )
    }
}

fn from_u32<C: Coeff>(n: u32) -> C {
    let mut out = C::zero();
    for _ in 0..n {
        out = out + C::one();
    }
    out
}

impl<C: Coeff> Add for MultivariatePolynomial<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<C: Coeff> Sub for MultivariatePolynomial<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl<C: Coeff> Neg for MultivariatePolynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        let dim = self.dim;
        Self {
            dim,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Coeff> Mul for MultivariatePolynomial<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for MultivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MultivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_and_degree() {
        let x = RationalPoly::variable(2, 0);
        let y = RationalPoly::variable(2, 1);
        let p = (x.clone() + y.clone()) * (x.clone() - y.clone());
        assert_eq!(p.n_terms(), 2);
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_homogeneous());
        assert_eq!(p.coefficient(&[2, 0]), q(1, 1));
        assert_eq!(p.coefficient(&[0, 2]), q(-1, 1));
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn exact_linear_division() {
        let x = RationalPoly::variable(2, 0);
        let y = RationalPoly::variable(2, 1);
        let l = x.clone() - y.clone() * RationalPoly::constant(2, q(3, 2));
        let f = x.clone() * x.clone() + y.clone() + RationalPoly::constant(2, q(7, 1));
        let p = l.clone() * f.clone();
        let quot = p.divide_by_linear(&[q(1, 1), q(-3, 2)]).unwrap();
        assert_eq!(quot, f);
        assert!(matches!(
            f.divide_by_linear(&[q(1, 1), q(-3, 2)]),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn compose_with_swap() {
        let x = RationalPoly::variable(2, 0);
        let y = RationalPoly::variable(2, 1);
        let p = x.clone() * x.clone() * y.clone();
        let swap = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        let expect = y.clone() * y * x;
        assert_eq!(p.compose_linear(&swap), expect);
    }

    #[test]
    fn laplacian_of_norm() {
        let p = RationalPoly::norm_squared(3);
        assert_eq!(p.laplacian(), RationalPoly::constant(3, q(6, 1)));
        assert!((p.eval(&[1.0, 2.0, 2.0]) - 9.0).abs() < 1e-15);
    }

    #[test]
    fn float_division_tolerates_rounding() {
        let a = [0.1, 0.3];
        let l = FloatPoly::linear_form(&a);
        let f = FloatPoly::variable(2, 0) * FloatPoly::variable(2, 1) + FloatPoly::constant(2, 0.7);
        let quot = (l * f.clone()).divide_by_linear(&a).unwrap();
        for (e, c) in f.terms() {
            assert!((quot.coefficient(e) - c).abs() < 1e-12);
        }
    }
}
