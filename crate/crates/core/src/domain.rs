//! Bounded open domains and the set Γ_D = closure(∪_w w(D)) \ D.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dist, norm};
use crate::rootsys::{RootSystem, GEOM_TOL};

pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Serializable shape of the built-in domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Ball { center: Vec<f64>, radius: f64 },
    /// Centered at the origin.
    Annulus { inner: f64, outer: f64 },
    AxisBox { lo: Vec<f64>, hi: Vec<f64> },
}

#[derive(Clone)]
pub enum Domain {
    Shape(Shape),
    Custom {
        name: String,
        dim: usize,
        contains: Predicate,
        bounding_radius: f64,
        w_invariant: bool,
    },
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Shape(s) => write!(f, "{s:?}"),
            Domain::Custom {
                name, bounding_radius, ..
            } => write!(f, "Custom({name}, R={bounding_radius})"),
        }
    }
}

impl Domain {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || center.is_empty() {
            return Err(Error::Config(format!("ball needs a positive radius, got {radius}")));
        }
        Ok(Domain::Shape(Shape::Ball { center, radius }))
    }

    /// `B(0, r)` in ℝ^dim.
    pub fn centered_ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball(vec![0.0; dim], radius)
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return Err(Error::Config(format!(
                "annulus needs 0 < inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(Domain::Shape(Shape::Annulus { inner, outer }))
    }

    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::Config("box needs lo < hi in every coordinate".into()));
        }
        Ok(Domain::Shape(Shape::AxisBox { lo, hi }))
    }

    pub fn custom(
        name: impl Into<String>,
        dim: usize,
        bounding_radius: f64,
        w_invariant: bool,
        contains: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Domain::Custom {
            name: name.into(),
            dim,
            contains: Arc::new(contains),
            bounding_radius,
            w_invariant,
        }
    }

    pub fn from_shape(shape: Shape) -> Result<Self> {
        match shape {
            Shape::Ball { center, radius } => Self::ball(center, radius),
            Shape::Annulus { inner, outer } => Self::annulus(inner, outer),
            Shape::AxisBox { lo, hi } => Self::axis_box(lo, hi),
        }
    }

    /// `None` for an annulus, whose dimension comes from the root system.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Domain::Shape(Shape::Ball { center, .. }) => Some(center.len()),
            Domain::Shape(Shape::AxisBox { lo, .. }) => Some(lo.len()),
            Domain::Shape(Shape::Annulus { .. }) => None,
            Domain::Custom { dim, .. } => Some(*dim),
        }
    }

    /// Open-set membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Shape(Shape::Ball { center, radius }) => dist(x, center) < *radius,
            Domain::Shape(Shape::Annulus { inner, outer }) => {
                let r = norm(x);
                r > *inner && r < *outer
            }
            Domain::Shape(Shape::AxisBox { lo, hi }) => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (a, b))| v > a && v < b),
            Domain::Custom { contains, .. } => contains(x),
        }
    }

    /// Euclidean distance from `x` to the closure; zero inside. `None` for
    /// custom predicates.
    pub fn outside_distance(&self, x: &[f64]) -> Option<f64> {
        match self {
            Domain::Shape(Shape::Ball { center, radius }) => Some((dist(x, center) - radius).max(0.0)),
            Domain::Shape(Shape::Annulus { inner, outer }) => {
                let r = norm(x);
                Some((inner - r).max(r - outer).max(0.0))
            }
            Domain::Shape(Shape::AxisBox { lo, hi }) => Some(
                x.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(v, (a, b))| {
                        let e = (a - v).max(v - b).max(0.0);
                        e * e
                    })
                    .sum::<f64>()
                    .sqrt(),
            ),
            Domain::Custom { .. } => None,
        }
    }

    /// Distance from an interior point to the boundary. `None` for custom
    /// predicates.
    pub fn boundary_distance(&self, x: &[f64]) -> Option<f64> {
        match self {
            Domain::Shape(Shape::Ball { center, radius }) => Some((radius - dist(x, center)).abs()),
            Domain::Shape(Shape::Annulus { inner, outer }) => {
                let r = norm(x);
                Some((r - inner).abs().min((outer - r).abs()))
            }
            Domain::Shape(Shape::AxisBox { lo, hi }) => Some(
                x.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(v, (a, b))| (v - a).abs().min((b - v).abs()))
                    .fold(f64::INFINITY, f64::min),
            ),
            Domain::Custom { .. } => None,
        }
    }

    /// Closure membership with tolerance.
    pub fn in_closure(&self, x: &[f64], tol: f64) -> bool {
        match self.outside_distance(x) {
            Some(d) => d <= tol,
            None => {
                if self.contains(x) {
                    return true;
                }
                let mut y = x.to_vec();
                for i in 0..x.len() {
                    for s in [-tol, tol] {
                        y[i] = x[i] + s;
                        if self.contains(&y) {
                            return true;
                        }
                    }
                    y[i] = x[i];
                }
                false
            }
        }
    }

    /// Radius of a centered ball containing the domain.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Domain::Shape(Shape::Ball { center, radius }) => norm(center) + radius,
            Domain::Shape(Shape::Annulus { outer, .. }) => *outer,
            Domain::Shape(Shape::AxisBox { lo, hi }) => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| {
                    let m = a.abs().max(b.abs());
                    m * m
                })
                .sum::<f64>()
                .sqrt(),
            Domain::Custom { bounding_radius, .. } => *bounding_radius,
        }
    }

    /// `w(D) = D` for every group element.
    pub fn is_w_invariant(&self, sys: &RootSystem) -> bool {
        match self {
            Domain::Shape(Shape::Ball { center, .. }) => sys
                .group()
                .iter()
                .all(|w| dist(&w.apply(center), center) <= GEOM_TOL),
            Domain::Shape(Shape::Annulus { .. }) => true,
            Domain::Shape(Shape::AxisBox { lo, hi }) => {
                // a box is mapped onto itself iff every vertex lands in its closure
                let d = lo.len();
                (0..1usize << d).all(|mask| {
                    let v: Vec<f64> = (0..d)
                        .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                        .collect();
                    sys.group().iter().all(|w| self.in_closure(&w.apply(&v), 1e-9))
                })
            }
            Domain::Custom { w_invariant, .. } => *w_invariant,
        }
    }

    /// Deterministic sample of boundary points of a built-in shape.
    fn boundary_samples(&self, dim: usize) -> Vec<Vec<f64>> {
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for i in 0..dim {
            for s in [-1.0, 1.0] {
                let mut e = vec![0.0; dim];
                e[i] = s;
                dirs.push(e);
            }
        }
        // quasi-random directions from a fixed additive recurrence
        let mut state = 0.5_f64;
        for _ in 0..256 {
            let v: Vec<f64> = (0..dim)
                .map(|_| {
                    state = (state + 0.618_033_988_749_895).fract();
                    2.0 * state - 1.0
                })
                .collect();
            let n = norm(&v);
            if n > 1e-6 {
                dirs.push(v.iter().map(|c| c / n).collect());
            }
        }
        match self {
            Domain::Shape(Shape::Ball { center, radius }) => dirs
                .iter()
                .map(|u| center.iter().zip(u).map(|(c, ui)| c + radius * ui).collect())
                .collect(),
            Domain::Shape(Shape::Annulus { inner, outer }) => dirs
                .iter()
                .flat_map(|u| [u.iter().map(|c| c * inner).collect(), u.iter().map(|c| c * outer).collect()])
                .collect(),
            Domain::Shape(Shape::AxisBox { lo, hi }) => {
                let mut out = Vec::new();
                for mask in 0..1usize << dim {
                    out.push(
                        (0..dim)
                            .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                            .collect(),
                    );
                }
                out
            }
            Domain::Custom { .. } => Vec::new(),
        }
    }

    /// `closure(inner) ⊂ self`. Exact for nested balls, sampled otherwise.
    pub fn compactly_contains(&self, inner: &Domain, dim: usize) -> Result<bool> {
        if let (
            Domain::Shape(Shape::Ball { center: c1, radius: r1 }),
            Domain::Shape(Shape::Ball { center: c2, radius: r2 }),
        ) = (self, inner)
        {
            return Ok(dist(c1, c2) + r2 < *r1 - 1e-12);
        }
        if let Domain::Custom { .. } = inner {
            return Err(Error::Config("cannot verify containment of a custom domain".into()));
        }
        let samples = inner.boundary_samples(dim);
        Ok(samples.iter().all(|p| {
            self.contains(p)
                && self.boundary_distance(p).is_none_or(|d| d > 1e-12)
        }))
    }
}

/// Γ_D membership: `y ∉ D` and some `w·y` lies in closure(D) within `tol`.
pub fn gamma_d_membership(sys: &RootSystem, domain: &Domain, y: &[f64], tol: f64) -> bool {
    if domain.contains(y) {
        return false;
    }
    sys.group().iter().any(|w| domain.in_closure(&w.apply(y), tol))
}

#[derive(Debug, Clone)]
pub struct GammaD<'a> {
    pub domain: &'a Domain,
    pub sys: &'a RootSystem,
}

impl<'a> GammaD<'a> {
    pub fn new(sys: &'a RootSystem, domain: &'a Domain) -> Self {
        GammaD { domain, sys }
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        gamma_d_membership(self.sys, self.domain, y, tol)
    }
}
