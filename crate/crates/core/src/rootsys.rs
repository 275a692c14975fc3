//! Root systems, their reflection groups and the associated weight function.
//!
//! Every root is stored rescaled to `|α|² = 2`. The multiplicity function is
//! stored per positive root and is checked for W-invariance at construction.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};

/// Absolute tolerance for hyperplane membership and orbit deduplication.
pub const GEOM_TOL: f64 = 1e-10;

/// Default cap on the size of an enumerated reflection group.
pub const DEFAULT_GROUP_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Z2Product,
    AType,
    BType,
    Dihedral(u32),
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Z2Product => write!(f, "z2"),
            Family::AType => write!(f, "a"),
            Family::BType => write!(f, "b"),
            Family::Dihedral(m) => write!(f, "dihedral{m}"),
            Family::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "z2" | "z2_product" | "z2product" => Ok(Family::Z2Product),
            "a" | "a_type" => Ok(Family::AType),
            "b" | "b_type" => Ok(Family::BType),
            "custom" => Ok(Family::Custom),
            _ => {
                let m = s
                    .strip_prefix("dihedral")
                    .map(|rest| rest.trim_start_matches(['_', '-', ':']))
                    .and_then(|rest| rest.parse::<u32>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown root system family `{s}`")))?;
                Ok(Family::Dihedral(m))
            }
        }
    }
}

/// An element of the reflection group, with the word of generating
/// reflections (indices into the positive roots) that produces it.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    dim: usize,
    matrix: Vec<f64>,
    word: Vec<usize>,
}

impl GroupElement {
    fn identity(dim: usize) -> Self {
        let mut matrix = vec![0.0; dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = 1.0;
        }
        GroupElement {
            dim,
            matrix,
            word: Vec::new(),
        }
    }

    /// Row-major `d × d` matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.matrix[i * d + j] * x[j]).sum())
            .collect()
    }

    fn compose_reflection(&self, alpha: &[f64], index: usize) -> Self {
        // M · (I − α αᵀ)
        let d = self.dim;
        let m_alpha: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| self.matrix[i * d + j] * alpha[j]).sum())
            .collect();
        let mut matrix = self.matrix.clone();
        for i in 0..d {
            for j in 0..d {
                matrix[i * d + j] -= m_alpha[i] * alpha[j];
            }
        }
        let mut word = self.word.clone();
        word.push(index);
        GroupElement {
            dim: d,
            matrix,
            word,
        }
    }

    fn close_to(&self, other: &GroupElement, tol: f64) -> bool {
        self.matrix
            .iter()
            .zip(&other.matrix)
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    dim: usize,
    family: Family,
    roots: Vec<Vec<f64>>,
    /// Exact (unnormalized) directions, when the realization is rational.
    directions: Option<Vec<Vec<BigRational>>>,
    multiplicity: Vec<f64>,
    orbits: Vec<Vec<usize>>,
    gamma: f64,
    lambda: f64,
    group: Vec<GroupElement>,
}

/// Builds one of the supported families from per-orbit multiplicities.
/// Fails unless λ = γ + d/2 − 1 > 0.
pub fn build_root_system(family: Family, dim: usize, multiplicities: &[f64]) -> Result<RootSystem> {
    RootSystem::new(family, dim, multiplicities)
}

pub fn reflect(x: &[f64], alpha: &[f64]) -> Vec<f64> {
    let c = dot(x, alpha) * 2.0 / norm_sq(alpha);
    x.iter().zip(alpha).map(|(xi, ai)| xi - c * ai).collect()
}

impl RootSystem {
    pub fn new(family: Family, dim: usize, multiplicities: &[f64]) -> Result<Self> {
        let sys = Self::new_allow_recurrent(family, dim, multiplicities)?;
        sys.require_transient()?;
        Ok(sys)
    }

    /// Same as [`RootSystem::new`] but accepts λ ≤ 0. Exit problems on bounded
    /// domains and the operator algebra do not need transience; kernels and
    /// occupation formulas re-check it.
    pub fn new_allow_recurrent(family: Family, dim: usize, multiplicities: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        let (raw, orbit_of_root, n_orbits) = family_roots(family, dim)?;
        if multiplicities.len() != n_orbits {
            return Err(Error::Config(format!(
                "family {family} in dimension {dim} has {n_orbits} root orbit(s), got {} multiplicities",
                multiplicities.len()
            )));
        }
        let per_root: Vec<f64> = orbit_of_root.iter().map(|&o| multiplicities[o]).collect();
        Self::assemble(family, dim, raw, per_root)
    }

    /// A user-supplied positive system with one multiplicity per root.
    pub fn custom(roots: &[Vec<f64>], multiplicities: &[f64], allow_recurrent: bool) -> Result<Self> {
        let dim = roots
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Config("custom root system needs at least one root".into()))?;
        if multiplicities.len() != roots.len() {
            return Err(Error::Config(format!(
                "{} roots but {} multiplicities",
                roots.len(),
                multiplicities.len()
            )));
        }
        let mut raw = Vec::with_capacity(roots.len());
        for r in roots {
            if r.len() != dim {
                return Err(Error::Config("custom roots have inconsistent dimensions".into()));
            }
            let exact: Option<Vec<BigRational>> = r.iter().map(|&v| BigRational::from_f64(v)).collect();
            raw.push(RawRoot {
                vector: r.clone(),
                exact,
            });
        }
        let sys = Self::assemble(Family::Custom, dim, raw, multiplicities.to_vec())?;
        if !allow_recurrent {
            sys.require_transient()?;
        }
        Ok(sys)
    }

    fn assemble(family: Family, dim: usize, raw: Vec<RawRoot>, multiplicity: Vec<f64>) -> Result<Self> {
        if let Some(k) = multiplicity.iter().find(|k| !(**k >= 0.0) || !k.is_finite()) {
            return Err(Error::Config(format!("multiplicities must be finite and nonnegative, got {k}")));
        }
        let mut roots = Vec::with_capacity(raw.len());
        for r in &raw {
            let n2 = norm_sq(&r.vector);
            if !(n2 > 0.0) || !n2.is_finite() {
                return Err(Error::Config("roots must be nonzero and finite".into()));
            }
            let scale = (2.0 / n2).sqrt();
            roots.push(r.vector.iter().map(|v| v * scale).collect::<Vec<f64>>());
        }
        for i in 0..roots.len() {
            for j in 0..i {
                if (dot(&roots[i], &roots[j]).abs() - 2.0).abs() < 1e-9 {
                    return Err(Error::Config(format!("roots {j} and {i} are parallel")));
                }
            }
        }
        let directions = raw.iter().map(|r| r.exact.clone()).collect::<Option<Vec<_>>>();
        let gamma: f64 = multiplicity.iter().sum();
        let lambda = gamma + dim as f64 / 2.0 - 1.0;
        let mut sys = RootSystem {
            dim,
            family,
            roots,
            directions,
            multiplicity,
            orbits: Vec::new(),
            gamma,
            lambda,
            group: Vec::new(),
        };
        sys.orbits = sys.root_orbits_checked()?;
        sys.group = sys.close_group(DEFAULT_GROUP_CAP)?;
        sys.check_invariance()?;
        Ok(sys)
    }

    fn require_transient(&self) -> Result<()> {
        if self.lambda > 0.0 {
            Ok(())
        } else {
            Err(Error::NonPositiveLambda {
                lambda: self.lambda,
                gamma: self.gamma,
                dim: self.dim,
            })
        }
    }

    /// Index of the positive root `β` with `v = ±β`, if any.
    pub fn find_root(&self, v: &[f64]) -> Option<usize> {
        self.roots.iter().position(|r| {
            let plus = r.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-8);
            let minus = r.iter().zip(v).all(|(a, b)| (a + b).abs() < 1e-8);
            plus || minus
        })
    }

    fn root_orbits_checked(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.roots.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for g in 0..n {
            for i in 0..n {
                let image = reflect(&self.roots[i], &self.roots[g]);
                let j = self.find_root(&image).ok_or_else(|| {
                    Error::Config(format!("root set is not closed under the reflection in root {g}"))
                })?;
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut label: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            match label[r] {
                Some(o) => orbits[o].push(i),
                None => {
                    label[r] = Some(orbits.len());
                    orbits.push(vec![i]);
                }
            }
        }
        Ok(orbits)
    }

    fn close_group(&self, cap: usize) -> Result<Vec<GroupElement>> {
        let mut elements = vec![GroupElement::identity(self.dim)];
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for (g, alpha) in self.roots.iter().enumerate() {
                let next = current.compose_reflection(alpha, g);
                if !elements.iter().any(|e| e.close_to(&next, 1e-9)) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    elements.push(next);
                }
            }
            frontier += 1;
        }
        Ok(elements)
    }

    fn check_invariance(&self) -> Result<()> {
        for w in &self.group {
            for (i, alpha) in self.roots.iter().enumerate() {
                let image = w.apply(alpha);
                let j = self
                    .find_root(&image)
                    .ok_or_else(|| Error::Config("root set is not W-stable".into()))?;
                if (self.multiplicity[i] - self.multiplicity[j]).abs() > 1e-12 {
                    return Err(Error::NotInvariant(format!(
                        "k(root {i}) = {} but its image, root {j}, has k = {}",
                        self.multiplicity[i], self.multiplicity[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Positive roots, each with `|α|² = 2`.
    pub fn roots(&self) -> &[Vec<f64>] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &[f64] {
        &self.roots[i]
    }

    pub fn multiplicity(&self, i: usize) -> f64 {
        self.multiplicity[i]
    }

    pub fn multiplicities(&self) -> &[f64] {
        &self.multiplicity
    }

    /// Root indices grouped into W-orbits.
    pub fn root_orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// γ = Σ k(α) over the positive roots.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// λ = γ + d/2 − 1.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_trivial_multiplicity(&self) -> bool {
        self.multiplicity.iter().all(|&k| k == 0.0)
    }

    /// Exact directions of the positive roots (any positive scaling) when the
    /// realization has rational coordinates.
    pub fn rational_directions(&self) -> Option<&[Vec<BigRational>]> {
        self.directions.as_deref()
    }

    /// Per-coordinate multiplicities `k_i = k(√2 e_i)` for the product family.
    pub fn z2_multiplicities(&self) -> Option<Vec<f64>> {
        if self.family != Family::Z2Product {
            return None;
        }
        let mut out = vec![0.0; self.dim];
        for (alpha, k) in self.roots.iter().zip(&self.multiplicity) {
            let i = alpha.iter().position(|v| v.abs() > 0.5)?;
            out[i] = *k;
        }
        Some(out)
    }

    pub fn reflect(&self, x: &[f64], root: usize) -> Vec<f64> {
        let alpha = &self.roots[root];
        let c = dot(x, alpha);
        x.iter().zip(alpha).map(|(xi, ai)| xi - c * ai).collect()
    }

    /// w_k(x) = ∏ |⟨x, α⟩|^{2k(α)}.
    pub fn weight(&self, x: &[f64]) -> f64 {
        self.roots
            .iter()
            .zip(&self.multiplicity)
            .filter(|(_, &k)| k != 0.0)
            .map(|(alpha, &k)| dot(x, alpha).abs().powf(2.0 * k))
            .product()
    }

    pub fn group(&self) -> &[GroupElement] {
        &self.group
    }

    /// Distinct images `w·x`, merged at [`GEOM_TOL`].
    pub fn orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for w in &self.group {
            let y = w.apply(x);
            if !out
                .iter()
                .any(|z| z.iter().zip(&y).all(|(a, b)| (a - b).abs() <= GEOM_TOL))
            {
                out.push(y);
            }
        }
        out
    }

    /// Smallest |⟨α, x⟩| over the positive roots, with the minimizing root.
    pub fn nearest_hyperplane(&self, x: &[f64]) -> Option<(usize, f64)> {
        self.roots
            .iter()
            .enumerate()
            .map(|(i, a)| (i, dot(a, x).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Enumerates W by closing the generating reflections under composition.
pub fn enumerate_group(sys: &RootSystem) -> Vec<GroupElement> {
    sys.group.clone()
}

/// Enumerates W with an explicit cap on its size.
pub fn enumerate_group_capped(sys: &RootSystem, cap: usize) -> Result<Vec<GroupElement>> {
    sys.close_group(cap)
}

struct RawRoot {
    vector: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

fn unit(dim: usize, i: usize, v: i64) -> Vec<i64> {
    let mut e = vec![0; dim];
    e[i] = v;
    e
}

fn integer_root(v: Vec<i64>) -> RawRoot {
    RawRoot {
        vector: v.iter().map(|&x| x as f64).collect(),
        exact: Some(v.iter().map(|&x| BigRational::from_integer(x.into())).collect()),
    }
}

/// Raw (unnormalized) positive roots, the orbit label of each, and the
/// number of orbits.
fn family_roots(family: Family, dim: usize) -> Result<(Vec<RawRoot>, Vec<usize>, usize)> {
    match family {
        Family::Z2Product => {
            let roots = (0..dim).map(|i| integer_root(unit(dim, i, 1))).collect();
            Ok((roots, (0..dim).collect(), dim))
        }
        Family::AType => {
            if dim < 2 {
                return Err(Error::Config("A-type needs dimension at least 2".into()));
            }
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    v[j] = -1;
                    roots.push(integer_root(v));
                }
            }
            let n = roots.len();
            Ok((roots, vec![0; n], 1))
        }
        Family::BType => {
            let mut roots: Vec<RawRoot> = (0..dim).map(|i| integer_root(unit(dim, i, 1))).collect();
            let mut orbit = vec![0; dim];
            for i in 0..dim {
                for j in i + 1..dim {
                    for s in [-1, 1] {
                        let mut v = vec![0; dim];
                        v[i] = 1;
                        v[j] = s;
                        roots.push(integer_root(v));
                        orbit.push(1);
                    }
                }
            }
            let n_orbits = if dim >= 2 { 2 } else { 1 };
            Ok((roots, orbit, n_orbits))
        }
        Family::Dihedral(m) => {
            if dim != 2 {
                return Err(Error::Config("dihedral family lives in dimension 2".into()));
            }
            if m == 0 {
                return Err(Error::Config("dihedral order m must be at least 1".into()));
            }
            let mut roots = Vec::new();
            let mut orbit = Vec::new();
            for j in 0..m {
                let theta = std::f64::consts::FRAC_PI_2 + j as f64 * std::f64::consts::PI / m as f64;
                let mut v = vec![theta.cos(), theta.sin()];
                for c in v.iter_mut() {
                    if c.abs() < 1e-15 {
                        *c = 0.0;
                    }
                }
                roots.push(RawRoot {
                    exact: rational_unit_direction(&v),
                    vector: v,
                });
                orbit.push(if m % 2 == 0 { (j % 2) as usize } else { 0 });
            }
            let n_orbits = if m % 2 == 0 { 2 } else { 1 };
            Ok((roots, orbit, n_orbits))
        }
        Family::Custom => Err(Error::Config(
            "custom root systems are built from an explicit root list".into(),
        )),
    }
}

/// Directions whose components are all 0 or ±c for a single c are rational.
fn rational_unit_direction(v: &[f64]) -> Option<Vec<BigRational>> {
    let c = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.iter()
        .map(|x| {
            let r = x / c;
            if r.abs() < 1e-12 {
                Some(BigRational::zero())
            } else if (r.abs() - 1.0).abs() < 1e-12 {
                Some(BigRational::from_integer((r.signum() as i64).into()))
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_plane_constants() {
        let sys = build_root_system(Family::Z2Product, 2, &[0.5, 1.0]).unwrap();
        let s = 2f64.sqrt();
        assert_eq!(sys.roots().len(), 2);
        assert!((sys.root(0)[0] - s).abs() < 1e-15 && sys.root(0)[1] == 0.0);
        assert!((sys.gamma() - 1.5).abs() < 1e-15);
        assert!((sys.lambda() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_must_be_positive() {
        let err = build_root_system(Family::Z2Product, 1, &[0.3]).unwrap_err();
        match err {
            Error::NonPositiveLambda { lambda, .. } => assert!((lambda + 0.2).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("lambda"));
    }

    #[test]
    fn wrong_multiplicity_count() {
        assert!(matches!(
            build_root_system(Family::Z2Product, 2, &[1.0]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_root_system(Family::BType, 3, &[1.0]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn a3_roots() {
        let sys = build_root_system(Family::AType, 3, &[0.7]).unwrap();
        assert_eq!(sys.roots().len(), 3);
        for r in sys.roots() {
            assert!((norm_sq(r) - 2.0).abs() < 1e-12);
        }
        assert!((sys.gamma() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn reflect_examples() {
        let s = 2f64.sqrt();
        let y = reflect(&[1.0, 2.0], &[s, 0.0]);
        assert!((y[0] + 1.0).abs() < 1e-14 && (y[1] - 2.0).abs() < 1e-14);
        let z = reflect(&[0.0, 3.0], &[s, 0.0]);
        assert_eq!(z, vec![0.0, 3.0]);
    }

    #[test]
    fn weight_examples() {
        let sys = build_root_system(Family::Z2Product, 2, &[0.5, 1.0]).unwrap();
        let w = sys.weight(&[1.0, 2.0]);
        assert!((w - 8.0 * 2f64.sqrt()).abs() < 1e-12);
        let flat = RootSystem::new_allow_recurrent(Family::BType, 3, &[0.0, 0.0]).unwrap();
        assert_eq!(flat.weight(&[0.3, -1.0, 2.0]), 1.0);
    }

    #[test]
    fn group_orders() {
        let z2 = build_root_system(Family::Z2Product, 2, &[1.0, 1.0]).unwrap();
        assert_eq!(enumerate_group(&z2).len(), 4);
        let a3 = build_root_system(Family::AType, 3, &[1.0]).unwrap();
        assert_eq!(enumerate_group(&a3).len(), 6);
        let i23 = build_root_system(Family::Dihedral(3), 2, &[1.0]).unwrap();
        assert_eq!(enumerate_group(&i23).len(), 6);
        let b3 = build_root_system(Family::BType, 3, &[1.0, 0.5]).unwrap();
        assert_eq!(enumerate_group(&b3).len(), 48);
        let i28 = build_root_system(Family::Dihedral(8), 2, &[1.0, 0.5]).unwrap();
        assert_eq!(enumerate_group(&i28).len(), 16);
    }

    #[test]
    fn group_words_reproduce_matrices() {
        let sys = build_root_system(Family::BType, 2, &[1.0, 0.5]).unwrap();
        for w in sys.group() {
            let mut m = GroupElement::identity(2);
            for &g in w.word() {
                m = m.compose_reflection(sys.root(g), g);
            }
            assert!(m.close_to(w, 1e-12));
            // orthogonal
            for i in 0..2 {
                for j in 0..2 {
                    let v: f64 = (0..2).map(|l| w.entry(l, i) * w.entry(l, j)).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn group_cap_is_enforced() {
        let sys = build_root_system(Family::BType, 3, &[1.0, 1.0]).unwrap();
        assert_eq!(
            enumerate_group_capped(&sys, 10).unwrap_err(),
            Error::GroupTooLarge { cap: 10 }
        );
    }

    #[test]
    fn non_crystallographic_custom_is_rejected() {
        // two roots at an irrational angle generate an infinite group
        let a = vec![1.0, 0.0];
        let b = vec![1.0_f64.cos(), 1.0_f64.sin()];
        assert!(RootSystem::custom(&[a, b], &[1.0, 1.0], false).is_err());
    }

    #[test]
    fn non_invariant_multiplicity_is_rejected() {
        // A2 realized as a custom system with unequal multiplicities
        let roots = vec![vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0], vec![1.0, 0.0, -1.0]];
        let err = RootSystem::custom(&roots, &[1.0, 1.0, 0.5], false).unwrap_err();
        assert!(matches!(err, Error::NotInvariant(_)));
        assert!(RootSystem::custom(&roots, &[1.0, 1.0, 1.0], false).is_ok());
    }

    #[test]
    fn orbit_examples() {
        let sys = build_root_system(Family::Z2Product, 2, &[1.0, 1.0]).unwrap();
        let o = sys.orbit(&[0.6, 0.0]);
        assert_eq!(o.len(), 2);
        assert!(o.iter().any(|p| (p[0] + 0.6).abs() < 1e-15));
        assert_eq!(sys.orbit(&[0.0, 0.0]).len(), 1);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("z2".parse::<Family>().unwrap(), Family::Z2Product);
        assert_eq!("dihedral3".parse::<Family>().unwrap(), Family::Dihedral(3));
        assert_eq!("dihedral_6".parse::<Family>().unwrap(), Family::Dihedral(6));
        assert!("e8".parse::<Family>().is_err());
        for f in [Family::Z2Product, Family::AType, Family::BType, Family::Dihedral(5)] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn rational_directions_available() {
        let b = build_root_system(Family::BType, 2, &[1.0, 1.0]).unwrap();
        assert!(b.rational_directions().is_some());
        let i4 = build_root_system(Family::Dihedral(4), 2, &[1.0, 1.0]).unwrap();
        assert!(i4.rational_directions().is_some());
        let i3 = build_root_system(Family::Dihedral(3), 2, &[1.0]).unwrap();
        assert!(i3.rational_directions().is_none());
    }
}
