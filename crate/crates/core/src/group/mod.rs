//! Compact groups, their irreducible representations and Haar integration.
//!
//! Every group exposes an exact quadrature rule parameterized by a *degree*:
//! the charge `|α|` of a `U(1)` irrep, `2j` for a spin-`j` irrep of `SU(2)`,
//! and zero for finite groups. Degrees add under products of matrix
//! elements, so an integrand assembled from irreps of total degree `D` is
//! integrated exactly by `quadrature(D)`.

mod circle;
mod finite;
mod gauss;
mod su2;

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};

pub use circle::Circle;
pub use finite::{permutation_matrix, s3_permutations, s3_standard_basis, FiniteGroup, FiniteIrrep};
pub use gauss::gauss_legendre_unit;
pub use su2::{Spin, Su2, Su2Element};

pub trait CompactGroup: Send + Sync + fmt::Debug {
    type Element: Clone + fmt::Debug + Send + Sync;
    type Label: Copy + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn name(&self) -> String;
    fn kind(&self) -> GroupKind;
    fn identity(&self) -> Self::Element;
    fn compose(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;

    /// Checks that `label` names an irrep of this group.
    fn validate_label(&self, label: Self::Label) -> Result<()>;
    fn trivial_label(&self) -> Self::Label;
    fn irrep_dim(&self, label: Self::Label) -> usize;
    fn conjugate(&self, label: Self::Label) -> Self::Label;
    fn irrep_degree(&self, label: Self::Label) -> usize;
    fn irrep_matrix(&self, label: Self::Label, g: &Self::Element) -> CMatrix;

    fn character(&self, label: Self::Label, g: &Self::Element) -> C64 {
        self.irrep_matrix(label, g).trace()
    }

    /// Exact rule for integrands of degree at most `degree`.
    fn quadrature(&self, degree: usize) -> Quadrature<Self::Element>;

    /// Uniform grid with an explicit point count. Only meaningful on the circle.
    fn uniform_grid(&self, _points: usize) -> Result<Quadrature<Self::Element>> {
        Err(Error::Unsupported(format!("explicit grids on {}", self.name())))
    }

    fn sample_haar<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Element;

    /// Whether inner integrals are exact, as character convolution requires.
    fn exact_integration(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Finite,
    Circle,
    Su2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    ExactSum,
    UniformGrid,
    Cubature,
}

/// Weighted nodes; weights sum to one.
#[derive(Clone, Debug)]
pub struct Quadrature<E> {
    pub kind: QuadratureKind,
    pub nodes: Vec<(E, f64)>,
}

impl<E> Quadrature<E> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(&E) -> C64>(&self, mut f: F) -> C64 {
        self.nodes.iter().map(|(g, w)| f(g) * *w).sum()
    }

    pub fn integrate_real<F: FnMut(&E) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|(g, w)| f(g) * *w).sum()
    }

    pub fn integrate_matrix<F: FnMut(&E) -> CMatrix>(&self, rows: usize, cols: usize, mut f: F) -> CMatrix {
        let mut acc = CMatrix::zeros(rows, cols);
        for (g, w) in &self.nodes {
            acc += f(g).scale(*w);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum HaarStrategy {
    /// Exact rule for integrands of degree at most `degree`.
    Exact { degree: usize },
    /// Explicit uniform circle grid; rejected unless `points > 2 * bandwidth`.
    Grid { points: usize, bandwidth: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Integral {
    pub value: C64,
    /// Zero for exact rules, standard error for Monte Carlo.
    pub error_estimate: f64,
    pub nodes: usize,
}

pub fn haar_integrate<G, F>(group: &G, strategy: &HaarStrategy, mut f: F) -> Result<Integral>
where
    G: CompactGroup,
    F: FnMut(&G::Element) -> C64,
{
    let rule = match *strategy {
        HaarStrategy::Exact { degree } => group.quadrature(degree),
        HaarStrategy::Grid { points, bandwidth } => {
            if points <= 2 * bandwidth {
                return Err(Error::GridTooSmall { points, bandwidth });
            }
            group.uniform_grid(points)?
        }
        HaarStrategy::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidArgument("Monte Carlo needs at least 2 samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = C64::new(0.0, 0.0);
            let (mut sq_re, mut sq_im) = (0.0, 0.0);
            for _ in 0..samples {
                let g = group.sample_haar(&mut rng);
                let v = f(&g);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite);
                }
                sum += v;
                sq_re += v.re * v.re;
                sq_im += v.im * v.im;
            }
            let n = samples as f64;
            let mean = sum / n;
            let var_re = (sq_re - n * mean.re * mean.re) / (n - 1.0);
            let var_im = (sq_im - n * mean.im * mean.im) / (n - 1.0);
            return Ok(Integral {
                value: mean,
                error_estimate: ((var_re.max(0.0) + var_im.max(0.0)) / n).sqrt(),
                nodes: samples,
            });
        }
    };
    let mut acc = C64::new(0.0, 0.0);
    for (g, w) in &rule.nodes {
        let v = f(g);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite);
        }
        acc += v * *w;
    }
    Ok(Integral { value: acc, error_estimate: 0.0, nodes: rule.len() })
}

/// `∫ dg conj(χ^a(g)) χ^b(g)`, exact.
pub fn character_inner_product<G: CompactGroup>(group: &G, a: G::Label, b: G::Label) -> Result<C64> {
    group.validate_label(a)?;
    group.validate_label(b)?;
    let degree = group.irrep_degree(a) + group.irrep_degree(b);
    let rule = group.quadrature(degree);
    Ok(rule.integrate(|g| group.character(a, g).conj() * group.character(b, g)))
}

/// `(χ^a ∗ χ^b)(g) = ∫ dh χ^a(g h⁻¹) χ^b(h)`.
pub fn character_convolution<G: CompactGroup>(group: &G, a: G::Label, b: G::Label, g: &G::Element) -> Result<C64> {
    if !group.exact_integration() {
        return Err(Error::Unsupported(format!(
            "character convolution on {} needs an exact inner integral",
            group.name()
        )));
    }
    group.validate_label(a)?;
    group.validate_label(b)?;
    let rule = group.quadrature(group.irrep_degree(a) + group.irrep_degree(b));
    Ok(rule.integrate(|h| {
        let gh_inv = group.compose(g, &group.inverse(h));
        group.character(a, &gh_inv) * group.character(b, h)
    }))
}

/// Maximum over `probes` of `|(χ^a ∗ χ^b)(g) − δ_ab χ^a(g)/d_a|`.
pub fn check_character_convolution<G: CompactGroup>(
    group: &G,
    a: G::Label,
    b: G::Label,
    probes: &[G::Element],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in probes {
        let conv = character_convolution(group, a, b, g)?;
        let expected = if a == b {
            group.character(a, g) / group.irrep_dim(a) as f64
        } else {
            C64::new(0.0, 0.0)
        };
        worst = worst.max((conv - expected).norm());
    }
    Ok(worst)
}

/// Deterministic probe elements for certificates.
pub fn probe_elements<G: CompactGroup>(group: &G, count: usize, seed: u64) -> Vec<G::Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| group.sample_haar(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrates_to_one_on_every_group() {
        let one = |_: &_| C64::new(1.0, 0.0);
        let s3 = FiniteGroup::s3();
        let i = haar_integrate(&s3, &HaarStrategy::Exact { degree: 0 }, one).unwrap();
        assert!((i.value - 1.0).norm() < 1e-15 && i.error_estimate == 0.0);
        let i = haar_integrate(&Circle, &HaarStrategy::Exact { degree: 4 }, |_: &f64| C64::new(1.0, 0.0)).unwrap();
        assert!((i.value - 1.0).norm() < 1e-14);
        let i = haar_integrate(&Su2, &HaarStrategy::Exact { degree: 6 }, |_: &Su2Element| C64::new(1.0, 0.0)).unwrap();
        assert!((i.value - 1.0).norm() < 1e-14);
        let i = haar_integrate(&Su2, &HaarStrategy::MonteCarlo { samples: 100, seed: 3 }, |_: &Su2Element| {
            C64::new(1.0, 0.0)
        })
        .unwrap();
        assert!((i.value - 1.0).norm() < 1e-14 && i.error_estimate < 1e-12);
    }

    #[test]
    fn nonzero_fourier_mode_vanishes() {
        let f = |g: &f64| C64::from_polar(1.0, 3.0 * g);
        let i = haar_integrate(&Circle, &HaarStrategy::Grid { points: 7, bandwidth: 3 }, f).unwrap();
        assert!(i.value.norm() < 1e-14);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let f = |g: &f64| C64::from_polar(1.0, 3.0 * g);
        let err = haar_integrate(&Circle, &HaarStrategy::Grid { points: 6, bandwidth: 3 }, f).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { points: 6, bandwidth: 3 }));
    }

    #[test]
    fn explicit_grid_refused_off_the_circle() {
        let f = |_: &usize| C64::new(1.0, 0.0);
        let err = haar_integrate(&FiniteGroup::s3(), &HaarStrategy::Grid { points: 9, bandwidth: 1 }, f);
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }

    #[test]
    fn nan_is_propagated_as_failure() {
        let f = |_: &f64| C64::new(f64::NAN, 0.0);
        assert!(matches!(
            haar_integrate(&Circle, &HaarStrategy::Exact { degree: 1 }, f),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn convolution_refused_on_su2() {
        let e = Su2.identity();
        assert!(matches!(
            check_character_convolution(&Su2, Spin::new(1), Spin::new(1), &[e]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn circle_fourier_modes_are_orthonormal() {
        let v = character_inner_product(&Circle, 2, 2).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let v = character_inner_product(&Circle, 2, -2).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn circle_self_convolution_is_the_character() {
        let probes: Vec<f64> = (0..8).map(|i| 0.7 * i as f64).collect();
        assert!(check_character_convolution(&Circle, 1, 1, &probes).unwrap() < 1e-13);
        assert!(check_character_convolution(&Circle, 1, 2, &probes).unwrap() < 1e-13);
    }
}
