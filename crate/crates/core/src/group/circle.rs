use std::f64::consts::TAU;

use rand::Rng;

use super::{CompactGroup, GroupKind, Quadrature, QuadratureKind};
use crate::linalg::{CMatrix, C64};
use crate::Result;

/// `U(1) ≅ [0, 2π)` with addition mod 2π. Irreps are labelled by their
/// integer charge `α`, `T_g = e^{iαg}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Circle;

impl CompactGroup for Circle {
    type Element = f64;
    type Label = i64;

    fn name(&self) -> String {
        "U(1)".into()
    }

    fn kind(&self) -> GroupKind {
        GroupKind::Circle
    }

    fn identity(&self) -> f64 {
        0.0
    }

    fn compose(&self, a: &f64, b: &f64) -> f64 {
        (a + b).rem_euclid(TAU)
    }

    fn inverse(&self, a: &f64) -> f64 {
        (-a).rem_euclid(TAU)
    }

    fn validate_label(&self, _label: i64) -> Result<()> {
        Ok(())
    }

    fn trivial_label(&self) -> i64 {
        0
    }

    fn irrep_dim(&self, _label: i64) -> usize {
        1
    }

    fn conjugate(&self, label: i64) -> i64 {
        -label
    }

    fn irrep_degree(&self, label: i64) -> usize {
        label.unsigned_abs() as usize
    }

    fn irrep_matrix(&self, label: i64, g: &f64) -> CMatrix {
        CMatrix::from_element(1, 1, self.character(label, g))
    }

    fn character(&self, label: i64, g: &f64) -> C64 {
        C64::from_polar(1.0, label as f64 * g)
    }

    /// `2·degree + 3` uniform points: exact for trigonometric polynomials of
    /// bandwidth `degree`.
    fn quadrature(&self, degree: usize) -> Quadrature<f64> {
        grid(2 * degree + 3)
    }

    fn uniform_grid(&self, points: usize) -> Result<Quadrature<f64>> {
        Ok(grid(points))
    }

    fn sample_haar<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(0.0..TAU)
    }
}

fn grid(points: usize) -> Quadrature<f64> {
    let w = 1.0 / points as f64;
    Quadrature {
        kind: QuadratureKind::UniformGrid,
        nodes: (0..points).map(|i| (TAU * i as f64 / points as f64, w)).collect(),
    }
}
