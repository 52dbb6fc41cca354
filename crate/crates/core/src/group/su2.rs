use std::fmt;

use nalgebra::Matrix2;
use rand::Rng;
use rand_distr::StandardNormal;

use super::gauss::gauss_legendre_unit;
use super::{CompactGroup, GroupKind, Quadrature, QuadratureKind};
use crate::linalg::{CMatrix, C64};
use crate::Result;

/// Spin label stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin(u32);

impl Spin {
    pub const fn new(twice_j: u32) -> Self {
        Self(twice_j)
    }

    pub fn twice_j(self) -> u32 {
        self.0
    }

    pub fn j(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `[[a, −b̄], [b, ā]]` with `|a|² + |b|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Element {
    pub a: C64,
    pub b: C64,
}

impl Su2Element {
    pub fn matrix(&self) -> Matrix2<C64> {
        Matrix2::new(self.a, -self.b.conj(), self.b, self.a.conj())
    }

    fn from_matrix(m: &Matrix2<C64>) -> Self {
        let (a, b) = (m[(0, 0)], m[(1, 0)]);
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        Self { a: a / norm, b: b / norm }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Su2;

impl CompactGroup for Su2 {
    type Element = Su2Element;
    type Label = Spin;

    fn name(&self) -> String {
        "SU(2)".into()
    }

    fn kind(&self) -> GroupKind {
        GroupKind::Su2
    }

    fn identity(&self) -> Su2Element {
        Su2Element { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0) }
    }

    fn compose(&self, x: &Su2Element, y: &Su2Element) -> Su2Element {
        Su2Element::from_matrix(&(x.matrix() * y.matrix()))
    }

    fn inverse(&self, x: &Su2Element) -> Su2Element {
        Su2Element { a: x.a.conj(), b: -x.b }
    }

    fn validate_label(&self, _label: Spin) -> Result<()> {
        Ok(())
    }

    fn trivial_label(&self) -> Spin {
        Spin(0)
    }

    fn irrep_dim(&self, label: Spin) -> usize {
        label.dim()
    }

    /// Spin irreps are self-conjugate up to equivalence.
    fn conjugate(&self, label: Spin) -> Spin {
        label
    }

    fn irrep_degree(&self, label: Spin) -> usize {
        label.0 as usize
    }

    fn irrep_matrix(&self, label: Spin, g: &Su2Element) -> CMatrix {
        wigner_d(label.0 as usize, &g.matrix())
    }

    /// Product rule in the coordinates `a = √u e^{iξ₁}`, `b = √(1−u) e^{iξ₂}`,
    /// under which Haar measure is uniform in `(u, ξ₁, ξ₂)`. A monomial of
    /// total degree `D` in `a, ā, b, b̄` has phase frequencies `≤ D`, killed
    /// exactly by `D + 1` grid points, and surviving `u`-polynomials of degree
    /// `≤ D/2`, integrated exactly by `⌊D/4⌋ + 1` Gauss-Legendre nodes.
    fn quadrature(&self, degree: usize) -> Quadrature<Su2Element> {
        let phases = degree + 1;
        let radial = gauss_legendre_unit(degree / 4 + 1);
        let step = std::f64::consts::TAU / phases as f64;
        let mut nodes = Vec::with_capacity(radial.len() * phases * phases);
        for &(u, w) in &radial {
            let (ra, rb) = (u.sqrt(), (1.0 - u).sqrt());
            for i in 0..phases {
                for k in 0..phases {
                    let el = Su2Element {
                        a: C64::from_polar(ra, step * i as f64),
                        b: C64::from_polar(rb, step * k as f64),
                    };
                    nodes.push((el, w / (phases * phases) as f64));
                }
            }
        }
        Quadrature { kind: QuadratureKind::Cubature, nodes }
    }

    /// Convolution checks are reserved for the finite and circle oracles.
    fn exact_integration(&self) -> bool {
        false
    }

    /// QR of a complex Gaussian 2×2 matrix with `R` made positive-diagonal,
    /// then rescaled to unit determinant.
    fn sample_haar<R: Rng + ?Sized>(&self, rng: &mut R) -> Su2Element {
        let mut gauss = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let z = Matrix2::new(gauss(), gauss(), gauss(), gauss());
        let qr = z.qr();
        let (q, r) = (qr.q(), qr.r());
        let mut q = q;
        for k in 0..2 {
            let d = r[(k, k)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
            for row in 0..2 {
                q[(row, k)] *= phase;
            }
        }
        let det = q.determinant();
        let root = det.sqrt();
        Su2Element::from_matrix(&(q / root))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Spin-`j` matrix of `u` (`twice_j = 2j`) on the basis `m = j, j−1, …, −j`,
/// realized on homogeneous polynomials `x^{j+m} y^{j−m} / √((j+m)!(j−m)!)`
/// with `(x, y) ↦ (x, y)·u`. For `j = 1/2` this is `u` itself.
pub fn wigner_d(twice_j: usize, u: &Matrix2<C64>) -> CMatrix {
    let n = twice_j;
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let mut d = CMatrix::zeros(n + 1, n + 1);
    // Column index c ↔ p = j+m = n − c.
    for col in 0..=n {
        let p = n - col;
        let q = n - p;
        let norm_in = (factorial(p) * factorial(q)).sqrt();
        for k in 0..=p {
            for l in 0..=q {
                let x_power = k + l;
                let coeff = binomial(p, k)
                    * binomial(q, l)
                    * u00.powu(k as u32)
                    * u10.powu((p - k) as u32)
                    * u01.powu(l as u32)
                    * u11.powu((q - l) as u32);
                let row = n - x_power;
                let norm_out = (factorial(x_power) * factorial(n - x_power)).sqrt();
                d[(row, col)] += coeff * norm_out / norm_in;
            }
        }
    }
    d
}
