use rand::Rng;

use super::{CompactGroup, GroupKind, Quadrature, QuadratureKind};
use crate::linalg::{max_abs, CMatrix, C64};
use crate::{Error, Result};

const TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FiniteIrrep {
    pub name: String,
    pub dim: usize,
    /// One unitary matrix per group element, indexed like the table.
    pub matrices: Vec<CMatrix>,
    pub conjugate: usize,
}

/// A finite group given by its multiplication table together with a list
/// of (user-supplied or built-in) irreps. Elements are table indices;
/// irreps are labelled by their position in the irrep list.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    irreps: Vec<FiniteIrrep>,
}

impl FiniteGroup {
    /// Validates the table (closure, identity, inverses, associativity) and
    /// every irrep (unitarity and the homomorphism property). Conjugate irreps
    /// are matched by character.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        irreps: Vec<(String, Vec<CMatrix>)>,
    ) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!("multiplication table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&k| k >= n) {
            return Err(Error::InvalidGroup("table is not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {} has no inverse", elements[g])))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative on ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }

        let mut checked = Vec::with_capacity(irreps.len());
        for (label, matrices) in irreps {
            if matrices.len() != n {
                return Err(Error::InvalidGroup(format!("irrep {label} needs {n} matrices")));
            }
            let dim = matrices[0].nrows();
            if dim == 0 || matrices.iter().any(|m| m.shape() != (dim, dim)) {
                return Err(Error::InvalidGroup(format!("irrep {label} has inconsistent shapes")));
            }
            let eye = CMatrix::identity(dim, dim);
            if max_abs(&(&matrices[identity] - &eye)) > TOL {
                return Err(Error::InvalidGroup(format!("irrep {label} does not fix the identity")));
            }
            for (g, m) in matrices.iter().enumerate() {
                if max_abs(&(m.adjoint() * m - &eye)) > TOL {
                    return Err(Error::InvalidGroup(format!("irrep {label} not unitary at {}", elements[g])));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let lhs = &matrices[table[a][b]];
                    if max_abs(&(lhs - &matrices[a] * &matrices[b])) > TOL {
                        return Err(Error::InvalidGroup(format!(
                            "irrep {label} is not a homomorphism on ({}, {})",
                            elements[a], elements[b]
                        )));
                    }
                }
            }
            checked.push(FiniteIrrep { name: label, dim, matrices, conjugate: usize::MAX });
        }

        let characters: Vec<Vec<C64>> = checked
            .iter()
            .map(|irrep| irrep.matrices.iter().map(|m| m.trace()).collect())
            .collect();
        for a in 0..checked.len() {
            let conj = (0..checked.len()).find(|&b| {
                characters[a]
                    .iter()
                    .zip(&characters[b])
                    .all(|(x, y)| (x.conj() - y).norm() < 1e-8)
            });
            match conj {
                Some(b) => checked[a].conjugate = b,
                None => {
                    return Err(Error::InvalidGroup(format!(
                        "conjugate of irrep {} is not registered",
                        checked[a].name
                    )))
                }
            }
        }

        Ok(Self { name: name.into(), elements, table, identity, inverses, irreps: checked })
    }

    /// The symmetric group on three letters. Elements are the permutations
    /// of `(0, 1, 2)` in lexicographic order, composed as functions
    /// (`(a·b)(i) = a(b(i))`). Irreps: trivial, sign and the two-dimensional
    /// standard irrep realized on the orthogonal complement of `(1, 1, 1)`.
    pub fn s3() -> Self {
        let perms = s3_permutations();
        let n = perms.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let composed = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
                        perms.iter().position(|p| *p == composed).expect("S3 is closed")
                    })
                    .collect()
            })
            .collect();
        let elements = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        let complement = s3_standard_basis();
        let trivial = vec![CMatrix::identity(1, 1); n];
        let sign = perms
            .iter()
            .map(|p| CMatrix::from_element(1, 1, C64::new(permutation_sign(p), 0.0)))
            .collect();
        let standard = perms
            .iter()
            .map(|p| complement.adjoint() * permutation_matrix(p) * &complement)
            .collect();
        Self::new(
            "S3",
            elements,
            table,
            vec![("trivial".into(), trivial), ("sign".into(), sign), ("std".into(), standard)],
        )
        .expect("built-in S3 data is valid")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_name(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn irreps(&self) -> &[FiniteIrrep] {
        &self.irreps
    }

    pub fn irrep_index(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|i| i.name == name)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }
}

impl CompactGroup for FiniteGroup {
    type Element = usize;
    type Label = usize;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn kind(&self) -> GroupKind {
        GroupKind::Finite
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn compose(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn inverse(&self, a: &usize) -> usize {
        self.inverses[*a]
    }

    fn validate_label(&self, label: usize) -> Result<()> {
        if label < self.irreps.len() {
            Ok(())
        } else {
            Err(Error::UnknownIrrep(format!("{label} on {}", self.name)))
        }
    }

    fn trivial_label(&self) -> usize {
        self.irreps
            .iter()
            .position(|irrep| irrep.dim == 1 && irrep.matrices.iter().all(|m| (m[(0, 0)] - 1.0).norm() < 1e-12))
            .unwrap_or(0)
    }

    fn irrep_dim(&self, label: usize) -> usize {
        self.irreps[label].dim
    }

    fn conjugate(&self, label: usize) -> usize {
        self.irreps[label].conjugate
    }

    fn irrep_degree(&self, _label: usize) -> usize {
        0
    }

    fn irrep_matrix(&self, label: usize, g: &usize) -> CMatrix {
        self.irreps[label].matrices[*g].clone()
    }

    fn quadrature(&self, _degree: usize) -> Quadrature<usize> {
        let w = 1.0 / self.order() as f64;
        Quadrature { kind: QuadratureKind::ExactSum, nodes: (0..self.order()).map(|g| (g, w)).collect() }
    }

    fn sample_haar<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.order())
    }
}

/// Permutations of `(0, 1, 2)` in lexicographic order.
pub fn s3_permutations() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// `P e_i = e_{p(i)}`.
pub fn permutation_matrix(p: &[usize; 3]) -> CMatrix {
    let mut m = CMatrix::zeros(3, 3);
    for (i, &pi) in p.iter().enumerate() {
        m[(pi, i)] = C64::new(1.0, 0.0);
    }
    m
}

fn permutation_sign(p: &[usize; 3]) -> f64 {
    let mut inversions = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Orthonormal basis `(1,−1,0)/√2, (1,1,−2)/√6` of the complement of `(1,1,1)`.
pub fn s3_standard_basis() -> CMatrix {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let b = 1.0 / 6f64.sqrt();
    CMatrix::from_row_slice(
        3,
        2,
        &[C64::new(a, 0.0), C64::new(b, 0.0), C64::new(-a, 0.0), C64::new(b, 0.0), C64::new(0.0, 0.0), C64::new(-2.0 * b, 0.0)],
    )
}
