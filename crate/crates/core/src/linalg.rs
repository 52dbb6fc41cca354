//! Small dense complex linear-algebra helpers shared across the crate.
//!
//! Bipartite vectors on `R ⊗ S` use the row-major layout `ψ[r·d_S + s]`,
//! consistent with `kron(A, B)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Reshape a bipartite vector into the `d_R × d_S` coefficient matrix.
pub fn as_bipartite(psi: &CVector, d_r: usize, d_s: usize) -> CMatrix {
    assert_eq!(psi.len(), d_r * d_s, "bipartite layout mismatch");
    CMatrix::from_fn(d_r, d_s, |r, s| psi[r * d_s + s])
}

pub fn from_bipartite(m: &CMatrix) -> CVector {
    let (d_r, d_s) = m.shape();
    CVector::from_fn(d_r * d_s, |i, _| m[(i / d_s, i % d_s)])
}

/// `(A ⊗ B) ψ` without forming the Kronecker product.
pub fn apply_product(a: &CMatrix, b: &CMatrix, psi: &CVector) -> CVector {
    let m = as_bipartite(psi, a.ncols(), b.ncols());
    from_bipartite(&(a * m * b.transpose()))
}

/// `Tr_R |ψ⟩⟨ψ|` by index contraction.
pub fn partial_trace_r(psi: &CVector, d_r: usize, d_s: usize) -> CMatrix {
    let m = as_bipartite(psi, d_r, d_s);
    // ρ_S[s, s'] = Σ_r ψ[r, s] conj(ψ[r, s'])
    m.transpose() * m.map(|z| z.conj())
}

/// `Tr_R ρ_RS` for a general operator on `R ⊗ S`.
pub fn partial_trace_r_op(rho: &CMatrix, d_r: usize, d_s: usize) -> CMatrix {
    CMatrix::from_fn(d_s, d_s, |s, t| {
        (0..d_r).map(|r| rho[(r * d_s + s, r * d_s + t)]).sum()
    })
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    let (values, _) = hermitian_eigen(m);
    values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Multiply by a global phase so the largest-magnitude entry is real positive.
pub fn fix_phase(v: &mut CVector) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(ONE);
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Flip operator `F |i⟩|j⟩ = |j⟩|i⟩` on `C^d ⊗ C^d`.
pub fn flip_operator(d: usize) -> CMatrix {
    let mut f = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(j * d + i, i * d + j)] = ONE;
        }
    }
    f
}

// Eigenvalues below this are rounding noise; their square roots would
// otherwise contribute ~1e-8 to fidelities of rank-deficient states.
fn spectral_floor(values: &[f64]) -> f64 {
    64.0 * f64::EPSILON * values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE)
}

fn clamp_root(v: f64, floor: f64) -> f64 {
    if v <= floor {
        0.0
    } else {
        v.sqrt()
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let floor = spectral_floor(&values);
    let roots = CVector::from_iterator(values.len(), values.iter().map(|&v| c(clamp_root(v, floor), 0.0)));
    &vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint()
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let root = psd_sqrt(rho);
    let inner = &root * sigma * &root;
    let (values, _) = hermitian_eigen(&inner);
    let floor = spectral_floor(&values);
    let t: f64 = values.iter().map(|&v| clamp_root(v, floor)).sum();
    t * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_matches_apply_product() {
        let a = CMatrix::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64 - 0.5));
        let b = CMatrix::from_fn(3, 3, |i, j| c((i * j) as f64, 1.0));
        let psi = CVector::from_fn(6, |i, _| c(i as f64, -(i as f64) / 3.0));
        let direct = kron(&a, &b) * &psi;
        let fast = apply_product(&a, &b, &psi);
        assert!((direct - fast).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_vector_matches_operator_form() {
        let psi = CVector::from_fn(6, |i, _| c((i as f64).sin(), (i as f64).cos()));
        let rho = &psi * psi.adjoint();
        let a = partial_trace_r(&psi, 2, 3);
        let b = partial_trace_r_op(&rho, 2, 3);
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap() {
        let a = CVector::from_vec(vec![c(1.0, 0.0), ZERO]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = CVector::from_vec(vec![c(s, 0.0), c(0.0, s)]);
        let f = fidelity(&(&a * a.adjoint()), &(&b * b.adjoint()));
        assert!((f - 0.5).abs() < 1e-12);
    }
}
