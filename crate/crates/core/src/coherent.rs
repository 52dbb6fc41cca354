//! Coherent-state systems `|g⟩ = U_g|e⟩` on the reference frame and the
//! conditional states they induce on `S`.

use std::fmt;
use std::sync::Arc;

use crate::group::CompactGroup;
use crate::linalg::{hermitian_norm, CMatrix, CVector, C64};
use crate::representation::{PhysicalState, Representation};
use crate::{Error, Result};

/// Resolution-of-identity tolerance applied before any conditional state is extracted.
pub const DEFAULT_RESOLUTION_TOL: f64 = 1e-8;

/// `|e⟩ = Σ_α Σ_{i ≤ n_α} √(d_α/d_R) |α, i, m = i⟩`, mapped to the working basis.
///
/// Schur orthogonality makes `∫ dg |g⟩⟨g| = 1/d_R` exactly; requires
/// `n_α ≤ d_α` for every block.
pub fn canonical_seed<G: CompactGroup>(rep: &Representation<G>) -> Result<CVector> {
    let group = rep.group();
    let d_r = rep.dim() as f64;
    let mut seed = CVector::zeros(rep.dim());
    for (index, block) in rep.blocks().iter().enumerate() {
        let d = group.irrep_dim(block.label);
        if block.multiplicity > d {
            return Err(Error::MultiplicityExceedsDimension {
                label: block.label.to_string(),
                multiplicity: block.multiplicity,
                dim: d,
            });
        }
        let offset = rep.block_offset(index);
        let weight = (d as f64 / d_r).sqrt();
        for i in 0..block.multiplicity {
            seed[offset + i * d + i] = C64::new(weight, 0.0);
        }
    }
    Ok(rep.to_working(&seed))
}

/// Spectral norm of `∫ dg U_g|e⟩⟨e|U_g† − 1/d_R`, by exact quadrature.
pub fn check_resolution_of_identity<G: CompactGroup>(rep: &Representation<G>, seed: &CVector) -> f64 {
    let d = rep.dim();
    let rule = rep.group().quadrature(2 * rep.degree());
    let frame = rule.integrate_matrix(d, d, |g| {
        let v = rep.matrix(g) * seed;
        &v * v.adjoint()
    });
    let target = CMatrix::identity(d, d).scale(1.0 / d as f64);
    hermitian_norm(&(frame - target))
}

pub struct CoherentStateSystem<G: CompactGroup> {
    rep: Arc<Representation<G>>,
    seed: CVector,
    resolution_residual: f64,
}

impl<G: CompactGroup> fmt::Debug for CoherentStateSystem<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoherentStateSystem")
            .field("d_r", &self.rep.dim())
            .field("seed", &self.seed.as_slice())
            .field("resolution_residual", &self.resolution_residual)
            .finish()
    }
}

impl<G: CompactGroup> Clone for CoherentStateSystem<G> {
    fn clone(&self) -> Self {
        Self { rep: self.rep.clone(), seed: self.seed.clone(), resolution_residual: self.resolution_residual }
    }
}

impl<G: CompactGroup> CoherentStateSystem<G> {
    pub fn new(rep: Arc<Representation<G>>, seed: CVector) -> Result<Self> {
        Self::with_tolerance(rep, seed, DEFAULT_RESOLUTION_TOL)
    }

    /// Certifies a user-supplied seed: unit norm to `1e-12` and resolution
    /// residual within `tol`.
    pub fn with_tolerance(rep: Arc<Representation<G>>, seed: CVector, tol: f64) -> Result<Self> {
        if seed.len() != rep.dim() {
            return Err(Error::DimensionMismatch { expected: rep.dim(), got: seed.len() });
        }
        let norm = seed.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedSeed(norm));
        }
        let resolution_residual = check_resolution_of_identity(&rep, &seed);
        if !(resolution_residual <= tol) {
            return Err(Error::ResolutionOfIdentity { residual: resolution_residual, tolerance: tol });
        }
        Ok(Self { rep, seed, resolution_residual })
    }

    pub fn canonical(rep: Arc<Representation<G>>) -> Result<Self> {
        let seed = canonical_seed(&rep)?;
        Self::new(rep, seed)
    }

    pub fn rep(&self) -> &Arc<Representation<G>> {
        &self.rep
    }

    pub fn seed(&self) -> &CVector {
        &self.seed
    }

    pub fn d_r(&self) -> usize {
        self.rep.dim()
    }

    pub fn resolution_residual(&self) -> f64 {
        self.resolution_residual
    }

    /// `|g⟩ = U_g|e⟩`.
    pub fn coherent_state(&self, g: &G::Element) -> CVector {
        self.rep.matrix(g) * &self.seed
    }

    /// `√d_R (⟨g| ⊗ 1)|ψ⟩`.
    pub fn conditional_state(&self, psi: &PhysicalState, g: &G::Element) -> Result<ConditionalState<G::Element>> {
        if psi.d_r() != self.d_r() {
            return Err(Error::DimensionMismatch { expected: self.d_r(), got: psi.d_r() });
        }
        let ket = self.coherent_state(g);
        let amplitudes = self.project(psi.amplitudes(), &ket, psi.d_s());
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::Certification(format!("conditional state has norm {norm}; reduction map is not isometric")));
        }
        Ok(ConditionalState { amplitudes, element: g.clone() })
    }

    /// `√d_R (⟨ket| ⊗ 1) v` for any bipartite vector, without the norm check.
    pub fn project(&self, v: &CVector, ket: &CVector, d_s: usize) -> CVector {
        let scale = (self.d_r() as f64).sqrt();
        let coefficients = crate::linalg::as_bipartite(v, self.d_r(), d_s);
        (coefficients.transpose() * ket.map(|z| z.conj())).scale(scale)
    }

    /// `∫ dg |ψ(g)⟩⟨ψ(g)|` for a physical state; equals `Tr_R |ψ⟩⟨ψ|`
    /// without forming the operator on `R ⊗ S`.
    pub fn reduced_state_via_frame(&self, psi: &PhysicalState) -> CMatrix {
        let d_s = psi.d_s();
        let rule = self.rep.group().quadrature(2 * self.rep.degree());
        rule.integrate_matrix(d_s, d_s, |g| {
            let phi = self.project(psi.amplitudes(), &self.coherent_state(g), d_s);
            &phi * phi.adjoint()
        })
    }

    /// `d_R ∫ dg (⟨g| ⊗ 1) ρ_RS (|g⟩ ⊗ 1)`; equals `Tr_R ρ_RS` for any valid seed.
    pub fn partial_trace(&self, rho_rs: &CMatrix, d_s: usize) -> CMatrix {
        let d_r = self.d_r();
        let rule = self.rep.group().quadrature(2 * self.rep.degree());
        rule.integrate_matrix(d_s, d_s, |g| {
            let ket = self.coherent_state(g);
            CMatrix::from_fn(d_s, d_s, |s, t| {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..d_r {
                    for q in 0..d_r {
                        acc += ket[r].conj() * rho_rs[(r * d_s + s, q * d_s + t)] * ket[q];
                    }
                }
                acc
            })
            .scale(d_r as f64)
        })
    }
}

/// The state of `S` conditioned on the frame pointing at `element`.
#[derive(Clone, Debug)]
pub struct ConditionalState<E> {
    pub amplitudes: CVector,
    pub element: E,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Circle, FiniteGroup};
    use crate::linalg::{partial_trace_r, max_abs};
    use crate::representation::{Block, PhysicalSpace};
    use crate::sampling::rng_for;

    fn clock(k: i64) -> (Arc<Representation<Circle>>, Arc<Representation<Circle>>) {
        let g = Arc::new(Circle);
        let r = (-k..=k).map(|a| Block { label: a, multiplicity: 1 }).collect();
        let s = (0..(k + 1) / 2).map(|n| Block { label: -(2 * n + 1), multiplicity: 1 }).collect();
        (Arc::new(Representation::new(g.clone(), r).unwrap()), Arc::new(Representation::new(g, s).unwrap()))
    }

    fn s3_fundamental() -> Arc<Representation<FiniteGroup>> {
        let group = Arc::new(FiniteGroup::s3());
        let blocks = vec![Block { label: 0, multiplicity: 1 }, Block { label: 2, multiplicity: 1 }];
        let plus = 1.0 / 3f64.sqrt();
        let std = crate::group::s3_standard_basis();
        let w = CMatrix::from_fn(3, 3, |r, c| if c == 0 { C64::new(plus, 0.0) } else { std[(r, c - 1)] });
        Arc::new(Representation::new(group, blocks).unwrap().with_basis(w).unwrap())
    }

    #[test]
    fn clock_canonical_seed_is_uniform() {
        let (r, _) = clock(3);
        let seed = canonical_seed(&r).unwrap();
        for z in seed.iter() {
            assert!((z - C64::new(1.0 / 7f64.sqrt(), 0.0)).norm() < 1e-15);
        }
        assert!(check_resolution_of_identity(&r, &seed) < 1e-12);
    }

    #[test]
    fn s3_canonical_seed_has_a_third_on_plus() {
        let rep = s3_fundamental();
        let seed = canonical_seed(&rep).unwrap();
        let plus = CVector::from_element(3, C64::new(1.0 / 3f64.sqrt(), 0.0));
        assert!((plus.dotc(&seed).norm_sqr() - 1.0 / 3.0).abs() < 1e-14);
        assert!(check_resolution_of_identity(&rep, &seed) < 1e-12);
    }

    #[test]
    fn basis_vector_seeds_on_s3() {
        // Oracle: explicit 6-term sums. In the permutation basis P_g|0⟩ visits
        // every basis vector twice, so (1/6) Σ_g P_g|0⟩⟨0|P_g† = 1/3 exactly.
        let rep = s3_fundamental();
        let e0 = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        let mut frame = CMatrix::zeros(3, 3);
        for p in crate::group::s3_permutations() {
            let v = crate::group::permutation_matrix(&p) * &e0;
            frame += &v * v.adjoint();
        }
        frame /= C64::new(6.0, 0.0);
        assert!(max_abs(&(frame - CMatrix::identity(3, 3).scale(1.0 / 3.0))) < 1e-15);
        assert!(check_resolution_of_identity(&rep, &e0) < 1e-12);

        // In the block basis |α, i, m⟩, |0⟩ is the trivial-irrep vector |+⟩:
        // the frame is |+⟩⟨+| and the residual is ‖|+⟩⟨+| − 1/3‖ = 2/3.
        let plus = rep.to_working(&e0);
        let residual = check_resolution_of_identity(&rep, &plus);
        assert!((residual - 2.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            CoherentStateSystem::new(rep, plus),
            Err(Error::ResolutionOfIdentity { .. })
        ));
    }

    #[test]
    fn trivial_rep_seed() {
        let g = Arc::new(Circle);
        let t = Arc::new(Representation::new(g, vec![Block { label: 0, multiplicity: 1 }]).unwrap());
        let seed = canonical_seed(&t).unwrap();
        assert_eq!(seed.len(), 1);
        assert!((seed[0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn multiplicity_above_dimension_is_refused() {
        let g = Arc::new(Circle);
        let r = Arc::new(Representation::new(g, vec![Block { label: 1, multiplicity: 2 }]).unwrap());
        assert!(matches!(canonical_seed(&r), Err(Error::MultiplicityExceedsDimension { .. })));
    }

    #[test]
    fn unnormalized_seed_is_refused() {
        let (r, _) = clock(1);
        let seed = CVector::from_element(3, C64::new(1.0, 0.0));
        assert!(matches!(CoherentStateSystem::new(r, seed), Err(Error::UnnormalizedSeed(_))));
    }

    #[test]
    fn clock_coherent_state_at_pi() {
        let (r, _) = clock(3);
        let css = CoherentStateSystem::canonical(r).unwrap();
        let v = css.coherent_state(&std::f64::consts::PI);
        for (i, z) in v.iter().enumerate() {
            let alpha = i as f64 - 3.0;
            let expected = C64::from_polar(1.0 / 7f64.sqrt(), alpha * std::f64::consts::PI);
            assert!((z - expected).norm() < 1e-14);
        }
        assert!((css.coherent_state(&0.0) - css.seed()).norm() < 1e-15);
    }

    #[test]
    fn clock_conditional_state_example() {
        let (r, s) = clock(3);
        let css = CoherentStateSystem::canonical(r.clone()).unwrap();
        let space = PhysicalSpace::build(r, s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = space.state_from_coefficients(&[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        let phi = css.conditional_state(&psi, &0.0).unwrap();
        assert!((phi.amplitudes[0] - h).norm() < 1e-14);
        assert!((phi.amplitudes[1] - h).norm() < 1e-14);
    }

    #[test]
    fn isometry_covariance_and_partial_trace_oracle() {
        let (r, s) = clock(5);
        let css = CoherentStateSystem::canonical(r.clone()).unwrap();
        let space = PhysicalSpace::build(r, s.clone()).unwrap();
        for i in 0..10 {
            let psi = space.sample(&mut rng_for(11, 2 * i));
            let chi = space.sample(&mut rng_for(11, 2 * i + 1));
            let a = css.conditional_state(&psi, &0.0).unwrap();
            let b = css.conditional_state(&chi, &0.0).unwrap();
            assert!((a.amplitudes.dotc(&b.amplitudes) - psi.inner(&chi)).norm() < 1e-10);
            let g = 0.37 * i as f64;
            let at_g = css.conditional_state(&psi, &g).unwrap();
            assert!((at_g.amplitudes - s.matrix(&g) * &a.amplitudes).norm() < 1e-10);
            let rho = psi.amplitudes() * psi.amplitudes().adjoint();
            let oracle = css.partial_trace(&rho, psi.d_s());
            assert!(max_abs(&(oracle - partial_trace_r(psi.amplitudes(), psi.d_r(), psi.d_s()))) < 1e-10);
        }
    }
}
