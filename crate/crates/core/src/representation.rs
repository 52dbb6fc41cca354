//! Unitary representations on `R` and `S`, multiplicity profiles and the
//! invariant ("physical") subspace of `R ⊗ S`.
//!
//! A [`Representation`] is a direct sum of irreps with multiplicities,
//! stored in the block basis `|α, i, m⟩` (irrep, copy, internal index) in
//! the order the blocks were declared. An optional unitary change of basis
//! maps the block basis into a different working basis; the built-in `S3`
//! fundamental representation uses it to act by permutation matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::group::{probe_elements, CompactGroup, Quadrature};
use crate::linalg::{apply_product, as_bipartite, fix_phase, from_bipartite, hermitian_eigen, kron, max_abs, CMatrix, CVector, C64};
use crate::sampling::complex_gaussian;
use crate::{Error, Result};

const PROBE_SEED: u64 = 0x5eed_0f_9a0b;
const PROBE_COUNT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block<L> {
    pub label: L,
    pub multiplicity: usize,
}

pub struct Representation<G: CompactGroup> {
    group: Arc<G>,
    blocks: Vec<Block<G::Label>>,
    basis: Option<CMatrix>,
    dim: usize,
}

impl<G: CompactGroup> fmt::Debug for Representation<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("group", &self.group.name())
            .field("blocks", &self.blocks)
            .field("dim", &self.dim)
            .field("basis_change", &self.basis.is_some())
            .finish()
    }
}

impl<G: CompactGroup> Representation<G> {
    pub fn new(group: Arc<G>, blocks: Vec<Block<G::Label>>) -> Result<Self> {
        let mut seen = Vec::new();
        for block in &blocks {
            group.validate_label(block.label)?;
            if seen.contains(&block.label) {
                return Err(Error::InvalidRepresentation(format!("irrep {} listed twice", block.label)));
            }
            seen.push(block.label);
        }
        let blocks: Vec<_> = blocks.into_iter().filter(|b| b.multiplicity > 0).collect();
        let dim = blocks.iter().map(|b| b.multiplicity * group.irrep_dim(b.label)).sum();
        if dim == 0 {
            return Err(Error::InvalidRepresentation("zero-dimensional representation".into()));
        }
        Ok(Self { group, blocks, basis: None, dim })
    }

    /// Columns of `basis` are the block-basis vectors written in the working
    /// basis, so `U_g = W (⊕ T_g) W†`.
    pub fn with_basis(mut self, basis: CMatrix) -> Result<Self> {
        if basis.shape() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, got: basis.nrows() });
        }
        if max_abs(&(basis.adjoint() * &basis - CMatrix::identity(self.dim, self.dim))) > 1e-10 {
            return Err(Error::InvalidRepresentation("basis change is not unitary".into()));
        }
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn group(&self) -> &Arc<G> {
        &self.group
    }

    pub fn blocks(&self) -> &[Block<G::Label>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_change(&self) -> Option<&CMatrix> {
        self.basis.as_ref()
    }

    /// Largest irrep degree present; bounds the degree of matrix entries.
    pub fn degree(&self) -> usize {
        self.blocks.iter().map(|b| self.group.irrep_degree(b.label)).max().unwrap_or(0)
    }

    /// Offset of block `index` in the block basis.
    pub fn block_offset(&self, index: usize) -> usize {
        self.blocks[..index]
            .iter()
            .map(|b| b.multiplicity * self.group.irrep_dim(b.label))
            .sum()
    }

    pub fn declared_multiplicity(&self, label: G::Label) -> usize {
        self.blocks.iter().filter(|b| b.label == label).map(|b| b.multiplicity).sum()
    }

    pub fn block_matrix(&self, g: &G::Element) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        let mut offset = 0;
        for block in &self.blocks {
            let t = self.group.irrep_matrix(block.label, g);
            let d = t.nrows();
            for _ in 0..block.multiplicity {
                m.view_mut((offset, offset), (d, d)).copy_from(&t);
                offset += d;
            }
        }
        m
    }

    pub fn matrix(&self, g: &G::Element) -> CMatrix {
        let m = self.block_matrix(g);
        match &self.basis {
            Some(w) => w * m * w.adjoint(),
            None => m,
        }
    }

    pub fn character(&self, g: &G::Element) -> C64 {
        self.blocks
            .iter()
            .map(|b| self.group.character(b.label, g) * b.multiplicity as f64)
            .sum()
    }

    /// Map a block-basis vector into the working basis.
    pub fn to_working(&self, v: &CVector) -> CVector {
        match &self.basis {
            Some(w) => w * v,
            None => v.clone(),
        }
    }

    /// Maximum deviation from the homomorphism and unitarity properties on
    /// the given probe elements.
    pub fn homomorphism_residual(&self, probes: &[G::Element]) -> f64 {
        let eye = CMatrix::identity(self.dim, self.dim);
        let mut worst = max_abs(&(self.matrix(&self.group.identity()) - &eye));
        for g in probes {
            let ug = self.matrix(g);
            worst = worst.max(max_abs(&(ug.adjoint() * &ug - &eye)));
            for h in probes {
                let gh = self.group.compose(g, h);
                worst = worst.max(max_abs(&(self.matrix(&gh) - &ug * self.matrix(h))));
            }
        }
        worst
    }

    /// Checks that character extraction recovers every declared multiplicity.
    pub fn verify_multiplicities(&self, candidates: &[G::Label]) -> Result<()> {
        for &label in candidates {
            let found = multiplicity(self, label)?;
            let declared = self.declared_multiplicity(label);
            if found != declared {
                return Err(Error::InvalidRepresentation(format!(
                    "irrep {label}: declared multiplicity {declared}, character gives {found}"
                )));
            }
        }
        Ok(())
    }
}

/// `round(⟨χ^α, χ^U⟩)`, refusing inner products more than `1e-8` from an integer.
pub fn multiplicity<G: CompactGroup>(rep: &Representation<G>, label: G::Label) -> Result<usize> {
    let group = rep.group();
    group.validate_label(label)?;
    let rule = group.quadrature(group.irrep_degree(label) + rep.degree());
    let value = rule.integrate(|g| group.character(label, g).conj() * rep.character(g));
    let rounded = value.re.round();
    if (value - rounded).norm() > 1e-8 || rounded < 0.0 {
        return Err(Error::NonIntegerMultiplicity { label: label.to_string(), value: value.re });
    }
    Ok(rounded as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileEntry<L> {
    pub label: L,
    pub dim: usize,
    /// Multiplicity of `α` in `U`.
    pub n_u: usize,
    /// Multiplicity of the conjugate `ᾱ` in `V`.
    pub n_v: usize,
}

/// `α ↦ (n_α^U, n_ᾱ^V)` together with `d_R`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityProfile<L> {
    pub d_r: usize,
    pub entries: Vec<ProfileEntry<L>>,
}

impl<L: Copy + Ord> MultiplicityProfile<L> {
    pub fn new(d_r: usize, entries: Vec<ProfileEntry<L>>) -> Self {
        Self { d_r, entries }
    }

    pub fn from_reps<G: CompactGroup<Label = L>>(u: &Representation<G>, v: &Representation<G>) -> Self {
        let group = u.group();
        let entries = u
            .blocks()
            .iter()
            .map(|b| ProfileEntry {
                label: b.label,
                dim: group.irrep_dim(b.label),
                n_u: b.multiplicity,
                n_v: v.declared_multiplicity(group.conjugate(b.label)),
            })
            .collect();
        Self { d_r: u.dim(), entries }
    }

    /// `Σ_α n_α^U n_ᾱ^V` (may be zero).
    pub fn d_phys(&self) -> usize {
        self.entries.iter().map(|e| e.n_u * e.n_v).sum()
    }

    pub fn as_map(&self) -> BTreeMap<L, (usize, usize)> {
        self.entries.iter().map(|e| (e.label, (e.n_u, e.n_v))).collect()
    }
}

/// `Σ_α n_α^U n_ᾱ^V`, refusing an empty physical space.
pub fn physical_dimension<L: Copy + Ord>(profile: &MultiplicityProfile<L>) -> Result<usize> {
    match profile.d_phys() {
        0 => Err(Error::EmptyPhysicalSpace),
        d => Ok(d),
    }
}

/// Dense `Π_phys = ∫ dg U_g ⊗ V_g` with its self-consistency residuals.
#[derive(Clone, Debug)]
pub struct PhysicalProjector {
    pub matrix: CMatrix,
    pub trace: f64,
    /// Zero for exact rules, standard error of the trace for Monte Carlo.
    pub trace_error: f64,
    pub idempotence_residual: f64,
    pub hermiticity_residual: f64,
    pub nodes: usize,
}

impl PhysicalProjector {
    fn from_matrix(matrix: CMatrix, trace_error: f64, nodes: usize) -> Self {
        let trace = matrix.trace().re;
        let idempotence_residual = max_abs(&(&matrix * &matrix - &matrix));
        let hermiticity_residual = max_abs(&(matrix.adjoint() - &matrix));
        Self { matrix, trace, trace_error, idempotence_residual, hermiticity_residual, nodes }
    }

    /// Refuses a projector that is not idempotent and Hermitian, or whose
    /// trace disagrees with `d_phys`, beyond `tol`.
    pub fn certify(&self, d_phys: usize, tol: f64) -> Result<()> {
        if self.idempotence_residual > tol {
            return Err(Error::BadProjector(format!("‖Π² − Π‖ = {:.3e}", self.idempotence_residual)));
        }
        if self.hermiticity_residual > tol {
            return Err(Error::BadProjector(format!("‖Π† − Π‖ = {:.3e}", self.hermiticity_residual)));
        }
        if (self.trace - d_phys as f64).abs() > tol {
            return Err(Error::BadProjector(format!("trace {} but d_phys = {d_phys}", self.trace)));
        }
        Ok(())
    }
}

/// Exact dense projector, using the group's exact rule of degree `deg U + deg V`.
pub fn physical_projector<G: CompactGroup>(u: &Representation<G>, v: &Representation<G>) -> Result<PhysicalProjector> {
    same_group(u, v)?;
    let rule = u.group().quadrature(u.degree() + v.degree());
    Ok(projector_from_rule(u, v, &rule, 0.0))
}

/// Monte Carlo estimate of the dense projector; the trace carries a standard error.
pub fn physical_projector_monte_carlo<G: CompactGroup>(
    u: &Representation<G>,
    v: &Representation<G>,
    samples: usize,
    seed: u64,
) -> Result<PhysicalProjector> {
    same_group(u, v)?;
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let elements = probe_elements(u.group().as_ref(), samples, seed);
    let traces: Vec<f64> = elements.iter().map(|g| (u.character(g) * v.character(g)).re).collect();
    let stderr = crate::sampling::Estimate::from_samples(&traces).stderr;
    let w = 1.0 / samples as f64;
    let rule = Quadrature {
        kind: crate::group::QuadratureKind::ExactSum,
        nodes: elements.into_iter().map(|g| (g, w)).collect(),
    };
    Ok(projector_from_rule(u, v, &rule, stderr))
}

fn projector_from_rule<G: CompactGroup>(
    u: &Representation<G>,
    v: &Representation<G>,
    rule: &Quadrature<G::Element>,
    trace_error: f64,
) -> PhysicalProjector {
    let d = u.dim() * v.dim();
    let matrix = rule.integrate_matrix(d, d, |g| kron(&u.matrix(g), &v.matrix(g)));
    PhysicalProjector::from_matrix(matrix, trace_error, rule.len())
}

fn same_group<G: CompactGroup>(u: &Representation<G>, v: &Representation<G>) -> Result<()> {
    if !Arc::ptr_eq(u.group(), v.group()) && u.group().name() != v.group().name() {
        return Err(Error::InvalidRepresentation("representations live on different groups".into()));
    }
    Ok(())
}

/// Orthonormal basis of `range(Π)` by Hermitian eigendecomposition with
/// threshold `1/2`. Every eigenvalue must lie within `1e-6` of 0 or 1.
pub fn physical_basis(projector: &CMatrix) -> Result<Vec<CVector>> {
    let (values, vectors) = hermitian_eigen(projector);
    if let Some(bad) = values.iter().find(|&&x| x.abs() > 1e-6 && (x - 1.0).abs() > 1e-6) {
        return Err(Error::BadProjector(format!("eigenvalue {bad} is not near 0 or 1")));
    }
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0.5)
        .map(|(i, _)| {
            let mut v = vectors.column(i).into_owned();
            fix_phase(&mut v);
            v
        })
        .collect())
}

/// A unit vector in the invariant subspace with its invariance certificate.
#[derive(Clone, Debug)]
pub struct PhysicalState {
    amplitudes: CVector,
    d_r: usize,
    d_s: usize,
    invariance_residual: f64,
}

impl PhysicalState {
    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn d_r(&self) -> usize {
        self.d_r
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    /// Upper bound on `max_g ‖(U_g ⊗ V_g)ψ − ψ‖` over the space's probes.
    pub fn invariance_residual(&self) -> f64 {
        self.invariance_residual
    }

    /// Coefficient matrix `ψ[r, s]`.
    pub fn coefficients(&self) -> CMatrix {
        as_bipartite(&self.amplitudes, self.d_r, self.d_s)
    }

    pub fn inner(&self, other: &PhysicalState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// The invariant subspace of `R ⊗ S` with an orthonormal basis.
pub struct PhysicalSpace<G: CompactGroup> {
    rep_r: Arc<Representation<G>>,
    rep_s: Arc<Representation<G>>,
    basis: Vec<CVector>,
    probes: Vec<G::Element>,
    basis_residual: f64,
}

impl<G: CompactGroup> fmt::Debug for PhysicalSpace<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhysicalSpace")
            .field("d_r", &self.d_r())
            .field("d_s", &self.d_s())
            .field("d_phys", &self.dim())
            .field("basis_residual", &self.basis_residual)
            .finish()
    }
}

impl<G: CompactGroup> PhysicalSpace<G> {
    /// Builds the basis block by block: each pair (copy of `α` in `R`, copy
    /// of `β` in `S`) contributes the invariant vectors of `T^α ⊗ T^β`,
    /// computed once per label pair from the small exact projector.
    pub fn build(rep_r: Arc<Representation<G>>, rep_s: Arc<Representation<G>>) -> Result<Self> {
        same_group(&rep_r, &rep_s)?;
        let group = rep_r.group().clone();
        let (d_r, d_s) = (rep_r.dim(), rep_s.dim());
        let mut cache: BTreeMap<(G::Label, G::Label), Vec<CVector>> = BTreeMap::new();
        let mut basis = Vec::new();
        for (ib, rb) in rep_r.blocks().iter().enumerate() {
            let da = group.irrep_dim(rb.label);
            for (jb, sb) in rep_s.blocks().iter().enumerate() {
                let db = group.irrep_dim(sb.label);
                let local = cache
                    .entry((rb.label, sb.label))
                    .or_insert_with(|| local_invariants(group.as_ref(), rb.label, sb.label));
                if local.is_empty() {
                    continue;
                }
                for i in 0..rb.multiplicity {
                    let r0 = rep_r.block_offset(ib) + i * da;
                    for j in 0..sb.multiplicity {
                        let s0 = rep_s.block_offset(jb) + j * db;
                        for w in local.iter() {
                            let mut m = CMatrix::zeros(d_r, d_s);
                            for a in 0..da {
                                for b in 0..db {
                                    m[(r0 + a, s0 + b)] = w[a * db + b];
                                }
                            }
                            basis.push(from_bipartite(&to_working_bipartite(&rep_r, &rep_s, m)));
                        }
                    }
                }
            }
        }
        Self::from_basis(rep_r, rep_s, basis)
    }

    /// Builds the basis from a dense projector on `R ⊗ S`.
    pub fn from_projector(
        rep_r: Arc<Representation<G>>,
        rep_s: Arc<Representation<G>>,
        projector: &CMatrix,
    ) -> Result<Self> {
        let basis = physical_basis(projector)?;
        Self::from_basis(rep_r, rep_s, basis)
    }

    fn from_basis(rep_r: Arc<Representation<G>>, rep_s: Arc<Representation<G>>, basis: Vec<CVector>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::EmptyPhysicalSpace);
        }
        let probes = probe_elements(rep_r.group().as_ref(), PROBE_COUNT, PROBE_SEED);
        let mut space = Self { rep_r, rep_s, basis, probes, basis_residual: 0.0 };
        space.basis_residual = space.basis.iter().map(|v| space.residual_of(v)).fold(0.0, f64::max);
        if space.basis_residual > 1e-8 {
            return Err(Error::Certification(format!(
                "physical basis invariance residual {:.3e}",
                space.basis_residual
            )));
        }
        Ok(space)
    }

    pub fn rep_r(&self) -> &Arc<Representation<G>> {
        &self.rep_r
    }

    pub fn rep_s(&self) -> &Arc<Representation<G>> {
        &self.rep_s
    }

    pub fn group(&self) -> &Arc<G> {
        self.rep_r.group()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn d_r(&self) -> usize {
        self.rep_r.dim()
    }

    pub fn d_s(&self) -> usize {
        self.rep_s.dim()
    }

    pub fn basis_residual(&self) -> f64 {
        self.basis_residual
    }

    pub fn probes(&self) -> &[G::Element] {
        &self.probes
    }

    pub fn basis_states(&self) -> Vec<PhysicalState> {
        self.basis.iter().map(|v| self.wrap(v.clone(), self.basis_residual)).collect()
    }

    /// `max_g ‖(U_g ⊗ V_g)ψ − ψ‖` over the probe elements.
    pub fn residual_of(&self, psi: &CVector) -> f64 {
        self.probes
            .iter()
            .map(|g| (apply_product(&self.rep_r.matrix(g), &self.rep_s.matrix(g), psi) - psi).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_i c_i |b_i⟩`, normalized. The invariance certificate is the
    /// triangle-inequality bound `(Σ|c_i|) · max_i residual(b_i)`.
    pub fn state_from_coefficients(&self, coefficients: &[C64]) -> Result<PhysicalState> {
        if coefficients.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coefficients.len() });
        }
        let norm = coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("coefficients must be nonzero and finite".into()));
        }
        let mut psi = CVector::zeros(self.d_r() * self.d_s());
        for (c, b) in coefficients.iter().zip(&self.basis) {
            psi.axpy(*c / norm, b, C64::new(1.0, 0.0));
        }
        let l1: f64 = coefficients.iter().map(|z| z.norm() / norm).sum();
        Ok(self.wrap(psi, l1 * self.basis_residual))
    }

    /// Accepts an arbitrary vector after normalizing and checking invariance
    /// directly on the probes.
    pub fn certify_vector(&self, psi: CVector) -> Result<PhysicalState> {
        let expected = self.d_r() * self.d_s();
        if psi.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: psi.len() });
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        let psi = psi.unscale(norm);
        let residual = self.residual_of(&psi);
        if residual > 1e-8 {
            return Err(Error::Certification(format!("invariance residual {residual:.3e}")));
        }
        Ok(self.wrap(psi, residual))
    }

    /// Haar-random unit vector: i.i.d. complex Gaussian coefficients, normalized.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PhysicalState {
        let coefficients: Vec<C64> = (0..self.dim()).map(|_| complex_gaussian(rng)).collect();
        self.state_from_coefficients(&coefficients)
            .expect("Gaussian coefficients are nonzero with probability one")
    }

    fn wrap(&self, amplitudes: CVector, invariance_residual: f64) -> PhysicalState {
        PhysicalState { amplitudes, d_r: self.d_r(), d_s: self.d_s(), invariance_residual }
    }
}

fn to_working_bipartite<G: CompactGroup>(
    rep_r: &Representation<G>,
    rep_s: &Representation<G>,
    m: CMatrix,
) -> CMatrix {
    let m = match rep_r.basis_change() {
        Some(w) => w * m,
        None => m,
    };
    match rep_s.basis_change() {
        Some(w) => m * w.transpose(),
        None => m,
    }
}

fn local_invariants<G: CompactGroup>(group: &G, a: G::Label, b: G::Label) -> Vec<CVector> {
    let rule = group.quadrature(group.irrep_degree(a) + group.irrep_degree(b));
    let size = group.irrep_dim(a) * group.irrep_dim(b);
    let local = rule.integrate_matrix(size, size, |g| kron(&group.irrep_matrix(a, g), &group.irrep_matrix(b, g)));
    if local.trace().re < 0.5 {
        return Vec::new();
    }
    physical_basis(&local).expect("exact local projector has a clean spectrum")
}
