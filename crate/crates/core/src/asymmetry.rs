//! Conditional uniformity and asymmetry.
//!
//! `𝒰 = ∫ dg |⟨φ|V_g|φ⟩|²` is computed either by direct Haar integration of
//! the characteristic function or from the purity of the reduced state on
//! `S`. The two routes are independent and must agree for every physical
//! state. Also here: the `𝒰_p` family, the closed-form average over the
//! physical Hilbert space, its Monte Carlo counterpart and the typicality
//! experiment.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::CoherentStateSystem;
use crate::group::{haar_integrate, CompactGroup, GroupKind, HaarStrategy};
use crate::linalg::{fidelity, partial_trace_r, trace, CMatrix, CVector, C64};
use crate::representation::{physical_dimension, MultiplicityProfile, PhysicalSpace, PhysicalState, Representation};
use crate::sampling::{rng_for, Estimate};
use crate::{Error, Result};

/// Degree multiplier for the dense fallback used when `|χ|^p` is not a polynomial.
const DENSE_FACTOR: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectHaar,
    Entanglement,
    ClosedForm,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::DirectHaar => "direct-haar",
            Method::Entanglement => "entanglement",
            Method::ClosedForm => "closed-form",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityReport {
    pub uniformity: f64,
    /// `−log 𝒰` in `log_base`.
    pub asymmetry: f64,
    pub log_base: LogBase,
    pub method: Method,
    /// Zero for exact paths, standard error for Monte Carlo, a convergence
    /// bound for dense-grid fallbacks.
    pub error_estimate: f64,
    pub p: f64,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    /// Exact rational value, when one is known.
    pub exact: Option<String>,
}

impl UniformityReport {
    pub fn new(uniformity: f64, method: Method, p: f64, error_estimate: f64) -> Self {
        Self {
            uniformity,
            asymmetry: -uniformity.ln(),
            log_base: LogBase::Natural,
            method,
            error_estimate,
            p,
            n_samples: None,
            seed: None,
            exact: None,
        }
    }

    pub fn in_base(mut self, base: LogBase) -> Self {
        self.log_base = base;
        self.asymmetry = -base.log(self.uniformity);
        self
    }
}

/// `|⟨φ|ξ⟩|²` for unit vectors.
pub fn fidelity_pure(phi: &CVector, xi: &CVector) -> Result<f64> {
    if phi.len() != xi.len() {
        return Err(Error::DimensionMismatch { expected: phi.len(), got: xi.len() });
    }
    for v in [phi, xi] {
        let n = v.norm();
        if (n - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!("fidelity needs unit vectors, got norm {n}")));
        }
    }
    Ok(phi.dotc(xi).norm_sqr())
}

/// `χ_φ(g) = ⟨φ|V_g|φ⟩`.
pub fn characteristic_function<G: CompactGroup>(phi: &CVector, v: &Representation<G>, g: &G::Element) -> C64 {
    phi.dotc(&(v.matrix(g) * phi))
}

fn check_unit(phi: &CVector, v_dim: usize) -> Result<()> {
    if phi.len() != v_dim {
        return Err(Error::DimensionMismatch { expected: v_dim, got: phi.len() });
    }
    let n = phi.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!("conditional state has norm {n}")));
    }
    Ok(())
}

/// `∫ dg |χ_φ(g)|²` with an exact rule for degree `2·deg V`.
pub fn uniformity_direct<G: CompactGroup>(phi: &CVector, v: &Representation<G>) -> Result<UniformityReport> {
    check_unit(phi, v.dim())?;
    let strategy = HaarStrategy::Exact { degree: 2 * v.degree() };
    let integral = haar_integrate(v.group().as_ref(), &strategy, |g| {
        C64::new(characteristic_function(phi, v, g).norm_sqr(), 0.0)
    })?;
    Ok(UniformityReport::new(integral.value.re, Method::DirectHaar, 2.0, 0.0))
}

/// `Tr_R |ψ⟩⟨ψ|`, checked to have unit trace.
pub fn reduced_state(psi: &PhysicalState) -> Result<CMatrix> {
    let rho = partial_trace_r(psi.amplitudes(), psi.d_r(), psi.d_s());
    let t = trace(&rho);
    if (t.re - 1.0).abs() > 1e-10 || t.im.abs() > 1e-10 {
        return Err(Error::Certification(format!("reduced state has trace {t}; input is not a unit vector")));
    }
    Ok(rho)
}

pub fn purity(rho: &CMatrix) -> f64 {
    // tr ρ² = Σ |ρ_ij|² for Hermitian ρ
    rho.iter().map(|z| z.norm_sqr()).sum()
}

/// `ℋ₂(ρ) = −log tr ρ²`.
pub fn renyi2_entropy(rho: &CMatrix, base: LogBase) -> Result<f64> {
    let p = purity(rho);
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("tr ρ² = {p} is not positive")));
    }
    Ok(-base.log(p))
}

/// `𝒰 = tr ρ_S²`, with `𝒜 = ℋ₂(ρ_S)`.
pub fn uniformity_via_entanglement(psi: &PhysicalState) -> Result<UniformityReport> {
    let rho = reduced_state(psi)?;
    Ok(UniformityReport::new(purity(&rho), Method::Entanglement, 2.0, 0.0))
}

/// Whether `|χ|^p` is a polynomial in matrix elements (or the group is finite).
fn p_is_exact<G: CompactGroup>(group: &G, p: f64) -> bool {
    group.kind() == GroupKind::Finite || (p >= 0.0 && (p / 2.0).fract() == 0.0)
}

fn integrate_power<G, F>(group: &G, base_degree: usize, p: f64, mut f: F) -> Result<(f64, f64)>
where
    G: CompactGroup,
    F: FnMut(&G::Element) -> f64,
{
    if p_is_exact(group, p) {
        let degree = (p.round() as usize) * base_degree;
        let v = haar_integrate(group, &HaarStrategy::Exact { degree }, |g| C64::new(f(g), 0.0))?;
        return Ok((v.value.re, 0.0));
    }
    let coarse = DENSE_FACTOR * base_degree.max(1) * (p.ceil() as usize).max(1);
    let a = haar_integrate(group, &HaarStrategy::Exact { degree: coarse }, |g| C64::new(f(g), 0.0))?;
    let b = haar_integrate(group, &HaarStrategy::Exact { degree: 2 * coarse }, |g| C64::new(f(g), 0.0))?;
    Ok((b.value.re, (b.value.re - a.value.re).abs()))
}

/// `𝒰_p = ∫ dg |χ_φ(g)|^p`.
///
/// Exact for finite groups and even `p`. Otherwise the integrand is not a
/// polynomial; the value comes from a dense rule and the error estimate is
/// its change under doubling the rule's degree.
pub fn uniformity_p<G: CompactGroup>(phi: &CVector, v: &Representation<G>, p: f64) -> Result<UniformityReport> {
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must be finite and nonnegative")));
    }
    check_unit(phi, v.dim())?;
    let (value, err) = integrate_power(v.group().as_ref(), v.degree(), p, |g| {
        characteristic_function(phi, v, g).norm().powf(p)
    })?;
    Ok(UniformityReport::new(value, Method::DirectHaar, p, err))
}

/// `∫ dg V_g ρ V_g†`.
pub fn group_average_state<G: CompactGroup>(rho: &CMatrix, v: &Representation<G>) -> CMatrix {
    let d = v.dim();
    let rule = v.group().quadrature(2 * v.degree());
    rule.integrate_matrix(d, d, |g| {
        let m = v.matrix(g);
        &m * rho * m.adjoint()
    })
}

/// `∫ dg F(ρ, V_g ρ V_g†)^{p/2}` with Uhlmann fidelity; reduces to
/// [`uniformity_p`] on pure states.
pub fn uniformity_p_mixed<G: CompactGroup>(rho: &CMatrix, v: &Representation<G>, p: f64) -> Result<UniformityReport> {
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must be finite and nonnegative")));
    }
    if rho.nrows() != v.dim() || rho.ncols() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), got: rho.nrows() });
    }
    // Uhlmann fidelity is not a polynomial in g even for even p.
    let group = v.group().as_ref();
    let degree = if group.kind() == GroupKind::Finite { 0 } else { DENSE_FACTOR * v.degree().max(1) };
    let f = |g: &G::Element| {
        let m = v.matrix(g);
        fidelity(rho, &(&m * rho * m.adjoint())).min(1.0).powf(p / 2.0)
    };
    let a = haar_integrate(group, &HaarStrategy::Exact { degree }, |g| C64::new(f(g), 0.0))?;
    if group.kind() == GroupKind::Finite {
        return Ok(UniformityReport::new(a.value.re, Method::DirectHaar, p, 0.0));
    }
    let b = haar_integrate(group, &HaarStrategy::Exact { degree: 2 * degree }, |g| C64::new(f(g), 0.0))?;
    Ok(UniformityReport::new(b.value.re, Method::DirectHaar, p, (b.value.re - a.value.re).abs()))
}

/// `𝒰_phys = Σ_α n_α^U n_ᾱ^V (n_α^U + n_ᾱ^V)/d_α / (d_phys (d_phys + 1))`.
pub fn physical_uniformity_exact<L: Copy + Ord>(profile: &MultiplicityProfile<L>) -> Result<Ratio<i128>> {
    let d_phys = physical_dimension(profile)? as i128;
    let mut sum = Ratio::from_integer(0i128);
    for e in &profile.entries {
        let (nu, nv) = (e.n_u as i128, e.n_v as i128);
        if nu * nv == 0 {
            continue;
        }
        sum += Ratio::new(nu * nv * (nu + nv), e.dim as i128);
    }
    Ok(sum / Ratio::from_integer(d_phys * (d_phys + 1)))
}

pub fn physical_uniformity_closed_form<L: Copy + Ord>(profile: &MultiplicityProfile<L>) -> Result<UniformityReport> {
    let exact = physical_uniformity_exact(profile)?;
    let value = *exact.numer() as f64 / *exact.denom() as f64;
    let mut report = UniformityReport::new(value, Method::ClosedForm, 2.0, 0.0);
    report.exact = Some(exact.to_string());
    Ok(report)
}

/// Per-sample `𝒰_p` for `n` Haar-random physical states, sample `i` drawn
/// from stream `(seed, i)`. `p = 2` uses the purity of `ρ_S`; other
/// exponents need the coherent-state system to extract `|ψ(e)⟩`.
pub fn sample_uniformities<G: CompactGroup>(
    space: &PhysicalSpace<G>,
    css: Option<&CoherentStateSystem<G>>,
    n: usize,
    seed: u64,
    p: f64,
) -> Result<Vec<f64>> {
    if p != 2.0 && css.is_none() {
        return Err(Error::InvalidArgument(format!("p = {p} needs a coherent-state system")));
    }
    let identity = space.group().identity();
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let psi = space.sample(&mut rng_for(seed, i));
            if p == 2.0 {
                return uniformity_via_entanglement(&psi).map(|r| r.uniformity);
            }
            let css = css.expect("checked above");
            let phi = css.conditional_state(&psi, &identity)?;
            uniformity_p(&phi.amplitudes, space.rep_s(), p).map(|r| r.uniformity)
        })
        .collect()
}

/// Sample mean of `𝒰_p` over the physical Hilbert space.
pub fn physical_uniformity_monte_carlo<G: CompactGroup>(
    space: &PhysicalSpace<G>,
    css: Option<&CoherentStateSystem<G>>,
    n: usize,
    seed: u64,
    p: f64,
) -> Result<UniformityReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least 2 samples".into()));
    }
    let values = sample_uniformities(space, css, n, seed, p)?;
    let estimate = Estimate::from_samples(&values);
    let mut report = UniformityReport::new(estimate.mean, Method::MonteCarlo, p, estimate.stderr);
    report.n_samples = Some(n);
    report.seed = Some(seed);
    Ok(report)
}

/// Monte Carlo `𝒰_{p,phys}` for every `p` in `ps`, all from the same
/// samples. On finite groups `χ` is evaluated once per sample and element.
pub fn sweep_p_monte_carlo<G: CompactGroup>(
    space: &PhysicalSpace<G>,
    css: &CoherentStateSystem<G>,
    ps: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<UniformityReport>> {
    if n < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least 2 samples".into()));
    }
    if let Some(p) = ps.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must be finite and nonnegative")));
    }
    let group = space.group().as_ref();
    let v = space.rep_s();
    let identity = group.identity();
    let finite_rule = (group.kind() == GroupKind::Finite).then(|| group.quadrature(0));
    let per_sample: Vec<Vec<f64>> = (0..n as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let psi = space.sample(&mut rng_for(seed, i));
            let phi = css.conditional_state(&psi, &identity)?.amplitudes;
            match &finite_rule {
                Some(rule) => {
                    let moduli: Vec<(f64, f64)> = rule
                        .nodes
                        .iter()
                        .map(|(g, w)| (*w, characteristic_function(&phi, v, g).norm()))
                        .collect();
                    Ok(ps.iter().map(|&p| moduli.iter().map(|(w, m)| w * m.powf(p)).sum()).collect())
                }
                None => ps.iter().map(|&p| uniformity_p(&phi, v, p).map(|r| r.uniformity)).collect(),
            }
        })
        .collect::<Result<_>>()?;
    Ok(ps
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let column: Vec<f64> = per_sample.iter().map(|row| row[j]).collect();
            let estimate = Estimate::from_samples(&column);
            let mut report = UniformityReport::new(estimate.mean, Method::MonteCarlo, p, estimate.stderr);
            report.n_samples = Some(n);
            report.seed = Some(seed);
            report
        })
        .collect())
}

/// Jensen: the mean of `−log 𝒰` is at least `−log` of the mean.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JensenCheck {
    pub mean_asymmetry: f64,
    pub stderr: f64,
    pub asymmetry_phys: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

pub fn mean_asymmetry_bound(closed: &UniformityReport, samples: &[UniformityReport]) -> Result<JensenCheck> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let base = closed.log_base;
    let values: Vec<f64> = samples.iter().map(|r| -base.log(r.uniformity)).collect();
    let estimate = Estimate::from_samples(&values);
    let stderr = if samples.len() < 2 { 0.0 } else { estimate.stderr };
    let asymmetry_phys = -base.log(closed.uniformity);
    let tolerance = 4.0 * stderr + 1e-12;
    Ok(JensenCheck {
        mean_asymmetry: estimate.mean,
        stderr,
        asymmetry_phys,
        tolerance,
        satisfied: estimate.mean >= asymmetry_phys - tolerance,
    })
}

/// `72 π³ ln 2`.
pub fn typicality_constant() -> f64 {
    72.0 * PI.powi(3) * std::f64::consts::LN_2
}

/// `2 exp(−d_phys ε² / (C √d_R))`.
pub fn typicality_bound(d_phys: usize, d_r: usize, epsilon: f64) -> f64 {
    2.0 * (-(d_phys as f64) * epsilon * epsilon / (typicality_constant() * (d_r as f64).sqrt())).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalityRecord {
    pub epsilon: f64,
    pub empirical_fraction: f64,
    pub binomial_stderr: f64,
    pub bound: f64,
    pub margin: f64,
    pub satisfied: bool,
    pub mean_asymmetry: f64,
    pub log_base: LogBase,
    pub n_samples: usize,
    pub seed: u64,
}

/// Fraction of Haar-random physical states whose asymmetry (in bits) lies
/// at least `ε` from the sample mean, against the concentration bound.
/// The same samples are reused for every `ε`.
pub fn typicality_experiment<G: CompactGroup>(
    space: &PhysicalSpace<G>,
    epsilons: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<TypicalityRecord>> {
    if let Some(e) = epsilons.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::InvalidArgument(format!("ε = {e} must be positive")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let base = LogBase::Two;
    let values: Vec<f64> = sample_uniformities(space, None, n, seed, 2.0)?
        .into_iter()
        .map(|u| -base.log(u))
        .collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    Ok(epsilons
        .iter()
        .map(|&epsilon| {
            let hits = values.iter().filter(|a| (*a - mean).abs() >= epsilon).count();
            let fraction = hits as f64 / n as f64;
            let binomial_stderr = (fraction * (1.0 - fraction) / n as f64).sqrt();
            let bound = typicality_bound(space.dim(), space.d_r(), epsilon);
            TypicalityRecord {
                epsilon,
                empirical_fraction: fraction,
                binomial_stderr,
                bound,
                margin: bound - fraction,
                satisfied: fraction <= bound + 4.0 * binomial_stderr,
                mean_asymmetry: mean,
                log_base: base,
                n_samples: n,
                seed,
            }
        })
        .collect())
}
