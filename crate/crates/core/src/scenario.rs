//! Ready-made reference-frame scenarios: `S3` acting on `C³`, the periodic
//! `U(1)` clock and the maximal spin-`J` frame of `SU(2)`, plus finite
//! groups supplied through a JSON configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::asymmetry::uniformity_via_entanglement;
use crate::coherent::CoherentStateSystem;
use crate::group::{s3_standard_basis, Circle, CompactGroup, FiniteGroup, Spin, Su2};
use crate::linalg::{CMatrix, CVector, C64};
use crate::representation::{
    physical_dimension, physical_projector, Block, MultiplicityProfile, PhysicalProjector, PhysicalSpace, PhysicalState,
    ProfileEntry, Representation,
};
use crate::{Error, Result};

/// Largest `2J` for which the spin-`J` frame is built with explicit matrices.
pub const SU2_MATRIX_CAP: u32 = 4;

/// Dense projectors are only formed up to this `d_R · d_S`.
pub const DENSE_PROJECTOR_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Physics {
    None,
    /// `ħ = 1`; `τ = 4π/ω` and `g = ω t / 2`.
    Clock { k: u32, omega: f64, tau: f64 },
    Spin { twice_j: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeedChoice {
    E1,
    E2,
    /// Components in the block basis `|α, i, m⟩`.
    Custom(CVector),
}

impl SeedChoice {
    pub fn label(&self) -> &'static str {
        match self {
            SeedChoice::E1 => "e1",
            SeedChoice::E2 => "e2",
            SeedChoice::Custom(_) => "custom",
        }
    }
}

/// `(1/3, −2/3, −2/3)` in the permutation basis of `C³`.
pub fn s3_seed_e1() -> CVector {
    CVector::from_vec(vec![C64::new(1.0 / 3.0, 0.0), C64::new(-2.0 / 3.0, 0.0), C64::new(-2.0 / 3.0, 0.0)])
}

/// `(1/√2, 0, −i/√2)` in the permutation basis of `C³`.
pub fn s3_seed_e2() -> CVector {
    let h = 1.0 / 2f64.sqrt();
    CVector::from_vec(vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, -h)])
}

#[derive(Clone, Debug)]
pub struct Frame<G: CompactGroup> {
    pub label: String,
    pub css: CoherentStateSystem<G>,
}

/// A certified pair of representations with its physical Hilbert space and
/// one or more coherent-state systems. Profile-only scenarios carry no
/// matrices; operations that need them return [`Error::ProfileOnly`].
pub struct Scenario<G: CompactGroup> {
    name: String,
    rep_r: Arc<Representation<G>>,
    rep_s: Arc<Representation<G>>,
    profile: MultiplicityProfile<G::Label>,
    space: Option<PhysicalSpace<G>>,
    frames: Vec<Frame<G>>,
    physics: Physics,
}

impl<G: CompactGroup> fmt::Debug for Scenario<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scenario")
            .field("name", &self.name)
            .field("d_r", &self.rep_r.dim())
            .field("d_s", &self.rep_s.dim())
            .field("d_phys", &self.profile.d_phys())
            .field("matrices", &self.space.is_some())
            .field("frames", &self.frames.iter().map(|f| f.label.as_str()).collect::<Vec<_>>())
            .field("physics", &self.physics)
            .finish()
    }
}

impl<G: CompactGroup> Scenario<G> {
    /// Builds the physical space and certifies every seed. Seeds are given
    /// in the block basis; `None` selects the canonical seed.
    pub fn build(
        name: impl Into<String>,
        rep_r: Arc<Representation<G>>,
        rep_s: Arc<Representation<G>>,
        seeds: Vec<(String, Option<CVector>)>,
        physics: Physics,
    ) -> Result<Self> {
        let profile = MultiplicityProfile::from_reps(&rep_r, &rep_s);
        let d_phys = physical_dimension(&profile)?;
        let space = PhysicalSpace::build(rep_r.clone(), rep_s.clone())?;
        if space.dim() != d_phys {
            return Err(Error::Certification(format!(
                "physical basis has {} vectors, multiplicity profile gives {d_phys}",
                space.dim()
            )));
        }
        let mut frames = Vec::with_capacity(seeds.len());
        for (label, seed) in seeds {
            let css = match seed {
                None => CoherentStateSystem::canonical(rep_r.clone())?,
                Some(v) => {
                    if v.len() != rep_r.dim() {
                        return Err(Error::DimensionMismatch { expected: rep_r.dim(), got: v.len() });
                    }
                    CoherentStateSystem::new(rep_r.clone(), rep_r.to_working(&v))?
                }
            };
            frames.push(Frame { label, css });
        }
        Ok(Self { name: name.into(), rep_r, rep_s, profile, space: Some(space), frames, physics })
    }

    pub fn profile_only(
        name: impl Into<String>,
        rep_r: Arc<Representation<G>>,
        rep_s: Arc<Representation<G>>,
        physics: Physics,
    ) -> Result<Self> {
        let profile = MultiplicityProfile::from_reps(&rep_r, &rep_s);
        physical_dimension(&profile)?;
        Ok(Self { name: name.into(), rep_r, rep_s, profile, space: None, frames: Vec::new(), physics })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &Arc<G> {
        self.rep_r.group()
    }

    pub fn rep_r(&self) -> &Arc<Representation<G>> {
        &self.rep_r
    }

    pub fn rep_s(&self) -> &Arc<Representation<G>> {
        &self.rep_s
    }

    pub fn profile(&self) -> &MultiplicityProfile<G::Label> {
        &self.profile
    }

    pub fn d_phys(&self) -> usize {
        self.profile.d_phys()
    }

    pub fn physics(&self) -> &Physics {
        &self.physics
    }

    pub fn has_matrices(&self) -> bool {
        self.space.is_some()
    }

    pub fn space(&self) -> Result<&PhysicalSpace<G>> {
        self.space.as_ref().ok_or_else(|| Error::ProfileOnly(self.name.clone()))
    }

    pub fn frames(&self) -> &[Frame<G>] {
        &self.frames
    }

    pub fn frame(&self, label: &str) -> Result<&CoherentStateSystem<G>> {
        self.frames
            .iter()
            .find(|f| f.label == label)
            .map(|f| &f.css)
            .ok_or_else(|| Error::InvalidArgument(format!("scenario {} has no frame {label}", self.name)))
    }

    /// The first coherent-state system.
    pub fn primary_frame(&self) -> Result<&CoherentStateSystem<G>> {
        self.space()?;
        self.frames
            .first()
            .map(|f| &f.css)
            .ok_or_else(|| Error::InvalidArgument(format!("scenario {} has no frames", self.name)))
    }

    /// Exact dense `Π_phys`; refused above [`DENSE_PROJECTOR_LIMIT`].
    pub fn projector(&self) -> Result<PhysicalProjector> {
        self.space()?;
        let size = self.rep_r.dim() * self.rep_s.dim();
        if size > DENSE_PROJECTOR_LIMIT {
            return Err(Error::Unsupported(format!("dense projector on {size} dimensions")));
        }
        physical_projector(&self.rep_r, &self.rep_s)
    }
}

fn s3_fundamental(group: Arc<FiniteGroup>) -> Result<Representation<FiniteGroup>> {
    let trivial = group.irrep_index("trivial").expect("built-in S3");
    let standard = group.irrep_index("std").expect("built-in S3");
    let blocks = vec![Block { label: trivial, multiplicity: 1 }, Block { label: standard, multiplicity: 1 }];
    let plus = 1.0 / 3f64.sqrt();
    let complement = s3_standard_basis();
    let w = CMatrix::from_fn(3, 3, |r, c| if c == 0 { C64::new(plus, 0.0) } else { complement[(r, c - 1)] });
    Representation::new(group, blocks)?.with_basis(w)
}

/// `S3` acting on `C³` by permutations on both `R` and `S` (`d_phys = 2`).
/// `E1`/`E2` are given in the permutation basis; custom seeds in the block
/// basis `(|trivial⟩, |std, m=1⟩, |std, m=2⟩)`.
pub fn build_s3(seeds: &[SeedChoice]) -> Result<Scenario<FiniteGroup>> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("at least one seed is required".into()));
    }
    let group = Arc::new(FiniteGroup::s3());
    let rep = Arc::new(s3_fundamental(group)?);
    let w = rep.basis_change().expect("set above").clone();
    let frames = seeds
        .iter()
        .map(|s| {
            let block = match s {
                SeedChoice::E1 => w.adjoint() * s3_seed_e1(),
                SeedChoice::E2 => w.adjoint() * s3_seed_e2(),
                SeedChoice::Custom(v) => v.clone(),
            };
            (s.label().to_string(), Some(block))
        })
        .collect();
    Scenario::build("s3", rep.clone(), rep, frames, Physics::None)
}

fn clock_reps(k: u32) -> Result<(Arc<Representation<Circle>>, Arc<Representation<Circle>>)> {
    if k == 0 || k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("clock needs odd k >= 1, got {k}")));
    }
    let group = Arc::new(Circle);
    let k = k as i64;
    let r = (-k..=k).map(|a| Block { label: a, multiplicity: 1 }).collect();
    let s = (0..(k + 1) / 2).map(|n| Block { label: -(2 * n + 1), multiplicity: 1 }).collect();
    Ok((Arc::new(Representation::new(group.clone(), r)?), Arc::new(Representation::new(group, s)?)))
}

/// Clock with charges `−k..k` on `R` and oscillator levels `0..(k−1)/2` on
/// `S`, where `V_g|n⟩ = e^{−ig(2n+1)}|n⟩`. Both bases are ordered by
/// increasing index: `R` index `α + k`, `S` index `n`.
pub fn build_u1_clock(k: u32, seed: Option<CVector>) -> Result<Scenario<Circle>> {
    let (r, s) = clock_reps(k)?;
    let label = if seed.is_some() { "custom" } else { "canonical" };
    let physics = Physics::Clock { k, omega: 1.0, tau: 4.0 * PI };
    Scenario::build(format!("u1_clock(k={k})"), r, s, vec![(label.into(), seed)], physics)
}

fn su2_reps(twice_j: u32) -> Result<(Arc<Representation<Su2>>, Arc<Representation<Su2>>)> {
    let group = Arc::new(Su2);
    let blocks: Vec<Block<Spin>> =
        (0..=twice_j).map(|t| Block { label: Spin::new(t), multiplicity: t as usize + 1 }).collect();
    Ok((
        Arc::new(Representation::new(group.clone(), blocks.clone())?),
        Arc::new(Representation::new(group, blocks)?),
    ))
}

/// Maximal spin-`J` frame: every spin `j ≤ J` with multiplicity `2j + 1` on
/// both sides. Matrices are built only for `2J ≤ cap`.
pub fn build_su2_frame(twice_j: u32, cap: u32, seed: Option<CVector>) -> Result<Scenario<Su2>> {
    let (r, s) = su2_reps(twice_j)?;
    let name = format!("su2(J={})", Spin::new(twice_j));
    let physics = Physics::Spin { twice_j };
    if twice_j > cap {
        return Scenario::profile_only(name, r, s, physics);
    }
    let label = if seed.is_some() { "custom" } else { "canonical" };
    Scenario::build(name, r, s, vec![(label.into(), seed)], physics)
}

/// `cos x` on `[0, π/2]`, zero beyond.
pub fn cos_star(x: f64) -> f64 {
    if (0.0..=PI / 2.0).contains(&x) {
        x.cos()
    } else {
        0.0
    }
}

fn clock_params(scenario: &Scenario<Circle>) -> Result<(u32, f64, f64)> {
    match scenario.physics() {
        Physics::Clock { k, omega, tau } => Ok((*k, *omega, *tau)),
        _ => Err(Error::InvalidArgument(format!("{} is not a clock scenario", scenario.name()))),
    }
}

/// Conditional state at `t = 0` and the energies `ω(n + 1/2)` of its levels.
fn clock_conditional(scenario: &Scenario<Circle>, psi: &PhysicalState) -> Result<(CVector, Vec<f64>)> {
    let (_, omega, _) = clock_params(scenario)?;
    let phi = scenario.primary_frame()?.conditional_state(psi, &0.0)?.amplitudes;
    let energies = (0..phi.len()).map(|n| omega * (n as f64 + 0.5)).collect();
    Ok((phi, energies))
}

fn energy_spread(phi: &CVector, energies: &[f64]) -> f64 {
    let mean: f64 = phi.iter().zip(energies).map(|(z, e)| z.norm_sqr() * e).sum();
    let total: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    let mean = mean / total;
    let variance: f64 = phi.iter().zip(energies).map(|(z, e)| z.norm_sqr() * (e - mean).powi(2)).sum();
    (variance / total).sqrt()
}

fn survival(phi: &CVector, energies: &[f64], t: f64) -> f64 {
    phi.iter()
        .zip(energies)
        .map(|(z, e)| C64::from_polar(z.norm_sqr(), -e * t))
        .sum::<C64>()
        .norm_sqr()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeedLimitRecord {
    pub delta_h: f64,
    /// `ωk/2`.
    pub variance_cap: f64,
    /// Whether `τ ≥ π/(2ΔH)`, selecting the bound `π/(4τΔH)`.
    pub first_branch: bool,
    pub bound: f64,
    /// `1/(8k)`, asserted only on the first branch.
    pub floor: f64,
    pub uniformity: f64,
    pub satisfied: bool,
}

/// Evaluates the speed-limit lower bound on `𝒰` for a clock state.
pub fn speed_limit_check(scenario: &Scenario<Circle>, psi: &PhysicalState) -> Result<SpeedLimitRecord> {
    let (k, omega, tau) = clock_params(scenario)?;
    let (phi, energies) = clock_conditional(scenario, psi)?;
    let delta_h = energy_spread(&phi, &energies);
    let uniformity = uniformity_via_entanglement(psi)?.uniformity;
    let first_branch = delta_h > 0.0 && tau >= PI / (2.0 * delta_h);
    let bound = if first_branch { PI / (4.0 * tau * delta_h) } else { 0.39 };
    let floor = 1.0 / (8.0 * k as f64);
    let variance_cap = omega * k as f64 / 2.0;
    let satisfied = uniformity >= bound - 1e-9
        && (!first_branch || uniformity >= floor - 1e-9)
        && delta_h <= variance_cap + 1e-12;
    Ok(SpeedLimitRecord { delta_h, variance_cap, first_branch, bound, floor, uniformity, satisfied })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurvivalPoint {
    pub t: f64,
    pub fidelity: f64,
    pub cos_bound: f64,
}

/// `|⟨ψ̃(0)|ψ̃(t)⟩|²` against `cos∗²(ΔH t)` on the given times.
pub fn survival_curve(scenario: &Scenario<Circle>, psi: &PhysicalState, times: &[f64]) -> Result<Vec<SurvivalPoint>> {
    let (phi, energies) = clock_conditional(scenario, psi)?;
    let delta_h = energy_spread(&phi, &energies);
    Ok(times
        .iter()
        .map(|&t| SurvivalPoint { t, fidelity: survival(&phi, &energies, t), cos_bound: cos_star(delta_h * t).powi(2) })
        .collect())
}

/// Named numerical tolerances with their defaults.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        let entries = [
            ("purity_identity", 1e-9),
            ("translation", 1e-10),
            ("bounds", 1e-9),
            ("convolution", 1e-12),
            ("flip", 1e-12),
            ("seed_independence", 1e-10),
            ("seed_dependence", 1e-3),
            ("resolution", 1e-12),
            ("isometry", 1e-10),
            ("covariance", 1e-10),
            ("partial_trace", 1e-10),
            ("invariance", 1e-9),
            ("projector_trace", 1e-8),
            ("speed_limit", 1e-9),
            ("sigmas", 4.0),
        ];
        Self(entries.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        *self.0.get(name).unwrap_or_else(|| panic!("unknown tolerance {name}"))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::Config(format!("tolerance {name} must be a nonnegative number")));
        }
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::Config(format!(
                "unknown tolerance {name}; known: {}",
                self.0.keys().cloned().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Parses `name=value`.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=value, got {assignment}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("tolerance {name}: {value} is not a number")))?;
        self.set(name.trim(), value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioType {
    S3,
    U1Clock,
    Su2,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepConfig {
    pub name: String,
    /// One matrix per element, rows of `[re, im]` pairs.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub name: String,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub irreps: Vec<IrrepConfig>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub irrep: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(rename = "type")]
    pub kind: ScenarioType,
    pub k: Option<u32>,
    #[serde(rename = "J")]
    pub j: Option<f64>,
    pub seed: Option<Vec<[f64; 2]>>,
    pub mc: Option<McConfig>,
    pub tolerances: Option<BTreeMap<String, f64>>,
    pub group: Option<GroupConfig>,
    pub rep_r: Option<Vec<BlockConfig>>,
    pub rep_s: Option<Vec<BlockConfig>>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn preset(kind: ScenarioType) -> Self {
        Self {
            kind,
            k: None,
            j: None,
            seed: None,
            mc: None,
            tolerances: None,
            group: None,
            rep_r: None,
            rep_s: None,
        }
    }

    pub fn seed_vector(&self) -> Option<CVector> {
        self.seed
            .as_ref()
            .map(|pairs| CVector::from_iterator(pairs.len(), pairs.iter().map(|[re, im]| C64::new(*re, *im))))
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        for (name, value) in self.tolerances.iter().flatten() {
            t.set(name, *value)?;
        }
        Ok(t)
    }

    /// `2J` from the `J` field.
    pub fn twice_j(&self) -> Result<u32> {
        let j = self.j.ok_or_else(|| Error::Config("su2 scenario needs J".into()))?;
        let twice = 2.0 * j;
        if !(twice >= 0.0) || (twice - twice.round()).abs() > 1e-12 || twice > u32::MAX as f64 {
            return Err(Error::Config(format!("J = {j} is not a nonnegative half-integer")));
        }
        Ok(twice.round() as u32)
    }

    pub fn build(&self) -> Result<AnyScenario> {
        let seed = self.seed_vector();
        match self.kind {
            ScenarioType::S3 => {
                let seeds = match seed {
                    Some(v) => vec![SeedChoice::Custom(v)],
                    None => vec![SeedChoice::E1, SeedChoice::E2],
                };
                Ok(AnyScenario::Finite(build_s3(&seeds)?))
            }
            ScenarioType::U1Clock => {
                let k = self.k.ok_or_else(|| Error::Config("u1_clock scenario needs k".into()))?;
                Ok(AnyScenario::Clock(build_u1_clock(k, seed)?))
            }
            ScenarioType::Su2 => Ok(AnyScenario::Su2(build_su2_frame(self.twice_j()?, SU2_MATRIX_CAP, seed)?)),
            ScenarioType::Custom => Ok(AnyScenario::Finite(self.build_custom(seed)?)),
        }
    }

    fn build_custom(&self, seed: Option<CVector>) -> Result<Scenario<FiniteGroup>> {
        let missing = |what: &str| Error::Config(format!("custom scenario needs {what}"));
        let gc = self.group.as_ref().ok_or_else(|| missing("group"))?;
        let irreps = gc
            .irreps
            .iter()
            .map(|irrep| {
                let matrices = irrep
                    .matrices
                    .iter()
                    .map(|rows| {
                        let n = rows.len();
                        if rows.iter().any(|r| r.len() != n) {
                            return Err(Error::Config(format!("irrep {} has a non-square matrix", irrep.name)));
                        }
                        Ok(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((irrep.name.clone(), matrices))
            })
            .collect::<Result<Vec<_>>>()?;
        let group = Arc::new(FiniteGroup::new(gc.name.clone(), gc.elements.clone(), gc.table.clone(), irreps)?);
        let blocks = |cfg: Option<&Vec<BlockConfig>>, side: &str| -> Result<Vec<Block<usize>>> {
            cfg.ok_or_else(|| missing(side))?
                .iter()
                .map(|b| {
                    let label = group
                        .irrep_index(&b.irrep)
                        .ok_or_else(|| Error::UnknownIrrep(b.irrep.clone()))?;
                    Ok(Block { label, multiplicity: b.multiplicity })
                })
                .collect()
        };
        let r = Arc::new(Representation::new(group.clone(), blocks(self.rep_r.as_ref(), "rep_r")?)?);
        let s = Arc::new(Representation::new(group.clone(), blocks(self.rep_s.as_ref(), "rep_s")?)?);
        let label = if seed.is_some() { "custom" } else { "canonical" };
        Scenario::build(format!("custom({})", gc.name), r, s, vec![(label.into(), seed)], Physics::None)
    }
}

/// A built scenario of any supported group.
#[derive(Debug)]
pub enum AnyScenario {
    Finite(Scenario<FiniteGroup>),
    Clock(Scenario<Circle>),
    Su2(Scenario<Su2>),
}

impl AnyScenario {
    pub fn name(&self) -> &str {
        match self {
            AnyScenario::Finite(s) => s.name(),
            AnyScenario::Clock(s) => s.name(),
            AnyScenario::Su2(s) => s.name(),
        }
    }
}

/// Profile entries with `d_α` and the pairing spelled out, for reports.
pub fn profile_rows<L: Copy + Ord + fmt::Display>(profile: &MultiplicityProfile<L>) -> Vec<(String, usize, usize, usize)> {
    profile
        .entries
        .iter()
        .map(|e: &ProfileEntry<L>| (e.label.to_string(), e.dim, e.n_u, e.n_v))
        .collect()
}
