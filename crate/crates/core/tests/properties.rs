use std::sync::LazyLock;

use proptest::prelude::*;
use qrf_core::asymmetry::{
    characteristic_function, group_average_state, purity, reduced_state, sample_uniformities, sweep_p_monte_carlo,
    uniformity_direct, uniformity_p, uniformity_p_mixed, uniformity_via_entanglement,
};
use qrf_core::group::{Circle, CompactGroup, FiniteGroup, Su2};
use qrf_core::linalg::{flip_operator, kron, trace, CMatrix};
use qrf_core::representation::PhysicalState;
use qrf_core::sampling::{complex_gaussian, rng_for};
use qrf_core::scenario::{build_s3, build_su2_frame, build_u1_clock, Scenario, SeedChoice};

static S3: LazyLock<Scenario<FiniteGroup>> = LazyLock::new(|| build_s3(&[SeedChoice::E1, SeedChoice::E2]).unwrap());
static CLOCKS: LazyLock<Vec<Scenario<Circle>>> =
    LazyLock::new(|| [1, 3, 5, 7].into_iter().map(|k| build_u1_clock(k, None).unwrap()).collect());
static SPINS: LazyLock<Vec<Scenario<Su2>>> =
    LazyLock::new(|| (1..=2).map(|tj| build_su2_frame(tj, 4, None).unwrap()).collect());

fn state<G: CompactGroup>(sc: &Scenario<G>, seed: u64) -> PhysicalState {
    sc.space().unwrap().sample(&mut rng_for(seed, 0))
}

fn random_element<G: CompactGroup>(sc: &Scenario<G>, seed: u64) -> G::Element {
    sc.group().sample_haar(&mut rng_for(seed, 1))
}

fn purity_gap<G: CompactGroup>(sc: &Scenario<G>, seed: u64) -> f64 {
    let psi = state(sc, seed);
    let u = uniformity_via_entanglement(&psi).unwrap().uniformity;
    let identity = sc.group().identity();
    sc.frames()
        .iter()
        .map(|f| {
            let phi = f.css.conditional_state(&psi, &identity).unwrap().amplitudes;
            (uniformity_direct(&phi, sc.rep_s()).unwrap().uniformity - u).abs()
        })
        .fold(0.0, f64::max)
}

fn in_bounds<G: CompactGroup>(sc: &Scenario<G>, seed: u64) -> bool {
    let u = uniformity_via_entanglement(&state(sc, seed)).unwrap().uniformity;
    u >= 1.0 / sc.rep_r().dim() as f64 - 1e-12 && u <= 1.0 + 1e-12
}

fn translation_gap<G: CompactGroup>(sc: &Scenario<G>, seed: u64) -> f64 {
    let psi = state(sc, seed);
    let css = sc.primary_frame().unwrap();
    let phi = css.conditional_state(&psi, &sc.group().identity()).unwrap().amplitudes;
    let moved = sc.rep_s().matrix(&random_element(sc, seed)) * &phi;
    let v = sc.rep_s();
    [2.0, 4.0]
        .into_iter()
        .map(|p| (uniformity_p(&phi, v, p).unwrap().uniformity - uniformity_p(&moved, v, p).unwrap().uniformity).abs())
        .fold(0.0, f64::max)
}

fn random_density(d: usize, seed: u64) -> CMatrix {
    let mut rng = rng_for(seed, 2);
    let a = CMatrix::from_fn(d, d, |_, _| complex_gaussian(&mut rng));
    let rho = &a * a.adjoint();
    let t = trace(&rho);
    rho / t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn direct_uniformity_equals_purity(seed in any::<u64>(), which in 0usize..7) {
        let gap = match which {
            0 => purity_gap(&S3, seed),
            1..=4 => purity_gap(&CLOCKS[which - 1], seed),
            _ => purity_gap(&SPINS[which - 5], seed),
        };
        prop_assert!(gap <= 1e-9, "gap {gap}");
    }

    #[test]
    fn uniformity_lies_between_one_over_d_r_and_one(seed in any::<u64>(), which in 0usize..7) {
        let ok = match which {
            0 => in_bounds(&S3, seed),
            1..=4 => in_bounds(&CLOCKS[which - 1], seed),
            _ => in_bounds(&SPINS[which - 5], seed),
        };
        prop_assert!(ok);
    }

    #[test]
    fn uniformity_is_translation_invariant(seed in any::<u64>(), which in 0usize..7) {
        let gap = match which {
            0 => translation_gap(&S3, seed),
            1..=4 => translation_gap(&CLOCKS[which - 1], seed),
            _ => translation_gap(&SPINS[which - 5], seed),
        };
        prop_assert!(gap <= 1e-10, "gap {gap}");
    }

    #[test]
    fn p2_uniformity_does_not_depend_on_the_seed(seed in any::<u64>()) {
        let psi = state(&S3, seed);
        let v = S3.rep_s();
        let a = S3.frame("e1").unwrap().conditional_state(&psi, &0).unwrap().amplitudes;
        let b = S3.frame("e2").unwrap().conditional_state(&psi, &0).unwrap().amplitudes;
        let gap = (uniformity_direct(&a, v).unwrap().uniformity - uniformity_direct(&b, v).unwrap().uniformity).abs();
        prop_assert!(gap <= 1e-10, "gap {gap}");
    }

    #[test]
    fn characteristic_function_is_bounded(seed in any::<u64>(), k in 0usize..4) {
        let sc = &CLOCKS[k];
        let phi = sc.primary_frame().unwrap().conditional_state(&state(sc, seed), &0.0).unwrap().amplitudes;
        let chi = characteristic_function(&phi, sc.rep_s(), &random_element(sc, seed));
        prop_assert!(chi.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn uniformity_p_is_nonincreasing_in_p(seed in any::<u64>(), p in 0.25f64..6.0, dp in 0.05f64..3.0) {
        let psi = state(&S3, seed);
        let phi = S3.frame("e1").unwrap().conditional_state(&psi, &0).unwrap().amplitudes;
        let lo = uniformity_p(&phi, S3.rep_s(), p).unwrap().uniformity;
        let hi = uniformity_p(&phi, S3.rep_s(), p + dp).unwrap().uniformity;
        prop_assert!(hi <= lo + 1e-12, "U_{} = {hi} > U_{p} = {lo}", p + dp);

        let sc = &CLOCKS[2];
        let phi = sc.primary_frame().unwrap().conditional_state(&state(sc, seed), &0.0).unwrap().amplitudes;
        let lo = uniformity_p(&phi, sc.rep_s(), p).unwrap();
        let hi = uniformity_p(&phi, sc.rep_s(), p + dp).unwrap();
        prop_assert!(hi.uniformity <= lo.uniformity + lo.error_estimate + hi.error_estimate + 1e-12);
    }

    #[test]
    fn twirling_never_lowers_uniformity(seed in any::<u64>(), p in 0.5f64..4.0) {
        let rho = reduced_state(&state(&S3, seed)).unwrap();
        // Add a non-invariant component so the twirl has something to do.
        let sigma = (rho + random_density(3, seed)).map(|z| z * 0.5);
        let twirled = group_average_state(&sigma, S3.rep_s());
        let before = uniformity_p_mixed(&sigma, S3.rep_s(), p).unwrap().uniformity;
        let after = uniformity_p_mixed(&twirled, S3.rep_s(), p).unwrap().uniformity;
        prop_assert!((after - 1.0).abs() <= 1e-9, "twirled {after}");
        prop_assert!(after >= before - 1e-9);
    }

    #[test]
    fn swap_trick_gives_purity(seed in any::<u64>(), d in 1usize..6) {
        let rho = random_density(d, seed);
        let lhs = trace(&(kron(&rho, &rho) * flip_operator(d)));
        prop_assert!((lhs.re - purity(&rho)).abs() <= 1e-12);
        prop_assert!(lhs.im.abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sweep_at_p2_matches_entanglement_samples(seed in any::<u64>()) {
        let space = S3.space().unwrap();
        let sweep = sweep_p_monte_carlo(space, S3.frame("e2").unwrap(), &[2.0], 200, seed).unwrap();
        let direct = sample_uniformities(space, None, 200, seed, 2.0).unwrap();
        let mean = direct.iter().sum::<f64>() / direct.len() as f64;
        prop_assert!((sweep[0].uniformity - mean).abs() <= 1e-12);
    }
}
