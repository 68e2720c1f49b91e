use cremona_core::cremona::{classify, degree_sequence, GrowthClass, PlaneBirationalMap};
use cremona_core::exactalg::{rat, ratio};
use cremona_core::oscillate::{
    build_jonquieres, linear_conjugate, synthesize_oscillation, OscillationTarget, SynthesisOptions,
};
use cremona_core::stability::*;
use proptest::prelude::*;

fn synth(pairs: &[(u64, u64)], seed: u64) -> cremona_core::oscillate::SynthesisReport {
    let target = OscillationTarget::from_pairs(pairs).unwrap();
    let opts = SynthesisOptions { seed, max_tries: 50, ..SynthesisOptions::default() };
    synthesize_oscillation(&target, &opts).unwrap()
}

#[test]
fn synthesized_maps_match_their_prediction() {
    for seed in [0, 1, 2, 3] {
        let report = synth(&[(2, 1)], seed);
        assert!(report.verified(), "seed {seed}");
        assert_eq!(report.computed.degrees[1..], report.predicted[..]);
        assert_eq!(report.h.degree() as u64, report.d - report.target.value(1));
        assert_eq!(report.d, 4);
        assert!(report.horizon >= 9);
    }
}

#[test]
fn linear_conjugates_share_the_eventual_degree() {
    let report = synth(&[(1, 1)], 5);
    let h = &report.h;
    for m in [[[1, 2, 0], [0, 1, -1], [1, 0, 1]], [[2, 0, 1], [1, 1, 0], [0, 3, 1]]] {
        let b = PlaneBirationalMap::linear_i64(m).unwrap();
        let conj = linear_conjugate(h, &b).unwrap();
        let a = degree_sequence(h, 8, None).unwrap();
        let c = degree_sequence(&conj, 8, None).unwrap();
        assert_eq!(a.degrees, c.degrees);
        assert_eq!(*c.degrees.last().unwrap(), report.d);
        assert_eq!(classify(&c).unwrap().class, GrowthClass::Elliptic);
    }
}

#[test]
fn reordering_the_net_basis_is_a_linear_change() {
    let report = synth(&[(2, 1)], 11);
    let config = report.configuration.as_ref().unwrap();
    let mut points = config.derived_points.clone();
    points.reverse();
    points.swap(0, 1);
    let (g2, g2_inv) = build_jonquieres(&config.q0, &points).unwrap();
    let g_inv = report.g_inverse.as_ref().unwrap();
    assert_eq!(g2.compose(g_inv).unwrap().degree(), 1);
    let h2 = g2.compose(&config.linear_map.compose(&g2_inv).unwrap()).unwrap();
    let n = report.horizon as usize;
    assert_eq!(degree_sequence(&h2, n, None).unwrap().degrees, report.computed.degrees);
}

#[test]
fn resampling_succeeds_for_several_seeds() {
    for (pairs, seeds) in [(&[(1u64, 1u64)][..], 0..4u64), (&[(3, 1)][..], 20..22), (&[(1, 1), (2, 1)][..], 7..8)] {
        for seed in seeds {
            let report = synth(pairs, seed);
            assert!(report.verified() && report.tries <= 50, "{pairs:?} seed {seed}");
        }
    }
}

#[test]
fn stabilized_sigma_certificate_rechecks() {
    let sigma = PlaneBirationalMap::standard_involution();
    let opts = cremona_core::cremona::DegreeOptions::default();
    let (a, cert) = stabilize_by_postcomposition(&sigma, 0, 50, 6, &opts).unwrap().expect("found within 50 trials");
    assert!(cert.verified);
    let recheck = is_algebraically_stable_up_to(&a.compose(&sigma).unwrap(), 6, &opts).unwrap();
    assert!(recheck.verified);
    assert_eq!(recheck.drop_profile, vec![0; 6]);
}

fn q_of(num: &[i64], den: &[i64]) -> UniRational {
    UniRational::from_i64(num, den).unwrap()
}

#[test]
fn falpha_product_formula_matches_iteration() {
    let alpha = ratio(1, 2);
    for q in [q_of(&[1, 1], &[1]), q_of(&[2, 0, 1], &[1]), q_of(&[1, 3], &[3, 1])] {
        let f = make_family_falpha(&alpha, &q).unwrap();
        let mut iterate = f.clone();
        for n in 1..=5u32 {
            let qn = falpha_iterate_multiplier(&alpha, &q, n);
            let closed = skew_product(&num_traits::pow(alpha.clone(), n as usize), &qn).unwrap();
            assert_eq!(iterate, closed, "n = {n}");
            assert_eq!(qn.reduced().reduced_degree(), n * q.reduced_degree());
            iterate = f.compose(&iterate).unwrap();
        }
    }
}

#[test]
fn falpha_conjugacies_hold() {
    let q = q_of(&[1, 1], &[1]);
    for alpha in [rat(2), ratio(1, 3), ratio(-3, 2)] {
        for m in 1..=3 {
            assert!(verify_falpha_conjugacy(&alpha, &q, m).unwrap(), "alpha {alpha}, m {m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn drop_profiles_are_nonnegative(entries in prop::array::uniform9(-3i64..=3)) {
        let m = [[entries[0], entries[1], entries[2]], [entries[3], entries[4], entries[5]], [entries[6], entries[7], entries[8]]];
        prop_assume!(PlaneBirationalMap::linear_i64(m).is_ok());
        let a = PlaneBirationalMap::linear_i64(m).unwrap();
        let f = a.compose(&PlaneBirationalMap::standard_involution()).unwrap();
        let cert = is_algebraically_stable_up_to(&f, 5, &Default::default()).unwrap();
        let degrees = degree_sequence(&f, 5, None).unwrap().degrees;
        for (n, drop) in cert.drop_profile.iter().enumerate() {
            prop_assert_eq!(2u64.pow(n as u32 + 1) - drop, degrees[n + 1]);
        }
        prop_assert_eq!(cert.verified, cert.drop_profile.iter().all(|&x| x == 0));
    }

    #[test]
    fn renormalization_keeps_degrees(a in 1i64..=6, b in 2i64..=6, t_num in 1i64..=4, t_den in 1i64..=4) {
        let f = quadratic_germ(a, b);
        let t = ratio(t_num, t_den);
        let g = renormalize_at_fixed_point(&f, &t).unwrap();
        prop_assert_eq!(degree_sequence(&f, 4, None).unwrap().degrees, degree_sequence(&g, 4, None).unwrap().degrees);
    }
}

/// `(a x + y², b y)` on the chart `z = 1`.
fn quadratic_germ(a: i64, b: i64) -> PlaneBirationalMap {
    cremona_core::cli::quadratic_germ(&rat(a), &rat(b)).unwrap()
}
