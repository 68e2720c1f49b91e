use cremona_core::cremona::{
    classify, degree_sequence, degree_sequence_with, DegreeOptions, GrowthClass, PlaneBirationalMap,
};
use cremona_core::exactalg::{poly_compose3, poly_gcd, rat, ratio, HomPoly3};
use cremona_core::stability::make_family_fa;
use num_bigint::BigInt;
use proptest::prelude::*;

fn linear(entries: [i64; 9]) -> Option<PlaneBirationalMap> {
    let m = [
        [entries[0], entries[1], entries[2]],
        [entries[3], entries[4], entries[5]],
        [entries[6], entries[7], entries[8]],
    ];
    PlaneBirationalMap::linear_i64(m).ok()
}

fn base(which: u8) -> PlaneBirationalMap {
    match which % 3 {
        0 => PlaneBirationalMap::standard_involution(),
        1 => PlaneBirationalMap::henon_example(),
        _ => PlaneBirationalMap::identity(),
    }
}

fn small_linear() -> impl Strategy<Value = PlaneBirationalMap> {
    prop::array::uniform9(-3i64..=3).prop_filter_map("singular", linear)
}

fn small_map() -> impl Strategy<Value = PlaneBirationalMap> {
    (small_linear(), 0u8..3, small_linear())
        .prop_map(|(a, w, b)| a.compose(&base(w)).and_then(|m| m.compose(&b)).expect("compose"))
}

fn small_form(deg: u32) -> impl Strategy<Value = HomPoly3> {
    let terms: Vec<[u32; 3]> = (0..=deg).flat_map(|i| (0..=deg - i).map(move |j| [i, j, deg - i - j])).collect();
    prop::collection::vec(-4i64..=4, terms.len()).prop_filter_map("zero form", move |coefs| {
        let t = terms.iter().zip(coefs).map(|(e, c)| (*e, BigInt::from(c))).collect();
        HomPoly3::from_int_terms(deg, t).ok().filter(|p| !p.is_zero())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative(f in small_map(), g in small_map(), h in small_map()) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn degree_is_submultiplicative_under_composition(f in small_map(), g in small_map()) {
        let fg = f.compose(&g).unwrap();
        prop_assert!(fg.degree() <= f.degree() * g.degree());
    }

    #[test]
    fn iterate_degrees_are_submultiplicative(f in small_map()) {
        let report = degree_sequence(&f, 5, None).unwrap();
        prop_assert!(report.is_submultiplicative());
    }

    #[test]
    fn modp_filter_never_changes_degrees(f in small_map()) {
        let plain = degree_sequence(&f, 5, None).unwrap();
        let filtered = degree_sequence(&f, 5, Some(1_000_003)).unwrap();
        prop_assert_eq!(plain.degrees, filtered.degrees);
    }

    #[test]
    fn inverse_composes_to_identity(f in small_map()) {
        let inv = f.invert(f.degree()).expect("degree-two maps have degree-two inverses");
        prop_assert!(inv.compose(&f).unwrap().is_identity());
        prop_assert!(f.compose(&inv).unwrap().is_identity());
    }

    #[test]
    fn map_json_round_trip(f in small_map()) {
        let back = PlaneBirationalMap::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn gcd_divides_and_leaves_coprime_cofactors(
        common in small_form(1), a in small_form(2), b in small_form(1)
    ) {
        let f = common.mul(&a);
        let g = common.mul(&b);
        let d = poly_gcd(&f, &g).unwrap();
        let fa = f.div_exact(&d);
        let gb = g.div_exact(&d);
        prop_assert!(fa.is_some() && gb.is_some());
        prop_assert!(d.div_exact(&common).is_some());
        prop_assert_eq!(poly_gcd(&fa.unwrap(), &gb.unwrap()).unwrap().deg(), 0);
    }

    #[test]
    fn substitution_is_multiplicative(p in small_form(1), q in small_form(2), s in small_form(2)) {
        let triple = [HomPoly3::var(0).mul(&HomPoly3::var(1)), HomPoly3::var(1).pow(2), HomPoly3::var(2).pow(2)];
        let t = (&triple[0], &triple[1], &triple[2]);
        let lhs = poly_compose3(&p.mul(&q), t).unwrap();
        let rhs = poly_compose3(&p, t).unwrap().mul(&poly_compose3(&q, t).unwrap());
        prop_assert_eq!(lhs, rhs);
        let sum = q.add(&s).unwrap();
        let lhs = poly_compose3(&sum, t).unwrap();
        let rhs = poly_compose3(&q, t).unwrap().add(&poly_compose3(&s, t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn golden_sequences() {
    let sigma = degree_sequence(&PlaneBirationalMap::standard_involution(), 6, None).unwrap();
    assert_eq!(sigma.degrees, vec![1, 2, 1, 2, 1, 2, 1]);
    assert_eq!(classify(&sigma).unwrap().class, GrowthClass::Elliptic);

    let henon = degree_sequence_with(&PlaneBirationalMap::henon_example(), 6, &DegreeOptions::default()).unwrap();
    assert_eq!(henon.degrees, (0..=6).map(|n| 1u64 << n).collect::<Vec<_>>());
    assert_eq!(classify(&henon).unwrap().class, GrowthClass::Loxodromic);

    let f1 = degree_sequence(&make_family_fa(&rat(1)), 8, None).unwrap();
    assert!(f1.degrees.iter().all(|&d| d <= 2), "{:?}", f1.degrees);
}

#[test]
fn family_degrees_drop_only_at_special_parameters() {
    // a generic parameter of large height realises the maximal degrees
    let generic = degree_sequence(&make_family_fa(&ratio(104_729, 7_919)), 6, None).unwrap();
    for a in
        [rat(1), rat(-1), rat(2), rat(-3), ratio(1, 2), ratio(1, 3), ratio(-2, 3), ratio(5, 7), rat(0), ratio(7, 4)]
    {
        let special = degree_sequence(&make_family_fa(&a), 6, None).unwrap();
        for n in 0..=6 {
            assert!(special.degrees[n] <= generic.degrees[n], "a = {a}, n = {n}");
        }
    }
}
