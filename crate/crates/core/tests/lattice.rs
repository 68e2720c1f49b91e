use cremona_core::exactalg::{minimal_preimage, smith_normal_form, QMatrix, ZMatrix};
use cremona_core::halphen::*;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn diff(i: usize, j: usize) -> NSVector {
    NSVector::basis(i).checked_sub(&NSVector::basis(j)).unwrap()
}

/// Rational `w` with `w0 = 0` and `w . xi = 0`.
fn admissible(nums: &[i64], den: i64) -> RationalClass {
    let mut w: RationalClass = std::array::from_fn(|_| BigRational::zero());
    for (i, &n) in nums.iter().enumerate() {
        w[i + 1] = r(n, den);
    }
    let s: BigRational = w[1..RANK - 1].iter().sum();
    w[RANK - 1] = -s;
    w
}

/// Vector orthogonal to xi with small entries, built from differences e_i - e_j.
fn small_translation(pairs: &[(usize, usize)]) -> NSVector {
    pairs
        .iter()
        .filter(|(i, j)| i != j)
        .fold(NSVector::zero(), |acc, &(i, j)| acc.checked_add(&diff(i + 1, j + 1)).unwrap())
}

#[derive(Clone, Debug)]
enum Letter {
    Quadratic(usize, usize, usize),
    Swap(usize, usize),
    Translate(usize, usize),
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        prop::sample::subsequence((1..RANK).collect::<Vec<_>>(), 3).prop_map(|v| Letter::Quadratic(v[0], v[1], v[2])),
        (0..9usize, 0..9usize).prop_map(|(i, j)| Letter::Swap(i, j)),
        (0..9usize, 0..9usize).prop_filter("distinct", |(i, j)| i != j).prop_map(|(i, j)| Letter::Translate(i, j)),
    ]
}

fn realize(word: &[Letter]) -> NSIsometry {
    word.iter().fold(NSIsometry::identity(), |acc, l| {
        let m = match *l {
            Letter::Quadratic(i, j, k) => NSIsometry::quadratic(i, j, k).unwrap(),
            Letter::Swap(i, j) => {
                let mut p: Vec<usize> = (0..9).collect();
                p.swap(i, j);
                NSIsometry::permutation(&p).unwrap()
            }
            Letter::Translate(i, j) => NSIsometry::translation(&diff(i + 1, j + 1)).unwrap(),
        };
        acc.compose(&m).unwrap()
    })
}

fn zmatrix(rows: usize, cols: usize, entries: &[i64]) -> ZMatrix {
    ZMatrix::from_i64_rows(&entries.chunks(cols).take(rows).map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn box_points(dim: usize, bound: i64) -> impl Iterator<Item = Vec<BigInt>> {
    (0..dim).map(|_| -bound..=bound).multi_cartesian_product().map(|v| v.into_iter().map(BigInt::from).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn horosphere_points_have_unit_square(nums in prop::collection::vec(-30i64..=30, 8), den in 1i64..=12) {
        let u = horosphere_point(&admissible(&nums, den)).unwrap();
        prop_assert_eq!(rational_intersection(&u, &u), BigRational::one());
        prop_assert_eq!(rational_intersection(&u, &NSVector::xi().to_rational()), r(3, 1));
    }

    #[test]
    fn quotient_norm_ignores_xi_shifts(
        a in prop::collection::vec(-9i64..=9, 8), b in prop::collection::vec(-9i64..=9, 8), k in -5i64..=5
    ) {
        let u = horosphere_point(&admissible(&a, 3)).unwrap();
        let v = horosphere_point(&admissible(&b, 2)).unwrap();
        let xi = NSVector::xi().to_rational();
        let shifted: RationalClass = std::array::from_fn(|i| &u[i] + &xi[i] * r(k, 1));
        let base = q_norm(&u, &v).unwrap();
        prop_assert_eq!(q_norm(&shifted, &v).unwrap(), base.clone());
        prop_assert!(!base.is_negative());
        prop_assert_eq!(q_norm(&v, &u).unwrap(), base);
    }

    #[test]
    fn translations_add(
        p in prop::collection::vec((0..9usize, 0..9usize), 1..3),
        q in prop::collection::vec((0..9usize, 0..9usize), 1..3),
        alpha in prop::array::uniform10(-3i64..=3)
    ) {
        let a = small_translation(&p);
        let b = small_translation(&q);
        let model = HalphenModel::trivial(1).unwrap();
        let alpha = NSVector(alpha);
        let two_steps = translation_action(&a, &translation_action(&b, &alpha, &model).unwrap(), &model).unwrap();
        let one_step = translation_action(&a.checked_add(&b).unwrap(), &alpha, &model).unwrap();
        prop_assert_eq!(two_steps, one_step);
        let composed = NSIsometry::translation(&a).unwrap().compose(&NSIsometry::translation(&b).unwrap()).unwrap();
        prop_assert_eq!(composed, NSIsometry::translation(&a.checked_add(&b).unwrap()).unwrap());
    }

    #[test]
    fn degree_identity_on_words(word in prop::collection::vec(letter(), 0..6)) {
        let m = realize(&word);
        prop_assert!(m.preserves_form());
        prop_assert!(is_parabolic_isometry(&m));
        prop_assert!(verify_degree_identity(&m, &HalphenModel::trivial(1).unwrap()).unwrap());
        prop_assert_eq!(m.compose(&m.inverse().unwrap()).unwrap(), NSIsometry::identity());
    }

    #[test]
    fn smith_form_is_a_unimodular_diagonalisation(
        rows in 1usize..=4, cols in 1usize..=4, entries in prop::collection::vec(-6i64..=6, 16)
    ) {
        let m = zmatrix(rows, cols, &entries);
        let (u, s, v) = smith_normal_form(&m);
        prop_assert_eq!(u.mul(&m).mul(&v), s.clone());
        prop_assert!(u.determinant().abs().is_one());
        prop_assert!(v.determinant().abs().is_one());
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| s.get(i, i).clone()).collect();
        for i in 0..rows {
            for j in 0..cols {
                prop_assert!(i == j || s.get(i, j).is_zero());
            }
        }
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn minimal_preimage_agrees_with_box_search(
        rows in 1usize..=3, cols in 1usize..=3,
        entries in prop::collection::vec(-3i64..=3, 9), target in prop::collection::vec(-4i64..=4, 3)
    ) {
        let phi = zmatrix(rows, cols, &entries);
        let v: Vec<BigInt> = target[..rows].iter().map(|&x| BigInt::from(x)).collect();
        let found = minimal_preimage(&phi, &v, &QMatrix::identity(cols));
        let brute = box_points(cols, 4).find(|x| phi.mul_vec(x) == v);
        match (&found, &brute) {
            (Some(x), _) => prop_assert_eq!(phi.mul_vec(x), v),
            (None, Some(x)) => prop_assert!(false, "box search found {:?}", x),
            (None, None) => {}
        }
    }

    #[test]
    fn conjugacy_translation_solver_agrees_with_box_search(
        n in 1usize..=4, entries in prop::collection::vec(-2i64..=2, 16), target in prop::collection::vec(-3i64..=3, 4)
    ) {
        let l = zmatrix(n, n, &entries);
        let s_prime: Vec<BigInt> = target[..n].iter().map(|&x| BigInt::from(x)).collect();
        let mut shifted = l.clone();
        for i in 0..n {
            shifted.set(i, i, shifted.get(i, i) - 1);
        }
        let solution = solve_conjugacy_translation(&l, &s_prime).unwrap();
        let bound = if n <= 3 { 4 } else { 3 };
        let brute = box_points(n, bound).find(|x| shifted.mul_vec(x) == s_prime);
        match (&solution, &brute) {
            (Some(sol), _) => {
                prop_assert_eq!(shifted.mul_vec(&sol.solution), s_prime.clone());
                prop_assert!(sol.within_bound(&s_prime));
            }
            (None, Some(x)) => prop_assert!(false, "box search found {:?}", x),
            (None, None) => {}
        }
    }

    #[test]
    fn irreducible_candidates_are_permutation_invariant(perm in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle()) {
        let p = NSIsometry::permutation(&perm).unwrap();
        let set: BTreeSet<[i64; RANK]> = enumerate_irr_candidates(1, 3).unwrap().iter().map(|v| *v.coords()).collect();
        let moved: BTreeSet<[i64; RANK]> = set.iter().map(|c| *p.apply(&NSVector(*c)).unwrap().coords()).collect();
        prop_assert_eq!(set, moved);
    }
}

#[test]
fn root_classes_match_box_search() {
    let fast: BTreeSet<[i64; RANK]> = roots_modulo_xi().iter().map(|v| *v.coords()).collect();
    let brute: BTreeSet<[i64; RANK]> = roots_modulo_xi_by_box().iter().map(|v| *v.coords()).collect();
    assert_eq!(fast.len(), 240);
    assert_eq!(fast, brute);
    assert!(fast.iter().all(|c| {
        let v = NSVector(*c);
        intersection(&v, &v) == -2 && intersection(&v, &NSVector::xi()) == 0
    }));
}

#[test]
fn conjugacy_round_trip_with_degree_bound() {
    let model = HalphenModel::trivial(1).unwrap();
    let rotate: Vec<usize> = vec![1, 2, 0, 3, 4, 5, 6, 7, 8];
    let lambda = NSIsometry::permutation(&rotate).unwrap();
    let candidates: Vec<NSIsometry> =
        [vec![0, 1, 2, 3, 4, 5, 6, 7, 8], vec![1, 0, 2, 3, 4, 5, 6, 7, 8], rotate.clone()]
            .iter()
            .map(|p| NSIsometry::permutation(p).unwrap())
            .collect();
    for (f_pairs, delta_pairs) in
        [(vec![(0, 3)], vec![(4, 5)]), (vec![(0, 1), (2, 6)], vec![(3, 7), (4, 8)]), (vec![(5, 6)], vec![(0, 8)])]
    {
        let f = NSIsometry::translation(&small_translation(&f_pairs)).unwrap();
        let h0 = NSIsometry::translation(&small_translation(&delta_pairs)).unwrap().compose(&lambda).unwrap();
        let g = h0.compose(&f).unwrap().compose(&h0.inverse().unwrap()).unwrap();
        let result = conjugacy_search(&f, &g, &model, candidates.clone()).unwrap();
        let h = result.conjugator.expect("constructed pair is conjugate");
        assert_eq!(h.compose(&f).unwrap().compose(&h.inverse().unwrap()).unwrap(), g);
        let total = (isometry_degree(&f) + isometry_degree(&g)) as f64;
        assert!(isometry_degree(&h) as f64 <= result.degree_constant.unwrap() * total);
    }
}
