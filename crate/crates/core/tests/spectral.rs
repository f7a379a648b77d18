mod common;

use affconj::exact::product;
use affconj::spectral::{
    count_roots_on_unit_circle, cyclotomic, fitting_split, modulus_partition, root_of_unity_factor,
    similar, stratum_counts,
};
use affconj::{Field, GaussianRational, Matrix, Poly, QMatrix, Rational};
use common::{conjugate_by, jordan_sum, q, random_basis};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
enum Factor {
    Real(Rational),
    /// Conjugate pair `a ± bi`.
    Pair(Rational, Rational),
}

impl Factor {
    fn poly(&self) -> Poly<Rational> {
        match self {
            Factor::Real(r) => Poly::linear(r.clone()),
            Factor::Pair(a, b) => Poly::new(vec![
                a.clone() * a + &(b.clone() * b),
                -(a.clone() + a),
                q(1, 1),
            ]),
        }
    }

    /// Squared modulus compared with 1, and multiplicity in roots.
    fn stratum(&self) -> (Rational, usize) {
        match self {
            Factor::Real(r) => (r.clone() * r, 1),
            Factor::Pair(a, b) => (a.clone() * a + &(b.clone() * b), 2),
        }
    }
}

fn factor() -> impl Strategy<Value = Factor> {
    let r = (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d));
    prop_oneof![
        r.clone().prop_map(Factor::Real),
        (r.clone(), r.prop_filter("nonzero", |b| !b.is_zero()))
            .prop_map(|(a, b)| Factor::Pair(a, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn strata_match_known_roots(fs in prop::collection::vec(factor(), 1..=4)) {
        let p = product(fs.iter().map(Factor::poly));
        let one = q(1, 1);
        let (mut n0, mut n01, mut n1, mut n1inf) = (0, 0, 0, 0);
        for f in &fs {
            let (m2, k) = f.stratum();
            if m2.is_zero() { n0 += k } else if m2 < one { n01 += k } else if m2 == one { n1 += k } else { n1inf += k }
        }
        let part = modulus_partition(&p).unwrap();
        prop_assert_eq!((part.n0, part.n01, part.n1, part.n1inf), (n0, n01, n1, n1inf));
        let sq = p.square_free_part();
        let c = stratum_counts(&sq).unwrap();
        prop_assert_eq!(c.n0 + c.n01 + c.n1 + c.n1inf, sq.degree());
        prop_assert_eq!(count_roots_on_unit_circle(&sq).unwrap(), c.n1);
    }

    #[test]
    fn similarity_survives_base_change(seed in 0u64..1000, blocks in prop::collection::vec((-3i64..=3, 1usize..=2), 1..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks: Vec<(Rational, usize)> = blocks.into_iter().map(|(l, k)| (q(l, 2), k)).collect();
        let a = jordan_sum(&blocks);
        let n = a.rows();
        let b = conjugate_by(&a, &random_basis(&mut rng, n));
        prop_assert!(similar(&a, &b).unwrap());
        prop_assert!(similar(&b, &a).unwrap());
        let mut shifted = blocks.clone();
        shifted[0].0 = shifted[0].0.clone() + q(1, 3);
        prop_assert!(!similar(&a, &jordan_sum(&shifted)).unwrap());
    }

    #[test]
    fn fitting_split_reassembles(seed in 0u64..1000, n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = common::random_matrix(&mut rng, n);
        if n > 1 {
            for i in 0..n { a[(i, 0)] = q(0, 1); }
        }
        let s = fitting_split(&a).unwrap();
        let t = &s.transition;
        let block = s.nonsingular_part.direct_sum(&s.nilpotent_part);
        prop_assert_eq!(&a * t, t * &block);
        prop_assert!(s.nilpotent_part.is_nilpotent().unwrap());
        let k = s.nonsingular_part.rows();
        prop_assert!(k == 0 || s.nonsingular_part.rank() == k);
    }
}

#[test]
fn roots_of_unity_are_found() {
    for k in 1..=12u64 {
        let p = &cyclotomic(k) * &Poly::linear(q(3, 1));
        let (found, f) = root_of_unity_factor(&p, p.degree()).unwrap();
        assert_eq!(found, k);
        assert!(f.divides(&p));
    }
    let salem = Poly::new(vec![q(1, 1), q(-6, 5), q(1, 1)]);
    assert!(root_of_unity_factor(&salem, 2).is_none());
}

#[test]
fn gaussian_counts() {
    let g = |a: i64, b: i64| GaussianRational::new(q(a, 5), q(b, 5));
    let p = Poly::new(vec![-g(3, 4), GaussianRational::one()]);
    assert_eq!(stratum_counts(&p).unwrap().n1, 1);
    let p = &p * &Poly::new(vec![-g(0, 10), GaussianRational::one()]);
    let c = stratum_counts(&p).unwrap();
    assert_eq!((c.n1, c.n1inf), (1, 1));
}

#[test]
fn unit_similarity_of_rotations() {
    let r = QMatrix::from_rows(vec![vec![q(3, 5), q(-4, 5)], vec![q(4, 5), q(3, 5)]]).unwrap();
    let rt = r.transpose();
    assert!(similar(&r, &rt).unwrap());
    assert!(!similar(&r.direct_sum(&r), &r.direct_sum(&Matrix::identity(2))).unwrap());
}
