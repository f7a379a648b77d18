mod common;

use affconj::{mat_poly_eval, Matrix, QMatrix, Rational};
use common::q;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec((-9i64..=9, 1i64..=5), n * n).prop_map(move |v| {
        Matrix::new(n, n, v.into_iter().map(|(a, b)| q(a, b)).collect()).unwrap()
    })
}

fn sized() -> impl Strategy<Value = (QMatrix, QMatrix)> {
    (1usize..=4).prop_flat_map(|n| (matrix(n), matrix(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_is_multiplicative((a, b) in sized()) {
        let ab = &a * &b;
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn rank_and_kernel((a, _) in sized()) {
        let n = a.rows();
        prop_assert_eq!(a.rank(), a.transpose().rank());
        let k = a.kernel_basis();
        prop_assert_eq!(k.len() + a.rank(), n);
        for v in &k {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|x| *x == q(0, 1)));
        }
        prop_assert_eq!(a.column_space_basis().len(), a.rank());
    }

    #[test]
    fn orthogonal_basis_spans_the_column_space((a, _) in sized()) {
        let basis = a.orthogonal_column_basis();
        prop_assert_eq!(basis.len(), a.rank());
        for (i, u) in basis.iter().enumerate() {
            prop_assert!(u.iter().any(|x| *x == q(1, 1)));
            prop_assert!(u.iter().all(|x| *x <= q(1, 1) && *x >= q(-1, 1)));
            for v in &basis[i + 1..] {
                let dot = u.iter().zip(v).fold(q(0, 1), |acc, (x, y)| acc + x * y);
                prop_assert_eq!(dot, q(0, 1));
            }
        }
        let mut cols: Vec<Vec<Rational>> = (0..a.cols()).map(|j| a.column(j)).collect();
        cols.extend(basis);
        prop_assert_eq!(Matrix::from_columns(a.rows(), &cols).rank(), a.rank());
    }

    #[test]
    fn inverse_and_solve((a, b) in sized()) {
        let n = a.rows();
        let rhs = b.column(0);
        match a.inverse() {
            Ok(inv) => {
                prop_assert_eq!(&a * &inv, Matrix::identity(n));
                let x = a.solve(&rhs).unwrap().unwrap();
                prop_assert_eq!(a.mul_vec(&x).unwrap(), rhs);
            }
            Err(_) => prop_assert_eq!(a.determinant().unwrap(), q(0, 1)),
        }
    }

    #[test]
    fn cayley_hamilton((a, _) in sized()) {
        let p = a.charpoly().unwrap();
        prop_assert_eq!(p.degree(), a.rows());
        prop_assert!(mat_poly_eval(&p, &a).unwrap().is_zero());
        prop_assert_eq!(p.coeff(0).clone() * Rational::from_integer(if a.rows() % 2 == 0 { 1 } else { -1 }.into()), a.determinant().unwrap());
    }

    #[test]
    fn charpoly_is_a_similarity_invariant((a, s) in sized()) {
        prop_assume!(s.rank() == s.rows());
        let b = &(&s.inverse().unwrap() * &a) * &s;
        prop_assert_eq!(a.charpoly().unwrap(), b.charpoly().unwrap());
        prop_assert_eq!(a.trace(), b.trace());
    }
}

#[test]
fn operator_json_and_base_change() {
    let f: affconj::AffineOperator<Rational> = serde_json::from_str(
        r#"{"A":{"field":"Q","rows":[["1/2","-3"],["0","1"]]},"b":["1","0"]}"#,
    )
    .unwrap();
    let s = QMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
    let g = f.change_basis(&s).unwrap();
    let x = vec![q(2, 3), q(-1, 1)];
    let sx = s.mul_vec(&x).unwrap();
    assert_eq!(
        f.apply(&sx).unwrap(),
        s.mul_vec(&g.apply(&x).unwrap()).unwrap()
    );
    let text = serde_json::to_string(&f).unwrap();
    assert_eq!(
        serde_json::from_str::<affconj::AffineOperator<Rational>>(&text).unwrap(),
        f
    );
}
