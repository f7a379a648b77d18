mod common;

use affconj::exact::{poly_gcd, squarefree_decompose};
use affconj::{Field, GaussianRational, Poly, Rational};
use common::q;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(a, b)| GaussianRational::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_identity(a in poly(7), b in poly(4)) {
        prop_assume!(!b.is_zero());
        let (quot, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&quot * &b) + &rem, a);
        prop_assert!(rem.is_zero() || rem.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_and_scales(a in poly(4), b in poly(4), c in poly(2)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let g = poly_gcd(&a, &b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        let gc = poly_gcd(&(&a * &c), &(&b * &c));
        prop_assert_eq!(gc, (&g * &c).monic());
    }

    #[test]
    fn squarefree_layers_rebuild(a in poly(3), b in poly(2)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let p = &(&a * &b) * &b;
        let layers = squarefree_decompose(&p).unwrap();
        let rebuilt = layers.iter().fold(Poly::one(), |acc, (f, m)| &acc * &f.pow(*m));
        prop_assert_eq!(rebuilt, p.monic());
        for (f, _) in &layers {
            prop_assert_eq!(f.square_free_part(), f.monic());
        }
    }

    #[test]
    fn rational_text_round_trip(x in rational()) {
        prop_assert_eq!(Rational::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn gaussian_field_laws(z in gaussian(), w in gaussian()) {
        prop_assume!(!w.is_zero());
        prop_assert_eq!((z.clone() * &w) / &w, z.clone());
        prop_assert_eq!((z.clone() * &w).conj(), z.conj() * w.conj());
        prop_assert_eq!(GaussianRational::parse(&z.to_string()).unwrap(), z);
    }

    #[test]
    fn composition_evaluates(a in poly(3), b in poly(3), x in rational()) {
        prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
    }
}

#[test]
fn parse_forms() {
    assert_eq!(Rational::parse("-6/4").unwrap(), q(-3, 2));
    assert_eq!(Rational::parse("0.25").unwrap(), q(1, 4));
    assert!(Rational::parse("1/0").is_err());
    let z = GaussianRational::parse("3/5+4/5i").unwrap();
    assert_eq!(z, GaussianRational::new(q(3, 5), q(4, 5)));
    assert_eq!(
        GaussianRational::parse("-i").unwrap(),
        GaussianRational::new(q(0, 1), q(-1, 1))
    );
}
