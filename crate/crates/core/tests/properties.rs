//! Algebraic invariants checked on random inputs.

use cayley_core::catalog::classical::{cayley_inverse, cayley_transform, random_form, Involution, MatrixAlg};
use cayley_core::field::{QuadExt, QuadField, Rational};
use cayley_core::picard::{galois_map, inter, LatticeMap, PicClass};
use cayley_core::poly::{ratfunc_equal, Limits, RatFunc, SparsePoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: [i64; 3] = [-3, -1, 2];

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::frac(n, d))
}

fn element(d: i64) -> impl Strategy<Value = QuadExt> {
    let field = QuadField::new(d).unwrap();
    (rational(), rational()).prop_map(move |(a, b)| field.element(a, b))
}

fn triple() -> impl Strategy<Value = (QuadExt, QuadExt, QuadExt)> {
    prop::sample::select(FIELDS.to_vec()).prop_flat_map(|d| (element(d), element(d), element(d)))
}

/// Polynomials in three variables with small coefficients in ℚ(√−3).
fn poly() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0u16..3, 0u16..3, 0u16..3), element(-3)), 0..5)
        .prop_map(|terms| terms.into_iter().fold(SparsePoly::zero(3), |acc, ((i, j, k), c)| &acc + &SparsePoly::monomial(3, &[i, j, k], c)))
}

fn point() -> impl Strategy<Value = Vec<QuadExt>> {
    prop::collection::vec(element(-3), 3)
}

proptest! {
    #[test]
    fn field_ring_axioms((x, y, z) in triple()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn norm_is_multiplicative_and_conjugation_is_a_ring_automorphism((x, y, _) in triple()) {
        prop_assert_eq!((&x * &y).norm(), &x.norm() * &y.norm());
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
        prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!(&x * &x.conjugate(), QuadExt::rational(x.norm()));
    }

    #[test]
    fn display_round_trips((x, _, _) in triple()) {
        prop_assert_eq!(x.to_string().parse::<QuadExt>().unwrap(), x);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), pt in point()) {
        let (ep, eq) = (p.eval(&pt).unwrap(), q.eval(&pt).unwrap());
        prop_assert_eq!((&p + &q).eval(&pt).unwrap(), &ep + &eq);
        prop_assert_eq!((&p * &q).eval(&pt).unwrap(), &ep * &eq);
        prop_assert_eq!(p.conjugate_coeffs().eval(&pt.iter().map(QuadExt::conjugate).collect::<Vec<_>>()).unwrap(), ep.conjugate());
    }

    #[test]
    fn derivative_obeys_leibniz(p in poly(), q in poly(), var in 0usize..3) {
        let lhs = (&p * &q).derivative(var);
        let rhs = &(&p.derivative(var) * &q) + &(&p * &q.derivative(var));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ratfunc_cancellation_is_an_identity(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        let f = RatFunc::from_poly(p.clone());
        let g = RatFunc::new(&p * &q, q).unwrap();
        prop_assert!(ratfunc_equal(&f, &g, &Limits::default()).unwrap());
        let shifted = &g + &RatFunc::one(3);
        prop_assert!(!ratfunc_equal(&f, &shifted, &Limits::default()).unwrap());
    }

    #[test]
    fn unitary_cayley_round_trip(seed in any::<u64>(), d in prop::sample::select(vec![-3i64, -1]), n in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = QuadField::new(d).unwrap();
        let alg = MatrixAlg::new(Involution::Hermitian(random_form(&mut rng, n, field, true)), field).unwrap();
        let a = alg.random_group_point(&mut rng);
        let x = cayley_transform(&alg, &a).unwrap();
        prop_assert!((&alg.iota(&x) + &x).is_zero());
        prop_assert_eq!(cayley_inverse(&alg, &x).unwrap(), a);
    }

    #[test]
    fn lattice_maps_preserve_intersections(u in prop::array::uniform4(-5i64..5), v in prop::array::uniform4(-5i64..5), p in Just([0usize, 1, 2]).prop_shuffle()) {
        let (u, v) = (PicClass(u), PicClass(v));
        for m in [galois_map(), LatticeMap::permutation("p", p)] {
            prop_assert_eq!(inter(m.apply(u), m.apply(v)), inter(u, v));
        }
        prop_assert_eq!(galois_map().apply(galois_map().apply(u)), u);
    }
}
