use std::collections::BTreeSet;

use proptest::prelude::*;

use dlv_symmetry::expr::{parse, Atom, Coord, Dep, Expr, Indep};
use dlv_symmetry::jet::{dt, dx, prolong2, total_derivative, VectorField};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-4i64..=4).prop_map(Expr::int),
        (1i64..=3, 2i64..=5).prop_map(|(n, d)| Expr::ratio(n, d)),
        prop::sample::select(vec!["t", "x", "u", "v", "w", "a1", "b", "lambda2"])
            .prop_map(|s| parse(s).unwrap()),
        (-2i64..=2, -1i64..=1).prop_map(|(k, m)| {
            let arg = &(&Expr::int(k) * &Expr::coord(Coord::T)) + &(&Expr::int(m) * &Expr::coord(Coord::X));
            Expr::exp(&arg).unwrap()
        }),
    ]
}

// exponentials are not allowed in denominators
fn divisor() -> impl Strategy<Value = Expr> {
    (
        prop::sample::select(vec!["t", "x", "u", "a1", "b", "u - v", "a1*w + 1"]),
        1i64..=3,
    )
        .prop_map(|(s, k)| &parse(s).unwrap().pow(2) + &Expr::int(k))
}

fn expr_with(leaf: BoxedStrategy<Expr>, allow_div: bool) -> impl Strategy<Value = Expr> {
    leaf.prop_recursive(3, 24, 2, move |inner| {
        let base = prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            inner.clone().prop_map(|a| a.pow(2)),
        ];
        if allow_div {
            prop_oneof![
                4 => base,
                1 => (inner, divisor()).prop_map(|(a, b)| a.checked_div(&b).unwrap()),
            ]
            .boxed()
        } else {
            base.boxed()
        }
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    expr_with(leaf().boxed(), true)
}

fn jet_leaf() -> BoxedStrategy<Expr> {
    prop_oneof![
        leaf(),
        prop::sample::select(vec!["u_x", "v_t", "w_x", "xi0", "eta1", "eta2_u"])
            .prop_map(|s| parse(s).unwrap()),
    ]
    .boxed()
}

fn poly_expr() -> impl Strategy<Value = Expr> {
    let l = prop_oneof![
        (-3i64..=3).prop_map(Expr::int),
        prop::sample::select(vec!["t", "x", "u", "v", "w", "a1"]).prop_map(|s| parse(s).unwrap()),
    ];
    expr_with(l.boxed(), false)
}

fn field() -> impl Strategy<Value = VectorField> {
    (poly_expr(), poly_expr(), poly_expr(), poly_expr(), poly_expr())
        .prop_map(|(a, b, c, d, e)| VectorField::new(a, b, [c, d, e]).unwrap())
}

fn jet_split() -> BTreeSet<Atom> {
    [Coord::U, Coord::V, Coord::W].into_iter().map(Atom::Coord).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let back = parse(&e.to_string()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn addition_is_commutative_and_associative(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn multiplication_distributes(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn inverses(a in expr()) {
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() && !a.has_exp() {
            prop_assert!(a.checked_div(&a).unwrap().is_one());
            prop_assert_eq!(&a * &a.recip().unwrap(), Expr::one());
        }
    }

    #[test]
    fn partial_derivatives_commute(e in expr()) {
        let t = Atom::Coord(Coord::T);
        let u = Atom::Coord(Coord::U);
        prop_assert_eq!(e.diff(&t).diff(&u), e.diff(&u).diff(&t));
    }

    #[test]
    fn product_rule(a in expr(), b in expr()) {
        let x = Atom::Coord(Coord::X);
        prop_assert_eq!((&a * &b).diff(&x), &(&a.diff(&x) * &b) + &(&a * &b.diff(&x)));
    }

    #[test]
    fn collect_recombine_round_trip(
        e in expr_with(leaf().boxed(), false),
        d in prop::sample::select(vec!["1", "a1^2 + 1", "t - x + 3", "b*lambda2"]),
    ) {
        // the denominator may not involve the split atoms
        let e = e.checked_div(&parse(d).unwrap()).unwrap();
        let parts = e.collect(&jet_split()).unwrap();
        prop_assert_eq!(Expr::recombine(&parts), e);
    }

    #[test]
    fn total_derivatives_commute(e in expr_with(jet_leaf(), true)) {
        let a = dt(&dx(&e).unwrap());
        let b = dx(&dt(&e).unwrap());
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn total_derivative_of_base_function(e in poly_expr()) {
        // on functions of (t, x) alone the total derivative is the partial one
        let only_tx = e
            .substitute_one(&Atom::Coord(Coord::U), &Expr::int(2))
            .and_then(|e| e.substitute_one(&Atom::Coord(Coord::V), &Expr::int(3)))
            .and_then(|e| e.substitute_one(&Atom::Coord(Coord::W), &Expr::int(-1)))
            .unwrap();
        prop_assert_eq!(
            total_derivative(&only_tx, Indep::T).unwrap(),
            only_tx.diff(&Atom::Coord(Coord::T))
        );
    }

    #[test]
    fn prolongation_is_linear(p in field(), q in field(), k in -3i64..=3) {
        let sum = prolong2(&p.add(&q)).unwrap();
        let pp = prolong2(&p).unwrap();
        let pq = prolong2(&q).unwrap();
        for d in Dep::ALL {
            for j in dlv_symmetry::expr::JetIndex::ALL {
                prop_assert_eq!(sum.sigma(d, j), &(pp.sigma(d, j) + pq.sigma(d, j)));
            }
        }
        let c = Expr::int(k);
        let scaled = prolong2(&p.scale(&c)).unwrap();
        for d in Dep::ALL {
            for j in dlv_symmetry::expr::JetIndex::ALL {
                prop_assert_eq!(scaled.sigma(d, j), &(&c * pp.sigma(d, j)));
            }
        }
    }
}
