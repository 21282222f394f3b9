use proptest::prelude::*;

use hilbert_core::interp;
use hilbert_core::interval::Interval;
use hilbert_core::pointideal::{vanishing_basis, Mode, PointSet};
use hilbert_core::rational::{int, rat};
use hilbert_core::upoly::UPoly;
use hilbert_core::{Monomial, Poly, Rational};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    let monos = Monomial::all_up_to_degree(nvars, max_deg);
    let k = monos.len();
    proptest::collection::vec(small_rational(), k).prop_map(move |cs| {
        let mut p = Poly::zero(nvars);
        for (m, c) in monos.iter().zip(cs) {
            p.add_term(m.clone(), c);
        }
        p
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly(3, 2), b in poly(3, 2), c in poly(3, 1)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3, 2), b in poly(3, 2), pt in point(3)) {
        let ea = a.evaluate(&pt).unwrap();
        let eb = b.evaluate(&pt).unwrap();
        prop_assert_eq!((&a * &b).evaluate(&pt).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&pt).unwrap(), ea + eb);
    }

    #[test]
    fn text_round_trip(a in poly(3, 3)) {
        prop_assert_eq!(Poly::parse(&a.to_text(&NAMES), &NAMES).unwrap(), a);
    }

    #[test]
    fn json_round_trip(a in poly(3, 3)) {
        let json = serde_json::to_string(&a.to_json(&NAMES)).unwrap();
        let back = Poly::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn homogenize_then_dehomogenize(a in poly(2, 3)) {
        let h = a.homogenize(4, 2).unwrap();
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.dehomogenize(2).unwrap(), a);
    }

    #[test]
    fn square_root_of_square(a in poly(3, 2)) {
        let sq = &a * &a;
        let r = sq.sqrt().unwrap();
        prop_assert!(r == a || r == -&a);
    }

    #[test]
    fn sturm_counts_planted_roots(mut roots in proptest::collection::btree_set(-20i64..=20, 1..6)) {
        let mut p = UPoly::from_ints(&[1]);
        for &r in &roots {
            p = p.mul(&UPoly::linear_root(&int(r)));
        }
        // an extra factor with no real roots
        p = p.mul(&UPoly::from_ints(&[1, 0, 1]));
        let found: Vec<Rational> = p.real_roots().iter_mut().map(|r| r.as_rational().unwrap()).collect();
        let want: Vec<Rational> = std::mem::take(&mut roots).into_iter().map(int).collect();
        prop_assert_eq!(found, want);
    }

    #[test]
    fn interval_product_encloses(a in small_rational(), b in small_rational(), w in 0i64..4) {
        let ia = Interval::new(&a - rat(w, 3), &a + rat(w, 3));
        let ib = Interval::new(&b - rat(w, 7), &b + rat(w, 7));
        prop_assert!(ia.mul(&ib).contains(&(&a * &b)));
        prop_assert!(ia.sub(&ib).contains(&(&a - &b)));
    }

    #[test]
    fn interpolation_reproduces(a in poly(2, 3)) {
        prop_assert_eq!(interp::interpolate(&a, 3).unwrap(), a);
    }

    #[test]
    fn vanishing_basis_vanishes(pts in proptest::collection::btree_set((-3i64..=3, -3i64..=3), 3..8)) {
        let rows: Vec<Vec<i64>> = pts.iter().map(|&(x, y)| vec![x, y]).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = PointSet::from_ints(Mode::Affine, &refs).unwrap();
        let b = vanishing_basis(&a, 3, 1).unwrap();
        prop_assert!(b.dim() as i64 >= 10 - pts.len() as i64);
        for f in &b.basis {
            for p in a.points() {
                prop_assert_eq!(f.evaluate(p).unwrap(), int(0));
            }
        }
        let singular = vanishing_basis(&a, 3, 2).unwrap();
        for f in &singular.basis {
            for p in a.points() {
                prop_assert!(f.is_singular_at(p).unwrap());
            }
        }
    }
}
