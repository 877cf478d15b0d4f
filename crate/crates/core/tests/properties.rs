use std::sync::Arc;

use bicotwist::hopf::elem;
use bicotwist::twist::xi;
use bicotwist::{
    build_bimodule, builtin, convolution, convolution_inverse, twist_bimodule, verify_cocycle, Cyclotomic, Element,
    FiniteGroup, Functional2, HopfAlgebra, Matrix, BUILTINS,
};
use num_traits::Zero;
use proptest::prelude::*;

const ORDERS: [u32; 6] = [1, 3, 4, 5, 8, 12];

/// `sum_k c_k z_N^k` with small rational `c_k`.
fn cyclotomic(order: u32) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((-4i64..=4, 1i64..=3), order as usize).prop_map(move |cs| {
        let mut acc = Cyclotomic::zero();
        for (k, (p, q)) in cs.into_iter().enumerate() {
            if p != 0 {
                let c = Cyclotomic::from_ratio(p, q).unwrap();
                acc += &(&c * &Cyclotomic::root_of_unity(order, k as i64).unwrap());
            }
        }
        acc
    })
}

fn any_order() -> impl Strategy<Value = u32> {
    prop::sample::select(ORDERS.to_vec())
}

fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    any_order().prop_flat_map(|n| (cyclotomic(n), cyclotomic(n), cyclotomic(n)))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        Matrix::from_fn(rows, cols, |i, j| Cyclotomic::from_int(v[i * cols + j]))
    })
}

fn z4_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(cyclotomic(4), rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| v[i * cols + j].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, Cyclotomic::zero());
        prop_assert_eq!(&a + &(-&a), Cyclotomic::zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!((&b * &a).checked_div(&a).unwrap(), b.clone());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn embedding_is_a_ring_map(a in cyclotomic(4), b in cyclotomic(4)) {
        let ea = a.embed(12).unwrap();
        let eb = b.embed(12).unwrap();
        prop_assert_eq!((&a * &b).embed(12).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).embed(12).unwrap(), &ea + &eb);
        // equality does not depend on the ambient field
        prop_assert_eq!(&ea, &a);
    }

    #[test]
    fn powers_of_roots(n in any_order(), k in -30i64..30, j in -30i64..30) {
        let z = Cyclotomic::root_of_unity(n, 1).unwrap();
        let lhs = &z.pow(k).unwrap() * &z.pow(j).unwrap();
        prop_assert_eq!(lhs, z.pow(k + j).unwrap());
        prop_assert!(z.pow(n as i64).unwrap().is_one());
    }

    #[test]
    fn rank_nullity(a in matrix(4, 6)) {
        let k = a.kernel();
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
        prop_assert!(a.matmul(&k).unwrap().is_zero());
        if k.cols() > 0 {
            prop_assert_eq!(k.rank(), k.cols());
        }
    }

    #[test]
    fn inverse_round_trip(a in z4_matrix(3, 3)) {
        match a.inverse() {
            Ok(inv) => {
                prop_assert!(a.matmul(&inv).unwrap().is_identity());
                prop_assert!(inv.matmul(&a).unwrap().is_identity());
                prop_assert_eq!(a.rank(), 3);
            }
            Err(_) => prop_assert!(a.rank() < 3),
        }
    }

    #[test]
    fn solve_returns_a_witness(a in matrix(3, 4), b in matrix(3, 2)) {
        match a.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(a.matmul(&x).unwrap(), b),
            None => {
                // inconsistent: appending b raises the rank
                let mut cols: Vec<Vec<Cyclotomic>> = (0..4).map(|j| a.column(j)).collect();
                cols.extend((0..2).map(|j| b.column(j)));
                prop_assert!(Matrix::from_columns(3, &cols).unwrap().rank() > a.rank());
            }
        }
    }

    #[test]
    fn transpose_reverses_products(a in z4_matrix(2, 3), b in z4_matrix(3, 2)) {
        let ab = a.matmul(&b).unwrap();
        prop_assert_eq!(ab.transpose(), b.transpose().matmul(&a.transpose()).unwrap());
    }
}

fn host(name: &str) -> Arc<HopfAlgebra> {
    let g = FiniteGroup::named(name).unwrap();
    Arc::new(HopfAlgebra::function_algebra(&g, 4).unwrap())
}

fn functional(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2i64..=2, n * n).prop_map(move |v| Matrix::from_fn(n, n, |i, j| Cyclotomic::from_int(v[i * n + j])))
}

fn element(n: usize) -> impl Strategy<Value = Element> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(Cyclotomic::from_int).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_is_associative_and_unital(p in functional(4), q in functional(4), r in functional(4)) {
        let h = host("Z2xZ2");
        let (p, q, r) = (
            Functional2::new(&h, p).unwrap(),
            Functional2::new(&h, q).unwrap(),
            Functional2::new(&h, r).unwrap(),
        );
        let lhs = convolution(&h, &convolution(&h, &p, &q).unwrap(), &r).unwrap();
        let rhs = convolution(&h, &p, &convolution(&h, &q, &r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let e = Functional2::counit(&h);
        prop_assert_eq!(convolution(&h, &e, &p).unwrap(), p.clone());
        prop_assert_eq!(convolution(&h, &p, &e).unwrap(), p.clone());
        if let Ok(pinv) = convolution_inverse(&h, &p) {
            prop_assert_eq!(convolution(&h, &p, &pinv).unwrap(), e.clone());
            prop_assert_eq!(convolution(&h, &pinv, &p).unwrap(), e);
        }
    }

    #[test]
    fn antipode_reverses_products_and_coproducts(a in element(6), b in element(6), fun in any::<bool>()) {
        let g = FiniteGroup::symmetric3();
        let h = if fun { HopfAlgebra::function_algebra(&g, 1) } else { HopfAlgebra::group_algebra(&g, 1) }.unwrap();
        prop_assert_eq!(h.antipode(&h.mul(&a, &b)), h.mul(&h.antipode(&b), &h.antipode(&a)));
        // Delta S = (S (x) S) flip Delta
        let n = h.dim();
        let lhs = h.comul(&h.antipode(&a));
        let d = h.comul(&a);
        let mut rhs = elem::zero(n * n);
        for i in 0..n {
            for j in 0..n {
                let c = &d[j * n + i];
                if c.is_zero() {
                    continue;
                }
                let si = h.antipode(&h.basis(i));
                let sj = h.antipode(&h.basis(j));
                for (x, cx) in si.iter().enumerate() {
                    for (y, cy) in sj.iter().enumerate() {
                        rhs[x * n + y] += &(&(c * cx) * cy);
                    }
                }
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_forms_round_trip(fixture in prop::sample::select(BUILTINS.to_vec()), seed in any::<u64>()) {
        let inst = builtin(fixture).unwrap().build().unwrap();
        let m = build_bimodule(&inst.yd).unwrap();
        let dim = m.dim();
        let v: Vec<Cyclotomic> = (0..dim).map(|p| Cyclotomic::from_int(((seed >> (p % 60)) & 3) as i64 - 1)).collect();
        let x = m.normal_form(&v).unwrap();
        prop_assert_eq!(m.to_presentation(&x), v);
        let left = m.left_coeffs(&x).unwrap();
        prop_assert_eq!(m.from_left_coeffs(&left), x);
    }
}

#[test]
fn xi_round_trips_on_random_elements() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    for name in BUILTINS {
        let inst = builtin(name).unwrap().build().unwrap();
        let c = verify_cocycle(&inst.host, &inst.gamma).unwrap();
        let m = build_bimodule(&inst.yd).unwrap();
        let mg = twist_bimodule(&m, &c).unwrap();
        let x = xi(&m, &mg, &c).unwrap();
        let p2 = x.forward.cols();
        for _ in 0..20 {
            let v: Vec<Cyclotomic> = (0..p2).map(|_| Cyclotomic::from_int(rng.gen_range(-3..=3))).collect();
            let there = x.forward.apply(&v).unwrap();
            assert_eq!(x.inverse.apply(&there).unwrap(), v, "{name}");
            let back = x.inverse.apply(&v).unwrap();
            assert_eq!(x.forward.apply(&back).unwrap(), v, "{name}");
        }
    }
}

#[test]
fn convolution_inverse_of_the_unit() {
    let h = host("Z2");
    let e = Functional2::counit(&h);
    assert_eq!(convolution_inverse(&h, &e).unwrap(), e);
}
