use std::collections::BTreeMap;

use multinorm::abgroup::{
    cokernel, dual_group, elem, smith_diagonal, snf, wedge_square, AbSubgroup, FinAbGroup, IntMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn matrix_strategy(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-50i64..=50, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn group_strategy(max_order: u64) -> impl Strategy<Value = FinAbGroup> {
    proptest::collection::vec(1u64..=16, 0..=4).prop_filter_map("order bound", move |orders| {
        let g = FinAbGroup::from_cyclic_orders(&orders.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>());
        (g.order() <= BigInt::from(max_order)).then_some(g)
    })
}

/// Random unimodular matrix from elementary operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for &(i, j, q) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            // Swap with the next row instead of a no-op.
            let k = (i + 1) % n;
            let mut t = m.clone();
            for c in 0..n {
                t.set(i, c, m.get(k, c).clone());
                t.set(k, c, m.get(i, c).clone());
            }
            m = t;
        } else {
            for c in 0..n {
                let v = m.get(i, c) + BigInt::from(q) * m.get(j, c);
                m.set(i, c, v);
            }
        }
    }
    m
}

/// Multiset of element orders, which determines a finite abelian group.
fn order_histogram(g: &FinAbGroup) -> BTreeMap<BigInt, usize> {
    let mut h = BTreeMap::new();
    for x in g.elements() {
        *h.entry(g.element_order(&x)).or_insert(0) += 1;
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn snf_identity_and_chain(m in matrix_strategy(12)) {
        let s = snf(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        let d = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
        prop_assert_eq!(smith_diagonal(&m), d);
    }

    #[test]
    fn cokernel_unimodular_invariance(
        m in matrix_strategy(6),
        left in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12),
        right in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12),
    ) {
        let u = unimodular(m.rows(), &left);
        let v = unimodular(m.cols(), &right);
        let a = cokernel(&m);
        let b = cokernel(&u.mul(&m).mul(&v));
        prop_assert_eq!(a.group, b.group);
        prop_assert_eq!(a.free_rank, b.free_rank);
    }

    #[test]
    fn quotient_order_and_structure(
        g in group_strategy(64),
        gens in proptest::collection::vec(proptest::collection::vec(0i64..64, 4), 0..3),
    ) {
        let gens: Vec<_> = gens.iter().map(|v| g.reduce(&elem(&v[..g.rank()]))).collect();
        let s = AbSubgroup::new(g.clone(), gens).unwrap();
        let q = s.quotient();
        prop_assert_eq!(g.order(), s.order() * q.group.order());
        // Brute force: count members and cosets directly.
        let members = g.elements().filter(|x| s.contains(x)).count();
        prop_assert_eq!(BigInt::from(members), s.order());
        let mut reps: Vec<Vec<BigInt>> = Vec::new();
        for x in g.elements() {
            if !reps.iter().any(|r| s.contains(&g.add(&x, &g.neg(r)))) {
                reps.push(x);
            }
        }
        prop_assert_eq!(BigInt::from(reps.len()), q.group.order());
        prop_assert_eq!(q.projection.kernel(), s.clone());
        // The subgroup as an abstract group has the element-order profile of its members.
        let sg = s.as_group();
        let mut hist = BTreeMap::new();
        for x in g.elements().filter(|x| s.contains(x)) {
            *hist.entry(g.element_order(&x)).or_insert(0usize) += 1;
        }
        prop_assert_eq!(order_histogram(&sg.group), hist);
    }

    #[test]
    fn dual_is_involution(g in group_strategy(4096)) {
        let (d, _) = dual_group(&g);
        prop_assert_eq!(dual_group(&d).0, g);
    }

    #[test]
    fn join_intersect_laws(
        g in group_strategy(64),
        a in proptest::collection::vec(0i64..64, 4),
        b in proptest::collection::vec(0i64..64, 4),
        c in proptest::collection::vec(0i64..64, 4),
    ) {
        let r = g.rank();
        let s = AbSubgroup::new(g.clone(), vec![elem(&a[..r])]).unwrap();
        let t = AbSubgroup::new(g.clone(), vec![elem(&b[..r])]).unwrap();
        let u = AbSubgroup::new(g.clone(), vec![elem(&c[..r])]).unwrap();
        prop_assert_eq!(s.join(&t).unwrap(), t.join(&s).unwrap());
        prop_assert_eq!(s.intersect(&t).unwrap(), t.intersect(&s).unwrap());
        prop_assert_eq!(s.join(&t).unwrap().join(&u).unwrap(), s.join(&t.join(&u).unwrap()).unwrap());
        prop_assert_eq!(
            s.intersect(&t).unwrap().intersect(&u).unwrap(),
            s.intersect(&t.intersect(&u).unwrap()).unwrap()
        );
        // |S ∨ T| · |S ∩ T| = |S| · |T|
        prop_assert_eq!(
            s.join(&t).unwrap().order() * s.intersect(&t).unwrap().order(),
            s.order() * t.order()
        );
        for x in g.elements() {
            prop_assert_eq!(s.intersect(&t).unwrap().contains(&x), s.contains(&x) && t.contains(&x));
        }
    }
}

#[test]
fn wedge_order_formula_exhaustive() {
    // Every group with at most 4 invariant factors, each at most 16.
    let mut chains: Vec<Vec<u64>> = vec![vec![]];
    let mut frontier = chains.clone();
    for _ in 0..4 {
        let mut next = Vec::new();
        for c in &frontier {
            for d in 2..=16u64 {
                if c.last().is_none_or(|&l| d % l == 0) {
                    let mut e = c.clone();
                    e.push(d);
                    next.push(e);
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    assert!(chains.iter().any(|c| c.len() == 4));
    for c in &chains {
        let g = FinAbGroup::from_u64(c).unwrap();
        let w = wedge_square(&g);
        let mut expected = BigInt::one();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                expected *= BigInt::from(c[i].gcd(&c[j]));
            }
        }
        assert_eq!(w.group.order(), expected, "wedge of {c:?}");
    }
}

/// Counts alternating bilinear forms `A × A → ℤ/E` directly.
fn alternating_forms(factors: &[u64]) -> u64 {
    let r = factors.len();
    let e = factors.iter().copied().max().unwrap_or(1);
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let mut count = 0;
    let total = e.pow(pairs.len() as u32);
    for code in 0..total {
        let mut k = code;
        let mut ok = true;
        for &(i, j) in &pairs {
            let b = k % e;
            k /= e;
            // b(e_i, e_j) must be killed by both d_i and d_j.
            if !(b * factors[i]).is_multiple_of(e) || !(b * factors[j]).is_multiple_of(e) {
                ok = false;
            }
        }
        if ok {
            count += 1;
        }
    }
    count
}

#[test]
fn wedge_matches_brute_force_forms() {
    for f in [&[2u64, 2][..], &[2, 4], &[2, 2, 2], &[4, 4], &[3, 6], &[2, 2, 4], &[6]] {
        let g = FinAbGroup::from_u64(f).unwrap();
        let w = wedge_square(&g);
        assert_eq!(w.group.order().to_u64().unwrap(), alternating_forms(f), "{f:?}");
    }
}

#[test]
fn wedge_map_is_bilinear() {
    let g = FinAbGroup::from_u64(&[2, 4, 4]).unwrap();
    let w = wedge_square(&g);
    let xs: Vec<_> = g.elements().step_by(5).collect();
    for x in &xs {
        for y in &xs {
            for z in xs.iter().take(4) {
                let lhs = w.wedge(&g.add(x, y), z);
                let rhs = w.group.add(&w.wedge(x, z), &w.wedge(y, z));
                assert_eq!(lhs, rhs);
            }
            assert_eq!(w.group.add(&w.wedge(x, y), &w.wedge(y, x)), w.group.zero());
        }
    }
}
