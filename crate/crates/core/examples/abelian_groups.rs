//! Invariant factors, Smith normal form, subgroup lattices and wedge squares.

use multinorm::abgroup::{all_subgroups, cokernel, snf, wedge_square, FinAbGroup, IntMatrix};

fn main() {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = snf(&m);
    println!("SNF diagonal of the 3x3 example: {:?}", s.diagonal());
    assert_eq!(s.u.mul(&m).mul(&s.v), s.d);

    let c = cokernel(&m);
    println!("cokernel: invariant factors {:?}, free rank {}", c.group.factors_u64(), c.free_rank);

    let g = FinAbGroup::from_u64(&[2, 4]).unwrap();
    let subs = all_subgroups(&g);
    println!("Z/2 x Z/4 has {} subgroups:", subs.len());
    for h in &subs {
        println!("  order {:>2}, quotient {:?}", h.order(), h.quotient().group.factors_u64());
    }

    for f in [&[2u64, 2][..], &[2, 4], &[2, 2, 2], &[2, 6, 12]] {
        let a = FinAbGroup::from_u64(f).unwrap();
        println!("wedge square of {f:?}: {:?}", wedge_square(&a).group.factors_u64());
    }
}
