//! Cohomology oracle checks against closed-form answers and the engine.

use multinorm::abelian_engine::analyze;
use multinorm::abgroup::{all_subgroups, wedge_square};
use multinorm::cli::suites::{h1_multinorm_suite, inflation};
use multinorm::corpus::{abelian_groups, scenario};
use multinorm::oracle::{cohomology, sha2_designated, Caps, GLattice};
use multinorm::scenario::{AbelianScenario, FiniteGroup, LocalProfile};
use proptest::prelude::*;

fn small_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> =
        abelian_groups(8).iter().filter(|g| !g.is_trivial()).map(|g| FiniteGroup::from_abelian(g).0).collect();
    out.push(FiniteGroup::symmetric(3));
    out.push(FiniteGroup::dihedral(4));
    out
}

#[test]
fn regular_module_is_acyclic() {
    let caps = Caps::default();
    for g in small_groups() {
        let m = GLattice::coset_module(&g, &g.trivial_subgroup()).unwrap();
        for q in 1..=2 {
            let h = cohomology(&m, q, &caps).unwrap();
            assert!(h.group().is_trivial() && h.free_rank() == 0, "order {} degree {q}", g.order());
        }
    }
}

#[test]
fn first_cohomology_of_multinorm_lattice_is_dual_of_abelian_quotient() {
    let records = h1_multinorm_suite(12, &Caps::default()).unwrap();
    assert!(records.len() > 500);
    for r in records {
        assert!(r.holds, "{}: {} vs {}", r.claim, r.lhs, r.rhs);
    }
}

#[test]
fn third_integral_cohomology_is_wedge_square() {
    let caps = Caps::default();
    for a in abelian_groups(8).into_iter().filter(|a| !a.is_trivial()) {
        let (g, _) = FiniteGroup::from_abelian(&a);
        let h3 = cohomology(&GLattice::trivial(&g), 3, &caps).unwrap();
        assert_eq!(h3.group(), &wedge_square(&a).group, "{:?}", a.factors_u64());
    }
}

#[test]
fn inflation_onto_primary_part() {
    for r in inflation(&Caps::default()).unwrap() {
        assert!(r.holds, "{}", r.claim);
    }
}

/// Single-field scenario over a group of order at most 8 with a random
/// declared profile, optionally on top of the cyclic subgroups.
fn single_field() -> impl Strategy<Value = AbelianScenario> {
    let groups = abelian_groups(8);
    (0..groups.len(), any::<u32>(), any::<bool>(), proptest::collection::vec(any::<u32>(), 0..3)).prop_map(
        move |(gi, k, chebotarev, extra)| {
            let g = &groups[gi];
            let subs = all_subgroups(g);
            let mut s = scenario(g, &subs[k as usize % subs.len()], &[]);
            let subs = all_subgroups(&s.group);
            s.profile = LocalProfile { chebotarev, extra: extra.iter().map(|&x| subs[x as usize % subs.len()].clone()).collect() };
            s
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn second_kernel_matches_wedge_route(s in single_field()) {
        let mut t = s.to_table();
        t.designate = s.designate.clone();
        let oracle = sha2_designated(&t, &Caps::default()).unwrap();
        prop_assert_eq!(analyze(&s).unwrap().report.sha2_k, oracle);
    }
}
