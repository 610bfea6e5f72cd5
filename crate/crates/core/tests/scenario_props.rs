//! Properties of scenario transformations and of the general engine on
//! random abelian scenarios with at most eight Galois group elements.

use multinorm::abelian_engine::{analyze, combine_exact, p_primary_split, s_ld};
use multinorm::abgroup::{all_subgroups, elem, AbSubgroup, FinAbGroup};
use multinorm::corpus::{abelian_groups, scenario};
use multinorm::oracle::{sha_split, Caps};
use multinorm::scenario::{
    base_change_to_f, chebotarev_profile, f_ab_index, faithful_quotient, local_degrees, normalize_redundant_factors,
    p_part, AbelianScenario, GaloisScenario, LocalProfile,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Group of order at most 8 with a designated subgroup and up to three others.
fn scenario_strategy(max_others: usize) -> impl Strategy<Value = AbelianScenario> {
    let groups = abelian_groups(8);
    (0..groups.len(), any::<u32>(), proptest::collection::vec(any::<u32>(), 1..=max_others)).prop_map(
        move |(gi, k, others)| {
            let g = &groups[gi];
            let subs = all_subgroups(g);
            let pick = |x: u32| subs[x as usize % subs.len()].clone();
            let others: Vec<AbSubgroup> = others.into_iter().map(pick).collect();
            scenario(g, &pick(k), &others)
        },
    )
}

fn primes_dividing(n: &BigInt) -> Vec<u64> {
    let n: u64 = n.try_into().unwrap();
    (2..=n).filter(|&p| n.is_multiple_of(p) && (2..p).all(|d| p % d != 0)).collect()
}

fn table(s: &AbelianScenario) -> multinorm::scenario::TableScenario {
    let mut t = s.to_table();
    t.designate = s.designate.clone();
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chebotarev_profile_is_subgroup_closed(gi in 0usize..11) {
        let g = &abelian_groups(8)[gi];
        let profile = chebotarev_profile(g);
        for d in &profile {
            for h in all_subgroups(g).iter().filter(|h| h.is_subgroup_of(d).unwrap()) {
                prop_assert!(profile.contains(h));
            }
        }
    }

    #[test]
    fn local_degree_bound(s in scenario_strategy(3)) {
        let des = s.designation().unwrap();
        for d in s.profile_subgroups() {
            let l = local_degrees(&s, &d).unwrap();
            for (x, f) in l.other_orders.iter().zip(&des.others) {
                let global = f.subgroup.order() / f.subgroup.intersect(&des.h_k).unwrap().order();
                prop_assert_eq!(&l.k_order % x, BigInt::from(0));
                prop_assert_eq!(&global % x, BigInt::from(0));
            }
        }
    }

    #[test]
    fn base_change_is_idempotent(s in scenario_strategy(3)) {
        if let Ok(once) = base_change_to_f(&s) {
            let twice = base_change_to_f(&once).unwrap();
            prop_assert_eq!(twice, once);
        }
    }

    #[test]
    fn primary_parts_multiply_the_abelian_index(s in scenario_strategy(3)) {
        let whole = f_ab_index(&GaloisScenario::Abelian(s.clone()));
        let mut product = BigInt::from(1);
        for p in primes_dividing(&s.group.exponent()) {
            product *= f_ab_index(&GaloisScenario::Abelian(p_part(&s, p).unwrap()));
        }
        prop_assert_eq!(product, whole);
    }

    #[test]
    fn primary_reports_sum_to_the_whole(s in scenario_strategy(3)) {
        let whole = analyze(&s).unwrap().report;
        let parts = p_primary_split(&s).unwrap();
        if let (Some(w), Some(sum)) = (whole.exact(), combine_exact(parts.values())) {
            prop_assert_eq!(w, &sum);
        }
    }

    #[test]
    fn diagonal_inside_locally_diagonal(s in scenario_strategy(3)) {
        let a = analyze(&s).unwrap();
        prop_assert!(a.d_diag.is_subgroup_of(&a.s_ld).unwrap());
    }

    #[test]
    fn s_ld_is_antitone_in_the_profile(s in scenario_strategy(2), extra in any::<u32>()) {
        let subs = all_subgroups(&s.group);
        let mut bigger = s.clone();
        bigger.profile.extra.push(subs[extra as usize % subs.len()].clone());
        prop_assert!(s_ld(&bigger).unwrap().is_subgroup_of(&s_ld(&s).unwrap()).unwrap());
    }

    #[test]
    fn s_ld_sees_only_the_subgroup_closure(s in scenario_strategy(2), pick in any::<u32>()) {
        let subs = all_subgroups(&s.group);
        let d = subs[pick as usize % subs.len()].clone();
        let below: Vec<AbSubgroup> = subs.iter().filter(|h| h.is_subgroup_of(&d).unwrap()).cloned().collect();
        let with = |extra: Vec<AbSubgroup>| AbelianScenario { profile: LocalProfile { chebotarev: false, extra }, ..s.clone() };
        prop_assert_eq!(s_ld(&with(vec![d])).unwrap(), s_ld(&with(below)).unwrap());
    }

    #[test]
    fn surjective_intersection_forces_diagonal(s in scenario_strategy(3)) {
        let des = s.designation().unwrap();
        let mut meet = AbSubgroup::full(&s.group);
        for f in &des.others {
            meet = meet.intersect(&f.subgroup).unwrap();
        }
        if meet.join(&des.h_k).unwrap().is_full() {
            let a = analyze(&s).unwrap();
            prop_assert_eq!(a.s_ld, a.d_diag);
        }
    }

    #[test]
    fn base_change_preserves_the_answer(s in scenario_strategy(2)) {
        if let Ok(bc) = base_change_to_f(&s) {
            let a = analyze(&s).unwrap().report;
            let b = analyze(&faithful_quotient(&bc)).unwrap().report;
            if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
                prop_assert_eq!(x, y);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalization_is_invisible_to_engine_and_oracle(s in scenario_strategy(3)) {
        let (n, _) = normalize_redundant_factors(&s);
        let caps = Caps { max_rank: 256, ..Caps::default() };
        prop_assert_eq!(sha_split(&table(&s), &caps).unwrap(), sha_split(&table(&n), &caps).unwrap());
        let (a, b) = (analyze(&s).unwrap().report, analyze(&n).unwrap().report);
        prop_assert_eq!(&a.s_mod_d, &b.s_mod_d);
        prop_assert_eq!(a.exact(), b.exact());
    }
}

/// Each other factor mapping onto the designated quotient is not enough:
/// here every cyclic decomposition group meets at most one of them.
#[test]
fn per_factor_surjectivity_does_not_force_diagonal() {
    let g = FinAbGroup::from_u64(&[2, 2, 2]).unwrap();
    let sub = |gens: &[&[i64]]| AbSubgroup::new(g.clone(), gens.iter().map(|x| elem(x)).collect()).unwrap();
    let s = scenario(&g, &sub(&[&[1, 0, 0], &[0, 0, 1]]), &[sub(&[&[1, 1, 0]]), sub(&[&[1, 1, 1]])]);
    let a = analyze(&s).unwrap();
    assert_eq!(a.s_ld.order(), BigInt::from(4));
    assert_eq!(a.d_diag.order(), BigInt::from(2));
    let oracle = sha_split(&table(&s), &Caps { max_rank: 64, ..Caps::default() }).unwrap();
    assert_eq!(oracle, FinAbGroup::cyclic(2));
}

#[test]
fn group_strategy_covers_small_orders() {
    let orders: Vec<BigInt> = abelian_groups(8).iter().map(FinAbGroup::order).collect();
    assert_eq!(orders.iter().filter(|o| **o == BigInt::from(8)).count(), 3);
}
