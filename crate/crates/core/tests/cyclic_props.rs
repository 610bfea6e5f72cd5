//! Structural properties of the cyclic engine on random cyclic scenarios.

use multinorm::cyclic_engine::{
    diagonal_group, g_group, locally_diagonal_at, omega_cover_check, sha_cyclic, CyclicAmbient, Mode,
};
use multinorm::scenario::{CyclicScenario, PlaceDatum};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Raw place data, clamped into the valid range by [`build`].
type RawPlace = (u32, Vec<u32>);

fn build(p: u64, e: u32, mut e_list: Vec<u32>, raw: &[RawPlace]) -> CyclicScenario {
    for x in e_list.iter_mut() {
        *x %= e + 1;
    }
    e_list.sort_unstable_by(|a, b| b.cmp(a));
    let places = raw
        .iter()
        .enumerate()
        .map(|(k, (ev, eiv))| {
            let e_v = ev % (e + 1);
            let e_i_v = e_list.iter().zip(eiv).map(|(&ei, &x)| x % (e_v.min(ei) + 1)).collect();
            PlaceDatum { label: format!("v{k}"), e_v, e_i_v }
        })
        .collect();
    CyclicScenario::new(p, e, e_list, places).expect("clamped data is valid")
}

fn scenario(max_e: u32, max_m: usize, max_places: usize) -> impl Strategy<Value = CyclicScenario> {
    (prop_oneof![Just(2u64), Just(3u64)], 1..=max_e, 0..=max_m).prop_flat_map(move |(p, e, m)| {
        let places = proptest::collection::vec((0u32..8, proptest::collection::vec(0u32..8, m)), 0..=max_places);
        (Just(p), Just(e), proptest::collection::vec(0u32..8, m), places)
            .prop_map(|(p, e, el, raw)| build(p, e, el, &raw))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn diagonal_is_locally_diagonal(cs in scenario(3, 3, 4)) {
        let g = g_group(&cs, Mode::Fast).unwrap();
        prop_assert!(diagonal_group(&cs).is_subgroup_of(&g).unwrap());
    }

    #[test]
    fn adding_a_place_never_enlarges(cs in scenario(3, 3, 3), ev in 0u32..8, eiv in proptest::collection::vec(0u32..8, 3)) {
        let mut raw: Vec<RawPlace> = cs.places.iter().map(|d| (d.e_v, d.e_i_v.clone())).collect();
        raw.push((ev, eiv[..cs.m()].to_vec()));
        let bigger = build(cs.p, cs.e, cs.e_list.clone(), &raw);
        let before = g_group(&cs, Mode::Fast).unwrap();
        let after = g_group(&bigger, Mode::Fast).unwrap();
        prop_assert!(after.is_subgroup_of(&before).unwrap());
    }

    #[test]
    fn covering_condition_matches_local_predicate(cs in scenario(2, 3, 4)) {
        for a in CyclicAmbient::new(&cs).tuples() {
            let local = cs.places.iter().all(|d| locally_diagonal_at(&cs, &a, d).unwrap());
            prop_assert_eq!(omega_cover_check(&a, &cs).unwrap(), local, "tuple {:?}", a);
        }
    }

    #[test]
    fn full_local_datum_forces_diagonal(cs in scenario(3, 3, 3)) {
        let mut raw: Vec<RawPlace> = cs.places.iter().map(|d| (d.e_v, d.e_i_v.clone())).collect();
        raw.push((cs.e, cs.e_list.clone()));
        let full = build(cs.p, cs.e, cs.e_list.clone(), &raw);
        prop_assert_eq!(g_group(&full, Mode::Fast).unwrap(), diagonal_group(&full));
    }

    #[test]
    fn answer_order_bound(cs in scenario(3, 3, 4)) {
        let r = sha_cyclic(&cs, Mode::Fast).unwrap();
        let order = r.exact().expect("cyclic reports are exact").order();
        if cs.m() == 0 {
            prop_assert_eq!(order, BigInt::from(1));
        } else {
            let bound: u32 = cs.e_list.iter().sum::<u32>() - cs.e_list[0];
            prop_assert_eq!(BigInt::from(cs.pow(bound)) % &order, BigInt::from(0));
            let mut n = order;
            while n > BigInt::from(1) {
                prop_assert_eq!(&n % cs.p, BigInt::from(0));
                n /= cs.p;
            }
        }
    }

    #[test]
    fn fast_and_paranoid_agree(cs in scenario(3, 3, 4)) {
        prop_assert_eq!(g_group(&cs, Mode::Fast).unwrap(), g_group(&cs, Mode::Paranoid).unwrap());
    }
}
