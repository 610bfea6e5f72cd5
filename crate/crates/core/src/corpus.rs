//! Enumerated scenario families for exhaustive checks.

use crate::abgroup::{all_subgroups, AbSubgroup, FinAbGroup};
use crate::scenario::{faithful_quotient, AbelianScenario, Factor, LocalProfile};

/// Every finite abelian group of order at most `max_order`, by order, then by invariant factors.
pub fn abelian_groups(max_order: u64) -> Vec<FinAbGroup> {
    (1..=max_order).flat_map(abelian_groups_of_order).collect()
}

/// Every finite abelian group of order exactly `n`.
pub fn abelian_groups_of_order(n: u64) -> Vec<FinAbGroup> {
    fn chains(rest: u64, prev: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.iter().rev().copied().collect());
            return;
        }
        // Build from the largest factor down: each next factor divides the previous one.
        for d in (2..=rest).filter(|d| rest.is_multiple_of(*d) && prev.is_multiple_of(*d)) {
            acc.push(d);
            chains(rest / d, d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    chains(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out.iter().map(|f| FinAbGroup::from_u64(f).expect("divisibility chain")).collect()
}

/// Scenario with field factor `K` (designated) and further factors `K1, K2, …`,
/// every cyclic subgroup in the profile, passed to the faithful quotient.
pub fn scenario(g: &FinAbGroup, h_k: &AbSubgroup, others: &[AbSubgroup]) -> AbelianScenario {
    let s = AbelianScenario {
        group: g.clone(),
        k_factors: vec![Factor::new("K", h_k.clone())],
        kprime_factors: others.iter().enumerate().map(|(i, h)| Factor::new(format!("K{}", i + 1), h.clone())).collect(),
        profile: LocalProfile::default(),
        designate: Some("K".into()),
    };
    faithful_quotient(&s)
}

/// All ordered pairs `(H_K, H_1)` of subgroups.
pub fn pair_scenarios(g: &FinAbGroup) -> Vec<AbelianScenario> {
    let subs = all_subgroups(g);
    let mut out = Vec::new();
    for hk in &subs {
        for h1 in &subs {
            out.push(scenario(g, hk, std::slice::from_ref(h1)));
        }
    }
    out
}

/// All `(H_K, {H_1, H_2})` with the two other factors taken as an unordered pair.
pub fn triple_scenarios(g: &FinAbGroup) -> Vec<AbelianScenario> {
    let subs = all_subgroups(g);
    let mut out = Vec::new();
    for hk in &subs {
        for (i, h1) in subs.iter().enumerate() {
            for h2 in &subs[i..] {
                out.push(scenario(g, hk, &[h1.clone(), h2.clone()]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts() {
        let counts: Vec<usize> = (1..=16).map(|n| abelian_groups_of_order(n).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        assert_eq!(abelian_groups(8).len(), 11);
    }

    #[test]
    fn scenarios_are_faithful() {
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        let pairs = pair_scenarios(&g);
        assert_eq!(pairs.len(), 25);
        assert!(pairs.iter().all(|s| s.validate().is_ok()));
        assert_eq!(triple_scenarios(&g).len(), 5 * 15);
    }
}
