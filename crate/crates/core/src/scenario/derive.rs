//! Scenario-level derivations: local degrees, the cyclic specialization,
//! base change to the common subfield, prime-primary parts, and removal of
//! redundant factors.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{
    format_elem, is_prime, prime_power, AbelianScenario, CyclicScenario, Factor, GaloisScenario, LocalProfile,
    PlaceDatum, ScenarioError,
};
use crate::abgroup::{cyclic_subgroups, AbSubgroup, FinAbGroup};

/// Every cyclic subgroup of an abelian group, trivial subgroup included.
pub fn chebotarev_profile(g: &FinAbGroup) -> Vec<AbSubgroup> {
    cyclic_subgroups(g)
}

/// Orders of the local extensions at a place with decomposition group `D`:
/// `k_order = |D·H_K / H_K|` for the designated factor and, for each other
/// factor, `|D∩H_i| / |D∩H_i∩H_K|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalOrders {
    pub k_order: BigInt,
    pub other_orders: Vec<BigInt>,
}

/// Local orders at `d` relative to the scenario's designation.
pub fn local_degrees(s: &AbelianScenario, d: &AbSubgroup) -> Result<LocalOrders, ScenarioError> {
    let des = s.designation()?;
    let meet = |a: &AbSubgroup, b: &AbSubgroup| a.intersect(b).map_err(ScenarioError::from);
    let k_order = d.order() / meet(d, &des.h_k)?.order();
    let mut other_orders = Vec::with_capacity(des.others.len());
    for f in &des.others {
        let di = meet(d, &f.subgroup)?;
        other_orders.push(di.order() / meet(&di, &des.h_k)?.order());
    }
    Ok(LocalOrders { k_order, other_orders })
}

/// The cyclic specialization of a scenario with its bookkeeping.
#[derive(Clone, Debug)]
pub struct DerivedCyclic {
    pub cyclic: CyclicScenario,
    /// Designated factor name.
    pub designation: String,
    /// Names of the other factors in the sorted order of `cyclic.e_list`.
    pub names: Vec<String>,
    /// `permutation[k]` is the index in the designation's other factors of sorted position `k`.
    pub permutation: Vec<usize>,
}

fn log_p(n: &BigInt, p: u64) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    let p = BigInt::from(p);
    while n > BigInt::one() {
        let (q, r) = n.div_rem(&p);
        assert!(r == BigInt::from(0), "order is not a power of p");
        n = q;
        k += 1;
    }
    k
}

/// Derives the cyclic-engine data: requires `G̃/H̃_K` cyclic of prime-power order.
pub fn derive_cyclic(s: &AbelianScenario) -> Result<DerivedCyclic, ScenarioError> {
    let des = s.designation()?;
    let q = des.h_k.quotient().group;
    let not_cyclic = || ScenarioError::NotCyclicPrimePower { name: des.name.clone(), structure: format!("{:?}", q.factors_u64()) };
    let (p, e) = match q.factors() {
        // K = k: any prime works; all exponents vanish.
        [] => (2, 0),
        [n] => prime_power(n.to_u64().ok_or_else(not_cyclic)?).ok_or_else(not_cyclic)?,
        _ => return Err(not_cyclic()),
    };
    let e_unsorted: Vec<u32> = des
        .others
        .iter()
        .map(|f| {
            let meet = f.subgroup.intersect(&des.h_k).expect("same ambient");
            log_p(&(f.subgroup.order() / meet.order()), p)
        })
        .collect();
    let mut permutation: Vec<usize> = (0..e_unsorted.len()).collect();
    permutation.sort_by(|&a, &b| e_unsorted[b].cmp(&e_unsorted[a]).then(a.cmp(&b)));
    let e_list = permutation.iter().map(|&k| e_unsorted[k]).collect();
    let mut places = Vec::new();
    for d in s.profile_subgroups() {
        let lo = local_degrees(s, &d)?;
        let e_i_v = permutation.iter().map(|&k| log_p(&lo.other_orders[k], p)).collect();
        places.push(PlaceDatum { label: subgroup_label(&d), e_v: log_p(&lo.k_order, p), e_i_v });
    }
    let cyclic = CyclicScenario::new(p, e, e_list, places)?;
    let names = permutation.iter().map(|&k| des.others[k].name.clone()).collect();
    Ok(DerivedCyclic { cyclic, designation: des.name, names, permutation })
}

pub(crate) fn subgroup_label(d: &AbSubgroup) -> String {
    let gens: Vec<String> = d.canonical_generators().iter().map(|g| format_elem(g)).collect();
    format!("<{}>", gens.join(","))
}

/// Base change to `F`, the intersection of all factor fields: the ambient
/// group shrinks to the join of the factor subgroups and decomposition groups
/// are intersected with it. Requires the designated factor to have cyclic quotient.
pub fn base_change_to_f(s: &AbelianScenario) -> Result<AbelianScenario, ScenarioError> {
    let des = s.designation()?;
    let q = des.h_k.quotient().group;
    if !q.is_cyclic() {
        return Err(ScenarioError::Invalid {
            field: "designate".into(),
            message: format!("base change needs a cyclic designated factor; {:?} has quotient {:?}", des.name, q.factors_u64()),
        });
    }
    let mut gf = AbSubgroup::trivial(&s.group);
    for f in s.factors() {
        gf = gf.join(&f.subgroup)?;
    }
    if gf.is_full() {
        return Ok(s.clone());
    }
    let sub = gf.as_group();
    let restrict = |x: &AbSubgroup| sub.restrict(x).map_err(ScenarioError::from);
    let conv = |v: &[Factor<AbSubgroup>]| -> Result<Vec<_>, ScenarioError> {
        v.iter().map(|f| Ok(Factor::new(f.name.clone(), restrict(&f.subgroup)?))).collect()
    };
    let mut extra = Vec::new();
    let mut seen = HashSet::new();
    for d in s.profile_subgroups() {
        let m = restrict(&d.intersect(&gf)?)?;
        // Cyclic members are already covered when the Chebotarev closure is on.
        if s.profile.chebotarev && m.as_group().group.is_cyclic() {
            continue;
        }
        if seen.insert(m.clone()) {
            extra.push(m);
        }
    }
    let out = AbelianScenario {
        group: sub.group.clone(),
        k_factors: conv(&s.k_factors)?,
        kprime_factors: conv(&s.kprime_factors)?,
        profile: LocalProfile { chebotarev: s.profile.chebotarev, extra },
        designate: Some(des.name),
    };
    Ok(out)
}

/// Replaces every factor field by its maximal `p`-primary subfield, i.e.
/// each factor subgroup `H` by `H` joined with the prime-to-`p` part of the
/// group. The result is usually not faithful; see [`faithful_quotient`].
pub fn p_part(s: &AbelianScenario, p: u64) -> Result<AbelianScenario, ScenarioError> {
    if !is_prime(p) {
        return Err(ScenarioError::NotPrime(p));
    }
    let q = prime_to_p_part(&s.group, p);
    let lift = |v: &[Factor<AbSubgroup>]| -> Result<Vec<_>, ScenarioError> {
        v.iter().map(|f| Ok(Factor::new(f.name.clone(), f.subgroup.join(&q)?))).collect()
    };
    Ok(AbelianScenario {
        group: s.group.clone(),
        k_factors: lift(&s.k_factors)?,
        kprime_factors: lift(&s.kprime_factors)?,
        profile: s.profile.clone(),
        designate: s.designate.clone(),
    })
}

/// Elements of order prime to `p`.
pub(crate) fn prime_to_p_part(g: &FinAbGroup, p: u64) -> AbSubgroup {
    let mut m = BigInt::one();
    let mut exp = g.exponent();
    let pb = BigInt::from(p);
    while exp.is_multiple_of(&pb) {
        exp /= &pb;
        m *= &pb;
    }
    let gens = g.generators().iter().map(|x| g.scale(&m, x)).collect();
    AbSubgroup::new(g.clone(), gens).expect("elements of g")
}

/// Passes to the quotient by the common core of all factor subgroups, the
/// Galois group of the compositum. Profile subgroups are mapped to their images.
pub fn faithful_quotient(s: &AbelianScenario) -> AbelianScenario {
    let core = s.common_core();
    if core.is_trivial() {
        return s.clone();
    }
    let q = core.quotient();
    let img = |x: &AbSubgroup| x.image_under(&q.projection);
    let conv = |v: &[Factor<AbSubgroup>]| v.iter().map(|f| Factor::new(f.name.clone(), img(&f.subgroup))).collect();
    let mut extra = Vec::new();
    let mut seen = HashSet::new();
    for d in &s.profile.extra {
        let m = img(d);
        if seen.insert(m.clone()) {
            extra.push(m);
        }
    }
    AbelianScenario {
        group: q.group.clone(),
        k_factors: conv(&s.k_factors),
        kprime_factors: conv(&s.kprime_factors),
        profile: LocalProfile { chebotarev: s.profile.chebotarev, extra },
        designate: s.designate.clone(),
    }
}

/// Degree of the maximal abelian subextension contained in every factor:
/// the index of the normal subgroup generated by the factor subgroups and
/// the commutator subgroup.
pub fn f_ab_index(s: &GaloisScenario) -> BigInt {
    match s {
        GaloisScenario::Abelian(a) => abelian_f_ab_index(a),
        GaloisScenario::Table(t) => {
            let g = &t.group;
            let mut gens: Vec<usize> = g.commutator_subgroup().elements().to_vec();
            for f in t.factors() {
                gens.extend_from_slice(f.subgroup.elements());
            }
            BigInt::from(g.order() / g.normal_closure(&gens).order())
        }
    }
}

pub(crate) fn abelian_f_ab_index(a: &AbelianScenario) -> BigInt {
    let mut n = AbSubgroup::trivial(&a.group);
    for f in a.factors() {
        n = n.join(&f.subgroup).expect("same ambient");
    }
    n.index()
}

/// Drops K′ factors whose field contains another factor field: factor `j` is
/// removed when some other factor has a strictly larger subgroup, or an equal
/// subgroup listed earlier (K-side factors first). Returns the log of removals.
pub fn normalize_redundant_factors(s: &AbelianScenario) -> (AbelianScenario, Vec<String>) {
    let all: Vec<&Factor<AbSubgroup>> = s.factors().collect();
    let nk = s.k_factors.len();
    let designated = s.designate.as_deref();
    let mut log = Vec::new();
    let mut kept = Vec::new();
    for (j, f) in s.kprime_factors.iter().enumerate() {
        let idx = nk + j;
        let witness = all.iter().enumerate().find(|&(i, g)| {
            if i == idx {
                return false;
            }
            let sub = f.subgroup.is_subgroup_of(&g.subgroup).expect("same ambient");
            sub && (f.subgroup != g.subgroup || i < idx)
        });
        match witness {
            Some((_, g)) if designated != Some(f.name.as_str()) => {
                let why = if f.subgroup == g.subgroup { "duplicates" } else { "contains" };
                log.push(format!("dropped {:?}: its field {why} the field of {:?}", f.name, g.name));
            }
            _ => kept.push(f.clone()),
        }
    }
    let out = AbelianScenario { kprime_factors: kept, ..s.clone() };
    (out, log)
}
