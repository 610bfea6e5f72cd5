//! Check suites shared by `verify` and `selftest`.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::abelian_engine::analyze;
use crate::abgroup::{smith_diagonal, snf, wedge_square, FinAbGroup, IntMatrix};
use crate::corpus::{abelian_groups, pair_scenarios, triple_scenarios};
use crate::cyclic_engine::{sha_cyclic, Mode};
use crate::oracle::{
    abelian_quotient, bar_differential, cohomology, cohomology_with, factors, h1_multinorm, sha_multinorm, sha_split,
    verify_bounds, verify_inflation_ppart, Caps, Cochains, GLattice, Method, Record,
};
use crate::scenario::{
    derive_cyclic, normalize_redundant_factors, AbelianScenario, Factor, FiniteGroup, LocalProfile, TableScenario,
    TableSubgroup,
};
use crate::Result;

fn record(claim: String, lhs: &FinAbGroup, rhs: &FinAbGroup) -> Record {
    Record { claim, lhs: json!(factors(lhs)), rhs: json!(factors(rhs)), holds: lhs == rhs }
}

fn describe(s: &AbelianScenario) -> String {
    let parts: Vec<String> =
        s.factors().map(|f| format!("{}:{:?}", f.name, factors(&f.subgroup.quotient().group))).collect();
    format!("G={:?} [{}]", factors(&s.group), parts.join(" "))
}

fn table_with_k(s: &AbelianScenario) -> TableScenario {
    let mut t = s.to_table();
    t.designate = s.designate.clone();
    t
}

/// Inflation onto the `p`-primary part for `S₃` and `ℤ/6`, degrees 1 to 3.
pub fn inflation(caps: &Caps) -> Result<Vec<Record>> {
    let s3 = FiniteGroup::symmetric(3);
    let z6 = FiniteGroup::cyclic(6);
    let cases = [
        ("S3", &s3, s3.commutator_subgroup(), 2u64),
        ("Z/6", &z6, z6.generate(&[2]), 2),
        ("Z/6", &z6, z6.generate(&[3]), 3),
    ];
    let mut out = Vec::new();
    for (name, g, normal, p) in cases {
        for q in 1..=3 {
            let c = verify_inflation_ppart(g, &normal, p, q, caps)?;
            out.push(Record {
                claim: format!("inflation H^{q}(quotient, Z) -> H^{q}({name}, Z)({p}) is an isomorphism"),
                lhs: json!(c.quotient),
                rhs: json!(c.p_part),
                holds: c.holds,
            });
        }
    }
    Ok(out)
}

/// Nonabelian table groups within the default caps.
fn nonabelian_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("S3", FiniteGroup::symmetric(3)),
        ("D4", FiniteGroup::dihedral(4)),
        ("D6", FiniteGroup::dihedral(6)),
        ("Z/3 x| Z/4", FiniteGroup::semidirect_cyclic(3, 4, 2)),
    ]
}

fn table_scenario(group: &FiniteGroup, subs: &[TableSubgroup]) -> TableScenario {
    TableScenario {
        group: group.clone(),
        k_factors: subs.iter().enumerate().map(|(i, h)| Factor::new(format!("K{i}"), h.clone())).collect(),
        kprime_factors: Vec::new(),
        profile: LocalProfile::default(),
        designate: None,
    }
}

/// `H¹(G, T̂)` of the multinorm lattice against `G/N` for one- and two-factor
/// scenarios over abelian groups up to `max_order` and a few nonabelian groups.
pub fn h1_multinorm_suite(max_order: u64, caps: &Caps) -> Result<Vec<Record>> {
    let mut groups: Vec<(String, FiniteGroup)> = abelian_groups(max_order)
        .into_iter()
        .map(|g| (format!("{:?}", g.factors_u64()), FiniteGroup::from_abelian(&g).0))
        .collect();
    let nonabelian = nonabelian_groups().into_iter().filter(|(_, g)| g.order() as u64 <= max_order);
    groups.extend(nonabelian.map(|(n, g)| (n.to_string(), g)));
    let mut out = Vec::new();
    for (name, g) in groups {
        let reps = g.conjugacy_representatives(&g.all_subgroups());
        let mut families: Vec<Vec<TableSubgroup>> = reps.iter().map(|h| vec![h.clone()]).collect();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i..] {
                families.push(vec![a.clone(), b.clone()]);
            }
        }
        for subs in families {
            let s = table_scenario(&g, &subs);
            let h1 = h1_multinorm(&s, caps)?;
            let quotient = abelian_quotient(&g, &subs)?;
            let orders: Vec<usize> = subs.iter().map(TableSubgroup::order).collect();
            out.push(record(format!("H^1(T^) = Hom(G/N, Q/Z) for G={name}, factor subgroup orders {orders:?}"), &h1, &quotient));
        }
    }
    Ok(out)
}

/// Dropping a factor that contains another leaves the cohomology and the answer unchanged.
pub fn normalize_suite(max_order: u64, caps: &Caps) -> Result<Vec<Record>> {
    let caps = Caps { max_rank: caps.max_rank.max(128), ..*caps };
    let mut out = Vec::new();
    for g in abelian_groups(max_order) {
        for s in triple_scenarios(&g) {
            let (n, log) = normalize_redundant_factors(&s);
            if log.is_empty() {
                continue;
            }
            let (ts, tn) = (table_with_k(&s), table_with_k(&n));
            out.push(record(format!("H^1(T^) unchanged by normalization, {}", describe(&s)), &h1_multinorm(&ts, &caps)?, &h1_multinorm(&tn, &caps)?));
            out.push(record(format!("oracle Sha unchanged by normalization, {}", describe(&s)), &sha_split(&ts, &caps)?, &sha_split(&tn, &caps)?));
            if g.order() <= BigInt::from(4) {
                out.push(record(
                    format!("multinorm Sha unchanged by normalization, {}", describe(&s)),
                    &sha_multinorm(&ts, &caps)?,
                    &sha_multinorm(&tn, &caps)?,
                ));
            }
        }
    }
    Ok(out)
}

/// Engine-versus-oracle records over all two-factor scenarios up to `max_order`.
pub fn engine_oracle(max_order: u64, caps: &Caps) -> Result<Vec<Record>> {
    let caps = Caps { max_rank: caps.max_rank.max(64), ..*caps };
    let mut out = Vec::new();
    for g in abelian_groups(max_order) {
        for s in pair_scenarios(&g) {
            let v = verify_bounds(&s, &caps)?;
            for mut r in v.records {
                r.claim = format!("{}: {}", describe(&s), r.claim);
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Cyclic engine against the general engine and the oracle, for designated
/// factors with cyclic prime-power quotient.
pub fn cyclic_paths(max_order: u64, caps: &Caps) -> Result<Vec<Record>> {
    let caps = Caps { max_rank: caps.max_rank.max(64), ..*caps };
    let mut out = Vec::new();
    for g in abelian_groups(max_order) {
        for s in pair_scenarios(&g) {
            let Ok(dc) = derive_cyclic(&s) else { continue };
            let cyc = sha_cyclic(&dc.cyclic, Mode::Paranoid)?.exact().cloned().expect("cyclic reports are exact");
            let general = analyze(&s)?.report.s_mod_d;
            let oracle = sha_split(&table_with_k(&s), &caps)?;
            out.push(record(format!("cyclic engine equals S/D, {}", describe(&s)), &cyc, &general));
            out.push(record(format!("cyclic engine equals oracle, {}", describe(&s)), &cyc, &oracle));
        }
    }
    Ok(out)
}

/// Randomized SNF checks: transforms reproduce the diagonal, which forms a
/// divisibility chain and matches the transform-free routine. `corrupt`
/// perturbs the diagonal as a negative control.
pub fn snf_random(trials: usize, seed: u64, corrupt: bool) -> Vec<Record> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for t in 0..trials {
        let r = rng.gen_range(1..=12);
        let c = rng.gen_range(1..=12);
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = snf(&m);
        let mut d = s.d.clone();
        if corrupt && t == 0 {
            let x = d.get(0, 0) + 1;
            d.set(0, 0, x);
        }
        let diag: Vec<_> = (0..r.min(c)).map(|i| d.get(i, i).clone()).collect();
        let plain = smith_diagonal(&m);
        let reproduces = s.u.mul(&m).mul(&s.v) == d;
        let agrees = diag.iter().zip(&plain).all(|(a, b)| a == b);
        out.push(Record {
            claim: format!("SNF trial {t} ({r}x{c})"),
            lhs: json!(diag.iter().map(ToString::to_string).collect::<Vec<_>>()),
            rhs: json!(plain.iter().map(ToString::to_string).collect::<Vec<_>>()),
            holds: reproduces && agrees,
        });
    }
    out
}

/// The presentation and dense routes give the same degree-one cohomology on
/// random permutation lattices and their augmentation quotients.
pub fn cohomology_paths(samples: usize, seed: u64, caps: &Caps) -> Result<Vec<Record>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let groups: Vec<FiniteGroup> = vec![
        FiniteGroup::cyclic(4),
        FiniteGroup::from_abelian(&FinAbGroup::from_u64(&[2, 2]).unwrap()).0,
        FiniteGroup::symmetric(3),
        FiniteGroup::dihedral(4),
        FiniteGroup::cyclic(6),
    ];
    let mut out = Vec::new();
    for k in 0..samples {
        let g = &groups[rng.gen_range(0..groups.len())];
        let subs = g.all_subgroups();
        let h = &subs[rng.gen_range(0..subs.len())];
        let perm = GLattice::coset_module(g, h)?;
        let lattice = if rng.gen_bool(0.5) { perm.quotient(&[vec![1; perm.rank()]])?.lattice } else { perm };
        let a = cohomology_with(&lattice, 1, Method::Presentation, caps)?;
        let b = cohomology_with(&lattice, 1, Method::Dense, caps)?;
        out.push(record(format!("sample {k}: H^1 by presentation and dense routes, order {} rank {}", g.order(), lattice.rank()), a.group(), b.group()));
    }
    Ok(out)
}

/// `d∘d = 0`, cyclic periodicity, and `|∧²A| = ∏_{i<j} gcd(dᵢ, dⱼ)`.
pub fn complexes(caps: &Caps) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
        let modules = [GLattice::trivial(&g), GLattice::coset_module(&g, &g.trivial_subgroup())?];
        for m in &modules {
            for q in 0..2 {
                let a = bar_differential(m, q, Cochains::Full, caps)?;
                let b = bar_differential(m, q + 1, Cochains::Full, caps)?;
                out.push(Record {
                    claim: format!("d^{} o d^{q} = 0, order {}, rank {}", q + 1, g.order(), m.rank()),
                    lhs: json!(b.mul(&a).is_zero()),
                    rhs: json!(true),
                    holds: b.mul(&a).is_zero(),
                });
            }
        }
    }
    for n in 2..=6usize {
        let z = GLattice::trivial(&FiniteGroup::cyclic(n));
        for q in 1..=3 {
            let got = cohomology(&z, q, caps)?.group().clone();
            let want = if q % 2 == 0 { FinAbGroup::cyclic(n as u64) } else { FinAbGroup::trivial() };
            out.push(record(format!("H^{q}(Z/{n}, Z)"), &got, &want));
        }
    }
    for g in abelian_groups(16) {
        let f = g.factors_u64();
        let mut expected = 1u64;
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                expected *= num_integer::gcd(f[i], f[j]);
            }
        }
        let w = wedge_square(&g).group.order();
        out.push(Record {
            claim: format!("|wedge^2 {f:?}|"),
            lhs: json!(w.to_string()),
            rhs: json!(expected.to_string()),
            holds: w == expected.into(),
        });
    }
    for g in abelian_groups(8).into_iter().filter(|g| !g.is_trivial()) {
        let (t, _) = FiniteGroup::from_abelian(&g);
        let h3 = cohomology(&GLattice::trivial(&t), 3, caps)?.group().clone();
        let w = wedge_square(&g).group;
        out.push(record(format!("H^3({:?}, Z) = dual of wedge^2", g.factors_u64()), &h3, &w));
    }
    Ok(out)
}
