//! Brute-force group cohomology on explicit lattices, used to check the engines.

mod cochain;
mod lattice;

pub use cochain::{
    bar_differential, cohomology, cohomology_with, inflation, restriction, Cochains, Cohomology, Method,
};
pub use lattice::{GLattice, QuotientLattice};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::abelian_engine::report::{big_json, factors_json};
use crate::abelian_engine::{analyze, Certificate};
use crate::abgroup::{cokernel_data, AbSubgroup, FinAbGroup, IntMatrix};
use crate::scenario::{faithful_quotient, AbelianScenario, FiniteGroup, TableScenario, TableSubgroup};
use crate::{Error, Result};

use cochain::restriction_to;
pub(crate) use cochain::factors;
use lattice::coset_action;

/// Size limits for oracle computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order in degrees up to two.
    pub max_order: usize,
    /// Largest group order in degree three and above.
    pub max_order_high: usize,
    /// Largest lattice rank accepted as input.
    pub max_rank: usize,
    /// Largest number of rows of a dense differential.
    pub max_cochain_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_order: 16, max_order_high: 8, max_rank: 32, max_cochain_dim: 6000 }
    }
}

impl Caps {
    /// Caps for the exhaustive order-8 corpus, whose largest lattices have rank 49.
    pub fn corpus() -> Self {
        Caps { max_rank: 64, ..Caps::default() }
    }

    fn unlimited_rank(self) -> Self {
        Caps { max_rank: usize::MAX, ..self }
    }

    pub(crate) fn check_group(&self, n: usize, q: usize) -> Result<()> {
        let cap = if q <= 2 { self.max_order } else { self.max_order_high };
        if n > cap {
            return Err(Error::Cap {
                what: format!("group order for degree {q}"),
                actual: n as u64,
                cap: cap as u64,
                hint: format!("rerun with --cap {n} or larger"),
            });
        }
        Ok(())
    }

    pub(crate) fn check_rank(&self, r: usize) -> Result<()> {
        if r > self.max_rank {
            return Err(Error::Cap {
                what: "lattice rank".into(),
                actual: r as u64,
                cap: self.max_rank as u64,
                hint: format!("rerun with --rank-cap {r} or larger"),
            });
        }
        Ok(())
    }

    pub(crate) fn check_cochains(&self, dim: usize) -> Result<()> {
        if dim > self.max_cochain_dim {
            return Err(Error::Cap {
                what: "dense cochain dimension".into(),
                actual: dim as u64,
                cap: self.max_cochain_dim as u64,
                hint: format!("rerun with --cochain-cap {dim} or larger"),
            });
        }
        Ok(())
    }
}

fn all_ones(n: usize) -> Vec<i64> {
    vec![1; n]
}

/// Character lattice of the torus `R_{K/k}^1 G_m`: `ℤ[G/H] / ℤ·(sum of cosets)`.
pub fn build_tk(group: &FiniteGroup, h: &TableSubgroup) -> Result<QuotientLattice> {
    let perm = GLattice::coset_module(group, h)?;
    let n = perm.rank();
    perm.quotient(&[all_ones(n)])
}

/// Character lattice of the multinorm-one torus: `⊕ᵢ ℤ[G/Hᵢ]` modulo the
/// sum of all basis vectors.
pub fn build_that(s: &TableScenario) -> Result<QuotientLattice> {
    let parts = s
        .factors()
        .map(|f| GLattice::coset_module(&s.group, &f.subgroup))
        .collect::<Result<Vec<_>>>()?;
    let sum = GLattice::direct_sum(&parts)?;
    let n = sum.rank();
    sum.quotient(&[all_ones(n)])
}

/// Character lattice of the torus whose first cohomology carries the answer,
/// for the split into a field with subgroup `h_k` and the remaining factors.
/// Ambient basis: pairs `(x, y)` with `x ∈ G/H_K`, `y ∈ G/Hᵢ`, summand by summand.
/// Relations: for each `i, y` the sum over `x`, and for each `x` the sum over
/// all `i, y`.
pub fn build_shat(group: &FiniteGroup, h_k: &TableSubgroup, others: &[TableSubgroup]) -> Result<QuotientLattice> {
    if others.is_empty() {
        return Err(Error::Input("the two-sided lattice needs at least one factor besides the designated one".into()));
    }
    let xs = coset_action(group, h_k);
    let ys: Vec<Vec<Vec<usize>>> = others.iter().map(|h| coset_action(group, h)).collect();
    let nx = xs[0].len();
    let sizes: Vec<usize> = ys.iter().map(|y| y[0].len()).collect();
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| { let o = *acc; *acc += nx * s; Some(o) }).collect();
    let total: usize = sizes.iter().map(|s| nx * s).sum();
    let perm: Vec<Vec<usize>> = (0..group.order())
        .map(|g| {
            let mut p = vec![0; total];
            for (i, y) in ys.iter().enumerate() {
                for x in 0..nx {
                    for c in 0..sizes[i] {
                        p[offsets[i] + x * sizes[i] + c] = offsets[i] + xs[g][x] * sizes[i] + y[g][c];
                    }
                }
            }
            p
        })
        .collect();
    let ambient = GLattice::permutation(group, &perm)?;
    let mut relations = Vec::new();
    for (i, &ny) in sizes.iter().enumerate() {
        for c in 0..ny {
            let mut v = vec![0i64; total];
            for x in 0..nx {
                v[offsets[i] + x * ny + c] = 1;
            }
            relations.push(v);
        }
    }
    for x in 0..nx {
        let mut v = vec![0i64; total];
        for (i, &ny) in sizes.iter().enumerate() {
            for c in 0..ny {
                v[offsets[i] + x * ny + c] = 1;
            }
        }
        relations.push(v);
    }
    ambient.quotient(&relations)
}

/// Kernel of `H^q(G, M) → ∏_D H^q(D, M)` over the given subgroups. Degrees
/// above one are shifted down through [`GLattice::cosyzygy`].
pub fn sha_oracle(m: &GLattice, q: usize, profile: &[TableSubgroup], caps: &Caps) -> Result<FinAbGroup> {
    if q == 0 {
        return Err(Error::Input("the local-global kernel is computed for degrees q >= 1".into()));
    }
    caps.check_group(m.group().order(), q)?;
    caps.check_rank(m.rank())?;
    let inner = caps.unlimited_rank();
    let mut lattice = m.clone();
    for _ in 1..q {
        lattice = lattice.cosyzygy()?;
    }
    sha_degree_one(&lattice, profile, &inner)
}

fn sha_degree_one(m: &GLattice, profile: &[TableSubgroup], caps: &Caps) -> Result<FinAbGroup> {
    let h = cohomology(m, 1, caps)?;
    let mut kernel = AbSubgroup::full(h.group());
    for d in profile {
        if kernel.is_trivial() {
            break;
        }
        let (md, emb) = m.restrict(d);
        let hd = cohomology(&md, 1, caps)?;
        let map = restriction_to(&h, &hd, m.group().order(), &emb)?;
        kernel = kernel.intersect(&map.kernel())?;
    }
    Ok(kernel.as_group().group)
}

/// Designated field subgroup and the remaining factor subgroups.
pub fn split(s: &TableScenario) -> (TableSubgroup, Vec<TableSubgroup>) {
    let (k, others) = s.designation();
    (k.subgroup, others.into_iter().map(|f| f.subgroup).collect())
}

/// The oracle answer for the designated split: first local-global kernel of
/// the two-sided lattice, or the second one of the single field when no other
/// factor is present.
pub fn sha_split(s: &TableScenario, caps: &Caps) -> Result<FinAbGroup> {
    let (k, others) = split(s);
    let profile = s.profile_subgroups();
    if others.is_empty() {
        return sha_oracle(&build_tk(&s.group, &k)?.lattice, 2, &profile, caps);
    }
    sha_oracle(&build_shat(&s.group, &k, &others)?.lattice, 1, &profile, caps)
}

/// Second local-global kernel of the designated field's character lattice.
pub fn sha2_designated(s: &TableScenario, caps: &Caps) -> Result<FinAbGroup> {
    let (k, _) = split(s);
    sha_oracle(&build_tk(&s.group, &k)?.lattice, 2, &s.profile_subgroups(), caps)
}

/// Second local-global kernel of the multinorm character lattice, computed
/// without any split.
pub fn sha_multinorm(s: &TableScenario, caps: &Caps) -> Result<FinAbGroup> {
    sha_oracle(&build_that(s)?.lattice, 2, &s.profile_subgroups(), caps)
}

/// `H^1(G, T̂)` of the multinorm character lattice.
pub fn h1_multinorm(s: &TableScenario, caps: &Caps) -> Result<FinAbGroup> {
    Ok(cohomology(&build_that(s)?.lattice, 1, caps)?.group().clone())
}

/// `G / N` with `N` the normal subgroup generated by the given subgroups and
/// all commutators, from the presentation `e_a + e_b = e_{ab}`, `e_h = 0`.
pub fn abelian_quotient(group: &FiniteGroup, subgroups: &[TableSubgroup]) -> Result<FinAbGroup> {
    let n = group.order();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[a] += 1;
            v[b] += 1;
            v[group.mul(a, b)] -= 1;
            cols.push(v);
        }
    }
    for h in subgroups {
        for &x in h.elements() {
            let mut v = vec![BigInt::zero(); n];
            v[x] = BigInt::one();
            cols.push(v);
        }
    }
    let ck = cokernel_data(&IntMatrix::from_columns(n, &cols));
    if ck.free_rank != 0 {
        return Err(Error::Internal("abelian quotient presentation has free part".into()));
    }
    Ok(FinAbGroup::new(ck.torsion)?)
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub claim: String,
    pub lhs: Value,
    pub rhs: Value,
    pub holds: bool,
}

impl Record {
    pub fn to_json_value(&self) -> Value {
        json!({
            "claim": self.claim,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": if self.holds { "pass" } else { "fail" },
        })
    }
}

/// Engine-versus-oracle comparison for one abelian scenario.
#[derive(Clone, Debug)]
pub struct Verification {
    pub s_mod_d: FinAbGroup,
    pub sha_oracle: FinAbGroup,
    pub sha2_oracle: FinAbGroup,
    pub certificate: Certificate,
    pub records: Vec<Record>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(self.records.iter().map(Record::to_json_value).collect())
    }
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    !a.is_zero() && (b % a).is_zero()
}

/// Checks the engine's bounds `|S/D|  |  |Ш|  |  |S/D|·|Ш²|` against the
/// oracle, and equality wherever the engine claims an exact answer.
pub fn verify_bounds(s: &AbelianScenario, caps: &Caps) -> Result<Verification> {
    let s = faithful_quotient(s);
    let analysis = analyze(&s)?;
    let report = &analysis.report;
    let mut table = s.to_table();
    table.designate = Some(report.designation.clone());
    let sha = sha_split(&table, caps)?;
    let sha2 = sha2_designated(&table, caps)?;
    let lo = report.s_mod_d.order();
    let hi = &lo * sha2.order();
    let n = sha.order();
    let mut records = vec![
        Record {
            claim: "|S/D| divides |oracle Sha|".into(),
            lhs: factors_json(&report.s_mod_d),
            rhs: factors_json(&sha),
            holds: divides(&lo, &n),
        },
        Record {
            claim: "|oracle Sha| divides |S/D| * |oracle Sha2 of the designated field|".into(),
            lhs: factors_json(&sha),
            rhs: json!({"s_mod_d": factors_json(&report.s_mod_d), "sha2": factors_json(&sha2), "order": big_json(&hi)}),
            holds: divides(&n, &hi),
        },
    ];
    if report.certificate.pins_s_mod_d() {
        records.push(Record {
            claim: format!("oracle Sha equals S/D under certificate {}", report.certificate.as_str()),
            lhs: factors_json(&sha),
            rhs: factors_json(&report.s_mod_d),
            holds: sha == report.s_mod_d,
        });
    }
    if let Some(exact) = report.exact() {
        records.push(Record {
            claim: "engine answer equals oracle Sha".into(),
            lhs: factors_json(exact),
            rhs: factors_json(&sha),
            holds: exact == &sha,
        });
    }
    if s.profile.chebotarev {
        records.push(Record {
            claim: "engine Sha2 of the designated field equals the oracle".into(),
            lhs: factors_json(&report.sha2_k),
            rhs: factors_json(&sha2),
            holds: report.sha2_k == sha2,
        });
    }
    Ok(Verification {
        s_mod_d: report.s_mod_d.clone(),
        sha_oracle: sha,
        sha2_oracle: sha2,
        certificate: report.certificate,
        records,
    })
}

/// Outcome of the inflation check on the `p`-primary part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflationCheck {
    pub quotient: Vec<u64>,
    pub p_part: Vec<u64>,
    pub holds: bool,
}

/// `p`-primary part of a finite abelian group.
pub fn p_primary(g: &FinAbGroup, p: u64) -> FinAbGroup {
    let pb = BigInt::from(p);
    let parts: Vec<BigInt> = g
        .factors()
        .iter()
        .map(|d| {
            let mut q = BigInt::one();
            let mut d = d.clone();
            while (&d % &pb).is_zero() {
                d /= &pb;
                q *= &pb;
            }
            q
        })
        .collect();
    FinAbGroup::from_cyclic_orders(&parts)
}

/// For `G = N ⋊ P` with `N` normal of order prime to `p` and `G/N` a
/// `p`-group, checks that inflation `H^q(G/N, ℤ) → H^q(G, ℤ)` is an
/// isomorphism onto the `p`-primary part.
pub fn verify_inflation_ppart(group: &FiniteGroup, normal: &TableSubgroup, p: u64, q: usize, caps: &Caps) -> Result<InflationCheck> {
    let bad = |m: &str| Err(Error::Input(format!("invalid decomposition: {m}")));
    if !group.generate(normal.elements()).eq(normal) || !group.is_normal(normal) {
        return bad("the given subgroup is not normal");
    }
    if (normal.order() as u64).is_multiple_of(p) {
        return bad("the normal subgroup has order divisible by p");
    }
    let index = (group.order() / normal.order()) as u64;
    let mut k = index;
    while k.is_multiple_of(p) {
        k /= p;
    }
    if k != 1 {
        return bad("the quotient is not a p-group");
    }
    if q == 0 {
        return Ok(InflationCheck { quotient: Vec::new(), p_part: Vec::new(), holds: true });
    }
    let (quot, index_of) = group.quotient(normal)?;
    let hq = cohomology(&GLattice::trivial(&quot), q, caps)?;
    let hg = cohomology(&GLattice::trivial(group), q, caps)?;
    let inf = inflation(&hq, &hg, &index_of)?;
    let target = p_primary(hg.group(), p);
    let holds = inf.is_injective() && hq.group().order() == target.order() && hq.group() == &target;
    Ok(InflationCheck { quotient: factors(hq.group()), p_part: factors(&target), holds })
}
