//! General engine for abelian scenarios.
//!
//! With `G = G̃/H̃_K` the Galois group of the distinguished field and
//! `H_i` the image of `H̃_i` in `G`, characters of the relative extensions
//! form `T = ⊕ H_i^∨`. The diagonal subgroup is the image of restriction
//! `G^∨ → T`; the Selmer-type subgroup keeps the tuples whose restrictions
//! to every local group `H_{i,v}` come from a single character of `G_v`.
//! The obstruction sits between `S/D` and its extension by the second
//! obstruction group of `K`, computed from exterior squares.

pub(crate) mod report;

pub use report::{render_text, Certificate, Sha, ShaReport};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::abgroup::{direct_sum, wedge_square, AbHom, AbSubgroup, FinAbGroup};
use crate::cyclic_engine::subquotient;
use crate::error::{Error, Result};
use crate::scenario::{abelian_f_ab_index, faithful_quotient, p_part, AbelianScenario, Designation};

/// Character-level data of a designated scenario.
#[derive(Clone, Debug)]
pub struct CharacterData {
    pub designation: Designation,
    /// `G = G̃/H̃_K` with its projection from `G̃`.
    pub g: FinAbGroup,
    pub projection: AbHom,
    /// Images `H_i ≤ G` of the other factor subgroups.
    pub h: Vec<AbSubgroup>,
    /// `T = ⊕ H_i^∨`.
    pub t: FinAbGroup,
    /// Restriction `G^∨ → T`.
    pub r: AbHom,
    projections: Vec<AbHom>,
    h_groups: Vec<crate::abgroup::SubgroupGroup>,
}

/// Builds `G`, the `H_i`, and the restriction map for the scenario's designation.
pub fn character_data(s: &AbelianScenario) -> Result<CharacterData> {
    let designation = s.designation()?;
    let q = designation.h_k.quotient();
    let g = q.group.clone();
    let projection = q.projection.clone();
    let h: Vec<AbSubgroup> = designation.others.iter().map(|f| f.subgroup.image_under(&projection)).collect();
    let h_groups: Vec<_> = h.iter().map(AbSubgroup::as_group).collect();
    let ds = direct_sum(&h_groups.iter().map(|x| x.group.clone()).collect::<Vec<_>>());
    let mut r = AbHom::zero(g.clone(), ds.group.clone());
    for (hg, inj) in h_groups.iter().zip(&ds.injections) {
        r = r.add(&inj.compose(&hg.inclusion.dual()));
    }
    Ok(CharacterData { designation, g, projection, h, t: ds.group.clone(), r, projections: ds.projections, h_groups })
}

/// Restriction of characters `Hom(G, ℚ/ℤ) → ⊕ Hom(H_i, ℚ/ℤ)`.
pub fn restriction_char(s: &AbelianScenario) -> Result<AbHom> {
    Ok(character_data(s)?.r)
}

/// Diagonal subgroup: the image of restriction.
pub fn d_diag(s: &AbelianScenario) -> Result<AbSubgroup> {
    Ok(character_data(s)?.r.image())
}

impl CharacterData {
    /// Tuples locally diagonal at a place with decomposition group `d ≤ G̃`.
    pub fn local_constraint(&self, d: &AbSubgroup) -> Result<AbSubgroup> {
        let parts: Vec<AbHom> = self
            .designation
            .others
            .iter()
            .zip(&self.h_groups)
            .map(|(f, hg)| -> Result<AbHom> {
                let local = d.intersect(&f.subgroup)?.image_under(&self.projection);
                let inner = hg.restrict(&local)?.as_group();
                Ok(inner.inclusion.dual())
            })
            .collect::<Result<_>>()?;
        let local = direct_sum(&parts.iter().map(|m| m.target().clone()).collect::<Vec<_>>());
        let mut rho = AbHom::zero(self.t.clone(), local.group.clone());
        for ((m, proj), inj) in parts.iter().zip(&self.projections).zip(&local.injections) {
            rho = rho.add(&inj.compose(&m.compose(proj)));
        }
        let global = rho.compose(&self.r).image();
        Ok(global.preimage_under(&rho))
    }

    /// Everywhere locally diagonal tuples over the given decomposition groups.
    pub fn s_ld(&self, profile: &[AbSubgroup]) -> Result<AbSubgroup> {
        let mut acc = AbSubgroup::full(&self.t);
        for d in profile {
            acc = acc.intersect(&self.local_constraint(d)?)?;
        }
        Ok(acc)
    }

    /// Images of profile subgroups in `G`.
    pub fn local_images(&self, profile: &[AbSubgroup]) -> Vec<AbSubgroup> {
        profile.iter().map(|d| d.image_under(&self.projection)).collect()
    }
}

/// Everywhere locally diagonal subgroup over the scenario's profile.
pub fn s_ld(s: &AbelianScenario) -> Result<AbSubgroup> {
    let cd = character_data(s)?;
    cd.s_ld(&s.profile_subgroups())
}

/// Second obstruction group of the field with group `G`: the cokernel of
/// `⊕_v ∧²G_v → ∧²G` (self-dual, so invariant factors match the kernel on duals).
pub fn sha2_k_torus(g: &FinAbGroup, local_images: &[AbSubgroup]) -> FinAbGroup {
    if g.rank() < 2 {
        return FinAbGroup::trivial();
    }
    let w = wedge_square(g);
    let mut gens = Vec::new();
    for d in local_images {
        let b = d.canonical_generators();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                gens.push(w.wedge(&b[i], &b[j]));
            }
        }
    }
    let span = AbSubgroup::new(w.group.clone(), gens).expect("wedges lie in the exterior square");
    span.quotient().group
}

/// Obstruction group of a single abelian field with group `G`.
pub fn sha_single_field(g: &FinAbGroup, local_images: &[AbSubgroup]) -> FinAbGroup {
    sha2_k_torus(g, local_images)
}

fn meet_all<'a>(g: &FinAbGroup, it: impl IntoIterator<Item = &'a AbSubgroup>) -> AbSubgroup {
    it.into_iter().fold(AbSubgroup::full(g), |acc, s| acc.intersect(s).expect("same ambient"))
}

/// Whether the Galois closure of the K side meets the compositum of the K′
/// side only in `k`, for the declared split: `N_F · ∩H̃_i = G̃`.
pub fn dw_check(s: &AbelianScenario) -> bool {
    let nf = meet_all(&s.group, s.k_factors.iter().map(|f| &f.subgroup));
    let comp = meet_all(&s.group, s.kprime_factors.iter().map(|f| &f.subgroup));
    nf.join(&comp).expect("same ambient").is_full()
}

/// The same criterion for the split "designated factor versus the rest".
fn dw_check_designated(s: &AbelianScenario, des: &Designation) -> bool {
    let comp = meet_all(&s.group, des.others.iter().map(|f| &f.subgroup));
    des.h_k.join(&comp).expect("same ambient").is_full()
}

/// For exactly two factors: the obstruction of their intersection field.
pub fn pollio_path(s: &AbelianScenario) -> Result<FinAbGroup> {
    let fs: Vec<_> = s.factors().collect();
    if fs.len() != 2 {
        return Err(Error::Input(format!("the two-factor path needs exactly 2 factors, got {}", fs.len())));
    }
    let j = fs[0].subgroup.join(&fs[1].subgroup)?;
    Ok(single_field_of(s, &j))
}

fn single_field_of(s: &AbelianScenario, h: &AbSubgroup) -> FinAbGroup {
    let q = h.quotient();
    let images: Vec<AbSubgroup> = s.profile_subgroups().iter().map(|d| d.image_under(&q.projection)).collect();
    sha_single_field(&q.group, &images)
}

/// Everything the engine computes, including every certificate that holds.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: ShaReport,
    pub s_ld: AbSubgroup,
    pub d_diag: AbSubgroup,
    pub holding: Vec<Certificate>,
    /// Two-factor answer when exactly two factors are present.
    pub pollio: Option<FinAbGroup>,
}

/// Assembles the report for an abelian scenario.
pub fn assemble(s: &AbelianScenario) -> Result<ShaReport> {
    Ok(analyze(s)?.report)
}

/// Full analysis; non-faithful input is first passed to its faithful quotient.
pub fn analyze(s: &AbelianScenario) -> Result<Analysis> {
    let s = &faithful_quotient(s);
    let cd = character_data(s)?;
    let profile = s.profile_subgroups();
    let s_ld = cd.s_ld(&profile)?;
    let d_diag = cd.r.image();
    if !d_diag.is_subgroup_of(&s_ld)? {
        return Err(Error::Internal("diagonal subgroup is not locally diagonal".into()));
    }
    let s_mod_d = subquotient(&s_ld, &d_diag)?;
    let images = cd.local_images(&profile);
    let sha2 = sha2_k_torus(&cd.g, &images);
    let m = cd.designation.others.len();

    let mut holding = Vec::new();
    if m >= 1 && (dw_check(s) || dw_check_designated(s, &cd.designation)) {
        holding.push(Certificate::DemarcheWei);
    }
    let pollio = if s.factors().count() == 2 { Some(pollio_path(s)?) } else { None };
    if pollio.is_some() {
        holding.push(Certificate::Pollio);
    }
    if m == 0 {
        holding.push(Certificate::SingleField);
    }
    if cd.g.is_cyclic() {
        holding.push(Certificate::CyclicFactor);
    }
    if images.iter().any(AbSubgroup::is_full) {
        holding.push(Certificate::FullDecomposition);
    }
    if cd.h.iter().any(AbSubgroup::is_full) {
        holding.push(Certificate::IntersectionTrivial);
    }
    if sha2.is_trivial() {
        holding.push(Certificate::Sha2Vanishes);
    }

    let certificate = holding.first().copied().unwrap_or(Certificate::None);
    let sha = match certificate {
        Certificate::DemarcheWei => Sha::Exact(FinAbGroup::trivial()),
        Certificate::Pollio => Sha::Exact(pollio.clone().expect("two factors")),
        Certificate::SingleField => Sha::Exact(sha_single_field(&cd.g, &images)),
        Certificate::None => Sha::Bounds { lower: s_mod_d.clone(), upper_order: s_mod_d.order() * sha2.order() },
        _ => Sha::Exact(s_mod_d.clone()),
    };
    let report = ShaReport {
        s_mod_d,
        sha2_k: sha2,
        sha,
        certificate,
        tamagawa: None,
        designation: cd.designation.name.clone(),
        profile_note: s.profile_note(),
    }
    .with_tamagawa(&abelian_f_ab_index(s));
    report.check().map_err(Error::Internal)?;
    Ok(Analysis { report, s_ld, d_diag, holding, pollio })
}

/// `[F_ab : k] / |Ш|` in lowest terms.
pub fn tamagawa(s: &AbelianScenario, sha_order: &BigInt) -> BigRational {
    BigRational::new(abelian_f_ab_index(s), sha_order.clone())
}

/// Primes dividing the gcd of the factor degrees.
pub fn split_primes(s: &AbelianScenario) -> Vec<u64> {
    let d = s.factors().fold(BigInt::from(0), |acc, f| acc.gcd(&f.subgroup.index()));
    let mut d = d.to_u64().expect("degree fits in u64");
    let mut out = Vec::new();
    let mut p = 2;
    while d > 1 {
        if d % p == 0 {
            out.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    out
}

/// Reports for the maximal `p`-primary subalgebras, for each prime dividing
/// the gcd of the factor degrees.
pub fn p_primary_split(s: &AbelianScenario) -> Result<BTreeMap<u64, ShaReport>> {
    let mut out = BTreeMap::new();
    for p in split_primes(s) {
        let sp = faithful_quotient(&p_part(s, p)?);
        out.insert(p, assemble(&sp)?);
    }
    Ok(out)
}

/// Direct sum of exact reports, in invariant-factor form.
pub fn combine_exact<'a>(reports: impl IntoIterator<Item = &'a ShaReport>) -> Option<FinAbGroup> {
    let mut orders: Vec<BigInt> = Vec::new();
    for r in reports {
        orders.extend(r.exact()?.factors().iter().cloned());
    }
    Some(FinAbGroup::from_cyclic_orders(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::elem;
    use crate::scenario::{Factor, LocalProfile};

    fn sub(g: &FinAbGroup, gens: &[&[i64]]) -> AbSubgroup {
        AbSubgroup::new(g.clone(), gens.iter().map(|x| elem(x)).collect()).unwrap()
    }

    fn scen(g: &FinAbGroup, k: AbSubgroup, others: Vec<AbSubgroup>) -> AbelianScenario {
        AbelianScenario {
            group: g.clone(),
            k_factors: vec![Factor::new("K", k)],
            kprime_factors: others.into_iter().enumerate().map(|(i, h)| Factor::new(format!("K{}", i + 1), h)).collect(),
            profile: LocalProfile::default(),
            designate: Some("K".into()),
        }
    }

    #[test]
    fn restriction_examples() {
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        let s0 = scen(&g, AbSubgroup::trivial(&g), vec![]);
        assert!(restriction_char(&s0).unwrap().target().is_trivial());
        assert!(d_diag(&s0).unwrap().is_trivial());

        let s1 = scen(&g, AbSubgroup::trivial(&g), vec![sub(&g, &[&[1, 0]])]);
        let r = restriction_char(&s1).unwrap();
        assert_eq!(r.target().factors_u64(), vec![2]);
        assert!(r.is_surjective());
        assert!(d_diag(&s1).unwrap().is_full());

        let sfull = scen(&g, AbSubgroup::trivial(&g), vec![AbSubgroup::full(&g)]);
        // K₁ = k: the relative group is all of G, so restriction is an isomorphism.
        let r = restriction_char(&sfull).unwrap();
        assert!(r.is_injective() && r.is_surjective());

        // Two copies of K₁ = k: a diagonal copy of G^∨ inside G^∨ ⊕ G^∨.
        let s2 = scen(&g, AbSubgroup::trivial(&g), vec![AbSubgroup::full(&g), AbSubgroup::full(&g)]);
        let d = d_diag(&s2).unwrap();
        assert_eq!(d.ambient().factors_u64(), vec![2, 2, 2, 2]);
        assert_eq!(d.order(), BigInt::from(4));
        // K₁ = K₂ = K̃: the relative groups are trivial.
        let s3 = scen(&g, AbSubgroup::trivial(&g), vec![AbSubgroup::trivial(&g), AbSubgroup::trivial(&g)]);
        assert!(d_diag(&s3).unwrap().ambient().is_trivial());
    }

    #[test]
    fn s_ld_examples() {
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        let mut s = scen(&g, AbSubgroup::trivial(&g), vec![AbSubgroup::trivial(&g), AbSubgroup::trivial(&g)]);
        s.profile = LocalProfile { chebotarev: false, extra: vec![AbSubgroup::trivial(&g)] };
        assert!(s_ld(&s).unwrap().is_full());
        s.profile = LocalProfile { chebotarev: true, extra: vec![AbSubgroup::full(&g)] };
        assert_eq!(s_ld(&s).unwrap(), d_diag(&s).unwrap());
    }

    #[test]
    fn sha2_examples() {
        let z6 = FinAbGroup::cyclic(6);
        assert!(sha2_k_torus(&z6, &[]).is_trivial());
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        let cyc = crate::abgroup::cyclic_subgroups(&g);
        assert_eq!(sha2_k_torus(&g, &cyc).factors_u64(), vec![2]);
        let mut with_full = cyc.clone();
        with_full.push(AbSubgroup::full(&g));
        assert!(sha2_k_torus(&g, &with_full).is_trivial());
    }

    #[test]
    fn dw_examples() {
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        assert!(dw_check(&scen(&g, sub(&g, &[&[0, 1]]), vec![sub(&g, &[&[1, 0]])])));
        let s = scen(&g, sub(&g, &[&[1, 0]]), vec![sub(&g, &[&[1, 0]])]);
        assert!(!dw_check(&s));
        assert!(dw_check(&scen(&g, sub(&g, &[&[1, 0]]), vec![])));
    }

    #[test]
    fn pollio_examples() {
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        let s = scen(&g, sub(&g, &[&[0, 1]]), vec![sub(&g, &[&[1, 0]])]);
        assert!(pollio_path(&s).unwrap().is_trivial());
        let g3 = FinAbGroup::from_u64(&[2, 2, 2]).unwrap();
        let s = scen(&g3, AbSubgroup::trivial(&g3), vec![sub(&g3, &[&[0, 0, 1]])]);
        assert_eq!(pollio_path(&s).unwrap().factors_u64(), vec![2]);
        let z4 = FinAbGroup::cyclic(4);
        let s = scen(&z4, AbSubgroup::trivial(&z4), vec![sub(&z4, &[&[2]])]);
        assert!(pollio_path(&s).unwrap().is_trivial());
        assert!(pollio_path(&scen(&z4, AbSubgroup::trivial(&z4), vec![])).is_err());
    }

    #[test]
    fn biquadratic_single_field() {
        let g = FinAbGroup::from_u64(&[2, 2]).unwrap();
        let r = assemble(&scen(&g, AbSubgroup::trivial(&g), vec![])).unwrap();
        assert_eq!(r.certificate, Certificate::SingleField);
        assert_eq!(r.exact().unwrap().factors_u64(), vec![2]);
        assert_eq!(r.tamagawa, Some(BigRational::new(BigInt::from(4), BigInt::from(2))));
    }

    #[test]
    fn cyclic_single_factor_tamagawa() {
        for n in 2..10u64 {
            let g = FinAbGroup::cyclic(n);
            let r = assemble(&scen(&g, AbSubgroup::trivial(&g), vec![])).unwrap();
            assert!(r.exact().unwrap().is_trivial());
            assert_eq!(r.tamagawa, Some(BigRational::from_integer(BigInt::from(n))));
        }
    }

    #[test]
    fn split_examples() {
        let z6 = FinAbGroup::cyclic(6);
        let s = scen(&z6, AbSubgroup::trivial(&z6), vec![]);
        let m = p_primary_split(&s).unwrap();
        assert_eq!(m.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert!(m.values().all(|r| r.exact().unwrap().is_trivial()));

        let s = scen(&z6, sub(&z6, &[&[3]]), vec![sub(&z6, &[&[2]])]);
        assert!(p_primary_split(&s).unwrap().is_empty());
    }
}
