//! Engine for a distinguished cyclic factor of prime-power degree `p^e`.
//!
//! Characters of the other factors' relative extensions are coordinates in
//! `⊕ ℤ/p^{e_i}`. A tuple is locally diagonal at a place when one residue
//! mod `p^{e(v)}` reduces to every coordinate mod `p^{e_i(v)}`. The
//! obstruction is the group of everywhere locally diagonal tuples modulo the
//! diagonal image of `ℤ/p^e`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::abelian_engine::{Certificate, Sha, ShaReport};
use crate::abgroup::{AbHom, AbSubgroup, Elem, FinAbGroup};
use crate::error::{Error, Result};
use crate::scenario::{CyclicScenario, PlaceDatum};

/// Element count above which `g_group` switches from enumeration to lattice intersection.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

/// How the locally diagonal predicate is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Congruence merge per element; lattice intersection for large groups.
    #[default]
    Fast,
    /// Brute force over residues, cross-checked against the merge and the covering formulation.
    Paranoid,
}

/// `⊕ ℤ/p^{e_i}` in invariant-factor form. Coordinate `i` of a tuple lives
/// at group position `r - 1 - i` when `e_i > 0`, since the exponent list is nonincreasing.
#[derive(Clone, Debug)]
pub struct CyclicAmbient {
    pub group: FinAbGroup,
    p: u64,
    e_list: Vec<u32>,
}

impl CyclicAmbient {
    pub fn new(cs: &CyclicScenario) -> Self {
        let orders: Vec<BigInt> = cs.e_list.iter().rev().filter(|&&e| e > 0).map(|&e| BigInt::from(cs.pow(e))).collect();
        let group = FinAbGroup::new(orders).expect("prime powers in increasing order form a chain");
        CyclicAmbient { group, p: cs.p, e_list: cs.e_list.clone() }
    }

    fn nonzero(&self) -> usize {
        self.e_list.iter().filter(|&&e| e > 0).count()
    }

    /// Group element of a tuple; coordinates are reduced.
    pub fn to_group(&self, a: &[u64]) -> Elem {
        let r = self.nonzero();
        let mut x = vec![BigInt::from(0); r];
        for (i, (&ai, &ei)) in a.iter().zip(&self.e_list).enumerate() {
            if ei > 0 {
                x[r - 1 - i] = BigInt::from(ai % self.p.pow(ei));
            }
        }
        x
    }

    /// Tuple of a group element.
    pub fn from_group(&self, x: &[BigInt]) -> Vec<u64> {
        let r = self.nonzero();
        (0..self.e_list.len()).map(|i| if self.e_list[i] > 0 { x[r - 1 - i].to_u64().unwrap() } else { 0 }).collect()
    }

    /// All tuples, first coordinate fastest.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        self.group.elements().map(move |x| self.from_group(&x))
    }
}

fn check_len(cs: &CyclicScenario, a: &[u64]) -> Result<()> {
    if a.len() != cs.m() {
        return Err(Error::Dimension { expected: cs.m(), got: a.len() });
    }
    Ok(())
}

/// Brute force: tries every residue `n` mod `p^{e(v)}`.
pub fn locally_diagonal_brute(cs: &CyclicScenario, a: &[u64], d: &PlaceDatum) -> Result<bool> {
    check_len(cs, a)?;
    let mods: Vec<u64> = d.e_i_v.iter().map(|&f| cs.pow(f)).collect();
    Ok((0..cs.pow(d.e_v)).any(|n| a.iter().zip(&mods).all(|(&ai, &q)| n % q == ai % q)))
}

/// Congruence merge: congruences modulo powers of one prime are jointly
/// solvable iff they agree pairwise modulo the smaller modulus, and every
/// modulus divides `p^{e(v)}`.
pub fn locally_diagonal_merge(cs: &CyclicScenario, a: &[u64], d: &PlaceDatum) -> Result<bool> {
    check_len(cs, a)?;
    let mut best: Option<(u64, u64)> = None;
    for (&ai, &f) in a.iter().zip(&d.e_i_v) {
        let q = cs.pow(f);
        let r = ai % q;
        match best {
            Some((bq, br)) if bq >= q => {
                if br % q != r {
                    return Ok(false);
                }
            }
            Some((bq, br)) => {
                if r % bq != br {
                    return Ok(false);
                }
                best = Some((q, r));
            }
            None => best = Some((q, r)),
        }
    }
    Ok(true)
}

/// Whether `a` is locally diagonal at the place class `d`.
pub fn locally_diagonal_at(cs: &CyclicScenario, a: &[u64], d: &PlaceDatum) -> Result<bool> {
    let brute = locally_diagonal_brute(cs, a, d)?;
    debug_assert_eq!(brute, locally_diagonal_merge(cs, a, d)?);
    Ok(brute)
}

/// Largest `r ≤ cap` with `p^r | (n - a)`.
fn agreement(p: u64, n: u64, a: u64, cap: u32) -> u32 {
    let diff = n.abs_diff(a);
    let mut r = 0;
    let mut q = p;
    while r < cap && diff.is_multiple_of(q) {
        r += 1;
        q = q.saturating_mul(p);
    }
    r
}

/// The covering formulation: for each place class there is a residue `n`
/// mod `p^{e_1}` such that every coordinate outside the index set
/// `{i : n ≡ a_i mod p^{e_i}}` agrees with `n` to at least `e_i(v)` digits.
pub fn omega_cover_check(a: &[u64], cs: &CyclicScenario) -> Result<bool> {
    check_len(cs, a)?;
    let Some(&e1) = cs.e_list.first() else { return Ok(true) };
    let p = cs.p;
    let covered = |d: &PlaceDatum| {
        (0..cs.pow(e1)).any(|n| {
            (0..cs.m()).all(|i| {
                let ei = cs.e_list[i];
                let ai = a[i] % cs.pow(ei);
                let in_index_set = n % cs.pow(ei) == ai;
                in_index_set || d.e_i_v[i] <= agreement(p, n, ai, ei)
            })
        })
    };
    Ok(cs.places.iter().all(covered))
}

/// Image of `ℤ/p^e` under componentwise reduction.
pub fn diagonal_group(cs: &CyclicScenario) -> AbSubgroup {
    let amb = CyclicAmbient::new(cs);
    let one = amb.to_group(&vec![1; cs.m()]);
    AbSubgroup::new(amb.group.clone(), vec![one]).expect("element of the ambient group")
}

/// Everywhere locally diagonal tuples.
pub fn g_group(cs: &CyclicScenario, mode: Mode) -> Result<AbSubgroup> {
    let amb = CyclicAmbient::new(cs);
    let size = amb.group.order().to_u64().unwrap_or(u64::MAX);
    if mode == Mode::Fast && size > ENUMERATION_LIMIT {
        return g_group_lattice(cs, &amb);
    }
    if size > ENUMERATION_LIMIT {
        return Err(Error::Cap {
            what: "cyclic ambient order for enumeration".into(),
            actual: size,
            cap: ENUMERATION_LIMIT,
            hint: "rerun without --paranoid".into(),
        });
    }
    let mut gens = Vec::new();
    for a in amb.tuples() {
        let mut ok = true;
        for d in &cs.places {
            let v = match mode {
                Mode::Fast => locally_diagonal_merge(cs, &a, d)?,
                Mode::Paranoid => {
                    let b = locally_diagonal_brute(cs, &a, d)?;
                    if b != locally_diagonal_merge(cs, &a, d)? {
                        return Err(Error::Internal(format!("congruence merge disagrees at {a:?}, place {}", d.label)));
                    }
                    b
                }
            };
            if !v {
                ok = false;
                break;
            }
        }
        if mode == Mode::Paranoid && ok != omega_cover_check(&a, cs)? {
            return Err(Error::Internal(format!("covering formulation disagrees at {a:?}")));
        }
        if ok {
            gens.push(amb.to_group(&a));
        }
    }
    let g = AbSubgroup::new(amb.group.clone(), gens)?;
    if mode == Mode::Paranoid && g != g_group_lattice(cs, &amb)? {
        return Err(Error::Internal("lattice intersection disagrees with enumeration".into()));
    }
    Ok(g)
}

/// Per place: preimage of the local diagonal under reduction to `⊕ ℤ/p^{e_i(v)}`.
fn g_group_lattice(cs: &CyclicScenario, amb: &CyclicAmbient) -> Result<AbSubgroup> {
    let mut acc = AbSubgroup::full(&amb.group);
    for d in &cs.places {
        let local = CyclicScenario { p: cs.p, e: cs.e, e_list: d.e_i_v.clone(), places: vec![] };
        // The local exponents need not be sorted; sort them with a permutation.
        let mut perm: Vec<usize> = (0..cs.m()).collect();
        perm.sort_by(|&x, &y| d.e_i_v[y].cmp(&d.e_i_v[x]).then(x.cmp(&y)));
        let sorted = CyclicScenario { e_list: perm.iter().map(|&i| local.e_list[i]).collect(), ..local };
        let target = CyclicAmbient::new(&sorted);
        let images: Vec<Elem> = amb
            .group
            .generators()
            .iter()
            .map(|x| {
                let a = amb.from_group(x);
                let b: Vec<u64> = perm.iter().map(|&i| a[i]).collect();
                target.to_group(&b)
            })
            .collect();
        let red = AbHom::from_images(amb.group.clone(), target.group.clone(), &images)?;
        let diag = AbSubgroup::new(target.group.clone(), vec![target.to_group(&vec![1; cs.m()])])?;
        // Residues mod p^{e(v)} reach every diagonal class since e_i(v) ≤ e(v).
        acc = acc.intersect(&diag.preimage_under(&red))?;
    }
    Ok(acc)
}

/// `S / T` for subgroups `T ≤ S` of one ambient group.
pub fn subquotient(s: &AbSubgroup, t: &AbSubgroup) -> Result<FinAbGroup> {
    let sg = s.as_group();
    Ok(sg.restrict(t)?.quotient().group)
}

/// Obstruction group of a cyclic scenario: `G(K₀,K′)` modulo the diagonal.
pub fn sha_cyclic(cs: &CyclicScenario, mode: Mode) -> Result<ShaReport> {
    let g = g_group(cs, mode)?;
    let d = diagonal_group(cs);
    if !d.is_subgroup_of(&g)? {
        return Err(Error::Internal("diagonal tuples are not locally diagonal".into()));
    }
    let sha = subquotient(&g, &d)?;
    Ok(ShaReport {
        s_mod_d: sha.clone(),
        sha2_k: FinAbGroup::trivial(),
        sha: Sha::Exact(sha),
        certificate: Certificate::CyclicFactor,
        tamagawa: None,
        designation: "K0".into(),
        profile_note: format!("relative to the {} listed place class(es)", cs.places.len()),
    })
}
