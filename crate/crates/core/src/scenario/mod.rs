//! Scenario data: an étale algebra `L = K × K′` encoded as subgroup data of
//! a finite Galois group, together with the decomposition groups of places.
//!
//! Two modes exist. Abelian scenarios use [`FinAbGroup`] and feed every
//! engine; table scenarios use an explicit multiplication table and are only
//! consumed by the cohomology oracle.

mod cyclic;
mod derive;
mod finite_group;

pub use cyclic::{CyclicScenario, PlaceDatum};
pub use derive::{
    base_change_to_f, chebotarev_profile, derive_cyclic, f_ab_index, faithful_quotient, local_degrees,
    normalize_redundant_factors, p_part, DerivedCyclic, LocalOrders,
};
pub(crate) use derive::abelian_f_ab_index;
pub use finite_group::{Cosets, FiniteGroup, TableSubgroup};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::abgroup::{cyclic_subgroups, AbError, AbSubgroup, Elem, FinAbGroup};

/// Largest table group accepted by the parser.
pub const TABLE_ORDER_LIMIT: usize = 24;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("malformed JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("factor subgroups share the nontrivial core element {element}; the scenario is not faithful")]
    NotFaithful { element: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no factor named {0:?}")]
    UnknownFactor(String),
    #[error("quotient by factor {name:?} is {structure}, not cyclic of prime-power order")]
    NotCyclicPrimePower { name: String, structure: String },
    #[error("this operation needs an abelian scenario")]
    NotAbelian,
    #[error(transparent)]
    Group(#[from] AbError),
}

fn invalid<T>(field: impl Into<String>, message: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError::Invalid { field: field.into(), message: message.into() })
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A named factor field, recorded by the subgroup fixing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor<S> {
    pub name: String,
    pub subgroup: S,
}

impl<S> Factor<S> {
    pub fn new(name: impl Into<String>, subgroup: S) -> Self {
        Factor { name: name.into(), subgroup }
    }
}

/// Decomposition groups of places: every cyclic subgroup when `chebotarev`
/// is set, plus the listed extra subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalProfile<S> {
    pub chebotarev: bool,
    pub extra: Vec<S>,
}

impl<S> Default for LocalProfile<S> {
    fn default() -> Self {
        LocalProfile { chebotarev: true, extra: Vec::new() }
    }
}

/// Scenario over a finite abelian Galois group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianScenario {
    pub group: FinAbGroup,
    pub k_factors: Vec<Factor<AbSubgroup>>,
    pub kprime_factors: Vec<Factor<AbSubgroup>>,
    pub profile: LocalProfile<AbSubgroup>,
    pub designate: Option<String>,
}

/// Scenario over a group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableScenario {
    pub group: FiniteGroup,
    pub k_factors: Vec<Factor<TableSubgroup>>,
    pub kprime_factors: Vec<Factor<TableSubgroup>>,
    pub profile: LocalProfile<TableSubgroup>,
    pub designate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaloisScenario {
    Abelian(AbelianScenario),
    Table(TableScenario),
}

/// The factor playing the role of the field `K`, with everything else
/// grouped as `K′`. Regrouping is harmless since the torus only depends on `L`.
#[derive(Clone, Debug)]
pub struct Designation {
    pub name: String,
    pub h_k: AbSubgroup,
    pub others: Vec<Factor<AbSubgroup>>,
    pub rule: &'static str,
}

impl AbelianScenario {
    /// Builds and validates a scenario.
    pub fn new(
        group: FinAbGroup,
        k_factors: Vec<Factor<AbSubgroup>>,
        kprime_factors: Vec<Factor<AbSubgroup>>,
        profile: LocalProfile<AbSubgroup>,
    ) -> Result<Self, ScenarioError> {
        let s = AbelianScenario { group, k_factors, kprime_factors, profile, designate: None };
        s.validate()?;
        Ok(s)
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor<AbSubgroup>> {
        self.k_factors.iter().chain(&self.kprime_factors)
    }

    pub fn factor(&self, name: &str) -> Option<&Factor<AbSubgroup>> {
        self.factors().find(|f| f.name == name)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.k_factors.is_empty() {
            return invalid("K", "at least one factor is required");
        }
        let mut names = HashSet::new();
        for f in self.factors() {
            if f.subgroup.ambient() != &self.group {
                return invalid(format!("factor {:?}", f.name), "subgroup of a different group");
            }
            if !names.insert(f.name.as_str()) {
                return invalid(format!("factor {:?}", f.name), "duplicate factor name");
            }
        }
        for (k, s) in self.profile.extra.iter().enumerate() {
            if s.ambient() != &self.group {
                return invalid(format!("local_profile.extra[{k}]"), "subgroup of a different group");
            }
        }
        if let Some(name) = &self.designate {
            if self.factor(name).is_none() {
                return Err(ScenarioError::UnknownFactor(name.clone()));
            }
        }
        let core = self.common_core();
        if !core.is_trivial() {
            let g = core.canonical_generators().remove(0);
            return Err(ScenarioError::NotFaithful { element: format_elem(&g) });
        }
        Ok(())
    }

    /// Intersection of all factor subgroups (their normal cores, as the group is abelian).
    pub fn common_core(&self) -> AbSubgroup {
        let mut core = AbSubgroup::full(&self.group);
        for f in self.factors() {
            core = core.intersect(&f.subgroup).expect("same ambient");
        }
        core
    }

    /// Profile subgroups: cyclic subgroups (when enabled) and extras, deduplicated.
    pub fn profile_subgroups(&self) -> Vec<AbSubgroup> {
        let mut out = if self.profile.chebotarev { cyclic_subgroups(&self.group) } else { Vec::new() };
        let mut seen: HashSet<AbSubgroup> = out.iter().cloned().collect();
        for s in &self.profile.extra {
            if seen.insert(s.clone()) {
                out.push(s.clone());
            }
        }
        out
    }

    /// One-line description of the local profile used in reports.
    pub fn profile_note(&self) -> String {
        let extra = self.profile.extra.len();
        match (self.profile.chebotarev, extra) {
            (true, 0) => "relative to the declared profile: every cyclic subgroup occurs as a decomposition group".into(),
            (true, n) => format!(
                "relative to the declared profile: every cyclic subgroup occurs as a decomposition group, plus {n} declared subgroup(s)"
            ),
            (false, n) => format!("relative to the declared profile: only the {n} declared decomposition group(s)"),
        }
    }

    /// Picks the distinguished field factor.
    ///
    /// An explicit `designate` may name any factor. Otherwise the first
    /// K-side factor with cyclic prime-power quotient wins, then the first
    /// with cyclic quotient, then the first K-side factor.
    pub fn designation(&self) -> Result<Designation, ScenarioError> {
        let (name, rule) = match &self.designate {
            Some(n) => (n.clone(), "declared"),
            None => {
                let quotient_of = |f: &Factor<AbSubgroup>| f.subgroup.quotient().group;
                let pp = self.k_factors.iter().find(|f| is_cyclic_prime_power(&quotient_of(f)));
                let cyc = self.k_factors.iter().find(|f| quotient_of(f).is_cyclic());
                match (pp, cyc) {
                    (Some(f), _) => (f.name.clone(), "cyclic prime-power quotient"),
                    (None, Some(f)) => (f.name.clone(), "cyclic quotient"),
                    (None, None) => (self.k_factors[0].name.clone(), "first K factor"),
                }
            }
        };
        let chosen = self.factor(&name).ok_or_else(|| ScenarioError::UnknownFactor(name.clone()))?;
        let others = self.factors().filter(|f| f.name != name).cloned().collect();
        Ok(Designation { name, h_k: chosen.subgroup.clone(), others, rule })
    }

    /// Copy with the given factor designated.
    pub fn with_designation(&self, name: &str) -> Result<Self, ScenarioError> {
        if self.factor(name).is_none() {
            return Err(ScenarioError::UnknownFactor(name.into()));
        }
        let mut s = self.clone();
        s.designate = Some(name.into());
        Ok(s)
    }

    /// Oracle-mode copy over the multiplication table of the group.
    pub fn to_table(&self) -> TableScenario {
        let (group, _) = FiniteGroup::from_abelian(&self.group);
        let conv = |s: &AbSubgroup| FiniteGroup::abelian_subgroup(&self.group, s);
        let convf = |f: &Factor<AbSubgroup>| Factor::new(f.name.clone(), conv(&f.subgroup));
        TableScenario {
            group,
            k_factors: self.k_factors.iter().map(convf).collect(),
            kprime_factors: self.kprime_factors.iter().map(convf).collect(),
            profile: LocalProfile {
                chebotarev: self.profile.chebotarev,
                extra: self.profile.extra.iter().map(conv).collect(),
            },
            designate: self.designate.clone(),
        }
    }
}

pub(crate) fn is_cyclic_prime_power(g: &FinAbGroup) -> bool {
    match g.factors() {
        [] => true,
        [d] => d.to_u64().is_some_and(|n| prime_power(n).is_some()),
        _ => false,
    }
}

/// `(p, k)` with `n = p^k`, for `n ≥ 2`.
pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub(crate) fn format_elem(x: &[BigInt]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

impl TableScenario {
    pub fn factors(&self) -> impl Iterator<Item = &Factor<TableSubgroup>> {
        self.k_factors.iter().chain(&self.kprime_factors)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.k_factors.is_empty() {
            return invalid("K", "at least one factor is required");
        }
        let mut names = HashSet::new();
        for f in self.factors() {
            if !names.insert(f.name.as_str()) {
                return invalid(format!("factor {:?}", f.name), "duplicate factor name");
            }
        }
        if let Some(name) = &self.designate {
            if !self.factors().any(|f| &f.name == name) {
                return Err(ScenarioError::UnknownFactor(name.clone()));
            }
        }
        let mut core = self.group.whole();
        for f in self.factors() {
            core = core.intersect(&self.group.normal_core(&f.subgroup));
        }
        if core.order() > 1 {
            return Err(ScenarioError::NotFaithful { element: format!("#{}", core.elements()[1]) });
        }
        Ok(())
    }

    /// Cyclic subgroups up to conjugacy (when enabled) and extras, deduplicated up to conjugacy.
    pub fn profile_subgroups(&self) -> Vec<TableSubgroup> {
        let mut all = if self.profile.chebotarev { self.group.cyclic_subgroups() } else { Vec::new() };
        all.extend(self.profile.extra.iter().cloned());
        self.group.conjugacy_representatives(&all)
    }

    /// The designated K factor and the remaining factors, by the same rule as
    /// the abelian engine (prime-power cyclic quotient, then cyclic, then first).
    pub fn designation(&self) -> (Factor<TableSubgroup>, Vec<Factor<TableSubgroup>>) {
        let name = match &self.designate {
            Some(n) => n.clone(),
            None => self.k_factors[0].name.clone(),
        };
        let chosen = self.factors().find(|f| f.name == name).expect("validated designation").clone();
        let others = self.factors().filter(|f| f.name != name).cloned().collect();
        (chosen, others)
    }
}

// ---- JSON document format ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    group: GroupDoc,
    #[serde(rename = "K")]
    k: Vec<FactorDoc>,
    #[serde(rename = "Kprime", default)]
    kprime: Vec<FactorDoc>,
    #[serde(default)]
    local_profile: ProfileDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designate: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    invariant_factors: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDoc {
    name: String,
    gens: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    #[serde(default = "yes")]
    chebotarev: bool,
    #[serde(default)]
    extra: Vec<ExtraDoc>,
}

impl Default for ProfileDoc {
    fn default() -> Self {
        ProfileDoc { chebotarev: true, extra: Vec::new() }
    }
}

fn yes() -> bool {
    true
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtraDoc {
    gens: Vec<Value>,
}

fn abelian_gen(g: &FinAbGroup, v: &Value, field: &str) -> Result<Elem, ScenarioError> {
    let arr = match v {
        Value::Array(a) => a,
        _ => return invalid(field, "generator must be an array of coordinates"),
    };
    if arr.len() != g.rank() {
        return invalid(field, format!("generator has {} coordinates, group has rank {}", arr.len(), g.rank()));
    }
    let mut out = Vec::with_capacity(arr.len());
    for (i, (c, d)) in arr.iter().zip(g.factors()).enumerate() {
        let c = c.as_i64().ok_or_else(|| ScenarioError::Invalid {
            field: format!("{field}[{i}]"),
            message: "coordinate must be an integer".into(),
        })?;
        let c = BigInt::from(c);
        if c < BigInt::zero() || &c >= d {
            return invalid(format!("{field}[{i}]"), format!("coordinate {c} out of range for factor {d}"));
        }
        out.push(c);
    }
    Ok(out)
}

fn table_gen(n: usize, v: &Value, field: &str) -> Result<usize, ScenarioError> {
    let x = match v {
        Value::Array(a) if a.len() == 1 => a[0].as_u64(),
        other => other.as_u64(),
    };
    match x {
        Some(x) if (x as usize) < n => Ok(x as usize),
        _ => invalid(field, format!("element index must be an integer in 0..{n}")),
    }
}

impl GaloisScenario {
    /// Parses and validates a scenario document.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let doc: ScenarioDoc = serde_json::from_str(text).map_err(ScenarioError::Json)?;
        match (&doc.group.invariant_factors, &doc.group.table) {
            (Some(f), None) => {
                let g = FinAbGroup::from_u64(f).map_err(|e| ScenarioError::Invalid {
                    field: "group.invariant_factors".into(),
                    message: e.to_string(),
                })?;
                let sub = |gens: &[Value], field: &str| -> Result<AbSubgroup, ScenarioError> {
                    let mut v = Vec::new();
                    for (k, x) in gens.iter().enumerate() {
                        v.push(abelian_gen(&g, x, &format!("{field}.gens[{k}]"))?);
                    }
                    Ok(AbSubgroup::new(g.clone(), v)?)
                };
                let factors = |docs: &[FactorDoc], key: &str| -> Result<Vec<Factor<AbSubgroup>>, ScenarioError> {
                    docs.iter()
                        .enumerate()
                        .map(|(i, d)| Ok(Factor::new(d.name.clone(), sub(&d.gens, &format!("{key}[{i}]"))?)))
                        .collect()
                };
                let extra = doc
                    .local_profile
                    .extra
                    .iter()
                    .enumerate()
                    .map(|(i, e)| sub(&e.gens, &format!("local_profile.extra[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = AbelianScenario {
                    group: g.clone(),
                    k_factors: factors(&doc.k, "K")?,
                    kprime_factors: factors(&doc.kprime, "Kprime")?,
                    profile: LocalProfile { chebotarev: doc.local_profile.chebotarev, extra },
                    designate: doc.designate.clone(),
                };
                s.validate()?;
                Ok(GaloisScenario::Abelian(s))
            }
            (None, Some(rows)) => {
                if rows.len() > TABLE_ORDER_LIMIT {
                    return invalid(
                        "group.table",
                        format!("order {} exceeds the table-group limit {TABLE_ORDER_LIMIT}", rows.len()),
                    );
                }
                let g = FiniteGroup::new(rows.clone())?;
                let sub = |gens: &[Value], field: &str| -> Result<TableSubgroup, ScenarioError> {
                    let mut v = Vec::new();
                    for (k, x) in gens.iter().enumerate() {
                        v.push(table_gen(g.order(), x, &format!("{field}.gens[{k}]"))?);
                    }
                    Ok(g.generate(&v))
                };
                let factors = |docs: &[FactorDoc], key: &str| -> Result<Vec<Factor<TableSubgroup>>, ScenarioError> {
                    docs.iter()
                        .enumerate()
                        .map(|(i, d)| Ok(Factor::new(d.name.clone(), sub(&d.gens, &format!("{key}[{i}]"))?)))
                        .collect()
                };
                let extra = doc
                    .local_profile
                    .extra
                    .iter()
                    .enumerate()
                    .map(|(i, e)| sub(&e.gens, &format!("local_profile.extra[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = TableScenario {
                    k_factors: factors(&doc.k, "K")?,
                    kprime_factors: factors(&doc.kprime, "Kprime")?,
                    profile: LocalProfile { chebotarev: doc.local_profile.chebotarev, extra },
                    designate: doc.designate.clone(),
                    group: g,
                };
                s.validate()?;
                Ok(GaloisScenario::Table(s))
            }
            _ => invalid("group", "exactly one of \"invariant_factors\" or \"table\" is required"),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = match self {
            GaloisScenario::Abelian(s) => {
                let gens = |x: &AbSubgroup| -> Vec<Value> {
                    x.generators().iter().map(|g| Value::from(g.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>())).collect()
                };
                let f = |v: &[Factor<AbSubgroup>]| -> Vec<FactorDoc> {
                    v.iter().map(|f| FactorDoc { name: f.name.clone(), gens: gens(&f.subgroup) }).collect()
                };
                ScenarioDoc {
                    group: GroupDoc { invariant_factors: Some(s.group.factors_u64()), table: None },
                    k: f(&s.k_factors),
                    kprime: f(&s.kprime_factors),
                    local_profile: ProfileDoc {
                        chebotarev: s.profile.chebotarev,
                        extra: s.profile.extra.iter().map(|x| ExtraDoc { gens: gens(x) }).collect(),
                    },
                    designate: s.designate.clone(),
                }
            }
            GaloisScenario::Table(s) => {
                let gens = |x: &TableSubgroup| -> Vec<Value> {
                    x.elements().iter().filter(|&&e| e != 0).map(|&e| Value::from(e)).collect()
                };
                let f = |v: &[Factor<TableSubgroup>]| -> Vec<FactorDoc> {
                    v.iter().map(|f| FactorDoc { name: f.name.clone(), gens: gens(&f.subgroup) }).collect()
                };
                ScenarioDoc {
                    group: GroupDoc { invariant_factors: None, table: Some(s.group.rows()) },
                    k: f(&s.k_factors),
                    kprime: f(&s.kprime_factors),
                    local_profile: ProfileDoc {
                        chebotarev: s.profile.chebotarev,
                        extra: s.profile.extra.iter().map(|x| ExtraDoc { gens: gens(x) }).collect(),
                    },
                    designate: s.designate.clone(),
                }
            }
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn as_abelian(&self) -> Result<&AbelianScenario, ScenarioError> {
        match self {
            GaloisScenario::Abelian(s) => Ok(s),
            GaloisScenario::Table(_) => Err(ScenarioError::NotAbelian),
        }
    }

    /// Oracle-mode view of the scenario.
    pub fn to_table(&self) -> TableScenario {
        match self {
            GaloisScenario::Abelian(s) => s.to_table(),
            GaloisScenario::Table(s) => s.clone(),
        }
    }

    pub fn group_order(&self) -> BigInt {
        match self {
            GaloisScenario::Abelian(s) => s.group.order(),
            GaloisScenario::Table(s) => BigInt::from(s.group.order()),
        }
    }
}
