use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::abgroup::FinAbGroup;

/// Why an exact answer is justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Certificate {
    /// The distinguished factor is cyclic, so the second obstruction vanishes.
    CyclicFactor,
    /// Some decomposition group maps onto the distinguished Galois group.
    FullDecomposition,
    /// The Galois closure of the distinguished factor meets some other factor only in `k`.
    IntersectionTrivial,
    /// The Galois closure of the distinguished side meets the compositum of the others only in `k`.
    DemarcheWei,
    /// Two factors: the answer is that of their intersection field.
    Pollio,
    /// The second obstruction group of the distinguished factor is trivial.
    Sha2Vanishes,
    /// No other factors: the answer is the single-field obstruction.
    SingleField,
    None,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::CyclicFactor => "cyclic-distinguished-factor",
            Certificate::FullDecomposition => "full-decomposition",
            Certificate::IntersectionTrivial => "intersection-trivial",
            Certificate::DemarcheWei => "demarche-wei",
            Certificate::Pollio => "pollio",
            Certificate::Sha2Vanishes => "sha2-vanishes",
            Certificate::SingleField => "single-field",
            Certificate::None => "none",
        }
    }

    /// Certificates that pin the answer to `S/D` exactly.
    pub fn pins_s_mod_d(self) -> bool {
        matches!(
            self,
            Certificate::CyclicFactor
                | Certificate::FullDecomposition
                | Certificate::IntersectionTrivial
                | Certificate::Sha2Vanishes
                | Certificate::DemarcheWei
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sha {
    Exact(FinAbGroup),
    Bounds { lower: FinAbGroup, upper_order: BigInt },
}

/// Result of an engine run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShaReport {
    pub s_mod_d: FinAbGroup,
    pub sha2_k: FinAbGroup,
    pub sha: Sha,
    pub certificate: Certificate,
    /// Tamagawa number, present only for exact reports with a known ambient group.
    pub tamagawa: Option<BigRational>,
    pub designation: String,
    pub profile_note: String,
}

pub(crate) fn factors_json(g: &FinAbGroup) -> Value {
    Value::Array(g.factors().iter().map(big_json).collect())
}

pub(crate) fn big_json(n: &BigInt) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

impl ShaReport {
    pub fn is_exact(&self) -> bool {
        matches!(self.sha, Sha::Exact(_))
    }

    pub fn status(&self) -> &'static str {
        if self.is_exact() {
            "exact"
        } else {
            "bounds"
        }
    }

    pub fn exact(&self) -> Option<&FinAbGroup> {
        match &self.sha {
            Sha::Exact(g) => Some(g),
            Sha::Bounds { .. } => None,
        }
    }

    /// Tamagawa number `[F_ab : k] / |Ш|` for exact reports.
    pub fn with_tamagawa(mut self, f_ab: &BigInt) -> Self {
        self.tamagawa = self.exact().map(|g| BigRational::new(f_ab.clone(), g.order()));
        self
    }

    /// Arithmetic consistency: `|S/D|` divides the answer, which divides `|S/D|·|Ш²|`.
    pub fn check(&self) -> Result<(), String> {
        let lo = self.s_mod_d.order();
        let hi = &lo * self.sha2_k.order();
        let n = match &self.sha {
            Sha::Exact(g) => g.order(),
            Sha::Bounds { lower, upper_order } => {
                if lower != &self.s_mod_d || upper_order != &hi {
                    return Err("bounds disagree with s_mod_d and sha2_k".into());
                }
                return Ok(());
            }
        };
        if self.certificate.pins_s_mod_d() && n != lo {
            return Err(format!("certificate {} but |sha| = {n} differs from |S/D| = {lo}", self.certificate.as_str()));
        }
        if &n % &lo != BigInt::from(0) || &hi % &n != BigInt::from(0) {
            return Err(format!("|sha| = {n} outside the chain {lo} | . | {hi}"));
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("status".into(), json!(self.status()));
        m.insert("s_mod_d".into(), factors_json(&self.s_mod_d));
        m.insert("sha2_k".into(), factors_json(&self.sha2_k));
        let sha = match &self.sha {
            Sha::Exact(g) => factors_json(g),
            Sha::Bounds { lower, upper_order } => json!({"lower": factors_json(lower), "upper_order": big_json(upper_order)}),
        };
        m.insert("sha".into(), sha);
        m.insert("certificate".into(), json!(self.certificate.as_str()));
        let tau = match &self.tamagawa {
            Some(t) => json!({"num": big_json(t.numer()), "den": big_json(t.denom())}),
            None => Value::Null,
        };
        m.insert("tamagawa".into(), tau);
        m.insert("designation".into(), json!(self.designation));
        m.insert("profile_note".into(), json!(self.profile_note));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    /// Human-readable summary rendered from the JSON form.
    pub fn to_text(&self) -> String {
        render_text(&self.to_json_value())
    }
}

/// Renders the JSON form of a report as an aligned table.
pub fn render_text(v: &Value) -> String {
    let show = |x: &Value| -> String {
        match x.as_array() {
            Some(a) if a.is_empty() => "0".into(),
            Some(a) => a.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + "),
            None => x.to_string(),
        }
    };
    let sha = match &v["sha"] {
        Value::Object(o) => format!("between {} and order {}", show(&o["lower"]), o["upper_order"]),
        other => show(other),
    };
    let tau = match &v["tamagawa"] {
        Value::Null => "unavailable".to_string(),
        t if t["den"] == json!(1) => t["num"].to_string(),
        t => format!("{}/{}", t["num"], t["den"]),
    };
    let text = |k: &str| v[k].as_str().unwrap_or("").to_string();
    format!(
        "status       {}\nsha          {}\nS/D          {}\nsha2_k       {}\ncertificate  {}\ntamagawa     {}\ndesignation  {}\nprofile      {}\n",
        text("status"),
        sha,
        show(&v["s_mod_d"]),
        show(&v["sha2_k"]),
        text("certificate"),
        tau,
        text("designation"),
        text("profile_note"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(sha: Sha) -> ShaReport {
        ShaReport {
            s_mod_d: FinAbGroup::trivial(),
            sha2_k: FinAbGroup::cyclic(2),
            sha,
            certificate: Certificate::None,
            tamagawa: None,
            designation: "K".into(),
            profile_note: "n".into(),
        }
    }

    #[test]
    fn json_shape() {
        let r = report(Sha::Bounds { lower: FinAbGroup::trivial(), upper_order: BigInt::from(2) });
        let v = r.to_json_value();
        assert_eq!(v["status"], "bounds");
        assert_eq!(v["sha"]["upper_order"], 2);
        assert!(v["tamagawa"].is_null());
        assert!(r.check().is_ok());
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["status", "s_mod_d", "sha2_k", "sha", "certificate", "tamagawa", "designation", "profile_note"]);

        let r = report(Sha::Exact(FinAbGroup::cyclic(2))).with_tamagawa(&BigInt::from(4));
        let v = r.to_json_value();
        assert_eq!(v["sha"], json!([2]));
        assert_eq!(v["tamagawa"], json!({"num": 2, "den": 1}));
        assert!(r.to_text().contains("Z/2"));
        assert!(r.check().is_ok());
        let bad = report(Sha::Exact(FinAbGroup::cyclic(4)));
        assert!(bad.check().is_err());
    }
}
