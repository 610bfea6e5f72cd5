use serde::{Deserialize, Serialize};

use super::{is_prime, ScenarioError};

/// Local exponents at one class of places: `e_v` for the distinguished
/// cyclic factor and `e_i_v[i]` for each other factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlaceDatum {
    pub label: String,
    pub e_v: u32,
    pub e_i_v: Vec<u32>,
}

/// Data of a distinguished cyclic factor of degree `p^e` and further factors
/// whose local exponents are recorded per place class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicScenario {
    pub p: u64,
    pub e: u32,
    #[serde(rename = "e_i")]
    pub e_list: Vec<u32>,
    pub places: Vec<PlaceDatum>,
}

impl CyclicScenario {
    /// Validates the scenario. The exponent list may be unsorted on input and
    /// is reported as an error only if it is not nonincreasing.
    pub fn new(p: u64, e: u32, e_list: Vec<u32>, places: Vec<PlaceDatum>) -> Result<Self, ScenarioError> {
        let cs = CyclicScenario { p, e, e_list, places };
        cs.validate()?;
        Ok(cs)
    }

    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let cs: CyclicScenario = serde_json::from_str(text).map_err(ScenarioError::Json)?;
        cs.validate()?;
        Ok(cs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn m(&self) -> usize {
        self.e_list.len()
    }

    /// `p^k` as u64. Panics on overflow, which validation rules out.
    pub fn pow(&self, k: u32) -> u64 {
        self.p.checked_pow(k).expect("p^e fits in u64")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |field: String, message: String| Err(ScenarioError::Invalid { field, message });
        if !is_prime(self.p) {
            return Err(ScenarioError::NotPrime(self.p));
        }
        if self.p.checked_pow(self.e).is_none_or(|q| q > 1 << 24) {
            return invalid("e".into(), format!("p^e = {}^{} is too large", self.p, self.e));
        }
        for (i, &ei) in self.e_list.iter().enumerate() {
            if ei > self.e {
                return invalid(format!("e_i[{i}]"), format!("{ei} exceeds e = {}", self.e));
            }
        }
        if self.e_list.windows(2).any(|w| w[0] < w[1]) {
            return invalid("e_i".into(), "exponents must be nonincreasing".into());
        }
        for (k, d) in self.places.iter().enumerate() {
            if d.e_v > self.e {
                return invalid(format!("places[{k}].e_v"), format!("{} exceeds e = {}", d.e_v, self.e));
            }
            if d.e_i_v.len() != self.m() {
                return Err(ScenarioError::Invalid {
                    field: format!("places[{k}].e_i_v"),
                    message: format!("has {} entries, expected {}", d.e_i_v.len(), self.m()),
                });
            }
            for (i, (&x, &ei)) in d.e_i_v.iter().zip(&self.e_list).enumerate() {
                if x > d.e_v.min(ei) {
                    return invalid(
                        format!("places[{k}].e_i_v[{i}]"),
                        format!("{x} exceeds min(e_v, e_i) = {}", d.e_v.min(ei)),
                    );
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let text = r#"{"p":2,"e":1,"e_i":[1,1],"places":[{"label":"v","e_v":1,"e_i_v":[1,0]}]}"#;
        let cs = CyclicScenario::parse(text).unwrap();
        assert_eq!(cs.m(), 2);
        assert_eq!(CyclicScenario::parse(&cs.to_json()).unwrap(), cs);

        let bad = r#"{"p":2,"e":1,"e_i":[1],"places":[{"label":"v","e_v":0,"e_i_v":[1]}]}"#;
        assert!(matches!(CyclicScenario::parse(bad), Err(ScenarioError::Invalid { .. })));
        let bad = r#"{"p":4,"e":1,"e_i":[],"places":[]}"#;
        assert!(matches!(CyclicScenario::parse(bad), Err(ScenarioError::NotPrime(4))));
        let bad = r#"{"p":2,"e":2,"e_i":[1,2],"places":[]}"#;
        assert!(CyclicScenario::parse(bad).is_err());
    }
}
