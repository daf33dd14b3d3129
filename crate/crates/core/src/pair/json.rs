//! Canonical JSON exchange format for pairs.
//!
//! Field order in the structs below is alphabetical so that serde emits
//! sorted keys; entry lists are written in lexicographic omega order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{HypergraphPair, Omega};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub omega: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub alpha: Vec<EntryJson>,
    pub beta: Vec<EntryJson>,
    pub dims: Vec<usize>,
    pub k: usize,
}

/// Size limits applied when a pair enters from outside the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairLimits {
    pub max_total_dims: usize,
}

impl Default for PairLimits {
    fn default() -> Self {
        PairLimits { max_total_dims: 24 }
    }
}

impl PairJson {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_pair(self, limits: &PairLimits) -> Result<HypergraphPair> {
        if self.k != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "k = {} but dims has {} entries",
                self.k,
                self.dims.len()
            )));
        }
        let total: usize = self.dims.iter().sum();
        if total > limits.max_total_dims {
            return Err(Error::InvalidArgument(format!(
                "sum of dims is {total}, above the limit of {}",
                limits.max_total_dims
            )));
        }
        for (name, list) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            let mut seen = BTreeSet::new();
            for e in list {
                if !seen.insert(&e.omega) {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate {name} entry at {:?}",
                        e.omega
                    )));
                }
            }
        }
        let conv = |list: Vec<EntryJson>| {
            list.into_iter()
                .map(|e| (Omega(e.omega), e.value))
                .collect::<Vec<_>>()
        };
        HypergraphPair::from_entries(self.dims, conv(self.alpha), conv(self.beta))
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("pair JSON serialization cannot fail")
    }

    pub fn to_string_compact(&self) -> String {
        serde_json::to_string(self).expect("pair JSON serialization cannot fail")
    }
}

impl From<&HypergraphPair> for PairJson {
    fn from(h: &HypergraphPair) -> Self {
        let conv = |m: &std::collections::BTreeMap<Omega, f64>| {
            m.iter()
                .map(|(o, v)| EntryJson {
                    omega: o.0.clone(),
                    value: *v,
                })
                .collect()
        };
        PairJson {
            alpha: conv(h.alpha_map()),
            beta: conv(h.beta_map()),
            dims: h.dims().to_vec(),
            k: h.k(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_canonical() {
        let h = HypergraphPair::from_entries(
            vec![2, 2],
            [(Omega::new([1, 0]), 1.0), (Omega::new([0, 1]), 1.0)],
            [(Omega::new([0, 0]), 1.0), (Omega::new([1, 1]), 1.0)],
        )
        .unwrap();
        let text = PairJson::from(&h).to_string_compact();
        assert_eq!(
            text,
            r#"{"alpha":[{"omega":[0,1],"value":1.0},{"omega":[1,0],"value":1.0}],"beta":[{"omega":[0,0],"value":1.0},{"omega":[1,1],"value":1.0}],"dims":[2,2],"k":2}"#
        );
        assert_eq!(HypergraphPair::from_json(&text).unwrap(), h);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_k = r#"{"alpha":[],"beta":[],"dims":[2,2],"k":3}"#;
        assert!(matches!(HypergraphPair::from_json(bad_k), Err(Error::DimensionMismatch(_))));
        let range = r#"{"alpha":[{"omega":[2],"value":1}],"beta":[],"dims":[2],"k":1}"#;
        assert!(matches!(HypergraphPair::from_json(range), Err(Error::OutOfRange { .. })));
        let dup = r#"{"alpha":[{"omega":[0],"value":1},{"omega":[0],"value":2}],"beta":[],"dims":[2],"k":1}"#;
        assert!(HypergraphPair::from_json(dup).is_err());
        let syntax = "{\n\"alpha\": [,\n}";
        match HypergraphPair::from_json(syntax) {
            Err(Error::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected JSON error, got {other:?}"),
        }
        let big = r#"{"alpha":[],"beta":[],"dims":[13,12],"k":2}"#;
        assert!(HypergraphPair::from_json(big).is_err());
    }
}
