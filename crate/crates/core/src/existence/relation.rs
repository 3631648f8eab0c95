use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amount: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub atom: String,
    pub weight: f64,
}

/// A compound: weighted multiset of atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelState {
    pub id: String,
    pub parts: Vec<Part>,
}

impl RelState {
    pub fn atom(id: impl Into<String>, atom: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            parts: vec![Part {
                atom: atom.into(),
                weight: 1.0,
            }],
        }
    }
}

/// A finite accessibility relation with partial knowledge.
///
/// Pairs in neither edge list are unknown. A missing `classes` field puts
/// every state in one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteRelation {
    pub atoms: Vec<Atom>,
    pub states: Vec<RelState>,
    #[serde(default)]
    pub precedes: Vec<(String, String)>,
    #[serde(default)]
    pub absent: Vec<(String, String)>,
    #[serde(default)]
    pub classes: Vec<Vec<String>>,
}

impl FiniteRelation {
    pub fn from_json(text: &str) -> Result<Self> {
        let rel: Self = serde_json::from_str(text)?;
        rel.validate()?;
        Ok(rel)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidRelation(m));
        let mut atoms = HashSet::new();
        for a in &self.atoms {
            if !atoms.insert(a.id.as_str()) {
                return bad(format!("duplicate atom `{}`", a.id));
            }
            if let Some(w) = a.amount {
                if !(w > 0.0 && w.is_finite()) {
                    return bad(format!("atom `{}` has amount {w}", a.id));
                }
            }
        }
        let mut states = HashSet::new();
        for s in &self.states {
            if !states.insert(s.id.as_str()) {
                return bad(format!("duplicate state `{}`", s.id));
            }
            if s.parts.is_empty() {
                return bad(format!("state `{}` has no parts", s.id));
            }
            for p in &s.parts {
                if !atoms.contains(p.atom.as_str()) {
                    return bad(format!("state `{}` uses unknown atom `{}`", s.id, p.atom));
                }
                if !(p.weight > 0.0 && p.weight.is_finite()) {
                    return bad(format!("state `{}` has weight {}", s.id, p.weight));
                }
            }
        }
        for (x, y) in self.precedes.iter().chain(&self.absent) {
            for id in [x, y] {
                if !states.contains(id.as_str()) {
                    return bad(format!("edge references unknown state `{id}`"));
                }
            }
        }
        let asserted: HashSet<_> = self.precedes.iter().collect();
        if let Some((x, y)) = self.absent.iter().find(|e| asserted.contains(e)) {
            return bad(format!("pair ({x}, {y}) is both asserted and absent"));
        }
        if !self.classes.is_empty() {
            let mut seen = HashSet::new();
            for id in self.classes.iter().flatten() {
                if !states.contains(id.as_str()) {
                    return bad(format!("class references unknown state `{id}`"));
                }
                if !seen.insert(id.as_str()) {
                    return bad(format!("state `{id}` is in more than one class"));
                }
            }
            if let Some(s) = self.states.iter().find(|s| !seen.contains(s.id.as_str())) {
                return bad(format!("state `{}` is in no class", s.id));
            }
        }
        Ok(())
    }

    pub fn state_index(&self) -> HashMap<&str, usize> {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect()
    }

    /// Class number of each state, in state order.
    pub fn class_of_states(&self) -> Vec<usize> {
        if self.classes.is_empty() {
            return vec![0; self.states.len()];
        }
        let idx = self.state_index();
        let mut out = vec![0; self.states.len()];
        for (c, members) in self.classes.iter().enumerate() {
            for id in members {
                out[idx[id.as_str()]] = c;
            }
        }
        out
    }

    pub fn same_class(&self, x: &str, y: &str) -> bool {
        let idx = self.state_index();
        let classes = self.class_of_states();
        classes[idx[x]] == classes[idx[y]]
    }

    /// `Σ weight · S(atom)` for a state.
    pub fn state_value(&self, state: &RelState, assignment: &BTreeMap<String, f64>) -> Result<f64> {
        state.parts.iter().try_fold(0.0, |acc, p| {
            assignment
                .get(&p.atom)
                .map(|v| acc + p.weight * v)
                .ok_or_else(|| Error::Domain(format!("no value for atom `{}`", p.atom)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> FiniteRelation {
        FiniteRelation {
            atoms: ["a", "b", "c"]
                .map(|id| Atom {
                    id: id.into(),
                    amount: None,
                })
                .to_vec(),
            states: ["a", "b", "c"].map(|id| RelState::atom(id, id)).to_vec(),
            precedes: vec![("a".into(), "b".into())],
            absent: vec![("b".into(), "a".into())],
            classes: vec![],
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"atoms":[{"id":"a"},{"id":"b","amount":2}],
            "states":[{"id":"x","parts":[{"atom":"a","weight":1},{"atom":"b","weight":0.5}]},
                      {"id":"y","parts":[{"atom":"b","weight":1}]}],
            "precedes":[["x","y"]],"absent":[["y","x"]],"classes":[["x","y"]]}"#;
        let r = FiniteRelation::from_json(text).unwrap();
        assert_eq!(r.precedes, vec![("x".to_string(), "y".to_string())]);
        assert_eq!(r.atoms[1].amount, Some(2.0));
        let back = FiniteRelation::from_json(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn invalid_relations_rejected() {
        let mut r = chain();
        r.absent.push(("a".into(), "b".into()));
        assert!(matches!(r.validate(), Err(Error::InvalidRelation(_))));

        let mut r = chain();
        r.precedes.push(("a".into(), "zz".into()));
        assert!(r.validate().is_err());

        let mut r = chain();
        r.states[0].parts[0].weight = 0.0;
        assert!(r.validate().is_err());

        let mut r = chain();
        r.classes = vec![vec!["a".into(), "b".into()]];
        assert!(r.validate().is_err());

        let mut r = chain();
        r.classes = vec![vec!["a".into(), "b".into()], vec!["b".into(), "c".into()]];
        assert!(r.validate().is_err());
    }

    #[test]
    fn state_values_are_weighted_sums() {
        let r = chain();
        let s: BTreeMap<String, f64> = [("a".to_string(), 2.0)].into();
        assert_eq!(r.state_value(&r.states[0], &s).unwrap(), 2.0);
        assert!(matches!(
            r.state_value(&r.states[1], &s),
            Err(Error::Domain(_))
        ));
    }
}
