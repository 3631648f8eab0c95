use std::collections::VecDeque;

use super::relation::FiniteRelation;
use crate::error::{Error, Result};

/// Reflexive-transitive closure of the asserted edges.
///
/// Output edges are listed in state order. Fails if the closure contains a
/// pair asserted absent; the error carries one chain of asserted edges that
/// forces it.
pub fn transitive_closure(rel: &FiniteRelation) -> Result<FiniteRelation> {
    rel.validate()?;
    let n = rel.states.len();
    let idx = rel.state_index();
    let mut adj = vec![vec![]; n];
    let mut reach = vec![vec![false; n]; n];
    for (x, y) in &rel.precedes {
        let (i, j) = (idx[x.as_str()], idx[y.as_str()]);
        adj[i].push(j);
        reach[i][j] = true;
    }
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }

    for (x, y) in &rel.absent {
        let (i, j) = (idx[x.as_str()], idx[y.as_str()]);
        if reach[i][j] {
            let chain = shortest_chain(&adj, i, j)
                .into_iter()
                .map(|k| rel.states[k].id.clone())
                .collect();
            return Err(Error::InconsistentRelation {
                from: x.clone(),
                to: y.clone(),
                chain,
            });
        }
    }

    let mut out = rel.clone();
    out.precedes = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| reach[i][j])
        .map(|(i, j)| (rel.states[i].id.clone(), rel.states[j].id.clone()))
        .collect();
    Ok(out)
}

fn shortest_chain(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    if from == to {
        return vec![from];
    }
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(k) = queue.pop_front() {
        for &j in &adj[k] {
            if prev[j] == usize::MAX {
                prev[j] = k;
                if j == to {
                    let mut path = vec![to];
                    let mut c = to;
                    while c != from {
                        c = prev[c];
                        path.push(c);
                    }
                    path.reverse();
                    return path;
                }
                queue.push_back(j);
            }
        }
    }
    vec![from, to]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::existence::relation::{Atom, RelState};

    fn rel(edges: &[(&str, &str)], absent: &[(&str, &str)]) -> FiniteRelation {
        let ids = ["a", "b", "c", "d"];
        FiniteRelation {
            atoms: ids
                .map(|id| Atom {
                    id: id.into(),
                    amount: None,
                })
                .to_vec(),
            states: ids.map(|id| RelState::atom(id, id)).to_vec(),
            precedes: edges.iter().map(|&(x, y)| (x.into(), y.into())).collect(),
            absent: absent.iter().map(|&(x, y)| (x.into(), y.into())).collect(),
            classes: vec![],
        }
    }

    fn has(r: &FiniteRelation, x: &str, y: &str) -> bool {
        r.precedes.iter().any(|(a, b)| a == x && b == y)
    }

    #[test]
    fn chain_gains_transitive_and_reflexive_edges() {
        let c = transitive_closure(&rel(&[("a", "b"), ("b", "c")], &[])).unwrap();
        assert!(has(&c, "a", "c"));
        for s in ["a", "b", "c", "d"] {
            assert!(has(&c, s, s));
        }
        assert!(!has(&c, "c", "a"));
        assert_eq!(c.precedes.len(), 3 + 4);
    }

    #[test]
    fn closure_is_idempotent() {
        let c = transitive_closure(&rel(&[("a", "b"), ("b", "c"), ("d", "a")], &[])).unwrap();
        assert_eq!(transitive_closure(&c).unwrap(), c);
    }

    #[test]
    fn forced_absent_edge_reports_chain() {
        let r = rel(&[("a", "b"), ("b", "c"), ("c", "d")], &[("a", "d")]);
        match transitive_closure(&r) {
            Err(Error::InconsistentRelation { from, to, chain }) => {
                assert_eq!((from.as_str(), to.as_str()), ("a", "d"));
                assert_eq!(chain, ["a", "b", "c", "d"]);
            }
            other => panic!("{other:?}"),
        }
        let r = rel(&[], &[("b", "b")]);
        assert!(matches!(
            transitive_closure(&r),
            Err(Error::InconsistentRelation { .. })
        ));
    }
}
