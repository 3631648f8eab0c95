use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::relation::{FiniteRelation, RelState};
use super::simplex::{Cmp, LinearProgram, LpOutcome};
use crate::error::{Error, Result};

/// Ratio of the variable bound to the margin.
pub const BOUND_PER_MARGIN: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A minimal set of asserted edges that cannot hold together.
    Contradiction { edges: Vec<(String, String)> },
    /// The linear program that was found infeasible.
    Program { id: String, residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub assignment: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl FeasibilityResult {
    fn infeasible(certificate: Certificate) -> Self {
        Self {
            feasible: false,
            assignment: BTreeMap::new(),
            certificate: Some(certificate),
        }
    }
}

fn check_margin(margin: f64) -> Result<()> {
    if margin > 0.0 && margin.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "margin must be positive, got {margin}"
        )))
    }
}

/// Same-class pairs with both directions asserted absent, in input order.
pub fn incomparable_pairs(rel: &FiniteRelation) -> Vec<(String, String)> {
    let idx = rel.state_index();
    let classes = rel.class_of_states();
    let absent: HashSet<(&str, &str)> = rel
        .absent
        .iter()
        .map(|(x, y)| (x.as_str(), y.as_str()))
        .collect();
    rel.absent
        .iter()
        .filter(|(x, y)| x <= y)
        .filter(|(x, y)| absent.contains(&(y.as_str(), x.as_str())))
        .filter(|(x, y)| classes[idx[x.as_str()]] == classes[idx[y.as_str()]])
        .cloned()
        .collect()
}

/// Atom coefficients of `S(x) - S(y)`.
fn difference(atom_ix: &HashMap<&str, usize>, x: &RelState, y: &RelState) -> BTreeMap<usize, f64> {
    let mut d = BTreeMap::new();
    for p in &x.parts {
        *d.entry(atom_ix[p.atom.as_str()]).or_insert(0.0) += p.weight;
    }
    for p in &y.parts {
        *d.entry(atom_ix[p.atom.as_str()]).or_insert(0.0) -= p.weight;
    }
    d.retain(|_, c| *c != 0.0);
    d
}

/// Decides whether an additive assignment encodes `rel` with the given margin.
///
/// One value per atom, bounded in `[-B, B]` with `B = 1e6 · margin`. Every
/// asserted `X ≺ Y` needs `S(X) ≤ S(Y)`, every same-class asserted `X ⊀ Y`
/// needs `S(X) ≥ S(Y) + margin`. Among feasible assignments the one with the
/// smallest `Σ |S|` is returned.
pub fn entropy_feasible(rel: &FiniteRelation, margin: f64) -> Result<FeasibilityResult> {
    check_margin(margin)?;
    rel.validate()?;

    if let Some((x, y)) = incomparable_pairs(rel).into_iter().next() {
        let edges = if x == y {
            vec![(x.clone(), y)]
        } else {
            vec![(x.clone(), y.clone()), (y, x)]
        };
        return Ok(FeasibilityResult::infeasible(Certificate::Contradiction {
            edges,
        }));
    }

    let n = rel.atoms.len();
    let atom_ix: HashMap<&str, usize> = rel
        .atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.as_str(), i))
        .collect();
    let state_ix = rel.state_index();
    let classes = rel.class_of_states();
    let bound = BOUND_PER_MARGIN * margin;

    // S_a = p_a - q_a with p, q in [0, B]
    let mut lp = LinearProgram::new(2 * n);
    lp.objective = vec![1.0; 2 * n];
    let split = |d: BTreeMap<usize, f64>| -> Vec<(usize, f64)> {
        d.into_iter()
            .flat_map(|(a, c)| [(2 * a, c), (2 * a + 1, -c)])
            .collect()
    };
    let strict: HashSet<(&str, &str)> = rel
        .absent
        .iter()
        .filter(|(x, y)| classes[state_ix[x.as_str()]] == classes[state_ix[y.as_str()]])
        .map(|(x, y)| (x.as_str(), y.as_str()))
        .collect();
    for (x, y) in &rel.precedes {
        // S(y) >= S(x) + margin already implies S(x) <= S(y)
        if strict.contains(&(y.as_str(), x.as_str())) {
            continue;
        }
        let (i, j) = (state_ix[x.as_str()], state_ix[y.as_str()]);
        let d = difference(&atom_ix, &rel.states[i], &rel.states[j]);
        if !d.is_empty() {
            lp.add_row(split(d), Cmp::Le, 0.0);
        }
    }
    for (x, y) in &rel.absent {
        let (i, j) = (state_ix[x.as_str()], state_ix[y.as_str()]);
        if classes[i] != classes[j] {
            continue;
        }
        let d = difference(&atom_ix, &rel.states[i], &rel.states[j]);
        lp.add_row(split(d), Cmp::Ge, margin);
    }
    for v in 0..2 * n {
        lp.add_row(vec![(v, 1.0)], Cmp::Le, bound);
    }

    let program_id = format!(
        "entropy-lp(atoms={}, rows={}, margin={margin})",
        n,
        lp.rows.len()
    );
    match lp.solve()? {
        LpOutcome::Optimal { x, .. } => {
            let assignment = rel
                .atoms
                .iter()
                .enumerate()
                .map(|(a, atom)| (atom.id.clone(), x[2 * a] - x[2 * a + 1]))
                .collect();
            Ok(FeasibilityResult {
                feasible: true,
                assignment,
                certificate: None,
            })
        }
        LpOutcome::Infeasible { residual } => {
            Ok(FeasibilityResult::infeasible(Certificate::Program {
                id: program_id,
                residual,
            }))
        }
        // every variable is bounded
        LpOutcome::Unbounded => Err(Error::Domain(format!("{program_id} reported unbounded"))),
    }
}

/// Checks an assignment against every edge, independently of the solver.
pub fn verify_assignment(
    rel: &FiniteRelation,
    assignment: &BTreeMap<String, f64>,
    margin: f64,
) -> Result<bool> {
    check_margin(margin)?;
    if let Some(a) = rel.atoms.iter().find(|a| !assignment.contains_key(&a.id)) {
        return Err(Error::Domain(format!("no value for atom `{}`", a.id)));
    }
    let idx = rel.state_index();
    let classes = rel.class_of_states();
    let values = rel
        .states
        .iter()
        .map(|s| rel.state_value(s, assignment))
        .collect::<Result<Vec<_>>>()?;
    let slack = 1e-7 * margin;
    let precedes_ok = rel.precedes.iter().all(|(x, y)| {
        let (i, j) = (idx[x.as_str()], idx[y.as_str()]);
        values[i] <= values[j] + slack
    });
    let absent_ok = rel.absent.iter().all(|(x, y)| {
        let (i, j) = (idx[x.as_str()], idx[y.as_str()]);
        classes[i] != classes[j] || values[i] >= values[j] + margin - slack
    });
    Ok(precedes_ok && absent_ok)
}

/// Spearman rank correlation, with average ranks for ties.
pub fn rank_correlation(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut k = 0;
        while k < order.len() {
            let mut e = k;
            while e + 1 < order.len() && v[order[e + 1]] == v[order[k]] {
                e += 1;
            }
            let avg = 0.5 * (k + e) as f64;
            for &i in &order[k..=e] {
                r[i] = avg;
            }
            k = e + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::existence::relation::Atom;

    fn rel(ids: &[&str], precedes: &[(&str, &str)], absent: &[(&str, &str)]) -> FiniteRelation {
        FiniteRelation {
            atoms: ids
                .iter()
                .map(|&id| Atom {
                    id: id.into(),
                    amount: None,
                })
                .collect(),
            states: ids.iter().map(|&id| RelState::atom(id, id)).collect(),
            precedes: precedes
                .iter()
                .map(|&(x, y)| (x.into(), y.into()))
                .collect(),
            absent: absent.iter().map(|&(x, y)| (x.into(), y.into())).collect(),
            classes: vec![],
        }
    }

    fn chain() -> FiniteRelation {
        rel(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c"), ("a", "c")],
            &[("b", "a"), ("c", "b"), ("c", "a")],
        )
    }

    #[test]
    fn chain_is_feasible_with_margin_steps() {
        let r = entropy_feasible(&chain(), 1.0).unwrap();
        assert!(r.feasible);
        let s = &r.assignment;
        assert!((s["b"] - s["a"] - 1.0).abs() < 1e-9);
        assert!((s["c"] - s["b"] - 1.0).abs() < 1e-9);
        assert!(verify_assignment(&chain(), s, 1.0).unwrap());

        let explicit: BTreeMap<String, f64> =
            [("a".into(), 0.0), ("b".into(), 1.0), ("c".into(), 2.0)].into();
        assert!(verify_assignment(&chain(), &explicit, 1.0).unwrap());
    }

    #[test]
    fn perturbed_assignment_fails_verification() {
        let mut s: BTreeMap<String, f64> =
            [("a".into(), 0.0), ("b".into(), 1.0), ("c".into(), 2.0)].into();
        s.insert("b".into(), 1.5);
        assert!(!verify_assignment(&chain(), &s, 1.0).unwrap());
        s.remove("c");
        assert!(matches!(
            verify_assignment(&chain(), &s, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn symmetric_absence_is_a_direct_contradiction() {
        let r = entropy_feasible(&rel(&["x", "y"], &[], &[("x", "y"), ("y", "x")]), 1.0).unwrap();
        assert!(!r.feasible);
        assert_eq!(
            r.certificate,
            Some(Certificate::Contradiction {
                edges: vec![("x".into(), "y".into()), ("y".into(), "x".into())]
            })
        );
    }

    #[test]
    fn cross_class_absences_are_ignored() {
        let mut r = rel(&["x", "y"], &[], &[("x", "y"), ("y", "x")]);
        r.classes = vec![vec!["x".into()], vec!["y".into()]];
        assert!(entropy_feasible(&r, 1.0).unwrap().feasible);
    }

    #[test]
    fn additivity_is_structural() {
        // a ≺ b forces (a,a) ≺ (b,a); asserting the opposite is infeasible
        let mut r = rel(&["a", "b"], &[("a", "b")], &[]);
        r.states.push(RelState {
            id: "aa".into(),
            parts: vec![crate::existence::relation::Part {
                atom: "a".into(),
                weight: 2.0,
            }],
        });
        r.states.push(RelState {
            id: "ba".into(),
            parts: vec![
                crate::existence::relation::Part {
                    atom: "b".into(),
                    weight: 1.0,
                },
                crate::existence::relation::Part {
                    atom: "a".into(),
                    weight: 1.0,
                },
            ],
        });
        r.absent.push(("aa".into(), "ba".into()));
        let out = entropy_feasible(&r, 1.0).unwrap();
        assert!(!out.feasible);
        assert!(matches!(out.certificate, Some(Certificate::Program { .. })));
    }

    #[test]
    fn cyclic_strict_order_is_infeasible() {
        let r = rel(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c"), ("c", "a")],
            &[("b", "a")],
        );
        assert!(!entropy_feasible(&r, 1.0).unwrap().feasible);
    }

    #[test]
    fn margin_rescaling_scales_the_assignment() {
        let base = entropy_feasible(&chain(), 1.0).unwrap();
        for c in [0.5, 3.0, 1e3] {
            let r = entropy_feasible(&chain(), c).unwrap();
            assert!(r.feasible);
            for (k, v) in &base.assignment {
                assert!((r.assignment[k] - c * v).abs() <= 1e-9 * c);
            }
        }
        assert!(entropy_feasible(&chain(), 0.0).is_err());
    }

    #[test]
    fn spearman() {
        assert!((rank_correlation(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-12);
        assert!((rank_correlation(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert!(
            (rank_correlation(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]) - 0.8).abs() < 1e-12
        );
    }
}
