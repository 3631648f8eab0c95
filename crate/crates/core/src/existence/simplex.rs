//! Dense two-phase simplex with Bland's rule.
//!
//! Solves `min c·x` subject to rows `a·x {≤,=,≥} b` and `x ≥ 0`.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { residual: f64 },
    Unbounded,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            objective: vec![0.0; vars],
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        self.rows.push(Row { coeffs, cmp, rhs });
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Tableau::build(self)?.run()
    }
}

struct Tableau {
    m: usize,
    /// total columns excluding rhs
    n: usize,
    first_artificial: usize,
    structural: usize,
    a: Vec<f64>,
    /// reduced-cost row; last entry is minus the objective value
    cost: Vec<f64>,
    basis: Vec<usize>,
    objective: Vec<f64>,
    rhs_scale: f64,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Self> {
        if lp.objective.len() != lp.vars {
            return Err(Error::Domain(
                "objective length differs from variable count".into(),
            ));
        }
        let m = lp.rows.len();
        let mut rows = Vec::with_capacity(m);
        for r in &lp.rows {
            if !r.rhs.is_finite()
                || r.coeffs
                    .iter()
                    .any(|&(j, c)| j >= lp.vars || !c.is_finite())
            {
                return Err(Error::Domain("malformed linear program row".into()));
            }
            // normalize to rhs >= 0
            let flip = r.rhs < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            let cmp = match (r.cmp, flip) {
                (Cmp::Le, true) => Cmp::Ge,
                (Cmp::Ge, true) => Cmp::Le,
                (c, _) => c,
            };
            rows.push((sign, cmp, sign * r.rhs, &r.coeffs));
        }
        let slacks = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Cmp::Le).count();
        let structural = lp.vars;
        let first_artificial = structural + slacks;
        let n = first_artificial + artificials;
        let w = n + 1;
        let mut a = vec![0.0; m * w];
        let mut basis = vec![0; m];
        let (mut s, mut art) = (structural, first_artificial);
        let mut rhs_scale: f64 = 1.0;
        for (i, (sign, cmp, rhs, coeffs)) in rows.into_iter().enumerate() {
            let row = &mut a[i * w..(i + 1) * w];
            for &(j, c) in coeffs {
                row[j] += sign * c;
            }
            row[n] = rhs;
            rhs_scale = rhs_scale.max(rhs);
            match cmp {
                Cmp::Le => {
                    row[s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Cmp::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Cmp::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Ok(Self {
            m,
            n,
            first_artificial,
            structural,
            a,
            cost: vec![0.0; w],
            basis,
            objective: lp.objective.clone(),
            rhs_scale,
        })
    }

    fn width(&self) -> usize {
        self.n + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.width() + j]
    }

    /// Reduced costs of `c` for the current basis.
    fn price(&mut self, c: &[f64]) {
        let w = self.width();
        self.cost = vec![0.0; w];
        self.cost[..c.len()].copy_from_slice(c);
        for i in 0..self.m {
            let cb = c.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    self.cost[j] -= cb * self.a[i * w + j];
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.a[r * w + c];
        for j in 0..w {
            self.a[r * w + j] /= p;
        }
        let (before, rest) = self.a.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for j in 0..w {
                    row[j] -= f * prow[j];
                }
                row[c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for j in 0..w {
                self.cost[j] -= f * prow[j];
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland iterations over columns `< limit`. Returns false when unbounded.
    fn iterate(&mut self, limit: usize) -> Result<bool> {
        let n = self.n;
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..limit).find(|&j| self.cost[j] < -PIVOT_EPS) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let aij = self.at(i, enter);
                if aij > PIVOT_EPS {
                    let ratio = self.at(i, n) / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            let tie = (ratio - best).abs() <= PIVOT_EPS * (1.0 + best.abs());
                            if (ratio < best && !tie) || (tie && self.basis[i] < self.basis[k]) {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
        Err(Error::Domain(format!(
            "simplex did not terminate within {MAX_PIVOTS} pivots"
        )))
    }

    fn run(mut self) -> Result<LpOutcome> {
        let n = self.n;
        // phase 1: minimize the sum of artificials
        if self.first_artificial < n {
            let mut c1 = vec![0.0; n];
            c1[self.first_artificial..]
                .iter_mut()
                .for_each(|c| *c = 1.0);
            self.price(&c1);
            self.iterate(n)?;
            let residual = -self.cost[n];
            if residual > 1e-9 * self.rhs_scale {
                return Ok(LpOutcome::Infeasible { residual });
            }
            self.drive_out_artificials();
        }

        // phase 2 over structural and slack columns only
        let c2 = self.objective.clone();
        self.price(&c2);
        if !self.iterate(self.first_artificial)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; self.structural];
        for i in 0..self.m {
            if self.basis[i] < self.structural {
                x[self.basis[i]] = self.at(i, n);
            }
        }
        let value = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        Ok(LpOutcome::Optimal { x, value })
    }

    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.m {
            if self.basis[i] >= self.first_artificial {
                let col = (0..self.first_artificial).find(|&j| self.at(i, j).abs() > PIVOT_EPS);
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // redundant row
                        let w = self.width();
                        self.a.drain(i * w..(i + 1) * w);
                        self.basis.remove(i);
                        self.m -= 1;
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(o: LpOutcome) -> (Vec<f64>, f64) {
        match o {
            LpOutcome::Optimal { x, value } => (x, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-3.0, -5.0];
        lp.add_row(vec![(0, 1.0)], Cmp::Le, 4.0);
        lp.add_row(vec![(1, 2.0)], Cmp::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], Cmp::Le, 18.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((v + 36.0).abs() < 1e-9);
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn needs_phase_one() {
        // min x + y, x + y >= 2, x - y = 1 -> (1.5, 0.5)
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![1.0, 1.0];
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Cmp::Ge, 2.0);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Cmp::Eq, 1.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((v - 2.0).abs() < 1e-9);
        assert!((x[0] - 1.5).abs() < 1e-9 && (x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // x - y <= -1 means y >= x + 1
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![0.0, 1.0];
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Cmp::Le, -1.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((v - 1.0).abs() < 1e-9);
        assert!(x[0].abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Cmp::Ge, 1.0);
        lp.add_row(vec![(1, 1.0), (0, -1.0)], Cmp::Ge, 1.0);
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Infeasible { .. }));

        let mut lp = LinearProgram::new(1);
        lp.objective = vec![-1.0];
        lp.add_row(vec![(0, 1.0)], Cmp::Ge, 1.0);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example; Bland's rule must terminate
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![-0.75, 150.0, -0.02, 6.0];
        lp.add_row(
            vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)],
            Cmp::Le,
            0.0,
        );
        lp.add_row(
            vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)],
            Cmp::Le,
            0.0,
        );
        lp.add_row(vec![(2, 1.0)], Cmp::Le, 1.0);
        let (_, v) = optimal(lp.solve().unwrap());
        assert!((v + 0.05).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![1.0, 2.0];
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Cmp::Eq, 3.0);
        lp.add_row(vec![(0, 2.0), (1, 2.0)], Cmp::Eq, 6.0);
        let (x, v) = optimal(lp.solve().unwrap());
        assert!((v - 3.0).abs() < 1e-9);
        assert!((x[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn malformed_rows_rejected() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![(3, 1.0)], Cmp::Le, 1.0);
        assert!(lp.solve().is_err());
    }
}
