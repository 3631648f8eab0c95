//! Two identical incompressible bodies whose only adiabatic operations are
//! rubbing (raising one body's energy) and thermal equilibration (both bodies
//! go to the mean energy).
//!
//! The closure of these moves is
//! `Y reachable from X  ⇔  (V1 ≥ U1 ∧ V2 ≥ U2) ∨ min(V1, V2) ≥ (U1 + U2)/2`.
//! It is a preorder satisfying every accessibility axiom but not comparison,
//! so no additive entropy encodes it.

use std::collections::{BTreeSet, VecDeque};
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coupling::{coupling_class_of, coupling_decide, SpecificRelation};
use crate::error::{Error, Result};
use crate::oracle::{AccessibilityOracle, Decision, RELATIVE_TOL};
use crate::sampler::{SampleRng, StateSampler};
use crate::state::{CompoundState, SimpleState, SystemId, SystemSpec};

pub const RUBBING_SYSTEM: &str = "two-body";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoBodyState {
    pub u1: f64,
    pub u2: f64,
    /// Heat capacity of each body, J/K.
    pub c: f64,
}

impl TwoBodyState {
    pub fn new(u1: f64, u2: f64) -> Self {
        Self { u1, u2, c: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u1 >= 0.0 && self.u2 >= 0.0 && self.u1.is_finite() && self.u2.is_finite()) {
            return Err(Error::Domain(format!(
                "body energies must be finite and nonnegative, got ({}, {})",
                self.u1, self.u2
            )));
        }
        if !(self.c > 0.0) {
            return Err(Error::Domain(format!(
                "heat capacity must be positive, got {}",
                self.c
            )));
        }
        Ok(())
    }

    /// `amount` copies of the pair as a simple state with extensive coordinates.
    pub fn to_simple(&self, amount: f64) -> SimpleState {
        SimpleState {
            system: SystemId::new(RUBBING_SYSTEM),
            amount,
            coords: vec![self.u1 * amount, self.u2 * amount],
        }
    }

    pub fn to_compound(&self) -> CompoundState {
        self.to_simple(1.0).into()
    }

    pub fn temperatures(&self) -> (f64, f64) {
        (self.u1 / self.c, self.u2 / self.c)
    }
}

pub fn system_spec() -> SystemSpec {
    SystemSpec {
        id: SystemId::new(RUBBING_SYSTEM),
        substance: "incompressible solid pair".into(),
        coordinate_names: vec!["U1_J".into(), "U2_J".into()],
        amount_unit: "pair".into(),
        comparability_class: RUBBING_SYSTEM.into(),
    }
}

fn ge(a: f64, b: f64) -> bool {
    a + RELATIVE_TOL * a.abs().max(b.abs()) >= b
}

fn closure_precedes(x: (f64, f64), y: (f64, f64)) -> bool {
    let rubbed = ge(y.0, x.0) && ge(y.1, x.1);
    let equilibrated = ge(y.0.min(y.1), 0.5 * (x.0 + x.1));
    rubbed || equilibrated
}

/// Closed-form closure of {rub, equilibrate}.
pub fn rubbing_precedes(x: &TwoBodyState, y: &TwoBodyState) -> Decision {
    closure_precedes((x.u1, x.u2), (y.u1, y.u2)).into()
}

/// Square box `[lo, hi]²` of body energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBox {
    pub lo: f64,
    pub hi: f64,
}

/// Grid cells reached by breadth-first search.
#[derive(Debug, Clone)]
pub struct ReachableSet {
    pub step: f64,
    pub bounds: GridBox,
    cells: BTreeSet<(usize, usize)>,
}

impl ReachableSet {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, i: usize, j: usize) -> bool {
        self.cells.contains(&(i, j))
    }

    pub fn contains(&self, y: &TwoBodyState) -> bool {
        match (
            grid_index(y.u1, self.step, self.bounds),
            grid_index(y.u2, self.step, self.bounds),
        ) {
            (Some(i), Some(j)) => self.contains_cell(i, j),
            _ => false,
        }
    }

    pub fn states(&self) -> impl Iterator<Item = TwoBodyState> + '_ {
        self.cells.iter().map(move |&(i, j)| {
            TwoBodyState::new(
                self.bounds.lo + i as f64 * self.step,
                self.bounds.lo + j as f64 * self.step,
            )
        })
    }

    /// CSV `U1,U2`, one row per reachable grid state.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["U1", "U2"])?;
        for s in self.states() {
            w.write_record([s.u1.to_string(), s.u2.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn grid_index(u: f64, step: f64, bounds: GridBox) -> Option<usize> {
    let k = (u - bounds.lo) / step;
    let r = k.round();
    if (k - r).abs() > 1e-9 || r < 0.0 || u > bounds.hi + 1e-9 * step {
        return None;
    }
    Some(r as usize)
}

/// Breadth-first closure of `x` under discretized moves: raise one body by
/// `step`, or equilibrate both bodies to their mean when the mean lies on the
/// grid. An odd energy sum first needs one rubbing step, which yields the
/// same closure as the continuous moves.
pub fn rubbing_reachable_grid(
    x: &TwoBodyState,
    step: f64,
    bounds: GridBox,
) -> Result<ReachableSet> {
    x.validate()?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!(
            "grid step must be positive, got {step}"
        )));
    }
    if !(bounds.hi >= bounds.lo) {
        return Err(Error::Domain(format!(
            "empty box [{}, {}]",
            bounds.lo, bounds.hi
        )));
    }
    let (Some(i0), Some(j0)) = (
        grid_index(x.u1, step, bounds),
        grid_index(x.u2, step, bounds),
    ) else {
        return Err(Error::Domain(format!(
            "start ({}, {}) is not a grid point of [{}, {}]² with step {step}",
            x.u1, x.u2, bounds.lo, bounds.hi
        )));
    };
    let top = ((bounds.hi - bounds.lo) / step + 1e-9).floor() as usize;

    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert((i0, j0));
    queue.push_back((i0, j0));
    while let Some((i, j)) = queue.pop_front() {
        let mut moves = Vec::with_capacity(3);
        if i < top {
            moves.push((i + 1, j));
        }
        if j < top {
            moves.push((i, j + 1));
        }
        if (i + j) % 2 == 0 {
            let m = (i + j) / 2;
            moves.push((m, m));
        }
        for cell in moves {
            if seen.insert(cell) {
                queue.push_back(cell);
            }
        }
    }
    Ok(ReachableSet {
        step,
        bounds,
        cells: seen,
    })
}

/// BFS reachability against the closed form on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridEquivalence {
    pub width: usize,
    pub height: usize,
    pub step: f64,
    pub pairs_checked: usize,
    /// `(X, Y)` where the two disagree.
    pub mismatches: Vec<(TwoBodyState, TwoBodyState)>,
}

/// Checks every ordered pair of the `width × height` grid
/// `(i·step, j·step)`. BFS runs in the enclosing square box.
pub fn grid_equivalence(
    width: usize,
    height: usize,
    step: f64,
    parallel: bool,
) -> Result<GridEquivalence> {
    if width == 0 || height == 0 {
        return Err(Error::Domain("grid dimensions must be positive".into()));
    }
    let bounds = GridBox {
        lo: 0.0,
        hi: (width.max(height) - 1) as f64 * step,
    };
    let cells: Vec<TwoBodyState> = (0..width)
        .flat_map(|i| (0..height).map(move |j| TwoBodyState::new(i as f64 * step, j as f64 * step)))
        .collect();
    let from = |x: &TwoBodyState| -> Result<Vec<(TwoBodyState, TwoBodyState)>> {
        let set = rubbing_reachable_grid(x, step, bounds)?;
        Ok(cells
            .iter()
            .filter(|y| set.contains(y) != rubbing_precedes(x, y).holds())
            .map(|y| (*x, *y))
            .collect())
    };
    let per_start: Vec<_> = if parallel {
        cells.par_iter().map(from).collect::<Result<_>>()?
    } else {
        cells.iter().map(from).collect::<Result<_>>()?
    };
    Ok(GridEquivalence {
        width,
        height,
        step,
        pairs_checked: cells.len() * cells.len(),
        mismatches: per_start.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone)]
pub struct RubbingRelation {
    system: SystemId,
}

impl Default for RubbingRelation {
    fn default() -> Self {
        Self {
            system: SystemId::new(RUBBING_SYSTEM),
        }
    }
}

impl SpecificRelation for RubbingRelation {
    fn system(&self) -> &SystemId {
        &self.system
    }

    fn check(&self, x: &SimpleState) -> Result<()> {
        if x.coords.len() != 2 {
            return Err(Error::Domain(format!(
                "two-body state needs (U1, U2), got {} coordinates",
                x.coords.len()
            )));
        }
        TwoBodyState::new(x.coords[0], x.coords[1]).validate()
    }

    fn precedes_specific(&self, x: &[f64], y: &[f64]) -> bool {
        closure_precedes((x[0], x[1]), (y[0], y[1]))
    }
}

/// Rubbing world on compounds of two-body pairs, lifted by coupling.
#[derive(Debug, Clone, Default)]
pub struct RubbingOracle {
    relation: RubbingRelation,
}

impl AccessibilityOracle for RubbingOracle {
    fn name(&self) -> &str {
        "rubbing"
    }

    fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision> {
        coupling_decide(&self.relation, x, y)
    }

    fn class_of(&self, x: &CompoundState) -> Result<String> {
        coupling_class_of(&self.relation, x)
    }
}

#[derive(Debug, Clone)]
pub struct RubbingSampler {
    pub max_energy: f64,
    pub amounts: Vec<f64>,
}

impl Default for RubbingSampler {
    fn default() -> Self {
        Self {
            max_energy: 6.0,
            amounts: vec![0.5, 1.0, 2.0],
        }
    }
}

impl RubbingSampler {
    pub fn with_amount(mut self, n: f64) -> Self {
        self.amounts = vec![n];
        self
    }

    fn draw(&self, rng: &mut SampleRng, n: f64) -> CompoundState {
        let u1 = rng.gen_range(0.0..=self.max_energy);
        let u2 = rng.gen_range(0.0..=self.max_energy);
        TwoBodyState::new(u1, u2).to_simple(n).into()
    }
}

impl StateSampler for RubbingSampler {
    fn sample(&self, rng: &mut SampleRng) -> CompoundState {
        let n = self.amounts[rng.gen_range(0..self.amounts.len())];
        self.draw(rng, n)
    }

    fn sample_near(&self, rng: &mut SampleRng, x: &CompoundState) -> CompoundState {
        let parts = x
            .parts()
            .iter()
            .map(|p| {
                let (mut u1, mut u2) = (p.coords[0] / p.amount, p.coords[1] / p.amount);
                match rng.gen_range(0..4) {
                    0 => {
                        if rng.gen_bool(0.5) {
                            u1 += rng.gen_range(0.0..1.0);
                        } else {
                            u2 += rng.gen_range(0.0..1.0);
                        }
                    }
                    1 => {
                        let m = 0.5 * (u1 + u2);
                        u1 = m + rng.gen_range(0.0..0.5);
                        u2 = m + rng.gen_range(0.0..0.5);
                    }
                    2 => {
                        u1 = (u1 + rng.gen_range(-0.5..0.5)).max(0.0);
                        u2 = (u2 + rng.gen_range(-0.5..0.5)).max(0.0);
                    }
                    _ => {
                        u1 = (u1 - rng.gen_range(0.0..0.5)).max(0.0);
                    }
                }
                TwoBodyState::new(u1, u2).to_simple(p.amount)
            })
            .collect();
        CompoundState::new(parts).expect("moves keep states valid")
    }

    fn sample_in_class(&self, rng: &mut SampleRng, x: &CompoundState) -> CompoundState {
        self.draw(rng, x.total_amount())
    }
}

/// A pair with `U1' < U1 < U2 < U2'` and `U1 + U2 < U1' + U2'`. Returns `(X, Y)`
/// with `X = (U1, U2)` and `Y = (U1', U2')`.
pub fn sample_incomparable_pair(rng: &mut SampleRng) -> (TwoBodyState, TwoBodyState) {
    let u1p = rng.gen_range(0.0..2.0);
    let u1 = u1p + rng.gen_range(0.01..2.0);
    let u2 = u1 + rng.gen_range(0.01..2.0);
    // sum condition is exactly U2' - U2 > U1 - U1'
    let u2p = u2 + (u1 - u1p) + rng.gen_range(0.01..2.0);
    (TwoBodyState::new(u1, u2), TwoBodyState::new(u1p, u2p))
}

pub fn matches_incomparable_pattern(x: &TwoBodyState, y: &TwoBodyState) -> bool {
    y.u1 < x.u1 && x.u1 < x.u2 && x.u2 < y.u2 && x.u1 + x.u2 < y.u1 + y.u2
}
