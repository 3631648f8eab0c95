//! Ideal gas with constant heat capacity.
//!
//! State coordinates are `(U, V)` in joules and cubic metres, amount in mol.
//! Single-part decisions follow the adiabat invariant `U·V^(γ-1)` per mole;
//! compound decisions use the entropy-sum criterion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{
    amount_class_key, amounts_match, le_with_tol, require_same_amounts, AccessibilityOracle,
    Decision, RELATIVE_TOL,
};
use crate::sampler::{SampleRng, StateSampler};
use crate::state::{CompoundState, SimpleState, SystemId, SystemSpec};

pub const GAS_CONSTANT: f64 = 8.314;
pub const GAS_SYSTEM: &str = "ideal-gas";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasSpec {
    /// J/(mol·K)
    pub r: f64,
    /// Molar heat capacity at constant volume, J/(mol·K).
    pub cv: f64,
    pub gamma: f64,
    /// Entropy offset per mole, J/(mol·K).
    pub s0: f64,
}

impl Default for GasSpec {
    fn default() -> Self {
        Self::monatomic()
    }
}

impl GasSpec {
    /// `Cv = 3R/2`, `γ = 5/3`, `s0 = 0`.
    pub fn monatomic() -> Self {
        let cv = 1.5 * GAS_CONSTANT;
        Self {
            r: GAS_CONSTANT,
            cv,
            gamma: 1.0 + GAS_CONSTANT / cv,
            s0: 0.0,
        }
    }

    pub fn new(cv: f64, s0: f64) -> Result<Self> {
        let spec = Self {
            r: GAS_CONSTANT,
            cv,
            gamma: 1.0 + GAS_CONSTANT / cv,
            s0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cv > 0.0 && self.r > 0.0 && self.gamma > 1.0) {
            return Err(Error::Domain(format!("invalid gas constants {self:?}")));
        }
        let lhs = self.gamma * self.cv;
        let rhs = self.cv + self.r;
        if (lhs - rhs).abs() > 1e-12 * rhs {
            return Err(Error::Domain(format!(
                "gamma·Cv = {lhs} but Cv + R = {rhs}"
            )));
        }
        Ok(())
    }

    pub fn system_spec() -> SystemSpec {
        SystemSpec {
            id: SystemId::new(GAS_SYSTEM),
            substance: "ideal gas".into(),
            coordinate_names: vec!["U_J".into(), "V_m3".into()],
            amount_unit: "mol".into(),
            comparability_class: GAS_SYSTEM.into(),
        }
    }

    /// `n` mol with total energy `u` and total volume `v`.
    pub fn state(&self, n: f64, u: f64, v: f64) -> Result<SimpleState> {
        let s = SimpleState::new(GAS_SYSTEM, n, vec![u, v])?;
        check_domain(&s)?;
        Ok(s)
    }

    pub fn temperature(&self, x: &SimpleState) -> f64 {
        x.coords[0] / (x.amount * self.cv)
    }

    pub fn pressure(&self, u: f64, v: f64) -> f64 {
        (self.gamma - 1.0) * u / v
    }

    /// Per-mole adiabat invariant `(U/n)·(V/n)^(γ-1)`.
    pub fn adiabat_invariant(&self, x: &SimpleState) -> f64 {
        let u = x.coords[0] / x.amount;
        let v = x.coords[1] / x.amount;
        u * v.powf(self.gamma - 1.0)
    }
}

fn check_domain(x: &SimpleState) -> Result<()> {
    if x.system.as_str() != GAS_SYSTEM {
        return Err(Error::UnknownSystem(x.system.to_string()));
    }
    if x.coords.len() != 2 {
        return Err(Error::Domain(format!(
            "gas state needs (U, V), got {} coordinates",
            x.coords.len()
        )));
    }
    if !(x.coords[0] > 0.0 && x.coords[1] > 0.0) {
        return Err(Error::Domain(format!(
            "gas state needs U > 0 and V > 0, got {:?}",
            x.coords
        )));
    }
    Ok(())
}

/// Single-system decision through the adiabat invariant.
pub fn gas_precedes(spec: &GasSpec, x: &SimpleState, y: &SimpleState) -> Result<Decision> {
    check_domain(x)?;
    check_domain(y)?;
    if !amounts_match(x.amount, y.amount) {
        return Err(Error::Class(format!(
            "{} mol vs {} mol",
            x.amount, y.amount
        )));
    }
    let ix = spec.adiabat_invariant(x);
    let iy = spec.adiabat_invariant(y);
    Ok(le_with_tol(ix, iy, ix.max(iy)).into())
}

/// `S = n·(Cv·ln(U/n) + R·ln(V/n) + s0)` in J/K.
pub fn gas_entropy(spec: &GasSpec, x: &SimpleState) -> Result<f64> {
    check_domain(x)?;
    let n = x.amount;
    let u = x.coords[0] / n;
    let v = x.coords[1] / n;
    Ok(n * (spec.cv * u.ln() + spec.r * v.ln() + spec.s0))
}

fn entropy_sum(spec: &GasSpec, x: &CompoundState) -> Result<(f64, f64)> {
    x.parts().iter().try_fold((0.0, 0.0), |(sum, mag), p| {
        let s = gas_entropy(spec, p)?;
        Ok((sum + s, mag + s.abs()))
    })
}

/// Entropy-sum criterion for compounds of gas parts at equal total amount.
pub fn compound_gas_precedes(
    spec: &GasSpec,
    x: &CompoundState,
    y: &CompoundState,
) -> Result<Decision> {
    require_same_amounts(x, y)?;
    let (sx, mx) = entropy_sum(spec, x)?;
    let (sy, my) = entropy_sum(spec, y)?;
    Ok(le_with_tol(sx, sy, mx + my).into())
}

/// Let two gas samples exchange energy at fixed volumes until their
/// temperatures agree. Total energy is conserved.
pub fn thermal_equilibrate(
    spec: &GasSpec,
    a: &SimpleState,
    b: &SimpleState,
) -> Result<(SimpleState, SimpleState)> {
    check_domain(a)?;
    check_domain(b)?;
    if in_thermal_equilibrium(spec, a, b) {
        return Ok((a.clone(), b.clone()));
    }
    let total = a.coords[0] + b.coords[0];
    let ua = total * a.amount / (a.amount + b.amount);
    let ub = total - ua;
    let mut a2 = a.clone();
    let mut b2 = b.clone();
    a2.coords[0] = ua;
    b2.coords[0] = ub;
    Ok((a2, b2))
}

/// Thermal contact would change nothing.
pub fn in_thermal_equilibrium(spec: &GasSpec, a: &SimpleState, b: &SimpleState) -> bool {
    let ta = spec.temperature(a);
    let tb = spec.temperature(b);
    (ta - tb).abs() <= RELATIVE_TOL * ta.abs().max(tb.abs())
}

#[derive(Debug, Clone, Default)]
pub struct GasOracle {
    pub spec: GasSpec,
}

impl GasOracle {
    pub fn new(spec: GasSpec) -> Self {
        Self { spec }
    }
}

impl AccessibilityOracle for GasOracle {
    fn name(&self) -> &str {
        "ideal-gas"
    }

    fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision> {
        match (x.parts(), y.parts()) {
            ([a], [b]) => gas_precedes(&self.spec, a, b),
            _ => compound_gas_precedes(&self.spec, x, y),
        }
    }

    fn class_of(&self, x: &CompoundState) -> Result<String> {
        for p in x.parts() {
            check_domain(p)?;
        }
        Ok(amount_class_key(x))
    }
}

/// `width × height` one-mole states evenly spaced over `u_range × v_range`
/// (ends included), ids `u{i}_v{j}`, `U` varying slowest.
pub fn gas_grid(
    spec: &GasSpec,
    width: usize,
    height: usize,
    u_range: (f64, f64),
    v_range: (f64, f64),
) -> Result<Vec<(String, SimpleState)>> {
    let axis = |k: usize, n: usize, (lo, hi): (f64, f64)| {
        if n == 1 {
            lo
        } else if k + 1 == n {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(width * height);
    for i in 0..width {
        for j in 0..height {
            let s = spec.state(1.0, axis(i, width, u_range), axis(j, height, v_range))?;
            out.push((format!("u{i}_v{j}"), s));
        }
    }
    Ok(out)
}

/// Samples 1-part gas states with per-mole `U ∈ u_range`, `V ∈ v_range`.
#[derive(Debug, Clone)]
pub struct GasSampler {
    pub spec: GasSpec,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub amounts: Vec<f64>,
}

impl GasSampler {
    pub fn new(spec: GasSpec) -> Self {
        Self {
            spec,
            u_range: (50.0, 400.0),
            v_range: (0.5, 4.0),
            amounts: vec![0.5, 1.0, 2.0],
        }
    }

    /// Fixed amount only.
    pub fn with_amount(mut self, n: f64) -> Self {
        self.amounts = vec![n];
        self
    }

    fn draw(&self, rng: &mut SampleRng, n: f64) -> CompoundState {
        let u = rng.gen_range(self.u_range.0..=self.u_range.1);
        let v = rng.gen_range(self.v_range.0..=self.v_range.1);
        SimpleState {
            system: SystemId::new(GAS_SYSTEM),
            amount: n,
            coords: vec![u * n, v * n],
        }
        .into()
    }
}

impl StateSampler for GasSampler {
    fn sample(&self, rng: &mut SampleRng) -> CompoundState {
        let n = self.amounts[rng.gen_range(0..self.amounts.len())];
        self.draw(rng, n)
    }

    fn sample_near(&self, rng: &mut SampleRng, x: &CompoundState) -> CompoundState {
        let parts = x
            .parts()
            .iter()
            .map(|p| {
                let fu: f64 = rng.gen_range(-0.2..0.2);
                let fv: f64 = rng.gen_range(-0.2..0.2);
                SimpleState {
                    system: p.system.clone(),
                    amount: p.amount,
                    coords: vec![p.coords[0] * fu.exp(), p.coords[1] * fv.exp()],
                }
            })
            .collect();
        CompoundState::new(parts).expect("perturbation keeps states valid")
    }

    fn sample_in_class(&self, rng: &mut SampleRng, x: &CompoundState) -> CompoundState {
        self.draw(rng, x.total_amount())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> GasSpec {
        GasSpec::monatomic()
    }

    #[test]
    fn monatomic_constants() {
        let s = spec();
        assert!((s.cv - 12.471).abs() < 1e-12);
        assert!((s.gamma - 5.0 / 3.0).abs() < 1e-12);
        s.validate().unwrap();
        assert!(GasSpec::new(-1.0, 0.0).is_err());
        let bad = GasSpec {
            gamma: 1.5,
            ..spec()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn grid_spans_both_ranges() {
        let g = gas_grid(&spec(), 3, 2, (50.0, 400.0), (0.5, 4.0)).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0].0, "u0_v0");
        assert_eq!(g[0].1.coords, vec![50.0, 0.5]);
        assert_eq!(g[5].1.coords, vec![400.0, 4.0]);
        assert_eq!(g[2].1.coords, vec![225.0, 0.5]);
    }

    #[test]
    fn adiabat_example() {
        // 50 * 8^(2/3) = 200 >= 100
        let s = spec();
        let x = s.state(1.0, 100.0, 1.0).unwrap();
        let y = s.state(1.0, 50.0, 8.0).unwrap();
        assert_eq!(gas_precedes(&s, &x, &y).unwrap(), Decision::Precedes);
        assert_eq!(gas_precedes(&s, &y, &x).unwrap(), Decision::NotPrecedes);
        assert_eq!(gas_precedes(&s, &x, &x).unwrap(), Decision::Precedes);
    }

    #[test]
    fn adiabat_boundary_is_two_way() {
        let s = spec();
        let x = s.state(1.0, 100.0, 1.0).unwrap();
        // same invariant: U V^(2/3) = 100
        let y = s.state(1.0, 100.0 / 8f64.powf(2.0 / 3.0), 8.0).unwrap();
        assert!(gas_precedes(&s, &x, &y).unwrap().holds());
        assert!(gas_precedes(&s, &y, &x).unwrap().holds());
    }

    #[test]
    fn unequal_amounts_are_a_class_error() {
        let s = spec();
        let x = s.state(1.0, 100.0, 1.0).unwrap();
        let y = s.state(2.0, 100.0, 1.0).unwrap();
        assert!(matches!(gas_precedes(&s, &x, &y), Err(Error::Class(_))));
    }

    #[test]
    fn entropy_closed_form() {
        let s = spec();
        let x = s.state(1.0, 100.0, 1.0).unwrap();
        let sx = gas_entropy(&s, &x).unwrap();
        assert!((sx - 57.431_077_389_457_49).abs() < 1e-10);
        let sx2 = gas_entropy(&s, &x.scaled(2.0)).unwrap();
        assert!((sx2 - 2.0 * sx).abs() < 1e-12 * sx2);
        let hotter = s.state(1.0, 200.0, 1.0).unwrap();
        assert!(gas_entropy(&s, &hotter).unwrap() > sx);
    }

    #[test]
    fn entropy_rejects_nonpositive_coordinates() {
        let s = spec();
        let bad = SimpleState::new(GAS_SYSTEM, 1.0, vec![0.0, 1.0]).unwrap();
        assert!(matches!(gas_entropy(&s, &bad), Err(Error::Domain(_))));
        let bad = SimpleState::new(GAS_SYSTEM, 1.0, vec![1.0, -1.0]).unwrap();
        assert!(matches!(gas_entropy(&s, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn compound_entropy_sum_example() {
        // 57.4311 + 66.0753 = 123.5064 <= 124.9753
        let s = spec();
        let x = CompoundState::new(vec![
            s.state(1.0, 100.0, 1.0).unwrap(),
            s.state(1.0, 200.0, 1.0).unwrap(),
        ])
        .unwrap();
        let y: CompoundState = s.state(2.0, 300.0, 2.0).unwrap().into();
        assert_eq!(
            compound_gas_precedes(&s, &x, &y).unwrap(),
            Decision::Precedes
        );
        assert_eq!(
            compound_gas_precedes(&s, &y, &x).unwrap(),
            Decision::NotPrecedes
        );
    }

    #[test]
    fn split_and_recombine_are_both_accessible() {
        let s = spec();
        let x = s.state(1.0, 100.0, 1.0).unwrap();
        let two_x: CompoundState = x.scaled(2.0).into();
        let x_x = CompoundState::new(vec![x.clone(), x]).unwrap();
        assert!(compound_gas_precedes(&s, &two_x, &x_x).unwrap().holds());
        assert!(compound_gas_precedes(&s, &x_x, &two_x).unwrap().holds());
    }

    #[test]
    fn compound_mass_mismatch_is_class_error() {
        let s = spec();
        let x: CompoundState = s.state(2.0, 100.0, 1.0).unwrap().into();
        let y: CompoundState = s.state(3.0, 100.0, 1.0).unwrap().into();
        assert!(matches!(
            compound_gas_precedes(&s, &x, &y),
            Err(Error::Class(_))
        ));
    }

    #[test]
    fn equilibration_example() {
        let s = spec();
        let a = s.state(1.0, s.cv * 300.0, 1.0).unwrap();
        let b = s.state(1.0, s.cv * 400.0, 1.0).unwrap();
        let (a2, b2) = thermal_equilibrate(&s, &a, &b).unwrap();
        assert!((s.temperature(&a2) - 350.0).abs() < 1e-9);
        assert!((s.temperature(&b2) - 350.0).abs() < 1e-9);
        assert!((a2.coords[0] - 4364.85).abs() < 1e-9);
        assert!((b2.coords[0] - 4364.85).abs() < 1e-9);
        let before = gas_entropy(&s, &a).unwrap() + gas_entropy(&s, &b).unwrap();
        let after = gas_entropy(&s, &a2).unwrap() + gas_entropy(&s, &b2).unwrap();
        assert!(after >= before);
    }

    #[test]
    fn equal_temperatures_are_a_fixed_point() {
        let s = spec();
        let a = s.state(1.0, s.cv * 300.0, 1.0).unwrap();
        let b = s.state(2.0, 2.0 * s.cv * 300.0, 3.0).unwrap();
        let (a2, b2) = thermal_equilibrate(&s, &a, &b).unwrap();
        assert_eq!(a2, a);
        assert_eq!(b2, b);
    }
}
