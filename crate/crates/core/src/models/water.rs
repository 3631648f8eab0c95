//! Water at one bar along its heating curve: ice, melting plateau, liquid,
//! boiling plateau, vapor.
//!
//! The state variable is the specific thermal energy `h` (J/kg), zero for ice
//! at the melting point. Entropy is `∫ dh / T` along the curve with the `P dV`
//! work term neglected, and is zero for ice at the melting point.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{
    amount_class_key, le_with_tol, require_same_amounts, AccessibilityOracle, Decision,
};
use crate::sampler::{SampleRng, StateSampler};
use crate::state::{CompoundState, SimpleState, SystemId, SystemSpec};

pub const WATER_SYSTEM: &str = "water";

/// Handbook constants at one bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConstants {
    pub c_ice: f64,
    pub c_liq: f64,
    pub c_vap: f64,
    pub l_fus: f64,
    pub t_fus: f64,
    pub l_vap: f64,
    pub t_vap: f64,
    /// Coldest ice in the domain, K.
    pub t_min: f64,
    /// Hottest vapor in the domain, K.
    pub t_max: f64,
}

impl Default for PhaseConstants {
    fn default() -> Self {
        Self {
            c_ice: 2060.0,
            c_liq: 4180.0,
            c_vap: 1996.0,
            l_fus: 334_000.0,
            t_fus: 273.15,
            l_vap: 2_260_000.0,
            t_vap: 373.15,
            t_min: 173.15,
            t_max: 573.15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Ice,
    Melting,
    Liquid,
    Boiling,
    Vapor,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Ice => "ice",
            Phase::Melting => "ice+liquid",
            Phase::Liquid => "liquid",
            Phase::Boiling => "liquid+vapor",
            Phase::Vapor => "vapor",
        }
    }
}

impl PhaseConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.c_ice, self.c_liq, self.c_vap, self.l_fus, self.t_fus, self.l_vap, self.t_vap,
            self.t_min, self.t_max,
        ];
        if all.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Domain("phase constants must be positive".into()));
        }
        if !(self.t_min <= self.t_fus && self.t_fus < self.t_vap && self.t_vap <= self.t_max) {
            return Err(Error::Domain("need T_min <= T_fus < T_vap <= T_max".into()));
        }
        Ok(())
    }

    pub fn h_min(&self) -> f64 {
        self.c_ice * (self.t_min - self.t_fus)
    }

    /// Liquid at the melting point.
    pub fn h_liquid_start(&self) -> f64 {
        self.l_fus
    }

    /// Liquid at the boiling point.
    pub fn h_boil_start(&self) -> f64 {
        self.l_fus + self.c_liq * (self.t_vap - self.t_fus)
    }

    /// Saturated vapor at the boiling point.
    pub fn h_vapor_start(&self) -> f64 {
        self.h_boil_start() + self.l_vap
    }

    pub fn h_max(&self) -> f64 {
        self.h_vapor_start() + self.c_vap * (self.t_max - self.t_vap)
    }

    fn check_h(&self, h: f64) -> Result<()> {
        let (lo, hi) = (self.h_min(), self.h_max());
        let slack = 1e-12 * hi;
        if !(h >= lo - slack && h <= hi + slack) {
            return Err(Error::Domain(format!(
                "specific energy {h} J/kg outside [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    pub fn phase(&self, h: f64) -> Result<Phase> {
        self.check_h(h)?;
        Ok(if h <= 0.0 {
            Phase::Ice
        } else if h < self.h_liquid_start() {
            Phase::Melting
        } else if h <= self.h_boil_start() {
            Phase::Liquid
        } else if h < self.h_vapor_start() {
            Phase::Boiling
        } else {
            Phase::Vapor
        })
    }

    pub fn temperature(&self, h: f64) -> Result<f64> {
        Ok(match self.phase(h)? {
            Phase::Ice => self.t_fus + h / self.c_ice,
            Phase::Melting => self.t_fus,
            Phase::Liquid => self.t_fus + (h - self.h_liquid_start()) / self.c_liq,
            Phase::Boiling => self.t_vap,
            Phase::Vapor => self.t_vap + (h - self.h_vapor_start()) / self.c_vap,
        })
    }

    /// Entropy per kilogram, J/(kg·K).
    pub fn specific_entropy(&self, h: f64) -> Result<f64> {
        let s_liquid0 = self.l_fus / self.t_fus;
        let s_boil0 = s_liquid0 + self.c_liq * (self.t_vap / self.t_fus).ln();
        let s_vapor0 = s_boil0 + self.l_vap / self.t_vap;
        let t = self.temperature(h)?;
        Ok(match self.phase(h)? {
            Phase::Ice => self.c_ice * (t / self.t_fus).ln(),
            Phase::Melting => h / self.t_fus,
            Phase::Liquid => s_liquid0 + self.c_liq * (t / self.t_fus).ln(),
            Phase::Boiling => s_boil0 + (h - self.h_boil_start()) / self.t_vap,
            Phase::Vapor => s_vapor0 + self.c_vap * (t / self.t_vap).ln(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaterState {
    /// kg
    pub mass: f64,
    /// J/kg
    pub h: f64,
}

impl WaterState {
    pub fn new(k: &PhaseConstants, mass: f64, h: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        k.check_h(h)?;
        Ok(Self { mass, h })
    }

    pub fn ice_at_melting(mass: f64) -> Self {
        Self { mass, h: 0.0 }
    }

    pub fn liquid_at_melting(k: &PhaseConstants, mass: f64) -> Self {
        Self {
            mass,
            h: k.h_liquid_start(),
        }
    }

    pub fn vapor_at_boiling(k: &PhaseConstants, mass: f64) -> Self {
        Self {
            mass,
            h: k.h_vapor_start(),
        }
    }

    pub fn to_simple(&self) -> SimpleState {
        SimpleState {
            system: SystemId::new(WATER_SYSTEM),
            amount: self.mass,
            coords: vec![self.mass * self.h],
        }
    }

    pub fn to_compound(&self) -> CompoundState {
        self.to_simple().into()
    }

    pub fn from_simple(k: &PhaseConstants, x: &SimpleState) -> Result<Self> {
        if x.system.as_str() != WATER_SYSTEM {
            return Err(Error::UnknownSystem(x.system.to_string()));
        }
        if x.coords.len() != 1 {
            return Err(Error::Domain(format!(
                "water state has one coordinate, got {}",
                x.coords.len()
            )));
        }
        Self::new(k, x.amount, x.coords[0] / x.amount)
    }
}

pub fn system_spec() -> SystemSpec {
    SystemSpec {
        id: SystemId::new(WATER_SYSTEM),
        substance: "water".into(),
        coordinate_names: vec!["U_J".into()],
        amount_unit: "kg".into(),
        comparability_class: WATER_SYSTEM.into(),
    }
}

/// Total entropy of `w` in J/K.
pub fn water_entropy(k: &PhaseConstants, w: &WaterState) -> Result<f64> {
    Ok(w.mass * k.specific_entropy(w.h)?)
}

fn entropy_sum(k: &PhaseConstants, x: &CompoundState) -> Result<(f64, f64)> {
    x.parts().iter().try_fold((0.0, 0.0), |(sum, mag), p| {
        let s = water_entropy(k, &WaterState::from_simple(k, p)?)?;
        Ok((sum + s, mag + s.abs()))
    })
}

/// Entropy-sum criterion at equal total mass.
pub fn water_precedes(
    k: &PhaseConstants,
    x: &CompoundState,
    y: &CompoundState,
) -> Result<Decision> {
    let (sx, mx) = entropy_sum(k, x)?;
    let (sy, my) = entropy_sum(k, y)?;
    require_same_amounts(x, y)?;
    Ok(le_with_tol(sx, sy, mx + my).into())
}

/// CSV `h_J_per_kg,T_K,phase,entropy_J_per_kgK` on `rows` evenly spaced points
/// spanning the whole domain.
pub fn write_water_table<W: Write>(k: &PhaseConstants, rows: usize, out: W) -> Result<()> {
    if rows < 2 {
        return Err(Error::Domain("water table needs at least two rows".into()));
    }
    let (lo, hi) = (k.h_min(), k.h_max());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["h_J_per_kg", "T_K", "phase", "entropy_J_per_kgK"])?;
    for i in 0..rows {
        let h = if i + 1 == rows {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (rows - 1) as f64
        };
        w.write_record([
            h.to_string(),
            k.temperature(h)?.to_string(),
            k.phase(h)?.as_str().to_string(),
            k.specific_entropy(h)?.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct WaterOracle {
    pub constants: PhaseConstants,
}

impl AccessibilityOracle for WaterOracle {
    fn name(&self) -> &str {
        "water"
    }

    fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision> {
        water_precedes(&self.constants, x, y)
    }

    fn class_of(&self, x: &CompoundState) -> Result<String> {
        for p in x.parts() {
            WaterState::from_simple(&self.constants, p)?;
        }
        Ok(amount_class_key(x))
    }
}

#[derive(Debug, Clone)]
pub struct WaterSampler {
    pub constants: PhaseConstants,
    pub amounts: Vec<f64>,
}

impl Default for WaterSampler {
    fn default() -> Self {
        Self {
            constants: PhaseConstants::default(),
            amounts: vec![0.5, 1.0, 2.0],
        }
    }
}

impl WaterSampler {
    fn draw(&self, rng: &mut SampleRng, mass: f64) -> CompoundState {
        let h = rng.gen_range(self.constants.h_min()..=self.constants.h_max());
        WaterState { mass, h }.to_compound()
    }
}

impl StateSampler for WaterSampler {
    fn sample(&self, rng: &mut SampleRng) -> CompoundState {
        let m = self.amounts[rng.gen_range(0..self.amounts.len())];
        self.draw(rng, m)
    }

    fn sample_near(&self, rng: &mut SampleRng, x: &CompoundState) -> CompoundState {
        let k = &self.constants;
        let span = 0.05 * (k.h_max() - k.h_min());
        let parts = x
            .parts()
            .iter()
            .map(|p| {
                let h = (p.coords[0] / p.amount + rng.gen_range(-span..span))
                    .clamp(k.h_min(), k.h_max());
                WaterState { mass: p.amount, h }.to_simple()
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

    fn k() -> PhaseConstants {
        PhaseConstants::default()
    }

    #[test]
    fn reference_values() {
        let k = k();
        k.validate().unwrap();
        assert_eq!(k.specific_entropy(0.0).unwrap(), 0.0);
        // L_fus / T_fus
        let s_liq = k.specific_entropy(k.h_liquid_start()).unwrap();
        assert!((s_liq - 1_222.771_371_041_552_4).abs() < 1e-9);
        // + c_liq ln(373.15/273.15) + L_vap / T_vap
        let s_vap = k.specific_entropy(k.h_vapor_start()).unwrap();
        assert!((s_vap - 8_583.307_241_040_398).abs() < 1e-8);
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let k = k();
        assert!(matches!(
            k.specific_entropy(k.h_min() - 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            k.specific_entropy(k.h_max() * 1.01),
            Err(Error::Domain(_))
        ));
        assert!(WaterState::new(&k, 0.0, 0.0).is_err());
    }

    #[test]
    fn phases_and_temperatures() {
        let k = k();
        assert_eq!(k.phase(-1000.0).unwrap(), Phase::Ice);
        assert_eq!(k.phase(1000.0).unwrap(), Phase::Melting);
        assert_eq!(k.phase(k.h_liquid_start()).unwrap(), Phase::Liquid);
        assert_eq!(k.phase(k.h_boil_start() + 1.0).unwrap(), Phase::Boiling);
        assert_eq!(k.phase(k.h_vapor_start()).unwrap(), Phase::Vapor);
        assert_eq!(k.temperature(1000.0).unwrap(), 273.15);
        assert!((k.temperature(k.h_min()).unwrap() - k.t_min).abs() < 1e-9);
        assert!((k.temperature(k.h_max()).unwrap() - k.t_max).abs() < 1e-9);
    }

    #[test]
    fn continuous_across_segment_boundaries() {
        let k = k();
        for b in [0.0, k.h_liquid_start(), k.h_boil_start(), k.h_vapor_start()] {
            let d = 1e-6;
            let lo = k.specific_entropy(b - d).unwrap();
            let hi = k.specific_entropy(b + d).unwrap();
            let scale = lo.abs().max(hi.abs()).max(1.0);
            // slope is at most 1/T_min per J/kg
            assert!(
                (hi - lo).abs() <= 1e-9 * scale + 2.0 * d / k.t_min,
                "boundary {b}"
            );
        }
    }

    #[test]
    fn nondecreasing_in_h() {
        let k = k();
        let n = 2000;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=n {
            let h = k.h_min() + (k.h_max() - k.h_min()) * i as f64 / n as f64;
            let s = k.specific_entropy(h).unwrap();
            assert!(s >= prev);
            prev = s;
        }
    }

    #[test]
    fn decisions() {
        let k = k();
        let ice = WaterState::ice_at_melting(1.0).to_compound();
        let liq = WaterState::liquid_at_melting(&k, 1.0).to_compound();
        assert!(water_precedes(&k, &ice, &liq).unwrap().holds());
        assert!(!water_precedes(&k, &liq, &ice).unwrap().holds());
        assert!(water_precedes(&k, &liq, &liq).unwrap().holds());
        let two = WaterState::ice_at_melting(2.0).to_compound();
        assert!(matches!(
            water_precedes(&k, &ice, &two),
            Err(Error::Class(_))
        ));
    }

    #[test]
    fn mass_extensive() {
        let k = k();
        let a = water_entropy(
            &k,
            &WaterState {
                mass: 1.0,
                h: 500_000.0,
            },
        )
        .unwrap();
        let b = water_entropy(
            &k,
            &WaterState {
                mass: 3.0,
                h: 500_000.0,
            },
        )
        .unwrap();
        assert!((b - 3.0 * a).abs() < 1e-9 * b);
    }

    #[test]
    fn table_format() {
        let mut buf = Vec::new();
        write_water_table(&k(), 5, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("h_J_per_kg,T_K,phase,entropy_J_per_kgK"));
        assert_eq!(lines.count(), 5);
    }
}
