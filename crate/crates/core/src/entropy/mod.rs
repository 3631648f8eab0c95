//! Entropy reconstructed from the accessibility relation alone.
//!
//! `S(X)` is the largest fraction `λ` of reference substance in `X1` that,
//! together with the complementary fraction in `X0`, can be carried
//! adiabatically into `X`. It is located by bisection on the monotone
//! predicate `λ ↦ ((1-λ)X0, λX1) ≺ X`.

mod checks;
mod meter;
mod table;

pub use checks::{additivity_check, interpolation_check, AdditivityReport, InterpolationCheck};
pub use meter::{
    build_meter, EntropyMeter, LambdaSearch, DEFAULT_BRACKET_LIMIT, DEFAULT_LAMBDA_TOL,
};
pub use table::{affine_fit, affine_match, AffineFitReport, EntropyTable, MeterMetadata, TableRow};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::error::{Error, Result};
    use crate::models::gas::gas_entropy;
    use crate::models::synthetic::MutuallyAccessible;
    use crate::models::{GasOracle, GasSampler, GasSpec, PhaseConstants, WaterOracle, WaterState};
    use crate::oracle::{AccessibilityOracle, Decision};
    use crate::state::{CompoundState, SimpleState};

    fn gas() -> GasSpec {
        GasSpec::monatomic()
    }

    fn g(u: f64, v: f64) -> CompoundState {
        gas().state(1.0, u, v).unwrap().into()
    }

    fn gas_meter() -> EntropyMeter {
        build_meter(
            Arc::new(GasOracle::default()),
            g(100.0, 1.0),
            g(200.0, 1.0),
            DEFAULT_LAMBDA_TOL,
        )
        .unwrap()
    }

    // closed form: (S(X) - S(X0)) / (Cv ln 2) for one mole
    fn oracle_units(u: f64, v: f64) -> f64 {
        let s = gas();
        (s.cv * (u / 100.0).ln() + s.r * v.ln()) / (s.cv * 2f64.ln())
    }

    #[test]
    fn reference_pair_validation() {
        let o: Arc<dyn AccessibilityOracle> = Arc::new(GasOracle::default());
        assert!(build_meter(o.clone(), g(100.0, 1.0), g(200.0, 1.0), 1e-9).is_ok());
        assert!(matches!(
            build_meter(o.clone(), g(100.0, 1.0), g(100.0, 1.0), 1e-9),
            Err(Error::DegenerateReferences)
        ));
        assert!(matches!(
            build_meter(o.clone(), g(200.0, 1.0), g(100.0, 1.0), 1e-9),
            Err(Error::ReversedReferences)
        ));
        let two: CompoundState = gas().state(2.0, 100.0, 1.0).unwrap().into();
        assert!(matches!(
            build_meter(o.clone(), g(100.0, 1.0), two, 1e-9),
            Err(Error::Class(_))
        ));
        assert!(build_meter(o, g(100.0, 1.0), g(200.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn incomparable_references_reported() {
        use crate::models::{RubbingOracle, TwoBodyState};
        let r = build_meter(
            Arc::new(RubbingOracle::default()),
            TwoBodyState::new(1.0, 4.0).to_compound(),
            TwoBodyState::new(0.5, 5.2).to_compound(),
            1e-9,
        );
        assert!(matches!(r, Err(Error::IncomparableReferences)));
    }

    #[test]
    fn reference_normalization() {
        let m = gas_meter();
        assert!(m.entropy(&g(100.0, 1.0)).unwrap().abs() <= 1e-9);
        assert!((m.entropy(&g(200.0, 1.0)).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn geometric_mean_energy_is_half_a_unit() {
        let m = gas_meter();
        let l = m.lambda_max(&g(100.0 * 2f64.sqrt(), 1.0)).unwrap();
        assert!((l - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn role_interchange_branches() {
        let m = gas_meter();
        assert!((m.entropy(&g(400.0, 1.0)).unwrap() - 2.0).abs() <= 1e-9);
        assert!((m.entropy(&g(50.0, 1.0)).unwrap() + 1.0).abs() <= 1e-9);
        for (u, v) in [(55.0, 0.6), (390.0, 3.7), (120.0, 2.0), (75.0, 0.5)] {
            let got = m.entropy(&g(u, v)).unwrap();
            assert!((got - oracle_units(u, v)).abs() <= 1e-9, "({u},{v}) {got}");
        }
    }

    #[test]
    fn bisection_steps_are_bounded() {
        let m = gas_meter();
        for (u, v) in [(141.0, 1.0), (400.0, 4.0), (50.0, 0.5)] {
            let s = m.search(&g(u, v)).unwrap();
            let bound = (s.initial_width / m.lambda_tol()).log2().ceil() as u32;
            assert!(s.bisection_steps <= bound);
            assert!(s.upper - s.lower <= m.lambda_tol());
            assert_eq!(s, m.search(&g(u, v)).unwrap());
        }
    }

    #[test]
    fn water_fraction_of_vapor() {
        let k = PhaseConstants::default();
        let m = build_meter(
            Arc::new(WaterOracle::default()),
            WaterState::ice_at_melting(1.0).to_compound(),
            WaterState::vapor_at_boiling(&k, 1.0).to_compound(),
            DEFAULT_LAMBDA_TOL,
        )
        .unwrap();
        let l = m
            .lambda_max(&WaterState::liquid_at_melting(&k, 1.0).to_compound())
            .unwrap();
        // 1222.7714 / 8583.3072
        assert!((l - 0.142_459_233_568_497_77).abs() <= 1e-9);
    }

    #[test]
    fn unbounded_when_no_bracket() {
        // a strict pair cannot be built when everything is mutually accessible
        let o: Arc<dyn AccessibilityOracle> = Arc::new(MutuallyAccessible);
        assert!(matches!(
            build_meter(o, g(100.0, 1.0), g(200.0, 1.0), 1e-9),
            Err(Error::DegenerateReferences)
        ));

        // entropy unbounded above: refs strict, but everything above X1 precedes X
        struct Ceiling;
        impl AccessibilityOracle for Ceiling {
            fn name(&self) -> &str {
                "ceiling"
            }
            fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision> {
                // only the pure X1-vs-X0 direction is forbidden
                let is = |c: &CompoundState, u: f64| {
                    c.len() == 1 && (c.parts()[0].coords[0] - u).abs() < 1e-9
                };
                Ok((!(is(x, 200.0) && is(y, 100.0))).into())
            }
            fn class_of(&self, _: &CompoundState) -> Result<String> {
                Ok("c".into())
            }
        }
        let m = build_meter(Arc::new(Ceiling), g(100.0, 1.0), g(200.0, 1.0), 1e-9)
            .unwrap()
            .with_bracket_limit(64.0);
        assert!(matches!(
            m.entropy(&g(150.0, 1.0)),
            Err(Error::UnboundedEntropy { .. })
        ));
    }

    #[test]
    fn non_monotone_oracle_is_diagnosed() {
        // X1 ≺ X but X0 ⊀ X although X0 ≺ X1: intransitive, predicate true at 1, false at 0
        struct Intransitive;
        impl AccessibilityOracle for Intransitive {
            fn name(&self) -> &str {
                "intransitive"
            }
            fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision> {
                let u = |c: &CompoundState| (c.len() == 1).then(|| c.parts()[0].coords[0]);
                Ok(match (u(x), u(y)) {
                    (Some(a), Some(b)) if a == b => Decision::Precedes,
                    (Some(a), Some(b)) if a == 100.0 && b == 200.0 => Decision::Precedes,
                    (Some(a), Some(b)) if a == 200.0 && b == 150.0 => Decision::Precedes,
                    _ => Decision::NotPrecedes,
                })
            }
            fn class_of(&self, _: &CompoundState) -> Result<String> {
                Ok("c".into())
            }
        }
        let m = build_meter(Arc::new(Intransitive), g(100.0, 1.0), g(200.0, 1.0), 1e-9).unwrap();
        match m.entropy(&g(150.0, 1.0)) {
            Err(Error::OracleViolation {
                oracle,
                holds_at,
                fails_at,
            }) => {
                assert_eq!(oracle, "intransitive");
                assert!(holds_at > fails_at);
            }
            other => panic!("expected oracle violation, got {other:?}"),
        }
    }

    #[test]
    fn additivity_and_extensivity() {
        let m = gas_meter();
        let sampler = GasSampler::new(gas()).with_amount(1.0);
        let r = additivity_check(&m, &sampler, 0, 10, &[0.25, 0.5, 2.0]).unwrap();
        assert!(r.passed, "{r:?}");

        let x = g(150.0, 1.5);
        let xx = crate::state::compose(&x, &x);
        let two_x = crate::state::scale(&x, 2.0).unwrap();
        let s = m.entropy(&x).unwrap();
        assert!((m.entropy(&xx).unwrap() - 2.0 * s).abs() <= 3e-9);
        assert!((m.entropy(&two_x).unwrap() - 2.0 * s).abs() <= 3e-9);
    }

    #[test]
    fn interpolation_identity() {
        let m = gas_meter();
        let c = interpolation_check(&m, &g(141.0, 1.0)).unwrap();
        assert!(c.forward_at_lower);
        assert!(c.backward_at_upper);
        assert!(c.bracket_width <= 1e-9);
        assert!(c.residual <= 1e-9);
    }

    #[test]
    fn affine_match_against_analytic_gas() {
        let m = gas_meter();
        let s = gas();
        let states: Vec<(String, SimpleState)> =
            [(60.0, 0.7), (100.0, 1.0), (250.0, 2.5), (390.0, 3.9)]
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| (format!("s{i}"), s.state(1.0, u, v).unwrap()))
                .collect();
        let t = EntropyTable::build(&m, states, false).unwrap();
        let fit = affine_match(&t, |x| gas_entropy(&s, x)).unwrap();
        let want = 1.0 / (s.cv * 2f64.ln());
        assert!((fit.slope - want).abs() <= 1e-6 * want);
        assert!(fit.max_abs_residual <= 1e-6);
    }

    #[test]
    fn affine_match_on_itself_is_identity() {
        let m = gas_meter();
        let states = (0..5)
            .map(|i| {
                (
                    i.to_string(),
                    gas().state(1.0, 80.0 + 40.0 * i as f64, 1.0).unwrap(),
                )
            })
            .collect();
        let t = EntropyTable::build(&m, states, false).unwrap();
        let vals = t.values();
        let fit = affine_fit(&vals, &vals).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit.offset.abs() < 1e-12);
        assert!(fit.max_abs_residual < 1e-12);
    }

    #[test]
    fn degenerate_fits_rejected() {
        assert!(matches!(
            affine_fit(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(matches!(
            affine_fit(&[1.0, 2.0], &[0.0, 1.0]),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn table_csv_layout() {
        let m = gas_meter();
        let t = EntropyTable::build(
            &m,
            vec![("a".into(), gas().state(1.0, 100.0, 1.0).unwrap())],
            false,
        )
        .unwrap();
        let mut buf = Vec::new();
        t.write_csv(&GasSpec::system_spec().coordinate_names, &mut buf)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "state_id,amount,U_J,V_m3,entropy_units");
        assert!(body[1].starts_with("a,1,100,1,"));
        assert!(text.starts_with("# oracle: ideal-gas\n"));
    }
}
