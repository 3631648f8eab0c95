use std::io::Write;

use adiabat::axioms::{run_axiom_suite, AxiomConfig, AxiomReport};
use adiabat::comparison::check_comparison;
use adiabat::derived::{
    path_delta_s, temperature, write_loop_csv, write_temperature_csv, PathSpec, TemperatureRow,
};
use adiabat::entropy::{affine_match, build_meter, EntropyMeter, EntropyTable};
use adiabat::existence::{
    entropy_feasible, relation_from_oracle, rubbing_sample_states, sampled_states,
    transitive_closure, verify_assignment, FiniteRelation,
};
use adiabat::models::gas::{gas_entropy, gas_grid};
use adiabat::models::rubbing::{grid_equivalence, rubbing_reachable_grid, GridBox};
use adiabat::models::water::{system_spec as water_system, water_entropy, write_water_table};
use adiabat::models::{GasSpec, Model, PhaseConstants, TwoBodyState, WaterState};
use adiabat::state::{SimpleState, SystemSpec};
use adiabat::Error;
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, Format, Opts};

const GAS_U: (f64, f64) = (50.0, 400.0);
const GAS_V: (f64, f64) = (0.5, 4.0);

pub enum Outcome {
    Success,
    Violation,
    Infeasible,
}

pub enum Failure {
    Usage(String),
    Model(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Model(e.into())
    }
}

type Run = Result<(Outcome, Vec<u8>), Failure>;

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(Error::from)?;
    buf.push(b'\n');
    Ok(buf)
}

fn only(opts: &Opts, allowed: &[Model], cmd: &str) -> Result<(), Failure> {
    if allowed.contains(&opts.model) {
        Ok(())
    } else {
        Err(Failure::Model(Error::Domain(format!(
            "`{cmd}` does not support model {}",
            opts.model
        ))))
    }
}

pub fn run(cmd: Command, opts: &Opts) -> Run {
    match cmd {
        Command::Axioms => axioms(opts),
        Command::Compare => compare(opts),
        Command::Construct => construct(opts),
        Command::Existence => existence(opts),
        Command::Counterexample => counterexample(opts),
        Command::WaterTable => water_table(opts),
        Command::Temperature => temperature_cmd(opts),
        Command::Loop => loop_cmd(opts),
    }
}

fn axioms(opts: &Opts) -> Run {
    let cfg = AxiomConfig {
        seed: opts.seed,
        samples: opts.samples_or(1000),
        parallel: opts.parallel,
        ..AxiomConfig::default()
    };
    let oracle = opts.model.oracle();
    let sampler = opts.model.sampler();
    let reports = run_axiom_suite(oracle.as_ref(), sampler.as_ref(), &cfg);
    let outcome = if reports.iter().all(|r| r.passed) {
        Outcome::Success
    } else {
        Outcome::Violation
    };
    let bytes = match opts.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&json!({
            "model": opts.model.as_str(),
            "seed": opts.seed,
            "samples": cfg.samples,
            "reports": reports,
        }))?,
        Format::Csv => axiom_csv(&reports)?,
    };
    Ok((outcome, bytes))
}

fn axiom_csv(reports: &[AxiomReport]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Model(e.into());
    w.write_record([
        "axiom",
        "instances_tested",
        "passed",
        "witnesses",
        "skipped",
    ])
    .map_err(err)?;
    for r in reports {
        w.write_record([
            r.axiom.clone(),
            r.instances_tested.to_string(),
            r.passed.to_string(),
            r.witnesses.len().to_string(),
            r.skipped.len().to_string(),
        ])
        .map_err(err)?;
    }
    w.into_inner()
        .map_err(|e| Failure::Model(e.into_error().into()))
}

fn compare(opts: &Opts) -> Run {
    let oracle = opts.model.oracle();
    let report = check_comparison(
        oracle.as_ref(),
        opts.model.class_sampler().as_ref(),
        opts.seed,
        opts.samples_or(10_000),
    )?;
    let outcome = if report.incomparable_witnesses.is_empty() {
        Outcome::Success
    } else {
        Outcome::Violation
    };
    match opts.format.unwrap_or(Format::Json) {
        Format::Json => Ok((outcome, json_bytes(&report)?)),
        Format::Csv => Err(Failure::Usage("compare writes JSON only".into())),
    }
}

type EntropyFn = Box<dyn Fn(&SimpleState) -> adiabat::Result<f64>>;

/// Meter, states to tabulate, coordinate names and the analytic entropy.
struct Construction {
    meter: EntropyMeter,
    states: Vec<(String, SimpleState)>,
    system: SystemSpec,
    analytic: EntropyFn,
}

fn water_points(k: &PhaseConstants, n: usize) -> adiabat::Result<Vec<(String, SimpleState)>> {
    // interior points only, so central differences stay in the domain
    let (lo, hi) = (k.h_min(), k.h_max());
    (0..n)
        .map(|i| {
            let h = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            Ok((format!("h{i}"), WaterState::new(k, 1.0, h)?.to_simple()))
        })
        .collect()
}

fn construction(opts: &Opts, default_grid: (usize, usize)) -> Result<Construction, Failure> {
    let (w, h) = opts.grid_or(default_grid);
    match opts.model {
        Model::IdealGas => {
            let spec = GasSpec::monatomic();
            let x0 = spec.state(1.0, 100.0, 1.0)?.into();
            let x1 = spec.state(1.0, 200.0, 1.0)?.into();
            Ok(Construction {
                meter: build_meter(opts.model.oracle(), x0, x1, opts.tol)?,
                states: gas_grid(&spec, w, h, GAS_U, GAS_V)?,
                system: GasSpec::system_spec(),
                analytic: Box::new(move |x| gas_entropy(&spec, x)),
            })
        }
        Model::Water => {
            let k = PhaseConstants::default();
            let x0 = WaterState::ice_at_melting(1.0).to_compound();
            let x1 = WaterState::vapor_at_boiling(&k, 1.0).to_compound();
            Ok(Construction {
                meter: build_meter(opts.model.oracle(), x0, x1, opts.tol)?,
                states: water_points(&k, w * h)?,
                system: water_system(),
                analytic: Box::new(move |x| water_entropy(&k, &WaterState::from_simple(&k, x)?)),
            })
        }
        Model::Rubbing => {
            // no entropy is constructed for a class that fails comparison
            let oracle = opts.model.oracle();
            let report = check_comparison(
                oracle.as_ref(),
                opts.model.class_sampler().as_ref(),
                opts.seed,
                opts.samples_or(1000),
            )?;
            let msg = match report.incomparable_witnesses.first() {
                Some((x, y)) => format!(
                    "comparison hypothesis fails for model rubbing: {} and {} are incomparable",
                    serde_json::to_string(x).map_err(Error::from)?,
                    serde_json::to_string(y).map_err(Error::from)?
                ),
                None => "model rubbing has no entropy meter".into(),
            };
            Err(Failure::Model(Error::Domain(msg)))
        }
    }
}

fn construct(opts: &Opts) -> Run {
    let c = construction(opts, (20, 20))?;
    let table = EntropyTable::build(&c.meter, c.states, opts.parallel)?;
    let bytes = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&c.system.coordinate_names, &mut buf)?;
            buf
        }
        Format::Json => {
            let fit = affine_match(&table, &c.analytic).ok();
            json_bytes(&json!({ "table": table, "fit": fit }))?
        }
    };
    Ok((Outcome::Success, bytes))
}

fn load_relation(opts: &Opts) -> Result<FiniteRelation, Failure> {
    if let Some(path) = &opts.relation {
        let text = std::fs::read_to_string(path)?;
        return Ok(FiniteRelation::from_json(&text)?);
    }
    let oracle = opts.model.oracle();
    let states = match opts.model {
        Model::Rubbing => rubbing_sample_states(),
        m => sampled_states(m.class_sampler().as_ref(), opts.seed, opts.samples_or(30)),
    };
    Ok(relation_from_oracle(oracle.as_ref(), &states)?)
}

fn existence(opts: &Opts) -> Run {
    let rel = load_relation(opts)?;
    let result = match transitive_closure(&rel) {
        Ok(closed) => {
            let r = entropy_feasible(&closed, opts.margin)?;
            if r.feasible && !verify_assignment(&closed, &r.assignment, opts.margin)? {
                return Err(Failure::Model(Error::Domain(
                    "solver assignment failed independent verification".into(),
                )));
            }
            serde_json::to_value(&r).map_err(Error::from)?
        }
        Err(Error::InconsistentRelation { from, to, chain }) => json!({
            "feasible": false,
            "assignment": {},
            "certificate": { "kind": "inconsistent_closure", "edge": [from, to], "chain": chain },
        }),
        Err(e) => return Err(e.into()),
    };
    let feasible = result["feasible"].as_bool() == Some(true);
    let outcome = if feasible {
        Outcome::Success
    } else {
        Outcome::Infeasible
    };
    let bytes = match opts.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&result)?,
        Format::Csv => {
            let mut buf = b"atom,entropy\n".to_vec();
            if let Some(values) = result["assignment"].as_object() {
                for (atom, v) in values {
                    writeln!(buf, "{atom},{v}")?;
                }
            }
            buf
        }
    };
    Ok((outcome, bytes))
}

fn counterexample(opts: &Opts) -> Run {
    let oracle = Model::Rubbing.oracle();
    let x = TwoBodyState::new(1.0, 4.0);
    let y = TwoBodyState::new(0.5, 5.5);
    if opts.format == Some(Format::Csv) {
        // reachable set of X on the grid
        let (w, h) = opts.grid_or((50, 50));
        let bounds = GridBox {
            lo: 0.0,
            hi: (w.max(h) - 1) as f64 * 0.5,
        };
        let mut buf = Vec::new();
        rubbing_reachable_grid(&x, 0.5, bounds)?.write_csv(&mut buf)?;
        return Ok((Outcome::Success, buf));
    }

    let xy = oracle.decide(&x.to_compound(), &y.to_compound())?.holds();
    let yx = oracle.decide(&y.to_compound(), &x.to_compound())?.holds();

    let n = opts.samples_or(500);
    let mut incomparable = 0;
    for i in 0..n as u64 {
        let mut rng = adiabat::sampler::instance_rng(opts.seed, 0xBAD, i);
        let (a, b) = adiabat::models::rubbing::sample_incomparable_pair(&mut rng);
        let ab = oracle.decide(&a.to_compound(), &b.to_compound())?.holds();
        let ba = oracle.decide(&b.to_compound(), &a.to_compound())?.holds();
        if !ab && !ba {
            incomparable += 1;
        }
    }

    let (w, h) = opts.grid_or((50, 50));
    let grid = grid_equivalence(w, h, 0.5, opts.parallel)?;

    let rel = transitive_closure(&relation_from_oracle(
        oracle.as_ref(),
        &rubbing_sample_states(),
    )?)?;
    let verdict = entropy_feasible(&rel, opts.margin)?;

    let reproduced =
        !xy && !yx && incomparable == n && grid.mismatches.is_empty() && !verdict.feasible;
    let report = json!({
        "x": x,
        "y": y,
        "x_precedes_y": xy,
        "y_precedes_x": yx,
        "pattern_pairs": n,
        "pattern_pairs_incomparable": incomparable,
        "grid": {
            "width": grid.width,
            "height": grid.height,
            "step": grid.step,
            "pairs_checked": grid.pairs_checked,
            "mismatches": grid.mismatches.len(),
        },
        "existence": verdict,
        "reproduced": reproduced,
    });
    let outcome = if reproduced {
        Outcome::Success
    } else {
        Outcome::Violation
    };
    Ok((outcome, json_bytes(&report)?))
}

fn water_table(opts: &Opts) -> Run {
    if opts.format == Some(Format::Json) {
        return Err(Failure::Usage("water-table writes CSV only".into()));
    }
    let mut buf = Vec::new();
    write_water_table(&PhaseConstants::default(), opts.samples_or(401), &mut buf)?;
    Ok((Outcome::Success, buf))
}

fn temperature_cmd(opts: &Opts) -> Run {
    only(opts, &[Model::IdealGas, Model::Water], "temperature")?;
    let c = construction(opts, (5, 5))?;
    let table = EntropyTable::build(&c.meter, c.states.clone(), opts.parallel)?;
    let fit = affine_match(&table, &c.analytic)?;
    let entropy = |x: &SimpleState| c.meter.entropy(&x.clone().into());
    let span = match opts.model {
        Model::Water => {
            let k = PhaseConstants::default();
            Some(k.h_max() - k.h_min())
        }
        _ => None,
    };
    let rows = c
        .states
        .iter()
        .map(|(id, x)| {
            let du = 1e-4 * span.map_or(x.energy(), |s| s * x.amount);
            Ok(TemperatureRow {
                state_id: id.clone(),
                state: x.clone(),
                temperature_k: temperature(entropy, x, du, fit.slope)?,
            })
        })
        .collect::<adiabat::Result<Vec<_>>>()?;
    let bytes = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_temperature_csv(&rows, &c.system.coordinate_names, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&json!({ "fit": fit, "rows": rows }))?,
    };
    Ok((Outcome::Success, bytes))
}

fn loop_cmd(opts: &Opts) -> Run {
    only(opts, &[Model::IdealGas], "loop")?;
    let path = PathSpec {
        vertices: opts.path.clone().map(|v| v.0).unwrap_or_else(|| {
            vec![
                (100.0, 1.0),
                (200.0, 1.0),
                (200.0, 2.0),
                (100.0, 2.0),
                (100.0, 1.0),
            ]
        }),
        steps_per_segment: opts.samples_or(10_000),
    };
    let report = path_delta_s(&GasSpec::monatomic(), 1.0, &path)?;
    let bytes = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_loop_csv(&path, &report, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&json!({ "path": path, "report": report }))?,
    };
    Ok((Outcome::Success, bytes))
}
