//! One function per subcommand. Each returns the files it would emit; every
//! number comes straight from a library call.

use ionwire::coupling;
use ionwire::exchange_sim::{self, CoupledOscillatorSystem};
use ionwire::feasibility::{self, GridSpec};
use ionwire::heating::{self, HeatingMeasurement};
use ionwire::noise;
use ionwire::Config;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{json_artifact, num, Artifact, Format, KeyValues, Table};

/// Counting windows for the seeded shot-noise estimate.
const MONTE_CARLO_WINDOWS: usize = 100_000;

pub type Outcome = Result<Vec<Artifact>, ionwire::Error>;

#[derive(Serialize)]
struct AnalyzePayload {
    report: feasibility::AnalysisReport,
    seed: Option<u64>,
    i_shot_monte_carlo: Option<f64>,
}

pub fn analyze(cfg: &Config, format: Format, seed: Option<u64>) -> Outcome {
    let report = feasibility::analyze(cfg)?;
    let mc = match seed {
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            Some(noise::shot_noise_monte_carlo(
                report.budget.i_sig,
                cfg.trap.motional_bandwidth(),
                MONTE_CARLO_WINDOWS,
                &mut rng,
            )?)
        }
        None => None,
    };
    if format == Format::Json {
        let payload = AnalyzePayload {
            report,
            seed,
            i_shot_monte_carlo: mc,
        };
        return Ok(vec![json_artifact("analysis.json", "analyze", &payload)]);
    }
    let b = &report.budget;
    let mut kv = KeyValues::new();
    kv.num("disk_radius_m", report.disk_radius)
        .num("wire_capacitance_F", report.wire_capacitance)
        .num("total_capacitance_F", report.total_capacitance)
        .num("zeta", report.zeta)
        .num("eta", report.eta)
        .num("gamma_N_per_m", report.gamma)
        .num("exchange_time_s", report.exchange_time)
        .num("rwa_parameter", report.rwa_parameter)
        .num("rwa_parameter_f2", report.rwa_parameter_f2)
        .flag("rwa_valid", report.rwa_valid)
        .num("transferred_charge_C", report.transferred_charge)
        .num("v_sig_V", b.v_sig)
        .num("v_sig_peak_transfer_V", report.v_sig_peak_transfer)
        .num("v_jn_V", b.v_jn)
        .num("snr_voltage", b.snr_voltage.value)
        .flag("snr_infinite", b.snr_voltage.noiseless)
        .num("i_sig_A", b.i_sig)
        .num("i_shot_poisson_A", b.i_shot_poisson)
        .num("i_shot_ballistic_A", b.i_shot_ballistic)
        .num("wire_resistance_ohm", b.resistance)
        .num("heating_rate_per_s", report.heating_rate)
        .num("t_deco_s", report.t_deco)
        .num("ratio_deco_ex", report.ratio_deco_ex)
        .flag("ratio_feasible", report.ratio_feasible)
        .flag("snr_feasible", report.snr_feasible);
    if let (Some(s), Some(i)) = (seed, mc) {
        kv.text("seed", &s.to_string()).num("i_shot_monte_carlo_A", i);
    }
    kv.text("flags", &report.flags.join(";"));
    Ok(vec![kv.finish("analysis.csv")])
}

pub fn optimize(cfg: &Config, format: Format, samples: usize) -> Outcome {
    let opt = feasibility::optimize_radius(cfg, samples)?;
    if format == Format::Json {
        return Ok(vec![json_artifact("optimize.json", "optimize", &opt)]);
    }
    let mut kv = KeyValues::new();
    kv.num("d_m", opt.d)
        .num("r_opt_m", opt.r_opt)
        .num("gamma_max_N_per_m", opt.gamma_max)
        .num("exchange_time_s", opt.exchange_time);
    let mut curve = Table::new(&["r_m", "gamma_N_per_m"]);
    for (r, g) in &opt.curve {
        curve.row([num(*r), num(*g)]);
    }
    Ok(vec![kv.finish("optimize_summary.csv"), curve.finish("optimize_curve.csv")])
}

pub fn feasibility(cfg: &Config, format: Format, grid: &GridSpec) -> Outcome {
    let map = feasibility::feasibility_map(cfg, grid)?;
    if format == Format::Json {
        return Ok(vec![json_artifact("feasibility.json", "feasibility", &map)]);
    }
    let mut points = Table::new(&["d_m", "f_Hz", "disk_radius_m", "ratio_deco_ex", "snr", "feasible", "flags"]);
    for p in &map.points {
        points.row([
            num(p.d),
            num(p.f),
            num(p.disk_radius),
            num(p.ratio_deco_ex),
            num(p.snr),
            p.feasible.to_string(),
            p.flags.join(";"),
        ]);
    }
    let contour = |pts: &[feasibility::ContourPoint], name: &str| {
        let mut t = Table::new(&["d_m", "f_Hz"]);
        for c in pts {
            t.row([num(c.d), num(c.f)]);
        }
        t.finish(name)
    };
    Ok(vec![
        points.finish("feasibility_map.csv"),
        contour(&map.contour_ratio, "contour_ratio.csv"),
        contour(&map.contour_snr, "contour_snr.csv"),
    ])
}

#[derive(Serialize)]
struct ComparePayload {
    rows: Vec<coupling::ComparisonRow>,
}

pub fn compare(cfg: &Config, format: Format) -> Outcome {
    let rows = coupling::comparison_table(&cfg.ion, &cfg.trap, &cfg.coupler)?;
    if format == Format::Json {
        return Ok(vec![json_artifact("compare.json", "compare", &ComparePayload { rows })]);
    }
    let mut t = Table::new(&["system", "gamma_N_per_m", "exchange_time_s", "reconstructed", "note"]);
    for r in &rows {
        t.row([
            r.system.to_string(),
            num(r.gamma),
            num(r.exchange_time),
            r.reconstructed.to_string(),
            r.note.to_string(),
        ]);
    }
    Ok(vec![t.finish("compare.csv")])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SimMode {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Copy)]
pub struct SimSpec {
    pub mode: SimMode,
    /// Coupling override; the configured pickup-disk coupling otherwise.
    pub gamma: Option<f64>,
    /// Initial quanta in ion 1 (quantum mode).
    pub quanta: u32,
    /// Run length in exchange times.
    pub exchange_times: f64,
    /// Integration steps per exchange time (quantum) or per period (classical).
    pub steps: usize,
    /// Secular frequency of ion 2 relative to ion 1.
    pub detuning_ratio: f64,
}

#[derive(Serialize)]
struct ClassicalSummary {
    gamma: f64,
    exchange_time: f64,
    swap_time: Option<f64>,
    swap_fidelity: f64,
    rwa_parameter: f64,
    time_scale: f64,
}

#[derive(Serialize)]
struct ClassicalPayload<'a> {
    summary: ClassicalSummary,
    trace: &'a exchange_sim::ExchangeTrace,
}

#[derive(Serialize)]
struct QuantumPayload<'a> {
    gamma: f64,
    exchange_time: f64,
    quanta: u32,
    theta_expected: f64,
    run: &'a exchange_sim::QuantumRun,
}

pub fn simulate(cfg: &Config, format: Format, spec: &SimSpec) -> Outcome {
    let f = cfg.trap.secular_frequency();
    let gamma = match spec.gamma {
        Some(g) => g,
        None => feasibility::analyze(cfg)?.gamma,
    };
    let resonant = CoupledOscillatorSystem::resonant(&cfg.ion, f, gamma)?;
    let sys = resonant.with_detuning(resonant.omega1() * spec.detuning_ratio)?;
    let t_ex = sys.exchange_time();
    let duration = spec.exchange_times * t_ex;
    match spec.mode {
        SimMode::Classical => {
            let trace = exchange_sim::simulate_classical(&sys, duration, 1.0 / (f * spec.steps as f64), 1e-8)?;
            // A detuned run may never swap; that is a result, not a failure.
            let swap_time = exchange_sim::measure_swap_time(&trace).ok();
            let summary = ClassicalSummary {
                gamma,
                exchange_time: t_ex,
                swap_time,
                swap_fidelity: trace.swap_fidelity,
                rwa_parameter: trace.rwa_parameter,
                time_scale: trace.time_scale,
            };
            if format == Format::Json {
                let payload = ClassicalPayload { summary, trace: &trace };
                return Ok(vec![json_artifact("simulate.json", "simulate", &payload)]);
            }
            let mut kv = KeyValues::new();
            kv.text("mode", "classical")
                .num("gamma_N_per_m", gamma)
                .num("exchange_time_s", t_ex);
            match swap_time {
                Some(t) => kv.num("swap_time_s", t),
                None => kv.text("swap_time_s", "none"),
            };
            kv.num("swap_fidelity", trace.swap_fidelity)
                .num("rwa_parameter", trace.rwa_parameter)
                .num("time_scale", trace.time_scale);
            Ok(vec![kv.finish("simulate_summary.csv"), trace_artifact(&trace)])
        }
        SimMode::Quantum => {
            let run = exchange_sim::simulate_quantum_rwa(&sys, spec.quanta, duration, t_ex / spec.steps as f64)?;
            let theta_expected = exchange_sim::coupling_phase(&sys, spec.quanta);
            if format == Format::Json {
                let payload = QuantumPayload {
                    gamma,
                    exchange_time: t_ex,
                    quanta: spec.quanta,
                    theta_expected,
                    run: &run,
                };
                return Ok(vec![json_artifact("simulate.json", "simulate", &payload)]);
            }
            let tr = &run.transfer;
            let mut kv = KeyValues::new();
            kv.text("mode", "quantum")
                .num("gamma_N_per_m", gamma)
                .num("exchange_time_s", t_ex)
                .text("quanta", &spec.quanta.to_string())
                .num("theta_rad", tr.theta)
                .num("theta_expected_rad", theta_expected)
                .num("residual_ion1", tr.residual_ion1)
                .num("fidelity", tr.fidelity)
                .num("number_drift", tr.number_drift)
                .flag("rwa_valid", tr.rwa_valid)
                .text("phase_convention", run.trace.phase_convention);
            Ok(vec![kv.finish("simulate_summary.csv"), trace_artifact(&run.trace)])
        }
    }
}

fn trace_artifact(trace: &exchange_sim::ExchangeTrace) -> Artifact {
    Artifact {
        name: "trace.csv".into(),
        body: trace.to_csv(),
    }
}

#[derive(Serialize)]
struct HeatingRow<'a> {
    #[serde(flatten)]
    measurement: &'a HeatingMeasurement,
    a_tilde: f64,
}

#[derive(Serialize)]
struct HeatingPayload<'a> {
    rows: Vec<HeatingRow<'a>>,
    summary: Vec<heating::MaterialSummary>,
}

pub fn extract_heating(cfg: &Config, format: Format, data: &[HeatingMeasurement]) -> Outcome {
    let rows: Vec<HeatingRow> = data
        .iter()
        .map(|m| HeatingRow {
            measurement: m,
            a_tilde: heating::extract_a_tilde(m, &cfg.heating),
        })
        .collect();
    let summary = heating::summarize_by_material(data, &cfg.heating);
    if format == Format::Json {
        let payload = HeatingPayload { rows, summary };
        return Ok(vec![json_artifact("heating.json", "extract-heating", &payload)]);
    }
    let mut t = Table::new(&["f_Hz", "d_m", "T_K", "rate_quanta_per_s", "material", "a_tilde"]);
    for r in &rows {
        let m = r.measurement;
        t.row([
            num(m.frequency),
            num(m.distance),
            num(m.temperature),
            num(m.rate),
            m.trap_material.clone(),
            num(r.a_tilde),
        ]);
    }
    let mut s = Table::new(&["material", "count", "mean_a_tilde", "std_dev_a_tilde"]);
    for m in &summary {
        s.row([m.material.clone(), m.count.to_string(), num(m.mean), num(m.std_dev)]);
    }
    Ok(vec![t.finish("heating_rows.csv"), s.finish("heating_summary.csv")])
}
