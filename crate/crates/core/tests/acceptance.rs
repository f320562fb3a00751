//! Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero
//! when a failure is not on the known-deviation list, or when a listed
//! deviation starts passing.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use ionwire::capnet::{self, CapacitanceTriple};
use ionwire::coupling;
use ionwire::electrostatics::{self, ChargeAbovePlane};
use ionwire::exchange_sim::{self, CoupledOscillatorSystem};
use ionwire::feasibility::{self, GridSpec, SnrEnvironment};
use ionwire::heating;
use ionwire::model::{
    load_config, CouplerGeometry, HeatingModel, IonSpecies, TrapEnvironment, ELEMENTARY_CHARGE as E,
    REFERENCE_CONFIG,
};
use ionwire::noise::{self, Amplitude};
use ionwire::numerics::rel_diff;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sub-checks expected to fail, keyed by criterion and label prefix.
const KNOWN_DEVIATIONS: &[(u8, &str)] = &[
    (2, "I_av"),
    (2, "I_max"),
    (10, "5 MHz d=100um"),
    (10, "worst exponents d=50um"),
    (10, "worst exponents d=100um"),
    (11, "l_Coul"),
    (11, "t_power"),
];

struct Check {
    label: String,
    detail: String,
    ok: bool,
}

struct Criterion {
    id: u8,
    title: &'static str,
    checks: Vec<Check>,
}

impl Criterion {
    fn new(id: u8, title: &'static str) -> Self {
        Self {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn near(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        let err = rel_diff(value, target);
        self.checks.push(Check {
            label: label.into(),
            detail: format!("{value:.4e} vs {target:.4e} (rel {err:.2e}, tol {tol:.0e})"),
            ok: err <= tol,
        });
    }

    fn holds(&mut self, label: &str, ok: bool, detail: String) {
        self.checks.push(Check {
            label: label.into(),
            detail,
            ok,
        });
    }

    fn known(&self, c: &Check) -> bool {
        KNOWN_DEVIATIONS
            .iter()
            .any(|(id, prefix)| *id == self.id && c.label.starts_with(prefix))
    }
}

fn be() -> IonSpecies {
    IonSpecies::beryllium9()
}

fn reference_geometry(d: f64, wire_length: f64) -> CouplerGeometry {
    CouplerGeometry::new(d * FRAC_1_SQRT_2, d * FRAC_1_SQRT_2, 1e-6, wire_length, 10e-6, 6e7, None).unwrap()
}

fn c1() -> Criterion {
    let mut c = Criterion::new(1, "Q_transf reproduction");
    let d = 50e-6;
    let b = electrostatics::zero_point_amplitude(&be(), 5e6);
    let q = electrostatics::induced_charge_linear(ChargeAbovePlane::new(E, d).unwrap(), SQRT_2 * d, b);
    c.near("Q_transf", q, 2.6e-23, 0.04);
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::new(2, "induced current");
    let d = 50e-6;
    let b = electrostatics::zero_point_amplitude(&be(), 5e6);
    let q = electrostatics::induced_charge_linear(ChargeAbovePlane::new(E, d).unwrap(), SQRT_2 * d, b);
    let i = electrostatics::average_induced_current(q, 5e6);
    c.near("I_av", i.average, 1.3e-16, 0.05);
    c.near("I_max", i.peak, 2.0e-16, 0.05);
    c
}

fn c3() -> Criterion {
    let mut c = Criterion::new(3, "drain resistance bounds");
    let r = 50e-6 * FRAC_1_SQRT_2;
    let disk = capnet::max_drain_resistance(capnet::disk_self_capacitance(r), 5e6, 10.0).unwrap();
    let s = capnet::equivalent_sphere_radius(r, 1e-6);
    let sphere = capnet::max_drain_resistance(capnet::sphere_self_capacitance(s), 5e6, 10.0).unwrap();
    c.near("R_disk", disk, 17e6, 0.05);
    c.near("R_sphere", sphere, 40e6, 0.05);
    c
}

fn symmetric_gamma(d: f64, wire_length: f64) -> f64 {
    let g = reference_geometry(d, wire_length);
    let caps = g.capacitances();
    coupling::gamma_pickup_disk(E, d, d, g.disk1_radius(), g.disk2_radius(), &caps)
}

fn c4() -> Criterion {
    let mut c = Criterion::new(4, "optimal-regime coupling table");
    for (d, l, target) in [
        (50e-6, 0.01, 8.0e-18),
        (50e-6, 0.1, 1.1e-18),
        (200e-6, 0.01, 4.2e-19),
        (200e-6, 0.1, 6.8e-20),
    ] {
        c.near(&format!("gamma d={:.0}um l={}cm", d * 1e6, l * 100.0), symmetric_gamma(d, l), target, 0.05);
    }
    c
}

fn c5() -> Criterion {
    let mut c = Criterion::new(5, "radius optimisation");
    let cb = capnet::wire_capacitance(0.01, 10e-6).unwrap();
    for (d, r_target, r_tol, g_target) in [(50e-6, 48e-6, 1e-6, 9e-18), (200e-6, 180e-6, 5e-6, 5e-19)] {
        let r = coupling::optimal_disk_radius(d, cb);
        c.holds(
            &format!("r_opt d={:.0}um", d * 1e6),
            (r - r_target).abs() <= r_tol,
            format!("{:.2} um vs {:.0} +- {:.0} um", r * 1e6, r_target * 1e6, r_tol * 1e6),
        );
        c.near(&format!("gamma_max d={:.0}um", d * 1e6), coupling::gamma_symmetric(E, d, r, cb), g_target, 0.10);
    }
    c
}

fn c6() -> Criterion {
    let mut c = Criterion::new(6, "exchange times and simulated swap");
    let g50 = symmetric_gamma(50e-6, 0.01);
    let g200 = symmetric_gamma(200e-6, 0.01);
    c.near("t_ex d=50um", coupling::exchange_time(g50, &be(), 5e6).unwrap(), 0.180, 0.05);
    c.near("t_ex d=200um", coupling::exchange_time(g200, &be(), 5e6).unwrap(), 3.5, 0.05);
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, g50).unwrap();
    let t_ex = sys.exchange_time();
    let start = Instant::now();
    let trace = exchange_sim::simulate_classical(&sys, 1.3 * t_ex, 1.0 / (5e6 * 1000.0), 1e-8).unwrap();
    let swap = exchange_sim::measure_swap_time(&trace).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    c.near("simulated swap", swap, t_ex, 0.01);
    c.holds("simulation time", elapsed < 10.0, format!("{elapsed:.2} s (limit 10 s)"));
    c
}

fn c7() -> Criterion {
    let mut c = Criterion::new(7, "comparison table (acceptance rows)");
    let ion = be();
    let targets = [
        ("pickup-disk", [8.0e-18, 4.2e-19], 0.05),
        ("mass-spring-parallel-plate", [3.0e-17, 1.6e-18], 0.05),
        ("transmission-line", [1.5e-17, 8.2e-19], 0.10),
    ];
    for (i, d) in [50e-6, 200e-6].into_iter().enumerate() {
        let trap = TrapEnvironment::reference().at(5e6, d).unwrap();
        let rows = coupling::comparison_table(&ion, &trap, &reference_geometry(d, 0.01)).unwrap();
        for (system, values, tol) in targets {
            let row = rows.iter().find(|r| r.system == system).unwrap();
            c.near(&format!("{system} d={:.0}um", d * 1e6), row.gamma, values[i], tol);
        }
    }
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::new(8, "noise budget");
    c.near("V_JN 293K", noise::johnson_voltage(293.0, 0.53, 500.0), 2.1e-9, 0.03);
    c.near("V_JN 80K", noise::johnson_voltage(80.0, 0.068, 500.0), 3.9e-10, 0.03);
    c.near("V_JN 10K", noise::johnson_voltage(10.0, 1e-5, 500.0), 1.7e-12, 0.03);
    let cfg = load_config(REFERENCE_CONFIG).unwrap();
    let d = cfg.trap.ion_distance();
    let geom = cfg.coupler.with_disk_radius(SQRT_2 * d).unwrap();
    let budget = noise::noise_budget(&cfg.ion, &cfg.trap, &geom, Amplitude::ZeroPoint);
    c.near("V_sig", budget.v_sig, 5.8e-10, 0.03);
    c.near("i_sig", budget.i_sig, 1.4e-17, 0.03);
    c.near("i_shot", budget.i_shot_poisson, 4.7e-17, 0.03);
    c
}

fn c9() -> Criterion {
    let mut c = Criterion::new(9, "heating model");
    let model = HeatingModel::niobium();
    c.near("A", model.a_coefficient(), 1.8e-22, 0.03);
    c.near("t_deco", heating::decoherence_time(&model, &be(), 5e6, 50e-6, 10.0), 0.32, 0.05);
    let summary = heating::summarize_by_material(&heating::bundled_measurements(), &model);
    let nb = summary.iter().find(|s| s.material == "Nb").unwrap();
    c.holds(
        "Nb mean A_tilde",
        (nb.mean - 0.012).abs() <= 0.003,
        format!("{:.4} (n = {}) vs 0.012 +- 0.003", nb.mean, nb.count),
    );
    c
}

fn ratio_at(model: &HeatingModel, f: f64, d: f64, wire_radius: f64) -> f64 {
    let cb = capnet::wire_capacitance(0.01, wire_radius).unwrap();
    feasibility::ratio_deco_ex_at_radius(model, cb, f, d, 10.0, d * FRAC_1_SQRT_2)
}

const SWEEP_CONFIG: &str = r#"[ion]
mass = 1.5e-26
charge = 1.602176634e-19

[trap]
secular_frequency = 5.0e6
ion_distance = 50.0e-6
electrode_temperature = 10.0
coupler_temperature = 10.0
motional_bandwidth = 500.0

[coupler]
wire_length = 0.01
wire_radius = 10.0e-6
explicit_resistance = 1.0e-4
radius_rule = { proportional = 0.7071067811865476 }
"#;

fn c10() -> Criterion {
    let mut c = Criterion::new(10, "feasibility properties");
    let model = HeatingModel::niobium();
    let radii = ionwire::numerics::logspace(20e-9, 10e-6, 40);
    let worst = |f: f64, d: f64, m: &HeatingModel, pick: fn(f64, f64) -> f64| {
        radii.iter().map(|&a| ratio_at(m, f, d, a)).fold(f64::NAN, pick)
    };
    let max_low_f = [30e-6, 50e-6, 100e-6].iter().map(|&d| worst(1e6, d, &model, f64::max)).fold(0.0, f64::max);
    c.holds("1 MHz d<=100um ratio < 10", max_low_f < 10.0, format!("max {max_low_f:.3}"));
    for d in [100e-6, 200e-6] {
        let min = worst(5e6, d, &model, f64::min);
        let at_thin = ratio_at(&model, 5e6, d, 20e-9);
        c.holds(
            &format!("5 MHz d={:.0}um ratio > 10", d * 1e6),
            min > 10.0,
            format!("min {min:.3} over a (a = 20 nm: {at_thin:.3})"),
        );
    }
    let worst_model = model.with_exponents(1.5, 4.2).unwrap();
    for d in [50e-6, 100e-6, 200e-6] {
        let (lo, hi) = (worst(5e6, d, &worst_model, f64::min), worst(5e6, d, &worst_model, f64::max));
        c.holds(
            &format!("worst exponents d={:.0}um ratio in [3e-6, 3e-5]", d * 1e6),
            lo >= 3e-6 && hi <= 3e-5,
            format!("[{lo:.3e}, {hi:.3e}]"),
        );
    }

    let cfg = load_config(SWEEP_CONFIG).unwrap();
    let grid = GridSpec::default();
    let start = Instant::now();
    let map = feasibility::feasibility_map(&cfg, &grid).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    c.holds(
        "default grid feasible region",
        map.feasible_count() > 0,
        format!("{} of {} points", map.feasible_count(), map.points.len()),
    );
    let t = cfg.trap.electrode_temperature();
    let env = SnrEnvironment {
        temperature: cfg.trap.coupler_temperature(),
        bandwidth: cfg.trap.motional_bandwidth(),
        amplitude: Amplitude::ZeroPoint,
    };
    let mut worst_ratio: f64 = 0.0;
    let mut worst_snr: f64 = 0.0;
    for (cr, cs) in map.contour_ratio.iter().zip(&map.contour_snr) {
        let ratio = feasibility::ratio_deco_ex(&cfg.heating, &cfg.coupler, cr.f, cr.d, t, cfg.radius_rule);
        worst_ratio = worst_ratio.max(rel_diff(ratio, 10.0));
        let g = feasibility::geometry_at(&cfg.coupler, cfg.radius_rule, cs.d).unwrap();
        let snr = noise::snr_voltage(&cfg.ion, &g, cs.f, cs.d, env.temperature, g.resistance(cs.f), env.bandwidth, env.amplitude);
        worst_snr = worst_snr.max(rel_diff(snr.value, 10.0));
    }
    c.holds("ratio contour inversion", worst_ratio < 1e-9, format!("max rel {worst_ratio:.1e}"));
    c.holds("SNR contour inversion", worst_snr < 1e-9, format!("max rel {worst_snr:.1e}"));
    c.holds("200x200 map time", elapsed < 60.0, format!("{elapsed:.2} s (limit 60 s)"));
    c
}

/// Closed forms for the edge-charge fractions, written out independently.
fn edge_closed_form(a: f64, b: f64, xi: f64) -> f64 {
    let s0 = (a * a - (a - b) * (a - b)).sqrt();
    let total = 3.0 * b / s0 + 1.0 - s0 / a;
    if xi <= b {
        (1.5 * b / s0 + 1.5 * b.cbrt() * xi.powf(2.0 / 3.0) / s0) / total
    } else {
        1.0 - (1.0 - (a * a - (a - xi) * (a - xi)).sqrt() / a) / total
    }
}

fn c11() -> Criterion {
    let mut c = Criterion::new(11, "auxiliary estimates");
    for (a, b, xi, rounded) in [
        (35e-6, 17.5e-6, 8.75e-6, 0.76),
        (140e-6, 50e-9, 35e-6, 0.67),
        (140e-6, 50e-9, 70e-6, 0.86),
    ] {
        let f = electrostatics::edge_charge_fraction(a, b, xi).unwrap().fraction;
        let label = format!("edge fraction {rounded}");
        c.near(&label, f, edge_closed_form(a, b, xi), 1e-6);
        c.holds(&format!("{label} rounded"), (f - rounded).abs() <= 0.01, format!("{f:.4}"));
    }
    let sym = CapacitanceTriple::new(2.8e-15, 8e-14, 2.8e-15).unwrap();
    c.holds("zeta = eta (symmetric)", sym.zeta() == sym.eta(), format!("{:.6} / {:.6}", sym.zeta(), sym.eta()));
    let bare = capnet::charge_split(CapacitanceTriple::new(2.8e-15, 0.0, 2.8e-15).unwrap(), 1.0);
    c.holds("half split at C_b = 0", bare.zeta == 0.5 && bare.on_disk2 == 0.5, format!("zeta {}", bare.zeta));
    let t_deco = heating::decoherence_time(&HeatingModel::niobium(), &be(), 5e6, 50e-6, 10.0);
    c.near("l_Coul", coupling::l_coul_bound(t_deco, E, E, &be(), 5e6), 0.5e-3, 0.05);
    c.near("wire dominance cutoff", coupling::dominance_cutoff(50e-6, 0.01, 10e-6, 10.0).unwrap(), 0.8e-3, 0.10);
    let total = reference_geometry(50e-6, 0.01).capacitances().total();
    c.near("resonance inductance", feasibility::resonance_inductance(5e6, total), 0.01, 0.20);
    let w = feasibility::wire_decoherence_estimates(10.0, 1e-5, 500.0, 5e6, 1e7).unwrap();
    c.near("t_power", w.t_power, 2.4e-8, 0.05);
    let q = feasibility::wire_decoherence_estimates(3.0, 1e-5, 500.0, 60e6, 1e7).unwrap();
    c.near("t_qfactor", q.t_qfactor, 2.5e-5, 0.05);
    c
}

fn c12() -> Criterion {
    let mut c = Criterion::new(12, "oracle suite");
    let d = 50e-6;
    let cfg = ChargeAbovePlane::new(E, d).unwrap();
    c.near("plane integral", electrostatics::plane_induced_charge(cfg).unwrap(), -E, 1e-6);

    let r = SQRT_2 * d;
    let b = electrostatics::zero_point_amplitude(&be(), 5e6);
    let near = electrostatics::disk_induced_charge(ChargeAbovePlane::new(E, d - b).unwrap(), r).unwrap();
    let far = electrostatics::disk_induced_charge(ChargeAbovePlane::new(E, d + b).unwrap(), r).unwrap();
    c.near("quadrature Q_transf", far - near, electrostatics::induced_charge_linear(cfg, r, b), 1e-4);

    let h = 1e-4 * d;
    let fd = (electrostatics::surface_charge_density(ChargeAbovePlane::new(E, d + h).unwrap(), 0.5 * d)
        - electrostatics::surface_charge_density(ChargeAbovePlane::new(E, d - h).unwrap(), 0.5 * d))
        / (2.0 * h);
    c.near("dsigma/dd finite difference", fd, electrostatics::dsigma_dheight(cfg, 0.5 * d), 1e-6);

    let geom = reference_geometry(d, 0.01);
    let caps = geom.capacitances();
    let rd = geom.disk1_radius();
    let force = |shift: f64| {
        let moved = electrostatics::induced_charge_exact(ChargeAbovePlane::new(E, d - shift).unwrap(), rd)
            - electrostatics::induced_charge_exact(cfg, rd);
        E * electrostatics::ring_axial_field(caps.zeta() * moved, rd, d)
    };
    let hb = 1e-5 * d;
    let gamma_fd = ((force(hb) - force(-hb)) / (2.0 * hb)).abs();
    c.near("exact-charge gamma", gamma_fd, coupling::gamma_pickup_disk(E, d, d, rd, rd, &caps), 1e-6);

    let rs = 10e-6;
    let slopes = [
        ("slope pickup-disk", coupling::asymptotic_exponent(|x| coupling::gamma_pickup_disk(E, x, x, rs, rs, &caps), 10.0 * rs, 1000.0 * rs), -5.0),
        ("slope transmission-line", coupling::asymptotic_exponent(|x| coupling::gamma_transmission_line(rs, x, 8.6e-14, E), 10.0 * rs, 1000.0 * rs), -6.0),
        ("slope rect-electrodes", coupling::asymptotic_exponent(|x| coupling::gamma_rect_electrodes(rs, x, 8.6e-14, E), 10.0 * rs, 1000.0 * rs), -4.0),
        ("slope Coulomb", coupling::asymptotic_exponent(|x| coupling::gamma_coulomb(E, E, x), 1e-5, 1e-2), -3.0),
    ];
    for (label, slope, target) in slopes {
        let s = slope.unwrap();
        c.holds(label, (s - target).abs() <= 0.05, format!("{s:.4} vs {target}"));
    }

    let triple = CapacitanceTriple::new(3.1e-15, 7.7e-14, 1.9e-15).unwrap();
    let split = capnet::charge_split(triple, 2.6e-23);
    let v = split.potential(&triple);
    let pot_err = rel_diff(split.on_wire / triple.wire(), v).max(rel_diff(split.on_disk2 / triple.disk2(), v));
    c.holds("charge split equal potential", pot_err < 1e-12, format!("rel {pot_err:.1e}"));
    let energy = 0.5
        * (split.on_disk1.powi(2) / triple.disk1()
            + split.on_wire.powi(2) / triple.wire()
            + split.on_disk2.powi(2) / triple.disk2());
    c.near("charge split energy", energy, 2.6e-23f64.powi(2) / (2.0 * triple.total()), 1e-12);

    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 3.3e-12).unwrap();
    let run = exchange_sim::simulate_quantum_rwa(&sys, 2, 1.5 * sys.exchange_time(), sys.exchange_time() / 4000.0).unwrap();
    c.holds(
        "RWA excitation number",
        run.transfer.number_drift < 1e-12,
        format!("drift {:.1e}", run.transfer.number_drift),
    );

    let i = 1.44e-17;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mc = noise::shot_noise_monte_carlo(i, 500.0, 400_000, &mut rng).unwrap();
    c.near("Poisson shot noise Monte-Carlo", mc, noise::shot_noise_poisson(i, 500.0), 0.02);
    c
}

fn main() -> ExitCode {
    let criteria = [c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10(), c11(), c12()];
    let mut unexpected = 0;
    for crit in &criteria {
        let failed: Vec<&Check> = crit.checks.iter().filter(|c| !c.ok).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        let known_note = if !failed.is_empty() && failed.iter().all(|c| crit.known(c)) {
            " [known deviation]"
        } else {
            ""
        };
        println!("{status} criterion {:>2}: {}{known_note}", crit.id, crit.title);
        for check in &crit.checks {
            let known = crit.known(check);
            let mark = match (check.ok, known) {
                (true, false) => "ok",
                (false, true) => "known-fail",
                (false, false) => {
                    unexpected += 1;
                    "FAIL"
                }
                (true, true) => {
                    unexpected += 1;
                    "now-passing"
                }
            };
            println!("    {mark:<11} {}: {}", check.label, check.detail);
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} check(s) disagree with the known-deviation list");
        ExitCode::FAILURE
    }
}
