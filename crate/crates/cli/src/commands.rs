use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dipolekit_core::coupling::gauge::{
    delta12_integrand_reference, gauge_delta12_integrand, gauge_shift_integrand,
    shift_integrand_reference, AlphaChoice, GaugeProbe, Level,
};
use dipolekit_core::coupling::CouplingSet;
use dipolekit_core::dressed::{dressed_basis, jump_operators, symmetric_decay_rates, DressedBasis};
use dipolekit_core::liouvillian::{
    build_full_secular, build_partial_secular, build_standard, propagate, DressedRates,
    InitialState, Liouvillian, Trajectory,
};
use dipolekit_core::regression::{
    dressed_source_operator, new_lorentzian, spectrum_new, spectrum_numeric, spectrum_standard,
    standard_lorentzian, standard_source_operator, symmetric_frequency_shift,
    NumericSpectrumOptions, SpectrumCurve, TransferMatrix,
};
use dipolekit_core::units::{rydberg_radius, NaturalParams, SPEED_OF_LIGHT};

use crate::config::{Grid, Initial, Model, RunConfig, SpectrumMethod};
use crate::error::CliError;
use crate::table::{Cell, Table};

pub const DEFAULT_SEED: u64 = 0;
const DEFAULT_PROBES: usize = 100;
const DEFAULT_SWEEP_TIME: f64 = 1.0;
const DEFAULT_WINDOW_DECAYS: f64 = 20.0;
const GAUGE_CONSTANT: f64 = 0.37;

fn default_time() -> Grid {
    Grid::linear(0.0, 5.0, 201)
}

fn default_separation() -> Grid {
    Grid {
        from: 5.0,
        to: 50.0,
        points: 10,
        scale: crate::config::Scale::Log,
    }
}

/// Resolved run options: config values with command-line overrides applied.
#[derive(Debug, Clone)]
pub struct Run {
    pub cfg: RunConfig,
    pub model: Model,
    pub initial: Initial,
    pub seed: u64,
}

struct Scenario {
    couplings: CouplingSet,
    basis: DressedBasis,
}

impl Scenario {
    fn new(params: &NaturalParams) -> Result<Scenario, CliError> {
        let couplings = CouplingSet::new(params)?;
        let basis = dressed_basis(couplings.params.omega0, couplings.c);
        Ok(Scenario { couplings, basis })
    }

    fn generator(&self, model: Model) -> Result<Liouvillian, CliError> {
        let jumps = jump_operators(&self.basis);
        Ok(match model {
            Model::Standard => build_standard(&self.couplings)?,
            Model::Partial => build_partial_secular(&self.couplings, &self.basis, &jumps)?,
            Model::Secular => build_full_secular(&self.couplings, &self.basis, &jumps)?,
        })
    }
}

fn initial_state(initial: Initial) -> InitialState {
    match initial {
        Initial::Symmetric => InitialState::Symmetric,
        Initial::Antisymmetric => InitialState::Antisymmetric,
        Initial::Gg => InitialState::Gg,
        Initial::Ee => InitialState::Ee,
        Initial::Eps1 => InitialState::Eps1,
    }
}

pub fn coeffs(run: &Run) -> Result<Table, CliError> {
    let s = Scenario::new(&run.cfg.natural()?)?;
    let (k, b) = (&s.couplings, &s.basis);
    let (gamma_s, gamma_s0) = symmetric_decay_rates(b, k)?;
    let si = run.cfg.scenario()?;
    let r = k.params.separation() * SPEED_OF_LIGHT;
    let mut rows: Vec<(&str, f64, &str)> =
        vec![("omega0", k.params.omega0, "rad/s"), ("R", r, "m")];
    if let Some(ra) = si.rydberg_radius() {
        rows.push(("R/r_a", r / ra, "1"));
    }
    rows.extend([
        ("C", k.c, "1/s"),
        ("gamma", k.gamma0, "1/s"),
        ("gamma12", k.gamma12_at(k.params.omega0)?, "1/s"),
        ("delta12", k.delta12, "1/s"),
        ("delta12_transverse", k.delta12_transverse, "1/s"),
        (
            "delta12_minus_transverse",
            k.delta12 - k.delta12_transverse,
            "1/s",
        ),
        ("delta", k.delta, "1/s"),
        ("eta", b.eta, "1/s"),
        ("omega1", b.omega1, "rad/s"),
        ("omega2", b.omega2, "rad/s"),
        ("a", b.a, "1"),
        ("b", b.b, "1"),
        ("c", b.c_mix, "1"),
        ("d", b.d, "1"),
        ("gamma_s", gamma_s, "1/s"),
        ("gamma_s0", gamma_s0, "1/s"),
        ("gamma_s/gamma_s0", gamma_s / gamma_s0, "1"),
    ]);
    let mut t = Table {
        headers: vec!["quantity".into(), "value".into(), "unit".into()],
        rows: Vec::new(),
    };
    for (q, v, u) in rows {
        t.push(vec![q.into(), v.into(), u.into()]);
    }
    Ok(t)
}

const POPULATION_COLUMNS: [(&str, &str); 6] = [
    ("p_s", "1"),
    ("p_stationary", "1"),
    ("p_gg", "1"),
    ("p_eps1", "1"),
    ("p_eps2", "1"),
    ("min_eigenvalue", "1"),
];

fn population_cells(traj: &Trajectory, k: usize) -> Vec<Cell> {
    [
        traj.p_s[k],
        traj.p_stationary[k],
        traj.p_gg[k],
        traj.p_eps1[k],
        traj.p_eps2[k],
        traj.min_eigenvalue[k],
    ]
    .into_iter()
    .map(Cell::Num)
    .collect()
}

pub fn populations(run: &Run) -> Result<Table, CliError> {
    let s = Scenario::new(&run.cfg.natural()?)?;
    let gamma = s.couplings.gamma0;
    let gt = run.cfg.time.unwrap_or_else(default_time).values();
    let times: Vec<f64> = gt.iter().map(|x| x / gamma).collect();
    let rho = initial_state(run.initial).density(&s.basis);
    let traj = propagate(&s.generator(run.model)?, &rho, &times)?;

    let mut cols = vec![("t", "s"), ("gamma_t", "1")];
    cols.extend(POPULATION_COLUMNS);
    let mut t = Table::new(&cols);
    for k in 0..times.len() {
        let mut row = vec![Cell::Num(times[k]), Cell::Num(gt[k])];
        row.extend(population_cells(&traj, k));
        t.push(row);
    }
    Ok(t)
}

/// Separation columns shared by the R sweeps.
fn separation_cells(run: &Run, length: f64) -> Vec<Cell> {
    let mut row = vec![Cell::Num(length)];
    if let Some(n) = run.cfg.rydberg_n {
        row.push(Cell::Num(length / rydberg_radius(n)));
    }
    row
}

fn separation_columns(run: &Run) -> Vec<(&'static str, &'static str)> {
    let mut cols = vec![("R", "m")];
    if run.cfg.rydberg_n.is_some() {
        cols.push(("R/r_a", "1"));
    }
    cols
}

pub fn sweep(run: &Run) -> Result<Table, CliError> {
    let lengths = run.cfg.separations(default_separation())?;
    let gt = run.cfg.sweep_time.unwrap_or(DEFAULT_SWEEP_TIME);
    let rows: Vec<Vec<Cell>> = lengths
        .par_iter()
        .map(|&r| {
            let s = Scenario::new(&run.cfg.natural_at(r)?)?;
            let rho = initial_state(run.initial).density(&s.basis);
            let traj = propagate(&s.generator(run.model)?, &rho, &[gt / s.couplings.gamma0])?;
            let mut row = separation_cells(run, r);
            row.push(Cell::Num(s.couplings.c));
            row.extend(population_cells(&traj, 0));
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;

    let mut cols = separation_columns(run);
    cols.push(("C", "1/s"));
    cols.extend(POPULATION_COLUMNS);
    let mut t = Table::new(&cols);
    rows.into_iter().for_each(|row| t.push(row));
    Ok(t)
}

pub fn peaks(run: &Run) -> Result<Table, CliError> {
    let lengths = run.cfg.separations(default_separation())?;
    let rows: Vec<Vec<Cell>> = lengths
        .par_iter()
        .map(|&r| {
            let params = run.cfg.natural_at(r)?;
            let mu = run.cfg.mu_det(&params)?;
            let s = Scenario::new(&params)?;
            let rates = DressedRates::new(&s.couplings, &s.basis)?;
            let old = standard_lorentzian(&s.couplings)?;
            let new = new_lorentzian(&s.couplings, &s.basis)?;
            // ω̃₂ − (ω̃₀ + Δ₁₂) without cancelling two large frequencies against each other
            let k = &s.couplings;
            let difference = symmetric_frequency_shift(&rates, &s.basis)
                - (k.omega0_shifted() + k.delta12 - s.basis.omega2);
            let mut row = separation_cells(run, r);
            row.extend(
                [
                    old.center,
                    new.center,
                    difference,
                    new.center / old.center,
                    old.fwhm,
                    new.fwhm,
                    mu * old.height,
                    mu * new.height,
                    new.height / old.height,
                ]
                .map(Cell::Num),
            );
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;

    let mut cols = separation_columns(run);
    cols.extend([
        ("s0_center", "rad/s"),
        ("s_center", "rad/s"),
        ("center_difference", "rad/s"),
        ("center_ratio", "1"),
        ("s0_fwhm", "1/s"),
        ("s_fwhm", "1/s"),
        ("s0_height", "arb"),
        ("s_height", "arb"),
        ("height_ratio", "1"),
    ]);
    let mut t = Table::new(&cols);
    rows.into_iter().for_each(|row| t.push(row));
    Ok(t)
}

pub fn spectrum(run: &Run) -> Result<Table, CliError> {
    let params = run.cfg.natural()?;
    let mu = run.cfg.mu_det(&params)?;
    let s = Scenario::new(&params)?;
    let (gamma_s, gamma_s0) = symmetric_decay_rates(&s.basis, &s.couplings)?;
    let old = standard_lorentzian(&s.couplings)?;
    let new = new_lorentzian(&s.couplings, &s.basis)?;
    let width = gamma_s.max(gamma_s0);
    let detuning = run
        .cfg
        .frequency
        .unwrap_or_else(|| Grid::linear(-10.0 * width, 10.0 * width, 401))
        .values();
    let w_old: Vec<f64> = detuning.iter().map(|d| old.center + d).collect();
    let w_new: Vec<f64> = detuning.iter().map(|d| new.center + d).collect();

    let (s0, s1): (SpectrumCurve, SpectrumCurve) = match run.cfg.spectrum_method {
        SpectrumMethod::Analytic => (
            spectrum_standard(&s.couplings, &w_old, mu)?,
            spectrum_new(&s.couplings, &s.basis, &w_new, mu)?,
        ),
        SpectrumMethod::Numeric => {
            let rho = initial_state(run.initial).density(&s.basis);
            let decays = run.cfg.window_decays.unwrap_or(DEFAULT_WINDOW_DECAYS);
            let numeric = |model: Model,
                           source,
                           gamma: f64,
                           omega: &[f64]|
             -> Result<SpectrumCurve, CliError> {
                let tm = TransferMatrix::new(&s.generator(model)?)?;
                let mut opts = NumericSpectrumOptions::new(decays / gamma, gamma);
                opts.mu_det = mu;
                Ok(spectrum_numeric(&tm, &source, &rho, &opts, omega)?)
            };
            (
                numeric(
                    Model::Standard,
                    standard_source_operator(s.basis.omega0),
                    gamma_s0,
                    &w_old,
                )?,
                numeric(
                    Model::Secular,
                    dressed_source_operator(&s.basis),
                    gamma_s,
                    &w_new,
                )?,
            )
        }
    };
    for note in s0.notes.iter().chain(&s1.notes) {
        eprintln!("note: {note}");
    }

    let mut t = Table::new(&[
        ("detuning", "rad/s"),
        ("omega_s0", "rad/s"),
        ("s0", "arb"),
        ("omega_s", "rad/s"),
        ("s", "arb"),
    ]);
    for k in 0..detuning.len() {
        t.push(
            [detuning[k], w_old[k], s0.values[k], w_new[k], s1.values[k]]
                .map(Cell::Num)
                .to_vec(),
        );
    }
    Ok(t)
}

pub fn gauge_check(run: &Run) -> Result<Table, CliError> {
    let w0 = run.cfg.natural()?.omega0;
    let probes = run.cfg.probes.unwrap_or(DEFAULT_PROBES);
    let choices = [
        ("coulomb", AlphaChoice::Coulomb),
        ("multipolar", AlphaChoice::Multipolar),
        ("symmetric", AlphaChoice::Symmetric),
        ("constant_0.37", AlphaChoice::Constant(GAUGE_CONSTANT)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let samples: Vec<(f64, f64)> = (0..probes)
        .map(|_| {
            (
                w0 * 10f64.powf(rng.random_range(-2.0..2.0)),
                rng.random_range(0.0..10.0),
            )
        })
        .collect();

    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let mut t = Table::new(&[("integrand", "-"), ("gauge", "-"), ("max_rel_dev", "1")]);
    let mut overall = 0.0f64;
    for (name, level) in [
        ("excited_shift", Some(Level::Excited)),
        ("ground_shift", Some(Level::Ground)),
        ("delta12", None),
    ] {
        for (label, choice) in choices {
            let probe = GaugeProbe::new(choice, w0);
            let mut worst = 0.0f64;
            for &(wk, nk) in &samples {
                let dev = match level {
                    Some(l) => rel(
                        gauge_shift_integrand(l, wk, nk, &probe)?,
                        shift_integrand_reference(l, w0, wk, nk),
                    ),
                    None => rel(
                        gauge_delta12_integrand(wk, &probe)?,
                        delta12_integrand_reference(w0, wk),
                    ),
                };
                worst = worst.max(dev);
            }
            overall = overall.max(worst);
            t.push(vec![name.into(), label.into(), worst.into()]);
        }
    }
    t.push(vec!["all".into(), "all".into(), overall.into()]);
    Ok(t)
}
