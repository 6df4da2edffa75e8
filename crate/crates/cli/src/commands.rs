//! Subcommand pipelines. Each returns its result tables; the caller decides
//! where they go.

use std::f64::consts::PI;

use raqr_core::atomic::{stark_map, RydbergState, StarkBasisSpec};
use raqr_core::eit::{ats_splitting_with, field_from_splitting, find_peaks, transmission_spectrum, uniform_grid, Doppler};
use raqr_core::link::{doa_crb, simulate_doa, simulate_mimo_rate, simulate_siso};
use raqr_core::receiver::{baseband_model, conventional_baseline_with, noise_budget, superhet_gain, BasebandModel};
use raqr_core::Error;
use serde_json::Value;

use crate::config::{Config, Scenario};
use crate::output::{num, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration (exit 1).
    Usage(String),
    /// The numerical pipeline failed (exit 2).
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub const COMMANDS: &[&str] = &[
    "stark-map",
    "eit-spectrum",
    "ats-readout",
    "sensitivity",
    "siso-ber",
    "mimo-rate",
    "doa-crb",
    "doa-mse",
    "dump-config",
];

pub fn run(command: &str, config: &Config) -> Result<Vec<Table>> {
    match command {
        "stark-map" => stark(config),
        "eit-spectrum" => eit_spectrum(config),
        "ats-readout" => ats_readout(config),
        "sensitivity" => sensitivity(config),
        "siso-ber" => siso_ber(config),
        "mimo-rate" => mimo_rate(config),
        "doa-crb" => doa_crb_curve(config),
        "doa-mse" => doa_mse(config),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn stark(c: &Config) -> Result<Vec<Table>> {
    let s = &c.stark_map;
    let species = c.species()?;
    let center = RydbergState::new(s.n, s.l, s.j, s.mj)?;
    let window = if s.energy_window_ghz > 0.0 {
        s.energy_window_ghz
    } else {
        StarkBasisSpec::around(&species, &center)?.energy_window_ghz
    };
    let grid: Vec<f64> = (0..s.field_points)
        .map(|i| s.field_max_vcm * i as f64 / (s.field_points - 1) as f64)
        .collect();
    let map = stark_map(&species, &center, window, &grid)?;

    let mut columns = vec!["field_vcm".to_string()];
    for t in 0..map.eigen_traces.len() {
        let origin = &map.basis[map.trace_origin[t]];
        let mark = if t == map.center_trace { "*" } else { "" };
        columns.push(format!("{}{mark}", origin.label().replace(',', ";")));
    }
    let mut traces = Table::with_columns("stark_map", columns);
    for (i, f) in grid.iter().enumerate() {
        let mut row = vec![num(*f)];
        row.extend(map.eigen_traces.iter().map(|t| num(t[i])));
        traces.push(row);
    }

    let mut summary = Table::new("stark_summary", &["quantity", "value", "unit"]);
    let (alpha, r2) = map.quadratic_fit(0.1)?;
    summary.push(vec![Value::from("basis_size"), Value::from(map.basis.len()), Value::from("states")]);
    let rows: [(&str, f64, &str); 4] = [
        ("energy_window", window, "GHz"),
        ("polarizability", alpha, "MHz/(V/cm)^2"),
        ("quadratic_fit_r2", r2, "1"),
        ("max_trace_jump", map.max_trace_jump(), "GHz"),
    ];
    for (q, v, u) in rows {
        summary.push(vec![Value::from(q), num(v), Value::from(u)]);
    }

    let mut crossings = Table::new("stark_anticrossings", &["lower_level", "field_vcm", "gap_ghz"]);
    for a in map.anticrossings() {
        crossings.push(vec![Value::from(a.lower), num(a.field_vcm), num(a.gap_ghz)]);
    }
    Ok(vec![traces, summary, crossings])
}

fn doppler_of(c: &Config) -> Doppler {
    if c.eit.doppler {
        Doppler::On {
            velocity_classes: c.eit.velocity_classes,
        }
    } else {
        Doppler::Off
    }
}

fn spectrum_table(name: &str, trace: &raqr_core::eit::SpectralTrace) -> Table {
    let mut t = Table::new(name, &["detuning_Hz", "transmission", "re_chi", "im_chi"]);
    for ((d, tr), chi) in trace.detuning_grid.iter().zip(&trace.transmission).zip(&trace.susceptibility) {
        t.push_nums(&[d / (2.0 * PI), *tr, chi.re, chi.im]);
    }
    t
}

fn eit_spectrum(c: &Config) -> Result<Vec<Table>> {
    let mut scheme = c.eit.scheme;
    let name = match c.eit.scenario {
        Scenario::I => {
            scheme.rabi_coupling_rad_s = 0.0;
            scheme.rabi_rf_rad_s = 0.0;
            "eit_spectrum_i"
        }
        Scenario::Ii => {
            scheme.rabi_rf_rad_s = 0.0;
            "eit_spectrum_ii"
        }
        Scenario::Iii => {
            scheme = scheme.with_rf_field(c.eit.rf_field_vcm);
            "eit_spectrum_iii"
        }
    };
    let grid = uniform_grid(2.0 * PI * c.eit.detuning_half_span_hz, c.eit.points);
    let trace = transmission_spectrum(&scheme, &grid, doppler_of(c))?;
    let peaks = find_peaks(&trace.detuning_grid, &trace.transmission, c.ats.min_prominence);
    eprintln!("{name}: {} transmission maxima", peaks.len());
    Ok(vec![spectrum_table(name, &trace)])
}

fn ats_readout(c: &Config) -> Result<Vec<Table>> {
    let grid = uniform_grid(2.0 * PI * c.ats.detuning_half_span_hz, c.ats.points);
    let d34 = c.eit.scheme.rf_dipole_ea0;
    let mut t = Table::new(
        "ats_readout",
        &["rf_field_vcm", "rabi_hz", "splitting_hz", "inferred_field_vcm", "relative_error"],
    );
    for &field in &c.ats.rf_fields_vcm {
        let scheme = c.eit.scheme.with_rf_field(field);
        let trace = transmission_spectrum(&scheme, &grid, doppler_of(c))?;
        let rabi_hz = scheme.rabi_rf_rad_s / (2.0 * PI);
        match ats_splitting_with(&trace, c.ats.min_prominence) {
            Ok(split) => {
                let inferred = field_from_splitting(split, d34)?;
                t.push_nums(&[field, rabi_hz, split, inferred, inferred / field - 1.0]);
            }
            Err(Error::BelowAtsThreshold { peaks }) => {
                eprintln!("ats-readout: {field} V/cm is below the ATS threshold ({peaks} peak)");
                t.push_nums(&[field, rabi_hz, f64::NAN, f64::NAN, f64::NAN]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(vec![t])
}

fn models(c: &Config) -> Result<(BasebandModel, BasebandModel)> {
    let raqr = baseband_model(&c.receiver)?;
    let conv = conventional_baseline_with(
        &c.conventional.reference,
        c.conventional.temperature_k,
        c.conventional.noise_figure_db,
        raqr.bandwidth_hz,
    )?;
    Ok((raqr, conv))
}

fn sensitivity(c: &Config) -> Result<Vec<Table>> {
    let gain = superhet_gain(&c.receiver)?;
    let budget = noise_budget(&c.receiver)?;
    let (_, conv) = models(c)?;
    let mut t = Table::new("sensitivity", &["quantity", "value", "unit"]);
    let rows: [(&str, f64, &str); 11] = [
        ("lo_field", c.receiver.lo_field_vcm, "V/cm"),
        ("rho", gain.rho, "A/(V/cm)"),
        ("phi", gain.phi, "rad"),
        ("transmission", gain.transmission, "1"),
        ("transmission_slope", gain.transmission_slope, "1/(V/cm)"),
        ("sql", budget.sql, "V/cm/rtHz"),
        ("photon_shot", budget.photon_shot, "V/cm/rtHz"),
        ("pd_electrical", budget.pd_electrical, "V/cm/rtHz"),
        ("total", budget.total, "V/cm/rtHz"),
        ("conventional", conv.sensitivity, "V/cm/rtHz"),
        ("snr_advantage", 20.0 * (conv.sensitivity / budget.total).log10(), "dB"),
    ];
    for (q, v, u) in rows {
        t.push(vec![Value::from(q), num(v), Value::from(u)]);
    }
    Ok(vec![t])
}

fn siso_ber(c: &Config) -> Result<Vec<Table>> {
    let (raqr, conv) = models(c)?;
    let channel = c.channel_config();
    let mut out = Vec::new();
    for (name, model) in [("siso_ber_raqr", &raqr), ("siso_ber_conventional", &conv)] {
        let pts = simulate_siso(&channel, model, c.siso.modulation, c.siso.bits_per_point)?;
        let mut t = Table::new(name, &["tx_power_dbm", "ber", "ber_stderr", "snr_db", "bits", "errors"]);
        for p in pts {
            t.push_nums(&[p.tx_power_dbm, p.ber, p.ber_stderr, p.snr_db, p.bits as f64, p.errors as f64]);
        }
        out.push(t);
    }
    Ok(out)
}

fn mimo_rate(c: &Config) -> Result<Vec<Table>> {
    let (raqr, conv) = models(c)?;
    let pts = simulate_mimo_rate(&c.channel_config(), &c.array, &raqr, &conv, c.mimo.draws)?;
    let cols = ["tx_power_dbm", "rate_bps_hz", "stderr", "snr_db"];
    let mut r = Table::new("mimo_rate_raqr", &cols);
    let mut v = Table::new("mimo_rate_conventional", &cols);
    let mut g = Table::new("mimo_rate_gap", &["tx_power_dbm", "gap_bps_hz", "stderr", "snr_ratio_db"]);
    for p in pts {
        r.push_nums(&[p.tx_power_dbm, p.rate_raqr, p.stderr_raqr, p.snr_raqr_db]);
        v.push_nums(&[p.tx_power_dbm, p.rate_conv, p.stderr_conv, p.snr_conv_db]);
        g.push_nums(&[p.tx_power_dbm, p.gap, p.gap_stderr, p.snr_raqr_db - p.snr_conv_db]);
    }
    Ok(vec![r, v, g])
}

fn doa_crb_curve(c: &Config) -> Result<Vec<Table>> {
    let (raqr, conv) = models(c)?;
    let channel = c.channel_config();
    let cols = ["tx_power_dbm", "crb_rad2", "stderr", "snr_db"];
    let mut r = Table::new("doa_crb_raqr", &cols);
    let mut v = Table::new("doa_crb_conventional", &cols);
    for &p in &channel.tx_power_dbm {
        let field = channel.received_field_vcm(p);
        for (t, m) in [(&mut r, &raqr), (&mut v, &conv)] {
            let snr = m.snr(field);
            let crb = doa_crb(&c.array, c.doa.theta_rad, c.doa.snapshots, snr)?;
            t.push_nums(&[p, crb, 0.0, 10.0 * snr.log10()]);
        }
    }
    Ok(vec![r, v])
}

fn doa_mse(c: &Config) -> Result<Vec<Table>> {
    let pts = simulate_doa(&c.doa_setup(), &c.doa.snr_db)?;
    let mut t = Table::new("doa_mse", &["snr_db", "mse_rad2", "stderr", "crb_rad2"]);
    for p in pts {
        t.push_nums(&[p.snr_db, p.mse, p.mse_stderr, p.crb]);
    }
    Ok(vec![t])
}
