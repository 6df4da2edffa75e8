//! Acceptance run: one PASS/FAIL line per criterion with the measured
//! values, the tolerance and the wall time. Exits non-zero on any failure.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::{Complex, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raqr_core::atomic::*;
use raqr_core::constants::{EA0, HBAR};
use raqr_core::eit::*;
use raqr_core::link::*;
use raqr_core::receiver::*;

type C64 = Complex<f64>;
type Check = Result<String, String>;

const BIN: &str = env!("CARGO_BIN_EXE_raqr");
const MHZ: f64 = 2.0 * PI * 1e6;

struct Criterion {
    id: u32,
    name: &'static str,
    budget_s: Option<f64>,
    check: fn() -> Check,
}

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn raqr(args: &[&str]) -> Result<std::process::Output, String> {
    let o = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("raqr {args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
    }
    Ok(o)
}

/// Columns of a CSV table by header name.
fn csv_columns(text: &str) -> Vec<(String, Vec<f64>)> {
    let mut lines = text.lines().filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap_or_default().split(',').map(str::to_string).collect();
    let mut cols: Vec<(String, Vec<f64>)> = header.into_iter().map(|h| (h, Vec::new())).collect();
    for line in lines {
        for (c, v) in cols.iter_mut().zip(line.split(',')) {
            c.1.push(v.parse().unwrap_or(f64::NAN));
        }
    }
    cols
}

fn column(text: &str, name: &str) -> Vec<f64> {
    csv_columns(text)
        .into_iter()
        .find(|(h, _)| h == name)
        .map(|(_, v)| v)
        .unwrap_or_default()
}

fn read(dir: &Path, file: &str) -> Result<String, String> {
    std::fs::read_to_string(dir.join(file)).map_err(|e| format!("{file}: {e}"))
}

fn transition_frequencies() -> Check {
    let cs = AtomSpecies::cs133();
    let mut report = Vec::new();
    for (nd, want, tol) in [(47, 6.9458, 1e-3), (45, 7.9752, 1e-3), (34, 19.629, 2e-3)] {
        let d = RydbergState::new(nd, 2, 2.5, 0.5).map_err(|e| e.to_string())?;
        let p = RydbergState::new(nd + 1, 1, 1.5, 0.5).map_err(|e| e.to_string())?;
        let f = transition_frequency(&cs, &d, &p).map_err(|e| e.to_string())?;
        let rel = (f - want).abs() / want;
        report.push(format!("{nd}D {f:.5} GHz ({:.3}%)", 100.0 * rel));
        ensure(rel < tol, format!("{nd}D–{}P: {f} GHz vs {want}, tolerance {tol}", nd + 1))?;
    }
    Ok(report.join(", "))
}

fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn hydrogen_radial(n: u32, l: u32, r: f64) -> f64 {
    let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
    let nf = n as f64;
    let rho = 2.0 * r / nf;
    let norm = ((2.0 / nf).powi(3) * fact(n - l - 1) / (2.0 * nf * fact(n + l))).sqrt();
    norm * (-rho / 2.0).exp() * rho.powi(l as i32) * laguerre(n - l - 1, 2.0 * l as f64 + 1.0, rho)
}

fn hydrogen_suite() -> Check {
    let h = AtomSpecies::cs133().without_defects();
    let (mut worst_e, mut worst_rms, mut states) = (0.0f64, 0.0f64, 0);
    for n in 1..=10u32 {
        for l in 0..n {
            let s = RydbergState::new(n, l, l as f64 + 0.5, 0.5).map_err(|e| e.to_string())?;
            let e = level_energy(&h, &s).map_err(|e| e.to_string())?;
            let exact = -h.rydberg_constant_thz / (n * n) as f64;
            worst_e = worst_e.max(((e - exact) / exact).abs());
            let wf = radial_wavefunction(&h, &s, &GridSpec::default()).map_err(|e| e.to_string())?;
            ensure(
                wf.node_count() == (n - l - 1) as usize,
                format!("n={n} l={l}: {} nodes", wf.node_count()),
            )?;
            let exact: Vec<f64> = wf.radial_grid().iter().map(|&r| hydrogen_radial(n, l, r)).collect();
            let sign = wf.values().iter().zip(&exact).map(|(a, b)| a * b).sum::<f64>().signum();
            let peak = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let rms = (wf.values().iter().zip(&exact).map(|(a, b)| (sign * a - b).powi(2)).sum::<f64>()
                / wf.len() as f64)
                .sqrt()
                / peak;
            worst_rms = worst_rms.max(rms);
            states += 1;
        }
    }
    ensure(worst_e < 1e-3, format!("energy error {worst_e:.2e}"))?;
    ensure(worst_rms < 1e-3, format!("wavefunction rms {worst_rms:.2e}"))?;
    Ok(format!(
        "{states} states, max energy error {worst_e:.1e}, max wavefunction rms {worst_rms:.1e} (tol 1e-3), nodes exact"
    ))
}

fn stark_properties() -> Check {
    let cs = AtomSpecies::cs133();
    let center = RydbergState::new(30, 2, 2.5, 0.5).map_err(|e| e.to_string())?;
    let spec = StarkBasisSpec::around(&cs, &center).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (0..=200).map(|i| 0.5 * i as f64).collect();
    let map = stark_map(&cs, &center, spec.energy_window_ghz, &grid).map_err(|e| e.to_string())?;
    ensure(map.basis.len() >= 30, format!("basis of {} states", map.basis.len()))?;
    let mut zero: Vec<f64> = map.eigen_traces.iter().map(|t| t[0]).collect();
    let mut bare = map.unperturbed_ghz.clone();
    zero.sort_by(f64::total_cmp);
    bare.sort_by(f64::total_cmp);
    let zero_dev = zero.iter().zip(&bare).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(zero_dev < 1e-3, format!("zero-field deviation {:.3} MHz", zero_dev * 1e3))?;
    let (alpha, r2) = map.quadratic_fit(0.1).map_err(|e| e.to_string())?;
    ensure(r2 >= 0.999, format!("R² = {r2}"))?;
    let ac = map.anticrossings();
    ensure(!ac.is_empty() && ac.iter().all(|c| c.gap_ghz > 0.0), format!("{} anti-crossings", ac.len()))?;
    let min_gap = ac.iter().map(|c| c.gap_ghz).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "basis {} states, R² {r2:.5} (≥ 0.999), α {alpha:.2} MHz/(V/cm)², {} anti-crossings (min gap {:.3} MHz), zero-field max dev {:.2e} MHz (< 1)",
        map.basis.len(),
        ac.len(),
        min_gap * 1e3,
        zero_dev * 1e3
    ))
}

fn cli_spectrum(scenario: &str) -> Result<(Vec<f64>, Vec<f64>), String> {
    let o = raqr(&["eit-spectrum", "--scenario", scenario])?;
    let text = String::from_utf8_lossy(&o.stdout);
    Ok((column(&text, "detuning_Hz"), column(&text, "transmission")))
}

fn line_center(x: &[f64]) -> usize {
    x.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(i, _)| i).unwrap_or(0)
}

fn linear_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn eit_ats_suite() -> Check {
    let (x1, t1) = cli_spectrum("i")?;
    let inverted: Vec<f64> = t1.iter().map(|t| -t).collect();
    let minima = find_peaks(&x1, &inverted, 0.1).len();
    ensure(minima == 1, format!("scenario (i): {minima} absorption minima"))?;

    let (x2, t2) = cli_spectrum("ii")?;
    let c = line_center(&x2);
    let is_local_max = t2[c] > t2[c - 1] && t2[c] > t2[c + 1];
    let peak_at_center = find_peaks(&x2, &t2, 0.1)
        .iter()
        .any(|p| p.position.abs() <= (x2[1] - x2[0]).abs());
    let t1c = t1[line_center(&x1)];
    ensure(
        is_local_max && peak_at_center && t2[c] > t1c,
        format!("scenario (ii): T(0) {:.4} vs (i) {t1c:.4}, local max {is_local_max}", t2[c]),
    )?;

    let (x3, t3) = cli_spectrum("iii")?;
    let peaks3 = find_peaks(&x3, &t3, 0.1).len();
    ensure(peaks3 == 2, format!("scenario (iii): {peaks3} peaks"))?;

    let s = LadderScheme::cs_default(1000.0);
    let grid = uniform_grid(40.0 * MHZ, 1601);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for o in [12.0, 16.0, 20.0, 24.0, 28.0] {
        let mut t = s;
        t.rabi_rf_rad_s = o * MHZ;
        let trace = transmission_spectrum(&t, &grid, Doppler::Off).map_err(|e| e.to_string())?;
        xs.push(o * MHZ);
        ys.push(ats_splitting(&trace).map_err(|e| e.to_string())?);
    }
    let slope = linear_slope(&xs, &ys) * 2.0 * PI;
    ensure((slope - 1.0).abs() < 0.02, format!("ATS slope {slope:.4}·(1/2π)"))?;

    let mut d = s;
    d.rabi_rf_rad_s = 15.0 * MHZ;
    d.detune_rf_rad_s = 8.0 * MHZ;
    let trace = transmission_spectrum(&d, &grid, Doppler::Off).map_err(|e| e.to_string())?;
    let split = ats_splitting(&trace).map_err(|e| e.to_string())?;
    let oracle = (15.0f64.powi(2) + 8.0f64.powi(2)).sqrt() * 1e6;
    let dev = split / oracle - 1.0;
    ensure(dev.abs() < 0.03, format!("detuned splitting {split:.0} Hz vs {oracle:.0} Hz"))?;
    Ok(format!(
        "(i) 1 minimum; (ii) T(0) {:.4} > {t1c:.4}; (iii) 2 peaks; slope {:.4}/2π (±2%); detuned {:+.2}% (±3%)",
        t2[c],
        slope,
        100.0 * dev
    ))
}

fn random_scheme(rng: &mut ChaCha8Rng) -> LadderScheme {
    let mut s = LadderScheme::cs_default(1000.0);
    s.rabi_probe_rad_s = rng.random_range(0.05..10.0) * MHZ;
    s.rabi_coupling_rad_s = rng.random_range(0.0..15.0) * MHZ;
    s.rabi_rf_rad_s = rng.random_range(0.0..30.0) * MHZ;
    s.detune_probe_rad_s = rng.random_range(-20.0..20.0) * MHZ;
    s.detune_coupling_rad_s = rng.random_range(-5.0..5.0) * MHZ;
    s.detune_rf_rad_s = rng.random_range(-5.0..5.0) * MHZ;
    s.gamma2_rad_s = rng.random_range(1.0..10.0) * MHZ;
    s.gamma3_rad_s = rng.random_range(0.001..0.5) * MHZ;
    s.gamma4_rad_s = rng.random_range(0.001..0.5) * MHZ;
    s.dephasing_extra_rad_s = rng.random_range(0.0..1.0) * MHZ;
    s
}

fn density_matrix_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut tr, mut herm, mut min_eig, mut diff) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for k in 0..200 {
        let s = random_scheme(&mut rng);
        let a = steady_state(&s).map_err(|e| format!("scheme {k}: {e}"))?;
        let (b, _) = propagate_to_steady_state(&s).map_err(|e| format!("scheme {k}: {e}"))?;
        tr = tr.max((a.trace() - C64::new(1.0, 0.0)).norm());
        herm = herm.max(a.hermiticity_error());
        min_eig = min_eig.min(a.min_eigenvalue());
        diff = diff.max(a.max_abs_diff(&b));
    }
    ensure(tr < 1e-10, format!("trace error {tr:.2e}"))?;
    ensure(herm < 1e-12, format!("hermiticity error {herm:.2e}"))?;
    ensure(min_eig > -1e-9, format!("minimum eigenvalue {min_eig:.2e}"))?;
    ensure(diff < 1e-6, format!("null-space vs propagation {diff:.2e}"))?;
    Ok(format!(
        "200 schemes: |tr−1| {tr:.1e}, hermiticity {herm:.1e}, min eigenvalue {min_eig:.1e}, null-space vs propagation {diff:.1e} (< 1e-6)"
    ))
}

fn sql_scaling() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = 10f64.powf(rng.random_range(3.0..12.0));
        let tr = 10f64.powf(rng.random_range(-9.0..-3.0));
        let ti = 10f64.powf(rng.random_range(-3.0..1.0));
        let c = 10f64.powf(rng.random_range(-12.0..-8.0));
        let base = sql_sensitivity(n, tr, ti, c).map_err(|e| e.to_string())?;
        for (a, b, d) in [(4.0 * n, tr, ti), (n, 4.0 * tr, ti), (n, tr, 4.0 * ti), (2.0 * n, 2.0 * tr, ti)] {
            let q = sql_sensitivity(a, b, d, c).map_err(|e| e.to_string())?;
            worst = worst.max((q / base - 0.5).abs() / 0.5);
        }
    }
    ensure(worst < 1e-12, format!("halving error {worst:.2e}"))?;
    let config = SuperhetConfig::link_reference_cs47d().map_err(|e| e.to_string())?;
    let sql = noise_budget(&config).map_err(|e| e.to_string())?.sql;
    let p = SqlParams::default();
    let calib = HBAR / (config.scheme.rf_dipole_ea0 * EA0) / 100.0;
    let direct = sql_sensitivity(p.atom_count, p.readout_time_s, p.interaction_time_s, calib).map_err(|e| e.to_string())?;
    ensure((1e-12..1e-11).contains(&sql), format!("representative SQL {sql:.3e} V/cm/√Hz"))?;
    ensure((sql / direct - 1.0).abs() < 1e-12, format!("budget SQL {sql:.3e} vs {direct:.3e}"))?;
    Ok(format!(
        "halving error {worst:.1e} over 4000 quadruplings (< 1e-12); representative SQL {:.2} pV/cm/√Hz",
        sql * 1e12
    ))
}

fn sensitivity_anchors() -> Check {
    let exp = SuperhetConfig::experimental_cs47d().map_err(|e| e.to_string())?;
    let total = noise_budget(&exp).map_err(|e| e.to_string())?.total;
    let decades = (total / 55e-9).log10();
    ensure(decades.abs() <= 1.0, format!("superhet sensitivity {total:.3e} V/cm/√Hz"))?;
    let bw = baseband_model(&exp).map_err(|e| e.to_string())?.bandwidth_hz;
    let conv = conventional_baseline(290.0, 0.0, bw).map_err(|e| e.to_string())?.sensitivity;
    ensure((conv - 1.5e-9).abs() <= 1e-24, format!("conventional {conv:e}"))?;
    Ok(format!(
        "superhet {:.1} nV/cm/√Hz ({decades:+.2} decades from 55); conventional {:.4} nV/cm/√Hz at 290 K, 0 dB",
        total * 1e9,
        conv * 1e9
    ))
}

fn siso_ber() -> Check {
    let channel = ChannelConfig {
        tx_power_dbm: vec![20.0],
        seed: 5,
        ..ChannelConfig::default()
    };
    // unit-gain model whose symbol SNR is 20 (per-bit 10 dB for QPSK)
    let field = channel.received_field_vcm(20.0);
    let model = BasebandModel::from_sensitivity(1.0, 0.4, field / (20.0f64 * 1e5).sqrt(), 1e5).map_err(|e| e.to_string())?;
    let pts = simulate_siso(&channel, &model, Modulation::Qpsk, 1_000_000).map_err(|e| e.to_string())?;
    let p = &pts[0];
    let oracle = rayleigh_ber_per_bit(10.0);
    let z = (p.ber - oracle) / p.ber_stderr;
    ensure(p.bits >= 1_000_000 && z.abs() < 3.0, format!("BER {} vs {oracle}, z = {z:.2}", p.ber))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    raqr(&["siso-ber", "--out", dir.path().to_str().unwrap_or_default()])?;
    let r = read(dir.path(), "siso_ber_raqr.csv")?;
    let c = read(dir.path(), "siso_ber_conventional.csv")?;
    let (br, bc) = (column(&r, "ber"), column(&c, "ber"));
    let power = column(&r, "tx_power_dbm");
    ensure(!br.is_empty() && br.len() == bc.len(), "empty BER curves".into())?;
    for ((p, a), b) in power.iter().zip(&br).zip(&bc) {
        ensure(a < b, format!("at {p} dBm RAQR BER {a} vs conventional {b}"))?;
    }
    Ok(format!(
        "QPSK/Rayleigh 10 dB: {:.5} vs {oracle:.5} ({z:+.2}σ, {} bits); RAQR below conventional at all {} powers",
        p.ber,
        p.bits,
        br.len()
    ))
}

fn mimo_gap() -> Check {
    let conv = BasebandModel::from_sensitivity(1.0, 0.0, 1e-9, 1e5).map_err(|e| e.to_string())?;
    let raqr_model = BasebandModel::from_sensitivity(1.0, 0.0, 1e-9 * 2f64.powf(-1.25), 1e5).map_err(|e| e.to_string())?;
    let channel = ChannelConfig {
        tx_power_dbm: vec![40.0],
        ..ChannelConfig::default()
    };
    let p = simulate_mimo_rate(&channel, &ArrayGeometry::default(), &raqr_model, &conv, 10_000).map_err(|e| e.to_string())?;
    let synthetic = p[0].gap;
    ensure((synthetic - 2.5).abs() < 0.1, format!("synthetic gap {synthetic} vs 2.5"))?;

    let o = raqr(&["mimo-rate"])?;
    let text = String::from_utf8_lossy(&o.stdout);
    let gap_table = text.split("# mimo_rate_gap").nth(1).unwrap_or_default();
    let gaps = column(gap_table, "gap_bps_hz");
    let ratios = column(gap_table, "snr_ratio_db");
    let (gap, ratio_db) = match (gaps.last(), ratios.last()) {
        (Some(g), Some(r)) => (*g, *r),
        _ => return Err("no gap table in mimo-rate output".into()),
    };
    let expected = ratio_db / (10.0 * 2f64.log10());
    ensure((gap - expected).abs() < 0.1, format!("repo gap {gap} vs log2 ratio {expected}"))?;
    let band = if (gap - 7.2).abs() <= 1.5 { "inside" } else { "outside" };
    Ok(format!(
        "synthetic 2^2.5 ratio: gap {synthetic:.3} (±0.1); repo calibration: gap {gap:.3} vs log2(SNR ratio) {expected:.3} (±0.1); advisory band 7.2±1.5: {band}"
    ))
}

fn finite_difference_crb(g: &ArrayGeometry, theta: f64, snapshots: usize, snr: f64) -> f64 {
    let alpha = C64::from_polar(snr.sqrt(), 0.3);
    let h = 1e-6;
    let d_theta = (steering_vector(g, theta + h) - steering_vector(g, theta - h)) * alpha / C64::from(2.0 * h);
    let a = steering_vector(g, theta);
    let derivs = [d_theta, a.clone(), a * C64::i()];
    let fim = Matrix3::from_fn(|i, j| 2.0 * (derivs[i].adjoint() * &derivs[j])[(0, 0)].re) * snapshots as f64;
    let nuis = fim.fixed_view::<2, 2>(1, 1).into_owned();
    let cross = fim.fixed_view::<1, 2>(0, 1).into_owned();
    let inv = nuis.try_inverse().unwrap_or_else(nalgebra::Matrix2::zeros);
    1.0 / (fim[(0, 0)] - (cross * inv * cross.transpose())[(0, 0)])
}

fn doa() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let g = ArrayGeometry {
            elements: rng.random_range(2..12),
            spacing_wavelengths: rng.random_range(0.2..0.5),
            layout: ArrayLayout::Ula,
        };
        let theta = rng.random_range(-1.2..1.2);
        let t = rng.random_range(1..200);
        let snr = 10f64.powf(rng.random_range(-1.0..3.0));
        let closed = doa_crb(&g, theta, t, snr).map_err(|e| e.to_string())?;
        worst = worst.max((closed / finite_difference_crb(&g, theta, t, snr) - 1.0).abs());
    }
    ensure(worst < 1e-6, format!("CRB vs Fisher {worst:.2e}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().to_str().unwrap_or_default();
    raqr(&["doa-mse", "--set", "doa.snr_db=[15.0]", "--set", "doa.trials=500", "--out", out])?;
    let mse_text = read(dir.path(), "doa_mse.csv")?;
    let (mse, crb) = (column(&mse_text, "mse_rad2"), column(&mse_text, "crb_rad2"));
    let ratio_db = 10.0 * (mse[0] / crb[0]).log10();
    ensure(ratio_db.abs() < 3.0, format!("MSE/CRB {ratio_db:.2} dB"))?;

    let g = ArrayGeometry::default();
    let ratio100 = doa_crb(&g, 0.3, 64, 1.0).map_err(|e| e.to_string())? / doa_crb(&g, 0.3, 64, 100.0).map_err(|e| e.to_string())?;
    ensure((ratio100 / 100.0 - 1.0).abs() < 1e-12, format!("100× SNR gives CRB ratio {ratio100}"))?;

    raqr(&["doa-crb", "--out", out])?;
    let r = read(dir.path(), "doa_crb_raqr.csv")?;
    let c = read(dir.path(), "doa_crb_conventional.csv")?;
    let (cr, cc) = (column(&r, "crb_rad2"), column(&c, "crb_rad2"));
    let (sr, sc) = (column(&r, "snr_db"), column(&c, "snr_db"));
    let mut worst_ratio = 0.0f64;
    for i in 0..cr.len() {
        let snr_ratio = 10f64.powf((sr[i] - sc[i]) / 10.0);
        worst_ratio = worst_ratio.max((cc[i] / cr[i] / snr_ratio - 1.0).abs());
    }
    ensure(!cr.is_empty() && worst_ratio < 1e-9, format!("CRB ratio vs SNR ratio {worst_ratio:.2e}"))?;
    Ok(format!(
        "CRB vs Fisher {worst:.1e} (< 1e-6); ML MSE/CRB at 15 dB {ratio_db:+.2} dB (±3); 100× SNR → CRB ×{ratio100:.3}; repo CRB ratio {:.1} = SNR ratio (dev {worst_ratio:.1e})",
        cc[0] / cr[0]
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: &[(&str, &[&str])] = &[
        ("stark-map", &["--set", "stark_map.field_points=41"]),
        ("eit-spectrum", &[]),
        ("ats-readout", &[]),
        ("sensitivity", &[]),
        ("siso-ber", &["--set", "siso.bits_per_point=20000"]),
        ("mimo-rate", &["--set", "mimo.draws=2000"]),
        ("doa-crb", &[]),
        ("doa-mse", &["--set", "doa.trials=60", "--set", "doa.snr_db=[0.0, 10.0]"]),
    ];
    let mut files = 0;
    for (cmd, extra) in runs {
        let mut outputs = Vec::new();
        for (tag, threads) in [("a", "1"), ("b", "1"), ("c", "0")] {
            let out = dir.path().join(format!("{cmd}-{tag}"));
            let mut args = vec![*cmd, "--seed", "11", "--threads", threads, "--out", out.to_str().unwrap_or_default()];
            args.extend_from_slice(extra);
            raqr(&args)?;
            outputs.push(out);
        }
        let replay = dir.path().join(format!("{cmd}-replay"));
        raqr(&[
            "--replay",
            outputs[0].join("manifest.json").to_str().unwrap_or_default(),
            "--out",
            replay.to_str().unwrap_or_default(),
        ])?;
        outputs.push(replay);
        let mut names: Vec<String> = std::fs::read_dir(&outputs[0])
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n != "manifest.json")
            .collect();
        names.sort();
        for name in &names {
            let first = std::fs::read(outputs[0].join(name)).map_err(|e| e.to_string())?;
            for other in &outputs[1..] {
                let again = std::fs::read(other.join(name)).map_err(|e| format!("{name}: {e}"))?;
                ensure(first == again, format!("{cmd}: {name} differs in {}", other.display()))?;
            }
            files += 1;
        }
    }
    Ok(format!(
        "{} commands, {files} data files byte-identical across repeat, thread count and manifest replay",
        runs.len()
    ))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "transition frequencies", budget_s: Some(1.0), check: transition_frequencies },
        Criterion { id: 2, name: "hydrogen limit", budget_s: Some(10.0), check: hydrogen_suite },
        Criterion { id: 3, name: "Stark map", budget_s: Some(60.0), check: stark_properties },
        Criterion { id: 4, name: "EIT/ATS scenarios", budget_s: Some(30.0), check: eit_ats_suite },
        Criterion { id: 5, name: "density-matrix invariants", budget_s: Some(60.0), check: density_matrix_invariants },
        Criterion { id: 6, name: "SQL scaling", budget_s: None, check: sql_scaling },
        Criterion { id: 7, name: "sensitivity anchors", budget_s: None, check: sensitivity_anchors },
        Criterion { id: 8, name: "SISO BER", budget_s: Some(120.0), check: siso_ber },
        Criterion { id: 9, name: "MIMO rate gap", budget_s: None, check: mimo_gap },
        Criterion { id: 10, name: "DOA", budget_s: Some(120.0), check: doa },
        Criterion { id: 11, name: "determinism", budget_s: None, check: determinism },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let secs = start.elapsed().as_secs_f64();
        let over_budget = c.budget_s.is_some_and(|b| secs > b);
        let timing = match c.budget_s {
            Some(b) => format!("{secs:.2} s of {b:.0} s"),
            None => format!("{secs:.2} s"),
        };
        let (pass, detail) = match result {
            Ok(d) if over_budget => (false, format!("{d}; over runtime budget")),
            Ok(d) => (true, d),
            Err(e) => (false, e),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} [{:>2}] {}: {detail} [{timing}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
