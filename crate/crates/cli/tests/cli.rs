use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_raqr");

fn raqr(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let o = raqr(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert!(o.stdout.is_empty());
    assert_eq!(raqr(&[]).status.code(), Some(1));
    assert_eq!(raqr(&["--help"]).status.code(), Some(0));
}

#[test]
fn dump_config_round_trips_through_loader() {
    let dir = tempfile::tempdir().unwrap();
    let first = raqr(&["dump-config"]);
    assert_eq!(first.status.code(), Some(0));
    let path = dir.path().join("defaults.toml");
    std::fs::write(&path, &first.stdout).unwrap();
    let second = raqr(&["--config", path.to_str().unwrap(), "dump-config"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let empty = dir.path().join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(raqr(&["--config", empty.to_str().unwrap(), "dump-config"]).stdout, first.stdout);
}

#[test]
fn misspelled_and_mis_dimensioned_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[channel]\npathloss_exponant = 3.8\n").unwrap();
    let o = raqr(&["--config", bad.to_str().unwrap(), "siso-ber"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pathloss_exponant"));

    let o = raqr(&["--set", "channel.distance_m=\"3 GHz\"", "dump-config"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("length"));

    let o = raqr(&["--set", "channel.distance_m=\"0.5 km\"", "dump-config"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("distance_m = 500.0"));
}

#[test]
fn numerical_failure_exits_with_two() {
    // a zero LO field sits on the symmetric flat point of T(ℰ)
    let o = raqr(&["--set", "receiver.lo_field_vcm=0.0", "sensitivity"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn scenario_three_has_two_transmission_maxima() {
    let o = raqr(&["eit-spectrum", "--scenario", "iii"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("detuning_Hz,transmission,re_chi,im_chi"));
    let (x, t): (Vec<f64>, Vec<f64>) = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .unzip();
    let peaks = raqr_core::eit::find_peaks(&x, &t, 0.1);
    assert_eq!(peaks.len(), 2);
}

#[test]
fn siso_with_same_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = raqr(&[
            "siso-ber",
            "--seed",
            "7",
            "--threads",
            threads,
            "--set",
            "siso.bits_per_point=20000",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        (read(&out.join("siso_ber_raqr.csv")), read(&out.join("siso_ber_conventional.csv")))
    };
    let a = run("a", "1");
    assert_eq!(a, run("b", "1"));
    assert_eq!(a, run("c", "0"));
}

#[test]
fn manifest_records_overrides_and_replays_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = raqr(&[
        "mimo-rate",
        "--set",
        "channel.pathloss_exponent=3.8",
        "--set",
        "mimo.draws=2000",
        "--format",
        "json",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_str(&read(&first.join("manifest.json"))).unwrap();
    assert_eq!(manifest["resolved_config"]["channel"]["pathloss_exponent"], 3.8);
    assert_eq!(manifest["resolved_config"]["mimo"]["draws"], 2000);
    assert_eq!(manifest["status"], "ok");
    assert_eq!(manifest["command"], "mimo-rate");
    assert_eq!(manifest["output_paths"].as_array().unwrap().len(), 3);
    assert!(manifest["finished"].is_string());

    let second = dir.path().join("second");
    let o = raqr(&[
        "--replay",
        first.join("manifest.json").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["mimo_rate_raqr.json", "mimo_rate_conventional.json", "mimo_rate_gap.json"] {
        assert_eq!(read(&first.join(f)), read(&second.join(f)), "{f}");
    }
}

#[test]
fn failed_run_still_finalizes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqr(&["--set", "receiver.lo_field_vcm=0.0", "siso-ber", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let manifest: serde_json::Value = serde_json::from_str(&read(&dir.path().join("manifest.json"))).unwrap();
    assert!(manifest["status"].as_str().unwrap().starts_with("failed"));
    assert!(manifest["wall_time_s"].is_number());
}

#[test]
fn outputs_stay_inside_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = raqr(&["doa-crb", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, vec!["run"]);
    let mut inner: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    inner.sort();
    assert_eq!(inner, vec!["doa_crb_conventional.csv", "doa_crb_raqr.csv", "manifest.json"]);
    let header = read(&out.join("doa_crb_raqr.csv"));
    assert!(header.starts_with("tx_power_dbm,crb_rad2,stderr,snr_db\n"));
}
