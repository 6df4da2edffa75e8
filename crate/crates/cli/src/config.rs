//! Layered experiment configuration: built-in defaults, then an optional
//! TOML file, then command-line flags and `--set key=value` overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use raqr_core::atomic::{z_matrix_element, AtomSpecies, RydbergState, SpeciesName};
use raqr_core::eit::LadderScheme;
use raqr_core::link::{ArrayGeometry, ChannelConfig, DoaSetup, Fading, Modulation};
use raqr_core::receiver::{ConventionalReference, SuperhetConfig};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::units;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Probe beam only.
    I,
    /// Probe and coupling beams.
    Ii,
    /// Probe, coupling and RF field.
    Iii,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSection {
    pub name: SpeciesName,
    /// Optional species data file replacing the built-in table.
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarkSection {
    pub n: u32,
    pub l: u32,
    pub j: f64,
    pub mj: f64,
    /// Basis half-window; 0 selects one local level spacing.
    pub energy_window_ghz: f64,
    pub field_max_vcm: f64,
    pub field_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EitSection {
    pub scenario: Scenario,
    pub doppler: bool,
    pub velocity_classes: usize,
    pub rf_field_vcm: f64,
    pub detuning_half_span_hz: f64,
    pub points: usize,
    pub scheme: LadderScheme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtsSection {
    pub rf_fields_vcm: Vec<f64>,
    pub detuning_half_span_hz: f64,
    pub points: usize,
    pub min_prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConventionalSection {
    pub temperature_k: f64,
    pub noise_figure_db: f64,
    pub reference: ConventionalReference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub distance_m: f64,
    pub pathloss_exponent: f64,
    pub fading: Fading,
    pub carrier_hz: f64,
    pub tx_power_dbm: Vec<f64>,
    pub reference_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SisoSection {
    pub modulation: Modulation,
    pub bits_per_point: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MimoSection {
    pub draws: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoaSection {
    pub theta_rad: f64,
    pub snapshots: usize,
    pub trials: u32,
    /// Per-element SNR grid for `doa-mse`.
    pub snr_db: Vec<f64>,
}

/// The complete resolved configuration of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Worker threads; 0 lets the runtime choose.
    pub threads: usize,
    pub format: Format,
    /// Optional receiver config file; when set it replaces `[receiver]`.
    pub receiver_file: String,
    pub species: SpeciesSection,
    pub stark_map: StarkSection,
    pub eit: EitSection,
    pub ats: AtsSection,
    pub receiver: SuperhetConfig,
    pub conventional: ConventionalSection,
    pub channel: ChannelSection,
    pub siso: SisoSection,
    pub array: ArrayGeometry,
    pub mimo: MimoSection,
    pub doa: DoaSection,
}

fn core_err(e: raqr_core::Error) -> ConfigError {
    ConfigError(e.to_string())
}

impl Config {
    pub fn defaults() -> Result<Self> {
        let cs = AtomSpecies::cs133();
        let upper = RydbergState::new(47, 2, 2.5, 0.5).map_err(core_err)?;
        let rf = RydbergState::new(48, 1, 1.5, 0.5).map_err(core_err)?;
        let d34 = z_matrix_element(&cs, &upper, &rf).map_err(core_err)?.abs();
        let channel = ChannelConfig::default();
        let doa = DoaSetup::default();
        Ok(Self {
            seed: 1,
            threads: 0,
            format: Format::Csv,
            receiver_file: String::new(),
            species: SpeciesSection {
                name: SpeciesName::Cs133,
                file: String::new(),
            },
            stark_map: StarkSection {
                n: 30,
                l: 2,
                j: 2.5,
                mj: 0.5,
                energy_window_ghz: 0.0,
                field_max_vcm: 100.0,
                field_points: 201,
            },
            eit: EitSection {
                scenario: Scenario::Iii,
                doppler: false,
                velocity_classes: 2001,
                rf_field_vcm: 0.005,
                detuning_half_span_hz: 3e7,
                points: 1201,
                scheme: LadderScheme::for_species(&cs, d34),
            },
            ats: AtsSection {
                rf_fields_vcm: vec![0.006, 0.008, 0.01, 0.012, 0.014],
                detuning_half_span_hz: 4e7,
                points: 1601,
                min_prominence: 0.1,
            },
            receiver: SuperhetConfig::link_reference_cs47d().map_err(core_err)?,
            conventional: ConventionalSection {
                temperature_k: 290.0,
                noise_figure_db: 0.0,
                reference: ConventionalReference::default(),
            },
            channel: ChannelSection {
                distance_m: channel.distance_m,
                pathloss_exponent: channel.pathloss_exponent,
                fading: channel.fading,
                carrier_hz: channel.carrier_hz,
                tx_power_dbm: channel.tx_power_dbm,
                reference_gain: channel.reference_gain,
            },
            siso: SisoSection {
                modulation: Modulation::Qpsk,
                bits_per_point: 100_000,
            },
            array: ArrayGeometry::default(),
            mimo: MimoSection { draws: 10_000 },
            doa: DoaSection {
                theta_rad: doa.theta_rad,
                snapshots: doa.snapshots,
                trials: doa.trials,
                snr_db: (0..=12).map(|k| -10.0 + 2.5 * k as f64).collect(),
            },
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn channel_config(&self) -> ChannelConfig {
        ChannelConfig {
            distance_m: self.channel.distance_m,
            pathloss_exponent: self.channel.pathloss_exponent,
            fading: self.channel.fading,
            carrier_hz: self.channel.carrier_hz,
            tx_power_dbm: self.channel.tx_power_dbm.clone(),
            seed: self.seed,
            reference_gain: self.channel.reference_gain,
        }
    }

    pub fn doa_setup(&self) -> DoaSetup {
        DoaSetup {
            geometry: self.array,
            theta_rad: self.doa.theta_rad,
            snapshots: self.doa.snapshots,
            trials: self.doa.trials,
            seed: self.seed,
        }
    }

    pub fn species(&self) -> std::result::Result<AtomSpecies, raqr_core::Error> {
        if self.species.file.is_empty() {
            Ok(AtomSpecies::builtin(self.species.name))
        } else {
            AtomSpecies::load(&self.species.file)
        }
    }
}

/// Recursively overlays `over` onto `base`. Tables merge key by key; any
/// other value replaces the base value.
fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Replaces unit-tagged strings by numbers in the key's own unit.
fn normalize_units(table: &mut Table, path: &str) -> Result<()> {
    for (k, v) in table.iter_mut() {
        let full = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
        match v {
            Value::Table(t) => normalize_units(t, &full)?,
            Value::String(s) if units::key_unit(k).is_some() => {
                *v = Value::Float(units::convert(k, s).map_err(|e| ConfigError(format!("{full}: {e}")))?);
            }
            Value::Array(items) if units::key_unit(k).is_some() => {
                for item in items.iter_mut() {
                    match item {
                        Value::String(s) => {
                            *item =
                                Value::Float(units::convert(k, s).map_err(|e| ConfigError(format!("{full}: {e}")))?);
                        }
                        Value::Integer(i) => *item = Value::Float(*i as f64),
                        _ => {}
                    }
                }
            }
            Value::Integer(i) if units::key_unit(k).is_some() => *v = Value::Float(*i as f64),
            Value::Array(items) => {
                for item in items.iter_mut() {
                    if let Value::Table(t) = item {
                        normalize_units(t, &full)?;
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Parses the right-hand side of `--set key=value` as a TOML value, falling
/// back to a bare string.
fn parse_override_value(text: &str) -> Value {
    let doc = format!("v = {text}");
    match doc.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or(Value::String(text.to_string())),
        Err(_) => Value::String(text.to_string()),
    }
}

fn apply_override(root: &mut Table, assignment: &str) -> Result<()> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError(format!("malformed key `{key}`")));
    }
    let mut table = root;
    for part in &parts[..parts.len() - 1] {
        table = match table.get_mut(*part) {
            Some(Value::Table(t)) => t,
            _ => return Err(ConfigError(format!("unknown section `{part}` in `{key}`"))),
        };
    }
    let leaf = parts[parts.len() - 1];
    if !table.contains_key(leaf) && leaf != "calibration_v_cm_s" {
        return Err(ConfigError(format!("unknown key `{key}`")));
    }
    table.insert(leaf.to_string(), parse_override_value(value.trim()));
    Ok(())
}

fn read_toml(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<Table>()
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

fn resolve_relative(base: Option<&Path>, file: &str) -> PathBuf {
    let p = PathBuf::from(file);
    match base.and_then(Path::parent) {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

/// Builds the resolved configuration from defaults, an optional file and
/// ordered `key=value` overrides.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<Config> {
    let defaults = Config::defaults()?;
    let mut root: Table = Table::try_from(&defaults).map_err(|e| ConfigError(e.to_string()))?;
    if let Some(p) = path {
        let mut file = read_toml(p)?;
        normalize_units(&mut file, "")?;
        merge(&mut root, file);
    }
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    normalize_units(&mut root, "")?;

    // inline a referenced receiver file so the resolved tree is self-contained
    if let Some(Value::String(f)) = root.get("receiver_file").cloned() {
        if !f.is_empty() {
            let rpath = resolve_relative(path, &f);
            let mut rx = read_toml(&rpath)?;
            normalize_units(&mut rx, "receiver")?;
            let mut base = match root.remove("receiver") {
                Some(Value::Table(t)) => t,
                _ => Table::new(),
            };
            merge(&mut base, rx);
            root.insert("receiver".into(), Value::Table(base));
            root.insert("receiver_file".into(), Value::String(String::new()));
        }
    }
    let config: Config = Value::Table(root)
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError(e.message().to_string()))?;
    validate(&config)?;
    Ok(config)
}

/// Parses a config document directly, without layering.
pub fn parse_resolved(text: &str) -> Result<Config> {
    let mut t: Table = text.parse().map_err(|e: toml::de::Error| ConfigError(e.message().to_string()))?;
    normalize_units(&mut t, "")?;
    let c: Config = Value::Table(t)
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError(e.message().to_string()))?;
    validate(&c)?;
    Ok(c)
}

fn validate(c: &Config) -> Result<()> {
    c.channel_config().validate().map_err(core_err)?;
    c.array.validate().map_err(core_err)?;
    c.receiver.validate().map_err(core_err)?;
    c.eit.scheme.validate().map_err(core_err)?;
    if c.stark_map.field_points < 2 || !(c.stark_map.field_max_vcm > 0.0) {
        return Err(ConfigError("stark_map needs at least two field points and a positive maximum".into()));
    }
    if c.eit.points < 3 || c.ats.points < 3 {
        return Err(ConfigError("spectra need at least three detuning points".into()));
    }
    Ok(())
}

impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self> {
        parse_resolved(s)
    }
}
