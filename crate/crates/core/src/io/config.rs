//! Scenario configuration: TOML with a unit on every physical value.
//!
//! A config may name a `preset`; its own keys are then merged over the
//! preset. Validation reports every offending key at once.

use crate::error::{Error, Result};
use crate::quantity::units::{parse_quantity, Dimension};
use crate::quantity::Grid1D;
use serde::{Deserialize, Serialize};
use std::path::Path;
use toml::{Table, Value};

pub const PRESETS: [(&str, &str); 4] = [
    ("ring", include_str!("../../presets/ring.toml")),
    ("ring-table1", include_str!("../../presets/ring-table1.toml")),
    ("shin-metiu-1.5", include_str!("../../presets/shin-metiu-1.5.toml")),
    ("shin-metiu-1.75", include_str!("../../presets/shin-metiu-1.75.toml")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    QuantumRing,
    ShinMetiu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub hbar_omega0: String,
    pub v0: String,
    pub width: String,
    pub effective_mass: String,
    pub grid_points: usize,
    pub grid_spacing: String,
    pub stencil_order: usize,
    pub basis_states: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShinMetiuSection {
    pub separation: String,
    pub nuclear_mass: String,
    pub charge: f64,
    pub softening: String,
    pub fixed_softening: String,
    pub electron_points: usize,
    pub electron_spacing: String,
    pub nuclear_points: usize,
    pub nuclear_spacing: String,
    pub stencil_order: usize,
    pub scan_stride: usize,
    pub adiabatic_states: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonSection {
    pub hbar_omega: String,
    pub lambda: String,
    pub polarization: Vec<f64>,
    pub normalize_polarization: bool,
    pub fock_size: usize,
    pub q_points: usize,
    pub q_spacing: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub exact_states: usize,
    pub tolerance: f64,
    pub cbo_surfaces: usize,
    pub vib_states: usize,
    pub include_dboc: bool,
    pub track_levels: usize,
    pub resource_cap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub output: String,
    pub lambdas: Vec<String>,
    pub sweep_from: String,
    pub sweep_to: String,
    pub sweep_points: usize,
    pub dt: String,
    pub n_steps: usize,
    pub stride: usize,
    pub mean_photons: f64,
    pub coherent_phase: f64,
    pub krylov_dim: usize,
    pub keep_states: bool,
}

/// Config as written, with physical values still as unit strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shin_metiu: Option<ShinMetiuSection>,
    pub photon: PhotonSection,
    pub solver: SolverSection,
    pub run: RunSection,
}

fn schema(section: &str) -> Option<&'static [&'static str]> {
    Some(match section {
        "ring" => &["hbar_omega0", "v0", "width", "effective_mass", "grid_points", "grid_spacing", "stencil_order", "basis_states"],
        "shin_metiu" => &[
            "separation",
            "nuclear_mass",
            "charge",
            "softening",
            "fixed_softening",
            "electron_points",
            "electron_spacing",
            "nuclear_points",
            "nuclear_spacing",
            "stencil_order",
            "scan_stride",
            "adiabatic_states",
        ],
        "photon" => &["hbar_omega", "lambda", "polarization", "normalize_polarization", "fock_size", "q_points", "q_spacing"],
        "solver" => &["exact_states", "tolerance", "cbo_surfaces", "vib_states", "include_dboc", "track_levels", "resource_cap"],
        "run" => &[
            "output",
            "lambdas",
            "sweep_from",
            "sweep_to",
            "sweep_points",
            "dt",
            "n_steps",
            "stride",
            "mean_photons",
            "coherent_phase",
            "krylov_dim",
            "keep_states",
        ],
        _ => return None,
    })
}

/// Report keys outside the schema and drop them, so the remaining values
/// can still be checked.
fn take_unknown_keys(t: &mut Table) -> Vec<String> {
    let mut errs = Vec::new();
    let mut drop = Vec::new();
    for (k, v) in t.iter_mut() {
        match (k.as_str(), v) {
            ("scenario" | "preset", _) => {}
            (s, Value::Table(inner)) => match schema(s) {
                Some(keys) => {
                    let bad: Vec<String> = inner.keys().filter(|ik| !keys.contains(&ik.as_str())).cloned().collect();
                    for ik in bad {
                        errs.push(format!("{s}.{ik}: unknown key"));
                        inner.remove(&ik);
                    }
                }
                None => {
                    errs.push(format!("{s}: unknown section"));
                    drop.push(k.clone());
                }
            },
            (s, _) => {
                errs.push(format!("{s}: unknown key"));
                drop.push(k.clone());
            }
        }
    }
    for k in drop {
        t.remove(&k);
    }
    errs
}

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

pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Config(vec![format!("preset: unknown preset `{name}`")]))
}

impl ScenarioConfig {
    pub fn preset(name: &str) -> Result<Self> {
        Self::from_toml_str(preset_text(name)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut table: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(vec![e.to_string()]))?;
        let mut errs = take_unknown_keys(&mut table);
        if let Some(p) = table.remove("preset") {
            let name = p.as_str().unwrap_or_default().to_string();
            match preset_text(&name) {
                Ok(t) => {
                    let mut base: Table = t.parse().expect("presets are valid TOML");
                    merge(&mut base, table);
                    table = base;
                }
                Err(Error::Config(e)) => errs.extend(e),
                Err(e) => return Err(e),
            }
        }
        let cfg: ScenarioConfig = match Value::Table(table).try_into() {
            Ok(c) => c,
            Err(e) => {
                errs.push(e.to_string());
                return Err(Error::Config(errs));
            }
        };
        match cfg.resolve() {
            Err(Error::Config(more)) => errs.extend(more),
            Err(e) => return Err(e),
            Ok(_) => {}
        }
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errs))
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Convert every physical value to atomic units, collecting all failures.
    pub fn resolve(&self) -> Result<Resolved> {
        let mut errs = Vec::new();
        let mut table = Vec::new();
        let mut q = |key: &str, text: &str, dim: Dimension| -> f64 {
            match parse_quantity(text, dim) {
                Ok(v) => {
                    table.push(ParameterRow { key: key.into(), given: text.into(), internal: v });
                    v
                }
                Err(e) => {
                    errs.push(format!("{key}: {e}"));
                    f64::NAN
                }
            }
        };
        use Dimension::*;
        let ring = self.ring.as_ref().map(|r| RingParams {
            hbar_omega0: q("ring.hbar_omega0", &r.hbar_omega0, Energy),
            v0: q("ring.v0", &r.v0, Energy),
            width: q("ring.width", &r.width, Length),
            mass: q("ring.effective_mass", &r.effective_mass, Mass),
            grid_points: r.grid_points,
            grid_spacing: q("ring.grid_spacing", &r.grid_spacing, Length),
            stencil_order: r.stencil_order,
            basis_states: r.basis_states,
        });
        let shin_metiu = self.shin_metiu.as_ref().map(|s| ShinMetiuParams {
            separation: q("shin_metiu.separation", &s.separation, Length),
            nuclear_mass: q("shin_metiu.nuclear_mass", &s.nuclear_mass, Mass),
            charge: s.charge,
            softening: q("shin_metiu.softening", &s.softening, Length),
            fixed_softening: q("shin_metiu.fixed_softening", &s.fixed_softening, Length),
            electron_points: s.electron_points,
            electron_spacing: q("shin_metiu.electron_spacing", &s.electron_spacing, Length),
            nuclear_points: s.nuclear_points,
            nuclear_spacing: q("shin_metiu.nuclear_spacing", &s.nuclear_spacing, Length),
            stencil_order: s.stencil_order,
            scan_stride: s.scan_stride,
            adiabatic_states: s.adiabatic_states,
        });
        let p = &self.photon;
        let photon = PhotonParams {
            omega: q("photon.hbar_omega", &p.hbar_omega, Energy),
            lambda: q("photon.lambda", &p.lambda, Coupling),
            polarization: p.polarization.clone(),
            normalize: p.normalize_polarization,
            fock_size: p.fock_size,
            q_points: p.q_points,
            q_spacing: q("photon.q_spacing", &p.q_spacing, PhotonCoordinate),
        };
        let r = &self.run;
        let lambdas: Vec<f64> =
            r.lambdas.iter().enumerate().map(|(i, l)| q(&format!("run.lambdas[{i}]"), l, Coupling)).collect();
        let run = RunParams {
            lambdas,
            sweep_from: q("run.sweep_from", &r.sweep_from, Coupling),
            sweep_to: q("run.sweep_to", &r.sweep_to, Coupling),
            sweep_points: r.sweep_points,
            dt: q("run.dt", &r.dt, Time),
            n_steps: r.n_steps,
            stride: r.stride,
            mean_photons: r.mean_photons,
            coherent_phase: r.coherent_phase,
            krylov_dim: r.krylov_dim,
            keep_states: r.keep_states,
            output: r.output.clone(),
        };
        match (self.scenario, &ring, &shin_metiu) {
            (ScenarioKind::QuantumRing, None, _) => errs.push("ring: section required for scenario quantum_ring".into()),
            (ScenarioKind::ShinMetiu, _, None) => errs.push("shin_metiu: section required for scenario shin_metiu".into()),
            _ => {}
        }
        if !matches!(p.polarization.len(), 1 | 2) {
            errs.push("photon.polarization: needs 1 or 2 components".into());
        }
        if p.q_points % 2 == 0 {
            errs.push("photon.q_points: must be odd so that q = 0 is a grid point".into());
        }
        if p.fock_size == 0 {
            errs.push("photon.fock_size: must be positive".into());
        }
        if self.solver.exact_states == 0 || self.solver.cbo_surfaces == 0 || self.solver.vib_states == 0 {
            errs.push("solver: state counts must be positive".into());
        }
        if r.stride == 0 {
            errs.push("run.stride: must be positive".into());
        }
        if r.sweep_points < 2 {
            errs.push("run.sweep_points: needs at least 2 points".into());
        }
        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        Ok(Resolved {
            scenario: self.scenario,
            ring,
            shin_metiu,
            photon,
            solver: self.solver.clone(),
            run,
            parameters: table,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParameterRow {
    pub key: String,
    pub given: String,
    /// Value in Hartree atomic units.
    pub internal: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingParams {
    pub hbar_omega0: f64,
    pub v0: f64,
    pub width: f64,
    pub mass: f64,
    pub grid_points: usize,
    pub grid_spacing: f64,
    pub stencil_order: usize,
    pub basis_states: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShinMetiuParams {
    pub separation: f64,
    pub nuclear_mass: f64,
    pub charge: f64,
    pub softening: f64,
    pub fixed_softening: f64,
    pub electron_points: usize,
    pub electron_spacing: f64,
    pub nuclear_points: usize,
    pub nuclear_spacing: f64,
    pub stencil_order: usize,
    pub scan_stride: usize,
    pub adiabatic_states: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhotonParams {
    pub omega: f64,
    pub lambda: f64,
    pub polarization: Vec<f64>,
    pub normalize: bool,
    pub fock_size: usize,
    pub q_points: usize,
    pub q_spacing: f64,
}

impl PhotonParams {
    pub fn q_grid(&self) -> Result<Grid1D> {
        Grid1D::centered(self.q_points, self.q_spacing)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunParams {
    pub lambdas: Vec<f64>,
    pub sweep_from: f64,
    pub sweep_to: f64,
    pub sweep_points: usize,
    pub dt: f64,
    pub n_steps: usize,
    pub stride: usize,
    pub mean_photons: f64,
    pub coherent_phase: f64,
    pub krylov_dim: usize,
    pub keep_states: bool,
    pub output: String,
}

/// Config with all physical values in atomic units.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub scenario: ScenarioKind,
    pub ring: Option<RingParams>,
    pub shin_metiu: Option<ShinMetiuParams>,
    pub photon: PhotonParams,
    pub solver: SolverSection,
    pub run: RunParams,
    pub parameters: Vec<ParameterRow>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::units::{from_mev, DALTON_ME};

    #[test]
    fn presets_parse_and_carry_reference_values() {
        for (name, _) in PRESETS {
            ScenarioConfig::preset(name).unwrap();
        }
        let r = ScenarioConfig::preset("ring").unwrap().resolve().unwrap();
        let ring = r.ring.unwrap();
        assert!((ring.hbar_omega0 - from_mev(10.0)).abs() < 1e-15);
        assert!((ring.v0 - from_mev(200.0)).abs() < 1e-15);
        assert_eq!((ring.grid_points, ring.stencil_order), (127, 2));
        assert!((ring.mass - 0.067).abs() < 1e-15);
        assert!((r.photon.omega - from_mev(1.41)).abs() < 1e-15);
        assert_eq!(r.photon.fock_size, 41);
        assert!((r.run.dt * crate::quantity::units::AU_TIME_FS - 0.146).abs() < 1e-12);
        assert_eq!(r.run.n_steps, 160000);
        let s = ScenarioConfig::preset("shin-metiu-1.75").unwrap().resolve().unwrap();
        let sm = s.shin_metiu.unwrap();
        assert!((sm.nuclear_mass - 1.00782503207 * DALTON_ME).abs() < 1e-9);
        assert!((s.photon.omega - from_mev(69.3)).abs() < 1e-15);
        assert_eq!((sm.electron_points, sm.nuclear_points), (140, 280));
    }

    #[test]
    fn every_bad_key_is_reported() {
        let text = r#"
            preset = "ring"
            colour = 3
            [photon]
            hbar_omega = "1.41"
            lambda = "0.1 furlongs"
            wobble = true
            [cavity]
            x = 1
        "#;
        let Err(Error::Config(errs)) = ScenarioConfig::from_toml_str(text) else { panic!("expected config error") };
        assert!(errs.iter().any(|e| e.starts_with("colour")));
        assert!(errs.iter().any(|e| e.starts_with("photon.wobble")));
        assert!(errs.iter().any(|e| e.starts_with("cavity")));
        let text = "preset = \"ring\"\n[photon]\nhbar_omega = \"1.41\"\nlambda = \"0.1 furlongs\"\n";
        let Err(Error::Config(errs)) = ScenarioConfig::from_toml_str(text) else { panic!("expected config error") };
        assert_eq!(errs.len(), 2, "{errs:?}");
    }

    #[test]
    fn override_merges_over_preset() {
        let c = ScenarioConfig::from_toml_str("preset = \"ring\"\n[photon]\nlambda = \"0.05 meV^(1/2)/nm\"\n").unwrap();
        assert_eq!(c.photon.lambda, "0.05 meV^(1/2)/nm");
        assert_eq!(c.photon.fock_size, 41);
    }

    #[test]
    fn echo_reparses_to_same_config() {
        for (name, _) in PRESETS {
            let c = ScenarioConfig::preset(name).unwrap();
            assert_eq!(ScenarioConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
        }
    }
}
