//! Run configuration: JSON schema, defaults reproducing the reference
//! scattering setup, and dotted-path overrides.

use crate::error::{Result, SolverError};
use crate::exact::GreensParams;
use crate::formulations::MaterialParams;
use crate::mesh::{build_lshape_mesh, StructuredMesh};
use crate::pml::{Formulation, StretchProfile};
use crate::spaces::SpaceSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshConfig {
    pub n_int: usize,
    pub n_pml: usize,
    pub l: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub hole: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmlConfig {
    #[serde(rename = "C")]
    pub c: f64,
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialConfig {
    pub eps0: f64,
    pub mu0: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub mu: f64,
    pub rho0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct OutputConfig {
    #[serde(default)]
    pub report_path: Option<String>,
    #[serde(default)]
    pub field_samples_path: Option<String>,
    #[serde(default = "default_sample_grid")]
    pub sample_grid: usize,
}

fn default_sample_grid() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub physics: Formulation,
    pub omega: f64,
    pub p: usize,
    pub dp: usize,
    pub mesh: MeshConfig,
    pub pml: PmlConfig,
    pub materials: MaterialConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            physics: Formulation::AcousticsA,
            omega: 6.0 * std::f64::consts::PI,
            p: 4,
            dp: 1,
            mesh: MeshConfig {
                n_int: 8,
                n_pml: 4,
                l: 2.0,
                big_l: 3.0,
                hole: 1.0,
            },
            pml: PmlConfig { c: 5.0, n: 2 },
            materials: MaterialConfig {
                eps0: 1.0,
                mu0: 1.0,
                sigma: 0.0,
                lambda: 2.0,
                mu: 1.0,
                rho0: 1.0,
            },
            outputs: OutputConfig {
                report_path: None,
                field_samples_path: None,
                sample_grid: 64,
            },
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p < 1 {
            return Err(SolverError::Config("p must be >= 1".into()));
        }
        if self.dp < 1 {
            return Err(SolverError::Config("dp must be >= 1".into()));
        }
        if !(self.omega > 0.0) {
            return Err(SolverError::Config("omega must be positive".into()));
        }
        if self.outputs.sample_grid == 0 {
            return Err(SolverError::Config("sample_grid must be >= 1".into()));
        }
        Ok(())
    }

    pub fn build_mesh(&self) -> Result<StructuredMesh> {
        build_lshape_mesh(
            self.mesh.n_int,
            self.mesh.n_pml,
            self.mesh.l,
            self.mesh.big_l,
            self.mesh.hole,
        )
    }

    pub fn stretch_profile(&self) -> Result<StretchProfile> {
        if self.pml.c == 0.0 {
            Ok(StretchProfile::identity(
                self.mesh.l,
                self.mesh.big_l,
                self.omega,
            ))
        } else {
            StretchProfile::new(
                self.mesh.l,
                self.mesh.big_l,
                self.pml.c,
                self.pml.n,
                self.omega,
            )
        }
    }

    pub fn material_params(&self) -> MaterialParams {
        MaterialParams {
            omega: self.omega,
            eps0: self.materials.eps0,
            mu0: self.materials.mu0,
            sigma: self.materials.sigma,
            lambda: self.materials.lambda,
            mu_lame: self.materials.mu,
            rho0: self.materials.rho0,
        }
    }

    pub fn greens_params(&self) -> GreensParams {
        GreensParams {
            omega: self.omega,
            eps0: self.materials.eps0,
            mu0: self.materials.mu0,
            sigma: self.materials.sigma,
            lambda: self.materials.lambda,
            mu_lame: self.materials.mu,
            rho0: self.materials.rho0,
        }
    }

    pub fn space_spec(&self) -> SpaceSpec {
        SpaceSpec::new(self.p, self.dp)
    }

    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&std::path::Path>, overrides: &[String]) -> Result<RunConfig> {
        let mut value = match path {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            None => serde_json::to_value(RunConfig::default())?,
        };
        apply_overrides(&mut value, overrides)?;
        let cfg: RunConfig = serde_json::from_value(value)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Applies `key.path=value` overrides onto a JSON config value. The value
/// side is parsed as JSON when possible, falling back to a plain string
/// (so `physics=maxwell2d` works without quoting).
pub fn apply_overrides(value: &mut serde_json::Value, overrides: &[String]) -> Result<()> {
    for ov in overrides {
        let (path, raw) = ov.split_once('=').ok_or_else(|| {
            SolverError::Config(format!("override '{ov}' is not of the form key=value"))
        })?;
        let parsed: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let segments: Vec<&str> = path.split('.').collect();
        let (last, parents) = segments.split_last().expect("split_once gave nonempty path");
        let mut cursor = &mut *value;
        for seg in parents {
            cursor = cursor
                .as_object_mut()
                .ok_or_else(|| {
                    SolverError::Config(format!(
                        "override path '{path}' does not address an object"
                    ))
                })?
                .entry(seg.to_string())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
        }
        cursor
            .as_object_mut()
            .ok_or_else(|| {
                SolverError::Config(format!("override path '{path}' does not address an object"))
            })?
            .insert(last.to_string(), parsed);
    }
    Ok(())
}
