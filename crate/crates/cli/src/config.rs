//! Run configuration: the JSON file schema and its resolution into library types.

use std::path::Path;

use serde::{Deserialize, Serialize};
use softcrack::{Bimaterial, CrackLoad, Inclusion, InclusionSpec, QuadratureSpec};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: Option<MaterialConfig>,
    pub load: Option<LoadConfig>,
    pub inclusion: Option<InclusionConfig>,
    pub numerics: Option<NumericsConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub mu1: f64,
    pub mu2: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum LoadKind {
    Point,
    Smooth,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadConfig {
    pub kind: LoadKind,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub force: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

/// Angles in radians. Exactly one of `nu_star` and `rigid` is given.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionConfig {
    pub d: f64,
    pub phi: f64,
    pub alpha: f64,
    pub ell_a: f64,
    pub ell_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_star: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub rigid: bool,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub truncation_radius: Option<f64>,
    pub truncation_scale: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

/// Everything a command needs, validated, with defaults filled in.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub material: MaterialConfig,
    pub load: LoadConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclusion: Option<InclusionConfig>,
    pub numerics: QuadratureSpec,
    #[serde(skip)]
    pub bimaterial: Bimaterial,
    #[serde(skip)]
    pub crack_load: CrackLoad,
    #[serde(skip)]
    pub inclusion_spec: Option<InclusionSpec>,
}

pub const DEFAULT_MATERIAL: MaterialConfig = MaterialConfig { mu1: 1.0, mu2: 1.0, kappa: 0.5 };
pub const POINT_LOAD: LoadConfig = LoadConfig { kind: LoadKind::Point, force: Some(1.0), a: Some(1.0), b: Some(0.75) };
pub const SMOOTH_LOAD: LoadConfig = LoadConfig { kind: LoadKind::Smooth, force: None, a: None, b: None };
pub const DEFAULT_INCLUSION: InclusionConfig = InclusionConfig {
    d: 1.0,
    phi: std::f64::consts::FRAC_PI_2,
    alpha: 0.0,
    ell_a: 0.1,
    ell_b: 0.05,
    nu_star: Some(5.0),
    rigid: false,
};

fn config_err(section: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{section}: {e}"))
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fills defaults (`default_load` when the file names none) and validates.
    pub fn resolve(&self, default_load: LoadConfig, default_inclusion: Option<InclusionConfig>) -> Result<Resolved, CliError> {
        let material = self.material.unwrap_or(DEFAULT_MATERIAL);
        let bimaterial = Bimaterial::new(material.mu1, material.mu2, material.kappa)
            .map_err(|e| config_err("material", e))?;

        let load = self.load.unwrap_or(default_load);
        let crack_load = match load.kind {
            LoadKind::Point => {
                let (Some(f), Some(a), Some(b)) = (load.force, load.a, load.b) else {
                    return Err(CliError::Config("load: point loads need F, a and b".into()));
                };
                CrackLoad::point_triple(f, a, b).map_err(|e| config_err("load", e))?
            }
            LoadKind::Smooth => {
                if load.force.is_some() || load.a.is_some() || load.b.is_some() {
                    return Err(CliError::Config("load: smooth loads take no F, a or b".into()));
                }
                CrackLoad::smooth()
            }
        };

        let inclusion = self.inclusion.or(default_inclusion);
        let inclusion_spec = inclusion.map(|c| c.to_spec()).transpose()?;

        let n = self.numerics.unwrap_or_default();
        let base = QuadratureSpec::default();
        let numerics = QuadratureSpec {
            rel_tol: n.rel_tol.unwrap_or(base.rel_tol),
            abs_tol: n.abs_tol.unwrap_or(base.abs_tol),
            max_subdivisions: n.max_subdivisions.unwrap_or(base.max_subdivisions),
            truncation_radius: n.truncation_radius.or(base.truncation_radius),
            truncation_scale: n.truncation_scale.unwrap_or(base.truncation_scale),
        };
        numerics.validate().map_err(|e| config_err("numerics", e))?;

        Ok(Resolved { material, load, inclusion, numerics, bimaterial, crack_load, inclusion_spec })
    }
}

impl InclusionConfig {
    fn to_spec(self) -> Result<InclusionSpec, CliError> {
        let inclusion = match (self.nu_star, self.rigid) {
            (Some(nu_star), false) => Inclusion::Elastic { nu_star },
            (None, true) => Inclusion::Rigid,
            _ => return Err(CliError::Config("inclusion: give exactly one of nu_star and rigid".into())),
        };
        let spec = InclusionSpec { d: self.d, phi: self.phi, alpha: self.alpha, ell_a: self.ell_a, ell_b: self.ell_b, inclusion };
        spec.validate().map_err(|e| config_err("inclusion", e))?;
        Ok(spec)
    }
}

impl Resolved {
    /// Length entering `κ*`.
    pub fn length(&self) -> f64 {
        self.crack_load.reference_length()
    }

    pub fn modulus_sum(&self) -> f64 {
        self.material.mu1 + self.material.mu2
    }

    pub fn mu_star(&self) -> f64 {
        self.bimaterial.mu_star()
    }

    pub fn kappa_star(&self) -> f64 {
        self.bimaterial.kappa_star(self.length())
    }

    /// Material with the same modulus sum and the given groups.
    pub fn with_groups(&self, mu_star: f64, kappa_star: f64) -> softcrack::Result<Bimaterial> {
        Bimaterial::from_groups(mu_star, kappa_star, self.modulus_sum(), self.length())
    }
}
