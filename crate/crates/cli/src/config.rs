//! Experiment configuration: one strict JSON file per run.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use miura_core::matrix::MatrixJson;
use miura_core::soliton::Equation;
use miura_core::ComplexMatrix;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    MatfunCheck,
    Lemma1,
    AbstractMiura,
    Factorize,
    Soliton,
    TransformChain,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::MatfunCheck => "matfun-check",
            Command::Lemma1 => "lemma1",
            Command::AbstractMiura => "abstract-miura",
            Command::Factorize => "factorize",
            Command::Soliton => "soliton",
            Command::TransformChain => "transform-chain",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Command,
    seed: u64,
    #[serde(default)]
    parameters: Option<Value>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

/// Configuration after command-line overrides have been applied.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub parameters: Parameters,
    pub output_dir: PathBuf,
    /// Canonical JSON of `{command, seed, parameters}`; hashed into the report.
    pub canonical: String,
}

#[derive(Debug, Clone)]
pub enum Parameters {
    MatfunCheck(MatfunCheckParams),
    Lemma1(Lemma1Params),
    AbstractMiura(AbstractMiuraParams),
    Factorize(FactorizeParams),
    Soliton(SolitonParams),
    TransformChain(TransformChainParams),
}

impl ExperimentConfig {
    pub fn parse(
        text: &str,
        expected: Command,
        seed_override: Option<u64>,
        out_override: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if raw.command != expected {
            return Err(CliError::Config(format!(
                "config is for `{}` but `{}` was requested",
                raw.command.name(),
                expected.name()
            )));
        }
        let seed = seed_override.unwrap_or(raw.seed);
        let output_dir = out_override
            .or(raw.output_dir)
            .ok_or_else(|| CliError::Config("no output_dir in config and no --out given".into()))?;
        let params = raw.parameters.unwrap_or_else(|| Value::Object(Default::default()));
        let parameters = match raw.command {
            Command::MatfunCheck => Parameters::MatfunCheck(typed(&params)?),
            Command::Lemma1 => Parameters::Lemma1(typed(&params)?),
            Command::AbstractMiura => Parameters::AbstractMiura(typed(&params)?),
            Command::Factorize => Parameters::Factorize(typed(&params)?),
            Command::Soliton => Parameters::Soliton(typed(&params)?),
            Command::TransformChain => Parameters::TransformChain(typed(&params)?),
        };
        let canonical = serde_json::json!({
            "command": raw.command,
            "seed": seed,
            "parameters": params,
        })
        .to_string();
        Ok(Self {
            command: raw.command,
            seed,
            parameters,
            output_dir,
            canonical,
        })
    }
}

fn typed<T: DeserializeOwned>(params: &Value) -> Result<T, CliError> {
    T::deserialize(params).map_err(|e| CliError::Config(format!("parameters: {e}")))
}

/// Matrix fixture: matrix JSON plus an optional label.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFixture {
    #[serde(default)]
    pub label: Option<String>,
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFixture {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        MatrixJson {
            dim: self.dim,
            re: self.re.clone(),
            im: self.im.clone(),
        }
        .into_matrix()
        .map_err(|e| CliError::Config(format!("matrix fixture: {e}")))
    }
}

/// Labelled matrices from fixtures, or `None` to draw random instances.
pub fn fixture_matrices(
    fixtures: &Option<Vec<MatrixFixture>>,
) -> Result<Option<Vec<(String, ComplexMatrix)>>, CliError> {
    let Some(list) = fixtures else {
        return Ok(None);
    };
    list.iter()
        .enumerate()
        .map(|(i, f)| {
            let label = f.label.clone().unwrap_or_else(|| format!("fixture-{i:03}"));
            Ok((label, f.to_matrix()?))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatfunCheckParams {
    pub matrices: Option<Vec<MatrixFixture>>,
    pub instances: usize,
    pub max_dim: usize,
    pub roundtrip_instances: usize,
    pub roundtrip_max_dim: usize,
    pub quadrature_nodes: usize,
    pub contour_tolerance: f64,
    pub roundtrip_tolerance: f64,
}

impl Default for MatfunCheckParams {
    fn default() -> Self {
        Self {
            matrices: None,
            instances: 20,
            max_dim: 8,
            roundtrip_instances: 100,
            roundtrip_max_dim: 16,
            quadrature_nodes: 256,
            contour_tolerance: 1e-8,
            roundtrip_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma1Params {
    pub generators: Option<Vec<MatrixFixture>>,
    pub instances: usize,
    pub max_dim: usize,
    /// `(t, s)` pairs; each case reports the worst pair.
    pub times: Vec<(f64, f64)>,
    pub tolerance: f64,
}

impl Default for Lemma1Params {
    fn default() -> Self {
        Self {
            generators: None,
            instances: 100,
            max_dim: 8,
            times: vec![(1.0, 0.0), (2.0, 0.5)],
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AbstractMiuraParams {
    pub generators: Option<Vec<MatrixFixture>>,
    pub instances: usize,
    pub max_dim: usize,
    pub t: f64,
    pub s: f64,
    pub tolerance: f64,
    pub agreement_tolerance: f64,
    pub sqrt_tolerance: f64,
}

impl Default for AbstractMiuraParams {
    fn default() -> Self {
        Self {
            generators: None,
            instances: 50,
            max_dim: 8,
            t: 1.0,
            s: 0.0,
            tolerance: 1e-7,
            agreement_tolerance: 1e-9,
            sqrt_tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FactorizeParams {
    pub generators: Option<Vec<MatrixFixture>>,
    pub instances: usize,
    pub max_dim: usize,
    pub t_samples: Vec<f64>,
    pub time_points: usize,
    pub t_max: f64,
    pub tolerance: f64,
}

impl Default for FactorizeParams {
    fn default() -> Self {
        Self {
            generators: None,
            instances: 20,
            max_dim: 8,
            t_samples: vec![0.25, 1.0, 2.0],
            time_points: 21,
            t_max: 2.0,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Zero {},
    Constant { value: f64 },
    KdvSoliton { c: f64, x0: f64 },
    KinkAntikink { b: f64, x1: f64, x2: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonParams {
    pub equation: Equation,
    pub initial: InitialData,
    pub n_points: usize,
    pub length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: usize,
    pub mass_tolerance: f64,
    pub energy_tolerance: f64,
    pub profile_tolerance: f64,
    pub miura_tolerance: f64,
}

impl Default for SolitonParams {
    fn default() -> Self {
        Self {
            equation: Equation::KdV,
            initial: InitialData::KdvSoliton { c: 4.0, x0: -2.0 },
            n_points: 512,
            length: 40.0,
            dt: 1e-4,
            t_end: 1.0,
            snapshot_every: 1000,
            mass_tolerance: 1e-13,
            energy_tolerance: 1e-6,
            profile_tolerance: 1e-5,
            miura_tolerance: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformChainParams {
    pub n_points: usize,
    pub x_min: f64,
    pub length: f64,
    pub fields: usize,
    pub modes: usize,
    pub kink_b: Vec<f64>,
    pub kink_tolerance: f64,
    pub riccati_tolerance: f64,
    pub hirota_tolerance: f64,
}

impl Default for TransformChainParams {
    fn default() -> Self {
        Self {
            n_points: 2048,
            x_min: -5.0,
            length: 10.0,
            fields: 10,
            modes: 3,
            kink_b: vec![0.5, 1.0, 2.0],
            kink_tolerance: 1e-8,
            riccati_tolerance: 1e-6,
            hirota_tolerance: 1e-7,
        }
    }
}
