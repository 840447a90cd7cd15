//! TOML experiment configuration and the dimensional-to-model conversion.

use std::f64::consts::PI;
use std::path::PathBuf;

use akin::dispersion::{penrose_threshold, SearchBox};
use akin::nonlinear::InitKind;
use akin::{Dimension, ModelParams, Swimmer};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Dispersion,
    Landau,
    Mode,
    Sweep,
    Simulate,
    Poincare,
    Report,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Dispersion => "dispersion",
            CommandKind::Landau => "landau",
            CommandKind::Mode => "mode",
            CommandKind::Sweep => "sweep",
            CommandKind::Simulate => "simulate",
            CommandKind::Poincare => "poincare",
            CommandKind::Report => "report",
        }
    }
}

/// A complete experiment description. Every block has defaults, so the effective
/// configuration written next to the artifacts lists every setting that was used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<DimensionalParams>,
    #[serde(default)]
    pub dispersion: DispersionConfig,
    #[serde(default)]
    pub landau: LandauConfig,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub poincare: PoincareConfig,
    #[serde(default)]
    pub report: ReportConfig,
}

fn default_output() -> PathBuf {
    PathBuf::from("akin-out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            seed: 0,
            output: default_output(),
            model: ModelSection::default(),
            physical: None,
            dispersion: DispersionConfig::default(),
            landau: LandauConfig::default(),
            mode: ModeConfig::default(),
            sweep: SweepConfig::default(),
            simulate: SimulateConfig::default(),
            poincare: PoincareConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses a TOML document. A document without any keys is a usage error.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text.parse()?;
        if table.is_empty() {
            return Err(CliError::Usage("the configuration is empty".into()));
        }
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Model parameters after applying `[physical]` and `psi_factor`.
    pub fn resolve_model(&self) -> Result<ModelParams, CliError> {
        self.model.resolve(self.physical.as_ref())
    }
}

/// Dimensionless model coefficients. With `[physical]` present only `d` may be set here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default = "default_dimension")]
    pub d: Dimension,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_bar: Option<f64>,
    /// `ψ̄` as a multiple of the pusher threshold `ψ*` in dimension `d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swimmer: Option<Swimmer>,
}

fn default_dimension() -> Dimension {
    Dimension::Two
}

pub const DEFAULT_NU: f64 = 1e-2;

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            d: Dimension::Two,
            nu: None,
            kappa: None,
            psi_bar: None,
            psi_factor: None,
            swimmer: None,
        }
    }
}

impl ModelSection {
    pub fn resolve(&self, physical: Option<&DimensionalParams>) -> Result<ModelParams, CliError> {
        if let Some(dim) = physical {
            if self.nu.is_some()
                || self.kappa.is_some()
                || self.psi_bar.is_some()
                || self.psi_factor.is_some()
                || self.swimmer.is_some()
            {
                return Err(CliError::Config(
                    "[physical] determines nu, kappa, psi_bar and swimmer; remove them from [model]"
                        .into(),
                ));
            }
            return nondimensionalize(dim, self.d);
        }
        let swimmer = self.swimmer.unwrap_or(Swimmer::Puller);
        let psi_bar = match (self.psi_bar, self.psi_factor) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set at most one of model.psi_bar and model.psi_factor".into(),
                ))
            }
            (Some(p), None) => p,
            (None, Some(f)) => f * penrose_threshold(self.d, &SearchBox::default())?.psi_star,
            (None, None) => 0.0,
        };
        Ok(ModelParams::new(
            self.d,
            self.nu.unwrap_or(DEFAULT_NU),
            self.kappa.unwrap_or(0.0),
            psi_bar,
            swimmer,
        )?)
    }
}

/// SI constants of the dimensional model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionalParams {
    /// Swim speed (m/s).
    pub v0: f64,
    /// Rotational diffusivity (1/s).
    pub d_r: f64,
    /// Translational diffusivity (m²/s).
    pub d_t: f64,
    /// Viscosity (Pa·s).
    pub mu: f64,
    /// Signed stress magnitude; negative for pushers.
    pub sigma0: f64,
    /// Box side (m).
    pub l: f64,
    /// Number density (1/m^d).
    pub n_psi: f64,
}

/// `ν = d_r L/(2πV₀)`, `κ = 2π d_t/(L V₀)`, `ψ̄ = L|σ₀|n_ψ/(2πμV₀)`, `ι = sign σ₀`.
pub fn nondimensionalize(dim: &DimensionalParams, d: Dimension) -> Result<ModelParams, CliError> {
    let positive = [
        ("v0", dim.v0),
        ("d_r", dim.d_r),
        ("d_t", dim.d_t),
        ("mu", dim.mu),
        ("l", dim.l),
        ("n_psi", dim.n_psi),
    ];
    for (name, v) in positive {
        if !(v > 0.0) || !v.is_finite() {
            return Err(CliError::Config(format!(
                "physical.{name} must be finite and positive, got {v}"
            )));
        }
    }
    if dim.sigma0 == 0.0 || !dim.sigma0.is_finite() {
        return Err(CliError::Config(format!(
            "physical.sigma0 must be finite and nonzero, got {}",
            dim.sigma0
        )));
    }
    let nu = dim.d_r * dim.l / (2.0 * PI * dim.v0);
    let kappa = dim.d_t * 2.0 * PI / (dim.l * dim.v0);
    let psi_bar = dim.l * dim.sigma0.abs() * dim.n_psi / (2.0 * PI * dim.mu * dim.v0);
    for (name, v) in [("nu", nu), ("kappa", kappa), ("psi_bar", psi_bar)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(CliError::Config(format!(
                "dimensionless {name} = {v} is not positive"
            )));
        }
    }
    Ok(ModelParams::new(
        d,
        nu,
        kappa,
        psi_bar,
        Swimmer::from_sign(dim.sigma0),
    )?)
}

/// Orientation profiles for single-mode experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialDatum {
    /// `sin 2θ`.
    Sin2,
    /// `cos θ + sin 2θ`.
    Enhanced,
    /// `1 + e^{iθ}`.
    Taylor,
    /// Random coefficients with `|ĥ_m| ≲ (1+m²)^{-1}`, drawn from the task seed.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionConfig {
    /// Write `γ₂` along the vertical line `Re λ = trace_re`.
    pub trace: bool,
    pub trace_re: f64,
    pub trace_im: (f64, f64),
    pub trace_points: usize,
    pub search: SearchBox,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            trace: true,
            trace_re: 0.0,
            trace_im: (-3.0, 3.0),
            trace_points: 600,
            search: SearchBox::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandauConfig {
    pub t_end: f64,
    pub dt: f64,
    pub order: usize,
    /// Exponent `w` in `∫|∇û|²⟨t⟩^w dt`.
    pub weight: f64,
    pub initial: InitialDatum,
    /// Stationary-phase fit window; `[T/8, T]` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_window: Option<(f64, f64)>,
}

impl Default for LandauConfig {
    fn default() -> Self {
        Self {
            t_end: 400.0,
            dt: 0.05,
            order: 16,
            weight: 1.9,
            initial: InitialDatum::Sin2,
            slope_window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModeConfig {
    pub k: f64,
    pub t_end: f64,
    /// Defaults to `min(0.2, 0.25/k)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub order: usize,
    pub sample_every: usize,
    pub initial: InitialDatum,
    /// Exponential fit window; `[T/2, T]` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<(f64, f64)>,
}

impl Default for ModeConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            t_end: 200.0,
            dt: None,
            order: 128,
            sample_every: 10,
            initial: InitialDatum::Enhanced,
            fit_window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// Decay of `cos θ + sin 2θ` against `λ_{ν,k}`.
    Enhanced,
    /// Decay of `1 + e^{iθ}` against `k²/(2ν) + κk²`.
    Taylor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub nu: Vec<f64>,
    pub k: Vec<f64>,
    /// Defaults to the model's `ψ̄`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_bar: Option<Vec<f64>>,
    /// Defaults to the model's swimmer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swimmer: Option<Vec<Swimmer>>,
    /// Per-point horizon when absent: `3/λ + 16/√(νk)` (enhanced) or `3/ν + 8/rate` (Taylor).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub order: usize,
    pub samples: usize,
    /// Draw each point's initial datum from its own seed instead of `cos θ + sin 2θ`.
    pub random_initial: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kind: SweepKind::Enhanced,
            nu: vec![1e-2, 3e-3, 1e-3, 3e-4, 1e-4],
            k: vec![1.0],
            psi_bar: None,
            swimmer: None,
            t_end: None,
            dt: None,
            order: 128,
            samples: 2000,
            random_initial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    /// `[Nx, Ny, Nθ]`.
    pub grid: [usize; 3],
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
    pub amplitude: f64,
    /// Write a snapshot every this many samples; `0` keeps only the final state.
    pub snapshot_every: usize,
    pub init: InitKind,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            grid: [64, 64, 64],
            dt: 1e-3,
            t_end: 1.0,
            sample_every: 10,
            amplitude: 0.1,
            snapshot_every: 0,
            init: InitKind::RandomSmooth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PoincareConfig {
    pub nu: Vec<f64>,
    pub k: Vec<f64>,
    pub order: usize,
}

impl Default for PoincareConfig {
    fn default() -> Self {
        Self {
            nu: vec![1e-2, 1e-3, 1e-4],
            k: vec![1.0],
            order: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportConfig {
    /// Sweep table to join; `<output>/sweep.csv` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<PathBuf>,
    /// Samples per theory curve.
    pub curve_points: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            sweep: None,
            curve_points: 64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab() -> DimensionalParams {
        DimensionalParams {
            v0: 2e-5,
            d_r: 0.3,
            d_t: 2e-10,
            mu: 1e-3,
            sigma0: -8e-19,
            l: 1e-3,
            n_psi: 1e15,
        }
    }

    #[test]
    fn unit_rotational_diffusion() {
        let mut p = lab();
        p.d_r = 2.0 * PI * p.v0 / p.l;
        assert!((nondimensionalize(&p, Dimension::Two).unwrap().nu - 1.0).abs() < 1e-15);
    }

    #[test]
    fn box_size_scaling() {
        let a = nondimensionalize(&lab(), Dimension::Two).unwrap();
        let b = nondimensionalize(
            &DimensionalParams {
                l: 2.0 * lab().l,
                ..lab()
            },
            Dimension::Two,
        )
        .unwrap();
        assert!((b.nu / a.nu - 2.0).abs() < 1e-14);
        assert!((b.psi_bar / a.psi_bar - 2.0).abs() < 1e-14);
        assert!((b.kappa / a.kappa - 0.5).abs() < 1e-14);
    }

    #[test]
    fn speed_scaling() {
        let a = nondimensionalize(&lab(), Dimension::Two).unwrap();
        let b = nondimensionalize(
            &DimensionalParams {
                v0: 2.0 * lab().v0,
                ..lab()
            },
            Dimension::Two,
        )
        .unwrap();
        for (x, y) in [(a.nu, b.nu), (a.kappa, b.kappa), (a.psi_bar, b.psi_bar)] {
            assert!((y / x - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn sign_of_stress_picks_swimmer() {
        assert_eq!(
            nondimensionalize(&lab(), Dimension::Two).unwrap().swimmer,
            Swimmer::Pusher
        );
        let p = DimensionalParams {
            sigma0: 1.0,
            ..lab()
        };
        assert_eq!(
            nondimensionalize(&p, Dimension::Two).unwrap().swimmer,
            Swimmer::Puller
        );
    }

    #[test]
    fn nonpositive_inputs_rejected() {
        for p in [
            DimensionalParams { v0: 0.0, ..lab() },
            DimensionalParams { d_t: -1.0, ..lab() },
            DimensionalParams {
                sigma0: 0.0,
                ..lab()
            },
            DimensionalParams {
                n_psi: f64::NAN,
                ..lab()
            },
        ] {
            assert!(matches!(
                nondimensionalize(&p, Dimension::Two),
                Err(CliError::Config(_))
            ));
        }
        // Positive inputs whose quotient underflows.
        let tiny = DimensionalParams {
            d_t: 1e-320,
            l: 1e10,
            ..lab()
        };
        assert!(nondimensionalize(&tiny, Dimension::Two).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        for text in [
            "sede = 1",
            "[model]\nnu = 0.1\nmu = 2",
            "[sweep]\nnus = [0.1]",
        ] {
            assert!(
                matches!(ExperimentConfig::parse(text), Err(CliError::Config(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn empty_document_is_usage() {
        for text in ["", "  \n# nothing\n"] {
            assert!(matches!(
                ExperimentConfig::parse(text),
                Err(CliError::Usage(_))
            ));
        }
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = ExperimentConfig {
            command: Some(CommandKind::Simulate),
            seed: 17,
            physical: Some(lab()),
            ..ExperimentConfig::default()
        };
        cfg.simulate.init = InitKind::SingleMode { k: [1, -2], m: 3 };
        cfg.sweep.psi_bar = Some(vec![0.1, 1e-7]);
        cfg.sweep.swimmer = Some(vec![Swimmer::Pusher]);
        cfg.landau.slope_window = Some((10.0, 0.1 + 0.2));
        let back = ExperimentConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn physical_excludes_model_coefficients() {
        let cfg = ExperimentConfig::parse(
            "[model]\nnu = 0.1\n[physical]\nv0 = 1\nd_r = 1\nd_t = 1\nmu = 1\nsigma0 = 1\nl = 1\nn_psi = 1\n",
        )
        .unwrap();
        assert!(matches!(cfg.resolve_model(), Err(CliError::Config(_))));
    }

    #[test]
    fn model_defaults() {
        let p = ModelSection::default().resolve(None).unwrap();
        assert_eq!(
            (p.nu, p.kappa, p.psi_bar, p.swimmer),
            (DEFAULT_NU, 0.0, 0.0, Swimmer::Puller)
        );
    }
}
