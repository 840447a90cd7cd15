//! Dimensionless model parameters.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("rotational diffusivity must be nonnegative, got {0}")]
    Nu(f64),
    #[error("translational diffusivity must be nonnegative, got {0}")]
    Kappa(f64),
    #[error("background concentration must be nonnegative, got {0}")]
    PsiBar(f64),
    #[error("unsupported dimension {0}; expected 2 or 3")]
    Dimension(u32),
    #[error("unknown swimmer kind {0:?}; expected \"puller\" or \"pusher\"")]
    Swimmer(String),
}

/// Spatial dimension. The orientation sphere is `S^{d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn value(self) -> u32 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    /// Surface area `|S^{d-1}|` of the orientation sphere.
    pub fn sphere_area(self) -> f64 {
        match self {
            Dimension::Two => 2.0 * PI,
            Dimension::Three => 4.0 * PI,
        }
    }
}

impl TryFrom<u32> for Dimension {
    type Error = ParamError;
    fn try_from(d: u32) -> Result<Self, ParamError> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(ParamError::Dimension(other)),
        }
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.value()
    }
}

/// Sign of the force dipole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Swimmer {
    /// Front-actuated, `ι = +1`.
    Puller,
    /// Rear-actuated, `ι = -1`.
    Pusher,
}

impl Swimmer {
    pub fn sign(self) -> f64 {
        match self {
            Swimmer::Puller => 1.0,
            Swimmer::Pusher => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Self {
        if sign < 0.0 {
            Swimmer::Pusher
        } else {
            Swimmer::Puller
        }
    }
}

impl fmt::Display for Swimmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Swimmer::Puller => "puller",
            Swimmer::Pusher => "pusher",
        })
    }
}

impl FromStr for Swimmer {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, ParamError> {
        match s {
            "puller" | "+1" | "1" => Ok(Swimmer::Puller),
            "pusher" | "-1" => Ok(Swimmer::Pusher),
            other => Err(ParamError::Swimmer(other.to_owned())),
        }
    }
}

/// Coefficients of the nondimensional model. Swim speed is one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub d: Dimension,
    /// Rotational diffusivity.
    pub nu: f64,
    /// Translational diffusivity.
    pub kappa: f64,
    /// Background concentration.
    pub psi_bar: f64,
    pub swimmer: Swimmer,
}

impl ModelParams {
    pub fn new(
        d: Dimension,
        nu: f64,
        kappa: f64,
        psi_bar: f64,
        swimmer: Swimmer,
    ) -> Result<Self, ParamError> {
        let p = Self {
            d,
            nu,
            kappa,
            psi_bar,
            swimmer,
        };
        p.validate()?;
        Ok(p)
    }

    /// Planar parameters with no translational diffusion.
    pub fn planar(nu: f64, psi_bar: f64, swimmer: Swimmer) -> Result<Self, ParamError> {
        Self::new(Dimension::Two, nu, 0.0, psi_bar, swimmer)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(ParamError::Nu(self.nu));
        }
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(ParamError::Kappa(self.kappa));
        }
        if !(self.psi_bar >= 0.0) || !self.psi_bar.is_finite() {
            return Err(ParamError::PsiBar(self.psi_bar));
        }
        Ok(())
    }

    /// `ι`.
    pub fn iota(&self) -> f64 {
        self.swimmer.sign()
    }

    /// The coupling strength `ι d ψ̄` of the linearized stress feedback.
    pub fn coupling(&self) -> f64 {
        self.iota() * self.d.as_f64() * self.psi_bar
    }

    pub fn with_psi_bar(self, psi_bar: f64) -> Self {
        Self { psi_bar, ..self }
    }

    pub fn with_nu(self, nu: f64) -> Self {
        Self { nu, ..self }
    }

    pub fn with_kappa(self, kappa: f64) -> Self {
        Self { kappa, ..self }
    }

    pub fn with_swimmer(self, swimmer: Swimmer) -> Self {
        Self { swimmer, ..self }
    }
}
