//! The one-parameter family of gauge representations.
//!
//! Every representation is characterised by a dimensionless mixing function
//! `alpha_k(omega_k, omega_0)` between the minimal-coupling (`alpha = 0`) and
//! multipolar (`alpha = 1`) couplings of a two-level transition at `omega_0`
//! to a field mode at `omega_k`. The rotating and counter-rotating weights
//!
//! ```text
//! u± = (1 - alpha) (omega_0 / omega_k)^(1/2) ∓ alpha (omega_k / omega_0)^(1/2)
//! ```
//!
//! are what every other module consumes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{require_positive, Error, Result};

/// A frequency-independent mixing parameter in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!(
                "custom alpha must lie in [0, 1], got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeRepresentation {
    /// Minimal coupling, `alpha = 0`.
    Coulomb,
    /// Multipolar coupling, `alpha = 1`.
    Poincare,
    /// `alpha = omega_0 / (omega_k + omega_0)`; the counter-rotating weight vanishes identically.
    Symmetric,
    CustomConstant(Alpha),
}

impl GaugeRepresentation {
    pub const NAMED: [GaugeRepresentation; 3] = [Self::Coulomb, Self::Poincare, Self::Symmetric];

    pub fn custom(alpha: f64) -> Result<Self> {
        Alpha::new(alpha).map(Self::CustomConstant)
    }

    /// Canonical string form, the same one accepted by [`FromStr`].
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Human-readable label used in plot legends.
    pub fn label(&self) -> String {
        match self {
            Self::Coulomb => "Coulomb gauge".into(),
            Self::Poincare => "Poincaré gauge".into(),
            Self::Symmetric => "symmetric representation".into(),
            Self::CustomConstant(a) => format!("α = {}", a.value()),
        }
    }

    /// The constant mixing parameter, if the representation has one.
    pub fn constant_alpha(&self) -> Option<f64> {
        match self {
            Self::Coulomb => Some(0.0),
            Self::Poincare => Some(1.0),
            Self::Symmetric => None,
            Self::CustomConstant(a) => Some(a.value()),
        }
    }

    /// Maps `alpha:0` to Coulomb and `alpha:1` to Poincaré so that equivalent
    /// representations run through the same arithmetic.
    pub fn canonical(self) -> Self {
        match self.constant_alpha() {
            Some(0.0) => Self::Coulomb,
            Some(1.0) => Self::Poincare,
            _ => self,
        }
    }
}

impl fmt::Display for GaugeRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Coulomb => f.write_str("coulomb"),
            Self::Poincare => f.write_str("poincare"),
            Self::Symmetric => f.write_str("symmetric"),
            Self::CustomConstant(a) => write!(f, "alpha:{}", a.value()),
        }
    }
}

impl FromStr for GaugeRepresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        match trimmed {
            "coulomb" => Ok(Self::Coulomb),
            "poincare" => Ok(Self::Poincare),
            "symmetric" => Ok(Self::Symmetric),
            other => match other.strip_prefix("alpha:") {
                Some(value) => {
                    let alpha: f64 = value.trim().parse().map_err(|_| {
                        Error::Domain(format!("cannot parse alpha value in `{trimmed}`"))
                    })?;
                    Self::custom(alpha)
                }
                None => Err(Error::Domain(format!(
                    "unknown representation `{trimmed}` (expected coulomb, poincare, symmetric or alpha:<float>)"
                ))),
            },
        }
    }
}

impl Serialize for GaugeRepresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaugeRepresentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rotating (`u_minus`) and counter-rotating (`u_plus`) coupling weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPair {
    pub u_plus: f64,
    pub u_minus: f64,
}

fn check_frequencies(omega_k: f64, omega_0: f64) -> Result<()> {
    require_positive("mode frequency", omega_k)?;
    require_positive("transition frequency", omega_0)
}

/// Mixing parameter of `rep` for a mode at `omega_k` and a transition at `omega_0`.
pub fn alpha_k(rep: GaugeRepresentation, omega_k: f64, omega_0: f64) -> Result<f64> {
    check_frequencies(omega_k, omega_0)?;
    Ok(match rep {
        GaugeRepresentation::Symmetric => omega_0 / (omega_k + omega_0),
        other => other
            .constant_alpha()
            .expect("constant representations carry alpha"),
    })
}

/// Evaluates `u±` for `rep`.
///
/// The symmetric representation is evaluated through its closed form, so the
/// counter-rotating weight is exactly zero rather than a rounding residue.
pub fn coupling_pair(rep: GaugeRepresentation, omega_k: f64, omega_0: f64) -> Result<CouplingPair> {
    let rep = rep.canonical();
    let alpha = alpha_k(rep, omega_k, omega_0)?;
    if rep == GaugeRepresentation::Symmetric {
        return Ok(CouplingPair {
            u_plus: 0.0,
            u_minus: 2.0 * (omega_0 * omega_k).sqrt() / (omega_k + omega_0),
        });
    }
    Ok(coupling_pair_from_alpha(alpha, omega_k, omega_0))
}

/// Direct evaluation of `u±` for an explicit mixing value.
pub fn coupling_pair_from_alpha(alpha: f64, omega_k: f64, omega_0: f64) -> CouplingPair {
    let down = (omega_0 / omega_k).sqrt();
    let up = (omega_k / omega_0).sqrt();
    CouplingPair {
        u_plus: (1.0 - alpha) * down - alpha * up,
        u_minus: (1.0 - alpha) * down + alpha * up,
    }
}
