//! JSON problem configuration for `bsde-solve`.
//!
//! The schema is strict: an explicit `schema_version`, and unknown fields
//! anywhere are errors rather than warnings, so a config that parses today
//! reproduces the same run tomorrow.

use serde::{Deserialize, Serialize};
use svito_core::bsde::{Driver, SvbsdeProblem, TerminalCondition};
use svito_core::Interval;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BsdeConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub horizon: f64,
    pub steps: usize,
    pub paths: usize,
    #[serde(default = "defaults::selections")]
    pub selections: usize,
    #[serde(default = "defaults::basis_degree")]
    pub basis_degree: usize,
    #[serde(default = "defaults::ridge")]
    pub ridge: f64,
    #[serde(default = "defaults::max_iter")]
    pub max_iter: usize,
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default = "defaults::residual_tol")]
    pub residual_tol: f64,
    /// How many scenarios `solution.csv` dumps.
    #[serde(default = "defaults::dump_paths")]
    pub dump_paths: usize,
    /// Optional declared Lipschitz constant, cross-checked against the
    /// driver form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_c: Option<f64>,
    pub terminal: TerminalSpec,
    pub driver: DriverSpec,
}

mod defaults {
    pub fn selections() -> usize {
        8
    }
    pub fn basis_degree() -> usize {
        3
    }
    pub fn ridge() -> f64 {
        1e-8
    }
    pub fn max_iter() -> usize {
        25
    }
    pub fn tol() -> f64 {
        1e-3
    }
    pub fn residual_tol() -> f64 {
        0.1
    }
    pub fn dump_paths() -> usize {
        16
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum TerminalSpec {
    Deterministic(IntervalSpec),
    BrownianShift(ShiftSpec),
    BrownianSquare(ShiftSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum DriverSpec {
    Zero,
    Constant(IntervalSpec),
    LinearZ(LinearZSpec),
    LinearYz(LinearYzSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinearZSpec {
    pub gain: f64,
    #[serde(default)]
    pub offset_lo: f64,
    #[serde(default)]
    pub offset_hi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinearYzSpec {
    pub y_gain: f64,
    pub z_gain: f64,
    #[serde(default)]
    pub offset_lo: f64,
    #[serde(default)]
    pub offset_hi: f64,
}

impl BsdeConfig {
    /// Field-level validation beyond what the parser enforces.
    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            ));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(format!("horizon: must be positive, got {}", self.horizon));
        }
        for (name, v) in [
            ("steps", self.steps),
            ("paths", self.paths),
            ("max_iter", self.max_iter),
        ] {
            if v < 1 {
                return Err(format!("{name}: must be at least 1, got {v}"));
            }
        }
        if self.selections < 2 {
            return Err(format!(
                "selections: must be at least 2, got {}",
                self.selections
            ));
        }
        for (name, v) in [
            ("ridge", self.ridge),
            ("tol", self.tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name}: must be positive, got {v}"));
            }
        }
        let (lo, hi) = match &self.terminal {
            TerminalSpec::Deterministic(s) => (s.lo, s.hi),
            TerminalSpec::BrownianShift(s) | TerminalSpec::BrownianSquare(s) => (s.alpha, s.beta),
        };
        if lo > hi {
            return Err(format!("terminal: lower bound {lo} exceeds upper {hi}"));
        }
        if let Some(off) = self.driver_offset() {
            if off.0 > off.1 {
                return Err(format!(
                    "driver offset: lower bound {} exceeds upper {}",
                    off.0, off.1
                ));
            }
        }
        let derived = self.derived_lipschitz();
        if let Some(declared) = self.lipschitz_c {
            if (declared - derived).abs() > 1e-9 {
                return Err(format!(
                    "lipschitz_c: declared {declared} disagrees with the driver form's {derived}"
                ));
            }
        }
        Ok(())
    }

    fn driver_offset(&self) -> Option<(f64, f64)> {
        match &self.driver {
            DriverSpec::Zero => None,
            DriverSpec::Constant(s) => Some((s.lo, s.hi)),
            DriverSpec::LinearZ(s) => Some((s.offset_lo, s.offset_hi)),
            DriverSpec::LinearYz(s) => Some((s.offset_lo, s.offset_hi)),
        }
    }

    pub fn derived_lipschitz(&self) -> f64 {
        self.to_driver().lipschitz()
    }

    pub fn to_terminal(&self) -> TerminalCondition {
        match &self.terminal {
            TerminalSpec::Deterministic(s) => {
                TerminalCondition::Deterministic(Interval { lo: s.lo, hi: s.hi })
            }
            TerminalSpec::BrownianShift(s) => TerminalCondition::BrownianShift {
                alpha: s.alpha,
                beta: s.beta,
            },
            TerminalSpec::BrownianSquare(s) => TerminalCondition::BrownianSquare {
                alpha: s.alpha,
                beta: s.beta,
            },
        }
    }

    pub fn to_driver(&self) -> Driver {
        match &self.driver {
            DriverSpec::Zero => Driver::Zero,
            DriverSpec::Constant(s) => Driver::Constant(Interval { lo: s.lo, hi: s.hi }),
            DriverSpec::LinearZ(s) => Driver::LinearZ {
                gain: s.gain,
                offset: Interval {
                    lo: s.offset_lo,
                    hi: s.offset_hi,
                },
            },
            DriverSpec::LinearYz(s) => Driver::LinearYZ {
                y_gain: s.y_gain,
                z_gain: s.z_gain,
                offset: Interval {
                    lo: s.offset_lo,
                    hi: s.offset_hi,
                },
            },
        }
    }

    pub fn to_problem(&self) -> SvbsdeProblem {
        SvbsdeProblem {
            terminal: self.to_terminal(),
            driver: self.to_driver(),
            horizon: self.horizon,
        }
    }

    /// Canonical serialized form, used for content addressing and the
    /// round-trip invariant.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BsdeConfig {
        serde_json::from_str(
            r#"{
                "schema_version": 1,
                "seed": 7,
                "horizon": 0.25,
                "steps": 128,
                "paths": 20000,
                "terminal": {"brownian_shift": {"alpha": 0.0, "beta": 1.0}},
                "driver": {"linear_z": {"gain": 1.0}}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn roundtrip_is_lossless() {
        let cfg = sample();
        let text = cfg.canonical();
        let back: BsdeConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(text, back.canonical());
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{
            "schema_version": 1, "seed": 7, "horizon": 0.25,
            "steps": 128, "paths": 1000, "surprise": true,
            "terminal": {"brownian_shift": {"alpha": 0.0, "beta": 1.0}},
            "driver": "zero"
        }"#;
        assert!(serde_json::from_str::<BsdeConfig>(bad).is_err());
        let bad_inner = r#"{
            "schema_version": 1, "seed": 7, "horizon": 0.25,
            "steps": 128, "paths": 1000,
            "terminal": {"brownian_shift": {"alpha": 0.0, "beta": 1.0, "extra": 3}},
            "driver": "zero"
        }"#;
        assert!(serde_json::from_str::<BsdeConfig>(bad_inner).is_err());
    }

    #[test]
    fn validation_catches_bad_fields() {
        let mut cfg = sample();
        cfg.tol = 0.0;
        assert!(cfg.validate().unwrap_err().contains("tol"));
        let mut cfg = sample();
        cfg.schema_version = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = sample();
        cfg.lipschitz_c = Some(0.5); // driver form says 1.0
        assert!(cfg.validate().unwrap_err().contains("lipschitz_c"));
        let mut cfg = sample();
        cfg.lipschitz_c = Some(1.0);
        assert!(cfg.validate().is_ok());
    }
}
