//! JSON run configuration. Every section and field is optional; unknown keys
//! are rejected.

use std::path::{Path, PathBuf};

use galqm::dynamics::{EmConvention, EmParameters, EvolutionMethod, GridConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Checks run by `verify`; empty means all.
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub grid: GridSection,
    pub evolution: EvolutionSection,
    pub em: EmSection,
    pub spin: SpinSection,
    pub samples: SampleSection,
    pub output: OutputSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_hooks: Option<TestHooks>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    GroupAxioms,
    Cocycle,
    Jacobi,
    SpinSweep,
    Superselection,
    SectorAudit,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::GroupAxioms, Suite::Cocycle, Suite::Jacobi, Suite::SpinSweep, Suite::Superselection, Suite::SectorAudit];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GroupAxioms => "group-axioms",
            Suite::Cocycle => "cocycle",
            Suite::Jacobi => "jacobi",
            Suite::SpinSweep => "spin-sweep",
            Suite::Superselection => "superselection",
            Suite::SectorAudit => "sector-audit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = GridConfig::standard();
        Self { n: g.n(), length: g.length(), mass: g.mass(), hbar: g.hbar() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Auto,
    Exact,
    CrankNicolson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionSection {
    pub t_end: f64,
    /// Interval between output rows.
    pub dt: f64,
    pub method: MethodName,
    /// Longest Crank–Nicolson substep.
    pub max_step: f64,
    /// Adds `μω²x²/2` to the Hamiltonian.
    pub harmonic_omega: f64,
    pub initial: InitialState,
    /// Spinor `(up, down)` as `[[re, im], [re, im]]`; absent means no spin factor.
    pub spinor: Option<[[f64; 2]; 2]>,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        Self {
            t_end: 5.0,
            dt: 0.1,
            method: MethodName::Auto,
            max_step: 0.01,
            harmonic_omega: 0.0,
            initial: InitialState::default(),
            spinor: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialState {
    Gaussian { x0: f64, p0: f64, sigma: f64 },
    PlaneWave { mode: i64 },
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Gaussian { x0: 0.0, p0: 0.0, sigma: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionName {
    AsPrinted,
    Conventional,
}

/// Constant external fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmSection {
    pub charge: f64,
    pub c: f64,
    pub g_l: f64,
    pub a0: f64,
    pub a_vec: [f64; 3],
    pub b: [f64; 3],
    pub convention: ConventionName,
}

impl Default for EmSection {
    fn default() -> Self {
        Self { charge: 0.0, c: 1.0, g_l: 2.0, a0: 0.0, a_vec: [0.0; 3], b: [0.0; 3], convention: ConventionName::AsPrinted }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinSection {
    /// Largest spin of the sweep, e.g. `"9/2"`.
    pub j_max: String,
}

impl Default for SpinSection {
    fn default() -> Self {
        Self { j_max: "9/2".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSection {
    pub group: usize,
    pub cocycle: usize,
    /// Range of the random group parameters.
    pub scale: f64,
}

impl Default for SampleSection {
    fn default() -> Self {
        Self { group: 100_000, cocycle: 10_000, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub report: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

/// Hooks that deliberately corrupt inputs so failure paths can be exercised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestHooks {
    pub tamper: Option<Tamper>,
}

/// Multiplies the bracket `[left, right]` of the structure table by `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tamper {
    pub left: String,
    pub right: String,
    pub scale: i64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    /// SHA-256 of the canonical JSON of the effective configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn suites(&self) -> Vec<Suite> {
        if self.suites.is_empty() {
            Suite::ALL.to_vec()
        } else {
            let mut s = self.suites.clone();
            s.sort();
            s.dedup();
            s
        }
    }

    pub fn grid_config(&self) -> Result<GridConfig, String> {
        let g = &self.grid;
        GridConfig::new(g.n, g.length, g.mass, g.hbar).map_err(|e| e.to_string())
    }

    pub fn method(&self) -> EvolutionMethod {
        let max_step = self.evolution.max_step;
        match self.evolution.method {
            MethodName::Auto => EvolutionMethod::Auto { max_step },
            MethodName::Exact => EvolutionMethod::ExactMomentum,
            MethodName::CrankNicolson => EvolutionMethod::CrankNicolson { max_step },
        }
    }

    pub fn em_parameters(&self) -> EmParameters {
        let em = &self.em;
        let convention = match em.convention {
            ConventionName::AsPrinted => EmConvention::AsPrinted,
            ConventionName::Conventional => EmConvention::Conventional,
        };
        EmParameters::new(em.charge, em.g_l, em.c).with_convention(convention)
    }

    pub fn spinor(&self) -> Option<(Complex64, Complex64)> {
        self.evolution.spinor.map(|[u, d]| (Complex64::new(u[0], u[1]), Complex64::new(d[0], d[1])))
    }

    /// Checks the evolution parameters that the library does not see directly.
    pub fn validate_evolution(&self) -> Result<(), String> {
        let e = &self.evolution;
        if !(e.t_end.is_finite() && e.t_end >= 0.0) {
            return Err(format!("evolution.t_end must be nonnegative, got {}", e.t_end));
        }
        if !(e.dt.is_finite() && e.dt > 0.0) {
            return Err(format!("evolution.dt must be positive, got {}", e.dt));
        }
        if !e.harmonic_omega.is_finite() {
            return Err("evolution.harmonic_omega must be finite".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.suites().len(), 6);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"grid": {"points": 64}}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"evolution": {"initial": {"kind": "gaussian", "x0": 0, "p0": 0, "sigma": 1, "q": 2}}}"#).is_err());
    }

    #[test]
    fn round_trip_and_hash() {
        let c: RunConfig = serde_json::from_str(
            r#"{"seed": 7, "suites": ["jacobi"], "evolution": {"initial": {"kind": "plane-wave", "mode": 0}, "spinor": [[1, 0], [0, 0]]}}"#,
        )
        .unwrap();
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_ne!(c.hash(), RunConfig::default().hash());
        assert_eq!(c.hash().len(), 64);
    }
}
