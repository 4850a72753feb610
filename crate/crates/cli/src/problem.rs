//! Problem files.
//!
//! ```json
//! {
//!   "form": "canonical",
//!   "coefficients": {"p": "(x+0.4472135955)^3", "q": "4*(x+0.4472135955)", "r": "(x+0.4472135955)^5"},
//!   "interval": [0, 2.1108],
//!   "bc": "dirichlet",
//!   "metadata": {"source": "case4"}
//! }
//! ```
//!
//! Schrödinger files carry a single `invariant` coefficient in `t`.

use std::collections::BTreeMap;
use std::path::Path;

use liouville_core::slp::{CanonicalSlp, Problem, SchrodingerSlp};
use liouville_core::{Error as CoreError, Expr};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Canonical,
    Schrodinger,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    #[default]
    Dirichlet,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub form: Form,
    pub coefficients: BTreeMap<String, String>,
    pub interval: [f64; 2],
    #[serde(default)]
    pub bc: Bc,
    #[serde(default)]
    pub metadata: serde_json::Value,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("invalid problem file: {e}")))
    }

    fn expr(&self, name: &str, var: &str) -> Result<Expr, CliError> {
        let src = self
            .coefficients
            .get(name)
            .ok_or_else(|| CliError::input(format!("missing coefficient '{name}'")))?;
        Expr::parse(src, var)
            .map_err(|e| CliError::Core(CoreError::Expr(e), Some(name.to_string())))
    }

    fn expect_keys(&self, keys: &[&str]) -> Result<(), CliError> {
        if let Some(extra) = self
            .coefficients
            .keys()
            .find(|k| !keys.contains(&k.as_str()))
        {
            return Err(CliError::input(format!(
                "unexpected coefficient '{extra}' for {:?} form (expected {})",
                self.form,
                keys.join(", ")
            )));
        }
        Ok(())
    }

    /// Parses the coefficients. Validation is left to the caller.
    pub fn problem(&self) -> Result<Problem<f64>, CliError> {
        let [lo, hi] = self.interval;
        match self.form {
            Form::Canonical => {
                self.expect_keys(&["p", "q", "r"])?;
                Ok(Problem::Canonical(CanonicalSlp::dirichlet(
                    self.expr("p", "x")?,
                    self.expr("q", "x")?,
                    self.expr("r", "x")?,
                    lo,
                    hi,
                )))
            }
            Form::Schrodinger => {
                self.expect_keys(&["invariant"])?;
                Ok(Problem::Schrodinger(SchrodingerSlp::dirichlet(
                    self.expr("invariant", "t")?,
                    lo,
                    hi,
                )))
            }
        }
    }
}
