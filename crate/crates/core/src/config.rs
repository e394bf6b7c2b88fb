//! Run configuration: quiver, field order, period, bounds, budget, and
//! reproducibility seed, loadable from TOML with per-field defaults.

use serde::{Deserialize, Serialize};

use crate::repcat::{Category, DimVector, Quiver, DEFAULT_BUDGET};
use crate::{HallError, Result};

/// Quiver selection: a named preset or an explicit vertex/arrow list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverSpec {
    Named(String),
    Explicit { vertices: usize, arrows: Vec<(usize, usize)> },
}

impl Default for QuiverSpec {
    fn default() -> Self {
        QuiverSpec::Named("a1".to_string())
    }
}

impl QuiverSpec {
    pub fn build(&self) -> Result<Quiver> {
        match self {
            QuiverSpec::Named(name) => match name.as_str() {
                "a1" => Ok(Quiver::a1()),
                "a2" => Ok(Quiver::a2()),
                other => Err(HallError::Config(format!(
                    "unknown quiver name {other:?} (expected \"a1\" or \"a2\", or an explicit vertices/arrows table)"
                ))),
            },
            QuiverSpec::Explicit { vertices, arrows } => Quiver::new(*vertices, arrows.clone()),
        }
    }
}

fn default_q() -> u64 {
    2
}

fn default_m() -> usize {
    1
}

fn default_budget() -> u128 {
    DEFAULT_BUDGET
}

/// Complete configuration of a run. Serializable so that reports can embed
/// the exact configuration they were produced under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub quiver: QuiverSpec,
    #[serde(default = "default_q")]
    pub q: u64,
    #[serde(default = "default_m")]
    pub m: usize,
    /// Componentwise bound on dimension vectors for tables and sweeps.
    #[serde(default)]
    pub max_dim: Option<Vec<usize>>,
    #[serde(default = "default_budget")]
    pub budget: u128,
    #[serde(default)]
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quiver: QuiverSpec::default(),
            q: default_q(),
            m: default_m(),
            max_dim: None,
            budget: default_budget(),
            seed: 0,
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| HallError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.q) {
            return Err(HallError::NotPrime(self.q));
        }
        if self.m == 0 {
            return Err(HallError::Config("m must be at least 1".to_string()));
        }
        let quiver = self.quiver.build()?;
        if let Some(md) = &self.max_dim {
            if md.len() != quiver.vertex_count() {
                return Err(HallError::Config(format!(
                    "max_dim has {} entries, quiver has {} vertices",
                    md.len(),
                    quiver.vertex_count()
                )));
            }
        }
        Ok(())
    }

    pub fn build_category(&self) -> Result<Category> {
        self.validate()?;
        Category::new(self.quiver.build()?, self.q, self.budget)
    }

    /// The effective dimension bound: `max_dim`, or 1 per vertex.
    pub fn effective_max_dim(&self) -> Result<DimVector> {
        let n = self.quiver.build()?.vertex_count();
        Ok(DimVector(match &self.max_dim {
            Some(md) => md.clone(),
            None => vec![1; n],
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_toml() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.q, 2);
        assert_eq!(cfg.m, 1);

        let cfg = RunConfig::from_toml(
            r#"
            quiver = "a2"
            q = 3
            m = 3
            max_dim = [2, 2]
            seed = 7
            "#,
        )
        .unwrap();
        assert_eq!(cfg.q, 3);
        assert_eq!(cfg.m, 3);
        assert_eq!(cfg.effective_max_dim().unwrap(), DimVector(vec![2, 2]));
        let cat = cfg.build_category().unwrap();
        assert_eq!(cat.quiver().vertex_count(), 2);
    }

    #[test]
    fn explicit_quiver() {
        let cfg = RunConfig::from_toml(
            r#"
            q = 2
            [quiver]
            vertices = 3
            arrows = [[0, 1], [1, 2]]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.quiver.build().unwrap().vertex_count(), 3);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            RunConfig::from_toml("q = 4"),
            Err(HallError::NotPrime(4))
        ));
        assert!(matches!(
            RunConfig::from_toml("m = 0"),
            Err(HallError::Config(_))
        ));
        assert!(matches!(
            RunConfig::from_toml("quiver = \"e8\""),
            Err(HallError::Config(_))
        ));
        assert!(matches!(
            RunConfig::from_toml("max_dim = [1, 2]"),
            Err(HallError::Config(_))
        ));
    }
}
