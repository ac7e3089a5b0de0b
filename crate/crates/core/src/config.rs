use serde::{Deserialize, Serialize};

use crate::numerics::QuadratureConfig;

/// How primitive hyperbolic classes `gamma` and `gamma^{-1}` are counted in
/// a length spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseClassConvention {
    /// `gamma` and `gamma^{-1}` are separate classes, each with its own entry
    /// (or a doubled multiplicity). Every class enters the hyperbolic trace
    /// with weight one.
    #[default]
    Distinct,
    /// Each entry stands for the pair `{gamma, gamma^{-1}}` and enters the
    /// hyperbolic trace with weight two.
    Identified,
}

impl InverseClassConvention {
    pub fn weight(&self) -> f64 {
        match self {
            InverseClassConvention::Distinct => 1.0,
            InverseClassConvention::Identified => 2.0,
        }
    }
}

impl std::str::FromStr for InverseClassConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distinct" => Ok(Self::Distinct),
            "identified" => Ok(Self::Identified),
            other => Err(format!("unknown inverse-class convention '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub quad: QuadratureConfig,
    /// Evaluate the elliptic `n`-sums as `(n, q-n)` pairs. Halves the work;
    /// switch off to check the pairing against the plain sum.
    pub pair_symmetric: bool,
    pub convention: InverseClassConvention,
    /// Constant `C` in the assumed growth `dN(l) <= C e^l dl` of the number
    /// of primitive classes, used only to bound the contribution of classes
    /// missing from a truncated spectrum.
    pub growth_constant: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            pair_symmetric: true,
            convention: InverseClassConvention::Distinct,
            growth_constant: 1.0,
        }
    }
}

impl TraceConfig {
    pub fn with_quad(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }
}
