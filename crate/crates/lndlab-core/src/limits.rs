//! Guardrails for the ideal engine. Buchberger can blow up; fail loudly.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of ring variables accepted by the engine.
    pub max_vars: usize,
    /// Cap on the total degree of any intermediate polynomial.
    pub max_total_degree: u32,
    /// Cap on processed s-pair reductions in one basis computation.
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vars: 10, max_total_degree: 64, max_steps: 4_000_000 }
    }
}

impl Limits {
    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_total_degree = d;
        self
    }

    pub fn with_max_vars(mut self, v: usize) -> Self {
        self.max_vars = v;
        self
    }
}
