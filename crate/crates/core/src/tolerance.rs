/// Tolerances shared by the stratum-aware operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative threshold for rank, nullspace and idempotency decisions.
    pub rank: f64,
    /// Eigenvalue clustering tolerance; also bounds the relative
    /// characteristic-polynomial residual accepted for a multiplicity pattern.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank: 1e-8, cluster: 1e-6 }
    }
}
