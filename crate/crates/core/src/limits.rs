/// Size and cost guardrails. None of these are mathematical limits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    /// Largest `n` for exact mixed discriminants by polarization.
    pub mixed_discriminant_max_n: usize,
    /// Largest `n` for the direct `(n!)^2` permutation sum.
    pub permutation_sum_max_n: usize,
    /// Largest `n` for Ryser permanents.
    pub permanent_max_n: usize,
    /// Largest `n` for exhaustive principal-minor sums.
    pub minor_sum_max_n: usize,
    /// Largest Taylor degree an approximation may request.
    pub max_taylor_degree: usize,
    /// Largest number of subset evaluations one derivative computation may perform.
    pub max_subset_evaluations: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            mixed_discriminant_max_n: 14,
            permutation_sum_max_n: 5,
            permanent_max_n: 20,
            minor_sum_max_n: 20,
            max_taylor_degree: 1_000_000,
            max_subset_evaluations: 50_000_000,
        }
    }
}
