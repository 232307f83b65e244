//! Exact enumeration of Sidon and α-generalized Sidon families, the
//! extremal function `Φ(n)`, classical constructions and growth tables.

mod construct;
mod count;
mod extremal;
mod growth;
pub mod oracle;

pub use construct::{erdos_turan_set, is_prime, prime_power, singer_set};
pub use count::{count_generalized, count_generalized_capped, count_sidon_sets, CountResult, DEFAULT_COUNT_CAP};
pub use extremal::{max_sidon, max_sidon_capped, max_sidon_heuristic, phi_table, ExtremalResult, DEFAULT_PHI_CAP};
pub use growth::{
    growth_table, growth_table_csv, random_lower_bound_experiment, AlphaRule, GrowthRow, LowerBoundEstimate,
};
