//! Exact scalars, partitions, parameter tuples and Pochhammer-type products.

mod params;
mod partition;
mod pochhammer;
mod scalar;

pub use params::{parse_complex, ConjugatePair, Params, ParamsSummary};
pub use partition::{graded_cmp, partitions_of, partitions_up_to, Partition, PartitionStats};
pub use pochhammer::{c_minus, c_plus, gen_pochhammer, gen_pochhammer_conjpair};
pub use scalar::{
    exact_sqrt, format_scalar, int, parse_scalar, powi, rat, sqrt_bracket, to_f64, Scalar,
};
