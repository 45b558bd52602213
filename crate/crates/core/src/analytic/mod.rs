//! Integral counting formulas and upper bounds for `J_n`.

mod bounds;
mod integrals;
mod quadrature;

pub use bounds::{
    binary_entropy, bound_report, erf, erfc, es_upper_bound, hoeffding_partial_row_bound,
    holder_admits, holder_upper_bound, partial_square_sum, pow2_upper_bound, refined_upper_bound,
    remark_admits, remark_upper_bound, BoundReport, PartialRowBound, RefinedBound,
};
pub use integrals::{
    es_count_integral, freiman_check, freiman_count, freiman_integral, jn_integral_estimate,
    ES_SUM_CAP, FREIMAN_CAP, JN_INTEGRAL_CAP,
};
pub use quadrature::{
    gauss_legendre, QuadratureSpec, DEFAULT_NODES_PER_PERIOD, DEFAULT_TOLERANCE, MAX_NODES,
};
