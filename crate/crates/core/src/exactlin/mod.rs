//! Exact integer and rational linear algebra: normal forms, kernels,
//! cokernels, dual-basis solves, and bounded lattice-point enumeration.
//!
//! Everything downstream builds on this module. All operations are pure
//! functions of immutable inputs and use arbitrary precision throughout.

mod enumerate;
mod group;
mod intmat;
mod ratmat;

pub use enumerate::{enumerate_lattice_points, extreme_rays, AffineIneq};
pub use group::{
    cokernel, cokernel_full, dual_kernel_generators, free_columns, gale_dual, kernel_basis,
    nstar_image, order_in_cokernel, rat_is_integral, Cokernel, FgAbelianGroup, LatticeMap,
};
pub use intmat::{
    kernel_columns, same_span, smith_normal_form, solve_integer, span_contains, IntMatrix, Snf,
};
pub use ratmat::{
    add_vec, ceil_int, dot, dual_basis_solve, floor_int, frac_part, invert, is_integer,
    is_zero_vec, parse_rat, primitive_direction, rank, rat, rat_int, render_rat, render_rat_vec,
    scale, sign, solve_in_columns, sub_vec, to_rat_vec, zero_vec, Rat, RatVector,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactlinError {
    #[error("map has infinite cokernel")]
    InfiniteCokernel,
    #[error("input vectors do not form a basis")]
    SingularInput,
    #[error("region is unbounded in coordinate {coordinate}")]
    UnboundedRegion { coordinate: usize },
    #[error("invariant factors must form a divisibility chain with entries >= 2")]
    BadInvariantFactors,
    #[error("matrix does not respect torsion relations")]
    NotWellDefinedOnTorsion,
    #[error("operation requires a free source group")]
    SourceNotFree,
    #[error("cone contains a line")]
    NotPointed,
}
