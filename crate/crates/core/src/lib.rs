//! Exact-arithmetic toolkit for smooth toric Deligne-Mumford stacks.
//!
//! The crate computes, over arbitrary-precision integers and rationals:
//!
//! - normal forms, kernels, cokernels and Gale duals of integer matrices
//!   and finitely generated abelian groups ([`exactlin`]);
//! - stacky fans, box elements with ages, torus fixed-point weights,
//!   wall adjacency and Mori cones ([`fan`]);
//! - extended degree lattices with their rational splitting and reduction
//!   function ([`extension`]);
//! - degrees of representable maps from orbifold footballs across walls
//!   ([`curves`]);
//! - factored products of linear forms in the equivariant parameters,
//!   the closed representation of every series coefficient ([`linform`]);
//! - truncated extended equivariant I-functions restricted to fixed
//!   points ([`ifun`]);
//! - symbolic verification of the pole and residue-recursion conditions
//!   that characterize Lagrangian-cone membership ([`verify`]).
//!
//! No floating point is used anywhere; every identity is checked as an
//! exact equality of canonical forms.

pub mod curves;
pub mod exactlin;
pub mod extension;
pub mod fan;
pub mod ifun;
pub mod linform;
pub mod parallel;
pub mod verify;

pub use exactlin::Rat;
