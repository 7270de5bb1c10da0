//! Decides whether the fixed field of a permutation group acting on
//! `k(x_1, …, x_n)` is rational over the corresponding field of
//! cross-ratios, using the orbit-parity criterion, and emits certificates
//! that can be re-checked with nothing but membership and order queries.
//!
//! Points are 1-indexed at every public interface, and permutations compose
//! with the right factor acting first.

pub mod classify;
pub mod cli;
pub mod crossratio;
pub mod error;
pub mod group;
pub mod limits;
pub mod perm;
pub mod rationality;
pub mod two_group;

pub use classify::{enumerate_subgroups, tabulate, ClassRow, ClassifyOptions, RowVerdict};
pub use crossratio::{
    check_descended_action, check_invariance, cross_ratio, kn_coordinates, CrossRatioTuple, Mobius,
    ProjPoint,
};
pub use error::{Error, Result};
pub use group::{brute_force_closure, is_conjugate_subgroup, GroupSpec, Orbit, OrbitDecomposition, PermGroup};
pub use perm::{parse_cycles, Permutation, MAX_DEGREE};
pub use rationality::{decide, reduce_to_sylow, witness_nonrational, Verdict, VerdictKind};
pub use two_group::{fixed_points, frattini_2group, index2_over, sylow_2, Index2Witness, SylowWitness};
