//! Finite-ring reference solutions: dense exact diagonalization and a
//! momentum-space free-fermion solver.

mod dense;
mod fermion;
mod pfaffian;

pub use dense::{
    build_hamiltonian, correlators_from_ground_state, finite_correlators, ground_state,
    reduced_two_spin, ChainHamiltonian, GroundStateResult, MAX_DENSE_SITES, MIN_DENSE_SITES,
};
pub use fermion::{
    free_fermion_correlators, free_fermion_ground_state, FreeFermionState, MAX_FREE_FERMION_SITES,
};
pub use pfaffian::pfaffian;

use crate::model::ModelParams;

pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteChainSpec {
    pub n: usize,
    pub params: ModelParams,
    pub degeneracy_rel_tol: f64,
}

impl FiniteChainSpec {
    pub fn new(n: usize, params: ModelParams) -> Self {
        Self {
            n,
            params,
            degeneracy_rel_tol: DEFAULT_DEGENERACY_REL_TOL,
        }
    }
}
