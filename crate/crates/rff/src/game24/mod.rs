//! Exact-arithmetic Game of 24: combine the given numbers with
//! `+ - * /`, each used exactly once, to reach the goal (24 by default).
//!
//! The module provides the deterministic oracle adapter for the tree-search
//! engine, a brute-force solvability oracle that stays independent of the
//! search path, and the chain verifier and formatter every solved run is
//! gated through. Intermediate negative and fractional values are allowed;
//! only the final result must hit the goal exactly.

mod brute;
mod chain;
mod corpus;
mod moves;
mod oracle;
mod set;
mod value;

pub use brute::{add_redundant_one, brute_force_solvable, brute_force_witness, combination_count};
pub use chain::{eval_expression, expression_chain, format_solution, verify_chain, ChainCheck};
pub use corpus::{all_multisets, sample_multisets};
pub use moves::{legal_moves, ArithMove, Op};
pub use oracle::{
    assemble_path_chain, find_completing_move, state_check_sets, Game24Oracle, Game24State,
    Game24Target,
};
pub use set::NumberSet;
pub use value::{parse_rat, rat, rat_frac, render_rat, Rat};
