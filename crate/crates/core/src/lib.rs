pub mod cli;
pub mod exact_arith;
pub mod fplde_base;
pub mod product_rep;
pub mod pt_solver;
pub mod summation_api;
pub mod tower;
