//! Representation zeta functions of compact p-adic analytic groups.

pub mod cache;
pub mod clifford;
pub mod dirichlet;
pub mod fingroup;
pub mod forbits;
pub mod kirillov;
pub mod lie;
pub mod matalg;
pub mod padicint;
pub mod poly;
pub mod qring;
pub mod verify;
