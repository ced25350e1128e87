//! Certified checks of the carry condition that fixes Waring's `g(k)`, and of the
//! comb-segment inequalities used to argue that it never holds.

pub mod cli;
pub mod exact;
pub mod figures;
pub mod lemmas;
pub mod real;
pub mod report;
pub mod segments;
pub mod verdict;
