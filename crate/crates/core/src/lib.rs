pub mod abelian_ext;
pub mod brauer_q;
pub mod cli;
pub mod config;
pub mod finite;
pub mod graded_skeleton;
pub mod intmat;
pub mod location;
pub mod oracle;
pub mod qlattice;
pub mod rational;
