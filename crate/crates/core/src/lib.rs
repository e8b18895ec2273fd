pub mod catalog;
pub mod cli;
pub mod colimits;
pub mod fincat;
pub mod gaction;
pub mod group;
pub mod homology;
pub mod io;
pub mod present;
pub mod sset;
pub mod verify;
