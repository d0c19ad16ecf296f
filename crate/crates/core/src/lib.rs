pub mod bounds;
pub mod chains;
pub mod coarse;
pub mod harness;
pub mod io;
pub mod lp;
pub mod marking;
pub mod parallel;
pub mod qm;
pub mod rational;
pub mod search;
pub mod word;
