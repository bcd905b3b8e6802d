pub mod ddsp;
pub mod dalvks;
pub mod dense;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
mod grow;
pub mod lp;
pub mod oracle;
pub mod par;
pub mod relax;
pub mod report;
