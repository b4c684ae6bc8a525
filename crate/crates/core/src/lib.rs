pub mod be_example;
pub mod branched;
pub mod cli;
pub mod sequence;
pub mod slope;
pub mod surface;
mod unionfind;
pub mod words;
