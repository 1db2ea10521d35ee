pub mod algebra;
pub mod curve;
pub mod maps;
pub mod picard;
pub mod cli;
