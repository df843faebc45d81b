pub mod arith;
pub mod error;
pub mod series;
pub mod chi;
pub mod graphs;
pub mod asymptotics;
pub mod verify;
pub mod cli;
