#![allow(non_snake_case)]

pub mod error;
pub mod numerics;
pub mod hurwitz;
pub mod meansq;
pub mod asymptotics;
pub mod lattice;
pub mod harness;
