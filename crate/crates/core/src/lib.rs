#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chain;
pub mod error;
pub mod field;
pub mod linalg;
pub mod ring;
pub mod simplicial;
pub mod builders;
pub mod engine;
pub mod verify;
