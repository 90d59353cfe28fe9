//! Fusion systems, centric linking systems and Robinson amalgams of finite
//! groups, with exact verification of the outer automorphism correspondence.

pub mod config;
pub mod error;
pub mod groups;
pub mod fusion;
pub mod linking;
pub mod catalog;
pub mod amalgam;
pub mod autos;
pub mod pipeline;
pub mod report;
