//! Library surface of the experiment runner, exposed so integration and
//! acceptance tests can drive runs in-process.

pub mod catalogue;
pub mod config;
pub mod run;
