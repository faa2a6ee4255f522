//! JSON formats, random instances and the command implementations behind the
//! `langton` binary.

pub mod commands;
pub mod document;
pub mod instances;
