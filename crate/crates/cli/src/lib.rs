//! Command implementations for the `fpb` binary. Each command returns a
//! [`report::ReportRecord`] that renders as text or JSON.

pub mod commands;
pub mod report;
pub mod verify;
