//! Simulation harness: channels, frozen-set files and construction,
//! exhaustive reference decoders, frame-error-rate runs and complexity
//! reports.

pub mod channel;
pub mod construct;
pub mod fer;
pub mod frozen;
pub mod oracle;
pub mod report;
