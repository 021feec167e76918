//! Library half of the batch driver: report document types, the exact
//! identity suites, and the floating quadrature oracle. The `omega3` binary
//! is a thin command dispatcher over these.

pub mod oracle;
pub mod report;
pub mod suites;
