//! Command-line front end: text grammars and file formats, verification
//! reports, point clouds and the acceptance suite.

pub mod app;
pub mod checks;
pub mod cloud;
pub mod formats;
pub mod grammar;
pub mod oracles;
pub mod report;
pub mod suite;
