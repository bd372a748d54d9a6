//! Front end for the Link Smoothing Game: graph input, verification suites,
//! play sessions and the local HTTP service.

pub mod report;
pub mod service;
pub mod session;
pub mod suites;
