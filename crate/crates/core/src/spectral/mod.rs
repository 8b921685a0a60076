//! Spectra, girth and diameter of Cayley graphs of SL₂(F_p).

pub mod blocks;
pub mod eigen;
pub mod graph;

pub use eigen::{
    full_spectrum, gap_from_diameter, spectrum, trace_method_check, DiameterGapReport, Method, SpectrumSummary,
    TraceMethodReport,
};
pub use graph::CayleyGraph;
