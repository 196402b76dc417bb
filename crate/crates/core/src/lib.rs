//! String construction toolkit: Fortran-style edit descriptors, value
//! stringification, stream-style message assembly with manipulators, and a
//! verbosity- and rank-gated log manager.

pub mod conform;
pub mod editdesc;
pub mod logman;
pub mod stream;
pub mod stringify;

pub use editdesc::{parse, render, FormatList, SignMode};
pub use logman::{LogConfig, LogLevel, LogManager};
pub use stream::StreamBuilder;
pub use stringify::{v2s, BoolStyle, DefaultRules, Point3d, Stringifiable, Value};
