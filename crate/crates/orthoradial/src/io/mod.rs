//! Serialization: the line-oriented instance format, the JSON outcome
//! format, and SVG rendering of polar drawings.

pub mod format;
pub mod outcome;
pub mod svg;

pub use format::{emit_instance, parse_instance, InstanceFile, ParseError};
pub use outcome::{
    emit_outcome, parse_outcome, DrawnEdge, OutcomeFile, OutcomeVertex,
};
pub use svg::render_svg;
