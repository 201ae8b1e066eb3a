//! Deciding bend-free drawability of ortho-radial representations.
//!
//! Given a plane graph of maximum degree four together with an ortho-radial
//! representation (corner angles plus designated outer and central faces),
//! this crate decides whether the representation can be drawn on a
//! cylindrical grid without bends. A positive answer comes with concrete
//! polar coordinates; a negative answer comes with a strictly monotone
//! essential cycle that certifies undrawability and can be checked
//! independently.

pub mod compass;
pub mod draw;
pub mod engine;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod extract;
pub mod oracle;
pub mod preprocess;
pub mod rep;
pub mod io;
pub mod search;
