//! Numbered patterns, forests and fractions for the monoid `Pi`, the group
//! of fractions `2V-hat` and the two-dimensional Thompson group `2V`,
//! with normal forms and verification tables for their presentations.

pub mod forest;
pub mod fractions;
pub mod pattern;
pub mod pi_monoid;
pub mod presentations;
pub mod rect;
pub mod render;
pub mod sampling;
pub mod two_v;
pub mod words;

pub use pattern::{NumberedPattern, NumberedRect, PatternError};
pub use rect::{DyadicRect, Label};
pub use words::{Alphabet, Generator, Kind, ParseError, Sign, Word};
