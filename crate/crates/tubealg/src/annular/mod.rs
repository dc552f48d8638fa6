//! Affine annular diagrams, the corner (centralizer) algebras of the tube
//! algebra for Temperley-Lieb-Jones categories, and their grading.

mod corner;
mod diagram;
mod element;
mod tube;

pub use corner::*;
pub use diagram::{AnnDiagram, Side};
pub use element::AnnElement;
pub use tube::{shape_tube, tube_to_cover, TubeRect};
