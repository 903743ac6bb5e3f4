//! Lattice geometry: polycubes, the cube rotation group, textured cubes and
//! their nets.

mod cube;
mod deconstruct;
mod lattice;
mod net;
mod orientation;
mod polycube;
mod prism;
pub mod texture;

pub use cube::{create_cube_with_textures, TexturedCube};
pub use deconstruct::deconstruct_shape;
pub use lattice::{Cell, FaceId, ARENA};
pub use net::{fold_net, unfold_cube, CubeNet, NetLayout, NetPlacement, ANCHOR};
pub use orientation::{all_orientations, Orientation};
pub use polycube::{create_combination_shape, Polycube, MAX_GROWTH_RETRIES};
pub use prism::{merge_prisms, Prism};
pub use texture::{FaceTexture, Quarter, TextureId};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("shape has no cells")]
    Empty,
    #[error("cell {0} is not face-connected to the rest of the shape")]
    Disconnected(Cell),
    #[error("cell {0} appears twice")]
    DuplicateCell(Cell),
    #[error("cell range [{lo}, {hi}] is empty")]
    DegenerateRange { lo: usize, hi: usize },
    #[error("shape growth ran out of arena after {MAX_GROWTH_RETRIES} attempts")]
    ArenaOverflow,
    #[error("palette has {asymmetric} asymmetric glyphs of {total}; a cube needs 6")]
    PaletteTooSmall { asymmetric: usize, total: usize },
    #[error("net cannot be folded: {0}")]
    NonFoldable(String),
    #[error("cannot split {cells} cells into {parts} connected parts")]
    CannotSplit { cells: usize, parts: usize },
}
