pub mod distractor;
pub mod geometry;
pub mod pipeline;
pub mod render;
pub mod seed;
pub mod view;
