pub mod construct;
pub mod drawings;
pub mod gabriel;
pub mod geom;
pub mod sample;
pub mod verify;
