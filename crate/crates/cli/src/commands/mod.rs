pub mod bench;
pub mod formalize;
pub mod graph;
pub mod refine;
pub mod select;
pub mod verify;
