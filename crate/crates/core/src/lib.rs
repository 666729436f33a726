pub mod bench;
pub mod bernstein;
pub mod cells;
pub mod corridor;
pub mod geom;
pub mod planner;
pub mod predict;
pub mod sim;
