pub mod cli;
pub mod dubins;
pub mod geom;
pub mod graph;
pub mod gtsp;
pub mod matrix;
pub mod mission;
pub mod planner;
pub mod sampling;
pub mod visibility;
