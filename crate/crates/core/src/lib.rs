pub mod multigraph;
pub mod planegraph;
pub mod shadow;
pub mod solver;
pub mod theory;
