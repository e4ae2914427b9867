pub mod certify;
pub mod embed;
pub mod enumerate;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod paths;
pub mod placement;
pub mod planarity;
pub mod reduce;
pub mod region;
pub mod solver;
