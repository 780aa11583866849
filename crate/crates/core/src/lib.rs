pub mod constructions;
pub mod harness;
pub mod machine;
pub mod nat;
pub mod space;
pub mod treemaps;
pub mod trees;
