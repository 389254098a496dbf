//! Triangulations of the hexahedron: combinatorial enumeration, oriented
//! matroid feasibility, exact geometric realizations and detection of
//! hexahedra in tetrahedral meshes.

pub mod ball;
pub mod boundary;
pub mod catalog;
pub mod chirotope;
pub mod decomp;
pub mod encode;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod final_poly;
pub mod jacobian;
pub mod lp;
pub mod meshscan;
pub mod pipeline;
pub mod realize;
pub mod sat;
pub mod simplex;
pub mod sphere;
pub mod template;
pub mod triangulation;

pub use catalog::{Catalog, CatalogEntry};
pub use error::{Error, Result};
pub use triangulation::{CanonicalKey, Triangulation};
