//! Tables of dimensions and the globular sums they index.

mod globular_set;
mod product;
mod realize;
mod table;
mod tree;

pub use globular_set::{hom_sets, CellRef, GSMorphism, GlobularSet};
pub use product::{globular_product, globular_product_of, Glue};
pub use realize::{
    cell_count_formula, cosource_cotarget, cosource_cotarget_tops, extend_from_tops, hom_theta0, realization, realize,
    sub_diagrams, Realization, SubDiagram,
};
pub use table::{boundary, dimension, enumerate_tables, Table};
pub use tree::PlanarTree;
