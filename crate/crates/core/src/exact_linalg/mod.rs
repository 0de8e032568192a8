//! Exact arithmetic for finite abelian groups: Smith normal form, subgroups,
//! homomorphisms, quotients and tensor products over the integers.

mod group;
mod hom;
mod quotient;
pub mod snf;
mod subgroup;
mod tensor;

pub use group::{Elements, FinAbGroup};
pub use hom::AbHom;
pub use quotient::{descend_bilinear, induced_map, quotient, Quotient, Side};
pub use snf::{smith_normal_form, Smith};
pub use subgroup::{subgroup_equal, Subgroup, SubgroupPresentation};
pub use tensor::{tensor_z, Bilinear, TensorZ};

/// Group elements are coordinate vectors over the cyclic generators.
pub type Elem = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("cyclic orders must be positive, got {0}")]
    InvalidOrder(i64),
    #[error("{elem:?} is not an element of the group with orders {orders:?}")]
    NotAnElement { elem: Elem, orders: Vec<i64> },
    #[error("generator {generator} has order dividing {order} but maps to {image:?}")]
    InvalidHom {
        generator: usize,
        order: i64,
        image: Elem,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map is not well defined on the quotient: {witness:?} maps to {image:?}")]
    NotWellDefined { witness: Elem, image: Elem },
    #[error("subgroup and group have different ambient groups")]
    AmbientMismatch,
}
