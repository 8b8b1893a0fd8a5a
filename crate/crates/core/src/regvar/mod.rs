//! Regularly varying functions h, their exact floors, inverses phi and the
//! integer sets N_h = {floor(h(m)) : m >= N0}.

mod exponent;
mod floor;
mod floorset;
mod function;

pub use exponent::RationalExponent;
pub use floor::{ceil_root, floor_pow, floor_pow_big, floor_pow_table};
pub use floorset::FloorSet;
pub use function::{Factor, Precision, RegVarFunction};
