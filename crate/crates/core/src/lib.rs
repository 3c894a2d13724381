//! Exact arithmetic for the largeness and congruence-subgroup criteria of
//! arithmetic Kleinian groups.

pub mod counting;
pub mod dyadic;
pub mod finquot;
pub mod fp;
pub mod fpgroups;
pub mod linalg;
pub mod numfield;
pub mod orbifold;
pub mod poly;
pub mod quatalg;
pub mod ser;
pub mod smith;
pub mod taugraphs;
pub mod towers;
pub mod traceorders;
pub mod trivalent;
