//! Closure operations on recognizable forests.

mod boolean;
mod hom;
mod local;
mod substitution;

pub use boolean::{complement, difference, intersect, union};
pub(crate) use boolean::pair;
pub use hom::{hom_image, hom_preimage, TreeHomomorphism};
pub use local::{is_local, local_hull, local_recognizer, medvedev_presentation, LocalSpec};
pub use substitution::{x_iteration, x_product};
