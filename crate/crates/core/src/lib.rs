//! Exact open-book calculus for contact 3-manifolds, an embedding certifier
//! for codimension-2 iso-contact embeddings into standard spheres, and
//! numeric checks of the explicit contact-form constructions behind it.

pub mod certifier;
pub mod cli;
pub mod filling;
pub mod format;
pub mod linalg;
pub mod mcg;
pub mod numeric;
pub mod openbook;
pub mod surface;
