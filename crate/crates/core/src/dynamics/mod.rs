//! Vector fields, Lie derivatives and parameter-linear templates.

mod field;
mod template;

pub use field::VectorField;
pub use template::Template;
