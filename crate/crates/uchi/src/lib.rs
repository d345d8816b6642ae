//! Simplicity of parabolically induced modules over reduced enveloping
//! algebras of classical Lie algebras, decided by a closed-form product
//! criterion and cross-checked by explicit module construction.

pub mod checks;
pub mod chevalley;
pub mod envalg;
pub mod err;
pub mod gf;
pub mod linalg;
pub mod modrep;
pub mod rcrit;
pub mod roots;
pub mod textfmt;

pub use err::{Error, Result};
