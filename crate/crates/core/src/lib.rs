pub mod catalog;
pub mod code;
pub mod criteria;
pub mod error;
pub mod fla;
pub mod gf;
pub mod json;
pub mod recipes;
pub mod suite;
pub mod tgrs;

pub use error::{Error, Result};
pub use gf::{Elem, Embedding, Field, FieldElement, Poly};
pub use fla::Matrix;
pub use code::{Bounds, CodeReport, LinearCode, MdsClass, QuantumParams};
pub use tgrs::{EvalData, TgrsInstance, TwistMatrix};
pub use recipes::{construct, verify_recipe, Construction, Recipe, RecipeId};
