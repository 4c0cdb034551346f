//! Process and claim-law models: exponents, right-inverses and the
//! adjustment coefficient.

mod jump;
mod model;

pub use jump::JumpLaw;
pub use model::{LevyModel, Orientation};
