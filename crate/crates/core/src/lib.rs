pub mod caps;
pub mod error;
pub mod hagedorn;
pub mod io;
pub mod kron_oracle;
pub mod matrix;
pub mod multiindex;
pub mod random;
pub mod symkron;
pub mod symspace;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use multiindex::MultiIndex;
pub use symspace::{FullVec, SymVec};
