pub mod asymptotics;
pub mod error;
pub mod hyperf;
pub mod kernels;
pub mod numeric;
pub mod oracle;
pub mod selfcheck;
pub mod study;

pub use error::{Error, Result};
