pub mod boundary_map;
pub mod douady_earle;
pub mod error;
pub mod fuchsian;
pub mod io;
pub mod marked_moduli;
pub mod mcg_action;
pub mod moebius;
pub mod pants_builder;

pub use error::{Error, Result};
