pub mod chain;
pub mod error;
pub mod hook;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod metropolis;
pub mod normal;
pub mod partition;
pub mod sampler;
pub mod scalar;
pub mod stein;
pub mod symfunc;
pub mod theta;
pub mod verify;
