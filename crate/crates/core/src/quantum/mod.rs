//! Dense one- and two-qubit linear algebra and density-operator primitives.

mod channel;
mod info;
mod matrix;
mod spectral;
mod state;

pub use channel::{apply_kraus, KrausSet};
pub use info::{fidelity, relative_entropy, von_neumann_entropy};
pub use matrix::{
    c, identity2, re, sigma_x, sigma_y, sigma_z, tensor, ComplexMatrix, Dim, C64, I, ONE, ZERO,
};
pub use spectral::{eig_herm, HermitianEigen};
pub use state::{partial_trace_path, DensityOperator};
