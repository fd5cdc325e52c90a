//! Elements of the free space over a finite metric space, Lipschitz
//! functions as their duals, and the exact norm.

mod element;
mod lipschitz;
mod transport;

pub use element::{combine, molecule, total_weight, FreeElement, MoleculeTerm};
pub use lipschitz::{
    envelope_values, lipschitz_constant, mcshane_extend, mcshane_extend_with, pairing, Envelope,
    LipschitzFunction,
};
pub use transport::{norm, norm_value, norm_with, FlowArc, NormCertificate, PathRule};
