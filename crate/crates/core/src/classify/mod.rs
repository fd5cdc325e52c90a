//! Denting molecules, the Daugavet test and its segment form, the descent
//! and witness procedures, and slice-length scans.

mod daugavet;
mod denting;
mod descent;
mod scan;
mod slice;
mod witness;

pub use daugavet::{
    condition_iii_check, is_daugavet, ConditionReport, ConditionRow, DaugavetStatus,
    DaugavetVerdict, DentingDistance,
};
pub use denting::{denting_molecules, denting_set, distance_to_molecule, is_denting};
pub use descent::{denting_descent, DescentResult};
pub use scan::{delta_scan, make_slices, NamedSlice, ScanRow, SliceConfig};
pub use slice::Slice;
pub use witness::{
    daugavet_witness_search, TerminalReason, WitnessOutcome, WitnessReport, WitnessStep,
};
