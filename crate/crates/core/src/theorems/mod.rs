//! Executable versions of the structural results: closure of type-C
//! pro-objects under cofiltered limits and retracts, commutation of
//! cofiltered limits with finite colimits, exactness, the inexactness
//! example, and cocompactness.

mod closure;
mod cocompact;
mod commute;
mod inexact;

pub use closure::{exactness_check, retract_tower, type_c_limit_closure, RetractData};
pub use cocompact::{cocompact_check, cocompact_via_iso};
pub use commute::{check_commute, tower_of_diagrams, Commutation};
pub use inexact::{build_inexactness_witness, InexactnessWitness};

#[cfg(test)]
mod tests;
