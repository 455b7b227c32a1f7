//! Graded Lie algebras of split reductive p-adic groups and their mod-p
//! cohomology, computed by exact linear algebra over finite fields.

pub mod chevalley;
pub mod cohomology;
pub mod coinvariants;
mod error;
pub mod gradedlie;
pub mod linfp;
pub mod morava;
pub mod padicgroups;
pub mod par;
pub mod rootsys;

pub use error::{Error, Result};
