//! Rank modulation over DeBruijn-graph profile vectors.
//!
//! A circular string over `Z_q` has a profile vector counting each of its
//! length-`ell` windows. The relative order of those counts is a permutation of
//! `Z_q^ell`; this crate decides which permutations arise that way, builds
//! witness strings, and implements two recursive encoders that map structured
//! information vectors to realizable permutations together with their decoders.

pub mod channel;
pub mod codes;
pub mod encoder;
pub mod error;
pub mod feasibility;
pub mod math;
pub mod oracle;
pub mod perm;
pub mod profile;
pub mod synthesis;
pub mod word;

pub use error::{Error, Result};
pub use feasibility::{decide, FeasibleVector, InfeasibilityWitness, Verdict};
pub use perm::{rank_of, satisfies, RankPermutation};
pub use profile::{profile_of, ProfileVector};
pub use word::{homo_d, homo_d_preimages, t_neighborhood, Params, Word};
