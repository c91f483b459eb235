//! Exact Hochschild and periodic cyclic homology of weight-graded free DG
//! algebras over `Z/p^n`, together with the crystalline periodic cyclic
//! complex built from a mod-`p` algebra and a lift of its differential to
//! `Z/p^2`, and the divided-power cyclic modules used to study it.

pub mod cli;
pub mod cyclic_homology;
pub mod free_dga;
pub mod hp_cris;
pub mod pd_cyclic;
pub mod periodic;
pub mod ring_core;
