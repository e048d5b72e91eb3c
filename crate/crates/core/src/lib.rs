//! Equivariant homology and cohomology of finite groups with operators.
//!
//! A finite group `G` with an action of a finite group `Γ` by automorphisms and a
//! `G⋊Γ`-module `A` determine the groups `H_n^Γ(G, A)` and `H^n_Γ(G, A)`. They are
//! computed here from the Γ-equivariant bar complex over orbit representatives
//! of `G^n`, with exact integer arithmetic throughout.

pub mod bar;
pub mod cli;
pub mod cohom;
pub mod eqgrp;
pub mod ext;
pub mod gmod;
pub mod grp;
pub mod zmod;

mod error;

pub use error::Error;
