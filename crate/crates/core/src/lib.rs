//! Exact tools for deciding whether a virtually abelian group is Helly, plus the
//! supporting constructions around that decision: stable norms of word metrics on Zⁿ,
//! Helly checks of finite graphs, pushouts of finite group extensions and graded Lie
//! algebras.

pub mod exactcore;
pub mod crystal;
pub mod hyperoct;
pub mod stablenorm;
pub mod hellygraph;
pub mod extension;
pub mod nilpotent;
pub mod fixtures;
