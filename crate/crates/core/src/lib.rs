//! State spaces of hybrid Landau-Ginzburg models with diagonal symmetry
//! groups, and the explicit mirror maps for the quintic and the
//! Libgober-Teitelbaum pair of cubics.

pub mod arith;
pub mod chiral;
pub mod cli;
pub mod mirror;
pub mod modelfile;
pub mod polycore;
pub mod statespace;
pub mod suite;
pub mod symmetry;
pub mod tables;

/// Model files shipped with the crate.
pub mod models {
    pub const LT_J: &str = include_str!("../models/lt_j.lg");
    pub const LT_SL: &str = include_str!("../models/lt_sl.lg");
    pub const LT_GENERIC_J: &str = include_str!("../models/lt_generic_j.lg");
    pub const LT_GENERIC_SL: &str = include_str!("../models/lt_generic_sl.lg");
    pub const QUINTIC_J: &str = include_str!("../models/quintic_j.lg");
    pub const QUINTIC_SL: &str = include_str!("../models/quintic_sl.lg");
}
