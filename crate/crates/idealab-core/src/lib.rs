//! Exact computations for ideal approximation theory over finite algebras
//! presented over Z/n.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algcat;
pub mod approx;
pub mod error;
pub mod ideals;
pub mod stab;
pub mod wkc;
pub mod znlin;

pub use error::{Error, Result};

/// Outcome of a decision procedure. `Undecided` means a budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        }
    }

    /// Conjunction: any failure wins, then any undecided.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Pass,
        }
    }
}
