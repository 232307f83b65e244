//! Graph-container certificates for (generalized) Sidon sets.
//!
//! A set `I` is first cleaned of heavy vertices ([`clean_heavy`]). The
//! cleaned set is then run through a phased max-degree peeling on the
//! multigraphs `H^U(A)` ([`core_algorithm`]), which records the selected
//! vertices `R₀, …, R_L` and auxiliary sets `U₀, …, U_{L−1}`. Those alone
//! determine the nested containers `C₀ ⊇ … ⊇ C_L`
//! ([`reconstruct_containers`]), and [`verify_certificate`] checks the seven
//! size and containment conditions.

mod build;
mod clean;
mod engine;
mod replay;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::IntSet;

pub use build::{build_certificate, certify, BuildOptions, Mode};
pub use clean::clean_heavy;
pub use engine::{core_algorithm, CoreEngine, CoreOutcome, CoreState, RoundLog};
pub use replay::reconstruct_containers;
pub use verify::{verify_certificate, ConditionCheck, StopBranch, VerificationReport, Witness};

/// Preference order used to break ties between maximum-degree vertices.
///
/// Serialized as the string `"ascending"` or as an explicit permutation of
/// `[n]` listing vertices from most to least preferred.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TieOrderRepr", into = "TieOrderRepr")]
pub enum TieOrder {
    #[default]
    Ascending,
    Explicit(Vec<u32>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TieOrderRepr {
    Name(String),
    Permutation(Vec<u32>),
}

impl TryFrom<TieOrderRepr> for TieOrder {
    type Error = String;

    fn try_from(r: TieOrderRepr) -> std::result::Result<Self, String> {
        match r {
            TieOrderRepr::Name(s) if s == "ascending" => Ok(TieOrder::Ascending),
            TieOrderRepr::Name(s) => Err(format!("unknown tie order {s:?}")),
            TieOrderRepr::Permutation(p) => Ok(TieOrder::Explicit(p)),
        }
    }
}

impl From<TieOrder> for TieOrderRepr {
    fn from(t: TieOrder) -> Self {
        match t {
            TieOrder::Ascending => TieOrderRepr::Name("ascending".into()),
            TieOrder::Explicit(p) => TieOrderRepr::Permutation(p),
        }
    }
}

impl TieOrder {
    /// `rank[v]` for `v ∈ [0, n]`; lower ranks win ties.
    pub fn ranks(&self, n: u32) -> Result<Vec<u32>> {
        match self {
            TieOrder::Ascending => Ok((0..=n).collect()),
            TieOrder::Explicit(perm) => {
                if perm.len() != n as usize {
                    return Err(Error::Argument(format!(
                        "tie order lists {} vertices, expected {n}",
                        perm.len()
                    )));
                }
                let mut rank = vec![u32::MAX; n as usize + 1];
                for (pos, &v) in perm.iter().enumerate() {
                    if v == 0 || v > n || rank[v as usize] != u32::MAX {
                        return Err(Error::Argument(format!(
                            "tie order is not a permutation of [1, {n}] (at {v})"
                        )));
                    }
                    rank[v as usize] = pos as u32;
                }
                rank[0] = u32::MAX;
                Ok(rank)
            }
        }
    }
}

/// Which initial set-up produced `R₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum CaseTag {
    /// Few heavy vertices: `R₀ = I_h`.
    FewHeavy = 1,
    /// Many heavy vertices: `R₀ = S(W)` for a sampled `W`.
    Sampled = 2,
}

impl From<CaseTag> for u8 {
    fn from(c: CaseTag) -> u8 {
        c as u8
    }
}

impl TryFrom<u8> for CaseTag {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(CaseTag::FewHeavy),
            2 => Ok(CaseTag::Sampled),
            _ => Err(format!("caseTag must be 1 or 2, got {v}")),
        }
    }
}

/// The data from which the container chain is rebuilt without `I`.
///
/// JSON layout: `{n, alpha, caseTag, tieOrder, removed, L, R, U, seed}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub n: u32,
    pub alpha: u64,
    pub case_tag: CaseTag,
    pub tie_order: TieOrder,
    /// `I − I′` from the cleaning step.
    pub removed: IntSet,
    #[serde(rename = "L")]
    pub phases: usize,
    /// `R₀, …, R_L`.
    #[serde(rename = "R")]
    pub r: Vec<IntSet>,
    /// `U₀, …, U_{L−1}`.
    #[serde(rename = "U")]
    pub u: Vec<IntSet>,
    pub seed: u64,
}

impl Certificate {
    /// `⋃ R_i`.
    pub fn selected(&self) -> IntSet {
        self.r.iter().fold(IntSet::empty(), |acc, r| acc.union(r))
    }

    /// Checks lengths and ground-set membership (not the size bounds).
    pub fn check_shape(&self) -> Result<()> {
        if self.r.len() != self.phases + 1 {
            return Err(Error::MalformedCertificate(format!(
                "L = {} needs {} R-sets, found {}",
                self.phases,
                self.phases + 1,
                self.r.len()
            )));
        }
        if self.u.len() != self.phases {
            return Err(Error::MalformedCertificate(format!(
                "L = {} needs {} U-sets, found {}",
                self.phases,
                self.phases,
                self.u.len()
            )));
        }
        for s in self.r.iter().chain(&self.u).chain(std::iter::once(&self.removed)) {
            s.check_within(self.n)
                .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
        }
        Ok(())
    }
}

/// `C₀ ⊇ C₁ ⊇ … ⊇ C_L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainerChain {
    #[serde(rename = "C")]
    pub c: Vec<IntSet>,
}

impl ContainerChain {
    pub fn last(&self) -> &IntSet {
        self.c.last().expect("a chain always holds C0")
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_nested(&self) -> bool {
        self.c.windows(2).all(|w| w[1].is_subset(&w[0]))
    }

    pub fn is_strictly_nested(&self) -> bool {
        self.c.windows(2).all(|w| w[1].is_subset(&w[0]) && w[1].len() < w[0].len())
    }
}
