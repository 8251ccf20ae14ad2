//! h-index, g-index, generalized impact factor and the decompositions of
//! total citations around each index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::CitationVector;
use crate::Ratio;

/// How the g-index treats the end of the vector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GConvention {
    /// g never exceeds the number of papers.
    #[default]
    Cap,
    /// The vector is treated as followed by uncited papers, so g can exceed P.
    Pad,
}

/// Largest `i` such that the `i`-th most cited paper has at least `i` citations.
pub fn compute_h(v: &CitationVector) -> u64 {
    // Counts are non-increasing, so the qualifying ranks form a prefix.
    v.iter()
        .zip(1u64..)
        .take_while(|&(&c, rank)| c >= rank)
        .count() as u64
}

/// Largest `i` such that the top `i` papers hold at least `i²` citations.
pub fn compute_g(v: &CitationVector, convention: GConvention) -> u64 {
    let mut cumulative = 0u64;
    let mut g = 0u64;
    for (&c, rank) in v.iter().zip(1u64..) {
        cumulative += c;
        if cumulative >= rank * rank {
            g = rank;
        }
    }
    match convention {
        GConvention::Cap => g,
        GConvention::Pad => {
            let papers = v.len() as u64;
            // Beyond P the cumulative sum stays at Σc, so the padded scan
            // continues while Σc >= i², i.e. up to isqrt(Σc).
            if g == papers {
                g.max(cumulative.isqrt())
            } else {
                g
            }
        }
    }
}

/// Σc / P as an exact ratio.
pub fn generalized_if(v: &CitationVector) -> Result<Ratio> {
    if v.is_empty() {
        return Err(Error::UndefinedRatio(
            "impact factor of a venue with no papers".to_string(),
        ));
    }
    Ok(Ratio::new(v.total(), v.len() as u64))
}

/// `Σc = h² + excess + tail_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HDecomposition {
    pub h: u64,
    pub h_sq: u64,
    /// Σ_{i≤h} (c_i − h)
    pub excess: u64,
    /// Σ_{i>h} c_i
    pub tail_h: u64,
}

impl HDecomposition {
    pub fn total(&self) -> u64 {
        self.h_sq + self.excess + self.tail_h
    }
}

/// `Σc = g² + slack + tail_g`, with g under the cap convention.
///
/// `slack` is how far the top-g cumulative count overshoots g². It is zero
/// only when the top g papers hold exactly g² citations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GDecomposition {
    pub g: u64,
    pub g_sq: u64,
    pub slack: u64,
    /// Σ_{i>g} c_i
    pub tail_g: u64,
}

impl GDecomposition {
    pub fn total(&self) -> u64 {
        self.g_sq + self.slack + self.tail_g
    }
}

pub fn decompose_h(v: &CitationVector) -> HDecomposition {
    let h = compute_h(v);
    let (head, tail) = v.as_slice().split_at(h as usize);
    HDecomposition {
        h,
        h_sq: h * h,
        excess: head.iter().map(|&c| c - h).sum(),
        tail_h: tail.iter().sum(),
    }
}

pub fn decompose_g(v: &CitationVector) -> GDecomposition {
    let g = compute_g(v, GConvention::Cap);
    let (head, tail) = v.as_slice().split_at(g as usize);
    let head_sum: u64 = head.iter().sum();
    GDecomposition {
        g,
        g_sq: g * g,
        slack: head_sum - g * g,
        tail_g: tail.iter().sum(),
    }
}

/// Every term of the relation between g² − h² and the citation tails.
///
/// Exactly, `g² − h² = excess + tail_h − tail_g − slack`. Dropping `slack`
/// turns this into an upper bound on `g² − h²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub h: u64,
    pub g: u64,
    /// g² − h²
    pub lhs: i64,
    pub excess: i64,
    pub tail_h: i64,
    pub tail_g: i64,
    /// excess + tail_h − tail_g
    pub rhs_paper: i64,
    pub slack: i64,
    /// lhs = rhs_paper − slack
    pub exact_holds: bool,
    /// lhs ≤ rhs_paper
    pub bound_holds: bool,
    /// tail_h ≥ tail_g
    pub tail_diff_nonneg: bool,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.exact_holds && self.bound_holds && self.tail_diff_nonneg
    }
}

fn signed(x: u64) -> i64 {
    i64::try_from(x).expect("citation sum exceeds i64 range")
}

pub fn verify_relation(v: &CitationVector) -> RelationReport {
    let hd = decompose_h(v);
    let gd = decompose_g(v);
    let lhs = signed(gd.g_sq) - signed(hd.h_sq);
    let (excess, tail_h, tail_g, slack) = (
        signed(hd.excess),
        signed(hd.tail_h),
        signed(gd.tail_g),
        signed(gd.slack),
    );
    let rhs_paper = excess + tail_h - tail_g;
    RelationReport {
        h: hd.h,
        g: gd.g,
        lhs,
        excess,
        tail_h,
        tail_g,
        rhs_paper,
        slack,
        exact_holds: lhs == rhs_paper - slack,
        bound_holds: lhs <= rhs_paper,
        // The positivity claim is only made for g ≥ h.
        tail_diff_nonneg: gd.g < hd.h || tail_h >= tail_g,
    }
}

/// Everything computed for one venue's citation vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalMetrics {
    pub total_citations: u64,
    pub papers: u64,
    /// `None` when there are no papers.
    pub i_f: Option<Ratio>,
    pub h: u64,
    pub g: u64,
}

impl JournalMetrics {
    pub fn compute(v: &CitationVector, convention: GConvention) -> Self {
        JournalMetrics {
            total_citations: v.total(),
            papers: v.len() as u64,
            i_f: generalized_if(v).ok(),
            h: compute_h(v),
            g: compute_g(v, convention),
        }
    }
}
