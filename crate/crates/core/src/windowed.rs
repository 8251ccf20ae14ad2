//! Impact factor over a publication window.
//!
//! For a base year `b` and a window of `W` years, the impact factor of year
//! `b + W` is the number of citations made in `b + W` to papers published in
//! `b ..= b + W − 1`, divided by the number of papers published in those
//! years.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Ratio;

pub const MIN_YEAR: i32 = 1600;
pub const MAX_YEAR: i32 = 2200;

pub fn year_in_range(year: i32) -> bool {
    (MIN_YEAR..=MAX_YEAR).contains(&year)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub paper_id: String,
    pub pub_year: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CitationEvent {
    pub cited_paper_id: String,
    pub cite_year: i32,
}

/// A citation event joined with the publication year of the cited paper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedEvent {
    pub cited_paper_id: String,
    pub pub_year: i32,
    pub cite_year: i32,
}

/// Publication counts per year plus resolved citation events.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearLedger {
    pub papers_by_year: BTreeMap<i32, u64>,
    pub events: Vec<ResolvedEvent>,
    /// Non-fatal observations, e.g. repeated (paper, year) citation events.
    pub warnings: Vec<String>,
}

/// Numerator and denominator of a windowed impact factor before division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowCounts {
    pub citations: u64,
    pub papers: u64,
}

impl WindowCounts {
    pub fn ratio(&self) -> Result<Ratio> {
        if self.papers == 0 {
            return Err(Error::UndefinedRatio(
                "no papers published in the window".to_string(),
            ));
        }
        Ok(Ratio::new(self.citations, self.papers))
    }
}

impl std::ops::Add for WindowCounts {
    type Output = WindowCounts;

    fn add(self, rhs: Self) -> Self {
        WindowCounts {
            citations: self.citations + rhs.citations,
            papers: self.papers + rhs.papers,
        }
    }
}

pub fn build_ledger(pubs: &[PublicationRecord], events: &[CitationEvent]) -> Result<YearLedger> {
    let mut problems = Vec::new();
    let mut pub_year: HashMap<&str, i32> = HashMap::with_capacity(pubs.len());
    let mut papers_by_year = BTreeMap::new();
    for record in pubs {
        if !year_in_range(record.pub_year) {
            problems.push(format!(
                "paper {} has publication year {} outside {MIN_YEAR}..={MAX_YEAR}",
                record.paper_id, record.pub_year
            ));
        }
        if pub_year.insert(&record.paper_id, record.pub_year).is_some() {
            problems.push(format!("duplicate paper id {}", record.paper_id));
        }
        *papers_by_year.entry(record.pub_year).or_insert(0u64) += 1;
    }

    let mut dangling: Vec<String> = Vec::new();
    let mut seen: HashSet<(&str, i32)> = HashSet::new();
    let mut warnings = Vec::new();
    let mut resolved = Vec::with_capacity(events.len());
    for event in events {
        let Some(&year) = pub_year.get(event.cited_paper_id.as_str()) else {
            if !dangling.contains(&event.cited_paper_id) {
                dangling.push(event.cited_paper_id.clone());
            }
            continue;
        };
        if event.cite_year < year {
            problems.push(format!(
                "citation of {} in {} precedes its publication in {year}",
                event.cited_paper_id, event.cite_year
            ));
            continue;
        }
        if !seen.insert((event.cited_paper_id.as_str(), event.cite_year)) {
            warnings.push(format!(
                "duplicate citation event ({}, {})",
                event.cited_paper_id, event.cite_year
            ));
        }
        resolved.push(ResolvedEvent {
            cited_paper_id: event.cited_paper_id.clone(),
            pub_year: year,
            cite_year: event.cite_year,
        });
    }

    if !dangling.is_empty() {
        return Err(Error::DanglingIds(dangling));
    }
    if !problems.is_empty() {
        return Err(Error::InconsistentEvents(problems));
    }
    Ok(YearLedger {
        papers_by_year,
        events: resolved,
        warnings,
    })
}

fn validate_window(window: i64) -> Result<i32> {
    if window < 1 {
        return Err(Error::InvalidWindow(window));
    }
    i32::try_from(window).map_err(|_| Error::InvalidWindow(window))
}

/// Citations in `base_year + window` to papers from the window, and the
/// number of papers published in the window.
pub fn window_counts(ledger: &YearLedger, base_year: i32, window: i64) -> Result<WindowCounts> {
    let window = validate_window(window)?;
    let last_pub_year = base_year + window - 1;
    let evaluated_year = base_year + window;
    let papers = ledger
        .papers_by_year
        .range(base_year..=last_pub_year)
        .map(|(_, n)| n)
        .sum();
    let citations = ledger
        .events
        .iter()
        .filter(|e| {
            e.cite_year == evaluated_year && (base_year..=last_pub_year).contains(&e.pub_year)
        })
        .count() as u64;
    Ok(WindowCounts { citations, papers })
}

pub fn windowed_impact_factor(ledger: &YearLedger, base_year: i32, window: i64) -> Result<Ratio> {
    window_counts(ledger, base_year, window)?.ratio()
}
