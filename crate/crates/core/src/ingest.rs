//! Readers and writers for the on-disk dataset formats.
//!
//! * citation vectors: csv `paper_id,citations` or json `{"name", "citations"}`
//! * aggregate journal tables: csv `name,acronym,total_citations,papers,if,h,g`
//!   (the `if` column may be omitted or left blank)
//! * event logs: csv `paper_id,pub_year` and csv `cited_paper_id,cite_year`
//!
//! Parsers report every problem in a file at once rather than stopping at
//! the first one.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::decimal::PrintedDecimal;
use crate::error::{Error, Issue, Result};
use crate::vector::CitationVector;
use crate::windowed::{year_in_range, CitationEvent, PublicationRecord, MAX_YEAR, MIN_YEAR};

pub const VECTOR_HEADER: [&str; 2] = ["paper_id", "citations"];
pub const AGGREGATE_HEADER: [&str; 7] = [
    "name",
    "acronym",
    "total_citations",
    "papers",
    "if",
    "h",
    "g",
];
pub const PUBS_HEADER: [&str; 2] = ["paper_id", "pub_year"];
pub const EVENTS_HEADER: [&str; 2] = ["cited_paper_id", "cite_year"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorFormat {
    Csv,
    Json,
}

/// A named venue with its per-paper citation counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalDataset {
    pub name: String,
    pub vector: CitationVector,
}

/// One journal row of an aggregate table, for when per-paper counts are
/// unavailable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub name: String,
    pub acronym: String,
    pub total_citations: u64,
    pub papers: u64,
    /// Impact factor exactly as printed in the source table.
    pub printed_if: Option<PrintedDecimal>,
    pub h: u64,
    pub g: u64,
}

impl AggregateRow {
    /// Broken row invariants, empty for a consistent row.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.papers < 1 {
            out.push("papers must be at least 1".to_string());
        }
        if self.h > self.papers {
            out.push(format!("h = {} exceeds papers = {}", self.h, self.papers));
        }
        if self.g > self.papers {
            out.push(format!("g = {} exceeds papers = {}", self.g, self.papers));
        }
        if self.g < self.h {
            out.push(format!("g = {} is below h = {}", self.g, self.h));
        }
        out
    }
}

struct CsvRows {
    /// (line, fields); the header is the first entry.
    rows: Vec<(usize, Vec<String>)>,
}

fn read_csv(text: &str, source: &str) -> Result<CsvRows> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    for (k, record) in reader.records().enumerate() {
        match record {
            Ok(record) => {
                let line = record.position().map_or(k + 1, |p| p.line() as usize);
                rows.push((line, record.iter().map(str::to_string).collect()));
            }
            Err(e) => {
                let line = e.position().map_or(k + 1, |p| p.line() as usize);
                issues.push(Issue::at(line, format!("malformed row: {e}")));
            }
        }
    }
    if !issues.is_empty() {
        return Err(Error::invalid(source, issues));
    }
    Ok(CsvRows { rows })
}

fn header_matches(found: &[String], expected: &[&str]) -> bool {
    found.len() == expected.len() && found.iter().zip(expected).all(|(a, b)| a == b)
}

fn parse_count(field: &str, what: &str, line: usize, issues: &mut Vec<Issue>) -> Option<u64> {
    match field.parse::<u64>() {
        Ok(v) => Some(v),
        Err(_) if field.parse::<i64>().is_ok() => {
            issues.push(Issue::at(
                line,
                format!("{what} must be non-negative, got {field}"),
            ));
            None
        }
        Err(_) => {
            issues.push(Issue::at(
                line,
                format!("{what} is not an integer: {field:?}"),
            ));
            None
        }
    }
}

fn parse_year(field: &str, what: &str, line: usize, issues: &mut Vec<Issue>) -> Option<i32> {
    match field.parse::<i32>() {
        Ok(y) if year_in_range(y) => Some(y),
        Ok(y) => {
            issues.push(Issue::at(
                line,
                format!("{what} {y} outside {MIN_YEAR}..={MAX_YEAR}"),
            ));
            None
        }
        Err(_) => {
            issues.push(Issue::at(line, format!("malformed {what}: {field:?}")));
            None
        }
    }
}

fn check_width(fields: &[String], width: usize, line: usize, issues: &mut Vec<Issue>) -> bool {
    if fields.len() != width {
        issues.push(Issue::at(
            line,
            format!(
                "malformed row: expected {width} fields, found {}",
                fields.len()
            ),
        ));
        return false;
    }
    true
}

pub fn parse_citation_vector(text: &str, format: VectorFormat) -> Result<JournalDataset> {
    match format {
        VectorFormat::Csv => parse_vector_csv(text),
        VectorFormat::Json => parse_vector_json(text),
    }
}

fn parse_vector_csv(text: &str) -> Result<JournalDataset> {
    const SOURCE: &str = "citation vector";
    let csv = read_csv(text, SOURCE)?;
    let mut issues = Vec::new();
    let mut counts = Vec::new();
    let mut rows = csv.rows.into_iter();
    if let Some((line, header)) = rows.next() {
        if !header_matches(&header, &VECTOR_HEADER) {
            issues.push(Issue::at(
                line,
                format!("expected header {}", VECTOR_HEADER.join(",")),
            ));
        }
    }
    for (line, fields) in rows {
        if !check_width(&fields, 2, line, &mut issues) {
            continue;
        }
        if let Some(c) = parse_count(&fields[1], "citations", line, &mut issues) {
            counts.push(c);
        }
    }
    if !issues.is_empty() {
        return Err(Error::invalid(SOURCE, issues));
    }
    Ok(JournalDataset {
        name: String::new(),
        vector: CitationVector::new(counts),
    })
}

#[derive(Deserialize)]
struct RawVectorJson {
    name: String,
    citations: Vec<serde_json::Value>,
}

fn parse_vector_json(text: &str) -> Result<JournalDataset> {
    const SOURCE: &str = "citation vector";
    let raw: RawVectorJson = serde_json::from_str(text).map_err(|e| {
        Error::invalid(
            SOURCE,
            vec![Issue::at(e.line(), format!("malformed json: {e}"))],
        )
    })?;
    let mut issues = Vec::new();
    let mut counts = Vec::with_capacity(raw.citations.len());
    for (index, value) in raw.citations.iter().enumerate() {
        match value.as_u64() {
            Some(c) => counts.push(c),
            None if value.as_i64().is_some() => issues.push(Issue::general(format!(
                "citations[{index}] must be non-negative, got {value}"
            ))),
            None => issues.push(Issue::general(format!(
                "citations[{index}] is not an integer: {value}"
            ))),
        }
    }
    if !issues.is_empty() {
        return Err(Error::invalid(SOURCE, issues));
    }
    Ok(JournalDataset {
        name: raw.name,
        vector: CitationVector::new(counts),
    })
}

pub fn parse_aggregate_table(text: &str) -> Result<Vec<AggregateRow>> {
    const SOURCE: &str = "aggregate table";
    let csv = read_csv(text, SOURCE)?;
    let mut rows = csv.rows.into_iter();
    let Some((header_line, header)) = rows.next() else {
        return Ok(Vec::new());
    };
    let without_if: Vec<&str> = AGGREGATE_HEADER
        .iter()
        .copied()
        .filter(|&c| c != "if")
        .collect();
    let has_if = if header_matches(&header, &AGGREGATE_HEADER) {
        true
    } else if header_matches(&header, &without_if) {
        false
    } else {
        return Err(Error::invalid(
            SOURCE,
            vec![Issue::at(
                header_line,
                format!("expected header {}", AGGREGATE_HEADER.join(",")),
            )],
        ));
    };
    let width = if has_if { 7 } else { 6 };

    let mut issues = Vec::new();
    let mut out = Vec::new();
    for (line, fields) in rows {
        if !check_width(&fields, width, line, &mut issues) {
            continue;
        }
        let mut it = fields.into_iter();
        let name = it.next().unwrap_or_default();
        let acronym = it.next().unwrap_or_default();
        let total = it.next().unwrap_or_default();
        let papers = it.next().unwrap_or_default();
        let printed = if has_if {
            it.next().unwrap_or_default()
        } else {
            String::new()
        };
        let h = it.next().unwrap_or_default();
        let g = it.next().unwrap_or_default();

        let before = issues.len();
        let total = parse_count(&total, "total_citations", line, &mut issues);
        let papers = parse_count(&papers, "papers", line, &mut issues);
        let h = parse_count(&h, "h", line, &mut issues);
        let g = parse_count(&g, "g", line, &mut issues);
        let printed_if = if printed.is_empty() {
            None
        } else {
            match printed.parse::<PrintedDecimal>() {
                Ok(d) => Some(d),
                Err(e) => {
                    issues.push(Issue::at(line, format!("if: {e}")));
                    None
                }
            }
        };
        if issues.len() > before {
            continue;
        }
        let row = AggregateRow {
            name,
            acronym,
            total_citations: total.unwrap_or_default(),
            papers: papers.unwrap_or_default(),
            printed_if,
            h: h.unwrap_or_default(),
            g: g.unwrap_or_default(),
        };
        let violations = row.violations();
        if violations.is_empty() {
            out.push(row);
        } else {
            issues.push(Issue::at(
                line,
                format!("row {}: {}", row.acronym, violations.join(", ")),
            ));
        }
    }
    if !issues.is_empty() {
        return Err(Error::invalid(SOURCE, issues));
    }
    Ok(out)
}

pub fn parse_event_log(
    pubs_text: &str,
    events_text: &str,
) -> Result<(Vec<PublicationRecord>, Vec<CitationEvent>)> {
    const SOURCE: &str = "event log";
    let mut issues = Vec::new();
    let mut tag = |file: &str, list: Vec<Issue>| {
        issues.extend(list.into_iter().map(|i| Issue {
            message: format!("{file}: {}", i.message),
            ..i
        }));
    };

    let mut pubs = Vec::new();
    match read_csv(pubs_text, SOURCE) {
        Ok(csv) => {
            let mut local = Vec::new();
            let mut first_line: HashMap<String, usize> = HashMap::new();
            let mut rows = csv.rows.into_iter();
            if let Some((line, header)) = rows.next() {
                if !header_matches(&header, &PUBS_HEADER) {
                    local.push(Issue::at(
                        line,
                        format!("expected header {}", PUBS_HEADER.join(",")),
                    ));
                }
            }
            for (line, fields) in rows {
                if !check_width(&fields, 2, line, &mut local) {
                    continue;
                }
                let id = fields[0].clone();
                if let Some(first) = first_line.get(&id) {
                    local.push(Issue::at(
                        line,
                        format!("duplicate paper_id {id} (first on line {first})"),
                    ));
                    continue;
                }
                first_line.insert(id.clone(), line);
                if let Some(year) = parse_year(&fields[1], "pub_year", line, &mut local) {
                    pubs.push(PublicationRecord {
                        paper_id: id,
                        pub_year: year,
                    });
                }
            }
            tag("publications", local);
        }
        Err(Error::Invalid { issues: list, .. }) => tag("publications", list),
        Err(e) => return Err(e),
    }

    let mut events = Vec::new();
    match read_csv(events_text, SOURCE) {
        Ok(csv) => {
            let mut local = Vec::new();
            let mut rows = csv.rows.into_iter();
            if let Some((line, header)) = rows.next() {
                if !header_matches(&header, &EVENTS_HEADER) {
                    local.push(Issue::at(
                        line,
                        format!("expected header {}", EVENTS_HEADER.join(",")),
                    ));
                }
            }
            for (line, fields) in rows {
                if !check_width(&fields, 2, line, &mut local) {
                    continue;
                }
                if let Some(year) = parse_year(&fields[1], "cite_year", line, &mut local) {
                    events.push(CitationEvent {
                        cited_paper_id: fields[0].clone(),
                        cite_year: year,
                    });
                }
            }
            tag("events", local);
        }
        Err(Error::Invalid { issues: list, .. }) => tag("events", list),
        Err(e) => return Err(e),
    }

    if !issues.is_empty() {
        return Err(Error::invalid(SOURCE, issues));
    }
    Ok((pubs, events))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("in-memory csv writer");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// Writes a vector as csv with synthetic ids `p1, p2, …` in canonical order.
pub fn write_citation_vector_csv(dataset: &JournalDataset) -> String {
    let mut w = csv_writer();
    w.write_record(VECTOR_HEADER).expect("in-memory write");
    for (i, c) in dataset.vector.iter().enumerate() {
        w.write_record([format!("p{}", i + 1), c.to_string()])
            .expect("in-memory write");
    }
    finish(w)
}

pub fn write_citation_vector_json(dataset: &JournalDataset) -> String {
    serde_json::json!({ "name": dataset.name, "citations": dataset.vector }).to_string()
}

pub fn write_aggregate_table(rows: &[AggregateRow]) -> String {
    let mut w = csv_writer();
    w.write_record(AGGREGATE_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.name.clone(),
            r.acronym.clone(),
            r.total_citations.to_string(),
            r.papers.to_string(),
            r.printed_if
                .as_ref()
                .map(|d| d.to_string())
                .unwrap_or_default(),
            r.h.to_string(),
            r.g.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Returns `(publications csv, events csv)`.
pub fn write_event_log(pubs: &[PublicationRecord], events: &[CitationEvent]) -> (String, String) {
    let mut p = csv_writer();
    p.write_record(PUBS_HEADER).expect("in-memory write");
    for r in pubs {
        p.write_record([r.paper_id.clone(), r.pub_year.to_string()])
            .expect("in-memory write");
    }
    let mut e = csv_writer();
    e.write_record(EVENTS_HEADER).expect("in-memory write");
    for ev in events {
        e.write_record([ev.cited_paper_id.clone(), ev.cite_year.to_string()])
            .expect("in-memory write");
    }
    (finish(p), finish(e))
}
