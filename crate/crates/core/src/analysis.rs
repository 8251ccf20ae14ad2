//! Ranking, derived tables, plot series and consistency checks over
//! aggregate journal rows.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::decimal::{render_half_up, PrintedDecimal};
use crate::error::{Error, Issue, Result};
use crate::ingest::AggregateRow;
use crate::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankKey {
    If,
    H,
    G,
    Citations,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Asc,
    #[default]
    Desc,
}

/// Σc / P for a row; `None` if the row has no papers.
pub fn row_if(row: &AggregateRow) -> Option<Ratio> {
    (row.papers > 0).then(|| Ratio::new(row.total_citations, row.papers))
}

fn compare_if(a: &AggregateRow, b: &AggregateRow) -> Ordering {
    // Cross-multiplied to stay exact; rows without papers sort first.
    match (a.papers, b.papers) {
        (0, 0) => Ordering::Equal,
        (0, _) => Ordering::Less,
        (_, 0) => Ordering::Greater,
        _ => (u128::from(a.total_citations) * u128::from(b.papers))
            .cmp(&(u128::from(b.total_citations) * u128::from(a.papers))),
    }
}

fn compare_by(key: RankKey, a: &AggregateRow, b: &AggregateRow) -> Ordering {
    match key {
        RankKey::If => compare_if(a, b),
        RankKey::H => a.h.cmp(&b.h),
        RankKey::G => a.g.cmp(&b.g),
        RankKey::Citations => a.total_citations.cmp(&b.total_citations),
    }
}

/// Stable sort; ties keep their input order in both directions.
pub fn rank_journals(
    rows: &[AggregateRow],
    key: RankKey,
    direction: Direction,
) -> Vec<AggregateRow> {
    let mut out = rows.to_vec();
    match direction {
        Direction::Asc => out.sort_by(|a, b| compare_by(key, a, b)),
        Direction::Desc => out.sort_by(|a, b| compare_by(key, b, a)),
    }
    out
}

/// One row of the analytical table, derived from (Σc, P, h, g) alone.
///
/// Without per-paper counts the top-g slack is unknown, so the g-tail is
/// taken as Σc − g² (exact only when the top g papers hold exactly g²
/// citations).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedRow {
    pub acronym: String,
    pub total_citations: u64,
    pub papers: u64,
    pub i_f: Option<Ratio>,
    pub h: u64,
    pub g: u64,
    pub h_sq: i64,
    pub g_sq: i64,
    /// Σc − g²
    pub tail_g_paper: i64,
    /// Σc − h², i.e. excess + tail_h
    pub constituents_paper: i64,
    pub g_sq_minus_h_sq: i64,
}

impl DerivedRow {
    pub fn from_row(row: &AggregateRow) -> Self {
        let total = row.total_citations as i64;
        let h_sq = (row.h * row.h) as i64;
        let g_sq = (row.g * row.g) as i64;
        DerivedRow {
            acronym: row.acronym.clone(),
            total_citations: row.total_citations,
            papers: row.papers,
            i_f: row_if(row),
            h: row.h,
            g: row.g,
            h_sq,
            g_sq,
            tail_g_paper: total - g_sq,
            constituents_paper: total - h_sq,
            g_sq_minus_h_sq: g_sq - h_sq,
        }
    }
}

/// Derived columns for every row, ordered by increasing total citations.
pub fn derive_analytical_table(rows: &[AggregateRow]) -> Vec<DerivedRow> {
    rank_journals(rows, RankKey::Citations, Direction::Asc)
        .iter()
        .map(DerivedRow::from_row)
        .collect()
}

pub const DERIVED_HEADER: [&str; 11] = [
    "journal",
    "total_citations",
    "papers",
    "if",
    "h",
    "g",
    "h_sq",
    "g_sq",
    "tail_g",
    "constituents",
    "g_sq_minus_h_sq",
];

/// Csv in the column order of the analytical table.
pub fn write_derived_table(rows: &[DerivedRow], precision: u32) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(DERIVED_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.acronym.clone(),
            r.total_citations.to_string(),
            r.papers.to_string(),
            r.i_f
                .map(|q| render_half_up(&q, precision))
                .unwrap_or_default(),
            r.h.to_string(),
            r.g.to_string(),
            r.h_sq.to_string(),
            r.g_sq.to_string(),
            r.tail_g_paper.to_string(),
            r.constituents_paper.to_string(),
            r.g_sq_minus_h_sq.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

/// Reads a table in the layout written by [`write_derived_table`].
pub fn parse_derived_table(text: &str) -> Result<Vec<DerivedRow>> {
    const SOURCE: &str = "derived table";
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header_ok = reader
        .headers()
        .map(|h| h.iter().eq(DERIVED_HEADER.iter().copied()))
        .unwrap_or(false);
    if !header_ok {
        return Err(Error::invalid(
            SOURCE,
            vec![Issue::at(
                1,
                format!("expected header {}", DERIVED_HEADER.join(",")),
            )],
        ));
    }
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let line = k + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                issues.push(Issue::at(line, format!("malformed row: {e}")));
                continue;
            }
        };
        let int = |i: usize| record[i].parse::<i64>();
        let parsed = (|| -> std::result::Result<DerivedRow, String> {
            let unsigned = |i: usize| {
                record[i]
                    .parse::<u64>()
                    .map_err(|_| format!("{}: not a count", DERIVED_HEADER[i]))
            };
            let signed =
                |i: usize| int(i).map_err(|_| format!("{}: not an integer", DERIVED_HEADER[i]));
            let i_f = if record[3].is_empty() {
                None
            } else {
                Some(
                    record[3]
                        .parse::<PrintedDecimal>()
                        .map_err(|e| e.to_string())?
                        .to_ratio(),
                )
            };
            Ok(DerivedRow {
                acronym: record[0].to_string(),
                total_citations: unsigned(1)?,
                papers: unsigned(2)?,
                i_f,
                h: unsigned(4)?,
                g: unsigned(5)?,
                h_sq: signed(6)?,
                g_sq: signed(7)?,
                tail_g_paper: signed(8)?,
                constituents_paper: signed(9)?,
                g_sq_minus_h_sq: signed(10)?,
            })
        })();
        match parsed {
            Ok(row) => rows.push(row),
            Err(msg) => issues.push(Issue::at(line, msg)),
        }
    }
    if !issues.is_empty() {
        return Err(Error::invalid(SOURCE, issues));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// h and g against impact factor.
    Fig2,
    /// Impact factor, h and g against total citations.
    Fig3,
    /// h², g² and g² − h² against total citations.
    Fig4,
    /// g² − h² and its two constituents against total citations.
    Fig5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingKey {
    IncreasingIf,
    IncreasingCitations,
}

/// A plotted quantity: an integer count or an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesValue {
    Count(i64),
    Ratio(Ratio),
}

impl SeriesValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            SeriesValue::Count(n) => *n as f64,
            SeriesValue::Ratio(q) => *q.numer() as f64 / *q.denom() as f64,
        }
    }

    pub fn render(&self, precision: u32) -> String {
        match self {
            SeriesValue::Count(n) => n.to_string(),
            SeriesValue::Ratio(q) => render_half_up(q, precision),
        }
    }
}

impl PartialOrd for SeriesValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let as_ratio = |v: &SeriesValue| -> Option<num_rational::Ratio<i128>> {
            match v {
                SeriesValue::Count(n) => Some(num_rational::Ratio::from_integer(i128::from(*n))),
                SeriesValue::Ratio(q) => Some(num_rational::Ratio::new(
                    i128::from(*q.numer()),
                    i128::from(*q.denom()),
                )),
            }
        };
        as_ratio(self)?.partial_cmp(&as_ratio(other)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub label: String,
    pub x_values: Vec<SeriesValue>,
    pub y_values: Vec<SeriesValue>,
    pub ordering_key: OrderingKey,
}

fn series(label: &str, key: OrderingKey, points: Vec<(SeriesValue, SeriesValue)>) -> PlotSeries {
    let (x_values, y_values) = points.into_iter().unzip();
    PlotSeries {
        label: label.to_string(),
        x_values,
        y_values,
        ordering_key: key,
    }
}

pub fn emit_plot_series(rows: &[AggregateRow], figure: Figure) -> Vec<PlotSeries> {
    use SeriesValue::{Count, Ratio as Exact};

    let with_papers: Vec<AggregateRow> = rows.iter().filter(|r| r.papers > 0).cloned().collect();
    if with_papers.is_empty() {
        return Vec::new();
    }
    let (key, ordered) = match figure {
        Figure::Fig2 => (
            OrderingKey::IncreasingIf,
            rank_journals(&with_papers, RankKey::If, Direction::Asc),
        ),
        _ => (
            OrderingKey::IncreasingCitations,
            rank_journals(&with_papers, RankKey::Citations, Direction::Asc),
        ),
    };
    let derived: Vec<DerivedRow> = ordered.iter().map(DerivedRow::from_row).collect();
    let citations = |d: &DerivedRow| Count(d.total_citations as i64);
    let i_f = |d: &DerivedRow| Exact(d.i_f.expect("rows with papers"));
    let make = |label: &str,
                x: &dyn Fn(&DerivedRow) -> SeriesValue,
                y: &dyn Fn(&DerivedRow) -> SeriesValue| {
        series(label, key, derived.iter().map(|d| (x(d), y(d))).collect())
    };

    match figure {
        Figure::Fig2 => vec![
            make("h", &i_f, &|d| Count(d.h as i64)),
            make("g", &i_f, &|d| Count(d.g as i64)),
        ],
        Figure::Fig3 => vec![
            make("if", &citations, &i_f),
            make("h", &citations, &|d| Count(d.h as i64)),
            make("g", &citations, &|d| Count(d.g as i64)),
        ],
        Figure::Fig4 => vec![
            make("h_sq", &citations, &|d| Count(d.h_sq)),
            make("g_sq", &citations, &|d| Count(d.g_sq)),
            make("g_sq_minus_h_sq", &citations, &|d| Count(d.g_sq_minus_h_sq)),
        ],
        Figure::Fig5 => vec![
            make("g_sq_minus_h_sq", &citations, &|d| Count(d.g_sq_minus_h_sq)),
            make("tail_g", &citations, &|d| Count(d.tail_g_paper)),
            make("constituents", &citations, &|d| Count(d.constituents_paper)),
        ],
    }
}

/// Csv with header `x,<label1>,<label2>,...` and one row per journal.
///
/// All series of one figure share their x values.
pub fn write_plot_csv(series: &[PlotSeries], precision: u32) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["x".to_string()];
    header.extend(series.iter().map(|s| s.label.clone()));
    w.write_record(&header).expect("in-memory write");
    let len = series.first().map_or(0, |s| s.x_values.len());
    for i in 0..len {
        let mut record = vec![series[0].x_values[i].render(precision)];
        record.extend(series.iter().map(|s| s.y_values[i].render(precision)));
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErratumKind {
    IfMismatch,
    DuplicateAcronym,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErratumFinding {
    pub row: String,
    pub kind: ErratumKind,
    pub detail: String,
}

/// Flags printed impact factors that disagree with Σc / P at their printed
/// precision, and acronyms used by more than one row.
///
/// A value printed with `d` decimals passes when it is within `10^−d` of the
/// exact quotient, which admits both truncated and rounded renderings.
pub fn erratum_check(rows: &[AggregateRow]) -> Vec<ErratumFinding> {
    let mut findings = Vec::new();
    for row in rows {
        let (Some(printed), Some(exact)) = (&row.printed_if, row_if(row)) else {
            continue;
        };
        if !printed.agrees_with(&exact) {
            let places = printed.places();
            findings.push(ErratumFinding {
                row: row.acronym.clone(),
                kind: ErratumKind::IfMismatch,
                detail: format!(
                    "{}: computed {}/{} = {}, printed {} (tolerance 1e-{places})",
                    row.name,
                    row.total_citations,
                    row.papers,
                    render_half_up(&exact, places + 3),
                    printed,
                ),
            });
        }
    }

    let mut reported: Vec<&str> = Vec::new();
    for row in rows {
        if reported.contains(&row.acronym.as_str()) {
            continue;
        }
        let positions: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.acronym == row.acronym)
            .map(|(j, _)| j + 1)
            .collect();
        if positions.len() > 1 {
            reported.push(&row.acronym);
            let names: Vec<&str> = positions
                .iter()
                .map(|&j| rows[j - 1].name.as_str())
                .collect();
            findings.push(ErratumFinding {
                row: row.acronym.clone(),
                kind: ErratumKind::DuplicateAcronym,
                detail: format!(
                    "acronym {} used by rows {} ({})",
                    row.acronym,
                    positions
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(", "),
                    names.join("; "),
                ),
            });
        }
    }
    findings
}

/// Checks a printed analytical table against its own (Σc, h, g) columns.
///
/// Each printed derived cell is compared with the value implied by the
/// printed inputs of the same row; the impact factor column is not checked
/// here.
pub fn cross_check_derived(printed: &[DerivedRow]) -> Vec<ErratumFinding> {
    let mut findings = Vec::new();
    for row in printed {
        let expected = DerivedRow::from_row(&AggregateRow {
            name: row.acronym.clone(),
            acronym: row.acronym.clone(),
            total_citations: row.total_citations,
            papers: row.papers,
            printed_if: None,
            h: row.h,
            g: row.g,
        });
        let cells = [
            ("h_sq", row.h_sq, expected.h_sq),
            ("g_sq", row.g_sq, expected.g_sq),
            ("tail_g", row.tail_g_paper, expected.tail_g_paper),
            (
                "constituents",
                row.constituents_paper,
                expected.constituents_paper,
            ),
            (
                "g_sq_minus_h_sq",
                row.g_sq_minus_h_sq,
                expected.g_sq_minus_h_sq,
            ),
        ];
        for (column, got, want) in cells {
            if got != want {
                findings.push(ErratumFinding {
                    row: row.acronym.clone(),
                    kind: ErratumKind::Other,
                    detail: format!("{column}: printed {got}, implied by the row {want}"),
                });
            }
        }
    }
    findings
}
