//! The `citemetrics` command line.
//!
//! Exit codes: 0 on success, 1 on any input or validation error, 2 when
//! `verify` finds a relation that does not hold.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    derive_analytical_table, emit_plot_series, erratum_check, rank_journals, row_if,
    write_derived_table, write_plot_csv, Direction, Figure, RankKey,
};
use crate::decimal::render_half_up;
use crate::ingest::{
    parse_aggregate_table, parse_citation_vector, parse_event_log, write_aggregate_table,
    AggregateRow, JournalDataset, VectorFormat,
};
use crate::metrics::{
    decompose_g, decompose_h, generalized_if, verify_relation, GConvention, JournalMetrics,
};
use crate::windowed::{build_ledger, window_counts};
use crate::Ratio;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "citemetrics",
    version,
    about = "Impact factor, h-index and g-index analytics"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Decimal places for impact factors (rounded half up).
    #[arg(long, global = true, default_value_t = 3)]
    pub precision: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Cap,
    Pad,
}

impl From<ConventionArg> for GConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Cap => GConvention::Cap,
            ConventionArg::Pad => GConvention::Pad,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeyArg {
    If,
    H,
    G,
    Citations,
}

impl From<KeyArg> for RankKey {
    fn from(k: KeyArg) -> Self {
        match k {
            KeyArg::If => RankKey::If,
            KeyArg::H => RankKey::H,
            KeyArg::G => RankKey::G,
            KeyArg::Citations => RankKey::Citations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig2 => Figure::Fig2,
            FigureArg::Fig3 => Figure::Fig3,
            FigureArg::Fig4 => Figure::Fig4,
            FigureArg::Fig5 => Figure::Fig5,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Impact factor, h, g and both decompositions of a citation vector.
    Metrics {
        vector: PathBuf,
        /// Vector file format; inferred from the extension when omitted.
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Cap)]
        g_convention: ConventionArg,
    },
    /// Impact factor of year BASE+WINDOW over papers from BASE..BASE+WINDOW-1.
    Windowed {
        pubs: PathBuf,
        events: PathBuf,
        #[arg(long = "base")]
        base: i32,
        #[arg(long = "window", allow_negative_numbers = true)]
        window: i64,
    },
    /// Sort an aggregate table.
    Rank {
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = KeyArg::If)]
        key: KeyArg,
        /// Defaults to ascending for `citations`, descending otherwise.
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
    },
    /// Analytical table derived from an aggregate table.
    Table3 { table: PathBuf },
    /// Check the h/g decomposition relation on a citation vector.
    Verify {
        vector: PathBuf,
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
    },
    /// Plot data for one figure as csv (or json).
    Plotdata {
        table: PathBuf,
        #[arg(long, value_enum)]
        figure: FigureArg,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Report printed impact factors that disagree with Σc/P and repeated acronyms.
    Errata { table: PathBuf },
}

/// Parses `args`, runs the command and returns the process exit code.
///
/// Nothing is written to `stdout` unless the command succeeds.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&config) {
        Ok(outcome) => {
            for warning in &outcome.warnings {
                let _ = writeln!(stderr, "warning: {warning}");
            }
            if let Some(path) = &outcome.file {
                if let Err(e) = std::fs::write(path, &outcome.stdout) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_INVALID;
                }
            } else {
                let _ = stdout.write_all(outcome.stdout.as_bytes());
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_INVALID
        }
    }
}

struct Outcome {
    stdout: String,
    file: Option<PathBuf>,
    warnings: Vec<String>,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            file: None,
            warnings: Vec::new(),
            code: EXIT_OK,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_vector(path: &Path, format: Option<InputFormat>) -> Result<JournalDataset> {
    let format = match format {
        Some(InputFormat::Json) => VectorFormat::Json,
        Some(InputFormat::Csv) => VectorFormat::Csv,
        None if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json")) =>
        {
            VectorFormat::Json
        }
        None => VectorFormat::Csv,
    };
    let mut dataset = parse_citation_vector(&read(path)?, format)
        .with_context(|| format!("in {}", path.display()))?;
    if dataset.name.is_empty() {
        dataset.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(dataset)
}

fn load_table(path: &Path) -> Result<Vec<AggregateRow>> {
    parse_aggregate_table(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn ratio_json(q: &Ratio, precision: u32) -> serde_json::Value {
    json!({
        "numerator": q.numer(),
        "denominator": q.denom(),
        "decimal": render_half_up(q, precision),
    })
}

fn to_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn csv_lines(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

fn execute(config: &CliConfig) -> Result<Outcome> {
    let precision = config.precision;
    let format = config.format;
    match &config.command {
        Command::Metrics {
            vector,
            input_format,
            g_convention,
        } => {
            let dataset = load_vector(vector, *input_format)?;
            let v = &dataset.vector;
            let i_f = generalized_if(v).with_context(|| format!("in {}", vector.display()))?;
            let m = JournalMetrics::compute(v, (*g_convention).into());
            let hd = decompose_h(v);
            let gd = decompose_g(v);
            let out = match format {
                OutputFormat::Text => {
                    let mut s = String::new();
                    let _ = writeln!(s, "name: {}", dataset.name);
                    let _ = writeln!(s, "papers: {}", m.papers);
                    let _ = writeln!(s, "total citations: {}", m.total_citations);
                    let _ = writeln!(s, "impact factor: {}", render_half_up(&i_f, precision));
                    let _ = writeln!(s, "h: {}", m.h);
                    let _ = writeln!(s, "g: {}", m.g);
                    let _ = writeln!(
                        s,
                        "h decomposition: {} = h_sq {} + excess {} + tail_h {}",
                        m.total_citations, hd.h_sq, hd.excess, hd.tail_h
                    );
                    let _ = writeln!(
                        s,
                        "g decomposition: {} = g_sq {} + slack {} + tail_g {}",
                        m.total_citations, gd.g_sq, gd.slack, gd.tail_g
                    );
                    s
                }
                OutputFormat::Csv => csv_lines(&[
                    [
                        "name",
                        "papers",
                        "total_citations",
                        "if",
                        "h",
                        "g",
                        "h_sq",
                        "excess",
                        "tail_h",
                        "g_sq",
                        "slack",
                        "tail_g",
                    ]
                    .map(String::from)
                    .to_vec(),
                    vec![
                        dataset.name.clone(),
                        m.papers.to_string(),
                        m.total_citations.to_string(),
                        render_half_up(&i_f, precision),
                        m.h.to_string(),
                        m.g.to_string(),
                        hd.h_sq.to_string(),
                        hd.excess.to_string(),
                        hd.tail_h.to_string(),
                        gd.g_sq.to_string(),
                        gd.slack.to_string(),
                        gd.tail_g.to_string(),
                    ],
                ]),
                OutputFormat::Json => to_json(&json!({
                    "name": dataset.name,
                    "papers": m.papers,
                    "total_citations": m.total_citations,
                    "if": ratio_json(&i_f, precision),
                    "h": m.h,
                    "g": m.g,
                    "g_convention": GConvention::from(*g_convention),
                    "h_decomposition": hd,
                    "g_decomposition": gd,
                })),
            };
            Ok(Outcome::ok(out))
        }

        Command::Windowed {
            pubs,
            events,
            base,
            window,
        } => {
            let (records, citations) = parse_event_log(&read(pubs)?, &read(events)?)?;
            let ledger = build_ledger(&records, &citations)?;
            let counts = window_counts(&ledger, *base, *window)?;
            let i_f = counts.ratio()?;
            let year = i64::from(*base) + window;
            let out = match format {
                OutputFormat::Text => format!(
                    "impact factor {year} (base {base}, window {window}): {}/{} = {}\n",
                    counts.citations,
                    counts.papers,
                    render_half_up(&i_f, precision)
                ),
                OutputFormat::Csv => csv_lines(&[
                    ["year", "base", "window", "citations", "papers", "if"]
                        .map(String::from)
                        .to_vec(),
                    vec![
                        year.to_string(),
                        base.to_string(),
                        window.to_string(),
                        counts.citations.to_string(),
                        counts.papers.to_string(),
                        render_half_up(&i_f, precision),
                    ],
                ]),
                OutputFormat::Json => to_json(&json!({
                    "year": year,
                    "base": base,
                    "window": window,
                    "citations": counts.citations,
                    "papers": counts.papers,
                    "if": ratio_json(&i_f, precision),
                })),
            };
            Ok(Outcome {
                warnings: ledger.warnings,
                ..Outcome::ok(out)
            })
        }

        Command::Rank {
            table,
            key,
            direction,
        } => {
            let rows = load_table(table)?;
            let direction = match (direction, key) {
                (Some(DirectionArg::Asc), _) | (None, KeyArg::Citations) => Direction::Asc,
                (Some(DirectionArg::Desc), _) | (None, _) => Direction::Desc,
            };
            let ranked = rank_journals(&rows, (*key).into(), direction);
            let out = match format {
                OutputFormat::Text => {
                    let mut s = format!(
                        "{:>4}  {:<10} {:>9} {:>6} {:>10} {:>5} {:>5}\n",
                        "rank", "acronym", "citations", "papers", "if", "h", "g"
                    );
                    for (i, r) in ranked.iter().enumerate() {
                        let i_f = row_if(r)
                            .map(|q| render_half_up(&q, precision))
                            .unwrap_or_default();
                        let _ = writeln!(
                            s,
                            "{:>4}  {:<10} {:>9} {:>6} {:>10} {:>5} {:>5}",
                            i + 1,
                            r.acronym,
                            r.total_citations,
                            r.papers,
                            i_f,
                            r.h,
                            r.g
                        );
                    }
                    s
                }
                OutputFormat::Csv => write_aggregate_table(&ranked),
                OutputFormat::Json => to_json(&serde_json::Value::Array(
                    ranked
                        .iter()
                        .map(|r| {
                            json!({
                                "name": r.name,
                                "acronym": r.acronym,
                                "total_citations": r.total_citations,
                                "papers": r.papers,
                                "printed_if": r.printed_if,
                                "if": row_if(r).map(|q| ratio_json(&q, precision)),
                                "h": r.h,
                                "g": r.g,
                            })
                        })
                        .collect(),
                )),
            };
            Ok(Outcome::ok(out))
        }

        Command::Table3 { table } => {
            let derived = derive_analytical_table(&load_table(table)?);
            let out = match format {
                OutputFormat::Text => {
                    let mut s = format!(
                        "{:<10} {:>7} {:>6} {:>8} {:>4} {:>4} {:>6} {:>6} {:>7} {:>12} {:>6}\n",
                        "journal",
                        "cites",
                        "P",
                        "if",
                        "h",
                        "g",
                        "h^2",
                        "g^2",
                        "tail_g",
                        "constituents",
                        "g^2-h^2"
                    );
                    for d in &derived {
                        let i_f = d
                            .i_f
                            .map(|q| render_half_up(&q, precision))
                            .unwrap_or_default();
                        let _ = writeln!(
                            s,
                            "{:<10} {:>7} {:>6} {:>8} {:>4} {:>4} {:>6} {:>6} {:>7} {:>12} {:>6}",
                            d.acronym,
                            d.total_citations,
                            d.papers,
                            i_f,
                            d.h,
                            d.g,
                            d.h_sq,
                            d.g_sq,
                            d.tail_g_paper,
                            d.constituents_paper,
                            d.g_sq_minus_h_sq
                        );
                    }
                    s
                }
                OutputFormat::Csv => write_derived_table(&derived, precision),
                OutputFormat::Json => {
                    let mut value = serde_json::to_value(&derived).expect("rows serialize");
                    if let Some(rows) = value.as_array_mut() {
                        for (row, d) in rows.iter_mut().zip(&derived) {
                            row["i_f"] = d
                                .i_f
                                .map_or(serde_json::Value::Null, |q| ratio_json(&q, precision));
                        }
                    }
                    to_json(&value)
                }
            };
            Ok(Outcome::ok(out))
        }

        Command::Verify {
            vector,
            input_format,
        } => {
            let dataset = load_vector(vector, *input_format)?;
            let report = verify_relation(&dataset.vector);
            let verdict = |b: bool| if b { "holds" } else { "FAILS" };
            let out = match format {
                OutputFormat::Text => {
                    let mut s = String::new();
                    let _ = writeln!(s, "name: {}", dataset.name);
                    let _ = writeln!(s, "h = {}, g = {}", report.h, report.g);
                    let _ = writeln!(
                        s,
                        "rhs_paper = excess {} + tail_h {} - tail_g {} = {}",
                        report.excess, report.tail_h, report.tail_g, report.rhs_paper
                    );
                    let _ = writeln!(
                        s,
                        "exact: lhs {} = rhs_paper {} - slack {}: {}",
                        report.lhs,
                        report.rhs_paper,
                        report.slack,
                        verdict(report.exact_holds)
                    );
                    let _ = writeln!(
                        s,
                        "bound: lhs {} <= rhs_paper {}: {}",
                        report.lhs,
                        report.rhs_paper,
                        verdict(report.bound_holds)
                    );
                    let _ = writeln!(
                        s,
                        "tails: tail_h {} >= tail_g {}: {}",
                        report.tail_h,
                        report.tail_g,
                        verdict(report.tail_diff_nonneg)
                    );
                    s
                }
                OutputFormat::Csv => csv_lines(&[
                    [
                        "name",
                        "h",
                        "g",
                        "lhs",
                        "excess",
                        "tail_h",
                        "tail_g",
                        "rhs_paper",
                        "slack",
                        "exact_holds",
                        "bound_holds",
                        "tail_diff_nonneg",
                    ]
                    .map(String::from)
                    .to_vec(),
                    vec![
                        dataset.name.clone(),
                        report.h.to_string(),
                        report.g.to_string(),
                        report.lhs.to_string(),
                        report.excess.to_string(),
                        report.tail_h.to_string(),
                        report.tail_g.to_string(),
                        report.rhs_paper.to_string(),
                        report.slack.to_string(),
                        report.exact_holds.to_string(),
                        report.bound_holds.to_string(),
                        report.tail_diff_nonneg.to_string(),
                    ],
                ]),
                OutputFormat::Json => {
                    let mut value = serde_json::to_value(report).expect("report serializes");
                    value["name"] = json!(dataset.name);
                    to_json(&value)
                }
            };
            let code = if report.all_hold() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            Ok(Outcome {
                code,
                ..Outcome::ok(out)
            })
        }

        Command::Plotdata {
            table,
            figure,
            output,
        } => {
            let series = emit_plot_series(&load_table(table)?, (*figure).into());
            let out = match format {
                OutputFormat::Json => {
                    to_json(&serde_json::to_value(&series).expect("series serialize"))
                }
                OutputFormat::Text | OutputFormat::Csv => write_plot_csv(&series, precision),
            };
            Ok(Outcome {
                file: output.clone(),
                ..Outcome::ok(out)
            })
        }

        Command::Errata { table } => {
            let findings = erratum_check(&load_table(table)?);
            let out = match format {
                OutputFormat::Text => {
                    if findings.is_empty() {
                        "no findings\n".to_string()
                    } else {
                        findings
                            .iter()
                            .map(|f| {
                                format!(
                                    "{} [{}]: {}\n",
                                    f.row,
                                    serde_json::to_value(f.kind)
                                        .expect("kind")
                                        .as_str()
                                        .unwrap_or(""),
                                    f.detail
                                )
                            })
                            .collect()
                    }
                }
                OutputFormat::Csv => {
                    let mut rows = vec![["row", "kind", "detail"].map(String::from).to_vec()];
                    rows.extend(findings.iter().map(|f| {
                        vec![
                            f.row.clone(),
                            serde_json::to_value(f.kind)
                                .expect("kind")
                                .as_str()
                                .unwrap_or("")
                                .to_string(),
                            f.detail.clone(),
                        ]
                    }));
                    csv_lines(&rows)
                }
                OutputFormat::Json => {
                    to_json(&serde_json::to_value(&findings).expect("findings serialize"))
                }
            };
            Ok(Outcome::ok(out))
        }
    }
}
