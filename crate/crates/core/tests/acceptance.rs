//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use citemetrics::analysis::{
    cross_check_derived, derive_analytical_table, emit_plot_series, erratum_check,
    parse_derived_table, row_if, ErratumKind, Figure, SeriesValue,
};
use citemetrics::ingest::{
    parse_aggregate_table, parse_citation_vector, AggregateRow, VectorFormat,
};
use citemetrics::windowed::{
    build_ledger, windowed_impact_factor, CitationEvent, PublicationRecord,
};
use citemetrics::{
    compute_g, compute_h, decompose_g, decompose_h, verify_relation, CitationVector, Error,
    GConvention, Ratio,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE_I: &str = include_str!("../data/table1.csv");
const TABLE_II: &str = include_str!("../data/table2.csv");
const TABLE_III_PRINTED: &str = include_str!("../data/table3_printed.csv");

const RANDOM_VECTORS: usize = 1000;
const MAX_PAPERS: usize = 50;
const MAX_COUNT: u64 = 100;
const RANDOM_LEDGERS: usize = 100;
const TABLE_RUNTIME: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_ii() -> Vec<AggregateRow> {
    parse_aggregate_table(TABLE_II).expect("table II parses")
}

fn random_vectors(seed: u64) -> Vec<CitationVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_VECTORS)
        .map(|_| {
            let len = rng.gen_range(0..=MAX_PAPERS);
            CitationVector::new((0..len).map(|_| rng.gen_range(0..=MAX_COUNT)).collect())
        })
        .collect()
}

// Brute-force oracles: every candidate rank is tested with a fresh sum.

fn oracle_h(c: &[u64]) -> u64 {
    let mut best = 0;
    for i in 1..=c.len() {
        if c[i - 1] >= i as u64 {
            best = i as u64;
        }
    }
    best
}

fn oracle_g(c: &[u64], pad: bool) -> u64 {
    let total: u64 = c.iter().sum();
    let limit = if pad {
        c.len().max(total as usize)
    } else {
        c.len()
    };
    let mut best = 0;
    for i in 1..=limit {
        let top: u64 = c.iter().take(i).sum();
        if top >= (i * i) as u64 {
            best = i as u64;
        }
    }
    best
}

fn criterion_1() -> Outcome {
    let ds = parse_citation_vector(TABLE_I, VectorFormat::Csv).map_err(|e| e.to_string())?;
    let h = compute_h(&ds.vector);
    let g = compute_g(&ds.vector, GConvention::Cap);
    check(h == 8 && g == 12, || {
        format!("h = {h}, g = {g}; expected 8 and 12")
    })?;
    Ok(format!("Table I: h = {h}, g = {g}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rows = table_ii();
    check(rows.len() == 20, || format!("{} rows parsed", rows.len()))?;
    let agreeing = rows
        .iter()
        .filter(|r| {
            r.printed_if
                .as_ref()
                .unwrap()
                .agrees_with(&row_if(r).unwrap())
        })
        .count();
    check(agreeing == 19, || {
        format!("{agreeing}/20 printed impact factors agree")
    })?;

    let findings = erratum_check(&rows);
    let mismatches: Vec<_> = findings
        .iter()
        .filter(|f| f.kind == ErratumKind::IfMismatch)
        .collect();
    check(mismatches.len() == 1, || {
        format!("{} if_mismatch findings", mismatches.len())
    })?;
    let tosn = mismatches[0];
    check(
        tosn.detail.contains("ACM Transactions on Sensor Networks")
            && tosn.detail.contains("1074/174 = 6.172")
            && tosn.detail.contains("printed 6.712"),
        || format!("unexpected mismatch detail: {}", tosn.detail),
    )?;
    let dups: Vec<_> = findings
        .iter()
        .filter(|f| f.kind == ErratumKind::DuplicateAcronym)
        .collect();
    check(
        dups.len() == 1 && dups[0].row == "MONET" && dups[0].detail.contains("rows 8, 14"),
        || format!("duplicate acronym findings: {dups:?}"),
    )?;
    let elapsed = start.elapsed();
    check(elapsed < TABLE_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "19/20 printed I_f agree at printed precision; single mismatch: {}",
        tosn.detail
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let derived = derive_analytical_table(&table_ii());
    let printed = parse_derived_table(TABLE_III_PRINTED).map_err(|e| e.to_string())?;
    check(derived.len() == 20 && printed.len() == 20, || {
        "row count".into()
    })?;

    let by_acronym = |name: &str| derived.iter().find(|d| d.acronym == name).unwrap();
    let jcn = by_acronym("JCN");
    check(
        (
            jcn.h_sq,
            jcn.g_sq,
            jcn.g_sq_minus_h_sq,
            jcn.tail_g_paper,
            jcn.constituents_paper,
        ) == (144, 529, 385, 116, 501),
        || format!("JCN anchor {jcn:?}"),
    )?;
    let ccr = by_acronym("CCR");
    check(
        (
            ccr.h_sq,
            ccr.g_sq,
            ccr.g_sq_minus_h_sq,
            ccr.tail_g_paper,
            ccr.constituents_paper,
        ) == (22500, 41209, 18709, 44600, 63309),
        || format!("CCR anchor {ccr:?}"),
    )?;

    // Column identities hold exactly on every derived row.
    for d in &derived {
        let total = d.total_citations as i64;
        check(
            d.h_sq == (d.h * d.h) as i64
                && d.g_sq == (d.g * d.g) as i64
                && d.g_sq_minus_h_sq == d.g_sq - d.h_sq
                && d.tail_g_paper + d.g_sq == total
                && d.constituents_paper + d.h_sq == total
                && d.constituents_paper - d.tail_g_paper == d.g_sq_minus_h_sq,
            || format!("identity broken on {d:?}"),
        )?;
    }

    // Cell-by-cell comparison with the printed table, in printed row order.
    let mut matched = 0;
    let mut differing = BTreeSet::new();
    for (d, p) in derived.iter().zip(&printed) {
        check(
            (d.total_citations, d.papers, d.h, d.g) == (p.total_citations, p.papers, p.h, p.g),
            || format!("row order/inputs differ at {} vs {}", d.acronym, p.acronym),
        )?;
        let cells = [
            ("h_sq", d.h_sq, p.h_sq),
            ("g_sq", d.g_sq, p.g_sq),
            ("g_sq_minus_h_sq", d.g_sq_minus_h_sq, p.g_sq_minus_h_sq),
            ("tail_g", d.tail_g_paper, p.tail_g_paper),
            ("constituents", d.constituents_paper, p.constituents_paper),
        ];
        for (column, ours, theirs) in cells {
            if ours == theirs {
                matched += 1;
            } else {
                differing.insert((p.acronym.clone(), column, theirs, ours));
            }
        }
    }

    // Any printed cell we do not reproduce must contradict the printed row it
    // sits in (its Σc, h, g and its own g² − h² column).
    let self_inconsistent: BTreeSet<(String, String)> = cross_check_derived(&printed)
        .into_iter()
        .map(|f| (f.row, f.detail.split(':').next().unwrap().to_string()))
        .collect();
    let differing_cells: BTreeSet<(String, String)> = differing
        .iter()
        .map(|(row, col, _, _)| (row.clone(), col.to_string()))
        .collect();
    check(differing_cells == self_inconsistent, || {
        format!("unexplained differences: {differing:?} vs self-inconsistent {self_inconsistent:?}")
    })?;
    for (row, _, _, _) in &differing {
        let p = printed.iter().find(|p| &p.acronym == row).unwrap();
        let d = derived
            .iter()
            .find(|d| d.total_citations == p.total_citations)
            .unwrap();
        check(
            d.constituents_paper - d.tail_g_paper == p.g_sq_minus_h_sq,
            || format!("{row}: derived tails disagree with printed g^2-h^2"),
        )?;
    }
    let elapsed = start.elapsed();
    check(elapsed < TABLE_RUNTIME, || format!("took {elapsed:?}"))?;

    let listed: Vec<String> = differing
        .iter()
        .map(|(row, col, theirs, ours)| format!("{row}.{col} printed {theirs} derived {ours}"))
        .collect();
    Ok(format!(
        "all 20 rows derived integer-exactly; {matched}/100 printed cells equal; \
         printed cells contradicting their own row: [{}]",
        listed.join("; ")
    ))
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    for (k, v) in random_vectors(0x5eed_0004).iter().enumerate() {
        let c = v.as_slice();
        let total: u64 = c.iter().sum();
        let h = oracle_h(c) as usize;
        let g = oracle_g(c, false) as usize;
        let excess: u64 = c[..h].iter().map(|&x| x - h as u64).sum();
        let tail_h: u64 = c[h..].iter().sum();
        let head_g: u64 = c[..g].iter().sum();
        let tail_g: u64 = c[g..].iter().sum();
        let slack = head_g as i64 - (g * g) as i64;

        let hd = decompose_h(v);
        let gd = decompose_g(v);
        let rep = verify_relation(v);
        let lhs = (g * g) as i64 - (h * h) as i64;
        let rhs_paper = excess as i64 + tail_h as i64 - tail_g as i64;
        let ok = hd.h_sq + hd.excess + hd.tail_h == total
            && (hd.excess, hd.tail_h) == (excess, tail_h)
            && gd.g_sq + gd.slack + gd.tail_g == total
            && slack >= 0
            && (gd.slack as i64, gd.tail_g) == (slack, tail_g)
            && g >= h
            && lhs == rhs_paper - slack
            && lhs <= rhs_paper
            && tail_h >= tail_g
            && (rep.lhs, rep.rhs_paper, rep.slack) == (lhs, rhs_paper, slack)
            && rep.all_hold();
        if !ok {
            failures.push(k);
        }
    }
    check(failures.is_empty(), || {
        format!(
            "{} failures, first at vector {:?}",
            failures.len(),
            failures.first()
        )
    })?;
    Ok(format!(
        "{RANDOM_VECTORS} random vectors: all identities exact, 0 failures"
    ))
}

fn criterion_5() -> Outcome {
    let mut failures = 0;
    for v in random_vectors(0x5eed_0004) {
        let c = v.as_slice();
        if compute_h(&v) != oracle_h(c)
            || compute_g(&v, GConvention::Cap) != oracle_g(c, false)
            || compute_g(&v, GConvention::Pad) != oracle_g(c, true)
        {
            failures += 1;
        }
    }
    check(failures == 0, || {
        format!("{failures} disagreements with brute force")
    })?;
    Ok(format!(
        "{RANDOM_VECTORS} random vectors: h, g(cap), g(pad) equal brute-force scans"
    ))
}

fn criterion_6() -> Outcome {
    let pubs: Vec<PublicationRecord> = (2001..=2005)
        .flat_map(|y| {
            (0..10).map(move |k| PublicationRecord {
                paper_id: format!("{y}-{k}"),
                pub_year: y,
            })
        })
        .collect();
    let events: Vec<CitationEvent> = (0..100)
        .map(|k| CitationEvent {
            cited_paper_id: pubs[(k * 7) % 50].paper_id.clone(),
            cite_year: 2006,
        })
        .collect();
    let ledger = build_ledger(&pubs, &events).map_err(|e| e.to_string())?;
    let five = windowed_impact_factor(&ledger, 2001, 5).map_err(|e| e.to_string())?;
    check(five == Ratio::from_integer(2), || {
        format!("five-year IF = {five}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut checked = 0;
    for ledger_no in 0..RANDOM_LEDGERS {
        let n_pubs = rng.gen_range(0..12);
        let pubs: Vec<PublicationRecord> = (0..n_pubs)
            .map(|k| PublicationRecord {
                paper_id: format!("p{k}"),
                pub_year: rng.gen_range(2000..=2005),
            })
            .collect();
        let events: Vec<CitationEvent> = if pubs.is_empty() {
            Vec::new()
        } else {
            (0..rng.gen_range(0..30))
                .map(|_| {
                    let p = &pubs[rng.gen_range(0..pubs.len())];
                    CitationEvent {
                        cited_paper_id: p.paper_id.clone(),
                        cite_year: p.pub_year + rng.gen_range(0..=4),
                    }
                })
                .collect()
        };
        let ledger = build_ledger(&pubs, &events).map_err(|e| e.to_string())?;
        for y1 in 1999..=2006 {
            let (y2, y3) = (y1 + 1, y1 + 2);
            // Two-year formula straight from the raw records.
            let papers = pubs
                .iter()
                .filter(|p| p.pub_year == y1 || p.pub_year == y2)
                .count() as u64;
            let cites = events
                .iter()
                .filter(|e| e.cite_year == y3)
                .filter(|e| {
                    let year = pubs
                        .iter()
                        .find(|p| p.paper_id == e.cited_paper_id)
                        .unwrap()
                        .pub_year;
                    year == y1 || year == y2
                })
                .count() as u64;
            let got = windowed_impact_factor(&ledger, y1, 2);
            match (papers, got) {
                (0, Err(Error::UndefinedRatio(_))) => {}
                (0, other) => {
                    return Err(format!(
                        "ledger {ledger_no}, {y1}: expected error, got {other:?}"
                    ))
                }
                (p, Ok(q)) if q == Ratio::new(cites, p) => {}
                (p, other) => {
                    return Err(format!(
                        "ledger {ledger_no}, {y1}: expected {cites}/{p}, got {other:?}"
                    ))
                }
            }
            checked += 1;
        }
    }
    Ok(format!("IF(2006; base 2001, W=5) = {five}; W=2 equals C_y3/(P_y1+P_y2) on {RANDOM_LEDGERS} ledgers ({checked} years)"))
}

fn criterion_7() -> Outcome {
    let rows = table_ii();
    let fig2 = emit_plot_series(&rows, Figure::Fig2);
    let reversed: Vec<SeriesValue> = rows
        .iter()
        .rev()
        .map(|r| SeriesValue::Ratio(row_if(r).unwrap()))
        .collect();
    for s in &fig2 {
        check(s.x_values == reversed, || {
            format!("fig2 series {} not in reversed Table II order", s.label)
        })?;
    }
    let expected_h: Vec<SeriesValue> = rows
        .iter()
        .rev()
        .map(|r| SeriesValue::Count(r.h as i64))
        .collect();
    check(
        fig2[0].label == "h" && fig2[0].y_values == expected_h,
        || "fig2 h series".into(),
    )?;

    let printed = parse_derived_table(TABLE_III_PRINTED).map_err(|e| e.to_string())?;
    let fig4 = emit_plot_series(&rows, Figure::Fig4);
    let diff = fig4
        .iter()
        .find(|s| s.label == "g_sq_minus_h_sq")
        .ok_or("missing g^2-h^2 series")?;
    let expected: Vec<SeriesValue> = printed
        .iter()
        .map(|p| SeriesValue::Count(p.g_sq_minus_h_sq))
        .collect();
    check(diff.y_values == expected, || {
        format!("fig4 diff {:?}", diff.y_values)
    })?;
    let xs: Vec<SeriesValue> = printed
        .iter()
        .map(|p| SeriesValue::Count(p.total_citations as i64))
        .collect();
    check(diff.x_values == xs, || {
        "fig4 x values are not Table III's citations".into()
    })?;
    Ok("fig2 x = Table II I_f reversed (COMCOM..CCR); fig4 g^2-h^2 = Table III last column".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 Example 1 exactness", criterion_1),
        ("2 Table II impact factors", criterion_2),
        ("3 Table III reproduction", criterion_3),
        ("4 identity suite", criterion_4),
        ("5 oracle equivalence", criterion_5),
        ("6 windowed impact factor", criterion_6),
        ("7 plot-data fidelity", criterion_7),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let start = Instant::now();
        match criterion() {
            Ok(detail) => println!("PASS criterion {name} ({:.0?}): {detail}", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("N/A  criterion 8 rendered figures: images are not produced; orderings and values covered by 3 and 7");
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
