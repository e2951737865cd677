//! Line-oriented text formats in the DIMACS family.
//!
//! Instance files:
//!
//! ```text
//! c <free text>
//! p iflow <n> <m> <f>
//! n <node> s
//! n <node> t
//! a <tail> <head> <lower> <upper> <cost>
//! ```
//!
//! Scenario files carry `s iflow <m>` followed by `u <arc> <capacity>`
//! records. Flow files (`f iflow <m>`, `x <arc> <value>`) and potential
//! files (`q iflow <n>`, `v <node> <potential>`) follow the same pattern so
//! command-line pipelines compose. Writers always produce the canonical form:
//! header first, records in id order, single spaces, `\n` terminated.

use std::fmt::Write as _;

use thiserror::Error;

use crate::mcf::Potentials;
use crate::model::{validate_instance, Flow, Instance, Scenario, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; 0 for whole-file errors.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("duplicate {0} line")]
    Duplicate(&'static str),
    #[error("missing {0} line")]
    Missing(&'static str),
    #[error("arc count mismatch: declared {declared}, found {found}")]
    ArcCountMismatch { declared: usize, found: usize },
    #[error("negative value")]
    NegativeValue,
    #[error("self-loop")]
    SelfLoop,
    #[error("interval bounds crossed")]
    CrossedBounds,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("arc id {0} out of range")]
    ArcOutOfRange(usize),
    #[error("duplicate record for arc {0}")]
    DuplicateArc(usize),
    #[error("duplicate record for node {0}")]
    DuplicateNode(usize),
    #[error("value {value} on arc {arc} out of interval")]
    OutOfInterval { arc: usize, value: i64 },
    #[error("invalid instance: {0}")]
    Invalid(Violation),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    err(line, ParseErrorKind::Syntax(msg.into()))
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, fields)),
        }
    })
}

fn expect_len(line: usize, fields: &[&str], len: usize) -> Result<(), ParseError> {
    if fields.len() != len {
        return Err(syntax(
            line,
            format!("expected {len} fields, found {}", fields.len()),
        ));
    }
    Ok(())
}

fn int(line: usize, field: &str) -> Result<i64, ParseError> {
    let value: i64 = field
        .parse()
        .map_err(|_| syntax(line, format!("not an integer: {field:?}")))?;
    if value < 0 {
        return Err(err(line, ParseErrorKind::NegativeValue));
    }
    Ok(value)
}

fn signed(line: usize, field: &str) -> Result<i64, ParseError> {
    field
        .parse()
        .map_err(|_| syntax(line, format!("not an integer: {field:?}")))
}

fn index(line: usize, field: &str) -> Result<usize, ParseError> {
    Ok(int(line, field)? as usize)
}

/// Header length, its numeric fields, then the remaining records.
type Header<'a> = (usize, Vec<i64>, Vec<(usize, Vec<&'a str>)>);

fn header<'a>(text: &'a str, tag: &str, kind: &str, len: usize) -> Result<Header<'a>, ParseError> {
    let mut recs = records(text);
    let (line, fields) = recs
        .next()
        .ok_or_else(|| err(0, ParseErrorKind::Missing("header")))?;
    if fields[0] != tag {
        return Err(syntax(line, format!("expected '{tag}' header line")));
    }
    expect_len(line, &fields, len)?;
    if fields[1] != kind {
        return Err(syntax(line, format!("unknown problem kind {:?}", fields[1])));
    }
    let values = fields[2..]
        .iter()
        .map(|f| int(line, f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((line, values, recs.collect()))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut recs = records(text);
    let (pline, p) = recs
        .next()
        .ok_or_else(|| err(0, ParseErrorKind::MissingProblemLine))?;
    if p[0] != "p" {
        return Err(err(pline, ParseErrorKind::MissingProblemLine));
    }
    expect_len(pline, &p, 5)?;
    if p[1] != "iflow" {
        return Err(syntax(pline, format!("unknown problem kind {:?}", p[1])));
    }
    let n = index(pline, p[2])?;
    let m = index(pline, p[3])?;
    let f = int(pline, p[4])?;

    let mut source = None;
    let mut sink = None;
    let mut arcs = Vec::with_capacity(m);
    for (line, fields) in recs {
        match fields[0] {
            "p" => return Err(err(line, ParseErrorKind::Duplicate("problem"))),
            "n" => {
                expect_len(line, &fields, 3)?;
                let node = index(line, fields[1])?;
                if node == 0 || node > n {
                    return Err(err(line, ParseErrorKind::NodeOutOfRange(node)));
                }
                let (slot, name) = match fields[2] {
                    "s" => (&mut source, "source"),
                    "t" => (&mut sink, "sink"),
                    other => return Err(syntax(line, format!("unknown node role {other:?}"))),
                };
                if slot.is_some() {
                    return Err(err(line, ParseErrorKind::Duplicate(name)));
                }
                *slot = Some(node);
            }
            "a" => {
                expect_len(line, &fields, 6)?;
                let tail = index(line, fields[1])?;
                let head = index(line, fields[2])?;
                let lower = int(line, fields[3])?;
                let upper = int(line, fields[4])?;
                let cost = int(line, fields[5])?;
                for node in [tail, head] {
                    if node == 0 || node > n {
                        return Err(err(line, ParseErrorKind::NodeOutOfRange(node)));
                    }
                }
                if tail == head {
                    return Err(err(line, ParseErrorKind::SelfLoop));
                }
                if lower > upper {
                    return Err(err(line, ParseErrorKind::CrossedBounds));
                }
                arcs.push((tail, head, lower, upper, cost));
            }
            other => return Err(syntax(line, format!("unknown record type {other:?}"))),
        }
    }
    if arcs.len() != m {
        return Err(err(
            0,
            ParseErrorKind::ArcCountMismatch {
                declared: m,
                found: arcs.len(),
            },
        ));
    }
    let source = source.ok_or_else(|| err(0, ParseErrorKind::Missing("source")))?;
    let sink = sink.ok_or_else(|| err(0, ParseErrorKind::Missing("sink")))?;
    let instance = Instance::new_unchecked(n, source, sink, f, &arcs);
    validate_instance(&instance).map_err(|v| err(0, ParseErrorKind::Invalid(v)))?;
    Ok(instance)
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p iflow {} {} {}",
        instance.num_nodes,
        instance.num_arcs(),
        instance.flow_amount
    );
    let _ = writeln!(out, "n {} s", instance.source);
    let _ = writeln!(out, "n {} t", instance.sink);
    for a in &instance.arcs {
        let _ = writeln!(
            out,
            "a {} {} {} {} {}",
            a.tail, a.head, a.capacity.lower, a.capacity.upper, a.cost
        );
    }
    out
}

/// Reads `len` indexed records `<tag> <index> <value>` into a dense vector.
fn indexed_records(
    recs: Vec<(usize, Vec<&str>)>,
    tag: &str,
    len: usize,
    base: usize,
    allow_negative: bool,
    duplicate: fn(usize) -> ParseErrorKind,
    out_of_range: fn(usize) -> ParseErrorKind,
) -> Result<Vec<(usize, i64)>, ParseError> {
    let mut values: Vec<Option<(usize, i64)>> = vec![None; len];
    let mut found = 0;
    for (line, fields) in recs {
        if fields[0] != tag {
            return Err(syntax(line, format!("unexpected record type {:?}", fields[0])));
        }
        expect_len(line, &fields, 3)?;
        let idx = index(line, fields[1])?;
        let value = if allow_negative {
            signed(line, fields[2])?
        } else {
            int(line, fields[2])?
        };
        if idx < base || idx >= len + base {
            return Err(err(line, out_of_range(idx)));
        }
        let slot = &mut values[idx - base];
        if slot.is_some() {
            return Err(err(line, duplicate(idx)));
        }
        *slot = Some((line, value));
        found += 1;
    }
    if found != len {
        return Err(err(0, ParseErrorKind::ArcCountMismatch { declared: len, found }));
    }
    Ok(values.into_iter().map(Option::unwrap).collect())
}

pub fn parse_scenario(text: &str, instance: &Instance) -> Result<Scenario, ParseError> {
    let (hline, head, recs) = header(text, "s", "iflow", 3)?;
    let m = head[0] as usize;
    if m != instance.num_arcs() {
        return Err(err(
            hline,
            ParseErrorKind::ArcCountMismatch {
                declared: m,
                found: instance.num_arcs(),
            },
        ));
    }
    let values = indexed_records(
        recs,
        "u",
        m,
        0,
        false,
        ParseErrorKind::DuplicateArc,
        ParseErrorKind::ArcOutOfRange,
    )?;
    for (arc, &(line, value)) in instance.arcs.iter().zip(&values) {
        if !arc.capacity.contains(value) {
            return Err(err(line, ParseErrorKind::OutOfInterval { arc: arc.id, value }));
        }
    }
    Ok(Scenario::new(values.into_iter().map(|(_, v)| v).collect()))
}

pub fn write_scenario(scenario: &Scenario) -> String {
    let mut out = format!("s iflow {}\n", scenario.capacities.len());
    for (id, u) in scenario.capacities.iter().enumerate() {
        let _ = writeln!(out, "u {id} {u}");
    }
    out
}

/// Parses a flow file; the total cost is recomputed from the instance costs.
pub fn parse_flow(text: &str, instance: &Instance) -> Result<Flow, ParseError> {
    let (hline, head, recs) = header(text, "f", "iflow", 3)?;
    let m = head[0] as usize;
    if m != instance.num_arcs() {
        return Err(err(
            hline,
            ParseErrorKind::ArcCountMismatch {
                declared: m,
                found: instance.num_arcs(),
            },
        ));
    }
    let values = indexed_records(
        recs,
        "x",
        m,
        0,
        false,
        ParseErrorKind::DuplicateArc,
        ParseErrorKind::ArcOutOfRange,
    )?;
    Ok(Flow::from_values(
        instance,
        values.into_iter().map(|(_, v)| v).collect(),
    ))
}

pub fn write_flow(flow: &Flow) -> String {
    let mut out = format!("f iflow {}\n", flow.values.len());
    for (id, x) in flow.values.iter().enumerate() {
        let _ = writeln!(out, "x {id} {x}");
    }
    out
}

pub fn parse_potentials(text: &str, instance: &Instance) -> Result<Potentials, ParseError> {
    let (hline, head, recs) = header(text, "q", "iflow", 3)?;
    let n = head[0] as usize;
    if n != instance.num_nodes {
        return Err(syntax(
            hline,
            format!(
                "potential file has {n} nodes, instance has {}",
                instance.num_nodes
            ),
        ));
    }
    let values = indexed_records(
        recs,
        "v",
        n,
        1,
        true,
        ParseErrorKind::DuplicateNode,
        ParseErrorKind::NodeOutOfRange,
    )?;
    Ok(Potentials::new(values.into_iter().map(|(_, v)| v).collect()))
}

pub fn write_potentials(potentials: &Potentials) -> String {
    let mut out = format!("q iflow {}\n", potentials.len());
    for node in 1..=potentials.len() {
        let _ = writeln!(out, "v {node} {}", potentials.get(node));
    }
    out
}

/// Parses an `n × n` cost matrix: `n` rows of `n` nonnegative integers,
/// `c` comment lines allowed. Diagonal entries are ignored.
pub fn parse_cost_matrix(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let rows: Vec<(usize, Vec<&str>)> = records(text).collect();
    let n = rows.len();
    rows.into_iter()
        .map(|(line, fields)| {
            expect_len(line, &fields, n)?;
            fields.iter().map(|f| int(line, f)).collect()
        })
        .collect()
}
