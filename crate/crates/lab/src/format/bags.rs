//! Line-oriented text format for bag collections.
//!
//! ```text
//! header <llp|mil> <d> <m> <n>
//! x <id> <0|1|-> <c_1> ... <c_d>
//! b <sigma> <weight|-> <k> <id_1> ... <id_k> [# <source_1> ...]
//! ```
//!
//! Instance ids run `0..n` in order. Either every bag has a weight or none
//! does. Text after `#` on a bag line is its union provenance. Blank lines
//! and lines starting with `#` are ignored. Floats are written in shortest
//! round-trip form.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::sync::Arc;

use llp_core::{Bag, BagCollection, InstanceId, InstanceTable, Mode};

use crate::error::{LabError, Result};

fn err(line: usize, msg: impl std::fmt::Display) -> LabError {
    LabError::Data(format!("line {line}: {msg}"))
}

fn parse<T: std::str::FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} {tok:?}")))
}

fn parse_mode(tok: Option<&str>, line: usize) -> Result<Mode> {
    match tok {
        Some("llp") => Ok(Mode::Llp),
        Some("mil") => Ok(Mode::Mil),
        other => Err(err(line, format!("bad mode {other:?}"))),
    }
}

pub fn write_collection<W: Write>(coll: &BagCollection, out: &mut W) -> std::io::Result<()> {
    let table = coll.table();
    writeln!(
        out,
        "header {} {} {} {}",
        coll.mode(),
        table.dim(),
        coll.len(),
        table.len()
    )?;
    let mut line = String::new();
    for x in table.iter() {
        line.clear();
        let label = match x.label {
            Some(true) => "1",
            Some(false) => "0",
            None => "-",
        };
        write!(line, "x {} {label}", x.id.index()).unwrap();
        for c in x.coords {
            write!(line, " {c:e}").unwrap();
        }
        writeln!(out, "{line}")?;
    }
    for (j, bag) in coll.bags().iter().enumerate() {
        line.clear();
        write!(line, "b {} ", bag.label()).unwrap();
        match coll.weights() {
            Some(w) => write!(line, "{:e}", w[j]).unwrap(),
            None => line.push('-'),
        }
        write!(line, " {}", bag.len()).unwrap();
        for id in bag.members() {
            write!(line, " {}", id.index()).unwrap();
        }
        if let Some(p) = bag.provenance() {
            line.push_str(" #");
            for s in p {
                write!(line, " {s}").unwrap();
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Labeled instances as a collection with no bags.
pub fn write_instances<W: Write>(table: &InstanceTable, out: &mut W) -> std::io::Result<()> {
    let empty = BagCollection::unweighted(Mode::Llp, Arc::new(table.clone()), Vec::new())
        .expect("an empty collection is valid");
    write_collection(&empty, out)
}

pub fn read_collection<R: BufRead>(input: R) -> Result<BagCollection> {
    let mut header: Option<(Mode, usize, usize, usize)> = None;
    let mut table: Option<InstanceTable> = None;
    let mut bags = Vec::new();
    let mut weights: Vec<Option<f64>> = Vec::new();
    let mut coords = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let raw = raw.map_err(|e| err(line_no, e))?;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (body, provenance) = match line.split_once('#') {
            Some((b, p)) => (b, Some(p)),
            None => (line, None),
        };
        let mut tok = body.split_whitespace();
        match tok.next() {
            Some("header") => {
                if header.is_some() {
                    return Err(err(line_no, "duplicate header"));
                }
                let mode = parse_mode(tok.next(), line_no)?;
                let d = parse(tok.next(), "dimension", line_no)?;
                let m = parse(tok.next(), "bag count", line_no)?;
                let n = parse(tok.next(), "instance count", line_no)?;
                header = Some((mode, d, m, n));
                table = Some(InstanceTable::with_capacity(d, n));
            }
            Some("x") => {
                let (_, d, _, _) = header.ok_or_else(|| err(line_no, "instance before header"))?;
                let t = table.as_mut().expect("table exists once the header is read");
                if !bags.is_empty() {
                    return Err(err(line_no, "instance after bags"));
                }
                let id: usize = parse(tok.next(), "instance id", line_no)?;
                if id != t.len() {
                    return Err(err(line_no, format!("expected instance id {}, got {id}", t.len())));
                }
                let label = match tok.next() {
                    Some("1") => Some(true),
                    Some("0") => Some(false),
                    Some("-") => None,
                    other => return Err(err(line_no, format!("bad instance label {other:?}"))),
                };
                coords.clear();
                for _ in 0..d {
                    coords.push(parse::<f64>(tok.next(), "coordinate", line_no)?);
                }
                if tok.next().is_some() {
                    return Err(err(line_no, "too many coordinates"));
                }
                t.push(&coords, label).map_err(|e| err(line_no, e))?;
            }
            Some("b") => {
                let (mode, _, _, _) = header.ok_or_else(|| err(line_no, "bag before header"))?;
                let sigma: u32 = parse(tok.next(), "bag label", line_no)?;
                let weight = match tok.next() {
                    Some("-") => None,
                    w => Some(parse::<f64>(w, "bag weight", line_no)?),
                };
                let k: usize = parse(tok.next(), "bag size", line_no)?;
                let members = (0..k)
                    .map(|_| parse::<usize>(tok.next(), "member id", line_no).map(InstanceId))
                    .collect::<Result<Vec<_>>>()?;
                if tok.next().is_some() {
                    return Err(err(line_no, format!("more than {k} members")));
                }
                let bag = match provenance {
                    Some(p) => {
                        if mode != Mode::Llp {
                            return Err(err(line_no, "provenance on a MIL bag"));
                        }
                        let sources = p
                            .split_whitespace()
                            .map(|s| parse::<usize>(Some(s), "source index", line_no))
                            .collect::<Result<Vec<_>>>()?;
                        Bag::union(members, sigma, sources)
                    }
                    None => Bag::new(mode, members, sigma),
                }
                .map_err(|e| err(line_no, e))?;
                bags.push(bag);
                weights.push(weight);
            }
            Some(other) => return Err(err(line_no, format!("unknown record {other:?}"))),
            None => unreachable!("blank lines are skipped"),
        }
    }
    let (mode, _, m, n) = header.ok_or_else(|| LabError::Data("missing header".into()))?;
    let table = table.expect("table exists once the header is read");
    if table.len() != n || bags.len() != m {
        return Err(LabError::Data(format!(
            "header declares {m} bags and {n} instances, found {} and {}",
            bags.len(),
            table.len()
        )));
    }
    let weights = match weights.iter().filter(|w| w.is_some()).count() {
        0 => None,
        c if c == weights.len() => Some(weights.into_iter().flatten().collect()),
        _ => return Err(LabError::Data("either every bag or no bag must carry a weight".into())),
    };
    Ok(BagCollection::new(mode, Arc::new(table), bags, weights)?)
}

pub fn save_collection(coll: &BagCollection, path: &std::path::Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_collection(coll, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| LabError::io(path, e))
}

pub fn load_collection(path: &std::path::Path) -> Result<BagCollection> {
    let file = std::fs::File::open(path).map_err(|e| LabError::io(path, e))?;
    read_collection(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_line_numbers() {
        let text = "header llp 1 1 1\nx 0 - 0.5\nb 3 - 1 0\n";
        let e = read_collection(text.as_bytes()).unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
    }

    #[test]
    fn mixed_weights_rejected() {
        let text = "header llp 1 2 1\nx 0 - 0\nb 0 0.5 1 0\nb 0 - 1 0\n";
        assert!(read_collection(text.as_bytes()).is_err());
    }
}
