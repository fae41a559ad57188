//! Corpus files in and report files out.

use super::report::{flatten, CurveReport};
use super::HarnessError;
use crate::arith::{format_rational, parse_rational};
use crate::curve::WeierstrassCurve;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}, expected jsonl or csv")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub label: String,
    pub ainvs: [BigRational; 5],
    pub generators: Option<Vec<(BigRational, BigRational)>>,
    pub known_rank: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    label: String,
    ainvs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<u64>,
}

const CSV_HEADER: [&str; 8] = ["label", "a1", "a2", "a3", "a4", "a6", "generators", "rank"];

impl RawEntry {
    fn from_entry(e: &CorpusEntry) -> RawEntry {
        RawEntry {
            label: e.label.clone(),
            ainvs: e.ainvs.iter().map(format_rational).collect(),
            generators: e.generators.as_ref().map(|g| {
                g.iter()
                    .map(|(x, y)| [format_rational(x), format_rational(y)])
                    .collect()
            }),
            rank: e.known_rank,
        }
    }

    fn into_entry(self, line: usize) -> Result<CorpusEntry, HarnessError> {
        let err = |msg: String| HarnessError::Parse { line, msg };
        if self.ainvs.len() != 5 {
            return Err(err(format!("expected 5 a-invariants, found {}", self.ainvs.len())));
        }
        let rat = |s: &str| parse_rational(s).map_err(|e| err(e.to_string()));
        let a: Vec<BigRational> = self.ainvs.iter().map(|s| rat(s)).collect::<Result<_, _>>()?;
        let ainvs: [BigRational; 5] = a.try_into().expect("length checked");
        let curve = WeierstrassCurve::new(ainvs.clone()).map_err(|e| err(e.to_string()))?;
        let generators = match self.generators {
            None => None,
            Some(gs) => {
                let mut out = Vec::with_capacity(gs.len());
                for [x, y] in gs {
                    let (x, y) = (rat(&x)?, rat(&y)?);
                    curve.point(x.clone(), y.clone()).map_err(|_| {
                        err(format!(
                            "generator ({}, {}) is not on the curve",
                            format_rational(&x),
                            format_rational(&y)
                        ))
                    })?;
                    out.push((x, y));
                }
                Some(out)
            }
        };
        Ok(CorpusEntry {
            label: self.label,
            ainvs,
            generators,
            known_rank: self.rank,
        })
    }
}

fn open(path: &Path) -> Result<BufReader<std::fs::File>, HarnessError> {
    std::fs::File::open(path)
        .map(BufReader::new)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// Read a corpus. JSONL lines hold {"label", "ainvs", "generators"?,
/// "rank"?}; CSV rows hold label, a1..a6, generators as a JSON array of
/// [x, y] pairs (empty when absent) and rank (empty when unknown).
pub fn ingest(path: &Path, format: Format) -> Result<Vec<CorpusEntry>, HarnessError> {
    let reader = open(path)?;
    match format {
        Format::Jsonl => ingest_jsonl(reader),
        Format::Csv => ingest_csv(reader),
    }
}

pub fn ingest_jsonl(reader: impl BufRead) -> Result<Vec<CorpusEntry>, HarnessError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| HarnessError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawEntry = serde_json::from_str(&line).map_err(|e| HarnessError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        out.push(raw.into_entry(line_no)?);
    }
    Ok(out)
}

pub fn ingest_csv(reader: impl std::io::Read) -> Result<Vec<CorpusEntry>, HarnessError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        // header is line 1
        let line = i + 2;
        let err = |msg: String| HarnessError::Parse { line, msg };
        let rec = rec.map_err(|e| err(e.to_string()))?;
        if rec.len() != CSV_HEADER.len() {
            return Err(err(format!(
                "expected {} fields, found {}",
                CSV_HEADER.len(),
                rec.len()
            )));
        }
        let generators = match &rec[6] {
            "" => None,
            s => Some(serde_json::from_str(s).map_err(|e| err(e.to_string()))?),
        };
        let rank = match &rec[7] {
            "" => None,
            s => Some(s.parse().map_err(|_| err(format!("bad rank {s:?}")))?),
        };
        let raw = RawEntry {
            label: rec[0].to_string(),
            ainvs: (1..6).map(|k| rec[k].to_string()).collect(),
            generators,
            rank,
        };
        out.push(raw.into_entry(line)?);
    }
    Ok(out)
}

/// Write a corpus in either format; `ingest` reads it back unchanged.
pub fn write_corpus(entries: &[CorpusEntry], out: &mut impl Write, format: Format) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(e.to_string());
    match format {
        Format::Jsonl => {
            for e in entries {
                let s = serde_json::to_string(&RawEntry::from_entry(e)).expect("serializable");
                writeln!(out, "{s}").map_err(io)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)
                .map_err(|e| HarnessError::Io(e.to_string()))?;
            for e in entries {
                let raw = RawEntry::from_entry(e);
                let gens = raw
                    .generators
                    .as_ref()
                    .map(|g| serde_json::to_string(g).expect("serializable"))
                    .unwrap_or_default();
                let rank = raw.rank.map(|r| r.to_string()).unwrap_or_default();
                let mut row = vec![raw.label.clone()];
                row.extend(raw.ainvs.iter().cloned());
                row.push(gens);
                row.push(rank);
                w.write_record(&row).map_err(|e| HarnessError::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

/// Write reports: one JSON object per line, or CSV with the flattened
/// column names of the JSON objects in the same order.
pub fn emit(reports: &[CurveReport], out: &mut impl Write, format: Format) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(e.to_string());
    match format {
        Format::Jsonl => {
            for r in reports {
                let s = serde_json::to_string(r).expect("serializable");
                writeln!(out, "{s}").map_err(io)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header_written = false;
            for r in reports {
                let row = flatten(&serde_json::to_value(r).expect("serializable"));
                if !header_written {
                    w.write_record(row.iter().map(|(k, _)| k))
                        .map_err(|e| HarnessError::Io(e.to_string()))?;
                    header_written = true;
                }
                w.write_record(row.iter().map(|(_, v)| v))
                    .map_err(|e| HarnessError::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

pub fn emit_to_path(reports: &[CurveReport], path: &Path, format: Format) -> Result<(), HarnessError> {
    let f = std::fs::File::create(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(f);
    emit(reports, &mut w, format)?;
    w.flush().map_err(|e| HarnessError::Io(e.to_string()))
}
