//! Self-describing on-disk measurement records.
//!
//! Line-oriented text: a `key: value` header terminated by a blank line, then
//! one body line per setting (LRM) or per shot (SIC). The format is the wire
//! contract for running the estimators on externally produced data.
//!
//! LRM body line: `l <setting> <z_1> ... <z_K>` where `<setting>` is
//! `c:i,j,...` (Clifford table indices, one per subset label) or
//! `h:f0,...,f7[;f0,...,f7]...` (row-major re/im pairs of each 2x2 factor)
//! and outcomes are 0/1 strings of length s. SIC body line: one string over
//! digits 1-4 of length s. Clifford indices refer to the canonical ⟨H, S⟩
//! closure order of `ce_core::clifford_table`, pinned by the table hash in
//! the header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ce_core::mat::Mat2;
use ce_core::{
    clifford_table, EnsembleKind, LrmRecord, LrmSettings, SicRecord, SingleQubitUnitary,
    SubsetSpec,
};
use num_complex::Complex64 as C64;
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: &str = "ce-record/1";
const CREATOR: &str = concat!("ce-lab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("format version mismatch: found {found:?}, expected {FORMAT_VERSION:?}")]
    VersionMismatch { found: String },
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("line {line}: malformed record line: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("K must be >= 2")]
    KTooSmall,
    #[error("line {line}: SIC symbol {symbol:?} out of range 1-4")]
    SymbolOutOfRange { line: usize, symbol: char },
    #[error("Clifford table hash mismatch: record was written against a different table")]
    CliffordTableMismatch,
    #[error(transparent)]
    Core(#[from] ce_core::Error),
}

pub type Result<T> = std::result::Result<T, RecordError>;

/// Either measurement record kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Lrm(LrmRecord),
    Sic(SicRecord),
}

impl Record {
    pub fn subset(&self) -> &SubsetSpec {
        match self {
            Record::Lrm(r) => &r.subset,
            Record::Sic(r) => &r.subset,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            Record::Lrm(_) => "lrm",
            Record::Sic(_) => "sic",
        }
    }
}

impl From<LrmRecord> for Record {
    fn from(r: LrmRecord) -> Self {
        Record::Lrm(r)
    }
}

impl From<SicRecord> for Record {
    fn from(r: SicRecord) -> Self {
        Record::Sic(r)
    }
}

/// SHA-256 fingerprint of the canonical Clifford table (row-major entries,
/// big-endian IEEE-754 bit patterns of re then im).
pub fn clifford_table_sha256() -> String {
    let mut hasher = Sha256::new();
    for u in clifford_table() {
        for row in &u.matrix().0 {
            for entry in row {
                hasher.update(entry.re.to_bits().to_be_bytes());
                hasher.update(entry.im.to_bits().to_be_bytes());
            }
        }
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        write!(hex, "{byte:02x}").unwrap();
    }
    hex
}

fn csv_labels(subset: &SubsetSpec) -> String {
    let labels: Vec<String> = subset.labels().iter().map(u32::to_string).collect();
    labels.join(",")
}

fn seed_value(seed: Option<u64>) -> String {
    match seed {
        Some(s) => s.to_string(),
        None => "none".to_string(),
    }
}

fn format_bitstring(z: u64, s: u32) -> String {
    let mut out = String::with_capacity(s as usize);
    for j in (0..s).rev() {
        out.push(if z >> j & 1 == 1 { '1' } else { '0' });
    }
    out
}

fn format_symbols(q: u64, s: u32) -> String {
    let mut out = String::with_capacity(s as usize);
    for j in (0..s).rev() {
        let sym = (q >> (2 * j)) & 0b11;
        out.push(char::from(b'1' + sym as u8));
    }
    out
}

fn format_haar_factor(u: &SingleQubitUnitary) -> String {
    let m = u.matrix();
    let mut parts = Vec::with_capacity(8);
    for row in &m.0 {
        for entry in row {
            parts.push(entry.re.to_string());
            parts.push(entry.im.to_string());
        }
    }
    parts.join(",")
}

/// Serializes a record to its text form.
pub fn serialize_record(record: &Record) -> String {
    let mut out = String::new();
    match record {
        Record::Lrm(r) => {
            let s = r.subset.s();
            out.push_str(&format!("format: {FORMAT_VERSION}\n"));
            out.push_str("kind: lrm\n");
            out.push_str(&format!("n: {}\n", r.subset.n()));
            out.push_str(&format!("subset: {}\n", csv_labels(&r.subset)));
            out.push_str(&format!("ensemble: {}\n", r.ensemble().as_str()));
            match &r.settings {
                LrmSettings::Clifford(_) => {
                    out.push_str(&format!(
                        "clifford-table-sha256: {}\n",
                        clifford_table_sha256()
                    ));
                }
                LrmSettings::Haar(_) => out.push_str("settings: inline\n"),
            }
            out.push_str(&format!("L: {}\n", r.unitary_count));
            out.push_str(&format!("K: {}\n", r.shots_per_unitary));
            out.push_str(&format!("seed: {}\n", seed_value(r.seed)));
            out.push_str(&format!("creator: {CREATOR}\n\n"));
            let k = r.shots_per_unitary as usize;
            for l in 0..r.unitary_count as usize {
                let desc = match &r.settings {
                    LrmSettings::Clifford(idxs) => {
                        let parts: Vec<String> =
                            idxs[l].iter().map(|i| i.to_string()).collect();
                        format!("c:{}", parts.join(","))
                    }
                    LrmSettings::Haar(factors) => {
                        let parts: Vec<String> =
                            factors[l].iter().map(format_haar_factor).collect();
                        format!("h:{}", parts.join(";"))
                    }
                };
                out.push_str(&format!("{} {desc}", l + 1));
                for shot in 0..k {
                    out.push(' ');
                    out.push_str(&format_bitstring(r.outcomes[l * k + shot], s));
                }
                out.push('\n');
            }
        }
        Record::Sic(r) => {
            let s = r.subset.s();
            out.push_str(&format!("format: {FORMAT_VERSION}\n"));
            out.push_str("kind: sic\n");
            out.push_str(&format!("n: {}\n", r.subset.n()));
            out.push_str(&format!("subset: {}\n", csv_labels(&r.subset)));
            out.push_str(&format!("M: {}\n", r.shots));
            out.push_str(&format!("seed: {}\n", seed_value(r.seed)));
            out.push_str(&format!("creator: {CREATOR}\n\n"));
            for &q in &r.outcomes {
                out.push_str(&format_symbols(q, s));
                out.push('\n');
            }
        }
    }
    out
}

pub fn write_record(record: &Record, path: &Path) -> Result<()> {
    fs::write(path, serialize_record(record))?;
    Ok(())
}

struct HeaderMap {
    entries: Vec<(String, String, usize)>,
}

impl HeaderMap {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, _, line)| *line)
            .unwrap_or(1)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| RecordError::MalformedHeader {
            line: self.entries.last().map(|e| e.2).unwrap_or(1),
            msg: format!("missing required key {key:?}"),
        })
    }
}

fn parse_header(lines: &[(usize, &str)]) -> Result<HeaderMap> {
    let mut entries = Vec::new();
    for &(line, text) in lines {
        let (key, value) = text.split_once(':').ok_or_else(|| {
            RecordError::MalformedHeader {
                line,
                msg: "expected `key: value`".to_string(),
            }
        })?;
        entries.push((key.trim().to_string(), value.trim().to_string(), line));
    }
    Ok(HeaderMap { entries })
}

fn parse_u64(map: &HeaderMap, key: &str) -> Result<u64> {
    let v = map.require(key)?;
    v.parse().map_err(|_| RecordError::MalformedHeader {
        line: map.line_of(key),
        msg: format!("key {key:?} is not an integer: {v:?}"),
    })
}

fn parse_subset(map: &HeaderMap) -> Result<SubsetSpec> {
    let n = parse_u64(map, "n")? as u32;
    let raw = map.require("subset")?;
    let mut labels = Vec::new();
    for part in raw.split(',') {
        labels.push(part.trim().parse::<u32>().map_err(|_| {
            RecordError::MalformedHeader {
                line: map.line_of("subset"),
                msg: format!("bad subset label {part:?}"),
            }
        })?);
    }
    Ok(SubsetSpec::new(n, labels)?)
}

fn parse_seed(map: &HeaderMap) -> Result<Option<u64>> {
    match map.get("seed") {
        None | Some("none") => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| RecordError::MalformedHeader {
            line: map.line_of("seed"),
            msg: format!("bad seed {v:?}"),
        }),
    }
}

fn parse_bitstring(text: &str, s: u32, line: usize) -> Result<u64> {
    if text.len() != s as usize {
        return Err(RecordError::MalformedLine {
            line,
            msg: format!("outcome {text:?} is not {s} bits"),
        });
    }
    let mut z = 0u64;
    for ch in text.chars() {
        z <<= 1;
        match ch {
            '0' => {}
            '1' => z |= 1,
            _ => {
                return Err(RecordError::MalformedLine {
                    line,
                    msg: format!("bad bit {ch:?}"),
                })
            }
        }
    }
    Ok(z)
}

fn parse_symbols(text: &str, s: u32, line: usize) -> Result<u64> {
    if text.len() != s as usize {
        return Err(RecordError::MalformedLine {
            line,
            msg: format!("outcome {text:?} is not {s} symbols"),
        });
    }
    let mut q = 0u64;
    for ch in text.chars() {
        q <<= 2;
        match ch {
            '1'..='4' => q |= ch as u64 - '1' as u64,
            _ => return Err(RecordError::SymbolOutOfRange { line, symbol: ch }),
        }
    }
    Ok(q)
}

fn parse_haar_factor(text: &str, line: usize) -> Result<SingleQubitUnitary> {
    let floats: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| RecordError::MalformedLine {
            line,
            msg: format!("bad float in unitary {text:?}"),
        })?;
    if floats.len() != 8 {
        return Err(RecordError::MalformedLine {
            line,
            msg: format!("expected 8 floats per factor, found {}", floats.len()),
        });
    }
    let e = |i: usize| C64::new(floats[2 * i], floats[2 * i + 1]);
    let mat = Mat2([[e(0), e(1)], [e(2), e(3)]]);
    SingleQubitUnitary::new(mat).map_err(|_| RecordError::MalformedLine {
        line,
        msg: "inline matrix is not unitary".to_string(),
    })
}

/// Parses a record from its text form, enforcing every record invariant.
pub fn parse_record(text: &str) -> Result<Record> {
    let numbered: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let blank = numbered
        .iter()
        .position(|(_, l)| l.trim().is_empty())
        .ok_or(RecordError::MalformedHeader {
            line: numbered.len().max(1),
            msg: "missing blank line after header".to_string(),
        })?;
    let header = parse_header(&numbered[..blank])?;
    let body = &numbered[blank + 1..];

    let version = header.require("format")?;
    if version != FORMAT_VERSION {
        return Err(RecordError::VersionMismatch {
            found: version.to_string(),
        });
    }
    let subset = parse_subset(&header)?;
    let s = subset.s();
    let seed = parse_seed(&header)?;

    match header.require("kind")? {
        "lrm" => {
            let l_count = parse_u64(&header, "L")?;
            let k = parse_u64(&header, "K")?;
            if k < 2 {
                return Err(RecordError::KTooSmall);
            }
            let ensemble = match header.require("ensemble")? {
                "clifford" => {
                    let hash = header.require("clifford-table-sha256")?;
                    if hash != clifford_table_sha256() {
                        return Err(RecordError::CliffordTableMismatch);
                    }
                    EnsembleKind::CliffordU2
                }
                "haar" => EnsembleKind::HaarU2,
                other => {
                    return Err(RecordError::MalformedHeader {
                        line: header.line_of("ensemble"),
                        msg: format!("unknown ensemble {other:?}"),
                    })
                }
            };
            if body.len() as u64 != l_count {
                return Err(RecordError::MalformedLine {
                    line: numbered.len(),
                    msg: format!("expected {l_count} body lines, found {}", body.len()),
                });
            }
            let mut outcomes = Vec::with_capacity((l_count * k) as usize);
            let mut clifford_settings = Vec::new();
            let mut haar_settings = Vec::new();
            for (offset, &(line, text)) in body.iter().enumerate() {
                let mut fields = text.split_whitespace();
                let index: u64 = fields
                    .next()
                    .ok_or_else(|| RecordError::MalformedLine {
                        line,
                        msg: "empty line".to_string(),
                    })?
                    .parse()
                    .map_err(|_| RecordError::MalformedLine {
                        line,
                        msg: "bad setting index".to_string(),
                    })?;
                if index != offset as u64 + 1 {
                    return Err(RecordError::MalformedLine {
                        line,
                        msg: format!("setting index {index} out of order"),
                    });
                }
                let desc = fields.next().ok_or_else(|| RecordError::MalformedLine {
                    line,
                    msg: "missing setting descriptor".to_string(),
                })?;
                match (ensemble, desc.split_once(':')) {
                    (EnsembleKind::CliffordU2, Some(("c", idxs))) => {
                        let parsed: Vec<u8> = idxs
                            .split(',')
                            .map(|p| p.parse::<u8>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|_| RecordError::MalformedLine {
                                line,
                                msg: format!("bad Clifford indices {idxs:?}"),
                            })?;
                        clifford_settings.push(parsed);
                    }
                    (EnsembleKind::HaarU2, Some(("h", factors))) => {
                        let parsed: Vec<SingleQubitUnitary> = factors
                            .split(';')
                            .map(|f| parse_haar_factor(f, line))
                            .collect::<Result<_>>()?;
                        haar_settings.push(parsed);
                    }
                    _ => {
                        return Err(RecordError::MalformedLine {
                            line,
                            msg: format!("setting descriptor {desc:?} does not match ensemble"),
                        })
                    }
                }
                let shots: Vec<&str> = fields.collect();
                if shots.len() as u64 != k {
                    return Err(RecordError::MalformedLine {
                        line,
                        msg: format!("expected {k} outcomes, found {}", shots.len()),
                    });
                }
                for shot in shots {
                    outcomes.push(parse_bitstring(shot, s, line)?);
                }
            }
            let settings = match ensemble {
                EnsembleKind::CliffordU2 => LrmSettings::Clifford(clifford_settings),
                EnsembleKind::HaarU2 => LrmSettings::Haar(haar_settings),
            };
            Ok(Record::Lrm(LrmRecord::new(
                subset, settings, k, outcomes, seed,
            )?))
        }
        "sic" => {
            let m = parse_u64(&header, "M")?;
            if body.len() as u64 != m {
                return Err(RecordError::MalformedLine {
                    line: numbered.len(),
                    msg: format!("expected {m} body lines, found {}", body.len()),
                });
            }
            let mut outcomes = Vec::with_capacity(m as usize);
            for &(line, text) in body {
                outcomes.push(parse_symbols(text.trim(), s, line)?);
            }
            Ok(Record::Sic(SicRecord::new(subset, m, outcomes, seed)?))
        }
        other => Err(RecordError::MalformedHeader {
            line: header.line_of("kind"),
            msg: format!("unknown record kind {other:?}"),
        }),
    }
}

pub fn read_record(path: &Path) -> Result<Record> {
    let text = fs::read_to_string(path)?;
    parse_record(&text)
}
