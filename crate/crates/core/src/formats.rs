//! File formats: set files, series exports and report mirrors.
//!
//! Every numeric value that can exceed 53 bits is written as a decimal
//! string in JSON so that consumers never round it.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::analysis::{MonotonicityReport, Thm14Report};
use crate::error::{Error, Result};
use crate::series::{Mode, RepSeries};
use crate::setkit::{rudin_shapiro_set, thm14_set, thue_morse_set, Provenance, SetSpec, Thm14Config, COMPLETE};

/// Serde adapters writing big integers as decimal strings.
pub mod decimal {
    use super::*;
    use serde::{Deserializer, Serializer};

    fn parse<T: FromStr, E: serde::de::Error>(s: &str) -> std::result::Result<T, E> {
        s.parse()
            .map_err(|_| E::custom(format!("`{s}` is not a decimal integer")))
    }

    pub mod biguint {
        use super::*;

        pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
            let s = String::deserialize(d)?;
            parse(&s)
        }
    }

    pub mod opt_bigint {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &Option<BigInt>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<BigInt>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse(&s))
                .transpose()
        }
    }

    pub mod vec_biguint {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(ToString::to_string))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<BigUint>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse(s))
                .collect()
        }
    }
}

/// JSON set description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetFile {
    Explicit {
        horizon: u64,
        elements: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<Provenance>,
    },
    /// `{0..horizon}` minus the listed elements.
    Complement { horizon: u64, elements: Vec<u64> },
    Thm14 {
        horizon: u64,
        k: u32,
        schedule: Vec<u64>,
        #[serde(default)]
        strict_paper_mode: bool,
    },
    ThueMorse { horizon: u64 },
    RudinShapiro { horizon: u64 },
}

impl SetFile {
    pub fn build(&self) -> Result<SetSpec> {
        match self {
            SetFile::Explicit {
                horizon,
                elements,
                source,
            } => {
                let set = SetSpec::from_distinct(elements, *horizon)?;
                Ok(match source {
                    Some(p) => SetSpec::from_sorted_unchecked(set.elements().to_vec(), *horizon, p.clone()),
                    None => set,
                })
            }
            SetFile::Complement { horizon, elements } => {
                Ok(SetSpec::from_distinct(elements, *horizon)?.complement_prefix())
            }
            SetFile::Thm14 {
                horizon,
                k,
                schedule,
                strict_paper_mode,
            } => {
                let cfg = Thm14Config::new(*k, schedule.clone(), *strict_paper_mode)?;
                Ok(thm14_set(&cfg, *horizon))
            }
            SetFile::ThueMorse { horizon } => Ok(thue_morse_set(*horizon)),
            SetFile::RudinShapiro { horizon } => Ok(rudin_shapiro_set(*horizon)),
        }
    }

    /// Materialized description of `set`, keeping its provenance.
    pub fn explicit(set: &SetSpec) -> Self {
        let source = match set.provenance() {
            Provenance::Explicit => None,
            p => Some(p.clone()),
        };
        SetFile::Explicit {
            horizon: set.horizon(),
            elements: set.elements().to_vec(),
            source,
        }
    }
}

/// Reads either a JSON set description or newline-delimited integers.
///
/// The plain format may declare its horizon with a `# horizon = H` line;
/// without one the list is the whole set. Other `#` lines are comments.
pub fn read_set(text: &str) -> Result<SetSpec> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let file: SetFile = serde_json::from_str(trimmed)?;
        return file.build();
    }
    let mut horizon = None;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(h) = comment.trim().strip_prefix("horizon") {
                let h = h.trim_start_matches([' ', '=', ':']).trim();
                horizon = Some(h.parse::<u64>().map_err(|_| {
                    Error::Parse(format!("line {}: bad horizon `{h}`", lineno + 1))
                })?);
            }
            continue;
        }
        let v = line.parse::<u64>().map_err(|_| {
            Error::Parse(format!(
                "line {}: `{line}` is not a nonnegative integer",
                lineno + 1
            ))
        })?;
        values.push(v);
    }
    SetSpec::from_distinct(&values, horizon.unwrap_or(COMPLETE))
}

pub fn write_set_json(set: &SetSpec) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SetFile::explicit(set))? + "\n")
}

pub fn write_set_lines(set: &SetSpec) -> String {
    let mut out = if set.is_complete() {
        String::new()
    } else {
        format!("# horizon = {}\n", set.horizon())
    };
    for a in set.elements() {
        out.push_str(&a.to_string());
        out.push('\n');
    }
    out
}

/// JSON series export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub k: u32,
    pub mode: Mode,
    pub horizon: u64,
    #[serde(with = "decimal::vec_biguint")]
    pub values: Vec<BigUint>,
}

impl SeriesFile {
    pub fn from_series(s: &RepSeries) -> Self {
        Self {
            k: s.k(),
            mode: s.mode(),
            horizon: s.horizon(),
            values: s.values(),
        }
    }

    pub fn into_series(self) -> Result<RepSeries> {
        if self.values.len() as u64 != self.horizon + 1 {
            return Err(Error::Parse(format!(
                "horizon {} needs {} values, found {}",
                self.horizon,
                self.horizon + 1,
                self.values.len()
            )));
        }
        RepSeries::new(self.k, self.mode, self.values)
    }
}

pub fn write_series_json(s: &RepSeries) -> Result<String> {
    Ok(serde_json::to_string(&SeriesFile::from_series(s))? + "\n")
}

pub fn read_series_json(text: &str) -> Result<RepSeries> {
    serde_json::from_str::<SeriesFile>(text)?.into_series()
}

/// `n,value` rows for any sequence of displayable integers, starting at `n = first`.
pub fn write_values_csv<T: ToString>(values: &[T], first: u64) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "value"]).map_err(csv_err)?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([(first + i as u64).to_string(), v.to_string()])
            .map_err(csv_err)?;
    }
    into_string(w)
}

pub fn write_series_csv(s: &RepSeries) -> Result<String> {
    write_values_csv(&s.values(), 0)
}

/// Reads `n,value` rows; `n` must be consecutive. Returns the first `n` and the values.
pub fn read_values_csv<T: FromStr>(text: &str) -> Result<(u64, Vec<T>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(csv_err)?.clone();
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "value" {
        return Err(Error::Parse("expected header `n,value`".into()));
    }
    let mut first = None;
    let mut values = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let n: u64 = rec[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad index `{}`", row + 1, &rec[0])))?;
        let start = *first.get_or_insert(n);
        if n != start + row as u64 {
            return Err(Error::Parse(format!(
                "row {}: expected n = {}, found {n}",
                row + 1,
                start + row as u64
            )));
        }
        let v = rec[1]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad value `{}`", row + 1, &rec[1])))?;
        values.push(v);
    }
    Ok((first.unwrap_or(0), values))
}

pub fn read_series_csv(text: &str, k: u32, mode: Mode) -> Result<RepSeries> {
    let (first, values) = read_values_csv::<BigUint>(text)?;
    if first != 0 {
        return Err(Error::Parse(format!("series must start at n = 0, found {first}")));
    }
    RepSeries::new(k, mode, values)
}

/// CSV mirror of a monotonicity report: one `n,kind` row per violation in
/// ascending `n`, then a closing `H,horizon` row.
pub fn write_monotonicity_csv(r: &MonotonicityReport) -> Result<String> {
    let mut rows: Vec<(u64, &str)> = r
        .strict_decreases
        .iter()
        .map(|&n| (n, "decrease"))
        .chain(r.plateaus.iter().map(|&n| (n, "plateau")))
        .collect();
    rows.sort_unstable();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "kind"]).map_err(csv_err)?;
    for (n, kind) in rows {
        w.write_record([n.to_string(), kind.to_owned()]).map_err(csv_err)?;
    }
    w.write_record([r.horizon.to_string(), "horizon".to_owned()])
        .map_err(csv_err)?;
    into_string(w)
}

pub fn read_monotonicity_csv(text: &str) -> Result<MonotonicityReport> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut decreases = Vec::new();
    let mut plateaus = Vec::new();
    let mut horizon = None;
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let n: u64 = rec[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad index `{}`", &rec[0])))?;
        match &rec[1] {
            "decrease" => decreases.push(n),
            "plateau" => plateaus.push(n),
            "horizon" => horizon = Some(n),
            other => return Err(Error::Parse(format!("unknown row kind `{other}`"))),
        }
    }
    let horizon = horizon.ok_or_else(|| Error::Parse("missing horizon row".into()))?;
    // Rebuild through the scanner's own rules on a synthetic sequence.
    let mut values: Vec<i64> = Vec::with_capacity(horizon as usize + 1);
    let (mut d, mut p) = (decreases.iter().peekable(), plateaus.iter().peekable());
    values.push(0);
    for n in 1..=horizon {
        let prev = *values.last().unwrap();
        let next = if d.peek() == Some(&&n) {
            d.next();
            prev - 1
        } else if p.peek() == Some(&&n) {
            p.next();
            prev
        } else {
            prev + 1
        };
        values.push(next);
    }
    if d.next().is_some() || p.next().is_some() {
        return Err(Error::Parse("violation index beyond horizon or out of order".into()));
    }
    Ok(MonotonicityReport::scan(&values))
}

pub fn write_thm14_csv(r: &Thm14Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "j",
        "block",
        "u",
        "n",
        "diff",
        "sign",
        "rep_k_at_n_minus_1_zero",
        "method",
        "series_check",
        "tuple_check",
        "status",
    ])
    .map_err(csv_err)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for p in &r.points {
        w.write_record([
            p.j.to_string(),
            p.block.to_string(),
            p.u.to_string(),
            opt(p.n.map(|n| n.to_string())),
            opt(p.diff.as_ref().map(ToString::to_string)),
            opt(p.sign.clone()),
            opt(p.rep_k_at_n_minus_1_zero.map(|b| b.to_string())),
            p.method.as_str().to_owned(),
            opt(p.series_check.map(|b| b.to_string())),
            opt(p.tuple_check.map(|b| b.to_string())),
            serde_json::to_value(p.status)?
                .as_str()
                .unwrap_or_default()
                .to_owned(),
        ])
        .map_err(csv_err)?;
    }
    into_string(w)
}

/// Reads back the `(n, diff)` columns of a report CSV mirror.
pub fn read_thm14_csv_diffs(text: &str) -> Result<Vec<(Option<u64>, Option<BigInt>)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let n = (!rec[3].is_empty())
            .then(|| rec[3].parse::<u64>())
            .transpose()
            .map_err(|_| Error::Parse(format!("bad n `{}`", &rec[3])))?;
        let diff = (!rec[4].is_empty())
            .then(|| rec[4].parse::<BigInt>())
            .transpose()
            .map_err(|_| Error::Parse(format!("bad diff `{}`", &rec[4])))?;
        out.push((n, diff));
    }
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
