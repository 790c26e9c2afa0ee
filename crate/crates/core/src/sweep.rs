//! Parameter sweeps over `(alpha^2, P[dB], C, C')` and their CSV/JSON output.

use std::cmp::Ordering;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schemes::{self, Capacity, LinkBudget, Scheme};
use crate::spectrum::ChannelSpec;

pub const CSV_HEADER: [&str; 9] = [
    "alpha2",
    "p_db",
    "c",
    "cprime",
    "scheme",
    "rate",
    "printed_bound",
    "bound_tight",
    "fixed_point",
];

/// Significant digits used for every real number in CSV output.
pub const CSV_DIGITS: usize = 12;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeSelection {
    /// Every scheme that is defined at each grid point.
    All,
    /// Exactly these schemes; each must be defined at every grid point.
    Only(Vec<Scheme>),
}

impl SchemeSelection {
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(SchemeSelection::All);
        }
        let mut list = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Scheme>>>()?;
        list.sort();
        list.dedup();
        Ok(SchemeSelection::Only(list))
    }
}

/// `(alpha2, p_db, budget, schemes)`.
type GridPoint = (f64, f64, LinkBudget, Vec<Scheme>);

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub alpha2_values: Vec<f64>,
    pub p_db_values: Vec<f64>,
    pub c_values: Vec<Capacity>,
    pub cprime_values: Vec<Capacity>,
    pub schemes: SchemeSelection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha2: f64,
    pub p_db: f64,
    pub c: Capacity,
    pub cprime: Capacity,
    pub scheme: Scheme,
    pub rate: f64,
    pub printed_bound: Option<f64>,
    pub bound_tight: Option<bool>,
    pub fixed_point: Option<f64>,
}

impl SweepRow {
    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.alpha2
            .total_cmp(&other.alpha2)
            .then(self.p_db.total_cmp(&other.p_db))
            .then(self.c.bits().total_cmp(&other.c.bits()))
            .then(self.cprime.bits().total_cmp(&other.cprime.bits()))
            .then(self.scheme.cmp(&other.scheme))
    }
}

/// Parses `a,b,c` or an inclusive `start:step:stop` range.
pub fn parse_real_axis(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty axis".into()));
    }
    let num = |t: &str| -> Result<f64> {
        let x: f64 = t
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("'{t}' is not a number")))?;
        if !x.is_finite() {
            return Err(Error::Parse(format!("'{t}' is not finite")));
        }
        Ok(x)
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return Err(Error::Parse(format!(
                    "range '{s}' needs step > 0 and stop >= start"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(Error::Parse(format!("range '{s}' has too many points")));
            }
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(Error::Parse(format!(
            "axis '{s}' must be a comma list or start:step:stop"
        ))),
    }
}

/// Like [`parse_real_axis`] but accepts `inf` entries.
pub fn parse_capacity_axis(s: &str) -> Result<Vec<Capacity>> {
    if s.contains(':') {
        return parse_real_axis(s)?.into_iter().map(Capacity::new).collect();
    }
    s.split(',').map(str::parse).collect()
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sorted_unique_caps(mut v: Vec<Capacity>) -> Vec<Capacity> {
    v.sort_by(|a, b| a.bits().total_cmp(&b.bits()));
    v.dedup();
    v
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str| Error::Grid(format!("{name} list is empty"));
        if self.alpha2_values.is_empty() {
            return Err(empty("alpha2"));
        }
        if self.p_db_values.is_empty() {
            return Err(empty("SNR"));
        }
        if self.c_values.is_empty() {
            return Err(empty("C"));
        }
        if self.cprime_values.is_empty() {
            return Err(empty("C'"));
        }
        if let SchemeSelection::Only(list) = &self.schemes {
            if list.is_empty() {
                return Err(empty("scheme"));
            }
        }
        for &a2 in &self.alpha2_values {
            if !(0.0..=1.0).contains(&a2) {
                return Err(Error::Grid(format!("alpha2 = {a2} is outside [0, 1]")));
            }
        }
        for &db in &self.p_db_values {
            if !db.is_finite() || !db_to_linear(db).is_finite() {
                return Err(Error::Grid(format!("SNR {db} dB is not representable")));
            }
        }
        Ok(())
    }

    /// Grid points in row order, each with the schemes to evaluate there.
    fn points(&self) -> Result<Vec<GridPoint>> {
        self.validate()?;
        let mut out = Vec::new();
        for &alpha2 in &sorted_unique(self.alpha2_values.clone()) {
            for &p_db in &sorted_unique(self.p_db_values.clone()) {
                for &c in &sorted_unique_caps(self.c_values.clone()) {
                    for &cprime in &sorted_unique_caps(self.cprime_values.clone()) {
                        let budget = LinkBudget::new(db_to_linear(p_db), c, cprime)?;
                        let schemes = self.schemes_at(alpha2, &budget)?;
                        out.push((alpha2, p_db, budget, schemes));
                    }
                }
            }
        }
        Ok(out)
    }

    fn schemes_at(&self, alpha2: f64, b: &LinkBudget) -> Result<Vec<Scheme>> {
        let singular = alpha2 >= 1.0;
        match &self.schemes {
            SchemeSelection::All => Ok(Scheme::ALL
                .into_iter()
                .filter(|s| s.applies_to(b) && !(singular && s.needs_alpha_below_one()))
                .collect()),
            SchemeSelection::Only(list) => {
                for &s in list {
                    if !s.applies_to(b) {
                        let requirement = match s {
                            Scheme::IndependentMessages | Scheme::QuantizedWaterfilling => {
                                "cprime = inf"
                            }
                            _ => "c = inf",
                        };
                        return Err(Error::Grid(format!(
                            "scheme {s} requires {requirement} (got c = {}, cprime = {})",
                            b.c, b.cprime
                        )));
                    }
                    if singular && s.needs_alpha_below_one() {
                        return Err(Error::Grid(format!(
                            "scheme {s} needs alpha2 < 1: its closed form has the 1/(1 - alpha^2) singularity"
                        )));
                    }
                }
                let mut list = list.clone();
                list.sort();
                list.dedup();
                Ok(list)
            }
        }
    }

    /// Evaluates every point and scheme. Points run in parallel; row order is
    /// fixed by the sorted axes and the scheme order.
    pub fn evaluate(&self) -> Result<Vec<SweepRow>> {
        let points = self.points()?;
        let rows: Vec<Vec<SweepRow>> = points
            .par_iter()
            .map(|(alpha2, p_db, budget, list)| {
                let spec = ChannelSpec::from_alpha2(*alpha2)?;
                list.iter()
                    .map(|&scheme| {
                        let r = schemes::evaluate(scheme, spec, budget)?;
                        Ok(SweepRow {
                            alpha2: *alpha2,
                            p_db: *p_db,
                            c: budget.c,
                            cprime: budget.cprime,
                            scheme,
                            rate: r.rate,
                            printed_bound: r.printed_bound,
                            bound_tight: r.bound_tight,
                            fixed_point: r.fixed_point,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().flatten().collect())
    }
}

/// Formats `x` with `digits` significant digits, like C's `%.*g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_real(x: f64) -> String {
    format_significant(x, CSV_DIGITS)
}

fn fmt_capacity(c: Capacity) -> String {
    if c.is_unbounded() {
        "inf".into()
    } else {
        fmt_real(c.bits())
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            fmt_real(r.alpha2),
            fmt_real(r.p_db),
            fmt_capacity(r.c),
            fmt_capacity(r.cprime),
            r.scheme.name().to_string(),
            fmt_real(r.rate),
            r.printed_bound.map(fmt_real).unwrap_or_default(),
            r.bound_tight.map(|b| b.to_string()).unwrap_or_default(),
            r.fixed_point.map(fmt_real).unwrap_or_default(),
        ])?;
    }
    w.flush()
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")
}

pub fn read_json(text: &str) -> Result<Vec<SweepRow>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

pub fn write_rows<W: Write>(rows: &[SweepRow], format: OutputFormat, out: W) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

pub const FIGURE2_ALPHA2: f64 = 0.6;
pub const FIGURE2_LINK: f64 = 4.0;

/// The three sub-grids behind the rates-versus-SNR figure at `alpha^2 = 0.6`,
/// SNR 0 to 40 dB in 1 dB steps:
/// * IM and QW with `C = 4`, `C' = inf`;
/// * EC and DC with `C = inf`, `C' = 4`;
/// * UB and the four combined schemes with `C = C' = 4`.
pub fn figure2_grids() -> Vec<SweepGrid> {
    let p_db: Vec<f64> = (0..=40).map(f64::from).collect();
    let four = Capacity::new(FIGURE2_LINK).expect("positive");
    let inf = Capacity::UNBOUNDED;
    let grid = |c, cprime, schemes: Vec<Scheme>| SweepGrid {
        alpha2_values: vec![FIGURE2_ALPHA2],
        p_db_values: p_db.clone(),
        c_values: vec![c],
        cprime_values: vec![cprime],
        schemes: SchemeSelection::Only(schemes),
    };
    vec![
        grid(
            four,
            inf,
            vec![Scheme::IndependentMessages, Scheme::QuantizedWaterfilling],
        ),
        grid(
            inf,
            four,
            vec![
                Scheme::ElementaryCompression,
                Scheme::DistributedCompression,
            ],
        ),
        grid(
            four,
            four,
            vec![
                Scheme::UpperBound,
                Scheme::ImEc,
                Scheme::ImDc,
                Scheme::QwEc,
                Scheme::QwDc,
            ],
        ),
    ]
}

/// All figure rows in canonical order.
pub fn figure2_rows() -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for g in figure2_grids() {
        rows.extend(g.evaluate()?);
    }
    rows.sort_by(SweepRow::sort_key_cmp);
    Ok(rows)
}

const FIGURE2_README: &str = "\
# Rates versus SNR, alpha^2 = 0.6

`figure2.csv` holds one row per (SNR, scheme) with SNR from 0 to 40 dB in
1 dB steps. Columns: alpha2,p_db,c,cprime,scheme,rate,printed_bound,bound_tight,fixed_point.

Curve families and their link capacities:

| schemes                   | c   | cprime |
|---------------------------|-----|--------|
| IM, QW                    | 4   | inf    |
| EC, DC                    | inf | 4      |
| UB, IM-EC, IM-DC, QW-EC, QW-DC | 4 | 4   |

The upper bound min{C, C', R_WF(P)} is the same for all three settings, so it
is emitted once.

Link assignment: IM and QW are transmit-side schemes whose rates depend
on C alone, and EC and DC are receive-side schemes whose rates depend on C'
alone. Each one-sided family is therefore emitted with its own link finite
(C = 4 for IM/QW, C' = 4 for EC/DC) and the other link ideal. Descriptions of
this figure that pair IM/QW with C -> inf and EC/DC with C' -> inf swap the
two assignments; under that reading IM and QW would not be limited by any
finite link and EC and DC would coincide with the upper bound's waterfilling
term, so the swapped reading is not used here.
";

/// Writes `figure2.csv` and `README.md` into `dir`. Returns the row count.
pub fn write_figure2(dir: &Path) -> io::Result<usize> {
    let rows = figure2_rows().map_err(io::Error::other)?;
    fs::create_dir_all(dir)?;
    let csv_path: PathBuf = dir.join("figure2.csv");
    let file = io::BufWriter::new(fs::File::create(&csv_path)?);
    write_csv(&rows, file)?;
    fs::write(dir.join("README.md"), FIGURE2_README)?;
    Ok(rows.len())
}
