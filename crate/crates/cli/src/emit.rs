//! CSV and JSON emission. Every float is written as `{:.16e}`, i.e. 17
//! significant digits, in both formats.

use std::io::{self, Write};

use onofri_core::extremal::MultiStartReport;
use onofri_core::inequalities::{DeficitRecord, LimitTable};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::run::Check;

pub const LIMIT_COLUMNS: &str = "gamma_or_d,lhs,rhs,lhs_target,rhs_target,lhs_err,rhs_err,order_running";
pub const DEFICIT_COLUMNS: &str = "kind,n,parameter,lhs,rhs,deficit,field";
pub const EXTREMAL_COLUMNS: &str = "seed,iterations,final_value,sharp_constant,gap,termination";
pub const CHECK_COLUMNS: &str = "check,category,value,tolerance,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// Pretty JSON whose numbers carry 17 significant digits.
pub struct FixedDigits(PrettyFormatter<'static>);

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    out
}

/// The emitted payload of one command.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Artifact {
    Limit(LimitTable<f64>),
    Deficits(Vec<DeficitRecord<f64>>),
    Extremal(MultiStartReport<f64>),
    Checks(Vec<Check>),
}

impl Artifact {
    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => self.csv().into_bytes(),
        }
    }

    pub fn csv(&self) -> String {
        let mut lines = Vec::new();
        match self {
            Artifact::Limit(table) => {
                lines.push(LIMIT_COLUMNS.to_owned());
                for r in &table.rows {
                    let cells = [r.parameter, r.lhs, r.rhs, r.lhs_target, r.rhs_target, r.lhs_err, r.rhs_err];
                    let mut line: Vec<String> = cells.iter().map(|&x| float(x)).collect();
                    line.push(optional(r.order_running));
                    lines.push(line.join(","));
                }
            }
            Artifact::Deficits(records) => {
                lines.push(DEFICIT_COLUMNS.to_owned());
                for r in records {
                    let kind = serde_json::to_value(r.kind).expect("unit variant");
                    lines.push(format!(
                        "{},{},{},{},{},{},{}",
                        kind.as_str().unwrap_or_default(),
                        r.n,
                        optional(r.parameter),
                        float(r.lhs),
                        float(r.rhs),
                        float(r.deficit),
                        quote(&r.field)
                    ));
                }
            }
            Artifact::Extremal(report) => {
                lines.push(EXTREMAL_COLUMNS.to_owned());
                for r in &report.runs {
                    let termination = serde_json::to_value(r.termination).expect("unit variant");
                    lines.push(format!(
                        "{},{},{},{},{},{}",
                        r.seed.map(|s| s.to_string()).unwrap_or_default(),
                        r.iterations,
                        float(r.final_value),
                        float(r.sharp_constant),
                        float(r.gap),
                        termination.as_str().unwrap_or_default()
                    ));
                }
            }
            Artifact::Checks(checks) => {
                lines.push(CHECK_COLUMNS.to_owned());
                for c in checks {
                    let category = serde_json::to_value(c.category).expect("unit variant");
                    lines.push(format!(
                        "{},{},{},{},{}",
                        c.name,
                        category.as_str().unwrap_or_default(),
                        float(c.value),
                        float(c.tolerance),
                        c.pass
                    ));
                }
            }
        }
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}

/// Quotes a CSV cell when it contains a separator or quote.
fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}
