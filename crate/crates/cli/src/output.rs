//! Record types and their CSV/JSON serialisation.
//!
//! Every arbitrary-precision scalar is written with the shortest decimal
//! string that reads back to the same value at the record's `bits`, so
//! downstream tools can round-trip outputs exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use gww_core::precision::{to_decimal_string, APComplex, APReal};
use gww_core::Result;
use serde::Serialize;

use crate::args::Format;

/// Column order of every tabular output.
pub const CSV_HEADER: &str = "n,tau,nu_re,nu_im,exact_re,exact_im,pred_re,pred_im,residual,bits,seconds";

pub fn dec(x: &APReal) -> String {
    to_decimal_string(x)
}

/// One comparison row in the common tabular layout. Absent values are
/// written as empty CSV fields and JSON `null`.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub n: usize,
    pub tau: String,
    pub nu_re: String,
    pub nu_im: String,
    pub exact_re: Option<String>,
    pub exact_im: Option<String>,
    pub pred_re: Option<String>,
    pub pred_im: Option<String>,
    pub residual: Option<String>,
    pub bits: u32,
    pub seconds: f64,
}

impl Row {
    pub fn new(n: usize, tau: &APReal, nu: &APComplex, bits: u32) -> Self {
        Row {
            n,
            tau: dec(tau),
            nu_re: dec(nu.real()),
            nu_im: dec(nu.imag()),
            exact_re: None,
            exact_im: None,
            pred_re: None,
            pred_im: None,
            residual: None,
            bits,
            seconds: 0.0,
        }
    }

    pub fn exact(mut self, z: &APComplex) -> Self {
        self.exact_re = Some(dec(z.real()));
        self.exact_im = Some(dec(z.imag()));
        self
    }

    pub fn predicted(mut self, z: &APComplex) -> Self {
        self.pred_re = Some(dec(z.real()));
        self.pred_im = Some(dec(z.imag()));
        self
    }

    pub fn residual(mut self, r: &APReal) -> Self {
        self.residual = Some(dec(r));
        self
    }

    pub fn csv_line(&self) -> String {
        let o = |v: &Option<String>| v.clone().unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.tau,
            self.nu_re,
            self.nu_im,
            o(&self.exact_re),
            o(&self.exact_im),
            o(&self.pred_re),
            o(&self.pred_im),
            o(&self.residual),
            self.bits,
            self.seconds
        )
    }
}

/// Record of `gww logdet` in JSON form.
#[derive(Clone, Debug, Serialize)]
pub struct LogDetRecord {
    pub n: usize,
    pub tau: String,
    pub nu_re: String,
    pub nu_im: String,
    pub logdet_re: String,
    pub logdet_im: String,
    pub bits: u32,
    pub achieved_digits: u32,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantRecord {
    pub name: String,
    pub value: String,
    pub bits: u32,
}

/// Opens `--out` or stdout.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_rows(rows: &[Row], format: Format, out: Option<&Path>) -> Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(w, "{}", r.csv_line())?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_constants(records: &[ConstantRecord], format: Format, out: Option<&Path>) -> Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            writeln!(w, "name,value,bits")?;
            for r in records {
                writeln!(w, "{},{},{}", r.name, r.value, r.bits)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, records)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}
