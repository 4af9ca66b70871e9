//! Row computation on a grid and CSV output.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use rug::Float;

use crate::failure::Failure;

/// One value with its absolute error estimate.
#[derive(Debug, Clone)]
pub struct Cell {
    pub value: Float,
    pub err: f64,
}

impl Cell {
    pub fn new(value: Float, err: f64) -> Self {
        Self { value, err }
    }

    pub fn from_f64(value: f64, err: f64) -> Self {
        Self::new(Float::with_val(53, value), err)
    }

    /// Decimal value at `digits` significant digits, capped at what the
    /// value's precision can carry.
    pub fn format_value(&self, digits: u32) -> String {
        let carried = (f64::from(self.value.prec()) * std::f64::consts::LOG10_2).floor() as u32;
        let n = digits.min(carried).max(1) as usize;
        if self.value.is_zero() {
            return "0".into();
        }
        self.value.to_string_radix(10, Some(n))
    }

    pub fn format_err(&self) -> String {
        format!("{:.3e}", self.err)
    }
}

pub struct Table {
    columns: Vec<String>,
    xs: Vec<f64>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Evaluates `row` at every abscissa, in parallel. A failed point aborts
    /// the table.
    pub fn compute<F>(columns: Vec<String>, xs: Vec<f64>, row: F) -> Result<Self, Failure>
    where
        F: Fn(f64) -> Result<Vec<Cell>, Failure> + Sync,
    {
        let rows = xs.par_iter().map(|&x| row(x)).collect::<Result<Vec<_>, _>>()?;
        for r in &rows {
            debug_assert_eq!(r.len(), columns.len());
            if let Some(c) = r.iter().find(|c| !c.value.is_finite() || c.err.is_nan()) {
                return Err(Failure::Tolerance(format!("non-finite value {}", c.value)));
            }
        }
        Ok(Self { columns, xs, rows })
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["x".to_string()];
        for c in &self.columns {
            h.push(c.clone());
            h.push(format!("{c}_err"));
        }
        h
    }

    pub fn write_csv<W: Write>(&self, out: W, digits: u32) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for (x, row) in self.xs.iter().zip(&self.rows) {
            let mut rec = vec![x.to_string()];
            for c in row {
                rec.push(c.format_value(digits));
                rec.push(c.format_err());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to standard output when no path is given.
    pub fn emit(&self, path: Option<&Path>, digits: u32) -> Result<(), Failure> {
        match path {
            Some(p) => {
                let f = File::create(p)
                    .map_err(|e| Failure::Io(format!("cannot create {}: {e}", p.display())))?;
                self.write_csv(io::BufWriter::new(f), digits)
            }
            None => self.write_csv(io::stdout().lock(), digits),
        }
    }
}
