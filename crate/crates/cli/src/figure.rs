//! Curve data for Figs. 1–9.

use bhkernel::kernels::{build_bank, Case, FunctionBank};
use bhkernel::numeric::PrecisionContext;
use bhkernel::study::{reference_context, study_row};
use rug::Float;

use crate::config::{quantity, Function, Grid, Method};
use crate::failure::Failure;
use crate::methods::Evaluator;
use crate::table::{Cell, Table};

/// Section abscissae of Fig. 3.
pub const FIG3_Y: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 2.5];

/// Precisions emulated in Figs. 8 and 9.
pub const FIG89_P: [u32; 2] = [10, 15];

pub fn default_grid(id: u8) -> Grid {
    match id {
        5 => Grid {
            xmin: 0.0,
            xmax: 50.0,
            step: 0.05,
        },
        8 | 9 => Grid {
            xmin: 0.0,
            xmax: 20.0,
            step: 0.02,
        },
        _ => Grid {
            xmin: 0.0,
            xmax: 10.0,
            step: 0.01,
        },
    }
}

/// Second kernel argument of Figs. 8 and 9.
pub fn study_y0(id: u8) -> f64 {
    if id == 8 {
        1.0 / 6.0
    } else {
        6.0
    }
}

fn label(m: Method, case: Case, f: Function) -> String {
    format!("{}_{}", m.name(), quantity(case, f))
}

pub fn figure(id: u8, grid: &Grid, digits: u32) -> Result<Table, Failure> {
    grid.validate()?;
    let xs = grid.points();
    let (q, s) = (build_bank(Case::Quartic), build_bank(Case::Sextic));
    let (eq, es) = (Evaluator::new(&q, digits), Evaluator::new(&s, digits));
    let both = |f: Function| {
        let cols = vec![
            label(Method::Exact, Case::Quartic, f),
            label(Method::Exact, Case::Sextic, f),
        ];
        Table::compute(cols, xs.clone(), |x| {
            Ok(vec![eq.exact(f, x, None)?, es.exact(f, x, None)?])
        })
    };
    match id {
        1 => both(Function::Phi),
        2 => both(Function::Psi),
        3 => {
            let cols = FIG3_Y
                .iter()
                .map(|y| format!("{}_y{y}", label(Method::Exact, Case::Quartic, Function::Kernel)))
                .collect();
            Table::compute(cols, xs, |x| {
                FIG3_Y
                    .iter()
                    .map(|&y| eq.exact(Function::Kernel, x, Some(y)))
                    .collect()
            })
        }
        4 => both(Function::Density),
        5 => {
            let d = Function::Density;
            let cols = vec![
                label(Method::Exact, Case::Quartic, d),
                label(Method::Exact, Case::Sextic, d),
                label(Method::AsymptoticLarge, Case::Quartic, d),
                label(Method::AsymptoticLarge, Case::Sextic, d),
            ];
            Table::compute(cols, xs, |x| {
                Ok(vec![
                    eq.exact(d, x, None)?,
                    es.exact(d, x, None)?,
                    eq.eval(Method::AsymptoticLarge, d, x, None)?,
                    es.eval(Method::AsymptoticLarge, d, x, None)?,
                ])
            })
        }
        6 | 7 => {
            let e = if id == 6 { &eq } else { &es };
            let case = if id == 6 { Case::Quartic } else { Case::Sextic };
            let cols = vec![format!("exact_neg_{}", quantity(case, Function::Correlation))];
            Table::compute(cols, xs, |x| {
                let c = e.exact(Function::Correlation, x, None)?;
                Ok(vec![Cell::new(-c.value, c.err)])
            })
        }
        8 | 9 => precision_table(&q, study_y0(id), &FIG89_P, xs, digits),
        _ => Err(Failure::Usage(format!("no figure {id}; expected 1..9"))),
    }
}

/// Adaptive reference of `K̂(x, y0)` beside capped evaluations at each `p`.
/// The error column of a capped evaluation is its distance to the reference.
pub fn precision_table(
    bank: &FunctionBank,
    y0: f64,
    p_values: &[u32],
    xs: Vec<f64>,
    digits: u32,
) -> Result<Table, Failure> {
    if p_values.is_empty() || p_values.contains(&0) {
        return Err(Failure::Usage(
            "precisions must be a non-empty list of positive integers".into(),
        ));
    }
    let base = reference_context(p_values);
    let ctx = PrecisionContext::digits(base.target_digits().max(digits));
    let k = quantity(bank.case(), Function::Kernel);
    let mut cols = vec![format!("reference_{k}")];
    cols.extend(p_values.iter().map(|p| format!("p{p}_{k}")));
    Table::compute(cols, xs, |x| {
        let row = study_row(bank, y0, p_values, x, &ctx)?;
        let mut cells = vec![Cell::from_f64(row.reference, row.reference_error)];
        for (i, (c, p)) in row.capped.iter().zip(p_values).enumerate() {
            let v = c.ok_or_else(|| {
                Failure::Tolerance(format!("evaluation capped at {p} digits failed at x = {x}"))
            })?;
            cells.push(Cell::new(Float::with_val(53, v), row.deviation(i)));
        }
        Ok(cells)
    })
}
