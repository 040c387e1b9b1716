//! Snapshot CSV: a `x,re,im` column line, then per snapshot a
//! `# t=<time>, L=<L>, n=<n>` header followed by `n` rows.
//! Window grids append `, grid=window` to the header.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::format_f64;
use crate::soliton::grid::{Boundary, Field, Grid1D};
use crate::soliton::pde::Snapshot;

pub const COLUMNS: &str = "x,re,im";

pub fn snapshots_to_csv(snapshots: &[Snapshot]) -> String {
    let mut out = String::new();
    out.push_str(COLUMNS);
    out.push('\n');
    for s in snapshots {
        let g = &s.field.grid;
        let _ = write!(
            out,
            "# t={}, L={}, n={}",
            format_f64(s.time),
            format_f64(g.length),
            g.n_points
        );
        if g.boundary == Boundary::Window {
            out.push_str(", grid=window");
        }
        out.push('\n');
        for (j, z) in s.field.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                format_f64(g.x(j)),
                format_f64(z.re),
                format_f64(z.im)
            );
        }
    }
    out
}

struct Header {
    time: f64,
    length: f64,
    n: usize,
    window: bool,
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number {s:?}")))
}

fn parse_header(text: &str, line: usize) -> Result<Header> {
    let body = text.trim_start_matches('#');
    let (mut time, mut length, mut n, mut window) = (None, None, None, false);
    for item in body.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {line}: bad header item {item:?}")))?;
        match key.trim() {
            "t" => time = Some(parse_f64(value, line)?),
            "L" => length = Some(parse_f64(value, line)?),
            "n" => {
                n = Some(value.trim().parse().map_err(|_| {
                    Error::Parse(format!("line {line}: bad point count {value:?}"))
                })?)
            }
            "grid" if value.trim() == "window" => window = true,
            other => return Err(Error::Parse(format!("line {line}: unknown header key {other:?}"))),
        }
    }
    match (time, length, n) {
        (Some(time), Some(length), Some(n)) => Ok(Header {
            time,
            length,
            n,
            window,
        }),
        _ => Err(Error::Parse(format!("line {line}: header needs t, L and n"))),
    }
}

pub fn snapshots_from_csv(text: &str) -> Result<Vec<Snapshot>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == COLUMNS => {}
        _ => return Err(Error::Parse(format!("missing column line {COLUMNS:?}"))),
    }
    let mut snapshots = Vec::new();
    while let Some((no, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        if !line.starts_with('#') {
            return Err(Error::Parse(format!("line {no}: expected a snapshot header")));
        }
        let header = parse_header(line, no)?;
        let mut xs = Vec::with_capacity(header.n);
        let mut values = Vec::with_capacity(header.n);
        for _ in 0..header.n {
            let (no, row) = lines
                .next()
                .ok_or_else(|| Error::Parse("snapshot ends early".into()))?;
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!("line {no}: expected 3 columns")));
            }
            xs.push(parse_f64(cols[0], no)?);
            values.push(Complex64::new(parse_f64(cols[1], no)?, parse_f64(cols[2], no)?));
        }
        let grid = if header.window {
            Grid1D::window(header.n, xs[0], header.length)?
        } else {
            let g = Grid1D::periodic(header.n, header.length)?;
            if xs[0] != g.x_min {
                Grid1D { x_min: xs[0], ..g }
            } else {
                g
            }
        };
        snapshots.push(Snapshot {
            time: header.time,
            field: Field::new(grid, values)?,
        });
    }
    Ok(snapshots)
}
