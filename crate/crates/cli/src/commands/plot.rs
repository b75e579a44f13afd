use std::path::PathBuf;

use crate::config::{require, resolve, Config};
use crate::error::{CliError, CliResult};
use crate::logging;
use crate::output;
use crate::svg;

#[derive(clap::Args)]
pub struct Args {
    /// Input CSV file (header row, `#` footer lines ignored)
    #[arg(long)]
    input: Option<PathBuf>,

    /// Column for the horizontal axis
    #[arg(long)]
    x: Option<String>,

    /// Comma-separated column names for the vertical axis
    #[arg(long)]
    y: Option<String>,

    /// Output SVG path (written atomically)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn column_index(header: &[&str], name: &str) -> CliResult<usize> {
    header.iter().position(|h| *h == name).ok_or_else(|| {
        CliError::usage(format!(
            "column {name:?} not found; available: {}",
            header.join(", ")
        ))
    })
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let input = require(resolve(args.input, cfg.string("input").map(PathBuf::from)), "input")?;
    let x_name = require(resolve(args.x, cfg.string("x")), "x")?;
    let y_spec = require(resolve(args.y, cfg.string("y")), "y")?;
    let out = require(resolve(args.out, cfg.string("out").map(PathBuf::from)), "out")?;

    let text = std::fs::read_to_string(&input)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", input.display())))?;
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::usage(format!("{} is empty", input.display())))?
        .split(',')
        .map(str::trim)
        .collect();
    let x_idx = column_index(&header, &x_name)?;
    let y_names: Vec<&str> = y_spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if y_names.is_empty() {
        return Err(CliError::usage("no y columns requested"));
    }
    let y_idx: Vec<usize> = y_names
        .iter()
        .map(|name| column_index(&header, name))
        .collect::<CliResult<_>>()?;

    let mut series_points: Vec<Vec<(f64, f64)>> = vec![Vec::new(); y_idx.len()];
    for (line_no, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let need = y_idx.iter().copied().max().expect("nonempty").max(x_idx);
        if fields.len() <= need {
            return Err(CliError::usage(format!(
                "data row {} has {} fields, need at least {}",
                line_no + 1,
                fields.len(),
                need + 1
            )));
        }
        let parse = |s: &str| -> CliResult<f64> {
            s.parse()
                .map_err(|_| CliError::usage(format!("non-numeric value {s:?} in row {}", line_no + 1)))
        };
        let x = parse(fields[x_idx])?;
        for (k, &idx) in y_idx.iter().enumerate() {
            series_points[k].push((x, parse(fields[idx])?));
        }
    }
    if series_points[0].is_empty() {
        return Err(CliError::usage(format!("{} has no data rows", input.display())));
    }

    let series: Vec<svg::Series> = y_names
        .iter()
        .zip(&series_points)
        .map(|(name, points)| svg::Series { name, points })
        .collect();
    let y_label = y_names.join(", ");
    let document = svg::line_plot(&x_name, &y_label, &series);
    output::write_atomic(&out, &document)?;
    logging::info(format!(
        "wrote {} ({} series, {} points each)",
        out.display(),
        series.len(),
        series_points[0].len()
    ));
    Ok(0)
}
