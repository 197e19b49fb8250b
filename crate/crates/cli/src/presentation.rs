use std::fmt::Write as _;
use std::path::Path;

use skyscraper_core::field::{Elem, PrimeField};
use skyscraper_core::grmat::{parse_rat, Degree, GradedMatrix, Rat};
use skyscraper_core::Error;

use crate::{parse_error, CliError};

/// Non-empty lines with `#` comments stripped, tagged with 1-based line
/// numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn rat_at(line: usize, s: &str) -> Result<Rat, CliError> {
    parse_rat(s).ok_or_else(|| parse_error(line, format!("`{s}` is not a rational number")))
}

fn count_at(line: usize, text: &str, keyword: &str) -> Result<usize, CliError> {
    match text.split_whitespace().collect::<Vec<_>>()[..] {
        [k, n] if k == keyword => n.parse().map_err(|_| parse_error(line, format!("`{n}` is not a count"))),
        _ => Err(parse_error(line, format!("expected `{keyword} <count>`"))),
    }
}

fn degree_at(line: usize, fields: &[&str]) -> Result<Degree, CliError> {
    match fields {
        [x, y] => Ok(Degree::new(rat_at(line, x)?, rat_at(line, y)?)),
        _ => Err(parse_error(line, "expected `<x> <y>`")),
    }
}

/// Parses a `skypres v1` presentation. With `field` set, the coefficients
/// are read modulo that prime instead of the declared one.
pub fn parse_presentation(text: &str, field: Option<u32>) -> Result<GradedMatrix, CliError> {
    let mut lines = content_lines(text);
    let mut next =
        |what: &str| lines.next().ok_or_else(|| parse_error(text.lines().count() + 1, format!("missing {what}")));

    let (n, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["skypres", "v1"] {
        return Err(parse_error(n, "expected `skypres v1`"));
    }

    let (n, decl) = next("field line")?;
    let declared = count_at(n, decl, "field")?;
    let declared = u32::try_from(declared).map_err(|_| parse_error(n, "field order too large"))?;
    let q = field.unwrap_or(declared);
    let f = PrimeField::new(q).map_err(|e| parse_error(n, e.to_string()))?;

    let (n, decl) = next("generators line")?;
    let m = count_at(n, decl, "generators")?;
    let mut gens = Vec::with_capacity(m);
    for _ in 0..m {
        let (n, l) = next("generator")?;
        gens.push(degree_at(n, &l.split_whitespace().collect::<Vec<_>>())?);
    }

    let (n, decl) = next("relations line")?;
    let r = count_at(n, decl, "relations")?;
    let mut rels = Vec::with_capacity(r);
    let mut rel_lines = Vec::with_capacity(r);
    for _ in 0..r {
        let (n, l) = next("relation")?;
        let (deg, entries) = l.split_once(':').ok_or_else(|| parse_error(n, "expected `<x> <y> : <i> <c> ...`"))?;
        let deg = degree_at(n, &deg.split_whitespace().collect::<Vec<_>>())?;
        let tokens: Vec<&str> = entries.split_whitespace().collect();
        if tokens.len() % 2 != 0 {
            return Err(parse_error(n, "entries come in `<row> <coefficient>` pairs"));
        }
        let mut col: Vec<(usize, Elem)> = Vec::with_capacity(tokens.len() / 2);
        for pair in tokens.chunks(2) {
            let row: usize =
                pair[0].parse().map_err(|_| parse_error(n, format!("`{}` is not a row index", pair[0])))?;
            let c: u64 = pair[1].parse().map_err(|_| parse_error(n, format!("`{}` is not a coefficient", pair[1])))?;
            if c >= declared as u64 {
                return Err(parse_error(n, format!("coefficient {c} is not in [0, {declared})")));
            }
            col.push((row, (c % q as u64) as Elem));
        }
        rels.push((deg, col));
        rel_lines.push(n);
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_error(n, "unexpected trailing content"));
    }

    GradedMatrix::new(f, gens, rels).map_err(|e| match e {
        Error::RowOutOfRange { column, .. } | Error::Inhomogeneous { column, .. } => {
            parse_error(rel_lines[column], e.to_string())
        }
        other => CliError::Engine(other),
    })
}

pub fn read_presentation(path: &Path, field: Option<u32>) -> Result<GradedMatrix, CliError> {
    parse_presentation(&std::fs::read_to_string(path)?, field)
}

/// Writes `m` in `skypres v1` form.
pub fn emit_presentation(m: &GradedMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "skypres v1").unwrap();
    writeln!(out, "field {}", m.field().order()).unwrap();
    writeln!(out, "generators {}", m.num_rows()).unwrap();
    for d in m.row_degrees() {
        writeln!(out, "{} {}", d.x, d.y).unwrap();
    }
    writeln!(out, "relations {}", m.num_cols()).unwrap();
    for (d, col) in m.col_degrees().iter().zip(m.columns()) {
        write!(out, "{} {} :", d.x, d.y).unwrap();
        for (i, c) in col.iter() {
            write!(out, " {i} {c}").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}
