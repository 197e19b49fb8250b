use std::collections::BTreeMap;
use std::io::{Read, Write};

use skyscraper_core::grmat::{parse_rat, Degree, Rat};
use skyscraper_core::invariants::{HNFactorList, HnFactor, Provenance, SkyscraperStore, Staircase};
use skyscraper_core::pipeline::{ExactSkyscraper, LandscapeRow};

use crate::{parse_error, CliError};

pub const STORE_HEADER: [&str; 8] =
    ["alpha_x", "alpha_y", "factor", "slope_num", "slope_den", "stair_gen_x", "stair_gen_y", "stair_rels"];
pub const LANDSCAPE_HEADER: [&str; 5] = ["x", "y", "k", "theta", "lambda"];
pub const FACES_HEADER: [&str; 7] = ["summand", "cell_x", "cell_y", "tree", "node", "parent", "vertices"];

fn join_points<'a>(points: impl IntoIterator<Item = (&'a Rat, &'a Rat)>) -> String {
    points.into_iter().map(|(x, y)| format!("{x}:{y}")).collect::<Vec<_>>().join(";")
}

/// One row per staircase, ordered by `(α_x, α_y)`, factor index and
/// staircase.
pub fn write_store(store: &SkyscraperStore, out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STORE_HEADER)?;
    for list in store.iter() {
        for (i, f) in list.factors.iter().enumerate() {
            for s in &f.staircases {
                let g = s.gen();
                w.write_record([
                    list.alpha.x.to_string(),
                    list.alpha.y.to_string(),
                    i.to_string(),
                    f.slope.numer().to_string(),
                    f.slope.denom().to_string(),
                    g.x.to_string(),
                    g.y.to_string(),
                    join_points(s.rels().iter().map(|r| (&r.x, &r.y))),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn field_rat(line: usize, s: &str) -> Result<Rat, CliError> {
    parse_rat(s).ok_or_else(|| parse_error(line, format!("`{s}` is not a rational number")))
}

fn field_int(line: usize, s: &str) -> Result<i64, CliError> {
    s.trim().parse().map_err(|_| parse_error(line, format!("`{s}` is not an integer")))
}

fn parse_rels(line: usize, s: &str) -> Result<Vec<Degree>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|p| {
            let (x, y) = p.split_once(':').ok_or_else(|| parse_error(line, format!("`{p}` is not `x:y`")))?;
            Ok(Degree::new(field_rat(line, x)?, field_rat(line, y)?))
        })
        .collect()
}

/// Reads a store CSV written by [`write_store`]. Line numbers in errors
/// count the header as line 1.
pub fn read_store(input: impl Read, provenance: Provenance) -> Result<SkyscraperStore, CliError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().collect::<Vec<_>>() != STORE_HEADER {
        return Err(parse_error(1, format!("expected header `{}`", STORE_HEADER.join(","))));
    }
    let mut entries: BTreeMap<Degree, Vec<HnFactor>> = BTreeMap::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec?;
        if rec.len() != STORE_HEADER.len() {
            return Err(parse_error(line, format!("expected {} fields", STORE_HEADER.len())));
        }
        let alpha = Degree::new(field_rat(line, &rec[0])?, field_rat(line, &rec[1])?);
        let index = field_int(line, &rec[2])?;
        let den = field_int(line, &rec[4])?;
        if den <= 0 {
            return Err(parse_error(line, "slope denominator must be positive"));
        }
        let slope = Rat::new(field_int(line, &rec[3])?, den);
        let gen = Degree::new(field_rat(line, &rec[5])?, field_rat(line, &rec[6])?);
        let stair = Staircase::new(gen, parse_rels(line, &rec[7])?);
        let factors = entries.entry(alpha).or_default();
        match usize::try_from(index) {
            Ok(i) if i + 1 == factors.len() => {
                if factors[i].slope != slope {
                    return Err(parse_error(line, format!("factor {i} has two slopes")));
                }
                factors[i].staircases.push(stair);
            }
            Ok(i) if i == factors.len() => factors.push(HnFactor { staircases: vec![stair], slope }),
            _ => return Err(parse_error(line, format!("factor index {index} out of order"))),
        }
    }
    let mut store = SkyscraperStore::new(provenance);
    for (alpha, factors) in entries {
        if factors.windows(2).any(|w| w[0].slope <= w[1].slope) {
            return Err(CliError::Usage(format!("slopes at {alpha} do not strictly decrease")));
        }
        store.insert(HNFactorList { alpha, factors });
    }
    Ok(store)
}

pub fn write_landscape(rows: &[LandscapeRow], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LANDSCAPE_HEADER)?;
    for r in rows {
        w.write_record([
            r.point.x.to_string(),
            r.point.y.to_string(),
            r.k.to_string(),
            r.theta.to_string(),
            r.lambda.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Every node region of every subdivision tree, with vertices in absolute
/// coordinates in counter-clockwise order.
pub fn write_faces(exact: &ExactSkyscraper, out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FACES_HEADER)?;
    for (s, cells) in exact.summands.iter().enumerate() {
        let mut keys: Vec<&(usize, usize)> = cells.trees.keys().collect();
        keys.sort();
        for &(i, j) in keys {
            let corner = cells.grid.point(i, j);
            for (t, tree) in cells.trees[&(i, j)].iter().enumerate() {
                for (n, node) in tree.nodes().iter().enumerate() {
                    let verts: Vec<(Rat, Rat)> =
                        node.region.vertices().iter().map(|&(dx, dy)| (tree.alpha.x + dx, tree.alpha.y + dy)).collect();
                    w.write_record([
                        s.to_string(),
                        corner.x.to_string(),
                        corner.y.to_string(),
                        t.to_string(),
                        n.to_string(),
                        node.parent.map_or(String::new(), |p| p.to_string()),
                        join_points(verts.iter().map(|(x, y)| (x, y))),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
