//! CSV, SVG and atomic file output.
//!
//! CSV files start with `#` metadata lines, then a header row, then one row
//! per point: `d` exact `p/q` columns followed by `d` decimal columns.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fractafold_core::arith::to_f64;
use fractafold_core::{Point, Rational};
use num_traits::{One, Zero};

use crate::config::parse_rational;

pub const DEFAULT_PRECISION: usize = 12;

/// `p/q`, always with an explicit denominator.
pub fn exact(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Scientific notation with `precision` significant digits.
pub fn decimal(q: &Rational, precision: usize) -> String {
    format!("{:.*e}", precision.max(1) - 1, to_f64(q))
}

/// An optional label column (e.g. the base word of an orbit point) may
/// precede the coordinates.
pub struct CsvRow<'a> {
    pub label: Option<String>,
    pub point: &'a Point,
}

pub fn csv_text(metadata: &[(String, String)], label: Option<&str>, dim: usize, rows: &[CsvRow<'_>], precision: usize) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        writeln!(out, "# {}={}", k, v).unwrap();
    }
    let mut header: Vec<String> = Vec::new();
    if let Some(l) = label {
        header.push(l.to_string());
    }
    header.extend((1..=dim).map(|i| format!("x{}", i)));
    header.extend((1..=dim).map(|i| format!("x{}_decimal", i)));
    writeln!(out, "{}", header.join(",")).unwrap();
    for row in rows {
        let mut cells: Vec<String> = Vec::new();
        if let Some(l) = &row.label {
            cells.push(quote(l));
        }
        cells.extend(row.point.coords().iter().map(exact));
        cells.extend(row.point.coords().iter().map(|c| decimal(c, precision)));
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', ';', ' ']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Parsed point file: metadata pairs and exact points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvPoints {
    pub metadata: Vec<(String, String)>,
    pub points: Vec<Point>,
}

/// Reads the exact columns of an unlabeled point CSV.
pub fn parse_points_csv(text: &str) -> Result<CsvPoints> {
    let mut metadata = Vec::new();
    let mut dim: Option<usize> = None;
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.trim().split_once('=') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match dim {
            None => {
                let d = fields.iter().filter(|f| !f.ends_with("_decimal")).count();
                if d == 0 || fields.len() != 2 * d || !fields[..d].iter().enumerate().all(|(i, f)| *f == format!("x{}", i + 1)) {
                    bail!("line {}: expected a header row `x1,...,x1_decimal,...`", lineno);
                }
                dim = Some(d);
            }
            Some(d) => {
                if fields.len() != 2 * d {
                    bail!("line {}: expected {} fields, found {}", lineno, 2 * d, fields.len());
                }
                let coords = fields[..d]
                    .iter()
                    .enumerate()
                    .map(|(i, f)| parse_rational(f).map_err(|m| anyhow!("line {}, field {}: {}", lineno, i + 1, m)))
                    .collect::<Result<Vec<_>>>()?;
                points.push(Point::new(coords));
            }
        }
    }
    if dim.is_none() {
        bail!("missing header row");
    }
    Ok(CsvPoints { metadata, points })
}

/// How to draw a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    /// Coordinates drawn horizontally and vertically; in 1D only the first
    /// is used.
    pub projection: (usize, usize),
    pub radius: Rational,
    pub size: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { projection: (0, 1), radius: Rational::new(3.into(), 2.into()), size: 512 }
    }
}

/// Exact viewport: the data hull padded by 5% of its extent per axis, or
/// by 1 on a degenerate axis.
pub fn viewport(points: &[Point], axes: &[usize]) -> Vec<(Rational, Rational)> {
    let pad = Rational::new(1.into(), 20.into());
    axes.iter()
        .map(|&a| {
            let mut it = points.iter().map(|p| p.coord(a));
            let first = it.next().cloned().unwrap_or_else(Rational::zero);
            let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), c| {
                (if c < &lo { c.clone() } else { lo }, if c > &hi { c.clone() } else { hi })
            });
            let extent = &hi - &lo;
            let margin = if extent.is_zero() { Rational::one() } else { extent * &pad };
            (lo - &margin, hi + margin)
        })
        .collect()
}

fn px(v: f64) -> String {
    format!("{:.3}", v)
}

pub fn svg_text(points: &[Point], dim: usize, spec: &RenderSpec) -> Result<String> {
    let (i, j) = spec.projection;
    if i >= dim || (dim >= 2 && j >= dim) || (dim >= 2 && i == j) {
        bail!("projection ({}, {}) invalid for dimension {}", i + 1, j + 1, dim);
    }
    let planar = dim >= 2;
    let axes: Vec<usize> = if planar { vec![i, j] } else { vec![i] };
    let view = viewport(points, &axes);
    let size = spec.size as f64;
    let scale = |c: &Rational, (lo, hi): &(Rational, Rational)| to_f64(&((c - lo) / (hi - lo))) * size;
    let mut out = String::new();
    writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>").unwrap();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        spec.size
    )
    .unwrap();
    writeln!(out, "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>", spec.size).unwrap();
    let r = px(to_f64(&spec.radius));
    if planar {
        writeln!(out, "<g fill=\"black\">").unwrap();
        for p in points {
            let cx = scale(p.coord(i), &view[0]);
            // SVG's y axis points down.
            let cy = size - scale(p.coord(j), &view[1]);
            writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", px(cx), px(cy), r).unwrap();
        }
    } else {
        let mid = px(size / 2.0);
        writeln!(out, "<line x1=\"0\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"gray\"/>", mid, spec.size).unwrap();
        writeln!(out, "<g fill=\"black\">").unwrap();
        for p in points {
            let cx = scale(p.coord(i), &view[0]);
            writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", px(cx), mid, r).unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| anyhow!("{}: not a file path", path.display()))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{}.tmp{}", name, std::process::id()));
    let result = (|| -> Result<()> {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(contents.as_bytes()).with_context(|| format!("writing {}", tmp.display()))?;
        f.sync_all().with_context(|| format!("syncing {}", tmp.display()))?;
        fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
