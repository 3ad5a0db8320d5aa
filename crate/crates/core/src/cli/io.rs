//! CSV ingestion and serialization of instances, and reading of center files.
//!
//! Points files hold one row per point. Coordinates come first; with inline
//! groups the last column lists the point's group ids separated by `;`.
//! Distance-matrix files hold `n` rows of `n` entries. A first row that does
//! not parse as numbers is taken as a header. Lines starting with `#` are
//! skipped. Errors carry the file name and the 1-based line number.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{Center, Dataset, Metric};

/// Where an instance comes from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputSpec {
    pub points: Option<PathBuf>,
    pub distance_matrix: Option<PathBuf>,
    /// One line per point with `;`-separated group ids.
    pub groups: Option<PathBuf>,
    /// `point_id,group_id` pairs.
    pub membership: Option<PathBuf>,
    /// Groups sit in the last column of the points file.
    pub inline_groups: bool,
    pub check_triangle: bool,
}

/// Opens a file, or standard input for `-`.
pub fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin()));
    }
    let f = File::open(path)
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    Ok(Box::new(BufReader::new(f)))
}

fn at(name: &str, line: u64, msg: impl std::fmt::Display) -> Error {
    Error::invalid(format!("{name} line {line}: {msg}"))
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r)
}

/// Rows of a CSV file with their line numbers, header row dropped.
fn rows<R: Read>(r: R, name: &str, numeric_cols: impl Fn(usize) -> usize) -> Result<Vec<(u64, Vec<String>)>> {
    let mut out = Vec::new();
    for rec in reader(r).records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            at(name, line, e)
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let fields: Vec<String> = rec.iter().map(str::to_owned).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        if out.is_empty() {
            let m = numeric_cols(fields.len());
            if fields[..m.min(fields.len())].iter().any(|f| f.parse::<f64>().is_err()) {
                continue;
            }
        }
        out.push((line, fields));
    }
    Ok(out)
}

fn number(name: &str, line: u64, field: &str) -> Result<f64> {
    let x: f64 = field
        .parse()
        .map_err(|_| at(name, line, format!("`{field}` is not a number")))?;
    if !x.is_finite() {
        return Err(at(name, line, format!("`{field}` is not finite")));
    }
    Ok(x)
}

fn group_list(name: &str, line: u64, field: &str) -> Result<Vec<usize>> {
    let ids: Vec<usize> = field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| at(name, line, format!("bad group id `{s}`"))))
        .collect::<Result<_>>()?;
    if ids.is_empty() {
        return Err(at(name, line, "point belongs to no group"));
    }
    Ok(ids)
}

/// Coordinates and, with `inline_groups`, the group ids of every point.
pub fn read_points<R: Read>(
    r: R,
    name: &str,
    inline_groups: bool,
) -> Result<(Vec<Vec<f64>>, Option<Vec<Vec<usize>>>)> {
    let skip = usize::from(inline_groups);
    let rows = rows(r, name, |len| len.saturating_sub(skip))?;
    let mut coords = Vec::with_capacity(rows.len());
    let mut groups = Vec::new();
    let mut dim = None;
    for (line, fields) in rows {
        if fields.len() <= skip {
            return Err(at(name, line, "no coordinates"));
        }
        let d = fields.len() - skip;
        match dim {
            None => dim = Some(d),
            Some(e) if e != d => {
                return Err(at(name, line, format!("expected {e} coordinates, found {d}")))
            }
            _ => {}
        }
        let x = fields[..d]
            .iter()
            .map(|f| number(name, line, f))
            .collect::<Result<Vec<f64>>>()?;
        coords.push(x);
        if inline_groups {
            groups.push(group_list(name, line, &fields[d])?);
        }
    }
    if coords.is_empty() {
        return Err(Error::invalid(format!("{name}: no points")));
    }
    Ok((coords, inline_groups.then_some(groups)))
}

/// Square, symmetric, non-negative distance matrix.
pub fn read_matrix<R: Read>(r: R, name: &str) -> Result<Vec<Vec<f64>>> {
    let rows = rows(r, name, |len| len)?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (line, fields) in &rows {
        if fields.len() != n {
            return Err(at(name, *line, format!("expected {n} entries, found {}", fields.len())));
        }
        let row = fields
            .iter()
            .map(|f| {
                let d = number(name, *line, f)?;
                if d < 0.0 {
                    return Err(at(name, *line, format!("negative distance {d}")));
                }
                Ok(d)
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(row);
    }
    for (i, (line, _)) in rows.iter().enumerate() {
        for j in 0..i {
            if out[i][j] != out[j][i] {
                return Err(at(name, *line, format!("asymmetric entry ({i}, {j})")));
            }
        }
        if out[i][i] != 0.0 {
            return Err(at(name, *line, "non-zero diagonal entry"));
        }
    }
    if out.is_empty() {
        return Err(Error::invalid(format!("{name}: empty distance matrix")));
    }
    Ok(out)
}

/// One line of `;`-separated group ids per point.
pub fn read_group_lines<R: Read>(r: R, name: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if out.is_empty() && t.split(';').any(|s| s.trim().parse::<usize>().is_err()) {
            continue;
        }
        out.push(group_list(name, i as u64 + 1, t)?);
    }
    Ok(out)
}

/// `point_id,group_id` pairs for `n` points; a point may appear several times.
pub fn read_membership<R: Read>(r: R, name: &str, n: usize) -> Result<Vec<Vec<usize>>> {
    let mut groups = vec![Vec::new(); n];
    for (line, fields) in rows(r, name, |_| 2)? {
        if fields.len() != 2 {
            return Err(at(name, line, format!("expected 2 columns, found {}", fields.len())));
        }
        let p: usize = fields[0]
            .parse()
            .map_err(|_| at(name, line, format!("bad point id `{}`", fields[0])))?;
        let g: usize = fields[1]
            .parse()
            .map_err(|_| at(name, line, format!("bad group id `{}`", fields[1])))?;
        if p >= n {
            return Err(at(name, line, format!("unknown point id {p}")));
        }
        groups[p].push(g);
    }
    if let Some(p) = groups.iter().position(Vec::is_empty) {
        return Err(Error::invalid(format!("{name}: point {p} belongs to no group")));
    }
    Ok(groups)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// Builds the dataset described by `spec`.
pub fn load_dataset(spec: &InputSpec) -> Result<Dataset> {
    let (metric, inline) = match (&spec.points, &spec.distance_matrix) {
        (Some(p), None) => {
            let (coords, groups) = read_points(open_input(p)?, &display(p), spec.inline_groups)?;
            (Metric::euclidean(coords)?, groups)
        }
        (None, Some(p)) => {
            if spec.inline_groups {
                return Err(Error::invalid("inline groups need a points file"));
            }
            let rows = read_matrix(open_input(p)?, &display(p))?;
            (Metric::matrix(rows, spec.check_triangle)?, None)
        }
        (Some(_), Some(_)) => {
            return Err(Error::invalid("give either points or a distance matrix, not both"))
        }
        (None, None) => return Err(Error::invalid("no points or distance matrix given")),
    };
    let n = metric.len();
    let groups = match (inline, &spec.groups, &spec.membership) {
        (Some(g), None, None) => g,
        (None, Some(p), None) => read_group_lines(open_input(p)?, &display(p))?,
        (None, None, Some(p)) => read_membership(open_input(p)?, &display(p), n)?,
        (None, None, None) => vec![vec![0]; n],
        _ => return Err(Error::invalid("give exactly one source of group memberships")),
    };
    if groups.len() != n {
        return Err(Error::invalid(format!(
            "{} group rows for {n} points",
            groups.len()
        )));
    }
    Dataset::new(metric, groups)
}

fn join_groups(g: &[usize]) -> String {
    g.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

/// Writes coordinates with an inline group column; reads back with
/// [`read_points`] and `inline_groups`.
pub fn write_points<W: Write>(ds: &Dataset, w: W) -> Result<()> {
    let Metric::Euclidean { dim, coords } = ds.metric() else {
        return Err(Error::invalid("only coordinate instances can be written as points"));
    };
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (0..*dim).map(|i| format!("x{i}")).collect();
    header.push("groups".into());
    out.write_record(&header)?;
    for (p, x) in coords.iter().enumerate() {
        let mut rec: Vec<String> = x.iter().map(f64::to_string).collect();
        rec.push(join_groups(ds.groups_of(p)));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the `n × n` distance matrix of an explicit metric.
pub fn write_matrix<W: Write>(ds: &Dataset, w: W) -> Result<()> {
    let Metric::Matrix { n, dist } = ds.metric() else {
        return Err(Error::invalid("only matrix instances can be written as a matrix"));
    };
    let mut out = csv::Writer::from_writer(w);
    for row in dist.chunks(*n) {
        out.write_record(row.iter().map(f64::to_string))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes one `;`-separated group line per point.
pub fn write_group_lines<W: Write>(ds: &Dataset, mut w: W) -> Result<()> {
    for p in 0..ds.len() {
        writeln!(w, "{}", join_groups(ds.groups_of(p)))?;
    }
    Ok(())
}

/// Centers from a result JSON (its `centers` field) or a CSV file. CSV rows
/// are point ids when `ids` is set or the instance is a distance matrix,
/// coordinates otherwise.
pub fn read_centers(path: &Path, ds: &Dataset, ids: bool) -> Result<Vec<Center>> {
    let mut text = String::new();
    open_input(path)?.read_to_string(&mut text)?;
    let name = display(path);
    if text.trim_start().starts_with('{') {
        #[derive(serde::Deserialize)]
        struct WithCenters {
            centers: Vec<Center>,
        }
        let v: WithCenters = serde_json::from_str(&text)?;
        return Ok(v.centers);
    }
    if ids || !ds.metric().is_euclidean() {
        let mut out = Vec::new();
        for (line, fields) in rows(text.as_bytes(), &name, |_| 1)? {
            if fields.len() != 1 {
                return Err(at(&name, line, "expected one point id per row"));
            }
            let p: usize = fields[0]
                .parse()
                .map_err(|_| at(&name, line, format!("bad point id `{}`", fields[0])))?;
            if p >= ds.len() {
                return Err(at(&name, line, format!("unknown point id {p}")));
            }
            out.push(Center::Point(p));
        }
        return Ok(out);
    }
    let (coords, _) = read_points(text.as_bytes(), &name, false)?;
    Ok(coords.into_iter().map(Center::Coords).collect())
}
