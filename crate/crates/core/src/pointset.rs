//! Point configurations and the plain-text CSV format they are stored in.
//!
//! File layout: a header line `dim=<d>,count=<m>` followed by `m` rows of `d`
//! comma-separated decimal coordinates.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{domain, usage, MedError, Result};
use crate::subsets::SubsetQuery;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// An ordered set of `m` points in `R^d`, stored row-major.
///
/// Index `i` always identifies the same element. All coordinates are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| usage("a point set needs at least one point"))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(usage(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(usage("dimension must be at least 1"));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(usage(format!(
                "{} coordinates do not form whole points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(domain(format!(
                "coordinate {} of point {} is not finite",
                pos % dim,
                pos / dim
            )));
        }
        Ok(Self { dim, coords })
    }

    /// Number of points `m`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Mutable access for optimizers. Callers must keep coordinates finite.
    pub(crate) fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// Applies `f` to every point, producing a set of dimension `out_dim`.
    pub fn map_points<F>(&self, out_dim: usize, mut f: F) -> Result<PointSet>
    where
        F: FnMut(&[f64], &mut Vec<f64>) -> Result<()>,
    {
        let mut coords = Vec::with_capacity(out_dim * self.len());
        for p in self.iter() {
            let before = coords.len();
            f(p, &mut coords)?;
            debug_assert_eq!(coords.len() - before, out_dim);
        }
        PointSet::from_flat(out_dim, coords)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "dim={},count={}", self.dim, self.len())?;
        let mut line = String::new();
        for p in self.iter() {
            line.clear();
            for (j, c) in p.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                // `{}` on f64 is the shortest representation that round-trips.
                write!(line, "{c}").expect("writing to a String");
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<PointSet> {
        let mut lines = input.lines().enumerate();
        let (dim, count) = loop {
            match lines.next() {
                None => return Err(parse_err(1, "missing header line")),
                Some((_, line)) => {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    break parse_header(&line)?;
                }
            }
        };
        let mut coords = Vec::with_capacity(dim * count);
        let mut rows = 0;
        for (idx, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let before = coords.len();
            for field in line.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|e| parse_err(idx + 1, format!("bad coordinate {field:?}: {e}")))?;
                coords.push(v);
            }
            if coords.len() - before != dim {
                return Err(parse_err(
                    idx + 1,
                    format!(
                        "expected {dim} coordinates, found {}",
                        coords.len() - before
                    ),
                ));
            }
            rows += 1;
        }
        if rows != count {
            return Err(parse_err(
                0,
                format!("header declares {count} points, found {rows}"),
            ));
        }
        PointSet::from_flat(dim, coords)
    }
}

fn parse_err(line: usize, detail: impl Into<String>) -> MedError {
    MedError::Parse {
        line,
        detail: detail.into(),
    }
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut dim = None;
    let mut count = None;
    for part in line.trim().split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("header field {part:?} is not key=value")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|e| parse_err(1, format!("header field {part:?}: {e}")))?;
        match key.trim() {
            "dim" => dim = Some(value),
            "count" => count = Some(value),
            other => return Err(parse_err(1, format!("unknown header key {other:?}"))),
        }
    }
    match (dim, count) {
        (Some(d), Some(m)) if d >= 1 && m >= 1 => Ok((d, m)),
        _ => Err(parse_err(
            1,
            "header must be dim=<d>,count=<m> with d, m >= 1",
        )),
    }
}

/// The mean `c_S` of the points indexed by `subset`.
pub fn centroid(points: &PointSet, subset: &SubsetQuery) -> Result<Vec<f64>> {
    let idx = subset.indices();
    if idx.is_empty() {
        return Err(usage("centroid of an empty subset"));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= points.len()) {
        return Err(usage(format!(
            "subset index {bad} out of range for {} points",
            points.len()
        )));
    }
    Ok(centroid_of(points, idx))
}

pub(crate) fn centroid_of(points: &PointSet, idx: &[usize]) -> Vec<f64> {
    let mut c = vec![0.0; points.dim()];
    for &i in idx {
        for (acc, v) in c.iter_mut().zip(points.point(i)) {
            *acc += v;
        }
    }
    let inv = 1.0 / idx.len() as f64;
    c.iter_mut().for_each(|v| *v *= inv);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(PointSet::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(PointSet::new(vec![]).is_err());
        assert!(matches!(
            PointSet::new(vec![vec![f64::NAN]]),
            Err(MedError::Domain(_))
        ));
    }

    #[test]
    fn centroid_examples() {
        let x = ps(&[&[0.0, 0.0], &[2.0, 0.0]]);
        let s = SubsetQuery::new(vec![0, 1], 2).unwrap();
        assert_eq!(centroid(&x, &s).unwrap(), vec![1.0, 0.0]);

        let x = ps(&[&[1.0, 1.0]]);
        let s = SubsetQuery::new(vec![0], 1).unwrap();
        assert_eq!(centroid(&x, &s).unwrap(), vec![1.0, 1.0]);

        let x = ps(&[&[0.0, 0.0], &[3.0, 0.0], &[0.0, 3.0]]);
        let s = SubsetQuery::new(vec![1, 2], 3).unwrap();
        assert_eq!(centroid(&x, &s).unwrap(), vec![1.5, 1.5]);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let x = ps(&[&[0.1, -2.5e-17], &[1.0 / 3.0, 7.0]]);
        let text = x.to_csv_string();
        assert!(text.starts_with("dim=2,count=2\n"));
        let back = PointSet::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn csv_rejects_count_mismatch() {
        let err = PointSet::read_csv("dim=1,count=3\n1\n2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, MedError::Parse { .. }));
        assert!(PointSet::read_csv("dim=2,count=1\n1\n".as_bytes()).is_err());
        assert!(PointSet::read_csv("1,2\n".as_bytes()).is_err());
    }
}
