//! Field snapshots and trace files.
//!
//! 1D snapshots are CSV with `x`, the eight conservative and the eight
//! primitive variables. 2D snapshots are a flat little-endian `f64` array of
//! shape `[ny, nx, 16]` (x fastest, same 16 variables) next to a JSON header.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use rmhd_core::solver::Field;

pub const VARIABLES: [&str; 16] =
    ["D", "m1", "m2", "m3", "B1", "B2", "B3", "E", "rho", "v1", "v2", "v3", "b1", "b2", "b3", "p"];

fn values(field: &Field, i: usize, j: usize) -> [f64; 16] {
    let u = field.cons_at(i, j);
    let v = field.prim_at(i, j).to_array();
    let mut out = [0.0; 16];
    out[..8].copy_from_slice(u.as_slice());
    out[8..].copy_from_slice(&v);
    out
}

/// Header written next to a 2D binary snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub time: f64,
    /// `[ny, nx, variables]`
    pub shape: [usize; 3],
    pub x_bounds: (f64, f64),
    pub y_bounds: (f64, f64),
    pub variables: Vec<String>,
    pub dtype: String,
    pub order: String,
    pub data: String,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_csv_rows(path: &Path, field: &Field, cells: impl Iterator<Item = (usize, usize)>) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "x,y,{}", VARIABLES.join(","))?;
    for (i, j) in cells {
        let (x, y) = (field.mesh.xc(i as isize), field.mesh.yc(j as isize));
        write!(w, "{x:e},{y:e}")?;
        for v in values(field, i, j) {
            write!(w, ",{v:e}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the snapshot with file stem `stem` in `dir` and returns the paths
/// written.
pub fn write_snapshot(dir: &Path, stem: &str, field: &Field, csv_slice: bool) -> Result<Vec<PathBuf>> {
    let mesh = &field.mesh;
    if mesh.dim() == 1 {
        let path = dir.join(format!("{stem}.csv"));
        let mut w = create(&path)?;
        writeln!(w, "x,{}", VARIABLES.join(","))?;
        for (i, j) in mesh.interior() {
            write!(w, "{:e}", mesh.xc(i as isize))?;
            for v in values(field, i, j) {
                write!(w, ",{v:e}")?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        return Ok(vec![path]);
    }

    let bin = dir.join(format!("{stem}.bin"));
    let mut w = create(&bin)?;
    for (i, j) in mesh.interior() {
        for v in values(field, i, j) {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    let header = GridHeader {
        time: field.time,
        shape: [mesh.ny(), mesh.nx(), VARIABLES.len()],
        x_bounds: mesh.x_bounds(),
        y_bounds: mesh.y_bounds(),
        variables: VARIABLES.iter().map(|s| s.to_string()).collect(),
        dtype: "<f8".into(),
        order: "row-major, x fastest".into(),
        data: format!("{stem}.bin"),
    };
    let json = dir.join(format!("{stem}.json"));
    std::fs::write(&json, serde_json::to_string_pretty(&header)?)?;
    let mut written = vec![bin, json];
    if csv_slice {
        let path = dir.join(format!("{stem}_slice.csv"));
        let j = mesh.ny() / 2;
        write_csv_rows(&path, field, (0..mesh.nx()).map(|i| (i, j)))?;
        written.push(path);
    }
    Ok(written)
}

/// Reads a 2D snapshot back as `(header, values)`.
pub fn read_grid(header_path: &Path) -> Result<(GridHeader, Vec<f64>)> {
    let header: GridHeader = serde_json::from_str(&std::fs::read_to_string(header_path)?)?;
    let dir = header_path.parent().unwrap_or(Path::new("."));
    let bytes = std::fs::read(dir.join(&header.data))?;
    let n = header.shape.iter().product::<usize>();
    if bytes.len() != 8 * n {
        bail!("{} holds {} bytes, expected {}", header.data, bytes.len(), 8 * n);
    }
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok((header, data))
}

/// A two-column `time value` text series, appended as the run proceeds.
pub struct Trace {
    out: BufWriter<File>,
}

impl Trace {
    pub fn create(path: &Path, columns: [&str; 2]) -> Result<Self> {
        let mut out = create(path)?;
        writeln!(out, "# {} {}", columns[0], columns[1])?;
        Ok(Self { out })
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        writeln!(self.out, "{t:.17e} {value:.17e}")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Reads a two-column series, skipping `#` comments.
pub fn read_trace(path: &Path) -> Result<Vec<(f64, f64)>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<f64>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(t)), Some(Ok(v)), None) => out.push((t, v)),
            _ => bail!("{}:{}: expected two numbers", path.display(), n + 1),
        }
    }
    Ok(out)
}
