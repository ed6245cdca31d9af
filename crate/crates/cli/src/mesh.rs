//! Grid sampling and Wavefront-style mesh and polyline export.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use iso_zmc::diffgeo::jet::METRIC_TOL;
use iso_zmc::diffgeo::GridSpec;
use iso_zmc::quadrature::CompositeRule;
use iso_zmc::weierstrass::integrate_with_rule;
use iso_zmc::{Family, IsoPoint3, QuadratureConfig};
use rayon::prelude::*;

use crate::error::CliError;

/// Surface samples on a grid, row-major (`i * nv + j`).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub grid: GridSpec,
    pub points: Vec<IsoPoint3>,
}

impl GridSamples {
    pub fn at(&self, i: usize, j: usize) -> IsoPoint3 {
        self.points[i * self.grid.nv + j]
    }

    pub fn triangle_count(&self) -> usize {
        2 * (self.grid.nu - 1) * (self.grid.nv - 1)
    }
}

/// Integrates the surface at every grid node. Nodes where the metric vanishes
/// are branch points of the immersion and abort the run.
pub fn sample_surface(f: &Family, grid: &GridSpec, quad: &QuadratureConfig) -> Result<GridSamples, CliError> {
    grid.validate()?;
    let rule = CompositeRule::new(quad)?;
    let nodes = grid.points();
    if let Some(k) = nodes.iter().position(|z| f.metric_factor(*z).partial_cmp(&METRIC_TOL).is_none_or(|o| o.is_lt())) {
        let (i, j) = (k / grid.nv, k % grid.nv);
        let z = nodes[k];
        return Err(CliError::Degenerate(format!(
            "metric vanishes at sample ({i}, {j}) = ({}, {}) of {}",
            z.re,
            z.im,
            f.name()
        )));
    }
    let points = nodes
        .par_iter()
        .map(|&z| integrate_with_rule(f, &rule, quad.base_point, z))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(k) = points.iter().position(|p| !p.is_finite()) {
        return Err(CliError::Degenerate(format!("non-finite sample at ({}, {})", k / grid.nv, k % grid.nv)));
    }
    Ok(GridSamples { grid: *grid, points })
}

fn num(x: f64) -> String {
    // 17 significant digits round-trip every double
    format!("{x:.16e}")
}

fn vertex_line(out: &mut String, p: &IsoPoint3) {
    let _ = writeln!(out, "{} {} {}", num(p.x), num(p.y), num(p.l));
}

/// Vertices as `v x y l`, triangles split along `(i, j) -> (i+1, j+1)`, and one
/// `l` record per coordinate line.
pub fn render_obj(s: &GridSamples, title: &str) -> String {
    let (nu, nv) = (s.grid.nu, s.grid.nv);
    let idx = |i: usize, j: usize| i * nv + j + 1;
    let mut out = String::with_capacity(80 * s.points.len());
    let _ = writeln!(out, "# iso-zmc {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# {title}");
    let _ = writeln!(
        out,
        "# grid u [{}, {}] x v [{}, {}], {nu} x {nv}; vertex order (x, y, l)",
        num(s.grid.u_min),
        num(s.grid.u_max),
        num(s.grid.v_min),
        num(s.grid.v_max)
    );
    let _ = writeln!(out, "o surface");
    for p in &s.points {
        out.push_str("v ");
        vertex_line(&mut out, p);
    }
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            let _ = writeln!(out, "f {a} {b} {c}");
            let _ = writeln!(out, "f {a} {c} {d}");
        }
    }
    let _ = writeln!(out, "g u-lines");
    for j in 0..nv {
        out.push('l');
        for i in 0..nu {
            let _ = write!(out, " {}", idx(i, j));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "g v-lines");
    for i in 0..nu {
        out.push('l');
        for j in 0..nv {
            let _ = write!(out, " {}", idx(i, j));
        }
        out.push('\n');
    }
    out
}

/// One block per coordinate line: a header comment, then `x y l` rows, blocks
/// separated by a blank line.
pub fn render_polylines(s: &GridSamples) -> String {
    let (nu, nv) = (s.grid.nu, s.grid.nv);
    let mut out = String::new();
    let _ = writeln!(out, "# iso-zmc polylines {}", env!("CARGO_PKG_VERSION"));
    for j in 0..nv {
        let _ = writeln!(out, "\n# u-line v={} samples={nu}", num(s.grid.v_at(j)));
        for i in 0..nu {
            vertex_line(&mut out, &s.at(i, j));
        }
    }
    for i in 0..nu {
        let _ = writeln!(out, "\n# v-line u={} samples={nv}", num(s.grid.u_at(i)));
        for j in 0..nv {
            vertex_line(&mut out, &s.at(i, j));
        }
    }
    out
}

/// `surface.obj -> surface.lines.txt`.
pub fn sidecar_path(obj: &Path) -> PathBuf {
    obj.with_extension("lines.txt")
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn write_mesh(path: &Path, s: &GridSamples, title: &str) -> Result<(), CliError> {
    write_atomic(path, &render_obj(s, title))?;
    write_atomic(&sidecar_path(path), &render_polylines(s))
}
