//! The four subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use iso_zmc::catalog::{
    limit_convergence_rate, successive_ratios, ClosedFormSurface, ConformalFactorModel, DeformationPath, LimitPath,
};
use iso_zmc::diffgeo::{run_invariant_suite, CheckRecord, GridSpec, VerificationReport};
use iso_zmc::{Complex64, Family, FamilyKind};

use crate::config::{CommonArgs, DeformKind, FamilyTag, FileConfig, JobConfig};
use crate::error::CliError;
use crate::mesh::{sample_surface, write_atomic, write_mesh};
use crate::report::{
    render_table, to_json, ConjugateDocument, ConvergenceRow, ConvergenceTable, DeformDocument, Frame, VerifyDocument,
};

#[derive(Debug, Parser)]
#[command(name = "iso-zmc", version, about = "Zero mean curvature surfaces with planar curvature lines in isotropic 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a triangulated grid mesh and its coordinate lines.
    Generate(CommonArgs),
    /// Run the invariant suite and write a JSON report.
    Verify(CommonArgs),
    /// Write meshes of a surface and its conjugate plus a pairing report.
    Conjugate(CommonArgs),
    /// Write a sequence of meshes along a deformation and a convergence table.
    Deform(DeformArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DeformArgs {
    #[arg(long, value_enum)]
    pub path: Option<DeformKind>,
    /// Number of frames.
    #[arg(long)]
    pub frames: Option<usize>,
    /// Explicit parameter values (θ for polar, α for tanh), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<f64>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Outcome of a command: the process exit status and what to print on stdout.
#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Generate(a) => generate(&JobConfig::resolve(a)?),
        Command::Verify(a) => verify(&JobConfig::resolve(a)?),
        Command::Conjugate(a) => conjugate(&JobConfig::resolve(a)?),
        Command::Deform(a) => deform(a),
    }
}

fn title(f: &Family) -> String {
    format!("{} {:?}", f.name(), f.kind)
}

pub fn generate(job: &JobConfig) -> Result<Outcome, CliError> {
    let out = job.require_out()?;
    let f = job.family();
    let s = sample_surface(&f, &job.grid, &job.quadrature)?;
    write_mesh(out, &s, &title(&f))?;
    Ok(Outcome {
        pass: true,
        stdout: format!(
            "wrote {} ({} vertices, {} triangles)\n",
            out.display(),
            s.points.len(),
            s.triangle_count()
        ),
        stderr: String::new(),
    })
}

fn suite(job: &JobConfig, f: &Family) -> Result<VerificationReport, CliError> {
    let model = ConformalFactorModel::for_family(f);
    Ok(run_invariant_suite(f, model.as_ref(), &job.suite_config())?)
}

fn summary(r: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let tag = if c.pass { "pass" } else { "FAIL" };
        s.push_str(&format!("{tag} {:<28} {:>12.3e} <= {:.1e}\n", c.name, c.max_residual, c.tolerance));
    }
    s.push_str(&format!("{}: {}\n", r.family, if r.pass { "pass" } else { "FAIL" }));
    s
}

/// Writes `doc` to `path`, or returns it for stdout.
fn emit(path: Option<&Path>, doc: String) -> Result<String, CliError> {
    match path {
        Some(p) => {
            write_atomic(p, &doc)?;
            Ok(String::new())
        }
        None => Ok(doc),
    }
}

pub fn verify(job: &JobConfig) -> Result<Outcome, CliError> {
    let f = job.family();
    let r = suite(job, &f)?;
    let doc = to_json(&VerifyDocument::new(job, &r))?;
    Ok(Outcome {
        pass: r.pass,
        stdout: emit(job.report.as_deref(), doc)?,
        stderr: summary(&r),
    })
}

/// `a.obj -> a.conjugate.obj`.
pub fn conjugate_mesh_path(p: &Path) -> PathBuf {
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = p.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "obj".into());
    p.with_file_name(format!("{stem}.conjugate.{ext}"))
}

pub fn conjugate(job: &JobConfig) -> Result<Outcome, CliError> {
    let out = job.require_out()?;
    let f = job.family();
    let g = f.conjugate();
    // the asymptotic-coordinate member of the pair decides the default window
    let grid = job.default_grid_for(if g.conjugated { &g } else { &f });
    let job = job.on_grid(grid);

    let sf = sample_surface(&f, &grid, &job.quadrature)?;
    let sg = sample_surface(&g, &grid, &job.quadrature)?;
    write_mesh(out, &sf, &title(&f))?;
    write_mesh(&conjugate_mesh_path(out), &sg, &title(&g))?;

    let mut metric = 0.0_f64;
    let mut hopf = 0.0_f64;
    for z in grid.points() {
        metric = metric.max((f.metric_factor(z) - g.metric_factor(z)).abs());
        if !matches!(f.kind, FamilyKind::Plane) {
            let d = (g.hopf_coefficient(z)? - Complex64::i() * f.hopf_coefficient(z)?).norm();
            hopf = if d.is_nan() { f64::NAN } else { hopf.max(d) };
        }
    }
    let tol = job.tolerances.conjugate_pair;
    let rec = |name: &str, r: f64, t: f64| CheckRecord {
        name: name.into(),
        max_residual: r,
        tolerance: t,
        pass: r <= t,
        excluded_points: 0,
    };
    let pairing = vec![rec("metric_factor_equal", metric, 0.0), rec("hopf_rotation", hopf, tol)];

    let rf = suite(&job, &f)?;
    let rg = suite(&job, &g)?;
    let pass = pairing.iter().all(|c| c.pass) && rf.pass && rg.pass;
    let doc = ConjugateDocument {
        tool: crate::report::TOOL,
        version: crate::report::VERSION,
        command: "conjugate",
        job: &job,
        family: f.name(),
        conjugate: g.name(),
        pairing,
        original: &rf,
        conjugated: &rg,
        pass,
    };
    let json = to_json(&doc)?;
    Ok(Outcome {
        pass,
        stdout: emit(job.report.as_deref(), json)?,
        stderr: format!("{}{}", summary(&rf), summary(&rg)),
    })
}

const POLAR_FIRST: f64 = 0.1;
const POLAR_LAST: f64 = 1.47;
const POLAR_FRAMES: usize = 15;
const TANH_FRAMES: usize = 5;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect(),
    }
}

fn grid_points(u: (f64, f64), v: (f64, f64), n: usize) -> Result<Vec<Complex64>, CliError> {
    Ok(GridSpec::new(u, v, n, n)?.points())
}

fn table(limit: &str, rows: Vec<ConvergenceRow>) -> ConvergenceTable {
    let h: Vec<_> = rows.iter().map(|r| r.h_deviation).collect();
    let e: Vec<_> = rows.iter().map(|r| r.eta_deviation).collect();
    let x: Vec<_> = rows.iter().filter_map(|r| r.x_deviation).collect();
    let dec = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    ConvergenceTable {
        limit: limit.into(),
        monotone: dec(&h) && dec(&e) && dec(&x),
        h_ratios: successive_ratios(&h),
        eta_ratios: successive_ratios(&e),
        x_ratios: successive_ratios(&x),
        rows,
    }
}

/// Deviation from the endpoint data on halving sequences towards both ends of
/// the polar path.
fn polar_tables(r: f64) -> Result<Vec<ConvergenceTable>, CliError> {
    let k = 1.0 / r;
    let pts = grid_points((-k, 0.5 * k), (-k, k), 9)?;
    let eps: Vec<f64> = (0..5).map(|i| POLAR_FIRST / f64::powi(2.0, i)).collect();
    let mut out = Vec::new();
    for (name, path) in [
        ("theta -> 0 (catenoid)", LimitPath::PolarThetaToZero { r }),
        ("theta -> pi/2 (enneper-type, shifted)", LimitPath::PolarThetaToHalfPi { r }),
    ] {
        let rows = limit_convergence_rate(path, &pts, &eps)?.into_iter().map(ConvergenceRow::from).collect();
        out.push(table(name, rows));
    }
    Ok(out)
}

fn tanh_table(alphas: &[f64]) -> Result<ConvergenceTable, CliError> {
    let pts = grid_points((-1.0, 1.0), (-1.0, 1.0), 11)?;
    let fine = grid_points((-1.0, 1.0), (-1.0, 1.0), 21)?;
    let x0 = ClosedFormSurface::TrivialEnneperX0;
    let rows = limit_convergence_rate(LimitPath::TanhAlphaToZero, &pts, alphas)?
        .into_iter()
        .map(|row| {
            let xa = ClosedFormSurface::DeformXAlpha { alpha: row.param };
            let d = fine
                .iter()
                .map(|z| xa.eval(z.re, z.im).max_abs_diff(&x0.eval(z.re, z.im)))
                .fold(0.0, f64::max);
            ConvergenceRow {
                x_deviation: Some(d),
                ..row.into()
            }
        })
        .collect();
    Ok(table("alpha -> 0 (trivial enneper)", rows))
}

pub fn deform(a: &DeformArgs) -> Result<Outcome, CliError> {
    let file = match &a.common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let df = file.deform.clone().unwrap_or_default();
    let kind = a.path.or(df.path).unwrap_or(DeformKind::Polar);
    let mut common = a.common.clone();
    common.family = Some(match kind {
        DeformKind::Polar => FamilyTag::DeformPolar,
        DeformKind::Tanh => FamilyTag::DeformTanh,
    });
    let job = JobConfig::resolve_with(&common, &file)?;
    let out_dir = job.require_out()?.to_path_buf();

    let explicit = a.params.clone().or(df.params);
    let (params, tables): (Vec<f64>, Vec<ConvergenceTable>) = match (kind, job.surface) {
        (DeformKind::Polar, FamilyKind::DeformPolar { r, .. }) => {
            let n = a.frames.or(df.frames).unwrap_or(POLAR_FRAMES);
            let ps = explicit.unwrap_or_else(|| linspace(POLAR_FIRST, POLAR_LAST, n));
            (ps, polar_tables(r)?)
        }
        (DeformKind::Tanh, FamilyKind::DeformTanh { alpha }) => {
            let n = a.frames.or(df.frames).unwrap_or(TANH_FRAMES);
            let ps = explicit.unwrap_or_else(|| (0..n).map(|k| alpha / f64::powi(2.0, k as i32)).collect());
            let t = tanh_table(&ps)?;
            (ps, vec![t])
        }
        _ => unreachable!("family follows the deformation kind"),
    };
    if params.is_empty() {
        return Err(CliError::Usage("deformation needs at least one frame".into()));
    }

    let mut frames = Vec::with_capacity(params.len());
    for (index, &p) in params.iter().enumerate() {
        let path = match (kind, job.surface) {
            (DeformKind::Polar, FamilyKind::DeformPolar { r, .. }) => DeformationPath::Polar { r, theta: p },
            _ => DeformationPath::Tanh { alpha: p },
        };
        let mut f = iso_zmc::catalog::deformation_data(path)?.with_display(job.display);
        if job.conjugated {
            f = f.conjugate();
        }
        let grid = job.default_grid_for(&f);
        let fj = job.on_grid(grid);
        let s = sample_surface(&f, &grid, &fj.quadrature)?;
        let mesh = out_dir.join(format!("frame-{index:03}.obj"));
        write_mesh(&mesh, &s, &title(&f))?;
        frames.push(Frame {
            index,
            param: p,
            family: title(&f),
            mesh: mesh.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        });
    }

    let pass = tables.iter().all(|t| t.monotone);
    let mut text = String::new();
    for t in &tables {
        text.push_str(&render_table(t));
        text.push('\n');
    }
    let doc = DeformDocument {
        tool: crate::report::TOOL,
        version: crate::report::VERSION,
        command: "deform",
        path: kind,
        job: &job,
        frames,
        tables,
        pass,
    };
    let report = job.report.clone().unwrap_or_else(|| out_dir.join("convergence.json"));
    write_atomic(&report, &to_json(&doc)?)?;
    Ok(Outcome {
        pass,
        stdout: text,
        stderr: format!("wrote {} frames to {}\n", params.len(), out_dir.display()),
    })
}

/// Endpoints of the default polar sweep, for callers that want the same frames.
pub fn polar_default_params() -> Vec<f64> {
    linspace(POLAR_FIRST, POLAR_LAST, POLAR_FRAMES)
}
