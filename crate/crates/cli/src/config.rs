//! Job configuration: command-line flags layered over an optional TOML file.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use iso_zmc::diffgeo::{GridSpec, SuiteConfig, Tolerances};
use iso_zmc::{Complex64, Family, FamilyKind, QuadratureConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SAMPLES: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Plane,
    TrivialEnneper,
    Catenoid,
    EnneperType,
    BonnetType,
    DeformTanh,
    DeformPolar,
    /// Conjugate of the catenoid.
    Helicoid,
    /// Conjugate of the Bonnet-type family.
    ThomsenType,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        FamilyTag::Plane,
        FamilyTag::TrivialEnneper,
        FamilyTag::Catenoid,
        FamilyTag::EnneperType,
        FamilyTag::BonnetType,
        FamilyTag::DeformTanh,
        FamilyTag::DeformPolar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Plane => "plane",
            FamilyTag::TrivialEnneper => "trivial-enneper",
            FamilyTag::Catenoid => "catenoid",
            FamilyTag::EnneperType => "enneper-type",
            FamilyTag::BonnetType => "bonnet-type",
            FamilyTag::DeformTanh => "deform-tanh",
            FamilyTag::DeformPolar => "deform-polar",
            FamilyTag::Helicoid => "helicoid",
            FamilyTag::ThomsenType => "thomsen-type",
        }
    }
}

/// `a:b` with `a < b`.
pub fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("bad lower bound {a:?}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad upper bound {b:?}: {e}"))?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("range {s:?} must be finite and increasing"));
    }
    Ok([a, b])
}

/// One flag per tolerance; unset flags keep the file or default value.
#[derive(Debug, Clone, Default, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_mean_curvature: Option<f64>,
    #[arg(long)]
    pub tol_mean_curvature_fd: Option<f64>,
    #[arg(long)]
    pub tol_hopf: Option<f64>,
    #[arg(long)]
    pub tol_hopf_constancy: Option<f64>,
    #[arg(long)]
    pub tol_conformality: Option<f64>,
    #[arg(long)]
    pub tol_fd_jet: Option<f64>,
    #[arg(long)]
    pub tol_metric_model: Option<f64>,
    #[arg(long)]
    pub tol_gauss_weingarten: Option<f64>,
    #[arg(long)]
    pub tol_planarity: Option<f64>,
    #[arg(long)]
    pub tol_ode: Option<f64>,
    #[arg(long)]
    pub tol_pde: Option<f64>,
    #[arg(long)]
    pub tol_axial: Option<f64>,
    #[arg(long)]
    pub tol_affine_determinant: Option<f64>,
    #[arg(long)]
    pub tol_affine_mean: Option<f64>,
    #[arg(long)]
    pub tol_affine_tangential: Option<f64>,
    #[arg(long)]
    pub tol_path_independence: Option<f64>,
    #[arg(long)]
    pub tol_shaw: Option<f64>,
    #[arg(long)]
    pub tol_conjugate_pair: Option<f64>,
    #[arg(long)]
    pub tol_degenerate_fraction: Option<f64>,
}

impl TolArgs {
    fn apply(&self, t: &mut Tolerances) {
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(x) = src {
                *dst = x;
            }
        };
        set(&mut t.mean_curvature, self.tol_mean_curvature);
        set(&mut t.mean_curvature_fd, self.tol_mean_curvature_fd);
        set(&mut t.hopf, self.tol_hopf);
        set(&mut t.hopf_constancy, self.tol_hopf_constancy);
        set(&mut t.conformality, self.tol_conformality);
        if self.tol_fd_jet.is_some() {
            t.fd_jet = self.tol_fd_jet;
        }
        set(&mut t.metric_model, self.tol_metric_model);
        set(&mut t.gauss_weingarten, self.tol_gauss_weingarten);
        set(&mut t.planarity, self.tol_planarity);
        set(&mut t.ode, self.tol_ode);
        set(&mut t.pde, self.tol_pde);
        set(&mut t.axial, self.tol_axial);
        set(&mut t.affine_determinant, self.tol_affine_determinant);
        set(&mut t.affine_mean, self.tol_affine_mean);
        set(&mut t.affine_tangential, self.tol_affine_tangential);
        set(&mut t.path_independence, self.tol_path_independence);
        set(&mut t.shaw, self.tol_shaw);
        set(&mut t.conjugate_pair, self.tol_conjugate_pair);
        set(&mut t.degenerate_fraction, self.tol_degenerate_fraction);
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyTag>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Use the conjugate data `(h, iη)`.
    #[arg(long)]
    pub conjugated: bool,
    /// Rescale `η` to the display normalization.
    #[arg(long)]
    pub display: bool,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub u_range: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub v_range: Option<[f64; 2]>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub affine_step: Option<f64>,
    #[arg(long)]
    pub panels: Option<usize>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// TOML job file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureFile {
    pub panels: Option<usize>,
    pub order: Option<usize>,
    pub base_point: Option<[f64; 2]>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<FamilyTag>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub c: Option<f64>,
    pub conjugated: Option<bool>,
    pub display: Option<bool>,
    pub u_range: Option<[f64; 2]>,
    pub v_range: Option<[f64; 2]>,
    pub nu: Option<usize>,
    pub nv: Option<usize>,
    pub fd_step: Option<f64>,
    pub affine_step: Option<f64>,
    pub seed: Option<u64>,
    pub quadrature: Option<QuadratureFile>,
    pub tolerances: Option<Tolerances>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub deform: Option<DeformFile>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformFile {
    pub path: Option<DeformKind>,
    pub frames: Option<usize>,
    pub params: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeformKind {
    /// `α = r cos θ, β = r sin θ` with `θ` sweeping `(0, π/2)`.
    Polar,
    /// `β = α²/2` with `α` halved each frame.
    Tanh,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// The fully resolved job, echoed into reports. Output paths are not part of
/// the echo so that reports written to different files compare equal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobConfig {
    pub surface: FamilyKind,
    pub conjugated: bool,
    pub display: bool,
    pub grid: GridSpec,
    pub quadrature: QuadratureConfig,
    pub fd_step: f64,
    pub affine_step: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub report: Option<PathBuf>,
    /// The grid ranges came from flags or the file rather than family defaults.
    #[serde(skip)]
    pub explicit_ranges: bool,
    #[serde(skip)]
    pub explicit_base: bool,
}

fn kind_for(tag: FamilyTag, a: &CommonArgs, f: &FileConfig) -> FamilyKind {
    let alpha = a.alpha.or(f.alpha);
    let beta = a.beta.or(f.beta);
    match tag {
        FamilyTag::Plane => FamilyKind::Plane,
        FamilyTag::TrivialEnneper => FamilyKind::TrivialEnneper { c: a.c.or(f.c).unwrap_or(0.0) },
        FamilyTag::Catenoid | FamilyTag::Helicoid => FamilyKind::Catenoid { alpha: alpha.unwrap_or(1.0) },
        FamilyTag::EnneperType => FamilyKind::EnneperType { beta: beta.unwrap_or(2.0) },
        FamilyTag::BonnetType | FamilyTag::ThomsenType => FamilyKind::BonnetType {
            alpha: alpha.unwrap_or(1.0),
            beta: beta.unwrap_or(1.0),
        },
        FamilyTag::DeformTanh => FamilyKind::DeformTanh { alpha: alpha.unwrap_or(1.0) },
        FamilyTag::DeformPolar => FamilyKind::DeformPolar {
            r: a.r.or(f.r).unwrap_or(1.0),
            theta: a.theta.or(f.theta).unwrap_or(FRAC_PI_4),
        },
    }
}

impl JobConfig {
    /// Layers flags over the config file over defaults.
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Self::resolve_with(args, &file)
    }

    pub fn resolve_with(args: &CommonArgs, file: &FileConfig) -> Result<Self, CliError> {
        let tag = args.family.or(file.family).unwrap_or(FamilyTag::Catenoid);
        let kind = kind_for(tag, args, file);
        kind.validate()?;
        let conjugated = args.conjugated
            || file.conjugated.unwrap_or(false)
            || matches!(tag, FamilyTag::Helicoid | FamilyTag::ThomsenType);
        let display = args.display || file.display.unwrap_or(false);
        let mut family = Family::new(kind)?.with_display(display);
        if conjugated {
            family = family.conjugate();
        }

        let nu = args.nu.or(file.nu).unwrap_or(DEFAULT_SAMPLES);
        let nv = args.nv.or(file.nv).unwrap_or(DEFAULT_SAMPLES);
        let mut grid = GridSpec::default_for_family(&family, nu.max(2));
        let (ur, vr) = (args.u_range.or(file.u_range), args.v_range.or(file.v_range));
        if let Some([a, b]) = ur {
            (grid.u_min, grid.u_max) = (a, b);
        }
        if let Some([a, b]) = vr {
            (grid.v_min, grid.v_max) = (a, b);
        }
        (grid.nu, grid.nv) = (nu, nv);
        grid.validate()?;

        let qf = file.quadrature.clone().unwrap_or_default();
        let defaults = QuadratureConfig::default();
        let base = qf.base_point.map(|[re, im]| Complex64::new(re, im));
        let explicit_base = base.is_some();
        let base = base.unwrap_or_else(|| grid.center());
        let quadrature = QuadratureConfig {
            base_point: base,
            panels: args.panels.or(qf.panels).unwrap_or(defaults.panels),
            order: args.order.or(qf.order).unwrap_or(defaults.order),
        };
        quadrature.validate()?;

        let mut tolerances = file.tolerances.unwrap_or_default();
        args.tol.apply(&mut tolerances);

        let suite_defaults = SuiteConfig::on_grid(grid);
        let job = JobConfig {
            surface: kind,
            conjugated,
            display,
            grid,
            quadrature,
            fd_step: args.fd_step.or(file.fd_step).unwrap_or(suite_defaults.fd_step),
            affine_step: args.affine_step.or(file.affine_step).unwrap_or(suite_defaults.affine_step),
            seed: args.seed.or(file.seed).unwrap_or(suite_defaults.seed),
            tolerances,
            out: args.out.clone().or_else(|| file.out.clone()),
            report: args.report.clone().or_else(|| file.report.clone()),
            explicit_ranges: ur.is_some() || vr.is_some(),
            explicit_base,
        };
        job.suite_config().validate()?;
        Ok(job)
    }

    pub fn family(&self) -> Family {
        let f = Family {
            kind: self.surface,
            conjugated: false,
            reflected: false,
            display: self.display,
        };
        if self.conjugated {
            f.conjugate()
        } else {
            f
        }
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let mut cfg = SuiteConfig::on_grid(self.grid);
        cfg.tol = self.tolerances;
        cfg.fd_step = self.fd_step;
        cfg.affine_step = self.affine_step;
        cfg.quadrature = self.quadrature;
        cfg.seed = self.seed;
        cfg
    }

    /// The job on another grid; the base point follows the grid center unless
    /// it was set explicitly.
    pub fn on_grid(&self, grid: GridSpec) -> Self {
        let mut job = self.clone();
        job.grid = grid;
        if !self.explicit_base {
            job.quadrature.base_point = grid.center();
        }
        job
    }

    /// `grid` unless the user fixed the ranges, keeping the sample counts.
    pub fn default_grid_for(&self, f: &Family) -> GridSpec {
        if self.explicit_ranges {
            return self.grid;
        }
        let mut g = GridSpec::default_for_family(f, self.grid.nu);
        g.nv = self.grid.nv;
        g
    }

    pub fn require_out(&self) -> Result<&Path, CliError> {
        self.out.as_deref().ok_or_else(|| CliError::Usage("--out is required for this command".into()))
    }
}
