use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use minkowski_lattice::configuration::{CriticalConfiguration, Tolerances};
use minkowski_lattice::direct::{lattice_chain, limit_membership, subgroup_index};
use minkowski_lattice::hexagon::{circumscribed_for, inscribed_for};
use minkowski_lattice::lattice::{admissibility_check, critical_lattice, CriticalLatticeKind};
use minkowski_lattice::moduli::oracle_min;
use minkowski_lattice::packing::{packing_report, verify_packing_lattice};
use minkowski_lattice::render::{render, RenderKind};
use minkowski_lattice::table::{format_sig17, sweep, write_sweep_csv, SweepOptions};
use minkowski_lattice::verify::{self, VerifyLevel, VerifyOptions};
use minkowski_lattice::{Error, Vec2};

mod output;

use output::Record;

#[derive(Parser, Debug)]
#[command(
    name = "minkowski",
    version,
    about = "Critical lattices, packings and extremal hexagons of planar L^p balls",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Exponent p ≥ 1 of the ball |x|^p + |y|^p ≤ 1.
    #[arg(long, global = true)]
    p: Option<f64>,

    /// Dilation level: the domain is 2^m · D_p.
    #[arg(long, global = true, default_value_t = 0)]
    m: u32,

    /// Residual tolerance for the scalar root finders.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Include the brute-force moduli oracle.
    #[arg(long, global = true)]
    oracle: bool,

    /// Grid size for the moduli oracle.
    #[arg(long, global = true, default_value_t = 1000)]
    grid: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// τ_p, σ_p, both determinant branches, the selected branch and the class of D_p.
    Constants,
    /// A critical lattice of 2^m · D_p with its admissibility check.
    Lattice {
        #[arg(long, value_enum, default_value_t = KindArg::Critical)]
        kind: KindArg,
    },
    /// Optimal lattice-packing density of 2^m · D_p.
    Density {
        /// Boundary samples for the non-overlap check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Inscribed and circumscribed hexagons at the critical contact points.
    Hexagons,
    /// Minimize the determinant over the moduli space and compare with the closed form.
    Oracle,
    /// Tabulate class, branch, determinant, density and hexagon areas over a p grid.
    Sweep {
        #[arg(long, default_value_t = 1.0)]
        p_min: f64,
        #[arg(long, default_value_t = 4.0)]
        p_max: f64,
        #[arg(long, default_value_t = 301)]
        steps: usize,
    },
    /// Write an SVG figure.
    Render {
        #[arg(long, value_enum)]
        what: WhatArg,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        /// Shift τ_p by this amount (the suite must then fail).
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_tau: f64,
    },
    /// Minimal containing level of a point in the chain D_p ⊂ 2D_p ⊂ 4D_p ⊂ …,
    /// and the chain of doubled critical lattices.
    Limits {
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Critical)]
        kind: KindArg,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Critical,
    Lambda0,
    Lambda1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum WhatArg {
    Packing,
    Hexagons,
    Moduli,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
enum Failure {
    Verification(String),
    Usage(String),
    Io(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Io(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::OrderViolation { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl Cli {
    fn p(&self) -> Result<f64, Failure> {
        let p = self.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
        if !(p.is_finite() && p >= 1.0) {
            return Err(Failure::Usage(format!("p must be ≥ 1 (got {p})")));
        }
        Ok(p)
    }

    fn tolerances(&self) -> Result<Tolerances, Failure> {
        let mut tol = Tolerances::default();
        if let Some(t) = self.tol {
            if t.is_nan() || t <= 0.0 {
                return Err(Failure::Usage(format!("--tol must be positive (got {t})")));
            }
            tol.root = t;
        }
        Ok(tol)
    }

    fn config(&self) -> Result<CriticalConfiguration, Failure> {
        Ok(CriticalConfiguration::with_tolerances(self.p()?, self.m, &self.tolerances()?)?)
    }

    fn out_path(&self) -> Result<&Path, Failure> {
        self.out.as_deref().ok_or_else(|| Failure::Usage("--out is required".into()))
    }

    fn emit(&self, record: &Record) -> Outcome {
        let text = match self.format {
            Format::Csv => record.to_csv(),
            Format::Text => record.to_text(),
        };
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn kind_for(arg: KindArg, config: &CriticalConfiguration) -> CriticalLatticeKind {
    match arg {
        KindArg::Critical => config.kind(),
        KindArg::Lambda0 => CriticalLatticeKind::Lambda0,
        KindArg::Lambda1 => CriticalLatticeKind::Lambda1,
    }
}

fn cmd_constants(cli: &Cli) -> Outcome {
    let config = cli.config()?;
    let c = config.constants;
    let mut r = Record::new();
    r.num("p", c.p)
        .num("tau_p", c.tau_p)
        .num("sigma_p", c.sigma_p)
        .num("delta0", c.delta0)
        .num("delta1", c.delta1)
        .text("branch", config.branch.name())
        .num("delta", config.critical_determinant)
        .text("class", config.class.name())
        .num("davis_constant", config.davis_constant);
    cli.emit(&r)
}

fn cmd_lattice(cli: &Cli, kind: KindArg) -> Outcome {
    let config = cli.config()?;
    let kind = kind_for(kind, &config);
    let lattice = critical_lattice(config.spec.p(), kind, config.spec.m(), &config.constants)?;
    let adm = admissibility_check(&lattice, &config.spec, cli.tolerances()?.contact)?;
    let base = critical_lattice(config.spec.p(), kind, 0, &config.constants)?;
    let mut r = Record::new();
    r.num("p", config.spec.p())
        .int("m", config.spec.m() as i64)
        .text("kind", kind.name())
        .num("a_x", lattice.a().x)
        .num("a_y", lattice.a().y)
        .num("b_x", lattice.b().x)
        .num("b_y", lattice.b().y)
        .num("det", lattice.det())
        .num("index_in_level0", subgroup_index(&lattice, &base))
        .flag("admissible", adm.is_admissible)
        .int("boundary_pairs", adm.boundary_pairs as i64)
        .num("min_power_sum", adm.min_power_sum);
    cli.emit(&r)
}

fn cmd_density(cli: &Cli, samples: usize) -> Outcome {
    let config = cli.config()?;
    let tol = cli.tolerances()?;
    let report = packing_report(&config, &tol)?;
    let nonoverlap = verify_packing_lattice(&report.lattice, &config.spec, samples, tol.contact)?;
    let mut r = Record::new();
    r.num("p", config.spec.p())
        .int("m", config.spec.m() as i64)
        .text("class", report.class.name())
        .text("branch", report.branch.name())
        .num("delta", report.critical_determinant)
        .num("area", report.area)
        .num("packing_det", report.lattice.det())
        .num("density", report.density)
        .flag("admissible", report.verified_admissible)
        .int("boundary_pairs", report.boundary_pairs as i64)
        .flag("nonoverlap", nonoverlap);
    cli.emit(&r)
}

fn cmd_hexagons(cli: &Cli) -> Outcome {
    let config = cli.config()?;
    let p = config.spec.p();
    let delta = config.critical_determinant;
    let ins = inscribed_for(&config.lattice);
    let mut r = Record::new();
    r.num("p", p).int("m", config.spec.m() as i64).num("delta", delta);
    for (i, v) in ins.vertices.iter().enumerate() {
        r.point(&format!("inscribed_{i}"), *v);
    }
    r.num("inscribed_area", ins.area).num("three_delta", 3.0 * delta);
    if p > 1.0 {
        let circ = circumscribed_for(p, &config.lattice)?;
        for (i, v) in circ.vertices.iter().enumerate() {
            r.point(&format!("circumscribed_{i}"), *v);
        }
        r.num("circumscribed_area", circ.area).num("ratio", circ.area / ins.area);
    } else {
        r.text("circumscribed_area", "undefined at p = 1 (tangents not unique); formula value below");
    }
    r.num("four_delta", 4.0 * delta);
    cli.emit(&r)
}

fn cmd_oracle(cli: &Cli) -> Outcome {
    let config = cli.config()?;
    let p = config.spec.p();
    let o = oracle_min(p, cli.grid)?;
    let scale = 4f64.powi(config.spec.m() as i32);
    let mut r = Record::new();
    r.num("p", p)
        .int("grid", cli.grid as i64)
        .num("sigma_star", o.sigma_star)
        .num("tau_star", o.tau_star)
        .num("oracle_delta", scale * o.delta_star)
        .num("delta", config.critical_determinant)
        .num("oracle_gap", scale * o.delta_star - config.critical_determinant)
        .text("branch", config.branch.name())
        .text("oracle_endpoint", o.endpoint_branch().map(|b| b.name()).unwrap_or("interior/ambiguous"));
    cli.emit(&r)
}

fn cmd_sweep(cli: &Cli, p_min: f64, p_max: f64, steps: usize) -> Outcome {
    let out = cli.out_path()?;
    let mut opts = SweepOptions::new(p_min, p_max, steps);
    opts.m = cli.m;
    opts.tolerances = cli.tolerances()?;
    opts.oracle_grid = cli.oracle.then_some(cli.grid);
    let rows = sweep(&opts)?;
    let file = fs::File::create(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    write_sweep_csv(&rows, std::io::BufWriter::new(file))
        .map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    if let Some(gap) = rows
        .iter()
        .filter_map(|r| r.oracle_gap)
        .map(f64::abs)
        .reduce(f64::max)
    {
        eprintln!("max |oracle_gap| = {}", format_sig17(gap));
    }
    Ok(())
}

fn cmd_render(cli: &Cli, what: WhatArg) -> Outcome {
    let out = cli.out_path()?;
    let kind = match what {
        WhatArg::Packing => RenderKind::Packing,
        WhatArg::Hexagons => RenderKind::Hexagons,
        WhatArg::Moduli => RenderKind::Moduli,
    };
    let svg = render(kind, cli.p()?, cli.m)?;
    fs::write(out, svg).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))
}

fn cmd_verify(cli: &Cli, level: LevelArg, perturb_tau: f64) -> Outcome {
    let mut opts = VerifyOptions::new(match level {
        LevelArg::Fast => VerifyLevel::Fast,
        LevelArg::Full => VerifyLevel::Full,
    });
    opts.tolerances = cli.tolerances()?;
    opts.tau_perturbation = perturb_tau;
    let report = verify::run(&opts);
    let text = report.to_text();
    match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(Failure::Verification(format!("failed checks: {}", names.join(", "))))
    }
}

fn cmd_limits(cli: &Cli, x: f64, y: f64, depth: u32, kind: KindArg) -> Outcome {
    let p = cli.p()?;
    let membership = limit_membership(p, Vec2::new(x, y))?;
    let config = CriticalConfiguration::with_tolerances(p, 0, &cli.tolerances()?)?;
    let kind = kind_for(kind, &config);
    let chain = lattice_chain(p, kind, depth, &config.constants)?;
    let mut r = Record::new();
    r.num("p", p)
        .point("point", Vec2::new(x, y))
        .flag("member", membership.member)
        .int("level", membership.level as i64)
        .text("kind", kind.name());
    for (m, basis) in chain.iter().enumerate() {
        r.num(&format!("det_level{m}"), basis.det());
        if m > 0 {
            r.num(&format!("index_level{m}"), subgroup_index(basis, &chain[m - 1]));
        }
    }
    cli.emit(&r)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Constants => cmd_constants(cli),
        Command::Lattice { kind } => cmd_lattice(cli, *kind),
        Command::Density { samples } => cmd_density(cli, *samples),
        Command::Hexagons => cmd_hexagons(cli),
        Command::Oracle => cmd_oracle(cli),
        Command::Sweep { p_min, p_max, steps } => cmd_sweep(cli, *p_min, *p_max, *steps),
        Command::Render { what } => cmd_render(cli, *what),
        Command::Verify { level, perturb_tau } => cmd_verify(cli, *level, *perturb_tau),
        Command::Limits { x, y, depth, kind } => cmd_limits(cli, *x, *y, *depth, *kind),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            log::debug!("exit code {}", f.code());
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
