//! `tensegrity` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numeric failure (for example a
//! degenerate critical point), 4 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tensegrity_core::io::{self as docs, Document};
use tensegrity_core::morse::{self, MorseOptions};
use tensegrity_core::render::{self, significant, RenderOptions};
use tensegrity_core::{
    classical, forcelines, AssemblyMode, ClassicalFramework, Error, ErrorKind, Scene, StressBasis,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "tensegrity",
    version,
    about = "Self-stresses and force lines of point and function tensegrities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the dimension and a basis of the self-stress space, largest entry scaled to ±1.
    Selfstress(SelfstressArgs),
    /// Trace lines of forces for every edge and write them as CSV.
    Forcelines(ForcelinesArgs),
    /// Draw level sets, force lines, critical points and stresses as SVG.
    Render(RenderArgs),
    /// Replace each framework vertex by a paraboloid centred on it.
    Lift(LiftArgs),
}

#[derive(Debug, Args)]
struct SelfstressArgs {
    /// Scene or framework document.
    input: PathBuf,
    /// Classical point-framework equilibrium (input must be a framework).
    #[arg(long, conflicts_with = "morse")]
    classical: bool,
    /// Morse function equilibrium (default); frameworks are lifted to paraboloids.
    #[arg(long)]
    morse: bool,
    /// One condition per critical point instead of the index-signed sum.
    #[arg(long)]
    per_critical_point: bool,
    /// Relative singular-value cutoff for the numerical kernel.
    #[arg(long, default_value_t = classical::RANK_TOL)]
    tol: f64,
    /// Report classical stresses as tensions along unit edge vectors.
    #[arg(long, requires = "classical")]
    unit_vectors: bool,
}

#[derive(Debug, Args)]
struct ForcelinesArgs {
    input: PathBuf,
    #[arg(long, default_value_t = forcelines::DEFAULT_RESOLUTION)]
    grid: usize,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Level sets per function (default: scene setting, else 8).
    #[arg(long)]
    levels: Option<usize>,
    /// Grid resolution (default: scene setting, else 512).
    #[arg(long)]
    grid: Option<usize>,
    /// Label edges with the first self-stress basis vector.
    #[arg(long)]
    stress_labels: bool,
}

#[derive(Debug, Args)]
struct LiftArgs {
    /// Framework document.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.kind() == ErrorKind::Validation => EXIT_VALIDATION,
            Failure::Core(_) => EXIT_NUMERIC,
            Failure::Io(..) => EXIT_IO,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(path, e) => format!("{}: {e}", path.display()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the tool with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Selfstress(a) => selfstress(&a, stdout),
        Command::Forcelines(a) => forcelines_cmd(&a, stdout),
        Command::Render(a) => render_cmd(&a),
        Command::Lift(a) => lift(&a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, contents: &[u8]) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_scene(path: &Path) -> std::result::Result<Scene, Failure> {
    match docs::parse_document(&read(path)?)? {
        Document::Scene(s) => Ok(s),
        Document::Framework(fw) => Ok(morse::paraboloid_lift(&fw)?),
    }
}

fn write_basis(
    out: &mut dyn Write,
    graph: &tensegrity_core::Graph,
    basis: &StressBasis,
    fw: Option<&ClassicalFramework>,
) -> io::Result<()> {
    writeln!(out, "dimension: {}", basis.dimension())?;
    for (k, v) in basis.vectors.iter().enumerate() {
        let v = match fw {
            Some(fw) => v.to_unit_convention(fw),
            None => v.clone(),
        };
        let v = v.normalized_max();
        writeln!(out, "vector {}:", k + 1)?;
        for (e, w) in v.values.iter().enumerate() {
            writeln!(out, "  {}: {}", graph.edge_label(e), significant(*w, 12))?;
        }
    }
    Ok(())
}

fn io_out(e: io::Error) -> Failure {
    Failure::Io(PathBuf::from("<stdout>"), e)
}

fn selfstress(a: &SelfstressArgs, out: &mut dyn Write) -> Outcome {
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return Err(Error::Validation(format!("--tol must lie in (0, 1), got {}", a.tol)).into());
    }
    let doc = docs::parse_document(&read(&a.input)?)?;
    if a.classical {
        let fw = match doc {
            Document::Framework(fw) => fw,
            Document::Scene(_) => {
                return Err(
                    Error::Validation("--classical needs a framework document".into()).into(),
                )
            }
        };
        let basis = classical::self_stress_basis_with_tol(&fw, a.tol);
        writeln!(out, "mode: classical").map_err(io_out)?;
        let unit = a.unit_vectors.then_some(&fw);
        return write_basis(out, fw.graph(), &basis, unit).map_err(io_out);
    }

    let scene = match doc {
        Document::Scene(s) => s,
        Document::Framework(fw) => morse::paraboloid_lift(&fw)?,
    };
    let mode = if a.per_critical_point {
        AssemblyMode::PerCriticalPoint
    } else {
        AssemblyMode::Summed
    };
    let system = morse::assemble(&scene, mode)?;
    let basis = morse::self_stress_basis_with(
        &scene,
        &MorseOptions {
            mode,
            rank_tol: a.tol,
        },
    )?;
    let graph = scene.graph();
    let mode_name = match mode {
        AssemblyMode::Summed => "morse",
        AssemblyMode::PerCriticalPoint => "morse (per critical point)",
    };
    let mut report = || -> io::Result<()> {
        writeln!(out, "mode: {mode_name}")?;
        writeln!(out, "critical points:")?;
        for (v, set) in system.critical_sets.iter().enumerate() {
            for cp in set {
                writeln!(
                    out,
                    "  {}: ({}, {}) index {}",
                    graph.vertex_id(v),
                    significant(cp.location.x, 12),
                    significant(cp.location.y, 12),
                    cp.morse_index
                )?;
            }
        }
        write_basis(out, graph, &basis, None)
    };
    report().map_err(io_out)
}

fn forcelines_cmd(a: &ForcelinesArgs, stdout: &mut dyn Write) -> Outcome {
    let scene = load_scene(&a.input)?;
    let lines = forcelines::trace_force_lines(&scene, a.grid, None)?;
    let mut csv = Vec::new();
    docs::write_force_lines_csv(&mut csv, scene.graph(), &lines).map_err(io_out)?;
    match &a.out {
        Some(path) => write_file(path, &csv),
        None => stdout.write_all(&csv).map_err(io_out),
    }
}

fn render_cmd(a: &RenderArgs) -> Outcome {
    let scene = load_scene(&a.input)?;
    let defaults = RenderOptions::default();
    let opts = RenderOptions {
        levels: a
            .levels
            .or(scene.render.map(|r| r.levels))
            .unwrap_or(defaults.levels),
        grid: a
            .grid
            .or(scene.render.map(|r| r.grid))
            .unwrap_or(defaults.grid),
        stress_labels: a.stress_labels,
        ..defaults
    };
    if opts.levels == 0 {
        return Err(Error::Validation("--levels must be at least 1".into()).into());
    }
    let svg = render::render_svg(&scene, &opts)?;
    write_file(&a.out, svg.as_bytes())
}

fn lift(a: &LiftArgs) -> Outcome {
    let fw = docs::parse_framework(&read(&a.input)?)?;
    let scene = morse::paraboloid_lift(&fw)?;
    write_file(&a.out, docs::scene_to_json(&scene).as_bytes())
}
