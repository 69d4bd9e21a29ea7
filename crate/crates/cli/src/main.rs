use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};

use jnr_core::fixtures::TripleFile;
use jnr_core::geometry::direction::jittered_sphere;
use jnr_core::geometry::mesh::{sample_with, BoundaryMesh};
use jnr_core::geometry::oracle::{oracle_by_name, oracle_names};
use jnr_core::report::{classify_report, separable_report, separable_sweep, spectrum_report, Report, Status};
use jnr_core::verify::{run_checks, VerifySummary};
use jnr_core::Settings;

/// Flat faces, corner points and separable ranges of hermitian matrix triples.
#[derive(Debug, Parser)]
#[command(name = "jnr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank-one tuples, face shapes, class signature and corner points.
    Classify {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// OBJ mesh of the boundary; with --sep also the separable range and a
    /// per-direction gap table.
    Boundary {
        input: PathBuf,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(4..))]
        dirs: u32,
        /// Also sample the separable range (4×4 input only).
        #[arg(long)]
        sep: bool,
        /// Support oracle for the main mesh.
        #[arg(long, default_value = "jnr")]
        oracle: String,
        #[command(flatten)]
        common: Common,
    },
    /// See-saw and PPT supports, product states on the flat faces, and flat
    /// patches of the separable boundary.
    Separable {
        input: PathBuf,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(4..))]
        dirs: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Joint eigenvalues with corner verdicts.
    Spectrum {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the built-in examples against their documented verdicts.
    VerifyPaper {
        /// Restrict to these example ids or check names (repeatable).
        #[arg(long)]
        only: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Base seed of every randomized step.
    #[arg(long)]
    seed: Option<u64>,
    /// Single value for the detection tolerances.
    #[arg(long)]
    tol: Option<f64>,
    /// See-saw restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// Output file (report JSON, or the OBJ mesh for `boundary`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report on stdout.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                bail!("--tol must be a positive number");
            }
            s = s.with_detection_tol(tol);
        }
        if let Some(r) = self.restarts {
            if r == 0 {
                bail!("--restarts must be at least 1");
            }
            s.seesaw_restarts = r;
        }
        Ok(s)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        // Input problems exit with 1; other outcomes carry their own code.
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("JNR_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().with_context(|| format!("JNR_THREADS={v:?} is not a thread count"))?;
    if n == 0 {
        bail!("JNR_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn read_input(path: &Path) -> Result<TripleFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = TripleFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    // Validate shape and hermiticity up front so that every command reports
    // malformed input the same way.
    file.to_triple().with_context(|| format!("invalid triple in {}", path.display()))?;
    Ok(file)
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Classify { input, common } => {
            let file = read_input(&input)?;
            let r = classify_report(&file, &common.settings()?)?;
            emit_report(&r, &common, summarize_classify)
        }
        Command::Spectrum { input, common } => {
            let file = read_input(&input)?;
            let r = spectrum_report(&file, &common.settings()?)?;
            emit_report(&r, &common, summarize_spectrum)
        }
        Command::Separable { input, dirs, common } => {
            let file = read_input(&input)?;
            let r = separable_report(&file, dirs as usize, true, &common.settings()?)?;
            emit_report(&r, &common, summarize_separable)
        }
        Command::Boundary {
            input,
            dirs,
            sep,
            oracle,
            common,
        } => boundary(&input, dirs as usize, sep, &oracle, &common),
        Command::VerifyPaper { only, common } => {
            let summary = run_checks(&common.settings()?, &only);
            if summary.outcomes.is_empty() {
                return Err(anyhow::anyhow!("--only matched no example or check"));
            }
            let text = if common.json {
                let mut s = serde_json::to_string_pretty(&summary)?;
                s.push('\n');
                s
            } else {
                summarize_verify(&summary)
            };
            print!("{text}");
            if let Some(out) = &common.out {
                let mut s = serde_json::to_string_pretty(&summary)?;
                s.push('\n');
                write_file(out, &s)?;
            }
            Ok(if summary.all_pass() { 0 } else { 2 })
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit_report(r: &Report, common: &Common, summary: fn(&Report) -> String) -> Result<u8> {
    let json = r.to_json();
    if let Some(out) = &common.out {
        write_file(out, &json)?;
    }
    if common.json {
        print!("{json}");
    } else {
        print!("{}", summary(r));
        for e in &r.events {
            println!("{:?} [{}]: {}", e.kind, e.claim, e.message);
        }
    }
    Ok(r.status.exit_code() as u8)
}

/// Six decimals without negative zeros.
fn fx(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn fmt3(p: &[f64; 3]) -> String {
    format!("({}, {}, {})", fx(p[0]), fx(p[1]), fx(p[2]))
}

fn summarize_classify(r: &Report) -> String {
    let mut s = String::new();
    if r.status == Status::Degenerate {
        let _ = writeln!(s, "degenerate: range dimension {}", r.range_dimension.unwrap_or(0));
        return s;
    }
    let tuples = r.rank1_tuples.as_deref().unwrap_or_default();
    let _ = writeln!(s, "rank-one tuples: {}", tuples.len());
    for t in tuples {
        let _ = writeln!(s, "  ({}, {}, {}, {})", fx(t[0]), fx(t[1]), fx(t[2]), fx(t[3]));
    }
    for f in r.faces.as_deref().unwrap_or_default() {
        let _ = writeln!(s, "face rank {} dim {} {:<8} direction {}", f.rank, f.dim, f.shape, fmt3(f.direction.u()));
    }
    if let Some(c) = r.counts {
        let _ = writeln!(s, "counts (oval, loaf, droplet, triangle): {c:?}");
    }
    match r.signature {
        Some(sig) => {
            let _ = writeln!(s, "class {}", sig.class_index);
        }
        None => {
            let _ = writeln!(s, "class: none");
        }
    }
    s.push_str(&summarize_spectrum(r));
    s
}

fn summarize_spectrum(r: &Report) -> String {
    let mut s = String::new();
    if r.command == "spectrum" && r.status == Status::Degenerate {
        let _ = writeln!(s, "degenerate: range dimension {}", r.range_dimension.unwrap_or(0));
    }
    for e in r.joint_spectrum.as_deref().unwrap_or_default() {
        let _ = writeln!(
            s,
            "joint eigenvalue {} dim {}: {} (normal cone rank {})",
            fmt3(&e.lambda),
            e.eigenspace_dim,
            if e.is_corner { "corner" } else { "not a corner" },
            e.normal_cone_dim
        );
    }
    s
}

fn summarize_separable(r: &Report) -> String {
    let mut s = String::new();
    let Some(sep) = &r.separable else {
        let _ = writeln!(s, "degenerate: range dimension {}", r.range_dimension.unwrap_or(0));
        return s;
    };
    let _ = writeln!(s, "directions: {} ({} failed)", sep.directions.len(), sep.failed_directions.len());
    let _ = writeln!(s, "max gap to W: {:.3e}", sep.max_gap);
    let _ = writeln!(s, "max |seesaw - ppt|: {:.3e}", sep.max_seesaw_ppt_difference);
    let _ = writeln!(
        s,
        "flat faces holding a product state: {}/{}",
        sep.tangency.faces.iter().filter(|f| f.pass).count(),
        sep.tangency.faces.len()
    );
    if let Some(regions) = &sep.flat_regions {
        let _ = writeln!(s, "flagged flat regions: {}", regions.len());
    }
    s
}

fn summarize_verify(v: &VerifySummary) -> String {
    let mut s = String::new();
    if !v.table.is_empty() {
        let _ = writeln!(s, "{:<8} {:<14} {:<14} {:>5}  result", "example", "expected", "computed", "class");
        for row in &v.table {
            let e = row.expected;
            let c = row
                .computed
                .map_or_else(|| "-".to_string(), |c| format!("({},{},{},{})", c[0], c[1], c[2], c[3]));
            let _ = writeln!(
                s,
                "{:<8} {:<14} {:<14} {:>5}  {}",
                row.example,
                format!("({},{},{},{})", e[0], e[1], e[2], e[3]),
                c,
                row.class_index,
                if row.pass { "ok" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(s, "{}/{} classes reproduced", v.classes_reproduced, v.classes_checked);
    }
    for o in &v.outcomes {
        let verdict = match (o.pass, o.gating) {
            (_, false) => "info",
            (true, true) => "pass",
            (false, true) => "FAIL",
        };
        let _ = writeln!(s, "{verdict} {:<22} {:<22} {}", o.check, o.example, o.detail);
    }
    if v.all_pass() {
        let _ = writeln!(s, "all checks passed");
    } else {
        let _ = writeln!(s, "failing: {}", v.failing.join(" "));
    }
    s
}

fn boundary(input: &Path, dirs: usize, sep: bool, oracle: &str, common: &Common) -> Result<u8> {
    let file = read_input(input)?;
    let triple = file.to_triple()?;
    let settings = common.settings()?;
    let Some(oracle) = oracle_by_name(oracle) else {
        return Err(anyhow::anyhow!("unknown oracle {oracle:?}; available: {}", oracle_names().join(", ")));
    };
    if (sep || oracle.name() != "jnr") && triple.n() != 4 {
        return Err(anyhow::anyhow!("separable sampling needs 4×4 matrices, got {}×{}", triple.n(), triple.n()));
    }
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("mesh.obj"));
    let (mesh, _) = sample_with(oracle.as_ref(), &triple, dirs, settings.seed, &settings)?;
    write_file(&out, &mesh.to_obj())?;
    println!("{}: {} vertices, {} triangles", out.display(), mesh.vertices.len(), mesh.triangles.len());
    if sep {
        let lattice = jittered_sphere(dirs, settings.seed);
        let (rows, failed) = separable_sweep(&triple, &lattice, &settings);
        for i in &failed {
            log::warn!("separable support failed at direction {i}");
        }
        let pts: Vec<[f64; 3]> = rows.iter().map(|r| r.ppt_point).collect();
        let sep_mesh = BoundaryMesh::from_points(&pts, &settings);
        let sep_path = sibling(&out, "sep", "obj");
        write_file(&sep_path, &sep_mesh.to_obj())?;
        let mut csv = String::from("u1,u2,u3,w_support,sep_support,gap\n");
        for r in &rows {
            let u = r.direction.u();
            let _ = writeln!(csv, "{:e},{:e},{:e},{:e},{:e},{:e}", u[0], u[1], u[2], r.w_support, r.ppt, r.ppt - r.w_support);
        }
        let csv_path = sibling(&out, "gap", "csv");
        write_file(&csv_path, &csv)?;
        println!(
            "{}: {} vertices, {} triangles",
            sep_path.display(),
            sep_mesh.vertices.len(),
            sep_mesh.triangles.len()
        );
        println!("{}: {} directions", csv_path.display(), rows.len());
    }
    Ok(if mesh.degenerate { 3 } else { 0 })
}

/// `dir/stem.obj` → `dir/stem-tag.ext`.
fn sibling(path: &Path, tag: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "mesh".into());
    path.with_file_name(format!("{stem}-{tag}.{ext}"))
}
