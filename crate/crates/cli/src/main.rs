use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropmech::config::{symmetry_group, ConfigKind, GroupKind, PointConfiguration};
use tropmech::error::Error;
use tropmech::io::Json;
use tropmech::mechanism::{
    affine_indifference_complex, construct_cardinality_robust, construct_hamming_robust, construct_multiplayer_robust,
    lineality_reduce, multiplayer_cardinality_sensitivity, utility_polynomial, AffineMaximizer, Mechanism,
};
use tropmech::render::{render_affine, render_polynomial, RenderSpec, RenderTarget, Viewport};
use tropmech::report::analyze;
use tropmech::scalar::format_rational;
use tropmech::subdivision::{enumerate_triangulations, is_regular, EnumerationOptions, Subdivision};
use tropmech::tropical::TropicalPolynomial;

#[derive(Parser)]
#[command(name = "tropmech", version, about = "Exact analysis of truthful auction mechanisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orbits {
    None,
    Sym,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cardinality,
    Hamming,
    Multiplayer,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    DifferenceSets,
    DualSubdivision,
    TightSpan,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a mechanism file and write a JSON report.
    Analyze {
        mechanism: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the difference sets (two-item mechanisms only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Count triangulations of a configuration such as cube:3 or simplexprod:3x2.
    Enumerate {
        config: String,
        #[arg(long)]
        regular_only: bool,
        #[arg(long, value_enum, default_value = "none")]
        orbits: Orbits,
        #[arg(long)]
        long_running: bool,
        /// Shuffle the internal search order; the output does not change.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide regularity of a subdivision file.
    Check {
        subdivision: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a robust mechanism or affine maximizer.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        items: usize,
        #[arg(long, default_value_t = 2)]
        players: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze an affine maximizer file.
    Affine {
        maximizer: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a mechanism, polynomial or affine maximizer file as SVG.
    Render {
        input: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// xmin,xmax,ymin,ymax
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeGuard(_) => 4,
        Error::RenderDimension(_) => 5,
        Error::Invariant(_) | Error::NonRegular | Error::DegenerateConfiguration(_) => 3,
        _ => 2,
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Parse(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn group_kind(config: &PointConfiguration, orbits: Orbits) -> Result<Option<GroupKind>, Error> {
    Ok(match (orbits, config.kind()) {
        (Orbits::None, _) => None,
        (Orbits::Sym, ConfigKind::Cube { .. }) => Some(GroupKind::ItemPermutations),
        (Orbits::Full, ConfigKind::Cube { .. }) => Some(GroupKind::FullCube),
        (Orbits::Sym, ConfigKind::SimplexProduct { .. }) => Some(GroupKind::PlayerItem),
        (Orbits::Full, ConfigKind::SimplexProduct { .. }) => Some(GroupKind::ProductAutomorphisms),
        _ => return Err(Error::IncompatibleGroup(format!("no such orbit option for {config}"))),
    })
}

fn enumerate(
    config: &str,
    regular_only: bool,
    orbits: Orbits,
    long_running: bool,
    seed: Option<u64>,
) -> Result<String, Error> {
    let config = Arc::new(config.parse::<PointConfiguration>()?);
    let group = group_kind(&config, orbits)?.map(|k| symmetry_group(&config, k)).transpose()?;
    let opts = EnumerationOptions { regular_only, group: group.as_ref(), long_running, shuffle_seed: seed };
    let e = enumerate_triangulations(&config, &opts)?;
    let orbit_name = match orbits {
        Orbits::None => "none",
        Orbits::Sym => "sym",
        Orbits::Full => "full",
    };
    let reps: Vec<Value> =
        e.representatives.iter().map(|s| json!(s.cells().iter().map(|c| c.indices()).collect::<Vec<_>>())).collect();
    Ok(pretty(&json!({
        "config": config.to_string(),
        "regular_only": regular_only,
        "orbits": orbit_name,
        "triangulations": e.triangulations,
        "regular": e.regular,
        "count": e.count,
        "orbit_sizes": e.orbit_sizes,
        "representatives": reps,
    })))
}

fn affine_report(am: &AffineMaximizer) -> Result<String, Error> {
    let sub = am.subdivision()?;
    let complex = affine_indifference_complex(am)?;
    let red = lineality_reduce(am)?;
    Ok(pretty(&json!({
        "players": am.players(),
        "items": am.items(),
        "facets": complex.facet_labels(),
        "nondegenerate": sub.is_triangulation()?,
        "cardinality_sensitivity": multiplayer_cardinality_sensitivity(&sub)?,
        "lineality_direction": red.direction.iter().map(format_rational).collect::<Vec<_>>(),
    })))
}

fn render(input: &Path, spec: &RenderSpec) -> Result<String, Error> {
    let v = read_json(input)?;
    if v.get("payments").is_some() {
        let m = Mechanism::from_json(&v)?;
        let labels: Vec<String> = (0..1 << m.items()).map(|a| m.bundle_label(a)).collect();
        render_polynomial(&utility_polynomial(&m), &labels, spec)
    } else if v.get("biases").is_some() {
        render_affine(&AffineMaximizer::from_json(&v)?, spec)
    } else {
        let p = TropicalPolynomial::from_json(&v)?;
        let labels: Vec<String> = p
            .support()
            .iter()
            .map(|u| format!("({})", u.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        render_polynomial(&p, &labels, spec)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze { mechanism, out, svg } => {
            let m = Mechanism::from_json(&read_json(&mechanism)?)?;
            let report = analyze(&m)?;
            emit(out.as_deref(), &report.to_json_string())?;
            if let Some(path) = svg {
                let labels: Vec<String> = (0..1 << m.items()).map(|a| m.bundle_label(a)).collect();
                let doc =
                    render_polynomial(&utility_polynomial(&m), &labels, &RenderSpec::new(RenderTarget::DifferenceSets))?;
                emit(Some(&path), &doc)?;
            }
            let problems = report.problems();
            if !problems.is_empty() {
                return Err(Error::Invariant(problems.join("; ")));
            }
            Ok(())
        }
        Command::Enumerate { config, regular_only, orbits, long_running, seed, out } => {
            emit(out.as_deref(), &enumerate(&config, regular_only, orbits, long_running, seed)?)
        }
        Command::Check { subdivision, out } => {
            let sub = Subdivision::from_json(&read_json(&subdivision)?)?;
            let r = is_regular(&sub)?;
            let witness = r.witness.map(|w| w.to_json()).unwrap_or(Value::Null);
            emit(out.as_deref(), &pretty(&json!({ "regular": r.regular, "witness": witness })))
        }
        Command::Construct { kind, items, players, out } => {
            let text = match kind {
                Kind::Cardinality => construct_cardinality_robust(items)?.to_json_string(),
                Kind::Hamming => construct_hamming_robust(items)?.mechanism.to_json_string(),
                Kind::Multiplayer => construct_multiplayer_robust(players, items)?.to_json_string(),
            };
            emit(out.as_deref(), &text)
        }
        Command::Affine { maximizer, out } => {
            let am = AffineMaximizer::from_json(&read_json(&maximizer)?)?;
            emit(out.as_deref(), &affine_report(&am)?)
        }
        Command::Render { input, target, viewport, no_labels, out } => {
            let target = match target {
                Target::DifferenceSets => RenderTarget::DifferenceSets,
                Target::DualSubdivision => RenderTarget::DualSubdivision,
                Target::TightSpan => RenderTarget::TightSpan,
            };
            let mut spec = RenderSpec::new(target);
            spec.viewport = viewport.as_deref().map(Viewport::parse).transpose()?;
            spec.labels = !no_labels;
            emit(out.as_deref(), &render(&input, &spec)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
