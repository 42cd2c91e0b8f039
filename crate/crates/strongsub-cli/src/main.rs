//! Command-line front end: parse digraphs, run the solvers, generators
//! and verification suites, and emit text or JSON certificates.
//!
//! Exit codes: 0 success, 1 usage error or failed verification, 2 input
//! parse/validation error, 3 resource limit reached.

mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use strongsub::{
    classify_three_arc_deletions, compute_f_f_upper, hamiltonian_decomposition,
    is_minimally_connected, kappa_k, kappa_s, parse_dg, vertex_connectivity, Digraph,
    ExtremalTable, FamilySpec, KappaCache, LabError, SearchSpace, SolverConfig, SolverError,
    TreeShape, VertexSet,
};

/// Seed used when neither the flag nor the environment provides one.
const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(
    name = "strongsub",
    version,
    about = "Exact strong subgraph connectivity lab for small digraphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format (env: STRONGSUB_FORMAT)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for all randomized corpora (env: STRONGSUB_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Wall-clock budget in milliseconds (env: STRONGSUB_TIMEOUT_MS)
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
    /// Worker thread count (env: STRONGSUB_JOBS)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the result here instead of stdout (env: STRONGSUB_OUTPUT)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Add wall-clock timings to the output (not byte-reproducible)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    All,
    Complement,
    Sampled,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a digraph from a named family and print it as .dg
    Gen {
        /// Family: complete | cycle | complete-minus-3cycle |
        /// complete-minus-2cycle-matching | symmetric-join |
        /// union-ham-cycles | symmetric-tree | random-strong
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        /// Arc probability for random-strong
        #[arg(long)]
        p: Option<f64>,
        /// Tree shape for symmetric-tree: path | star | random
        #[arg(long)]
        shape: Option<String>,
        /// Emit DOT instead of .dg
        #[arg(long)]
        dot: bool,
    },
    /// Strong vertex connectivity of a .dg digraph, with a cut witness
    Kappa { input: PathBuf },
    /// Maximum internally disjoint strong subgraphs through a terminal set
    KappaS {
        input: PathBuf,
        /// Terminal vertices, comma separated (example: --s 0,3)
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
    },
    /// Strong subgraph k-connectivity with certificate
    KappaK {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Minimality report for (k, ell)
    MinCheck {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Search for a Hamiltonian decomposition of the complete digraph
    HamDecomp { n: usize },
    /// Extremal arc-count table f/F with member digraphs
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value = "complement")]
        space: SpaceArg,
        /// Emit the CSV row instead of text/JSON
        #[arg(long)]
        csv: bool,
    },
    /// Classify 3-arc deletion sets of the complete digraph
    Classify {
        #[arg(long)]
        n: usize,
    },
    /// Run a named verification suite
    Verify {
        /// One of: eq1 thm03 thmb tillson thm02 lem1 thmc thme thma fprop
        suite: String,
        /// Order override for suites that take one
        #[arg(long)]
        n: Option<usize>,
    },
}

enum CliError {
    Usage(String),
    Input(String),
    Resource(String),
    SuiteFailed,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::SuiteFailed => 1,
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::Timeout { .. } | SolverError::CandidateLimit { .. } => {
            CliError::Resource(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

fn lab_error(e: LabError) -> CliError {
    match e {
        LabError::Scale { .. } => CliError::Resource(e.to_string()),
        LabError::Solver(inner) => solver_error(inner),
        other => CliError::Input(other.to_string()),
    }
}

fn env_override<T: std::str::FromStr>(name: &str) -> Result<Option<T>, CliError> {
    match std::env::var(name) {
        Ok(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("bad value in ${name}: {raw:?}"))),
        Err(_) => Ok(None),
    }
}

struct Settings {
    format: Format,
    seed: u64,
    cfg: SolverConfig,
    output: Option<PathBuf>,
    timings: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            match &e {
                CliError::Usage(msg) | CliError::Input(msg) | CliError::Resource(msg) => {
                    eprintln!("error: {msg}");
                }
                CliError::SuiteFailed => {}
            }
            std::process::exit(e.code());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = match cli.format {
        Some(f) => f,
        None => match env_override::<String>("STRONGSUB_FORMAT")? {
            Some(ref s) if s == "json" => Format::Json,
            Some(ref s) if s == "text" => Format::Text,
            Some(s) => return Err(CliError::Usage(format!("bad $STRONGSUB_FORMAT: {s:?}"))),
            None => Format::Text,
        },
    };
    let seed = cli
        .seed
        .or(env_override("STRONGSUB_SEED")?)
        .unwrap_or(DEFAULT_SEED);
    let timeout_ms: Option<u64> = cli.timeout_ms.or(env_override("STRONGSUB_TIMEOUT_MS")?);
    let jobs: Option<usize> = cli.jobs.or(env_override("STRONGSUB_JOBS")?);
    let output = cli.output.or(env_override("STRONGSUB_OUTPUT")?);

    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }

    let cfg = SolverConfig {
        timeout: timeout_ms.map(std::time::Duration::from_millis),
        ..SolverConfig::default()
    };
    let settings = Settings {
        format,
        seed,
        cfg,
        output,
        timings: cli.timings,
    };
    dispatch(cli.cmd, &settings)
}

fn emit(settings: &Settings, text: String) -> Result<(), CliError> {
    match &settings.output {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| CliError::Input(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}

fn emit_json<T: Serialize>(settings: &Settings, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialize: {e}")))?;
    emit(settings, format!("{text}\n"))
}

fn load_digraph(path: &PathBuf) -> Result<Digraph, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?;
    parse_dg(&raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Appends `elapsed_ms` to a JSON object when timings were requested.
fn with_timing(value: serde_json::Value, started: Instant, timings: bool) -> serde_json::Value {
    if !timings {
        return value;
    }
    let mut value = value;
    if let Some(map) = value.as_object_mut() {
        map.insert(
            "elapsed_ms".into(),
            json!(started.elapsed().as_millis() as u64),
        );
    }
    value
}

fn dispatch(cmd: Cmd, settings: &Settings) -> Result<(), CliError> {
    match cmd {
        Cmd::Gen {
            family,
            n,
            k,
            ell,
            p,
            shape,
            dot,
        } => {
            let spec = parse_family(&family, n, k, ell, p, shape, settings.seed)?;
            let d = spec
                .generate()
                .map_err(|e| CliError::Input(e.to_string()))?;
            emit(settings, if dot { d.to_dot() } else { d.to_dg_string() })
        }
        Cmd::Kappa { input } => {
            let d = load_digraph(&input)?;
            let started = Instant::now();
            let (value, cert) = vertex_connectivity(&d);
            match settings.format {
                Format::Json => {
                    let body = with_timing(
                        serde_json::to_value(serde_json::json!({
                            "kappa": value,
                            "certificate": cert,
                        }))
                        .unwrap(),
                        started,
                        settings.timings,
                    );
                    emit_json(settings, &body)
                }
                Format::Text => {
                    let mut out = format!("kappa = {value}\n");
                    match cert.separated_pair {
                        Some((u, v)) => {
                            out.push_str(&format!("cut {:?} separates {u} from {v}\n", cert.cut))
                        }
                        None => out.push_str("complete digraph, no non-adjacent pair\n"),
                    }
                    emit(settings, out)
                }
            }
        }
        Cmd::KappaS { input, s } => {
            let d = load_digraph(&input)?;
            let s = VertexSet::new(s).map_err(|e| CliError::Input(e.to_string()))?;
            let started = Instant::now();
            let result = kappa_s(&d, &s, &settings.cfg).map_err(solver_error)?;
            emit_kappa_result(settings, &result, started)
        }
        Cmd::KappaK { input, k } => {
            let d = load_digraph(&input)?;
            let started = Instant::now();
            let result = kappa_k(&d, k, &settings.cfg).map_err(solver_error)?;
            emit_kappa_result(settings, &result, started)
        }
        Cmd::MinCheck { input, k, ell } => {
            let d = load_digraph(&input)?;
            let started = Instant::now();
            let report = is_minimally_connected(&d, k, ell, &settings.cfg).map_err(solver_error)?;
            match settings.format {
                Format::Json => {
                    let body = with_timing(
                        serde_json::to_value(&report).unwrap(),
                        started,
                        settings.timings,
                    );
                    emit_json(settings, &body)
                }
                Format::Text => {
                    let mut out = format!(
                        "kappa_{}(D) = {} (target ell = {})\n",
                        report.k, report.kappa_k_value, report.ell
                    );
                    for p in &report.per_arc {
                        out.push_str(&format!(
                            "  delete ({}, {}) -> {}\n",
                            p.arc.0, p.arc.1, p.kappa
                        ));
                    }
                    out.push_str(&format!("verdict: {:?}\n", report.verdict));
                    emit(settings, out)
                }
            }
        }
        Cmd::HamDecomp { n } => {
            let result =
                hamiltonian_decomposition(n).map_err(|e| CliError::Input(e.to_string()))?;
            match settings.format {
                Format::Json => {
                    let body = match &result {
                        Some(d) => json!({"n": n, "exists": true, "cycles": d.cycles}),
                        None => json!({"n": n, "exists": false, "proof": "exhaustive"}),
                    };
                    emit_json(settings, &body)
                }
                Format::Text => match &result {
                    Some(d) => {
                        let mut out =
                            format!("{} arc-disjoint Hamiltonian cycles of K{}:\n", n - 1, n);
                        for seq in d.vertex_sequences() {
                            out.push_str(&format!(
                                "  {}\n",
                                seq.iter()
                                    .map(|v| v.to_string())
                                    .collect::<Vec<_>>()
                                    .join(" -> ")
                            ));
                        }
                        emit(settings, out)
                    }
                    None => emit(settings, "no decomposition (exhaustive)\n".into()),
                },
            }
        }
        Cmd::Extremal {
            n,
            k,
            ell,
            space,
            csv,
        } => {
            let space = match space {
                SpaceArg::All => SearchSpace::AllDigraphs,
                SpaceArg::Complement => SearchSpace::ComplementConstrained,
                SpaceArg::Sampled => SearchSpace::SampledPlusFamilies,
            };
            let cache = KappaCache::new();
            let table = compute_f_f_upper(n, k, ell, space, settings.seed, &settings.cfg, &cache)
                .map_err(lab_error)?;
            if csv {
                return emit(
                    settings,
                    format!("{}\n{}\n", ExtremalTable::csv_header(), table.csv_row()),
                );
            }
            match settings.format {
                Format::Json => emit_json(settings, &table),
                Format::Text => {
                    let opt =
                        |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
                    let mut out = format!(
                        "n = {n}, k = {k}, ell = {ell} ({})\nf = {}{}\nF = {}{}\nminimal digraphs found: {}\n",
                        table.csv_row(),
                        opt(table.f),
                        if table.f_exact { "" } else { " (best found)" },
                        opt(table.big_f),
                        if table.big_f_exact { "" } else { " (best found)" },
                        table.total_minimal,
                    );
                    if !table.ex.is_empty() {
                        out.push_str(&format!("ex classes: {}\n", table.ex.len()));
                    }
                    if !table.big_ex.is_empty() {
                        out.push_str(&format!("Ex classes: {}\n", table.big_ex.len()));
                    }
                    emit(settings, out)
                }
            }
        }
        Cmd::Classify { n } => {
            let cache = KappaCache::new();
            let classes =
                classify_three_arc_deletions(n, &settings.cfg, &cache).map_err(lab_error)?;
            match settings.format {
                Format::Json => emit_json(settings, &classes),
                Format::Text => {
                    let mut out =
                        format!("3-arc deletion classes at n = {n} (no shared heads or tails):\n");
                    for c in &classes {
                        out.push_str(&format!(
                            "  {:?} x{}: kappa_2 = {}, minimal = {}\n",
                            c.representative, c.count, c.kappa_2, c.minimal
                        ));
                    }
                    emit(settings, out)
                }
            }
        }
        Cmd::Verify { suite, n } => {
            let outcome = suites::run_suite(&suite, n, settings.seed, &settings.cfg)?;
            match settings.format {
                Format::Json => emit_json(settings, &outcome)?,
                Format::Text => {
                    let mut out = format!("suite {}\n", outcome.suite);
                    for check in &outcome.checks {
                        out.push_str(&format!(
                            "  [{}] {} - {}\n",
                            if check.pass { "PASS" } else { "FAIL" },
                            check.name,
                            check.detail
                        ));
                    }
                    out.push_str(if outcome.passed { "PASS\n" } else { "FAIL\n" });
                    emit(settings, out)?;
                }
            }
            if outcome.passed {
                Ok(())
            } else {
                Err(CliError::SuiteFailed)
            }
        }
    }
}

fn emit_kappa_result(
    settings: &Settings,
    result: &strongsub::KappaResult,
    started: Instant,
) -> Result<(), CliError> {
    match settings.format {
        Format::Json => {
            let body = with_timing(
                serde_json::to_value(result).unwrap(),
                started,
                settings.timings,
            );
            emit_json(settings, &body)
        }
        Format::Text => {
            let mut out = format!(
                "value = {} (level {} refuted)\nargmin set = {:?}\n",
                result.value,
                result.refuted_level,
                result.argmin_set.members()
            );
            for (i, part) in result.witness.parts.iter().enumerate() {
                out.push_str(&format!(
                    "  part {}: vertices {:?}, arcs {:?}\n",
                    i,
                    part.vertices().members(),
                    part.arcs()
                ));
            }
            emit(settings, out)
        }
    }
}

fn parse_family(
    family: &str,
    n: usize,
    k: Option<usize>,
    ell: Option<usize>,
    p: Option<f64>,
    shape: Option<String>,
    seed: u64,
) -> Result<FamilySpec, CliError> {
    let need = |opt: Option<usize>, what: &str| {
        opt.ok_or_else(|| CliError::Usage(format!("family {family:?} needs --{what}")))
    };
    match family {
        "complete" => Ok(FamilySpec::Complete { n }),
        "cycle" => Ok(FamilySpec::Cycle { n }),
        "complete-minus-3cycle" => Ok(FamilySpec::CompleteMinus3cycle { n }),
        "complete-minus-2cycle-matching" => Ok(FamilySpec::CompleteMinus2cycleMatching { n }),
        "symmetric-join" => Ok(FamilySpec::SymmetricJoin {
            k: need(k, "k")?,
            n,
        }),
        "union-ham-cycles" => Ok(FamilySpec::UnionHamCycles {
            n,
            ell: need(ell, "ell")?,
        }),
        "symmetric-tree" => {
            let shape = match shape.as_deref() {
                Some("path") => TreeShape::Path,
                Some("star") => TreeShape::Star,
                Some("random") | None => TreeShape::Random,
                Some(other) => {
                    return Err(CliError::Usage(format!(
                        "unknown tree shape {other:?}; use path, star or random"
                    )))
                }
            };
            Ok(FamilySpec::SymmetricTree { n, shape, seed })
        }
        "random-strong" => Ok(FamilySpec::RandomStrong {
            n,
            p: p.unwrap_or(0.5),
            seed,
        }),
        other => Err(CliError::Usage(format!(
            "unknown family {other:?}; see strongsub gen --help"
        ))),
    }
}
