//! Command-line front end. [`run`] executes one invocation and returns what
//! to print and the exit code; the binary only forwards that to the process.
//!
//! Exit codes: 0 success or true verdict, 1 false verdict, 2 usage or parse
//! error, 3 precondition violation (including nondeterministic input), 4
//! exact-search cap exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::automaton::Automaton;
use crate::error::Error;
use crate::format::{parse_automata, serialize_automata, serialize_automaton};
use crate::morphism::is_des_isomorphic;
use crate::ops::sync_product;
use crate::ordering::{compare_full_vs_partial, compare_reductions, finer_than};
use crate::reduction::{
    build_super, generate_equivalent_supervisor, reduce_exact_minimum, reduce_heuristic, validate_cover, Cover,
    CoverMode, DEFAULT_CAP,
};
use crate::supervision::{
    check_control_existence, check_control_existence_under, check_control_feasibility, control_data,
    control_equivalent, is_normal,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "supred", version, about = "Supervisor reduction for discrete-event systems")]
struct Cli {
    /// Print the result as a JSON object on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// An automaton reference: `path` for a single-automaton file, or
/// `path::name` to pick one block.
type Source = String;

#[derive(Debug, Args)]
struct Out {
    /// Write the produced automaton here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlantSup {
    #[arg(short = 'g', long = "plant")]
    g: Source,
    #[arg(short = 's', long = "sup")]
    s: Source,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a file parses and print its canonical form.
    Parse {
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Reachable synchronous product of two automata.
    Product {
        a: Source,
        b: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Observer of the closed loop, the finest control-equivalent supervisor.
    Super {
        #[command(flatten)]
        io: PlantSup,
        #[command(flatten)]
        out: Out,
    },
    /// Reduce a supervisor (heuristic by default).
    Reduce {
        #[command(flatten)]
        io: PlantSup,
        /// Search for a minimum cover instead of using the heuristic.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value = "cover")]
        mode: CoverMode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Sample a random control-equivalent supervisor with this seed.
        #[arg(long, conflicts_with = "exact")]
        seed: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    /// Decide a property.
    #[command(subcommand)]
    Verify(Verify),
    /// Compare supervisors.
    #[command(subcommand)]
    Compare(Compare),
    /// DES-isomorphism of two automata.
    Iso { a: Source, b: Source },
    /// Print the control data table of a supervisor.
    Data {
        #[command(flatten)]
        io: PlantSup,
    },
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Control equivalence of two supervisors.
    Equiv {
        #[arg(short = 'g', long = "plant")]
        g: Source,
        #[arg(long)]
        s1: Source,
        #[arg(long)]
        s2: Source,
    },
    /// Both feasibility checks against the plant.
    Feasible {
        #[command(flatten)]
        io: PlantSup,
    },
    /// Control existence; without a plant, every uncontrollable event must
    /// be enabled everywhere.
    Existence {
        #[arg(short = 'g', long = "plant")]
        g: Option<Source>,
        #[arg(short = 's', long = "sup")]
        s: Source,
    },
    /// Normality of a candidate with respect to a supervisor.
    Normal {
        #[command(flatten)]
        io: PlantSup,
        #[arg(short = 'c', long)]
        candidate: Source,
    },
    /// Whether a cover file (one cell of state names per line) is a control
    /// cover.
    Cover {
        #[command(flatten)]
        io: PlantSup,
        #[arg(long)]
        cover: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Compare {
    /// Whether s1 is finer than s2.
    Order {
        #[command(flatten)]
        io: PlantSup,
        #[arg(long)]
        s1: Source,
        #[arg(long)]
        s2: Source,
    },
    /// Minimum cover sizes of s1 and s2.
    Reductions {
        #[command(flatten)]
        io: PlantSup,
        #[arg(long)]
        s1: Source,
        #[arg(long)]
        s2: Source,
    },
    /// Minimum cover sizes under full and partial observation.
    Fullpartial {
        #[arg(short = 'g', long = "plant")]
        g: Source,
        #[arg(long)]
        sf: Source,
        #[arg(long)]
        sp: Source,
    },
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandResult {
    pub command: String,
    pub verdict: Option<bool>,
    pub sizes: BTreeMap<String, usize>,
    pub witness: Option<String>,
    pub output_file: Option<String>,
    pub exit_code: i32,
    /// Text for standard output.
    pub stdout: String,
    /// Text for standard error.
    pub stderr: String,
}

#[derive(Serialize)]
struct JsonResult<'a> {
    command: &'a str,
    verdict: Option<bool>,
    sizes: &'a BTreeMap<String, usize>,
    witness: Option<&'a str>,
    output_file: Option<&'a str>,
}

impl CommandResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonResult {
            command: &self.command,
            verdict: self.verdict,
            sizes: &self.sizes,
            witness: self.witness.as_deref(),
            output_file: self.output_file.as_deref(),
        })
        .expect("plain data serializes")
    }

    fn verdict(mut self, holds: bool, witness: Option<String>) -> Self {
        self.verdict = Some(holds);
        self.witness = witness;
        self.exit_code = if holds { EXIT_OK } else { EXIT_FALSE };
        self.stdout = match &self.witness {
            Some(w) => format!("{holds}\nwitness: {w}\n"),
            None => format!("{holds}\n"),
        };
        self
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Load { path: String, source: Error },
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        let lib = match self {
            CliError::Usage(_) | CliError::Io { .. } => return EXIT_USAGE,
            CliError::Load { source, .. } | CliError::Lib(source) => source,
        };
        match lib {
            Error::Parse(p) if p.is_nondeterminism() => EXIT_PRECONDITION,
            Error::Parse(_) | Error::UnknownEvent(_) | Error::UnknownState(_) | Error::MalformedCover(_) => EXIT_USAGE,
            Error::AlphabetMismatch { .. }
            | Error::Infeasible { .. }
            | Error::InvalidCover(_)
            | Error::Precondition(_) => EXIT_PRECONDITION,
            Error::CapExceeded { .. } => EXIT_CAP,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Rewrites the two-letter short flags `-s1 -s2 -sf -sp` to their long forms.
fn normalize_args<I, S>(argv: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    argv.into_iter()
        .map(Into::into)
        .map(|a| match a.as_str() {
            "-s1" | "-s2" | "-sf" | "-sp" => format!("-{a}"),
            _ => a,
        })
        .collect()
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = normalize_args(argv);
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let mut r = CommandResult {
                command: args.get(1).cloned().unwrap_or_default(),
                exit_code: code,
                ..Default::default()
            };
            if code == EXIT_OK {
                r.stdout = text;
            } else {
                r.stderr = text;
                if json {
                    r.stdout = format!("{}\n", r.to_json());
                }
            }
            return r;
        }
    };
    let name = command_name(&cli.command);
    let mut result = match execute(cli.command) {
        Ok(mut r) => {
            r.command = name;
            r
        }
        Err(e) => CommandResult {
            command: name,
            exit_code: e.exit_code(),
            stderr: format!("error: {e}\n"),
            ..Default::default()
        },
    };
    if cli.json {
        result.stdout = format!("{}\n", result.to_json());
    }
    result
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Parse { .. } => "parse".into(),
        Command::Product { .. } => "product".into(),
        Command::Super { .. } => "super".into(),
        Command::Reduce { .. } => "reduce".into(),
        Command::Verify(v) => format!(
            "verify {}",
            match v {
                Verify::Equiv { .. } => "equiv",
                Verify::Feasible { .. } => "feasible",
                Verify::Existence { .. } => "existence",
                Verify::Normal { .. } => "normal",
                Verify::Cover { .. } => "cover",
            }
        ),
        Command::Compare(c) => format!(
            "compare {}",
            match c {
                Compare::Order { .. } => "order",
                Compare::Reductions { .. } => "reductions",
                Compare::Fullpartial { .. } => "fullpartial",
            }
        ),
        Command::Iso { .. } => "iso".into(),
        Command::Data { .. } => "data".into(),
    }
}

fn read(path: &std::path::Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_all(path: &str) -> CliResult<Vec<Automaton>> {
    let text = read(path.as_ref())?;
    parse_automata(&text).map_err(|e| CliError::Load {
        path: path.to_string(),
        source: e.into(),
    })
}

fn load(source: &str) -> CliResult<Automaton> {
    let (path, name) = match source.rsplit_once("::") {
        Some((p, n)) => (p, Some(n)),
        None => (source, None),
    };
    let mut all = load_all(path)?;
    match name {
        Some(n) => all
            .into_iter()
            .find(|a| a.name() == n)
            .ok_or_else(|| CliError::Usage(format!("{path}: no automaton named `{n}`"))),
        None if all.len() == 1 => Ok(all.remove(0)),
        None => Err(CliError::Usage(format!(
            "{path} holds {} automata; select one with {path}::<name>",
            all.len()
        ))),
    }
}

fn emit(a: &Automaton, out: &Out, mut r: CommandResult) -> CliResult<CommandResult> {
    let text = serialize_automaton(a);
    r.sizes.insert("states".into(), a.num_states());
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            r.output_file = Some(path.display().to_string());
        }
        None => r.stdout = text,
    }
    Ok(r)
}

fn execute(command: Command) -> CliResult<CommandResult> {
    let base = CommandResult::default();
    match command {
        Command::Parse { file, out } => {
            let path = file.display().to_string();
            let all = load_all(&path)?;
            let mut r = CommandResult::default();
            for a in &all {
                r.sizes.insert(a.name().to_string(), a.num_states());
            }
            let text = serialize_automata(&all);
            match &out.output {
                Some(p) => {
                    fs::write(p, text).map_err(|source| CliError::Io {
                        path: p.display().to_string(),
                        source,
                    })?;
                    r.output_file = Some(p.display().to_string());
                }
                None => r.stdout = text,
            }
            Ok(r)
        }
        Command::Product { a, b, out } => {
            let p = sync_product(&load(&a)?, &load(&b)?)?;
            emit(&p, &out, base)
        }
        Command::Super { io, out } => {
            let (g, s) = (load(&io.g)?, load(&io.s)?);
            let sup = build_super(&g, &s)?;
            emit(&sup, &out, base)
        }
        Command::Reduce {
            io,
            exact,
            mode,
            cap,
            seed,
            out,
        } => {
            let (g, s) = (load(&io.g)?, load(&io.s)?);
            let mut r = base;
            r.sizes.insert("input".into(), s.num_states());
            let reduced = if let Some(seed) = seed {
                generate_equivalent_supervisor(&g, &s, seed)?
            } else if exact {
                reduce_exact_minimum(&g, &s, mode, cap)?.0
            } else {
                reduce_heuristic(&g, &s)?.0
            };
            r.sizes.insert("output".into(), reduced.num_states());
            emit(&reduced, &out, r)
        }
        Command::Verify(v) => verify(v),
        Command::Compare(c) => compare(c),
        Command::Iso { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let m = is_des_isomorphic(&a, &b)?;
            let mut r = base;
            r.sizes.insert("a".into(), a.num_states());
            r.sizes.insert("b".into(), b.num_states());
            Ok(r.verdict(m.verdict, m.reason))
        }
        Command::Data { io } => {
            let (g, s) = (load(&io.g)?, load(&io.s)?);
            let data = control_data(&g, &s)?;
            let mut r = base;
            r.sizes.insert("states".into(), s.num_states());
            r.stdout = data.table();
            Ok(r)
        }
    }
}

fn verify(v: Verify) -> CliResult<CommandResult> {
    let r = CommandResult::default();
    match v {
        Verify::Equiv { g, s1, s2 } => {
            let (g, s1, s2) = (load(&g)?, load(&s1)?, load(&s2)?);
            let v = control_equivalent(&g, &s1, &s2)?;
            let w = v.witness.map(|w| g.alphabet().format_word(&w));
            Ok(r.verdict(v.holds, w))
        }
        Verify::Feasible { io } => {
            let (g, s) = (load(&io.g)?, load(&io.s)?);
            let structural = check_control_feasibility(&s);
            if let Some((z, e)) = structural.witness {
                let w = format!(
                    "unobservable `{}` moves `{}` to another state",
                    s.alphabet().name(e),
                    s.state_name(z)
                );
                return Ok(r.verdict(false, Some(w)));
            }
            let existence = check_control_existence_under(&g, &s)?;
            let w = existence
                .witness
                .map(|w| format!("uncontrollable event disabled after `{}`", g.alphabet().format_word(&w)));
            Ok(r.verdict(existence.holds, w))
        }
        Verify::Existence { g, s } => {
            let s = load(&s)?;
            match g {
                Some(g) => {
                    let g = load(&g)?;
                    let v = check_control_existence_under(&g, &s)?;
                    let w = v.witness.map(|w| g.alphabet().format_word(&w));
                    Ok(r.verdict(v.holds, w))
                }
                None => {
                    let v = check_control_existence(&s);
                    let w = v.witness.map(|z| s.state_name(z).to_string());
                    Ok(r.verdict(v.holds, w))
                }
            }
        }
        Verify::Normal { io, candidate } => {
            let (g, s, c) = (load(&io.g)?, load(&io.s)?, load(&candidate)?);
            let v = is_normal(&g, &s, &c)?;
            let w = v.witness.map(|x| x.describe(&c));
            Ok(r.verdict(v.holds, w))
        }
        Verify::Cover { io, cover } => {
            let (g, s) = (load(&io.g)?, load(&io.s)?);
            let cover = Cover::parse(&s, &read(&cover)?)?;
            let data = control_data(&g, &s)?;
            let v = validate_cover(&s, &data, &cover)?;
            let w = v.witness.map(|x| x.describe(&s, &cover));
            let mut r = r;
            r.sizes.insert("cells".into(), cover.len());
            Ok(r.verdict(v.holds, w))
        }
    }
}

fn compare(c: Compare) -> CliResult<CommandResult> {
    let mut r = CommandResult::default();
    match c {
        Compare::Order { io, s1, s2 } => {
            let (g, s, s1, s2) = (load(&io.g)?, load(&io.s)?, load(&s1)?, load(&s2)?);
            let o = finer_than(&g, &s, &s1, &s2)?;
            let w = o.counterexample.map(|(w, clauses)| {
                let names: Vec<String> = clauses.iter().map(ToString::to_string).collect();
                format!("{} ({})", g.alphabet().format_word(&w), names.join(","))
            });
            Ok(r.verdict(o.verdict, w))
        }
        Compare::Reductions { io, s1, s2 } => {
            let (g, s, s1, s2) = (load(&io.g)?, load(&io.s)?, load(&s1)?, load(&s2)?);
            let cmp = compare_reductions(&g, &s, &s1, &s2)?;
            r.sizes.insert("s1".into(), cmp.size1);
            r.sizes.insert("s2".into(), cmp.size2);
            let r = r.verdict(cmp.ordered, None);
            Ok(with_sizes_line(r))
        }
        Compare::Fullpartial { g, sf, sp } => {
            let (g, sf, sp) = (load(&g)?, load(&sf)?, load(&sp)?);
            let cmp = compare_full_vs_partial(&g, &sf, &sp)?;
            r.sizes.insert("full".into(), cmp.size1);
            r.sizes.insert("partial".into(), cmp.size2);
            let r = r.verdict(cmp.ordered, None);
            Ok(with_sizes_line(r))
        }
    }
}

fn with_sizes_line(mut r: CommandResult) -> CommandResult {
    let sizes: Vec<String> = r.sizes.iter().map(|(k, v)| format!("{k}={v}")).collect();
    r.stdout.push_str(&format!("sizes: {}\n", sizes.join(" ")));
    r
}
