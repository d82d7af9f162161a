//! Command-line front end for the `copwin` library.
//!
//! [`dispatch`] parses arguments, runs one subcommand and returns the text to
//! print together with the exit code, so the binary and the tests share the
//! same code path.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use copwin::bounds::{bound_report, generalized_lower_bound};
use copwin::format::{emit_graph, emit_strategy, parse_graph, parse_strategy};
use copwin::gadgets::{self, GadgetOutput, ThreePartitionInstance};
use copwin::kernel::{kernelize, KernelOutcome};
use copwin::mortality::{copwin_via_mortality, strategy_matrix_check};
use copwin::solver::{cop_number, is_k_copwin, naive_pi_k, simulate};
use copwin::tournament::{one_copwin, quotient_is_k_copwin, OneCopVerdict};
use copwin::{Digraph, Error, SolverConfig, Strategy, VertexSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "copwin",
    version,
    about = "Cops and an invisible slow robber on digraphs"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand. Flags override `COPWIN_*`
/// environment variables, which override the defaults.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the searches
    #[arg(long, global = true, env = "COPWIN_WORKERS", default_value_t = 1)]
    workers: u64,
    /// Maximum number of search states
    #[arg(
        long,
        global = true,
        env = "COPWIN_BUDGET",
        default_value_t = 10_000_000
    )]
    budget: u64,
    /// Largest vertex count for which the naive cross-check oracle runs
    #[arg(long, global = true, default_value_t = 12)]
    oracle_cap: usize,
    /// Seed for randomized generators
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the produced graph here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the produced strategy here
    #[arg(long, global = true)]
    strategy_out: Option<PathBuf>,
    /// Include wall-clock time in the report
    #[arg(long, global = true)]
    timing: bool,
}

impl RunConfig {
    fn solver(&self) -> SolverConfig {
        SolverConfig::default()
            .with_budget(self.budget as usize)
            .with_workers(self.workers as usize)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether k cops win, or compute the cop number without --cops
    Solve {
        graph: PathBuf,
        #[arg(long)]
        cops: Option<usize>,
    },
    /// Cop number, capture time and a shortest winning strategy
    Copnumber { graph: PathBuf },
    /// Lower and upper bounds on the cop number
    Bounds {
        graph: PathBuf,
        /// Also evaluate the neighbourhood-expansion bound up to this set size
        #[arg(long)]
        p_max: Option<usize>,
    },
    /// Kernelize with respect to a w-separator and decide k-copwin
    Kernel {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        w: usize,
        #[arg(long)]
        cops: usize,
    },
    /// Tournament algorithms
    Tournament {
        graph: PathBuf,
        #[arg(long, conflicts_with = "cops", required_unless_present = "cops")]
        one_copwin: bool,
        #[arg(long)]
        cops: Option<usize>,
        /// Feedback vertex set to use instead of a computed minimum one, e.g. "0,3"
        #[arg(long, requires = "cops")]
        fvs: Option<String>,
    },
    /// Check whether a strategy file wins on a graph
    Verify { graph: PathBuf, strategy: PathBuf },
    /// Search for a shortest zero product of the cop matrices
    Mortality {
        graph: PathBuf,
        #[arg(long)]
        cops: usize,
        #[arg(long)]
        max_len: usize,
    },
    /// Generate a construction
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Reverse every arc, and a strategy's step order when one is given
    Reverse {
        graph: PathBuf,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GadgetCommand {
    /// Reduction gadget from a 3-partition instance
    #[command(name = "3part")]
    ThreePart {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<usize>,
        /// Triples of 1-based item indices, e.g. "1 3 4;2 5 6"
        #[arg(long)]
        partition: Option<String>,
    },
    /// Capture-deadline gadget from a 3-partition instance
    Deadline {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<usize>,
        #[arg(long)]
        partition: Option<String>,
    },
    /// Subdivide every vertex into a path of k copies
    Subdivide {
        graph: PathBuf,
        #[arg(long)]
        cops: usize,
    },
    /// Tournament with cop number 2 and feedback vertex sets of size n
    Tn {
        #[arg(long)]
        n: usize,
    },
    /// Digraph meeting the arc-count bound for k cops with equality
    Tight {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cops: usize,
    },
    /// Random round digraph
    Round {
        #[arg(long)]
        n: usize,
    },
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    input_digest: Option<String>,
    results: Value,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

/// What a subcommand hands back to the dispatcher.
struct Produced {
    results: Value,
    text: String,
    code: i32,
}

enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Context {
    run: RunConfig,
    hasher: Option<Sha256>,
    warnings: Vec<String>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
        self.hasher
            .get_or_insert_with(Sha256::new)
            .update(text.as_bytes());
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> Result<Digraph, Failure> {
        let text = self.read(path)?;
        let parsed = parse_graph(&text)?;
        self.warnings.extend(parsed.warnings);
        Ok(parsed.graph)
    }

    fn write(&self, path: &Path, text: &str) -> Result<(), Failure> {
        fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
    }

    /// Sends a graph to `--out`, or returns its text for stdout.
    fn emit_graph(&self, d: &Digraph) -> Result<String, Failure> {
        let text = emit_graph(d);
        match &self.run.out {
            Some(path) => {
                self.write(path, &text)?;
                Ok(String::new())
            }
            None => Ok(text),
        }
    }

    fn emit_strategy(&self, s: &Strategy) -> Result<(), Failure> {
        match &self.run.strategy_out {
            Some(path) => self.write(path, &emit_strategy(s)),
            None => Ok(()),
        }
    }
}

/// Flags that only affect how a run executes, not what it computes. They are
/// left out of the command echo so reports compare equal across settings.
fn echo(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip_next = false;
    for arg in argv.iter().skip(1) {
        if std::mem::take(&mut skip_next) {
            continue;
        }
        match arg.as_str() {
            "--json" | "--timing" => {}
            "--workers" | "--out" | "--strategy-out" => skip_next = true,
            a if a.starts_with("--workers=")
                || a.starts_with("--out=")
                || a.starts_with("--strategy-out=") => {}
            _ => out.push(arg.clone()),
        }
    }
    out
}

/// Parses `argv` (program name first), runs the subcommand and renders the
/// output.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code,
                }
            };
        }
    };
    // Range checks happen after resolution so a bad environment value is
    // harmless when the flag overrides it.
    for (name, value) in [("--workers", cli.run.workers), ("--budget", cli.run.budget)] {
        if value == 0 {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {name} must be at least 1\n"),
                code: EXIT_USAGE,
            };
        }
    }
    let strings: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let started = Instant::now();
    let mut ctx = Context {
        run: cli.run.clone(),
        hasher: None,
        warnings: Vec::new(),
    };
    let produced = match run(&mut ctx, &cli.command) {
        Ok(p) => p,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Lib(e @ Error::Budget { .. }) => (EXIT_BUDGET, e.to_string()),
                Failure::Lib(e) => (EXIT_USAGE, e.to_string()),
                Failure::Io(m) | Failure::Usage(m) => (EXIT_USAGE, m),
            };
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {message}\n"),
                code,
            };
        }
    };
    let stderr: String = ctx
        .warnings
        .iter()
        .map(|w| format!("warning: {w}\n"))
        .collect();
    let stdout = if ctx.run.json {
        let report = Report {
            command: echo(&strings),
            input_digest: ctx.hasher.take().map(|h| hex::encode(h.finalize())),
            results: produced.results,
            warnings: ctx.warnings.clone(),
            timing_ms: ctx.run.timing.then(|| started.elapsed().as_millis()),
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        let mut s = produced.text;
        if ctx.run.timing {
            s.push_str(&format!("time_ms {}\n", started.elapsed().as_millis()));
        }
        s
    };
    Outcome {
        stdout,
        stderr,
        code: produced.code,
    }
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn set_text(s: &VertexSet) -> String {
    s.to_string()
}

fn run(ctx: &mut Context, command: &Command) -> Result<Produced, Failure> {
    match command {
        Command::Solve {
            graph,
            cops: Some(k),
        } => {
            let d = ctx.graph(graph)?;
            let cert = is_k_copwin(&d, *k, &ctx.run.solver())?;
            let oracle = if d.n() <= ctx.run.oracle_cap {
                let naive = naive_pi_k(&d, *k, ctx.run.oracle_cap)?;
                if naive.winning != cert.winning || naive.distance != cert.capture_time {
                    ctx.warnings
                        .push("naive oracle disagrees with the solver".into());
                }
                Some(naive.winning == cert.winning && naive.distance == cert.capture_time)
            } else {
                None
            };
            let mut text = format!("k {k}\nwinning {}\n", cert.winning);
            if let Some(ct) = cert.capture_time {
                text.push_str(&format!("ct {ct}\n"));
            }
            if let Some(core) = &cert.losing_core {
                text.push_str(&format!("losing_core {}\n", set_text(core)));
            }
            if let Some(agrees) = oracle {
                text.push_str(&format!("oracle_agrees {agrees}\n"));
            }
            if let Some(s) = &cert.strategy {
                ctx.emit_strategy(s)?;
                text.push_str(&emit_strategy(s));
            }
            let mut results = serde_json::to_value(&cert).expect("serializable");
            results["oracle_agrees"] = json!(oracle);
            Ok(Produced {
                results,
                text,
                code: verdict_code(cert.winning),
            })
        }
        Command::Solve { graph, cops: None } | Command::Copnumber { graph } => {
            let d = ctx.graph(graph)?;
            let report = cop_number(&d, &ctx.run.solver())?;
            ctx.emit_strategy(&report.strategy)?;
            let text = format!(
                "cn={} ct={}\n{}",
                report.cop_number,
                report.capture_time,
                emit_strategy(&report.strategy)
            );
            Ok(Produced {
                results: serde_json::to_value(&report).expect("serializable"),
                text,
                code: EXIT_OK,
            })
        }
        Command::Bounds { graph, p_max } => {
            let d = ctx.graph(graph)?;
            let report = bound_report(&d, ctx.run.budget as usize)?;
            let general = match p_max {
                Some(p) => Some(generalized_lower_bound(&d, *p, ctx.run.budget as usize)?),
                None => None,
            };
            let mut text = format!(
                "lower {} witness {}\nupper {} fvs {}\narc_bound {}\n",
                report.lower,
                set_text(&report.lower_witness),
                report.upper,
                set_text(&report.upper_witness),
                report.arc_bound_k
            );
            if let Some(g) = general {
                text.push_str(&format!("expansion_bound {g}\n"));
            }
            let mut results = serde_json::to_value(&report).expect("serializable");
            results["expansion_bound"] = json!(general);
            Ok(Produced {
                results,
                text,
                code: EXIT_OK,
            })
        }
        Command::Kernel { graph, w, cops } => {
            let d = ctx.graph(graph)?;
            match kernelize(&d, *cops, *w)? {
                KernelOutcome::YesShortcut { x } => Ok(Produced {
                    results: json!({ "shortcut": true, "separator": x, "winning": true }),
                    text: format!(
                        "shortcut separator {} has at most {cops} vertices\nwinning true\n",
                        set_text(&x)
                    ),
                    code: EXIT_OK,
                }),
                KernelOutcome::Kernel(kernel) => {
                    let winning = is_k_copwin(&kernel.graph, *cops, &ctx.run.solver())?.winning;
                    let mut text = ctx.emit_graph(&kernel.graph)?;
                    text.push_str(&format!(
                        "# separator {}\n# groups {}\n# classes {:?}\n# kept_per_class {}\n# kernel_vertices {}\n# winning {winning}\n",
                        set_text(&kernel.separator),
                        kernel.ledger.groups.len(),
                        kernel.class_sizes,
                        kernel.kept_per_class,
                        kernel.graph.n(),
                    ));
                    let mut results = serde_json::to_value(&kernel).expect("serializable");
                    results["shortcut"] = json!(false);
                    results["winning"] = json!(winning);
                    results["graph"] = json!(emit_graph(&kernel.graph));
                    Ok(Produced {
                        results,
                        text,
                        code: verdict_code(winning),
                    })
                }
            }
        }
        Command::Tournament {
            graph,
            one_copwin: true,
            ..
        } => {
            let d = ctx.graph(graph)?;
            let verdict = one_copwin(&d)?;
            let text = format!("one_copwin {verdict:?}\n");
            Ok(Produced {
                results: json!({ "one_copwin": verdict }),
                text,
                code: verdict_code(verdict == OneCopVerdict::OneCopwin),
            })
        }
        Command::Tournament {
            graph, cops, fvs, ..
        } => {
            let d = ctx.graph(graph)?;
            let k = cops.expect("clap enforces --cops");
            let f = match fvs {
                Some(list) => Some(parse_index_list(list, d.n())?),
                None => None,
            };
            let winning = quotient_is_k_copwin(&d, k, f.as_ref(), ctx.run.budget as usize)?;
            Ok(Produced {
                results: json!({ "k": k, "winning": winning }),
                text: format!("k {k}\nwinning {winning}\n"),
                code: verdict_code(winning),
            })
        }
        Command::Verify { graph, strategy } => {
            let d = ctx.graph(graph)?;
            let text = ctx.read(strategy)?;
            let s = parse_strategy(&text, d.n())?;
            let trace = simulate(&d, &s);
            let matrix = strategy_matrix_check(&d, &s);
            if matrix != trace.captured {
                ctx.warnings
                    .push("matrix check disagrees with simulation".into());
            }
            let mut out = format!("winning {}\n", trace.captured);
            if let Some(step) = trace.capture_step() {
                out.push_str(&format!("capture_step {step}\n"));
            }
            out.push_str(&format!("cops {}\n", s.cops_used()));
            for (i, r) in trace.territories.iter().enumerate() {
                out.push_str(&format!("R{} {}\n", i + 1, set_text(r)));
            }
            Ok(Produced {
                results: json!({
                    "winning": trace.captured,
                    "capture_step": trace.capture_step(),
                    "cops": s.cops_used(),
                    "territories": trace.territories,
                }),
                text: out,
                code: verdict_code(trace.captured),
            })
        }
        Command::Mortality {
            graph,
            cops,
            max_len,
        } => {
            let d = ctx.graph(graph)?;
            let verdict = copwin_via_mortality(
                &d,
                *cops,
                *max_len,
                ctx.run.budget as usize,
                ctx.run.workers as usize,
            )?;
            let text = match &verdict.cop_sets {
                Some(s) => {
                    ctx.emit_strategy(s)?;
                    let words: Vec<String> = s.steps().iter().map(set_text).collect();
                    format!("word {}\n", words.join(" "))
                }
                None => "NONE\n".to_string(),
            };
            Ok(Produced {
                results: serde_json::to_value(&verdict).expect("serializable"),
                text,
                code: verdict_code(verdict.winning),
            })
        }
        Command::Gadget(g) => run_gadget(ctx, g),
        Command::Reverse { graph, strategy } => {
            let d = ctx.graph(graph)?;
            let rev = d.reverse();
            let mut results = json!({ "graph": emit_graph(&rev) });
            if let Some(path) = strategy {
                let text = ctx.read(path)?;
                let s = parse_strategy(&text, d.n())?.reversed();
                ctx.emit_strategy(&s)?;
                results["strategy"] = json!(emit_strategy(&s));
            }
            Ok(Produced {
                results,
                text: ctx.emit_graph(&rev)?,
                code: EXIT_OK,
            })
        }
    }
}

fn parse_index_list(list: &str, n: usize) -> Result<VertexSet, Failure> {
    let mut set = VertexSet::empty(n);
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| Failure::Usage(format!("invalid vertex `{tok}` in --fvs")))?;
        if v >= n {
            return Err(Failure::Usage(format!(
                "vertex {v} in --fvs is out of range"
            )));
        }
        set.insert(v);
    }
    Ok(set)
}

/// `"1 3 4;2 5 6"` with 1-based item numbers to 0-based groups.
fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>, Failure> {
    text.split(';')
        .map(|group| {
            group
                .split_whitespace()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Failure::Usage(format!(
                        "invalid item number `{tok}` in --partition"
                    ))),
                })
                .collect()
        })
        .collect()
}

fn gadget_produced(ctx: &mut Context, kind: &str, out: GadgetOutput) -> Result<Produced, Failure> {
    ctx.warnings.extend(out.notes.iter().cloned());
    let mut text = ctx.emit_graph(&out.graph)?;
    for (name, part) in &out.named_parts {
        text.push_str(&format!("# part {name} {}\n", set_text(part)));
    }
    let mut verified = None;
    if let Some(cert) = &out.certificate {
        ctx.emit_strategy(cert)?;
        let ok = strategy_matrix_check(&out.graph, cert);
        verified = Some(ok);
        text.push_str(&format!(
            "# certificate steps {} cops {} verified {ok}\n",
            cert.len(),
            cert.cops_used()
        ));
    }
    let mut results = serde_json::to_value(&out).expect("serializable");
    results["kind"] = json!(kind);
    results["vertices"] = json!(out.graph.n());
    results["arcs"] = json!(out.graph.arc_count());
    results["certificate_verified"] = json!(verified);
    results["graph"] = json!(emit_graph(&out.graph));
    Ok(Produced {
        results,
        text,
        code: EXIT_OK,
    })
}

fn run_gadget(ctx: &mut Context, g: &GadgetCommand) -> Result<Produced, Failure> {
    match g {
        GadgetCommand::ThreePart { items, partition } => {
            let inst = ThreePartitionInstance::new(items.clone())?;
            let p = partition.as_deref().map(parse_partition).transpose()?;
            let out = gadgets::gadget_3partition(&inst, p.as_deref())?;
            gadget_produced(ctx, "3part", out)
        }
        GadgetCommand::Deadline { items, partition } => {
            let inst = ThreePartitionInstance::new(items.clone())?;
            let p = partition.as_deref().map(parse_partition).transpose()?;
            let out = gadgets::gadget_capture_deadline(&inst, p.as_deref())?;
            gadget_produced(ctx, "deadline", out)
        }
        GadgetCommand::Subdivide { graph, cops } => {
            let d = ctx.graph(graph)?;
            let sub = gadgets::subdivide(&d, *cops)?;
            let out = GadgetOutput {
                named_parts: (1..=*cops)
                    .map(|i| {
                        let part = VertexSet::from_indices(
                            sub.n(),
                            (0..d.n()).map(|v| gadgets::subdivided_index(v, i, *cops)),
                        );
                        (format!("copy{i}"), part)
                    })
                    .collect(),
                graph: sub,
                certificate: None,
                notes: Vec::new(),
            };
            gadget_produced(ctx, "subdivide", out)
        }
        GadgetCommand::Tn { n } => {
            let out = gadgets::family_tn(*n)?;
            gadget_produced(ctx, "tn", out)
        }
        GadgetCommand::Tight { n, cops } => {
            let out = gadgets::tight_arc_family(*n, *cops)?;
            gadget_produced(ctx, "tight", out)
        }
        GadgetCommand::Round { n } => {
            let seed = ctx.run.seed;
            let (d, order) = gadgets::random_round_digraph(*n, seed)?;
            let out = GadgetOutput {
                graph: d,
                named_parts: Vec::new(),
                certificate: None,
                notes: Vec::new(),
            };
            let mut produced = gadget_produced(ctx, "round", out)?;
            let order_text: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            produced.text.push_str(&format!(
                "# order {}\n# seed {seed}\n",
                order_text.join(" ")
            ));
            produced.results["order"] = json!(order);
            produced.results["seed"] = json!(seed);
            Ok(produced)
        }
    }
}
