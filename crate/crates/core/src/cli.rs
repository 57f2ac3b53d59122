//! The `hyperreg` command line.
//!
//! Exit codes: 0 on success (including a `NO` answer), 2 for usage and
//! parse errors, 3 for violated preconditions. Decision commands print
//! `YES` or `NO` on the first line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use crate::boolean::BooleanFunction;
use crate::csp::{format_optimum, read_csp, Objective};
use crate::error::{Error, Result};
use crate::hgr::{read_hgr, write_hgr, write_signed_hgr};
use crate::hypergraph::{
    canonical_constant_sets, generate_sum_regular, random_constant_sets, random_hypergraph,
    PlainHypergraph, ZeroPolicy,
};
use crate::product::{regularize, signed_product};
use crate::reduction::{build_reduction, c4_reduce, detect_induced_c4, SimpleGraph};
use crate::solver::{solve_maxcsp, Method};
use crate::template::{build_template, verify_template};

#[derive(Debug, Parser)]
#[command(
    name = "hyperreg",
    version,
    about = "Regular hyperclique instances, CSP reductions and solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the template T(h, k) as a signed HGR file.
    Template {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: usize,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Signed product of a hypergraph with T(h, k).
    Regularize {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(short = 'o')]
        output: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    #[command(subcommand)]
    Verify(Verify),
    /// Find (or count) k-cliques.
    Clique {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(long)]
        count: bool,
    },
    #[command(subcommand)]
    Gen(Gen),
    #[command(subcommand)]
    Reduce(Reduce),
    /// Optimize a CSP file over weight-k assignments.
    Solve {
        #[arg(short = 'i')]
        input: PathBuf,
        /// Defaults to the `k` in the file header.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "brute")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
    },
    /// Search a graph file for an induced 4-cycle.
    C4 {
        #[arg(short = 'i')]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// (s, λ)-regularity.
    Regular {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Template properties of a signed hypergraph.
    Template {
        #[arg(short = 'i')]
        input: PathBuf,
    },
    /// Whether the third file is the signed product of the first two.
    Product {
        #[arg(short = 'i')]
        g: PathBuf,
        #[arg(long = "i2")]
        t: PathBuf,
        #[arg(long = "i3")]
        gp: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// x + y + z mod n membership hypergraph.
    SumRegular(SumRegularArgs),
    /// Independent edges with probability p.
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o')]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct SumRegularArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    /// Sample the residue sets; without it every set is {0..t-1}.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, conflicts_with = "no_zero")]
    zero_clique: bool,
    #[arg(long)]
    no_zero: bool,
    #[arg(short = 'o')]
    output: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Reduce {
    /// Weight-k CSP instance with threshold trailer.
    Csp {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(long = "fn-tt")]
        fn_tt: String,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Pair graph whose induced 4-cycles mirror 4-cliques.
    C4 {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Reduction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return CommandResult {
                code,
                stdout,
                stderr,
            };
        }
    };
    match execute(cli.command) {
        Ok(stdout) => CommandResult {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => CommandResult {
            code: if matches!(e, Error::Parse { .. }) {
                2
            } else {
                3
            },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(Error::from)
}

fn decision(yes: bool, details: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(if yes { "YES\n" } else { "NO\n" });
    for line in details {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Template { h, k, output } => {
            let t = build_template(h, k)?;
            write_file(&output, &write_signed_hgr(&t))?;
            Ok(format!(
                "vertices={} edges={}\n",
                t.base().vertex_count(),
                t.base().edge_count()
            ))
        }
        Command::Regularize {
            input,
            k,
            output,
            map,
        } => {
            let g = read_hgr(&input)?.into_base();
            let plain = PlainHypergraph::from_partite(&g);
            let (gp, vmap) = regularize(&plain, g.h(), k)?;
            write_file(&output, &write_hgr(&gp))?;
            if let Some(path) = map {
                write_file(&path, &vmap.to_text())?;
            }
            Ok(format!(
                "vertices={} edges={}\n",
                gp.vertex_count(),
                gp.edge_count()
            ))
        }
        Command::Verify(Verify::Regular { input, s }) => {
            let g = read_hgr(&input)?.into_base();
            let report = g.regularity(s)?;
            Ok(match (report.lambda, &report.witness) {
                (Some(l), _) => decision(true, [format!("lambda={l}")]),
                (None, Some(w)) => decision(
                    false,
                    [
                        format!("tuple {} count={}", w.tuple.iter().join(" "), w.count),
                        format!(
                            "tuple {} count={}",
                            w.reference.iter().join(" "),
                            w.reference_count
                        ),
                    ],
                ),
                (None, None) => decision(false, []),
            })
        }
        Command::Verify(Verify::Template { input }) => {
            let t = read_hgr(&input)?.into_signed()?;
            let r = verify_template(&t)?;
            let mut lines = Vec::new();
            match r.p1_lambda {
                Some(l) => lines.push(format!("lambda={l}")),
                None => lines.push(format!(
                    "sign classes not equally regular: positive {}, negative {}",
                    r.positive_regularity, r.negative_regularity
                )),
            }
            match &r.p2_clique {
                Some(c) => lines.push(format!("positive clique {}", c.iter().join(" "))),
                None => lines.push("no positive k-clique".into()),
            }
            if let Some(c) = &r.p3_violation {
                lines.push(format!(
                    "clique through a negative edge {}",
                    c.iter().join(" ")
                ));
            }
            Ok(decision(r.is_template(), lines))
        }
        Command::Verify(Verify::Product { g, t, gp }) => {
            let g = PlainHypergraph::from_partite(&read_hgr(&g)?.into_base());
            let t = read_hgr(&t)?.into_signed()?;
            let given = read_hgr(&gp)?.into_unsigned()?;
            let (expected, _) = signed_product(&g, &t)?;
            let same = expected == given;
            let mut lines = Vec::new();
            if !same {
                lines.push(format!(
                    "expected {} edges on parts {}, file has {} edges on parts {}",
                    expected.edge_count(),
                    expected.part_sizes().iter().join(","),
                    given.edge_count(),
                    given.part_sizes().iter().join(",")
                ));
            }
            Ok(decision(same, lines))
        }
        Command::Clique { input, count } => {
            let g = read_hgr(&input)?.into_base();
            if count {
                Ok(format!("{}\n", g.count_k_cliques()))
            } else {
                Ok(match g.find_k_clique() {
                    Some(c) => decision(true, [c.iter().join(" ")]),
                    None => decision(false, []),
                })
            }
        }
        Command::Gen(Gen::SumRegular(a)) => {
            let zero = match (a.zero_clique, a.no_zero) {
                (true, _) => ZeroPolicy::Contain,
                (_, true) => ZeroPolicy::Avoid,
                _ => ZeroPolicy::Free,
            };
            let sets = match a.seed {
                Some(seed) => random_constant_sets(a.k, a.n, a.t, zero, seed)?,
                None => canonical_constant_sets(a.k, a.t, zero),
            };
            let g = generate_sum_regular(a.k, a.n, &sets)?;
            let mut text = String::new();
            for (parts, set) in &sets {
                writeln!(
                    text,
                    "# sums {} in {{{}}}",
                    parts.iter().join(","),
                    set.iter().join(",")
                )
                .unwrap();
            }
            text.push_str(&write_hgr(&g));
            write_file(&a.output, &text)?;
            Ok(format!(
                "vertices={} edges={}\n",
                g.vertex_count(),
                g.edge_count()
            ))
        }
        Command::Gen(Gen::Random {
            k,
            h,
            n,
            p,
            seed,
            output,
        }) => {
            let g = random_hypergraph(k, h, n, p, seed)?;
            write_file(&output, &write_hgr(&g))?;
            Ok(format!(
                "vertices={} edges={}\n",
                g.vertex_count(),
                g.edge_count()
            ))
        }
        Command::Reduce(Reduce::Csp {
            input,
            fn_tt,
            output,
        }) => {
            let g = read_hgr(&input)?.into_unsigned()?;
            let phi = BooleanFunction::from_tt(&fn_tt)?;
            let out = build_reduction(&g, &phi)?;
            write_file(&output, &out.to_csp_text())?;
            Ok(format!(
                "tau={} case={} alpha={} beta={}\n",
                out.tau, out.case_tag, out.coefficients.alpha, out.coefficients.beta
            ))
        }
        Command::Reduce(Reduce::C4 { input, output }) => {
            let g = read_hgr(&input)?.into_unsigned()?;
            let graph = c4_reduce(&g)?;
            write_file(&output, &graph.to_text())?;
            Ok(format!(
                "vertices={} edges={}\n",
                graph.vertex_count(),
                graph.edge_count()
            ))
        }
        Command::Solve {
            input,
            k,
            method,
            objective,
        } => {
            let doc = read_csp(&input)?;
            let method = match method {
                MethodArg::Brute => Method::Brute,
                MethodArg::Reduction => Method::Reduction,
            };
            let objective = match objective {
                ObjectiveArg::Max => Objective::Max,
                ObjectiveArg::Min => Objective::Min,
            };
            let (value, a) = solve_maxcsp(&doc.instance, k.unwrap_or(doc.k), method, objective)?;
            Ok(format_optimum(value, &a))
        }
        Command::C4 { input } => {
            let g = SimpleGraph::read(&input)?;
            Ok(match detect_induced_c4(&g) {
                Some(c) => decision(true, [c.iter().join(" ")]),
                None => decision(false, []),
            })
        }
    }
}
