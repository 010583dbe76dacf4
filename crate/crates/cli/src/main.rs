//! `treepoly` command-line interface.
//!
//! Exit status: 0 on success, 1 on domain errors or failed verification,
//! 2 on usage errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treepoly::density::{density_matrix_with, density_row_with, marginalize_with, ShapeDistribution};
use treepoly::experiments::{self, emit_figure_data, Figure, Status};
use treepoly::geometry::{convex_hull_2d, ex_polytope_with, project_2d};
use treepoly::models::{
    beta_distribution, consistent_rules, derive_lower_rule, dm_construction,
    markov_branching_distribution, multinomial_distribution, BetaParam, MultinomialParams,
    SplittingRule,
};
use treepoly::rational::{format_decimal, format_rational};
use treepoly::shapes::{enumerate_shapes, parse_shape, parse_shape_list, shape_name, TreeShape};
use treepoly::{Caps, Error, Rational, Result};

#[derive(Parser)]
#[command(name = "treepoly", version, about = "Exact polytopes of sampling consistent tree shape distributions")]
struct Cli {
    /// Print numbers as decimals with this many digits instead of exact p/q.
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the shapes with n leaves in canonical order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Also print the shape name, when it has one.
        #[arg(long)]
        names: bool,
    },
    /// Induced subtree densities of a shape at n leaves.
    Density {
        #[command(flatten)]
        input: ShapeInput,
        #[arg(long)]
        n: usize,
    },
    /// The density matrix from m to n leaves, or the marginal of a distribution.
    Project {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        /// Distribution JSON on m leaves to marginalize instead of printing the matrix.
        #[arg(long, value_name = "FILE")]
        dist: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Certified vertices of EX_n^m.
    Hull {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Write the polytope JSON to this file.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Evaluate a model.
    Model {
        #[command(subcommand)]
        model: ModelCommand,
    },
    /// Run verification claims and print one JSON line per claim.
    Verify {
        #[arg(long, conflicts_with_all = ["claim", "list"])]
        all: bool,
        #[arg(long, value_name = "ID")]
        claim: Vec<String>,
        /// List the claim ids.
        #[arg(long)]
        list: bool,
        /// Include elapsed milliseconds in each line.
        #[arg(long)]
        timing: bool,
    },
    /// Write figure data as CSV files.
    Figure {
        /// fig4, fig5, fig6 or all.
        #[arg(long, default_value = "all")]
        fig: String,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Beta-splitting distribution on n leaves.
    Beta {
        #[arg(long)]
        n: usize,
        /// p/q, integer, decimal, -2 (comb endpoint) or inf.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Multinomial model from a parameter file {skeleton, weights}.
    Multinomial {
        #[arg(long, value_name = "FILE")]
        params: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Markov branching distribution from a rule file: one rule {n, q} (lower
    /// levels are derived) or an array of rules for levels 2..n.
    Markov {
        #[arg(long, value_name = "FILE")]
        rule: PathBuf,
    },
    /// The level n-1 rule forced by sampling consistency.
    Lower {
        #[arg(long, value_name = "FILE")]
        rule: PathBuf,
    },
    /// Leaf-edge multinomial parameters for a shape.
    Dm {
        #[command(flatten)]
        input: ShapeInput,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ShapeInput {
    /// Shape encoding, e.g. "((*,*),(*,*))".
    #[arg(long)]
    tree: Option<String>,
    /// File with one shape per line (# comments allowed).
    #[arg(long, value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

struct Printer {
    decimal: Option<usize>,
}

impl Printer {
    fn num(&self, r: &Rational) -> String {
        match self.decimal {
            Some(k) => format_decimal(r, k),
            None => format_rational(r),
        }
    }

    fn distribution(&self, d: &ShapeDistribution) -> String {
        d.entries()
            .iter()
            .map(|(t, p)| format!("{}: {}", shape_name(t), self.num(p)))
            .collect::<Vec<_>>()
            .join("  ")
    }

    fn values(&self, v: &[Rational]) -> String {
        v.iter().map(|r| self.num(r)).collect::<Vec<_>>().join(" ")
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn shapes_from(input: &ShapeInput) -> Result<Vec<TreeShape>> {
    match (&input.tree, &input.file) {
        (Some(t), _) => Ok(vec![parse_shape(t)?]),
        (None, Some(path)) => {
            let shapes = parse_shape_list(&read(path)?)?;
            if shapes.is_empty() {
                return Err(Error::domain(format!("{} contains no shapes", path.display())));
            }
            Ok(shapes)
        }
        (None, None) => Err(Error::domain("give --tree or --file")),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

/// Runs the command, writing to `out`. Returns whether every verification passed.
fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let caps = Caps::from_env()?;
    let pr = Printer {
        decimal: cli.decimal,
    };
    let io_err = |e: io::Error| Error::io("<stdout>", e);
    match cli.command {
        Command::Enumerate { n, names } => {
            for t in enumerate_shapes(n)?.iter() {
                if names {
                    writeln!(out, "{}\t{}", t.encoding(), shape_name(t)).map_err(io_err)?;
                } else {
                    writeln!(out, "{}", t.encoding()).map_err(io_err)?;
                }
            }
        }
        Command::Density { input, n } => {
            let shapes = shapes_from(&input)?;
            let several = shapes.len() > 1;
            for t in shapes {
                let row = density_row_with(&t, n, &caps)?;
                if several {
                    write!(out, "{}  ", t.encoding()).map_err(io_err)?;
                }
                writeln!(out, "{}", pr.distribution(&row)).map_err(io_err)?;
            }
        }
        Command::Project {
            n,
            m,
            dist,
            format,
            out: target,
        } => {
            let text = match dist {
                Some(path) => {
                    let p = ShapeDistribution::from_json(&read(&path)?)?;
                    if m.is_some_and(|m| m != p.n()) {
                        return Err(Error::domain(format!(
                            "--m does not match the distribution's {} leaves",
                            p.n()
                        )));
                    }
                    let q = marginalize_with(&p, n, &caps)?;
                    match format {
                        Format::Json => pretty(&q.to_json()),
                        Format::Csv => pr.distribution(&q) + "\n",
                    }
                }
                None => {
                    let m = m.ok_or_else(|| Error::domain("give --m or --dist"))?;
                    let matrix = density_matrix_with(n, m, &caps)?;
                    match format {
                        Format::Json => pretty(&matrix.to_json()),
                        Format::Csv => {
                            let mut buf = Vec::new();
                            matrix.write_csv(&mut buf)?;
                            String::from_utf8(buf).expect("csv output is UTF-8")
                        }
                    }
                }
            };
            match target {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io_err)?,
            }
        }
        Command::Hull { n, m, json } => {
            let poly = ex_polytope_with(n, m, &caps)?;
            writeln!(
                out,
                "EX_{n}^{m}: {} points, {} distinct, {} vertices",
                poly.points().len(),
                poly.point_set().distinct_count(),
                poly.vertices().len()
            )
            .map_err(io_err)?;
            // planar order when the projection is two dimensional
            let order: Vec<usize> = if poly.dim() == 3 {
                let projected: Vec<Vec<Rational>> = poly
                    .vertices()
                    .iter()
                    .map(|&v| project_2d(&poly.points()[v]))
                    .collect();
                convex_hull_2d(&projected)
            } else {
                (0..poly.vertices().len()).collect()
            };
            for k in order {
                let v = poly.vertices()[k];
                writeln!(
                    out,
                    "({})  {}",
                    pr.values(&poly.points()[v]).replace(' ', ", "),
                    poly.vertex_provenance(v).join(" ")
                )
                .map_err(io_err)?;
            }
            if let Some(path) = json {
                write_file(&path, &pretty(&poly.to_json()))?;
            }
        }
        Command::Model { model } => match model {
            ModelCommand::Beta { n, beta } => {
                let d = beta_distribution(n, &BetaParam::parse(&beta)?)?;
                writeln!(out, "{}", pr.distribution(&d)).map_err(io_err)?;
            }
            ModelCommand::Multinomial { params, n } => {
                let params = MultinomialParams::from_json(&read(&params)?)?;
                let d = multinomial_distribution(&params, n)?;
                writeln!(out, "{}", pr.distribution(&d)).map_err(io_err)?;
            }
            ModelCommand::Markov { rule } => {
                let text = read(&rule)?;
                let value: serde_json::Value = serde_json::from_str(&text)?;
                let rules = match value {
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|v| SplittingRule::from_json(&v.to_string()))
                        .collect::<Result<Vec<_>>>()?,
                    _ => consistent_rules(&SplittingRule::from_json(&text)?)?,
                };
                let d = markov_branching_distribution(&rules)?;
                writeln!(out, "{}", pr.distribution(&d)).map_err(io_err)?;
            }
            ModelCommand::Lower { rule } => {
                let lower = derive_lower_rule(&SplittingRule::from_json(&read(&rule)?)?)?;
                writeln!(out, "n = {}: {}", lower.n(), pr.values(lower.values())).map_err(io_err)?;
            }
            ModelCommand::Dm { input } => {
                for t in shapes_from(&input)? {
                    out.write_all(pretty(&dm_construction(&t)?.to_json()).as_bytes())
                        .map_err(io_err)?;
                }
            }
        },
        Command::Verify {
            all,
            claim,
            list,
            timing,
        } => {
            if list {
                for id in experiments::claim_ids() {
                    writeln!(out, "{id}").map_err(io_err)?;
                }
                return Ok(true);
            }
            let reports = if all || claim.is_empty() {
                experiments::run_all(&caps)
            } else {
                claim
                    .iter()
                    .map(|id| experiments::run_claim_by_id(id, &caps))
                    .collect::<Result<Vec<_>>>()?
            };
            let mut ok = true;
            for r in &reports {
                ok &= r.status != Status::Fail;
                writeln!(out, "{}", r.to_json(timing)).map_err(io_err)?;
            }
            return Ok(ok);
        }
        Command::Figure { fig, out: dir } => {
            let figures = if fig.eq_ignore_ascii_case("all") {
                Figure::ALL.to_vec()
            } else {
                vec![fig.parse::<Figure>()?]
            };
            for f in figures {
                let summary = emit_figure_data(f, &dir, &caps)?;
                for note in &summary.notes {
                    writeln!(out, "{note}").map_err(io_err)?;
                }
                for path in &summary.files {
                    writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
