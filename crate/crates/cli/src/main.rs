use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gp_core::formulas::{self as f, JoinInputs, Prediction};
use gp_core::io::{self, Format};
use gp_core::verify::{self, Grid, Manifest, Suite, TableFormat, THEOREMS};
use gp_core::{
    characterization_check, gp_auto, gp_diam2, gp_exact, invariants, parse_graph, Budget, DistanceMatrix, Graph,
    Invariant, Status, VertexSet,
};

const DEFAULT_BUDGET_MS: u64 = 10_000;

/// Exact general position numbers of graphs.
#[derive(Parser)]
#[command(name = "gpnum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from an expression and print or save it.
    Construct {
        /// Graph expression, e.g. "kneser(7,3)" or "cartesian(K3,P4)".
        expr: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Graph6)]
        format: OutFormat,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute gp(G).
    Gp {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compute one of omega, alpha, eta, rho.
    Invariant {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        which: Invariant,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Evaluate a closed-form prediction.
    Predict {
        #[arg(long)]
        theorem: String,
        /// Parameter as key=value; repeatable. Graph-valued keys g and h
        /// take expressions.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Sweep theorem grids and compare predictions with the solver.
    Verify {
        /// Theorem id; repeatable.
        #[arg(long, required_unless_present = "all")]
        theorem: Vec<String>,
        #[arg(long, conflicts_with = "theorem")]
        all: bool,
        #[arg(long, conflicts_with = "stretch")]
        quick: bool,
        #[arg(long)]
        stretch: bool,
        /// Grid as TOML instead of the manifest, e.g. "n = [4, 5]".
        #[arg(long, conflicts_with_all = ["all", "quick", "stretch"])]
        grid: Option<String>,
        /// Exit with 3 when any point ran out of budget.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = TableArg::Csv)]
        format: TableArg,
        /// Run grid points on all cores; output order is unchanged.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Test a vertex set with both the definition and the characterization.
    CheckSet {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Graph file (graph6, or JSON for *.json).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Graph expression.
    #[arg(long)]
    expr: Option<String>,
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, &self.expr) {
            (Some(path), _) => io::read_graph(path).with_context(|| format!("reading {}", path.display())),
            (_, Some(e)) => Ok(parse_graph(e)?),
            _ => unreachable!("clap requires one input"),
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Search node limit per solver call.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock limit per solver call; defaults to $GP_BUDGET_MS or 10000.
    #[arg(long)]
    budget_ms: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget> {
        let ms = match self.budget_ms {
            Some(ms) => ms,
            None => match std::env::var("GP_BUDGET_MS") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .with_context(|| format!("GP_BUDGET_MS={v:?} is not an integer"))?,
                Err(_) => DEFAULT_BUDGET_MS,
            },
        };
        Ok(Budget::millis(ms).with_nodes(self.budget_nodes))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Graph6,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Diam2,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Csv,
    JsonLines,
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Construct { expr, format, out } => {
            let g = parse_graph(&expr)?;
            let format = match format {
                OutFormat::Graph6 => Format::Graph6,
                OutFormat::Json => Format::Json,
            };
            match out {
                Some(path) => io::write_graph(&g, &path, format)?,
                None => {
                    let text = io::encode(&g, format);
                    println!("{}", text.trim_end());
                }
            }
        }
        Command::Gp { input, method, budget } => {
            let g = input.load()?;
            let budget = budget.budget()?;
            let r = match method {
                MethodArg::Auto => gp_auto(&g, budget),
                MethodArg::Exact => gp_exact(&g, budget),
                MethodArg::Diam2 => gp_diam2(&g, budget)?,
            };
            print_json(&r)?;
        }
        Command::Invariant { input, which, budget } => {
            let g = input.load()?;
            print_json(&invariants::compute(which, &g, budget.budget()?))?;
        }
        Command::Predict {
            theorem,
            params,
            budget,
        } => {
            let params = parse_params(&params)?;
            print_json(&predict(&theorem, &params, budget.budget()?)?)?;
        }
        Command::Verify {
            theorem,
            all,
            quick: _,
            stretch,
            grid,
            strict,
            format,
            parallel,
            budget,
        } => {
            let budget = budget.budget()?;
            let ids: Vec<String> = if all {
                THEOREMS.iter().map(|s| s.to_string()).collect()
            } else {
                theorem
            };
            let custom = grid.as_deref().map(Grid::parse).transpose()?;
            let manifest = Manifest::builtin();
            let suite = if stretch { Suite::Stretch } else { Suite::Quick };
            // validate every id and grid before running anything
            let jobs = ids
                .iter()
                .map(|id| {
                    let g = match &custom {
                        Some(g) => g.clone(),
                        None => manifest.grid(id, suite)?.clone(),
                    };
                    Ok((id.as_str(), g))
                })
                .collect::<Result<Vec<_>>>()?;
            let format = match format {
                TableArg::Csv => TableFormat::Csv,
                TableArg::JsonLines => TableFormat::JsonLines,
            };
            let mut reports = Vec::new();
            for (id, g) in jobs {
                let r = if parallel {
                    verify::run_verify_parallel(id, &g, budget)
                } else {
                    verify::run_verify(id, &g, budget)
                };
                reports.extend(r?);
            }
            let mut out = std::io::stdout().lock();
            out.write_all(verify::emit_table(&reports, format).as_bytes())?;
            return Ok(verify::exit_code(&reports, strict) as u8);
        }
        Command::CheckSet { input, set } => {
            let g = input.load()?;
            let s = VertexSet::from_unsorted(set);
            s.check_range(g.n())?;
            print_json(&check_set(&g, &s)?)?;
        }
    }
    Ok(0)
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<Value> {
    let dm = DistanceMatrix::new(g);
    let triple = gp_core::gp::find_between_triple(&dm, s);
    let by_definition = triple.is_none();
    let mut out = json!({
        "n": g.n(),
        "set": s,
        "is_general_position": by_definition,
        "between_triple": triple.map(|(u, w, v)| json!({ "u": u, "w": w, "v": v })),
    });
    match characterization_check(g, &dm, s) {
        Ok(c) => {
            out["agree"] = json!(c.is_valid() == by_definition);
            out["characterization"] = serde_json::to_value(c)?;
        }
        Err(e) => {
            out["characterization"] = Value::Null;
            out["characterization_error"] = json!(e.to_string());
        }
    }
    Ok(out)
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    raw.iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| anyhow!("parameter {p:?} is not key=value"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

struct Params<'a>(&'a BTreeMap<String, String>);

impl Params<'_> {
    fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| anyhow!("missing parameter {key}"))
    }

    fn num(&self, key: &str) -> Result<usize> {
        let v = self.raw(key)?;
        v.parse()
            .with_context(|| format!("parameter {key}={v:?} is not a non-negative integer"))
    }

    fn graph(&self, key: &str) -> Result<Option<Graph>> {
        self.0.get(key).map(|e| parse_graph(e).map_err(Into::into)).transpose()
    }

    fn only(&self, keys: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => bail!("unexpected parameter {k} (expected {})", keys.join(", ")),
            None => Ok(()),
        }
    }
}

fn exact(r: gp_core::InvariantResult, what: &str) -> Result<usize> {
    if r.status != Status::Exact {
        bail!("{what} did not finish within the budget");
    }
    Ok(r.value)
}

fn predict(theorem: &str, raw: &BTreeMap<String, String>, budget: Budget) -> Result<Prediction> {
    let p = Params(raw);
    let graphs = p.0.contains_key("g") || p.0.contains_key("h");
    Ok(match theorem {
        "thm2.2" | "thm2.4" | "thm4.4" => {
            p.only(&["n"])?;
            let n = p.num("n")?;
            match theorem {
                "thm2.2" => f::gp_kneser2(n),
                "thm2.4" => f::gp_kneser3(n),
                _ => f::gp_line_complete(n),
            }
        }
        "thm2.3" | "ekr" => {
            p.only(&["n", "k"])?;
            let (n, k) = (p.num("n")?, p.num("k")?);
            if theorem == "ekr" {
                f::ekr_bound(n, k)
            } else {
                f::kneser_condition(n, k)
            }
        }
        "thm3.2" => {
            p.only(&["ns"])?;
            let ns = p
                .raw("ns")?
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .context("ns must be a comma-separated list of integers")?;
            f::hamming_lower(&ns)
        }
        "thm3.1" if graphs => {
            p.only(&["g", "h"])?;
            let (g, h) = (p.graph("g")?.context("missing g")?, p.graph("h")?.context("missing h")?);
            let (rg, rh) = (gp_exact(&g, budget), gp_exact(&h, budget));
            if rg.status != Status::Exact || rh.status != Status::Exact {
                bail!("factor gp did not finish within the budget");
            }
            f::gp_cartesian_lower(rg.value, rh.value, g.n(), h.n())
        }
        "thm3.1" => {
            p.only(&["gp_g", "gp_h", "n_g", "n_h"])?;
            f::gp_cartesian_lower(p.num("gp_g")?, p.num("gp_h")?, p.num("n_g")?, p.num("n_h")?)
        }
        "thm4.1" if graphs => {
            p.only(&["g"])?;
            let g = p.graph("g")?.context("missing g")?;
            f::gp_diameter_two(
                exact(invariants::omega(&g, budget), "omega")?,
                exact(invariants::eta(&g, budget), "eta")?,
                exact(invariants::rho(&g, budget), "rho")?,
            )
        }
        "thm4.1" => {
            p.only(&["omega", "eta", "rho"])?;
            f::gp_diameter_two(p.num("omega")?, p.num("eta")?, p.num("rho")?)
        }
        "prop4.2" if graphs => {
            p.only(&["g", "h"])?;
            let (g, h) = (p.graph("g")?.context("missing g")?, p.graph("h")?.context("missing h")?);
            let inv = |which: Invariant, x: &Graph| exact(invariants::compute(which, x, budget), which.name());
            f::gp_join(JoinInputs {
                omega_g: inv(Invariant::Omega, &g)?,
                omega_h: inv(Invariant::Omega, &h)?,
                eta_g: inv(Invariant::Eta, &g)?,
                eta_h: inv(Invariant::Eta, &h)?,
                rho_g: inv(Invariant::Rho, &g)?,
                rho_h: inv(Invariant::Rho, &h)?,
                both_complete: g.is_complete() && h.is_complete(),
                n_g: g.n(),
                n_h: h.n(),
            })
        }
        "prop4.2" => {
            let keys = [
                "omega_g",
                "omega_h",
                "eta_g",
                "eta_h",
                "rho_g",
                "rho_h",
                "both_complete",
                "n_g",
                "n_h",
            ];
            p.only(&keys)?;
            let both_complete = match p.0.get("both_complete").map(String::as_str) {
                None | Some("false") => false,
                Some("true") => true,
                Some(v) => bail!("both_complete={v:?} is not true/false"),
            };
            f::gp_join(JoinInputs {
                omega_g: p.num("omega_g")?,
                omega_h: p.num("omega_h")?,
                eta_g: p.num("eta_g")?,
                eta_h: p.num("eta_h")?,
                rho_g: p.num("rho_g")?,
                rho_h: p.num("rho_h")?,
                both_complete,
                n_g: p.num("n_g")?,
                n_h: p.num("n_h")?,
            })
        }
        "thm4.3" if graphs => {
            p.only(&["g", "h"])?;
            let (g, h) = (p.graph("g")?.context("missing g")?, p.graph("h")?.context("missing h")?);
            let rho = invariants::rho(&h, budget);
            let mut pred = f::gp_corona(g.n(), exact(rho.clone(), "rho")?);
            if pred.applicable {
                pred.witness = Some(f::corona_witness(g.n(), &h, &rho.witness)?);
            }
            pred
        }
        "thm4.3" => {
            p.only(&["n_g", "rho_h"])?;
            f::gp_corona(p.num("n_g")?, p.num("rho_h")?)
        }
        other => bail!("unknown theorem id '{other}' (known: {})", THEOREMS.join(", ")),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
