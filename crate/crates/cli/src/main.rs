use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use odeinv_cli::spec::{ModeSpec, OrderSpec};
use odeinv_cli::{lie_chain, run_many, run_query, write_atomic, CliError, QuerySpec, RunReport, SystemSpec, TemplateSpec};

/// Algebraic invariants, strongest postconditions and weakest preconditions
/// of polynomial ODEs.
#[derive(Parser)]
#[command(name = "odeinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run each spec's own query (corpus mode).
    Run {
        specs: Vec<PathBuf>,
        /// Directory receiving one `<spec>.json` report per spec.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Print JSON reports instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Strongest algebraic postcondition for a template.
    Post {
        #[command(flatten)]
        common: Common,
        /// Complete template of this degree.
        #[arg(long, conflicts_with = "template")]
        degree: Option<u32>,
        /// Variables of the complete template (default: all).
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        /// Extra monomial atoms for the complete template.
        #[arg(long = "atom")]
        atoms: Vec<String>,
        /// Explicit template expression.
        #[arg(long, requires = "params")]
        template: Option<String>,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Read J as the weakest precondition of the discovered postcondition.
        #[arg(long)]
        weakest_precondition: bool,
    },
    /// Weakest algebraic precondition of a postcondition.
    Pre {
        #[command(flatten)]
        common: Common,
        #[arg(long = "postcondition", short = 'p')]
        postcondition: Vec<String>,
    },
    /// Decide a safety assertion from the spec's precondition.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long = "postcondition", short = 'p')]
        postcondition: Vec<String>,
    },
    /// Whether an ideal is closed under the Lie derivative.
    Invariant {
        #[command(flatten)]
        common: Common,
        #[arg(long = "generator", short = 'g')]
        generators: Vec<String>,
    },
    /// Print iterated Lie derivatives of a polynomial or of the post template.
    Lie {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// Run the spec's query and cross-check the result with RK4.
    VerifyNumeric {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// Spec file (TOML, or JSON with a `.json` extension).
    #[arg(required = false)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    order: Option<OrderSpec>,
    #[arg(long, value_enum)]
    mode: Option<ModeSpec>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    pair_budget: Option<usize>,
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Also run the RK4 cross-check.
    #[arg(long)]
    numeric: bool,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn apply(&self, spec: &mut SystemSpec) {
        let o = &mut spec.options;
        if let Some(v) = self.order {
            o.order = v;
        }
        if let Some(v) = self.max_iterations {
            o.max_iterations = v;
        }
        if let Some(v) = self.pair_budget {
            o.pair_budget = v;
        }
        if let Some(v) = self.degree_cap {
            o.degree_cap = v;
        }
        o.numeric_check |= self.numeric;
        if self.mode.is_some() {
            spec.precondition.mode = self.mode;
        }
    }

    fn load(&self) -> Result<SystemSpec, CliError> {
        let path = self.spec.as_ref().ok_or_else(|| CliError::Spec("a spec file is required".into()))?;
        let mut spec = SystemSpec::load(path)?;
        self.apply(&mut spec);
        Ok(spec)
    }

    fn emit(&self, report: &RunReport) -> Result<(), CliError> {
        if let Some(path) = &self.report {
            write_atomic(path, &report.to_json())?;
        }
        if self.json {
            println!("{}", report.to_json());
        } else {
            print!("{}", report.to_text());
        }
        Ok(())
    }
}

/// The query from the command line when given, else the spec's own query if
/// it has the requested kind.
fn pick_query(spec: &SystemSpec, kind: &str, given: Option<QuerySpec>) -> Result<QuerySpec, CliError> {
    match (given, &spec.query) {
        (Some(q), _) => Ok(q),
        (None, Some(q)) if q.kind() == kind => Ok(q.clone()),
        _ => Err(CliError::Spec(format!("no `{kind}` query on the command line or in the spec"))),
    }
}

fn single(common: &Common, kind: &str, given: Option<QuerySpec>) -> Result<i32, CliError> {
    let spec = common.load()?;
    let query = pick_query(&spec, kind, given)?;
    let system = spec.compile()?;
    let report = run_query(&system, &query)?;
    common.emit(&report)?;
    Ok(report.exit_code())
}

fn nonempty(v: &[String]) -> Option<Vec<String>> {
    (!v.is_empty()).then(|| v.to_vec())
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { specs, out_dir, threads, json } => {
            let mut worst = 0;
            let results = run_many(&specs, threads);
            for (path, result) in results {
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report").to_string();
                match result {
                    Ok(None) => println!("{stem}: data only, skipped"),
                    Ok(Some(report)) => {
                        if let Some(dir) = &out_dir {
                            write_atomic(&dir.join(format!("{stem}.json")), &report.to_json())?;
                        }
                        if json {
                            println!("{}", report.to_json());
                        } else {
                            print!("{}", report.to_text());
                        }
                        worst = worst.max(report.exit_code());
                    }
                    Err(e) => {
                        eprintln!("{stem}: {e}");
                        worst = worst.max(e.exit_code());
                    }
                }
            }
            Ok(worst)
        }
        Command::Post { common, degree, vars, atoms, template, params, weakest_precondition } => {
            let given = match (degree, template) {
                (Some(degree), None) => Some(TemplateSpec::Complete { degree, variables: vars, extra_atoms: atoms }),
                (None, Some(expression)) => Some(TemplateSpec::Explicit { expression, parameters: params }),
                _ => None,
            };
            let given = given.map(|template| QuerySpec::Post { template, weakest_precondition });
            single(&common, "post", given)
        }
        Command::Pre { common, postcondition } => {
            single(&common, "pre", nonempty(&postcondition).map(|postcondition| QuerySpec::Pre { postcondition }))
        }
        Command::Check { common, postcondition } => {
            single(&common, "check", nonempty(&postcondition).map(|postcondition| QuerySpec::Check { postcondition }))
        }
        Command::Invariant { common, generators } => {
            single(&common, "invariant", nonempty(&generators).map(|generators| QuerySpec::Invariant { generators }))
        }
        Command::Lie { common, poly, steps } => {
            let spec = common.load()?;
            let system = spec.compile()?;
            match poly {
                Some(text) => {
                    let p = system.parse(&text, "polynomial")?;
                    for (j, d) in lie_chain(&system, &p, steps)?.iter().enumerate() {
                        println!("L^{j}: {d}");
                    }
                }
                None => {
                    let Some(QuerySpec::Post { template, .. }) = &spec.query else {
                        return Err(CliError::Spec("give --poly or a spec with a post query".into()));
                    };
                    let mut t = system.template(template)?;
                    for j in 0..=steps {
                        println!("pi^({j}): {t}");
                        t = t.lie(&system.field)?;
                    }
                }
            }
            Ok(0)
        }
        Command::VerifyNumeric { common, samples, horizon, step, tolerance } => {
            let mut spec = common.load()?;
            spec.options.numeric_check = true;
            let n = &mut spec.numeric;
            n.samples = samples.unwrap_or(n.samples);
            n.horizon = horizon.unwrap_or(n.horizon);
            n.step = step.unwrap_or(n.step);
            n.tolerance = tolerance.unwrap_or(n.tolerance);
            let query = spec.query.clone().ok_or_else(|| CliError::Spec("the spec has no query".into()))?;
            let report = run_query(&spec.compile()?, &query)?;
            common.emit(&report)?;
            Ok(if report.content.numeric.as_ref().is_some_and(|n| n.passed()) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
