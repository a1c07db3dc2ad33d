//! `oinf` command-line front end.
//!
//! Every command prints one report, as JSON by default or as TSV with `--format tsv`.
//! Usage errors exit with status 1; domain errors exit with status 2 and print
//! `{"error": <name>, "message": <text>}`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use oinf::category_o::{Basis, BasisSymbol, CategoryO, OError, DEFAULT_WINDOW_LIMIT};
use oinf::coxeter::{bruhat_leq, CoxeterError, Family, GroupElement};
use oinf::hecke::{HeckeError, KlTable, LaurentV};
use oinf::weights::{
    classify, format_rational, rho, Algebra, BorelOrder, Diagram, Weight, WeightError,
};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(
    name = "oinf",
    version,
    about = "Exact computations in category O for gl(∞) and sl(∞)"
)]
struct Cli {
    /// Ambient algebra for weight literals.
    #[arg(long, global = true, default_value = "gl")]
    alg: String,
    /// Borel order: one-sided, two-sided or layered:<chains>.
    #[arg(long, global = true, default_value = "one-sided")]
    order: String,
    /// KL cache file, loaded before and saved after the run.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModuleKind {
    Verma,
    Simple,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrality, (almost) dominance and regularity of a weight.
    Classify {
        #[arg(long)]
        weight: String,
    },
    /// Coordinates of ρ for a diagram (a1, a2, b, c, d, gl or a layered order).
    Rho {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 8)]
        positions: u64,
    },
    /// The dot action `w·λ`.
    Dot {
        #[arg(long)]
        w: String,
        #[arg(long)]
        weight: String,
    },
    /// Reduction to the antidominant weight of the orbit.
    Reduce {
        #[arg(long)]
        weight: String,
    },
    /// Whether two weights lie in the same block.
    Block {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        mu: String,
    },
    /// A descending reflection chain from `--weight` down to `--mu`.
    Linkage {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        mu: String,
    },
    /// Simplicity, finite length and socle of a Verma module.
    Status {
        #[arg(long)]
        weight: String,
    },
    /// Composition multiplicities `[M(λ) : L(ν)]`.
    Mult {
        #[arg(long)]
        weight: String,
        /// Report a single multiplicity instead of the whole orbit.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Expansion of a Verma or simple class in the other basis.
    Decompose {
        #[arg(long)]
        weight: String,
        #[arg(long, value_enum, default_value_t = ModuleKind::Simple)]
        module: ModuleKind,
    },
    /// Weight multiplicities of a module on a window.
    Char {
        #[arg(long)]
        weight: String,
        #[arg(long, value_enum, default_value_t = ModuleKind::Verma)]
        module: ModuleKind,
        /// `<lower>,<upper>`; the split point is the unique comma giving two valid literals.
        #[arg(long, conflicts_with_all = ["lower", "upper"])]
        window: Option<String>,
        #[arg(long, requires = "upper")]
        lower: Option<String>,
        #[arg(long, requires = "lower")]
        upper: Option<String>,
    },
    /// Co-Verma multiplicities of the truncated injective hull of `--mu` below `--cap`.
    Reciprocity {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        cap: String,
    },
    /// Kazhdan-Lusztig polynomial `P_{x,y}`.
    Klpoly {
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// R-polynomial `R_{x,y}`.
    Rpoly {
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Bruhat comparison `x ≤ y`.
    Bruhat {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The descending chain of Verma embeddings below `(2,2,3,4,…)`.
    DemoVermaChain {
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain { name: &'static str, message: String },
}

impl CliError {
    fn domain(name: &'static str, message: impl ToString) -> Self {
        CliError::Domain {
            name,
            message: message.to_string(),
        }
    }
}

impl From<OError> for CliError {
    fn from(e: OError) -> Self {
        CliError::domain(e.name(), &e)
    }
}

impl From<HeckeError> for CliError {
    fn from(e: HeckeError) -> Self {
        CliError::domain(e.name(), &e)
    }
}

impl From<CoxeterError> for CliError {
    fn from(e: CoxeterError) -> Self {
        CliError::domain(e.name(), &e)
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::domain(e.name(), &e)
    }
}

type CliResult<T> = Result<T, CliError>;

struct Context {
    algebra: Algebra,
    order: BorelOrder,
    table: Arc<KlTable>,
    window_limit: usize,
}

impl Context {
    fn weight(&self, text: &str) -> CliResult<Weight> {
        Weight::parse(text, self.algebra)
            .map_err(|e| CliError::Usage(format!("invalid weight {text:?}: {e}")))
    }

    fn category(&self) -> CliResult<CategoryO> {
        Ok(CategoryO::new()
            .with_order(self.order.clone())?
            .with_table(self.table.clone())
            .with_window_limit(self.window_limit))
    }
}

fn element(text: &str) -> CliResult<GroupElement> {
    text.parse()
        .map_err(|e| CliError::Usage(format!("invalid group element {text:?}: {e}")))
}

fn typed_pair(family: &str, x: &str, y: &str) -> CliResult<(GroupElement, GroupElement)> {
    let family: Family = family
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid type {family:?}: {e}")))?;
    let (x, y) = (element(x)?, element(y)?);
    for g in [&x, &y] {
        if g.family() != family && !g.is_identity() {
            return Err(CliError::Usage(format!("{g} is not of type {family}")));
        }
    }
    Ok((x, y))
}

/// Splits `lo,hi` at the unique comma where both halves are valid weight literals.
fn split_window(ctx: &Context, text: &str) -> CliResult<(Weight, Weight)> {
    let splits: Vec<(Weight, Weight)> = text
        .match_indices(',')
        .filter_map(|(i, _)| {
            let lo = Weight::parse(text[..i].trim(), ctx.algebra).ok()?;
            let hi = Weight::parse(text[i + 1..].trim(), ctx.algebra).ok()?;
            Some((lo, hi))
        })
        .collect();
    match <[_; 1]>::try_from(splits) {
        Ok([pair]) => Ok(pair),
        Err(v) if v.is_empty() => Err(CliError::Usage(format!("invalid window {text:?}"))),
        Err(_) => Err(CliError::Usage(format!(
            "ambiguous window {text:?}; use --lower and --upper"
        ))),
    }
}

fn coefficients(p: &LaurentV) -> String {
    p.q_coefficients()
        .map(|c| {
            c.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_else(|| p.to_string())
}

fn basis_name(symbol: &BasisSymbol) -> &'static str {
    match symbol {
        BasisSymbol::Verma(_) => "verma",
        BasisSymbol::Simple(_) => "simple",
    }
}

fn run(cli: &Cli, ctx: &Context) -> CliResult<Value> {
    let o = || ctx.category();
    Ok(match &cli.command {
        Command::Classify { weight } => {
            let lambda = ctx.weight(weight)?;
            let c = classify(&lambda, &ctx.order)?;
            let mut report = Map::new();
            report.insert("weight".into(), json!(lambda.to_string()));
            if let Value::Object(fields) = serde_json::to_value(c).expect("serializable") {
                report.extend(fields);
            }
            Value::Object(report)
        }
        Command::Rho { diagram, positions } => {
            let d: Diagram = diagram
                .parse()
                .map_err(|e| CliError::Usage(format!("invalid diagram {diagram:?}: {e}")))?;
            let r = rho(&d)?;
            let values: Vec<String> = (1..=*positions)
                .map(|k| format_rational(&r.value(k)))
                .collect();
            json!({ "diagram": diagram, "rho": r.to_string(), "values": values.join(" ") })
        }
        Command::Dot { w, weight } => {
            let (g, lambda) = (element(w)?, ctx.weight(weight)?);
            let result = o()?.dot_act(&g, &lambda)?;
            json!({ "w": g.to_string(), "weight": lambda.to_string(), "result": result.to_string() })
        }
        Command::Reduce { weight } => {
            let lambda = ctx.weight(weight)?;
            let (xi, chain) = o()?.to_antidominant(&lambda)?;
            json!({
                "weight": lambda.to_string(),
                "antidominant": xi.to_string(),
                "chain": chain.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            })
        }
        Command::Block { weight, mu } => {
            let (lambda, mu) = (ctx.weight(weight)?, ctx.weight(mu)?);
            let same = o()?.same_block(&lambda, &mu);
            json!({ "weight": lambda.to_string(), "mu": mu.to_string(), "same_block": same })
        }
        Command::Linkage { weight, mu } => {
            let (lambda, mu) = (ctx.weight(weight)?, ctx.weight(mu)?);
            let chain = o()?.strongly_linked(&mu, &lambda)?;
            json!({
                "weight": lambda.to_string(),
                "mu": mu.to_string(),
                "linked": chain.is_some(),
                "chain": chain.unwrap_or_default().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            })
        }
        Command::Status { weight } => {
            let lambda = ctx.weight(weight)?;
            let s = o()?.verma_status(&lambda)?;
            json!({
                "weight": lambda.to_string(),
                "simple": s.simple,
                "finite_length": s.finite_length,
                "socle": s.socle_highest_weight.map(|w| w.to_string()),
                "chain_to_antidominant": s
                    .chain_to_antidominant
                    .map(|c| c.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
            })
        }
        Command::Mult {
            weight,
            mu: Some(mu),
        } => {
            let (lambda, mu) = (ctx.weight(weight)?, ctx.weight(mu)?);
            let m = o()?.verma_multiplicity(&lambda, &mu)?;
            json!({ "weight": lambda.to_string(), "mu": mu.to_string(), "mult": m.to_string() })
        }
        Command::Mult { weight, mu: None } => {
            let lambda = ctx.weight(weight)?;
            let report = o()?.multiplicity_report(&lambda)?;
            let elements: Vec<Value> = report
                .elements
                .iter()
                .map(|e| json!({ "weight": e.weight.to_string(), "x": e.x.to_string(), "mult": e.mult.to_string() }))
                .collect();
            json!({ "base": report.base.to_string(), "elements": elements })
        }
        Command::Decompose { weight, module } => {
            let lambda = ctx.weight(weight)?;
            let (symbol, target) = match module {
                ModuleKind::Verma => (BasisSymbol::Verma(lambda.clone()), Basis::Simple),
                ModuleKind::Simple => (BasisSymbol::Simple(lambda.clone()), Basis::Verma),
            };
            let sum = o()?.grothendieck_decompose(&symbol, target)?;
            let terms: Vec<Value> = sum
                .terms()
                .iter()
                .map(|(s, c)| json!({ "basis": basis_name(s), "weight": s.weight().to_string(), "coeff": c.to_string() }))
                .collect();
            json!({ "module": basis_name(&symbol), "weight": lambda.to_string(), "terms": terms })
        }
        Command::Char {
            weight,
            module,
            window,
            lower,
            upper,
        } => {
            let lambda = ctx.weight(weight)?;
            let (lo, hi) = match (window, lower, upper) {
                (Some(w), _, _) => split_window(ctx, w)?,
                (None, Some(l), Some(u)) => (ctx.weight(l)?, ctx.weight(u)?),
                _ => (lambda.clone(), lambda.clone()),
            };
            let symbol = match module {
                ModuleKind::Verma => BasisSymbol::Verma(lambda.clone()),
                ModuleKind::Simple => BasisSymbol::Simple(lambda.clone()),
            };
            let ch = o()?.character_window(&symbol, &lo, &hi)?;
            let dims: Vec<Value> = ch
                .dims
                .iter()
                .map(|(w, d)| json!([w.to_string(), d.to_string()]))
                .collect();
            json!({
                "module": basis_name(&symbol),
                "weight": lambda.to_string(),
                "window": [lo.to_string(), hi.to_string()],
                "dims": dims,
            })
        }
        Command::Reciprocity { mu, cap } => {
            let (mu, cap) = (ctx.weight(mu)?, ctx.weight(cap)?);
            let r = o()?.trunc_reciprocity(&mu, &cap)?;
            let elements: Vec<Value> = r
                .iter()
                .map(|(w, m)| json!({ "weight": w.to_string(), "mult": m.to_string() }))
                .collect();
            json!({ "mu": mu.to_string(), "cap": cap.to_string(), "elements": elements })
        }
        Command::Klpoly { family, x, y } => {
            let (x, y) = typed_pair(family, x, y)?;
            let p = ctx.table.kl_poly(&x, &y)?;
            let mu = ctx.table.mu(&x, &y)?;
            json!({
                "type": family,
                "x": x.to_string(),
                "y": y.to_string(),
                "coefficients": coefficients(&p),
                "mu": mu.to_string(),
            })
        }
        Command::Rpoly { family, x, y } => {
            let (x, y) = typed_pair(family, x, y)?;
            let r = ctx.table.r_poly(&x, &y)?;
            json!({ "type": family, "x": x.to_string(), "y": y.to_string(), "coefficients": coefficients(&r) })
        }
        Command::Bruhat { x, y } => {
            let (x, y) = (element(x)?, element(y)?);
            json!({
                "x": x.to_string(),
                "y": y.to_string(),
                "leq": bruhat_leq(&x, &y)?,
                "length_x": x.length(),
                "length_y": y.length(),
            })
        }
        Command::DemoVermaChain { steps } => {
            let chain = o()?.demo_verma_chain(ctx.algebra, *steps)?;
            let rows: Vec<Value> = chain
                .iter()
                .map(|(w, linked)| json!({ "weight": w.to_string(), "linked": linked }))
                .collect();
            json!({ "steps": rows })
        }
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a report as `#key\tvalue` lines followed by one table for each array field.
fn to_tsv(report: &Value) -> String {
    let Value::Object(fields) = report else {
        return scalar(report) + "\n";
    };
    let mut head = String::new();
    let mut tables = String::new();
    for (key, value) in fields {
        match value {
            Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
                let columns: Vec<&String> = rows[0].as_object().expect("object").keys().collect();
                tables += &format!(
                    "[{key}]\n{}\n",
                    columns
                        .iter()
                        .map(|c| c.as_str())
                        .collect::<Vec<_>>()
                        .join("\t")
                );
                for row in rows {
                    let cells: Vec<String> =
                        columns.iter().map(|c| scalar(&row[c.as_str()])).collect();
                    tables += &(cells.join("\t") + "\n");
                }
            }
            Value::Array(rows) if rows.iter().all(Value::is_array) && !rows.is_empty() => {
                tables += &format!("[{key}]\n");
                for row in rows {
                    let cells: Vec<String> =
                        row.as_array().expect("array").iter().map(scalar).collect();
                    tables += &(cells.join("\t") + "\n");
                }
            }
            other => head += &format!("#{key}\t{}\n", scalar(other)),
        }
    }
    head + &tables
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                ),
                Format::Tsv => print!("{}", to_tsv(&report)),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Domain { name, message }) => {
            println!("{}", json!({ "error": name, "message": message }));
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> CliResult<Value> {
    let algebra: Algebra = cli
        .alg
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid algebra {:?}: {e}", cli.alg)))?;
    let order: BorelOrder = cli
        .order
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid order {:?}: {e}", cli.order)))?;
    let window_limit = match std::env::var("OINF_WINDOW_LIMIT") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid OINF_WINDOW_LIMIT {v:?}")))?,
        Err(_) => DEFAULT_WINDOW_LIMIT,
    };
    let table = Arc::new(KlTable::new());
    if let Some(path) = &cli.cache {
        table.load(path)?;
    }
    let ctx = Context {
        algebra,
        order,
        table,
        window_limit,
    };
    let report = run(cli, &ctx)?;
    if let Some(path) = &cli.cache {
        ctx.table.save(path)?;
    }
    Ok(report)
}
