//! Command-line front end. [`run`] does all the work so tests can drive it
//! without spawning a process.
//!
//! Exit codes: 0 success, 1 validation or computation failure, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bfk::{eigen_condition, enumerate_pairs, Parity};
use crate::cohomology::{eigen_table, EigenTable};
use crate::models::{parse_model, MinimalModel, Space};
use crate::pseudoisotopy::{pseudoisotopy_table, PseudoisotopyTable};
use crate::series::{equals_expr, RationalExpr, TruncatedSeries};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "loopinv", version, about = "Involution eigenspaces of S1-equivariant loop space cohomology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Base,
    Loop,
    Borel,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Base => Space::Base,
            SpaceArg::Loop => Space::Loop,
            SpaceArg::Borel => Space::Borel,
        }
    }
}

impl SpaceArg {
    fn name(self) -> &'static str {
        match self {
            SpaceArg::Base => "base",
            SpaceArg::Loop => "loop",
            SpaceArg::Borel => "borel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Series that `series --model` can compare against an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// dim H^n_{S1}(LM)
    Betti,
    /// Inv+ H^n_{S1}(LM)
    InvPlus,
    /// Inv- H^n_{S1}(LM)
    InvMinus,
    /// Inv+ H^n_{S1}(LM, *)
    RelInvPlus,
    /// Inv- H^n_{S1}(LM, *)
    RelInvMinus,
    /// Inv+ pi_i P(M)
    PPlus,
    /// Inv- pi_i P(M)
    PMinus,
    /// dim H^n(M)
    BettiM,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Highest cochain degree enumerated
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(4..))]
    pub max_degree: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a model file and run the Borel construction checks
    Validate {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Cohomology dimensions of the base, loop or Borel model
    Cohomology {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Borel)]
        space: SpaceArg,
        #[command(flatten)]
        common: Common,
    },
    /// Cohomology with the eigenspace split of the loop-reversal involution
    Eigen {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Borel)]
        space: SpaceArg,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenspace dimensions of pi_i of the stable pseudoisotopy space and of A(M)
    Pseudoisotopy {
        model: PathBuf,
        /// Attest that the model comes from a compact manifold
        #[arg(long)]
        compact: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Degrees (i, m) with nontrivial pi_{i+1} of nonnegatively curved metrics on TS^{2d} x S^m
    Bfk {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 5)]
        j_max: i64,
        /// Minimal model of the sphere bundle, to cross-check the eigenspace inequality
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Expand a closed form c*t^a/(1-t^b) + ..., optionally comparing it to a computed series
    Series {
        expr: String,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_enum, requires = "model")]
        quantity: Option<Quantity>,
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn validation(category: &str, e: impl std::fmt::Display) -> Self {
        let text = e.to_string();
        let message = if text.starts_with(category) {
            text
        } else {
            format!("{category}: {text}")
        };
        Failure { code: 1, message }
    }
}

type Outcome = Result<String, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_model(path: &Path) -> Result<MinimalModel, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_model(&text).map_err(|e| Failure::validation(e.category(), e))
}

fn execute(command: &Command) -> Outcome {
    match command {
        Command::Validate { model, common } => validate(model, common),
        Command::Cohomology { model, space, common } => cohomology(model, *space, common, false),
        Command::Eigen { model, space, common } => cohomology(model, *space, common, true),
        Command::Pseudoisotopy { model, compact, common } => pseudoisotopy(model, *compact, common),
        Command::Bfk {
            d,
            j_max,
            model,
            format,
        } => bfk(*d, *j_max, model.as_deref(), *format),
        Command::Series {
            expr,
            model,
            quantity,
            common,
        } => series(expr, model.as_deref(), *quantity, common),
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn validate(path: &Path, common: &Common) -> Outcome {
    let m = load_model(path)?;
    let borel = m
        .dga(Space::Borel, common.max_degree)
        .map_err(|e| Failure::validation(e.category(), e))?;
    let warnings: Vec<String> = m.warnings().iter().map(ToString::to_string).collect();
    match common.format {
        Format::Json => Ok(to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "validate",
            "model": path.display().to_string(),
            "valid": true,
            "generators": m.generators().iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect::<Vec<_>>(),
            "borel_generators": borel.algebra().generators().iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect::<Vec<_>>(),
            "warnings": warnings,
        }))),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "ok: {} ({} generators)", path.display(), m.generators().len());
            for (g, v) in m.generators().iter().zip(m.differential().values()) {
                let _ = writeln!(s, "  d {} = {}    [deg {}]", g.name, m.algebra().format(v), g.degree);
            }
            let _ = writeln!(s, "Borel model (checked through degree {}):", common.max_degree);
            let a = borel.algebra();
            for (i, g) in a.generators().iter().enumerate() {
                let _ = writeln!(s, "  D {} = {}    [deg {}]", g.name, a.format(borel.differential().value(i)), g.degree);
            }
            for w in warnings {
                let _ = writeln!(s, "warning: {w}");
            }
            Ok(s)
        }
    }
}

fn fmt_opt(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn cohomology(path: &Path, space: SpaceArg, common: &Common, split: bool) -> Outcome {
    let m = load_model(path)?;
    let dga = m
        .dga(space.into(), common.max_degree)
        .map_err(|e| Failure::validation(e.category(), e))?;
    if split && dga.involution().is_none() {
        return Err(Failure::validation(
            "NoInvolution",
            format!("the {} model carries no involution; use --space borel", space.name()),
        ));
    }
    let table = eigen_table(&dga, common.max_degree).map_err(|e| Failure::validation("ComputationError", e))?;
    let command = if split { "eigen" } else { "cohomology" };
    match common.format {
        Format::Json => Ok(to_json(&eigen_json(command, path, space, common.max_degree, &table))),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# {} model of {}, cochain degrees <= {}",
                space.name(),
                path.display(),
                common.max_degree
            );
            let _ = writeln!(s, "{:>4} {:>8} {:>6} {:>5} {:>5}", "n", "dim", "betti", "inv+", "inv-");
            for sl in &table.slices {
                let _ = writeln!(
                    s,
                    "{:>4} {:>8} {:>6} {:>5} {:>5}",
                    sl.degree,
                    sl.cochain_dim,
                    sl.betti,
                    fmt_opt(sl.inv_plus),
                    fmt_opt(sl.inv_minus)
                );
            }
            let _ = writeln!(s, "# degrees >= {} not computed", table.cap);
            Ok(s)
        }
    }
}

fn eigen_json(command: &str, path: &Path, space: SpaceArg, cap: u32, table: &EigenTable) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "model": path.display().to_string(),
        "space": space.name(),
        "max_degree": cap,
        "degrees": table.slices.iter().map(|s| json!({
            "n": s.degree,
            "dim": s.cochain_dim,
            "betti": s.betti,
            "inv_plus": s.inv_plus,
            "inv_minus": s.inv_minus,
        })).collect::<Vec<_>>(),
    })
}

const COMPACT_CAVEAT: &str =
    "# note: the formulas assume M is a simply-connected compact manifold; compactness is not checked (pass --compact to attest)";

fn pseudoisotopy(path: &Path, compact: bool, common: &Common) -> Outcome {
    let m = load_model(path)?;
    let table = pseudoisotopy_table(&m, common.max_degree).map_err(|e| {
        let category = match &e {
            crate::pseudoisotopy::PseudoisotopyError::Model(me) => me.category(),
            crate::pseudoisotopy::PseudoisotopyError::NegativeDimension { .. } => "NegativeDimension",
            _ => "ComputationError",
        };
        Failure::validation(category, e)
    })?;
    match common.format {
        Format::Json => Ok(to_json(&pseudoisotopy_json(path, compact, common.max_degree, &table))),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# {}: rational homotopy eigenspaces, reliable for i <= {}",
                path.display(),
                table.reliable_max_i.map_or_else(|| "none".to_string(), |v| v.to_string())
            );
            if !compact {
                let _ = writeln!(s, "{COMPACT_CAVEAT}");
            }
            let _ = writeln!(
                s,
                "{:>4} {:>7} {:>7} {:>11} {:>11} {:>10}",
                "i", "P(i)+", "P(i)-", "A(i+2)+", "A(i+2)-", "H_(i+2)(M)"
            );
            for r in &table.rows {
                let _ = writeln!(
                    s,
                    "{:>4} {:>7} {:>7} {:>11} {:>11} {:>10}",
                    r.i, r.inv_plus_p, r.inv_minus_p, r.inv_plus_a, r.inv_minus_a, r.betti_m
                );
            }
            Ok(s)
        }
    }
}

fn pseudoisotopy_json(path: &Path, compact: bool, cap: u32, table: &PseudoisotopyTable) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "pseudoisotopy",
        "model": path.display().to_string(),
        "max_degree": cap,
        "compact_attested": compact,
        "reliable_max_i": table.reliable_max_i,
        "rows": table.rows.iter().map(|r| json!({
            "i": r.i,
            "invP_plus": r.inv_plus_p,
            "invP_minus": r.inv_minus_p,
            "invA_plus": r.inv_plus_a,
            "invA_minus": r.inv_minus_a,
            "dim_H_M": r.betti_m,
        })).collect::<Vec<_>>(),
    })
}

fn bfk(d: i64, j_max: i64, model: Option<&Path>, format: Format) -> Outcome {
    let pairs = enumerate_pairs(d, j_max).map_err(|e| Failure::validation("InvalidParameter", e))?;
    let checks: Option<Vec<bool>> = match model {
        None => None,
        Some(path) => {
            let m = load_model(path)?;
            let max_i = pairs.iter().map(|p| p.i).max().unwrap_or(0);
            let table = pseudoisotopy_table(&m, max_i as u32 + 3).map_err(|e| Failure::validation("ComputationError", e))?;
            let mut out = Vec::new();
            for p in &pairs {
                let parity = Parity::of(4 * d - 1 + p.m_min);
                out.push(
                    eigen_condition(&table, p.i as usize, parity)
                        .map_err(|e| Failure::validation("ComputationError", e))?,
                );
            }
            Some(out)
        }
    };
    match format {
        Format::Json => {
            let rows: Vec<Value> = pairs
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let mut row = json!({"j": p.j, "i": p.i, "m_min": p.m_min});
                    if let Some(c) = &checks {
                        row["eigen_condition"] = json!(c[k]);
                    }
                    row
                })
                .collect();
            Ok(to_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "command": "bfk",
                "d": d,
                "j_max": j_max,
                "rows": rows,
            })))
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "# d = {d}: pi_(i+1) R_(K>=0)(TS^{} x S^m) (x) Q != 0 for m >= m_min, m = 2d mod 4", 2 * d);
            let _ = write!(s, "{:>4} {:>6} {:>6} {:>6}", "j", "i", "m_min", "i+1");
            if checks.is_some() {
                let _ = write!(s, " {:>7}", "model");
            }
            s.push('\n');
            for (k, p) in pairs.iter().enumerate() {
                let _ = write!(s, "{:>4} {:>6} {:>6} {:>6}", p.j, p.i, p.m_min, p.conclusion_degree);
                if let Some(c) = &checks {
                    let _ = write!(s, " {:>7}", if c[k] { "ok" } else { "FAIL" });
                }
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn quantity_series(m: &MinimalModel, q: Quantity, cap: u32) -> Result<TruncatedSeries, Failure> {
    let comp = |e: &dyn std::fmt::Display| Failure::validation("ComputationError", e);
    match q {
        Quantity::Betti | Quantity::InvPlus | Quantity::InvMinus => {
            let dga = m.dga(Space::Borel, cap).map_err(|e| Failure::validation(e.category(), e))?;
            let t = eigen_table(&dga, cap).map_err(|e| comp(&e))?;
            Ok(match q {
                Quantity::Betti => t.betti_series(),
                Quantity::InvPlus => t.inv_plus_series().expect("Borel involution"),
                _ => t.inv_minus_series().expect("Borel involution"),
            })
        }
        Quantity::BettiM => Ok(eigen_table(&m.base_dga(), cap).map_err(|e| comp(&e))?.betti_series()),
        _ => {
            let t = pseudoisotopy_table(m, cap).map_err(|e| comp(&e))?;
            Ok(match q {
                Quantity::RelInvPlus => t.relative_plus,
                Quantity::RelInvMinus => t.relative_minus,
                Quantity::PPlus => t.inv_plus_p_series(),
                _ => t.inv_minus_p_series(),
            })
        }
    }
}

fn series(expr: &str, model: Option<&Path>, quantity: Option<Quantity>, common: &Common) -> Outcome {
    let e = RationalExpr::parse(expr).map_err(|e| Failure {
        code: 2,
        message: e.to_string(),
    })?;
    let cap = common.max_degree;
    let expanded = e.expand(cap as usize);
    let comparison = match (model, quantity) {
        (Some(path), Some(q)) => {
            let m = load_model(path)?;
            let computed = quantity_series(&m, q, cap)?;
            Some((computed.clone(), equals_expr(&computed, &e)))
        }
        (Some(_), None) => {
            return Err(Failure {
                code: 2,
                message: "--model needs --quantity".to_string(),
            })
        }
        _ => None,
    };
    let text = match common.format {
        Format::Json => {
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "series",
                "expr": e.to_string(),
                "max_degree": cap,
                "coefficients": expanded.coeffs(),
            });
            if let Some((computed, matches)) = &comparison {
                v["computed"] = json!(computed.coeffs());
                v["matches"] = json!(matches);
            }
            to_json(&v)
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "{e}");
            let _ = writeln!(s, "expansion: {expanded}");
            if let Some((computed, matches)) = &comparison {
                let _ = writeln!(s, "computed:  {computed}");
                let _ = writeln!(s, "{}", if *matches { "match" } else { "MISMATCH" });
            }
            s
        }
    };
    if let Some((_, false)) = comparison {
        return Err(Failure {
            code: 1,
            message: format!("SeriesMismatch: computed series differs from {e}\n{text}"),
        });
    }
    Ok(text)
}
