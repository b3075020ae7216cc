//! Command-line definitions and dispatch.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use quadalg::coeffs::{FieldError, FieldSpec, DEFAULT_PRIME};
use quadalg::freealg::{
    builtin_presentation, effective_relation_count, parse_presentation_with_field, FreeAlgError, MonomialOrder,
    Presentation,
};
use quadalg::groebner::{hilbert_series_with_dump, GroebnerError};
use quadalg::search::{alpha_table, dsearch, SearchError};
use quadalg::series::{gs_bound, SeriesError, TruncatedSeries};
use quadalg::tensorlat::{
    alp4_check_in, block_dims, builtin_subspace, certify_vanishing, eq_dim, generic_dims, inflate, witness_field,
    Built, Construction, TensorError, WitnessSubspace, DEFAULT_MAX_AMBIENT,
};
use quadalg::with_field;

use crate::verify::{run_verify, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    SizeGuard(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::SizeGuard(_) => 3,
            _ => 2,
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::SizeGuard { .. } => CliError::SizeGuard(format!("{e}; raise --max-ambient to override")),
            TensorError::VerificationFailed { .. } => CliError::CheckFailed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Tensor(t) => t.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}
usage_from!(FieldError, FreeAlgError, GroebnerError, SeriesError);

#[derive(Debug, Parser)]
#[command(name = "quadalg", version, about = "Hilbert series of quadratic algebras and tensor-subspace witnesses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated Golod–Shafarevich series |(1 - nt + dt^2)^-1|
    Gs {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(short = 'D', long = "max-degree", default_value_t = 8)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact Hilbert series of a presentation via a Gröbner basis
    Hilbert {
        /// Presentation file
        file: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(short = 'D', long = "max-degree", default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        field: Option<String>,
        /// Variable ranking, greatest first, e.g. "x2 > x1 > x3"
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        dump_basis: bool,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo Hilbert series of a generic algebra with d relations
    Generic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(short = 'D', long = "max-degree", default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_AMBIENT)]
        max_ambient: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bracket the least d with h_q = 0
    Dsearch {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_AMBIENT)]
        max_ambient: usize,
        #[arg(long)]
        json: bool,
    },
    /// Subspaces of E ⊗ E stored in files
    Tensor {
        #[command(subcommand)]
        action: TensorAction,
    },
    /// Build a named witness subspace
    Construct {
        /// cor3-41, cor3-31, g30, alp4, gfield, whatnot1 (or e.g. gfield(5))
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_AMBIENT)]
        max_ambient: usize,
    },
    /// Diagonal block sum of m copies of a vanishing witness
    Inflate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        /// Vanishing degree; defaults to the least q <= 6 with E_q = 0
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_AMBIENT)]
        max_ambient: usize,
        #[arg(long)]
        json: bool,
    },
    /// Ratio table d(K,n,q)/n^2
    Alpha {
        #[arg(long)]
        q: usize,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: u64,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, default_value_t = 5_000)]
        max_ambient: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the reproduction checks
    Verify {
        #[arg(long)]
        filter: Option<String>,
        /// Also write the report as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TensorAction {
    /// dim E_q(L, E)
    Eq {
        file: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_AMBIENT)]
        max_ambient: usize,
        #[arg(long)]
        json: bool,
    },
    /// dim L_{s,t} for the given flag sizes
    Blocks {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// n, dim L and d = n^2 - dim L
    Dim {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn coeff_list(s: &TruncatedSeries) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

fn json_coeffs(s: &TruncatedSeries) -> serde_json::Value {
    match s.to_i64() {
        Some(v) => json!(v),
        None => json!(coeff_list(s)),
    }
}

fn random_header(out: &mut dyn Write, r: &RandomArgs) -> std::io::Result<()> {
    writeln!(out, "# seed {} prime {} trials {}", r.seed, r.prime, r.trials)
}

fn load_presentation(
    file: &Option<PathBuf>,
    builtin: &Option<String>,
    field: &Option<String>,
    order: &Option<String>,
) -> Result<Presentation, CliError> {
    let field: Option<FieldSpec> = field.as_deref().map(str::parse).transpose()?;
    let p = match (file, builtin) {
        (Some(path), None) => parse_presentation_with_field(&read(path)?, field)?,
        (None, Some(name)) => builtin_presentation(name, field)?,
        _ => return Err(CliError::Usage("give exactly one of a presentation file or --builtin".into())),
    };
    match order {
        None => Ok(p),
        Some(text) => {
            let o = MonomialOrder::parse(text, p.n())
                .ok_or_else(|| CliError::Usage(format!("bad order {text:?} for {} generators", p.n())))?;
            Ok(p.with_order(o))
        }
    }
}

/// Runs one command, writing its normal output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Gs { n, d, max_degree, json } => {
            let s = gs_bound(n, d, max_degree)?;
            if json {
                writeln!(out, "{}", json!({"n": n, "d": d, "max_degree": max_degree, "coefficients": json_coeffs(&s), "series": s.to_string()}))?;
            } else {
                writeln!(out, "{s}")?;
            }
        }
        Command::Hilbert { file, builtin, max_degree, field, order, dump_basis, json } => {
            let p = load_presentation(&file, &builtin, &field, &order)?;
            for w in p.warnings() {
                eprintln!("warning: {w}");
            }
            let (s, dump) = hilbert_series_with_dump(&p, max_degree)?;
            if json {
                let mut v = json!({
                    "n": p.n(), "d": effective_relation_count(&p), "field": p.field().to_string(),
                    "order": p.order().to_string(), "max_degree": max_degree,
                    "coefficients": json_coeffs(&s), "series": s.to_string(),
                });
                if dump_basis {
                    v["basis"] = json!(dump.lines().collect::<Vec<_>>());
                }
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "{s}")?;
                writeln!(out, "# dims {}", coeff_list(&s).join(" "))?;
                if dump_basis {
                    writeln!(out, "# basis ({}; {})", p.field(), p.order())?;
                    write!(out, "{dump}")?;
                }
            }
        }
        Command::Generic { n, d, max_degree, random, max_ambient, json } => {
            let r = generic_dims(n, d, max_degree, random.trials, random.seed, random.prime, max_ambient)?;
            if json {
                writeln!(out, "{}", json!({
                    "n": n, "d": d, "max_degree": max_degree, "seed": r.seed, "prime": r.prime, "trials": r.trials,
                    "coefficients": json_coeffs(&r.series), "series": r.series.to_string(),
                    "per_trial": r.per_trial, "agreement": r.agreement,
                }))?;
            } else {
                random_header(out, &random)?;
                writeln!(out, "{}", r.series)?;
                let agree: Vec<String> = r.agreement.iter().map(|a| format!("{a}/{}", r.trials)).collect();
                writeln!(out, "# agreement {}", agree.join(" "))?;
            }
        }
        Command::Dsearch { n, q, random, max_ambient, json } => {
            let r = dsearch(n, q, random.trials, random.seed, random.prime, max_ambient)?;
            if json {
                writeln!(out, "{}", json!({
                    "n": n, "q": q, "gs_lower": r.gs_lower, "mc_upper": r.mc_upper, "exact": r.exact,
                    "certificate": {"d": r.certificate.d, "seed": r.certificate.seed, "dims": r.certificate.dims},
                    "seed": r.seed, "prime": r.prime, "trials": r.trials,
                }))?;
            } else {
                random_header(out, &random)?;
                writeln!(out, "gs_lower    {}", r.gs_lower)?;
                writeln!(out, "mc_upper    {}", r.mc_upper)?;
                match r.exact {
                    Some(d) => writeln!(out, "exact       {d}")?,
                    None => writeln!(out, "exact       -")?,
                }
                let dims: Vec<String> = r.certificate.dims.iter().map(|x| x.to_string()).collect();
                writeln!(out, "certificate d {} seed {} dims {}", r.certificate.d, r.certificate.seed, dims.join(" "))?;
            }
        }
        Command::Tensor { action } => run_tensor(action, out)?,
        Command::Construct { name, n, r, field, seed, out: path, max_ambient } => {
            let c = Construction::parse_with(&name, n, r)?;
            let spec: FieldSpec = field.parse()?;
            with_field!(spec, f => {
                match builtin_subspace(&f, c)? {
                    Built::Witness(mut w) => {
                        w.seed = Some(seed);
                        emit_witness(out, &w, path.as_ref())?;
                    }
                    Built::Pair { l0, m } => {
                        let Construction::Alp4 { n, r } = c else { unreachable!() };
                        let ok = alp4_check_in(&f, n, r, seed, max_ambient)?;
                        match &path {
                            Some(p) => {
                                write_file(p, &l0.to_text())?;
                                let mp = PathBuf::from(format!("{}.m", p.display()));
                                write_file(&mp, &m.to_text())?;
                                writeln!(out, "wrote {} (L0) and {} (M)", p.display(), mp.display())?;
                            }
                            None => {
                                writeln!(out, "# L0")?;
                                write!(out, "{}", l0.to_text())?;
                                writeln!(out, "# M")?;
                                write!(out, "{}", m.to_text())?;
                            }
                        }
                        writeln!(out, "alp4 check (L ⊗ L) ∩ (E ⊗ M ⊗ E) = 0: {ok}")?;
                        if !ok {
                            return Err(CliError::CheckFailed("alp4 intersection is nonzero".into()));
                        }
                    }
                }
                Ok::<(), CliError>(())
            })?;
        }
        Command::Inflate { input, m, q, out: path, max_ambient, json } => {
            let text = read(&input)?;
            let spec = witness_field(&text)?;
            with_field!(spec, f => {
                let w = WitnessSubspace::from_text(&f, &text)?;
                let q = match q {
                    Some(q) => q,
                    None => (2..=6)
                        .find(|&q| eq_dim(&w.space, w.n, q, max_ambient).map(|d| d == 0).unwrap_or(false))
                        .ok_or_else(|| CliError::CheckFailed("input has E_q != 0 for every q <= 6; pass --q".into()))?,
                };
                let big = inflate(&w, m, q, max_ambient)?;
                let cert = certify_vanishing(&big, q, max_ambient)?;
                if let Some(p) = &path {
                    write_file(p, &big.to_text())?;
                }
                if json {
                    writeln!(out, "{}", json!({
                        "n": cert.n, "d": cert.d, "q": q, "m": m, "field": spec.to_string(),
                        "eq_dim": cert.eq_dim, "holds": cert.holds(), "construction": cert.construction,
                    }))?;
                } else {
                    writeln!(out, "{cert}")?;
                    writeln!(out, "certificate: h_{q}(K, {}, {}) = 0", cert.n, cert.d)?;
                }
                Ok::<(), CliError>(())
            })?;
        }
        Command::Alpha { q, n_max, random, max_ambient, json } => {
            let t = alpha_table(q, n_max, random.trials, random.seed, random.prime, max_ambient)?;
            if json {
                let rows: Vec<_> = t.rows.iter().zip(&t.running_inf).map(|(r, inf)| json!({
                    "n": r.n, "d_upper": r.d_upper, "ratio": r.ratio, "source": r.source, "running_inf": inf,
                })).collect();
                writeln!(out, "{}", json!({"q": q, "reference": {"name": t.reference.0, "value": t.reference.1},
                    "seed": random.seed, "prime": random.prime, "trials": random.trials, "rows": rows}))?;
            } else {
                random_header(out, &random)?;
                writeln!(out, "# q {q}; reference {} = {:.6}", t.reference.0, t.reference.1)?;
                writeln!(out, "{:>4} {:>8} {:>10} {:>10}  source", "n", "d_upper", "ratio", "inf")?;
                for (r, inf) in t.rows.iter().zip(&t.running_inf) {
                    writeln!(out, "{:>4} {:>8} {:>10.6} {:>10.6}  {}", r.n, r.d_upper, r.ratio, inf, r.source)?;
                }
            }
        }
        Command::Verify { filter, json } => {
            let report = run_verify(filter.as_deref());
            write!(out, "{}", report.render())?;
            if let Some(p) = &json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                write_file(p, &format!("{text}\n"))?;
            }
            let failed: Vec<&str> = report.rows.iter().filter(|r| r.status == Status::Fail).map(|r| r.id.as_str()).collect();
            if !failed.is_empty() {
                return Err(CliError::CheckFailed(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn emit_witness<F: quadalg::coeffs::Field>(
    out: &mut dyn Write,
    w: &WitnessSubspace<F>,
    path: Option<&PathBuf>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            write_file(p, &w.to_text())?;
            writeln!(out, "wrote {} (n {}, dim L {}, d {})", p.display(), w.n, w.dim(), w.d())?;
        }
        None => write!(out, "{}", w.to_text())?,
    }
    Ok(())
}

fn run_tensor(action: TensorAction, out: &mut dyn Write) -> Result<(), CliError> {
    match action {
        TensorAction::Eq { file, q, max_ambient, json } => {
            let text = read(&file)?;
            let spec = witness_field(&text)?;
            let (n, dim) = with_field!(spec, f => {
                let w = WitnessSubspace::from_text(&f, &text)?;
                Ok::<_, CliError>((w.n, eq_dim(&w.space, w.n, q, max_ambient)?))
            })?;
            if json {
                writeln!(out, "{}", json!({"n": n, "q": q, "field": spec.to_string(), "eq_dim": dim}))?;
            } else {
                writeln!(out, "dim E_{q} = {dim}")?;
            }
        }
        TensorAction::Blocks { file, sizes, json } => {
            let text = read(&file)?;
            let spec = witness_field(&text)?;
            let table = with_field!(spec, f => {
                let w = WitnessSubspace::from_text(&f, &text)?;
                let sizes = if sizes.is_empty() { (1..=w.n).collect() } else { sizes.clone() };
                Ok::<_, CliError>(block_dims(&w, &sizes)?)
            })?;
            if json {
                writeln!(out, "{}", json!({"sizes": table.sizes, "dims": table.dims}))?;
            } else {
                write!(out, "{:>5}", "s\\t")?;
                for t in &table.sizes {
                    write!(out, " {t:>5}")?;
                }
                writeln!(out)?;
                for (s, row) in table.sizes.iter().zip(&table.dims) {
                    write!(out, "{s:>5}")?;
                    for x in row {
                        write!(out, " {x:>5}")?;
                    }
                    writeln!(out)?;
                }
            }
        }
        TensorAction::Dim { file, json } => {
            let text = read(&file)?;
            let spec = witness_field(&text)?;
            let (n, dim, construction) = with_field!(spec, f => {
                let w = WitnessSubspace::from_text(&f, &text)?;
                Ok::<_, CliError>((w.n, w.dim(), w.construction))
            })?;
            let d = n * n - dim;
            if json {
                writeln!(out, "{}", json!({"n": n, "dim": dim, "d": d, "field": spec.to_string(), "construction": construction}))?;
            } else {
                writeln!(out, "n {n}  dim L {dim}  d {d}  ({construction}, {spec})")?;
            }
        }
    }
    Ok(())
}
