//! Command-line front end. Every command produces a deterministic report
//! (JSON or text) and an exit status.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{interval_violation_report, IntervalReport};
use crate::budget::Budget;
use crate::code::{
    check_minimal, export_code, import_code, weight_distribution, CodeFormat, GeneratorMatrix, MinimalStatus,
};
use crate::error::Error;
use crate::field::FieldHandle;
use crate::geometry::{PointSet, PointSetJson};
use crate::independence::{blocking_status, find_independent_tuple, BlockingStatus, SearchStrategy};
use crate::partition::{check_partition, BSet, RGroup, SubgeometryPartition};
use crate::strong::{expected_size, union_subgeometries, verify_blocking, verify_strong_blocking, StrongStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_WITNESS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Directory for cached field tables.
pub const CACHE_ENV: &str = "STRONGBLOCK_ZECH_CACHE";

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "strongblock", version, about = "Strong blocking sets from subgeometry unions, and minimal codes")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Cap on points, hyperplanes or classes enumerated in one scan.
    #[arg(long, global = true)]
    pub max_points: Option<u64>,
    /// Cap on word operations in pairwise support tests.
    #[arg(long, global = true)]
    pub max_pair_ops: Option<u128>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodeFileFormat {
    Json,
    Text,
}

impl From<CodeFileFormat> for CodeFormat {
    fn from(f: CodeFileFormat) -> Self {
        match f {
            CodeFileFormat::Json => CodeFormat::Json,
            CodeFileFormat::Text => CodeFormat::PlainText,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Strong,
    Blocking,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field, R-group, independent tuple, union, strong check, code, minimality.
    Pipeline {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Take the first independent tuple in canonical order instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100_000)]
        max_iters: u64,
        /// Also write the point set (JSON).
        #[arg(long)]
        save_set: Option<PathBuf>,
        /// Also write the generator matrix (JSON).
        #[arg(long)]
        save_code: Option<PathBuf>,
    },
    /// Check that the coset subgeometries partition PG(k-1, q^(k-1)).
    Partition {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Search for an R-independent (k-1)-tuple.
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Sample with this seed; without it the search is exhaustive.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        max_iters: u64,
        /// Also run the dual-marking scan deciding whether B(k, q) blocks.
        #[arg(long)]
        blocking_scan: bool,
    },
    /// Verify a point set (JSON) is a (strong) blocking set.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyMode::Strong)]
        mode: VerifyMode,
    },
    /// Write the generator matrix whose columns are a point set's points.
    ExportCode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = CodeFileFormat::Json)]
        code_format: CodeFileFormat,
    },
    /// Check a generator matrix for minimality.
    CheckMinimal {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CodeFileFormat::Json)]
        code_format: CodeFileFormat,
    },
    /// Certify that |B(4, q)| fits no small-blocking-set interval.
    Bounds {
        /// Inclusive range `lo:hi`.
        #[arg(long, conflicts_with = "q")]
        q_range: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        odd_only: bool,
    },
}

/// A module error tagged with the stage that raised it.
#[derive(Debug)]
pub struct CliError {
    pub stage: &'static str,
    pub error: Error,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self.error {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError>;
}

impl<T> Stage<T> for crate::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError> {
        self.map_err(|error| CliError { stage, error })
    }
}

/// A finished command: the report and the exit status it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n",
            OutputFormat::Text => self.text.clone(),
        }
    }
}

fn report(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(head), Value::Object(body)) = (&mut v, body) {
        head.extend(body);
    }
    v
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn exit_if(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_WITNESS
    }
}

/// The ambient field for (q, k), read from the table cache when configured.
pub fn rgroup_for(q: u64, k: u32) -> crate::Result<RGroup> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => {
            let (p, _, m) = RGroup::ambient_params(q, k)?;
            std::fs::create_dir_all(&dir)?;
            let field = FieldHandle::new_cached(p, m, None, Path::new(&dir))?;
            RGroup::with_field(q, k, Arc::new(field))
        }
        _ => RGroup::build(q, k),
    }
}

fn read_point_set(path: &Path) -> Result<PointSet, CliError> {
    let text = std::fs::read_to_string(path).map_err(Error::from).stage("read input")?;
    let j: PointSetJson = serde_json::from_str(&text).map_err(Error::from).stage("parse point set")?;
    PointSet::from_json(&j).stage("parse point set")
}

pub struct PipelineArgs {
    pub q: u64,
    pub k: u32,
    pub strategy: SearchStrategy,
    pub save_set: Option<PathBuf>,
    pub save_code: Option<PathBuf>,
}

pub fn cmd_pipeline(args: &PipelineArgs, budget: &Budget) -> Result<Outcome, CliError> {
    let (q, k) = (args.q, args.k);
    let rg = Arc::new(rgroup_for(q, k).stage("field")?);
    let part = SubgeometryPartition::new(rg.clone()).stage("partition")?;
    let search = find_independent_tuple(&rg, None, k as usize - 1, args.strategy, budget).stage("search")?;
    let seed = match args.strategy {
        SearchStrategy::Random { seed, .. } => Some(seed),
        SearchStrategy::Exhaustive => None,
    };
    let mut body = json!({
        "q": q,
        "k": k,
        "seed": seed,
        "ambient_field": rg.ambient().describe(),
        "point_field": part.space().field().describe(),
        "basis": part.coords().basis(),
        "r": rg.r(),
        "cosets": rg.stride(),
        "search": search,
    });
    let mut text = String::new();
    let ambient = rg.ambient().describe();
    writeln!(text, "pipeline q={q} k={k} seed={seed:?}").unwrap();
    writeln!(text, "ambient field GF({}^{}) modulus {:?}", ambient.p, ambient.m, ambient.modulus).unwrap();
    let Some(alphas) = &search.alphas else {
        writeln!(text, "no R-independent tuple found after {} iterations", search.iterations).unwrap();
        return Ok(Outcome {
            exit: EXIT_WITNESS,
            json: report("pipeline", body),
            text,
        });
    };
    let tuple: Vec<String> = alphas.iter().map(ToString::to_string).collect();
    writeln!(text, "independent tuple ({}) after {} iterations", tuple.join(", "), search.iterations).unwrap();

    let set = union_subgeometries(alphas, &part).stage("union")?;
    let strong = verify_strong_blocking(&set, budget).stage("verify")?;
    let g = GeneratorMatrix::from_points(&set).stage("code")?;
    let minimal = check_minimal(&g, budget).stage("minimality")?;
    let weights = weight_distribution(&g, budget).stage("minimality")?;
    let is_strong = strong.status == StrongStatus::Strong;
    let is_minimal = minimal.status == MinimalStatus::Minimal;
    if let Some(path) = &args.save_set {
        let s = serde_json::to_string_pretty(&set.to_json()).map_err(Error::from).stage("save set")?;
        std::fs::write(path, s + "\n").map_err(Error::from).stage("save set")?;
    }
    if let Some(path) = &args.save_code {
        let s = export_code(&g, CodeFormat::Json).stage("save code")?;
        std::fs::write(path, s).map_err(Error::from).stage("save code")?;
    }
    writeln!(text, "set size {} (expected {})", set.len(), expected_size(q, k)).unwrap();
    writeln!(text, "strong blocking: {:?} over {} hyperplanes", strong.status, strong.hyperplanes).unwrap();
    writeln!(text, "code [{}, {}]: {:?} over {} classes", g.n(), g.k(), minimal.status, minimal.classes).unwrap();
    writeln!(text, "weight distribution {weights:?}").unwrap();
    let extra = json!({
        "set": {
            "size": set.len(),
            "expected_size": expected_size(q, k),
            "points": set.to_json(),
        },
        "strong": strong,
        "code": { "n": g.n(), "k": g.k(), "weight_distribution": weights },
        "minimal": minimal,
        "equivalence_holds": is_strong == is_minimal,
    });
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    Ok(Outcome {
        exit: exit_if(is_strong && is_minimal),
        json: report("pipeline", body),
        text,
    })
}

pub fn cmd_partition(q: u64, k: u32, budget: &Budget) -> Result<Outcome, CliError> {
    let rg = Arc::new(rgroup_for(q, k).stage("field")?);
    let part = SubgeometryPartition::new(rg.clone()).stage("partition")?;
    let rep = check_partition(&part, budget).stage("partition")?;
    let ok = rep.disjoint && rep.covers_space;
    let sizes: std::collections::BTreeSet<usize> = rep.coset_sizes.iter().copied().collect();
    let text = format!(
        "partition q={q} k={k}: {} cosets, sizes {:?}, {} of {} points covered, disjoint={}\n",
        rep.cosets, sizes, rep.covered, rep.total_points, rep.disjoint
    );
    let body = json!({
        "q": q,
        "k": k,
        "ambient_field": rg.ambient().describe(),
        "point_field": part.space().field().describe(),
        "basis": part.coords().basis(),
        "partition": rep,
        "ok": ok,
    });
    Ok(Outcome {
        exit: exit_if(ok),
        json: report("partition", body),
        text,
    })
}

pub fn cmd_search(
    q: u64,
    k: u32,
    strategy: SearchStrategy,
    blocking_scan: bool,
    budget: &Budget,
) -> Result<Outcome, CliError> {
    let rg = Arc::new(rgroup_for(q, k).stage("field")?);
    let bset = if blocking_scan {
        Some(BSet::build(rg.clone(), budget).stage("build B")?)
    } else {
        None
    };
    let search = find_independent_tuple(&rg, bset.as_ref(), k as usize - 1, strategy, budget).stage("search")?;
    let mut text = String::new();
    match &search.alphas {
        Some(a) => {
            let tuple: Vec<String> = a.iter().map(ToString::to_string).collect();
            writeln!(text, "independent tuple ({}) at hyperplane {:?}", tuple.join(", "), search.hyperplane_index)
                .unwrap();
        }
        None => writeln!(text, "no independent tuple after {} iterations", search.iterations).unwrap(),
    }
    let mut body = json!({
        "q": q,
        "k": k,
        "ambient_field": rg.ambient().describe(),
        "search": search,
    });
    if let Some(b) = &bset {
        let scan = blocking_status(b, budget).stage("blocking scan")?;
        writeln!(
            text,
            "B({k},{q}) with {} points: {:?}, {} of {} hyperplanes unmarked",
            b.size(),
            scan.status,
            scan.unmarked,
            scan.hyperplanes
        )
        .unwrap();
        let agree = (scan.status == BlockingStatus::NotBlocking) == search.alphas.is_some();
        if let Value::Object(o) = &mut body {
            o.insert("bset_size".into(), json!(b.size() as u64));
            o.insert("blocking_scan".into(), to_value(&scan));
            o.insert("scan_agrees_with_search".into(), json!(agree));
        }
    }
    Ok(Outcome {
        exit: exit_if(search.alphas.is_some()),
        json: report("search", body),
        text,
    })
}

pub fn cmd_verify(input: &Path, mode: VerifyMode, budget: &Budget) -> Result<Outcome, CliError> {
    let set = read_point_set(input)?;
    let field = set.space().field().describe();
    let (ok, verdict, text) = match mode {
        VerifyMode::Strong => {
            let v = verify_strong_blocking(&set, budget).stage("verify")?;
            let text = format!(
                "{:?} over {} hyperplanes{}\n",
                v.status,
                v.hyperplanes,
                v.witness_index.map(|i| format!(", witness hyperplane #{i}")).unwrap_or_default()
            );
            (v.status == StrongStatus::Strong, to_value(&v), text)
        }
        VerifyMode::Blocking => {
            let v = verify_blocking(&set, budget).stage("verify")?;
            let text = format!(
                "blocking={} over {} hyperplanes{}\n",
                v.blocking,
                v.hyperplanes,
                v.witness_index.map(|i| format!(", witness hyperplane #{i}")).unwrap_or_default()
            );
            (v.blocking, to_value(&v), text)
        }
    };
    let body = json!({
        "mode": format!("{mode:?}").to_lowercase(),
        "field": field,
        "n": set.space().dim(),
        "points": set.len(),
        "verdict": verdict,
    });
    Ok(Outcome {
        exit: exit_if(ok),
        json: report("verify", body),
        text,
    })
}

pub fn cmd_export_code(input: &Path, output: &Path, format: CodeFileFormat) -> Result<Outcome, CliError> {
    let set = read_point_set(input)?;
    let g = GeneratorMatrix::from_points(&set).stage("code")?;
    let s = export_code(&g, format.into()).stage("export")?;
    std::fs::write(output, s).map_err(Error::from).stage("export")?;
    let body = json!({
        "field": g.field().describe(),
        "k": g.k(),
        "n": g.n(),
        "output": output.display().to_string(),
    });
    Ok(Outcome {
        exit: EXIT_OK,
        json: report("export-code", body),
        text: format!("wrote [{}, {}] generator matrix to {}\n", g.n(), g.k(), output.display()),
    })
}

pub fn cmd_check_minimal(input: &Path, format: CodeFileFormat, budget: &Budget) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(input).map_err(Error::from).stage("read input")?;
    let g = import_code(&text, format.into()).stage("parse code")?;
    let v = check_minimal(&g, budget).stage("minimality")?;
    let weights = weight_distribution(&g, budget).stage("minimality")?;
    let ok = v.status == MinimalStatus::Minimal;
    let mut text = format!("[{}, {}] code: {:?} over {} classes\n", g.n(), g.k(), v.status, v.classes);
    if let Some(w) = &v.witness {
        writeln!(text, "class #{} is contained in class #{}", w.contained, w.container).unwrap();
    }
    let body = json!({
        "field": g.field().describe(),
        "k": g.k(),
        "n": g.n(),
        "verdict": v,
        "weight_distribution": weights,
    });
    Ok(Outcome {
        exit: exit_if(ok),
        json: report("check-minimal", body),
        text,
    })
}

/// Values of q the bounds argument is not meant to cover.
fn excluded(q: u64) -> Option<&'static str> {
    match q {
        _ if q % 2 == 0 => Some("even"),
        3 | 5 | 9 => Some("outside q = 7 or odd q > 9"),
        _ => None,
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError {
        stage: "arguments",
        error: Error::Parse(format!("expected lo:hi, got {s:?}")),
    };
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn cmd_bounds(q_range: Option<&str>, q: Option<u64>, odd_only: bool) -> Result<Outcome, CliError> {
    let mut rows: Vec<Value> = Vec::new();
    let mut text = String::new();
    let mut all_ok = true;
    let row_text = |r: &IntervalReport| {
        let status = if r.certified { "certified" } else { "NOT certified" };
        let mut s = format!("q={:<5} small={} {status}", r.q, r.small);
        if !r.inconclusive.is_empty() {
            write!(s, " (inconclusive e: {:?})", r.inconclusive).unwrap();
        }
        s + "\n"
    };
    match (q_range, q) {
        (_, Some(q)) => {
            let r = interval_violation_report(q).stage("bounds")?;
            all_ok = r.certified;
            text += &row_text(&r);
            rows.push(to_value(&r));
        }
        (Some(range), None) => {
            let (lo, hi) = parse_range(range)?;
            for q in lo.max(2)..=hi {
                if crate::field::poly::prime_power(q).is_none() || (odd_only && q % 2 == 0) {
                    continue;
                }
                if let Some(why) = excluded(q) {
                    writeln!(text, "q={q:<5} excluded ({why})").unwrap();
                    rows.push(json!({ "q": q, "excluded": why }));
                    continue;
                }
                let r = interval_violation_report(q).stage("bounds")?;
                all_ok &= r.certified;
                text += &row_text(&r);
                rows.push(to_value(&r));
            }
        }
        (None, None) => {
            return Err(CliError {
                stage: "arguments",
                error: Error::Parse("give --q or --q-range".into()),
            })
        }
    }
    let body = json!({ "rows": rows, "all_certified": all_ok });
    Ok(Outcome {
        exit: exit_if(all_ok),
        json: report("bounds", body),
        text,
    })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let mut budget = Budget::default();
    if let Some(m) = cli.max_points {
        budget.max_points = m;
    }
    if let Some(m) = cli.max_pair_ops {
        budget.max_pair_ops = m;
    }
    match &cli.command {
        Command::Pipeline {
            q,
            k,
            seed,
            exhaustive,
            max_iters,
            save_set,
            save_code,
        } => {
            let strategy = if *exhaustive {
                SearchStrategy::Exhaustive
            } else {
                SearchStrategy::Random {
                    seed: *seed,
                    max_iters: *max_iters,
                }
            };
            let args = PipelineArgs {
                q: *q,
                k: *k,
                strategy,
                save_set: save_set.clone(),
                save_code: save_code.clone(),
            };
            cmd_pipeline(&args, &budget)
        }
        Command::Partition { q, k } => cmd_partition(*q, *k, &budget),
        Command::Search {
            q,
            k,
            seed,
            max_iters,
            blocking_scan,
        } => {
            let strategy = match seed {
                Some(seed) => SearchStrategy::Random {
                    seed: *seed,
                    max_iters: *max_iters,
                },
                None => SearchStrategy::Exhaustive,
            };
            cmd_search(*q, *k, strategy, *blocking_scan, &budget)
        }
        Command::Verify { input, mode } => cmd_verify(input, *mode, &budget),
        Command::ExportCode {
            input,
            output,
            code_format,
        } => cmd_export_code(input, output, *code_format),
        Command::CheckMinimal { input, code_format } => cmd_check_minimal(input, *code_format, &budget),
        Command::Bounds { q_range, q, odd_only } => cmd_bounds(q_range.as_deref(), *q, *odd_only),
    }
}

/// Parses arguments, runs the command on a pool of the requested size and
/// writes the report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(outcome) => {
            let rendered = outcome.render(cli.format);
            match &cli.report {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: writing report: {e}");
                        return EXIT_USAGE;
                    }
                }
                None => print!("{rendered}"),
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
