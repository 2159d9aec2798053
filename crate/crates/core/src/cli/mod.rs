//! Command-line front end for the `subcodes` binary.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 a resource cap was
//! hit, 3 a certificate failed re-verification or a check found a
//! counterexample.

pub mod cache;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::caps::Caps;
use crate::group::{Ambient, GroupError, Subgroup};
use crate::perfect::{
    build_transversal, canonical_generators, classify, sweep_cyclic, verify_certificate, Certificate, ClassifyOptions,
    Interpretation, PerfectError, Policy, SweepRow,
};
use crate::perm::{PermError, Permutation};

use cache::{Cache, CacheEntry, CacheKey, CACHE_ENV};
use report::{ReportEnvelope, TransversalReport, SCHEMA};
use suite::{fixture_suite, numtheory_check, Budget, MAX_L};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource cap: {0}")]
    Resource(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<PerfectError> for CliError {
    fn from(e: PerfectError) -> Self {
        if e.is_resource() {
            return CliError::Resource(e.to_string());
        }
        match e {
            PerfectError::Group(GroupError::Perm(_))
            | PerfectError::Group(GroupError::NotContained)
            | PerfectError::Group(GroupError::DegreeMismatch { .. }) => CliError::Usage(e.to_string()),
            other => CliError::Verification(other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        PerfectError::from(e).into()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "subcodes",
    version,
    about = "Decide whether subgroups of S_n are perfect codes"
)]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON-lines verdict cache.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Allow enumerating S_n up to n = 12.
    #[arg(long, global = true)]
    pub allow_big: bool,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Fast,
    Oracle,
    Checked,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Fast => Policy::FastOnly,
            PolicyArg::Oracle => Policy::OracleOnly,
            PolicyArg::Checked => Policy::FastWithOracleCheck,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    NotASquare,
    SameLengthOddCount,
}

impl From<ReadingArg> for Interpretation {
    fn from(r: ReadingArg) -> Interpretation {
        match r {
            ReadingArg::NotASquare => Interpretation::NotASquare,
            ReadingArg::SameLengthOddCount => Interpretation::SameLengthOddCount,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct SubgroupArgs {
    /// Degree of the symmetric group.
    #[arg(long)]
    pub n: usize,
    /// Generators in cycle notation, separated by ';'.
    #[arg(long, default_value = "")]
    pub gens: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify H = <gens> in S_n.
    Classify {
        #[command(flatten)]
        input: SubgroupArgs,
        #[arg(long, value_enum, default_value = "checked")]
        policy: PolicyArg,
        /// Reading of the rule for cyclic subgroups with an even generator.
        #[arg(long, value_enum, default_value = "not-a-square")]
        reading: ReadingArg,
    },
    /// Classify with the double-coset oracle only.
    Oracle {
        #[command(flatten)]
        input: SubgroupArgs,
    },
    /// Search for an inverse-closed left transversal of H in S_n.
    Transversal {
        #[command(flatten)]
        input: SubgroupArgs,
    },
    /// Tabulate every cyclic 2-subgroup type of S_n against the oracle.
    SweepCyclic {
        #[arg(long)]
        n: usize,
        /// Write JSON lines here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the worked-example fixtures.
    #[command(name = "paper-suite", visible_alias = "fixtures")]
    FixtureSuite {
        #[arg(long, value_enum, default_value = "quick")]
        budget: Budget,
    },
    /// Exhaustively check that no power of an odd k < 2^l is -1 mod 2^(l+1).
    NumtheoryCheck {
        #[arg(long, default_value_t = 14)]
        l_max: u32,
    },
}

/// Parses `"(1 2); (3 4 5)"` into permutations of degree `n`. Empty items
/// are skipped, so `""` gives the trivial group.
pub fn parse_generators(text: &str, n: usize) -> Result<Vec<Permutation>, PermError> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Permutation::parse(s, n))
        .collect()
}

struct Ctx {
    caps: Caps,
    json: bool,
    cache: Option<Cache>,
}

impl Ctx {
    fn subgroup(&self, input: &SubgroupArgs) -> Result<Subgroup, CliError> {
        if input.n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if input.n > self.caps.max_degree {
            return Err(CliError::Resource(format!(
                "degree {} exceeds the cap of {}",
                input.n, self.caps.max_degree
            )));
        }
        let gens = parse_generators(&input.gens, input.n).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Subgroup::close(&gens, input.n, self.caps.max_subgroup_order)?)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialises")
}

fn cmd_classify(ctx: &Ctx, command: &str, input: &SubgroupArgs, opts: ClassifyOptions) -> Result<String, CliError> {
    let h = ctx.subgroup(input)?;
    let key = CacheKey {
        n: h.degree(),
        generators: canonical_generators(&h),
        policy: opts.policy,
        interpretation: opts.interpretation,
    };
    let cached = match &ctx.cache {
        Some(c) => c.lookup(&key, &ctx.caps)?,
        None => None,
    };
    let env = match cached {
        Some(entry) => {
            let mut env = ReportEnvelope::new(command, entry.report, ctx.caps);
            env.cached = true;
            env
        }
        None => {
            let report = classify(&h, &opts)?;
            if let Some(c) = &ctx.cache {
                c.store(&CacheEntry::new(key, ctx.caps, report.clone()))?;
            }
            ReportEnvelope::new(command, report, ctx.caps)
        }
    };
    Ok(if ctx.json { env.to_json() } else { env.human() })
}

fn cmd_transversal(ctx: &Ctx, input: &SubgroupArgs) -> Result<String, CliError> {
    let start = Instant::now();
    let h = ctx.subgroup(input)?;
    let g = Ambient::symmetric(h.degree(), &ctx.caps)?;
    let t = build_transversal(&h, &g, ctx.caps.transversal_budget)?;
    if let Some(t) = &t {
        if !verify_certificate(&h, &g, &Certificate::Transversal(t.clone())) {
            return Err(CliError::Verification("transversal rejected by the checker".into()));
        }
    }
    let r = TransversalReport {
        schema: SCHEMA.to_string(),
        n: h.degree(),
        generators: canonical_generators(&h),
        order: h.order(),
        transversal: t.map(|t| t.iter().map(Permutation::to_cycle_string).collect()),
        timing_ms: start.elapsed().as_millis() as u64,
        caps: ctx.caps,
    };
    if ctx.json {
        return Ok(to_json(&r));
    }
    Ok(match &r.transversal {
        Some(t) => format!(
            "inverse-closed left transversal of size {} (H is perfect):\n{}\n",
            t.len(),
            t.join("\n")
        ),
        None => "no inverse-closed left transversal (H is not perfect)\n".to_string(),
    })
}

/// Writes to a sibling temporary file, then renames it over `path`.
fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn sweep_human(rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{:<14} {:<6} {:<7} {:<20} {:<12} {:<12} flags\n",
        "type", "parity", "square", "same-length/odd", "not-a-square", "oracle"
    );
    for r in rows {
        let mut flags = Vec::new();
        if !r.readings_agree {
            flags.push("readings differ");
        }
        if r.same_length_flag {
            flags.push("same-length reading wrong");
        }
        if r.not_a_square_flag {
            flags.push("not-a-square reading wrong");
        }
        out.push_str(&format!(
            "{:<14} {:<6} {:<7} {:<20} {:<12} {:<12} {}\n",
            r.cycle_type,
            format!("{:?}", r.parity).to_lowercase(),
            r.is_square,
            r.same_length_odd_count.to_string(),
            r.not_a_square.to_string(),
            r.oracle.to_string(),
            flags.join(", ")
        ));
    }
    out
}

fn cmd_sweep(ctx: &Ctx, n: usize, output: Option<&Path>) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if n > ctx.caps.max_full_degree {
        return Err(CliError::Resource(format!(
            "sweep needs S_{n} enumerated; the cap is {}",
            ctx.caps.max_full_degree
        )));
    }
    let rows = sweep_cyclic(n, &ctx.caps)?;
    if let Some(bad) = rows.iter().find(|r| !r.transversal_agrees) {
        return Err(CliError::Verification(format!(
            "oracles disagree on cycle type {}",
            bad.cycle_type
        )));
    }
    let lines: String = rows
        .iter()
        .map(|r| serde_json::to_string(r).expect("serialises") + "\n")
        .collect();
    match output {
        Some(path) => {
            write_atomically(path, &lines)?;
            Ok(format!("{} rows written to {}\n", rows.len(), path.display()))
        }
        None if ctx.json => Ok(lines),
        None => Ok(sweep_human(&rows)),
    }
}

fn cmd_fixture_suite(ctx: &Ctx, budget: Budget) -> Result<String, CliError> {
    let s = fixture_suite(budget, &ctx.caps)?;
    if ctx.json {
        return Ok(to_json(&s));
    }
    let mut out = String::new();
    for f in &s.fixtures {
        let tag = if f.agrees { "agree" } else { "FINDING" };
        out.push_str(&format!(
            "[{tag:<7}] {}\n          claim:    {}\n          observed: {}\n",
            f.name, f.claim, f.observed
        ));
    }
    out.push_str(&format!(
        "{} fixtures, {} findings (oracle results that contradict the stated claim)\n",
        s.fixtures.len(),
        s.findings().count()
    ));
    Ok(out)
}

fn cmd_numtheory(ctx: &Ctx, l_max: u32) -> Result<String, CliError> {
    if !(2..=MAX_L).contains(&l_max) {
        return Err(CliError::Usage(format!("--l-max must lie in 2..={MAX_L}")));
    }
    let s = numtheory_check(l_max);
    if !s.passed() {
        return Err(CliError::Verification(format!(
            "counterexamples {:?}, order-of-5 failures {:?}",
            s.counterexamples, s.order_of_five_failures
        )));
    }
    if ctx.json {
        return Ok(to_json(&s));
    }
    Ok(format!(
        "l = 2..={}: {} values of k checked ({} also by listing powers), no power equals -1; \
         5 has order 2^(n-2) mod 2^n for n = 3..=30\n",
        s.l_max, s.k_checked, s.brute_forced
    ))
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let mut caps = Caps::default();
    if cli.allow_big {
        caps = caps.allow_big();
    }
    let ctx = Ctx {
        caps,
        json: cli.json,
        cache: cli.cache.as_ref().map(Cache::new),
    };
    match &cli.command {
        Command::Classify { input, policy, reading } => {
            let opts = ClassifyOptions {
                policy: (*policy).into(),
                interpretation: (*reading).into(),
                caps,
            };
            cmd_classify(&ctx, "classify", input, opts)
        }
        Command::Oracle { input } => {
            let opts = ClassifyOptions {
                policy: Policy::OracleOnly,
                caps,
                ..Default::default()
            };
            cmd_classify(&ctx, "oracle", input, opts)
        }
        Command::Transversal { input } => cmd_transversal(&ctx, input),
        Command::SweepCyclic { n, output } => cmd_sweep(&ctx, *n, output.as_deref()),
        Command::FixtureSuite { budget } => cmd_fixture_suite(&ctx, *budget),
        Command::NumtheoryCheck { l_max } => cmd_numtheory(&ctx, *l_max),
    }
}

/// Runs one command and returns its exit code. Output goes to `out` in a
/// single write; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return 1;
        }
        pool = pool.num_threads(t);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => Err(CliError::Resource(format!("thread pool: {e}"))),
    };
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
