use std::io::Write;
use std::path::PathBuf;

use bcb_core::analytic::bound_report;
use bcb_core::backmap::{associated_identities, has_ivp, theta};
use bcb_core::diffarrays::count_zero_ndiff;
use bcb_core::exactcount::{count_shard, count_sharded, merge_shards, ShardDescriptor, ShardResult};
use bcb_core::numtheory::{family_n_list, family_witnesses, Family};
use bcb_core::{
    canonical_orbits, count_bisections, enumerate_solutions, CountConfig, CountResult, OrbitSummary,
    SolutionFilter, Strategy,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::cache::{default_path, ResultCache, CACHE_ENV};
use crate::error::{CliError, CliResult};
use crate::golden;
use crate::verify::{self, Suite};

#[derive(Debug, Parser)]
#[command(name = "bcb", version, about = "Count and analyse bisections of binomial coefficient rows")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads; defaults to every core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cache file [default: $BCB_CACHE or ./bcb-cache.json].
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// JSON lines instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Memory budget for one meet-in-the-middle join, in GiB.
    #[arg(long, global = true, default_value_t = 8)]
    pub memory_gib: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Brute,
    Mitm,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Brute => Strategy::BruteForce,
            StrategyArg::Mitm => Strategy::MeetInMiddle,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact J_n for one row.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Mitm)]
        strategy: StrategyArg,
        /// Split into 2^prefix-len shards by fixing the first signs.
        #[arg(long)]
        prefix_len: Option<usize>,
        /// Count only this shard and print its manifest record.
        #[arg(long, requires = "prefix_len")]
        shard: Option<u64>,
    },
    /// Sum shard records (JSON lines) from files into one count.
    Merge {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// J_n, trivial and nontrivial counts for 1..=max-n.
    Table {
        #[arg(long)]
        max_n: usize,
        /// Compare against the bundled published table.
        #[arg(long)]
        diff: bool,
    },
    /// Orbit sizes and representatives of the nontrivial solutions.
    Appendix {
        #[arg(long)]
        n: usize,
        /// Compare against the bundled appendix.
        #[arg(long)]
        diff: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest order the suite computes; each suite has its own default.
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Upper bounds as CSV, with the exact count.
    Bounds {
        #[arg(long, conflicts_with = "max_n")]
        n: Option<usize>,
        #[arg(long, default_value_t = 36)]
        max_n: usize,
    },
    /// Family witnesses as JSON; with --limit, the plain list of orders.
    Families {
        #[arg(long)]
        limit: Option<usize>,
        /// Largest order of the witnesses listed.
        #[arg(long, default_value_t = 1000)]
        max_n: usize,
        #[arg(long)]
        family: Option<Family>,
    },
    /// J_n against the number of 0/1 arrays with zero n-th difference.
    Bijection {
        #[arg(long)]
        n: usize,
    },
    /// Θ images of the nontrivial solutions with their IVP flags.
    Backmap {
        #[arg(long)]
        n: usize,
    },
}

/// Shared state of one invocation.
pub struct Context {
    pub config: CountConfig,
    pub cache: Option<ResultCache>,
    pub json: bool,
    dirty: bool,
}

impl Context {
    pub fn new(global: &GlobalArgs) -> CliResult<Self> {
        let cache = if global.no_cache {
            None
        } else {
            Some(ResultCache::open(global.cache.clone().unwrap_or_else(default_path))?)
        };
        let config = CountConfig {
            memory_budget: global.memory_gib.saturating_mul(1 << 30),
            threads: global.threads,
            ..CountConfig::default()
        };
        Ok(Context {
            config,
            cache,
            json: global.json,
            dirty: false,
        })
    }

    /// Without a cache, for library callers.
    pub fn uncached(config: CountConfig) -> Self {
        Context {
            config,
            cache: None,
            json: false,
            dirty: false,
        }
    }

    /// The cached count if it was made with `strategy`, else a fresh one.
    pub fn count(&mut self, n: usize, strategy: Strategy) -> CliResult<CountResult> {
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(n)) {
            if hit.count.strategy == strategy {
                return Ok(hit.count.clone());
            }
        }
        let fresh = count_bisections(n, strategy, &self.config)?;
        self.store(fresh.clone())?;
        Ok(fresh)
    }

    pub fn exact(&mut self, n: usize) -> CliResult<BigUint> {
        Ok(self.count(n, Strategy::MeetInMiddle)?.total)
    }

    fn store(&mut self, count: CountResult) -> CliResult<()> {
        if let Some(c) = self.cache.as_mut() {
            c.insert_count(count)?;
            self.dirty = true;
        }
        Ok(())
    }

    pub fn orbits(&mut self, n: usize) -> CliResult<Vec<OrbitSummary>> {
        if let Some(o) = self.cache.as_ref().and_then(|c| c.get(n)).and_then(|e| e.orbits.clone()) {
            return Ok(o);
        }
        let orbits = canonical_orbits(n, &self.config)?;
        if self.cache.is_some() {
            self.count(n, Strategy::MeetInMiddle)?;
            let c = self.cache.as_mut().expect("checked");
            c.insert_orbits(n, orbits.clone())?;
            self.dirty = true;
        }
        Ok(orbits)
    }

    pub fn save(&mut self) -> CliResult<()> {
        if let (true, Some(c)) = (self.dirty, self.cache.as_ref()) {
            c.save()?;
            self.dirty = false;
        }
        Ok(())
    }
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value).expect("plain data serializes");
    writeln!(out)?;
    Ok(())
}

/// Runs one parsed command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut (dyn Write + Send)) -> CliResult<()> {
    if cli.global.threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let mut ctx = Context::new(&cli.global)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let result = pool.install(|| dispatch(&cli.command, &mut ctx, &mut *out));
    // keep whatever was computed even when a later step fails
    ctx.save()?;
    result
}

fn dispatch(command: &Command, ctx: &mut Context, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Count {
            n,
            strategy,
            prefix_len,
            shard,
        } => cmd_count(ctx, out, *n, (*strategy).into(), *prefix_len, *shard),
        Command::Merge { files } => cmd_merge(ctx, out, files),
        Command::Table { max_n, diff } => cmd_table(ctx, out, *max_n, *diff),
        Command::Appendix { n, diff } => cmd_appendix(ctx, out, *n, *diff),
        Command::Verify { suite, max_n, limit } => cmd_verify(ctx, out, *suite, *max_n, *limit),
        Command::Bounds { n, max_n } => match n {
            Some(n) => cmd_bounds(ctx, out, *n, *n),
            None => cmd_bounds(ctx, out, 1, *max_n),
        },
        Command::Families {
            limit,
            max_n,
            family,
        } => cmd_families(out, *limit, *max_n, *family),
        Command::Bijection { n } => cmd_bijection(ctx, out, *n),
        Command::Backmap { n } => cmd_backmap(ctx, out, *n),
    }
}

fn print_count(ctx: &Context, out: &mut dyn Write, r: &CountResult) -> CliResult<()> {
    if ctx.json {
        return json_line(out, r);
    }
    writeln!(out, "n\tJ_n\ttrivial\tnontrivial\tstrategy\telapsed_ms")?;
    writeln!(
        out,
        "{}\t{}\t{}\t{}\t{:?}\t{}",
        r.n,
        r.total,
        r.trivial,
        r.nontrivial,
        r.strategy,
        r.elapsed.as_millis()
    )?;
    Ok(())
}

pub fn cmd_count(
    ctx: &mut Context,
    out: &mut dyn Write,
    n: usize,
    strategy: Strategy,
    prefix_len: Option<usize>,
    shard: Option<u64>,
) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if prefix_len.is_some() && strategy == Strategy::BruteForce {
        return Err(CliError::Usage("sharding uses the meet-in-the-middle strategy".into()));
    }
    match (prefix_len, shard) {
        (Some(p), Some(id)) => {
            let desc = ShardDescriptor::new(n, p, id)?;
            let r = count_shard(&desc, &ctx.config)?;
            json_line(out, &r)
        }
        (Some(p), None) => {
            let r = count_sharded(n, p, &ctx.config)?;
            ctx.store(r.clone())?;
            print_count(ctx, out, &r)
        }
        (None, Some(_)) => Err(CliError::Usage("--shard needs --prefix-len".into())),
        (None, None) => {
            let r = ctx.count(n, strategy)?;
            print_count(ctx, out, &r)
        }
    }
}

pub fn cmd_merge(ctx: &mut Context, out: &mut dyn Write, files: &[PathBuf]) -> CliResult<()> {
    let mut records: Vec<ShardResult> = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(f)?;
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let r = serde_json::from_str(line).map_err(|e| {
                CliError::Usage(format!("{}:{}: not a shard record: {e}", f.display(), i + 1))
            })?;
            records.push(r);
        }
    }
    let total = merge_shards(&records)?;
    let n = records[0].shard.n;
    let trivial = bcb_core::exactcount::trivial_count(n);
    if total < trivial || total.bit(0) {
        return Err(CliError::Verification(format!(
            "merged J_{n} = {total} is odd or below the trivial count"
        )));
    }
    #[derive(Serialize)]
    struct Merged {
        n: usize,
        prefix_len: usize,
        shard_count: usize,
        total: String,
        trivial: String,
        nontrivial: String,
    }
    let m = Merged {
        n,
        prefix_len: records[0].shard.prefix_len,
        shard_count: records.len(),
        total: total.to_string(),
        trivial: trivial.to_string(),
        nontrivial: (&total - &trivial).to_string(),
    };
    if ctx.json {
        json_line(out, &m)
    } else {
        writeln!(out, "{}\t{}\t{}\t{}", m.n, m.total, m.trivial, m.nontrivial)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub total: String,
    pub trivial: String,
    pub nontrivial: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub golden: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

/// Rows `1..=max_n`; with `diff`, each row is set against the published value.
pub fn table_rows(ctx: &mut Context, max_n: usize, diff: bool) -> CliResult<Vec<TableRow>> {
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let golden = golden::table1();
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let r = ctx.count(n, Strategy::MeetInMiddle)?;
        let g = if diff { golden.get(&n) } else { None };
        rows.push(TableRow {
            n,
            total: r.total.to_string(),
            trivial: r.trivial.to_string(),
            nontrivial: r.nontrivial.to_string(),
            golden: g.map(|g| g.to_string()),
            matches: g.map(|g| *g == r.total),
        });
        // a long table should not lose finished rows
        ctx.save()?;
    }
    Ok(rows)
}

pub fn cmd_table(ctx: &mut Context, out: &mut dyn Write, max_n: usize, diff: bool) -> CliResult<()> {
    let rows = table_rows(ctx, max_n, diff)?;
    if !ctx.json {
        write!(out, "n\tJ_n\ttrivial\tnontrivial")?;
        if diff {
            write!(out, "\tpublished\tstatus")?;
        }
        writeln!(out)?;
    }
    for r in &rows {
        if ctx.json {
            json_line(out, r)?;
            continue;
        }
        write!(out, "{}\t{}\t{}\t{}", r.n, r.total, r.trivial, r.nontrivial)?;
        if diff {
            let status = match r.matches {
                Some(true) => "ok",
                Some(false) => "MISMATCH",
                None => "unpublished",
            };
            write!(out, "\t{}\t{status}", r.golden.as_deref().unwrap_or("-"))?;
        }
        writeln!(out)?;
    }
    if diff {
        let bad: Vec<usize> = rows.iter().filter(|r| r.matches == Some(false)).map(|r| r.n).collect();
        writeln!(out, "mismatches: {}", bad.len())?;
        if !bad.is_empty() {
            return Err(CliError::Verification(format!("table differs at n = {bad:?}")));
        }
    }
    Ok(())
}

pub fn cmd_appendix(ctx: &mut Context, out: &mut dyn Write, n: usize, diff: bool) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let orbits = ctx.orbits(n)?;
    for o in &orbits {
        if ctx.json {
            json_line(out, o)?;
        } else {
            writeln!(out, "{n}\t{}\t{}", o.orbit_size, o.representative)?;
        }
    }
    if diff {
        if n > golden::APPENDIX_MAX_N {
            return Err(CliError::Usage(format!(
                "the appendix covers n ≤ {}",
                golden::APPENDIX_MAX_N
            )));
        }
        let ours: Vec<(u64, String)> = orbits
            .iter()
            .map(|o| (o.orbit_size, o.representative.to_string()))
            .collect();
        let mut printed = golden::appendix_for(n);
        let mut sorted = ours.clone();
        printed.sort_by(|a, b| b.1.cmp(&a.1));
        sorted.sort_by(|a, b| b.1.cmp(&a.1));
        let same = printed == sorted;
        writeln!(out, "appendix {n}: {}", if same { "match" } else { "MISMATCH" })?;
        if !same {
            return Err(CliError::Verification(format!("orbits of row {n} differ from the appendix")));
        }
    }
    Ok(())
}

pub fn cmd_verify(
    ctx: &mut Context,
    out: &mut dyn Write,
    suite: Suite,
    max_n: Option<usize>,
    limit: Option<usize>,
) -> CliResult<()> {
    let checks = verify::run_suite(ctx, suite, max_n, limit)?;
    let mut failed = 0;
    for c in &checks {
        if ctx.json {
            json_line(out, c)?;
        } else {
            writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        failed += usize::from(!c.pass);
    }
    if !ctx.json {
        writeln!(out, "{}: {} checks, {failed} failed", suite.name(), checks.len())?;
    }
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} {} checks failed", suite.name())));
    }
    Ok(())
}

fn log2_cell(v: Option<f64>) -> String {
    v.map(|x| format!("log2:{x:.6}")).unwrap_or_default()
}

pub fn cmd_bounds(ctx: &mut Context, out: &mut dyn Write, lo: usize, hi: usize) -> CliResult<()> {
    if lo == 0 || hi < lo {
        return Err(CliError::Usage("orders must be at least 1".into()));
    }
    writeln!(out, "n,exact,holder,remark_2^{{n+2}}/n,refined,pow2")?;
    let mut violations = Vec::new();
    for n in lo..=hi {
        let exact = ctx.exact(n)?;
        let r = bound_report(n, Some(exact.clone()))?;
        for v in r.violations() {
            violations.push(format!("{v} at n = {n}"));
        }
        writeln!(
            out,
            "{n},{exact},{},{},{},{}",
            log2_cell(Some(r.holder_log2)),
            log2_cell(r.remark_log2),
            log2_cell(r.refined.as_ref().map(|b| b.refined_log2())),
            log2_cell(r.pow2_log2),
        )?;
    }
    if !violations.is_empty() {
        return Err(CliError::Verification(format!("bounds exceeded: {}", violations.join(", "))));
    }
    Ok(())
}

pub fn cmd_families(
    out: &mut dyn Write,
    limit: Option<usize>,
    max_n: usize,
    family: Option<Family>,
) -> CliResult<()> {
    if let Some(limit) = limit {
        for n in family_n_list(limit)? {
            writeln!(out, "{n}")?;
        }
        return Ok(());
    }
    let families: Vec<Family> = match family {
        Some(f) => vec![f],
        None => Family::all().to_vec(),
    };
    for w in family_witnesses(&families, max_n)? {
        json_line(out, &w)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct BijectionReport {
    pub n: usize,
    pub j_n: String,
    pub x_n: String,
    pub equal: bool,
}

pub fn cmd_bijection(ctx: &mut Context, out: &mut dyn Write, n: usize) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let x = count_zero_ndiff(n)?;
    let j = ctx.exact(n)?;
    let report = BijectionReport {
        n,
        j_n: j.to_string(),
        x_n: x.to_string(),
        equal: j == BigUint::from(x),
    };
    json_line(out, &report)?;
    if !report.equal {
        return Err(CliError::Verification(format!("J_{n} = {j} but x_{n} = {x}")));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct BackmapLine {
    pub n: usize,
    pub bits: String,
    pub theta: Vec<i8>,
    pub theta_ivp: bool,
    /// IVP of the two associated identities of order `n`.
    pub associated_ivp: [bool; 2],
}

fn ternary_text(entries: &[i8]) -> String {
    entries
        .iter()
        .map(|e| match e {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

pub fn cmd_backmap(ctx: &mut Context, out: &mut dyn Write, n: usize) -> CliResult<()> {
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    for v in enumerate_solutions(n, SolutionFilter::NontrivialOnly, &ctx.config)? {
        let t = theta(&v)?;
        let [a, b] = associated_identities(&v)?;
        let line = BackmapLine {
            n,
            bits: v.to_string(),
            theta_ivp: has_ivp(&t)?,
            associated_ivp: [!a.is_zero() && has_ivp(&a)?, !b.is_zero() && has_ivp(&b)?],
            theta: t.entries,
        };
        if ctx.json {
            json_line(out, &line)?;
        } else {
            writeln!(
                out,
                "{}\t{}\tivp={}\tassociated_ivp={},{}",
                line.bits,
                ternary_text(&line.theta),
                line.theta_ivp,
                line.associated_ivp[0],
                line.associated_ivp[1]
            )?;
        }
    }
    Ok(())
}
