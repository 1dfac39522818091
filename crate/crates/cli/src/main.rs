use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use carrylab::bounds::{mu_table, mu_table_csv};
use carrylab::carry::{carry_report, rep_function};
use carrylab::exact;
use carrylab::extremal::{
    classify_structure, exhaustive_plan, plan_theorem, search, search_shard, Params, Purpose,
    SearchMode, SearchOutcome, SearchPartial, Statistic, SweepTally, TheoremId, VerificationReport,
    DEFAULT_BUDGET, REPORT_SCHEMA,
};
use carrylab::ring::DigitalSet;

/// Upper bound on shards per sweep; also the checkpoint granularity.
const MAX_SHARDS: u128 = 256;

/// Samples used when `--force-sample` replaces an oversized exhaustive search.
const FALLBACK_SAMPLES: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(
    name = "carrylab",
    version,
    about = "Carry statistics and extremal digital sets modulo q"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Seed for every sampled mode.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Resume from and record progress in this file.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Candidate evaluations allowed before refusing an exhaustive run.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Stop after this many shards in this invocation; resume with the same --checkpoint.
    #[arg(long, global = true, requires = "checkpoint")]
    shard_limit: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StatArg {
    C1,
    C2,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Carries, sumset profile and structure class of one digital set.
    Analyze {
        /// `q=9 m=3 A=8,0,1` or `Z m=3 A=0,1,5`; may span several arguments.
        #[arg(required = true, num_args = 1..)]
        literal: Vec<String>,
    },
    /// Minimize C1 or C2 over the digital sets of Z_q.
    Search {
        /// `q=<int> m=<int>`
        #[arg(required = true, num_args = 1..)]
        space: Vec<String>,
        #[arg(long, value_enum, default_value_t = StatArg::C2)]
        stat: StatArg,
        #[arg(long, conflicts_with_all = ["samples", "hill_climb"])]
        exhaustive: bool,
        /// Uniform random samples instead of the full space.
        #[arg(long)]
        samples: Option<u64>,
        /// Steepest-descent restarts instead of the full space.
        #[arg(long, conflicts_with = "samples")]
        hill_climb: Option<u64>,
        /// Fall back to sampling when the exhaustive space exceeds the budget.
        #[arg(long)]
        force_sample: bool,
    },
    /// Sweep a finite family and check one statement on every member.
    Verify {
        theorem: String,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        alpha: Option<u32>,
        #[arg(long)]
        beta: Option<u32>,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Table of mu(m) against the interval ratio.
    Bounds {
        #[arg(required = true, num_args = 1..)]
        ms: Vec<i64>,
    },
}

#[derive(Serialize)]
struct RunConfig<'a> {
    #[serde(flatten)]
    command: &'a Command,
    seed: u64,
    workers: u64,
    format: Format,
    checkpoint: Option<String>,
    budget: u64,
}

impl<'a> RunConfig<'a> {
    fn new(cli: &'a Cli) -> Self {
        RunConfig {
            command: &cli.command,
            seed: cli.common.seed,
            workers: cli.common.workers,
            format: cli.common.format,
            checkpoint: cli
                .common
                .checkpoint
                .as_ref()
                .map(|p| p.display().to_string()),
            budget: cli.common.budget,
        }
    }

    /// Identity of the computation: everything that changes the result.
    fn fingerprint(&self) -> String {
        json!({ "command": self.command, "seed": self.seed, "budget": self.budget }).to_string()
    }
}

enum Outcome {
    Ok,
    Violations,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.workers as usize)
        .build()
        .expect("thread pool");
    match pool.install(|| run(&cli)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Analyze { literal } => analyze(cli, &literal.join(" ")),
        Command::Search {
            space,
            stat,
            exhaustive: _,
            samples,
            hill_climb,
            force_sample,
        } => run_search(cli, space, *stat, *samples, *hill_climb, *force_sample),
        Command::Verify {
            theorem,
            q,
            m,
            p,
            alpha,
            beta,
            window,
            samples,
            exhaustive,
        } => {
            let id: TheoremId = theorem.parse()?;
            let params = Params {
                q: *q,
                m: *m,
                p: *p,
                alpha: *alpha,
                beta: *beta,
                window: *window,
                samples: *samples,
                exhaustive: *exhaustive,
            };
            run_verify(cli, id, &params)
        }
        Command::Bounds { ms } => bounds(cli, ms),
    }
}

fn emit(
    cli: &Cli,
    elapsed_ms: u64,
    result: Value,
    csv: impl FnOnce() -> String,
    human: impl FnOnce() -> String,
) {
    let text = match cli.common.format {
        Format::Json => {
            let envelope = json!({
                "format": REPORT_SCHEMA,
                "config": RunConfig::new(cli),
                "elapsed_ms": elapsed_ms,
                "result": result,
            });
            serde_json::to_string_pretty(&envelope).expect("json") + "\n"
        }
        Format::Csv => csv(),
        Format::Human => human(),
    };
    // a reader that closes the pipe early (`| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn analyze(cli: &Cli, literal: &str) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let a: DigitalSet = literal
        .parse()
        .with_context(|| format!("invalid set literal `{literal}`"))?;
    let report = carry_report(&a);
    let profile = rep_function(a.as_set(), a.as_set())?;
    let layered: Vec<u64> = (1..=profile.max_count())
        .map(|i| profile.layered_size(i))
        .collect();
    let for_c1 = classify_structure(&a, Purpose::ForC1);
    let for_c2 = classify_structure(&a, Purpose::ForC2);
    let carries: Vec<String> = report.carry_set.iter().map(|c| c.to_string()).collect();
    let result = json!({
        "set": a,
        "carries": report,
        "sumset_profile": {
            "support": profile.support_len(),
            "total": profile.total,
            "max_count": profile.max_count(),
            "layered_sizes": layered,
        },
        "structure": { "for_c1": for_c1, "for_c2": for_c2 },
    });
    emit(
        cli,
        start.elapsed().as_millis() as u64,
        result,
        || {
            format!(
                "field,value\nset,{}\ncarry_set,{}\nc1,{}\ncarry_count,{}\nc2,{}\nsumset_support,{}\nclass_c1,{}\nclass_c2,{}\n",
                a,
                carries.join(" "),
                report.c1,
                report.carry_count,
                exact::render(&report.c2),
                profile.support_len(),
                for_c1,
                for_c2
            )
        },
        || {
            format!(
                "set          {}\ncarries      {{{}}}\nc1           {}\ncarry pairs  {}\nc2           {}\nA+A support  {} (layered sizes {:?})\nclass (C1)   {}\nclass (C2)   {}\n",
                a,
                carries.join(", "),
                report.c1,
                report.carry_count,
                exact::render_human(&report.c2),
                profile.support_len(),
                layered,
                for_c1,
                for_c2
            )
        },
    );
    Ok(Outcome::Ok)
}

fn parse_space(space: &[String]) -> anyhow::Result<(i64, i64)> {
    let (mut q, mut m) = (None, None);
    for token in space.iter().flat_map(|s| s.split_whitespace()) {
        let (key, value) = token
            .split_once('=')
            .with_context(|| format!("expected key=value, got `{token}`"))?;
        let value: i64 = value
            .parse()
            .with_context(|| format!("`{token}`: expected an integer"))?;
        match key {
            "q" => q = Some(value),
            "m" => m = Some(value),
            _ => bail!("unknown key in `{token}`"),
        }
    }
    Ok((q.context("missing q=")?, m.context("missing m=")?))
}

#[derive(Serialize, Deserialize)]
struct Checkpoint<T> {
    format: String,
    fingerprint: String,
    total_shards: u64,
    /// Shards `0..=last_completed_shard` are folded into `partial`.
    last_completed_shard: Option<u64>,
    partial: T,
}

fn shard_count(len: u128) -> u64 {
    len.clamp(1, MAX_SHARDS) as u64
}

/// Runs shards `0..total` in batches of `workers`, folding results in shard
/// order and saving a checkpoint after every batch. `None` when
/// `--shard-limit` stopped the run early.
fn run_sharded<T>(
    cli: &Cli,
    total: u64,
    empty: T,
    run: impl Fn(u64) -> anyhow::Result<T> + Sync,
    merge: impl Fn(T, T) -> T,
) -> anyhow::Result<Option<T>>
where
    T: Serialize + DeserializeOwned + Send + Clone,
{
    let fingerprint = RunConfig::new(cli).fingerprint();
    let path = cli.common.checkpoint.as_deref();
    let mut acc = empty;
    let mut next = 0u64;
    if let Some(path) = path.filter(|p| p.exists()) {
        let saved: Checkpoint<T> = serde_json::from_str(&fs::read_to_string(path)?)
            .with_context(|| format!("unreadable checkpoint {}", path.display()))?;
        if saved.fingerprint != fingerprint || saved.total_shards != total {
            bail!("checkpoint {} belongs to a different run", path.display());
        }
        acc = saved.partial;
        next = saved.last_completed_shard.map_or(0, |s| s + 1);
    }
    let batch = cli.common.workers.max(1);
    let stop = cli
        .common
        .shard_limit
        .map_or(total, |n| next.saturating_add(n).min(total));
    while next < stop {
        let end = (next + batch).min(stop);
        let parts: Vec<T> = (next..end)
            .into_par_iter()
            .map(&run)
            .collect::<anyhow::Result<Vec<T>>>()?;
        for part in parts {
            acc = merge(acc, part);
        }
        next = end;
        if let Some(path) = path {
            save_checkpoint(path, &fingerprint, total, next - 1, &acc)?;
        }
    }
    if next < total {
        eprintln!(
            "stopped after shard {} of {total}; rerun with the same --checkpoint to resume",
            next
        );
        return Ok(None);
    }
    Ok(Some(acc))
}

fn save_checkpoint<T: Serialize + Clone>(
    path: &Path,
    fingerprint: &str,
    total: u64,
    last: u64,
    partial: &T,
) -> anyhow::Result<()> {
    let checkpoint = Checkpoint {
        format: REPORT_SCHEMA.to_string(),
        fingerprint: fingerprint.to_string(),
        total_shards: total,
        last_completed_shard: Some(last),
        partial: partial.clone(),
    };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(&checkpoint)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn run_search(
    cli: &Cli,
    space: &[String],
    stat: StatArg,
    samples: Option<u64>,
    hill_climb: Option<u64>,
    force_sample: bool,
) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let (q, m) = parse_space(space)?;
    let statistic = match stat {
        StatArg::C1 => Statistic::C1,
        StatArg::C2 => Statistic::C2,
    };
    let seed = cli.common.seed;
    let budget = cli.common.budget;
    let mut mode = match (samples, hill_climb) {
        (Some(samples), _) => SearchMode::Random { samples, seed },
        (None, Some(restarts)) => SearchMode::HillClimb { restarts, seed },
        (None, None) => SearchMode::Exhaustive,
    };
    let mut notes = Vec::new();
    let outcome = if mode == SearchMode::Exhaustive {
        match exhaustive_plan(q, m, statistic, budget) {
            Ok(plan) => {
                let total = shard_count(plan.odometer_len());
                let partial = run_sharded(
                    cli,
                    total,
                    SearchPartial::empty(statistic),
                    |i| Ok(search_shard(&plan.shard(i, total), statistic)?),
                    SearchPartial::merge,
                )?;
                let Some(partial) = partial else {
                    return Ok(Outcome::Ok);
                };
                SearchOutcome::from_partial(q, m, mode, partial)?
            }
            Err(carrylab::Error::SpaceTooLarge { size, .. }) if force_sample => {
                // the budget still caps the evaluations of the fallback
                let samples = FALLBACK_SAMPLES.min(budget);
                mode = SearchMode::Random { samples, seed };
                notes.push(format!(
                    "space of {size} exceeds the budget; sampled {samples} sets instead"
                ));
                search(q, m, statistic, mode, budget)?
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        search(q, m, statistic, mode, budget)?
    };
    if !outcome.admissible {
        notes.push(format!("(q, m) = ({q}, {m}) is not admissible"));
    }
    for note in &notes {
        eprintln!("note: {note}");
    }
    let result = json!({ "outcome": outcome, "notes": notes });
    emit(
        cli,
        start.elapsed().as_millis() as u64,
        result,
        || {
            let mut out = String::from("set,class,min\n");
            for (w, class) in outcome.witnesses.iter().zip(&outcome.witness_classes) {
                let elems: Vec<String> = w.elements().iter().map(|x| x.to_string()).collect();
                out.push_str(&format!(
                    "{},{},{}\n",
                    elems.join(" "),
                    class,
                    exact::render(&outcome.min)
                ));
            }
            out
        },
        || {
            let mut out = format!(
                "q={q} m={m} {:?} min {}{}\nexamined {} of {} ({} minimizers)\n",
                statistic,
                exact::render_human(&outcome.min),
                if outcome.certified {
                    ""
                } else {
                    " (not certified)"
                },
                outcome.examined,
                outcome.space_size,
                outcome.minimizers
            );
            for (w, class) in outcome.witnesses.iter().zip(&outcome.witness_classes) {
                out.push_str(&format!("  {w}  {class}\n"));
            }
            out
        },
    );
    Ok(Outcome::Ok)
}

fn run_verify(cli: &Cli, id: TheoremId, params: &Params) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let plan = plan_theorem(id, params, cli.common.budget, cli.common.seed)?;
    let total = shard_count(plan.len());
    let tally = run_sharded(
        cli,
        total,
        SweepTally::default(),
        |i| Ok(plan.run_shard(i, total)),
        SweepTally::merge,
    )?;
    let Some(tally) = tally else {
        return Ok(Outcome::Ok);
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let report = plan.report(tally, elapsed);
    report.revalidate()?;
    let passed = report.passed();
    let value = serde_json::to_value(&report)?;
    emit(
        cli,
        elapsed,
        value,
        || verify_csv(&report),
        || verify_human(&report),
    );
    Ok(if passed {
        Outcome::Ok
    } else {
        Outcome::Violations
    })
}

fn verify_csv(report: &VerificationReport) -> String {
    let mut out = String::from("field,value\n");
    out.push_str(&format!(
        "theorem,{}\nmode,{}\n",
        report.theorem_id, report.mode
    ));
    out.push_str(&format!(
        "candidates_examined,{}\n",
        report.candidates_examined
    ));
    out.push_str(&format!(
        "violations,{}\nequalities,{}\n",
        report.violation_count, report.equality_count
    ));
    for o in &report.min_observed {
        out.push_str(&format!("min {},{}\n", o.label, exact::render(&o.value)));
    }
    for (name, n) in &report.counters {
        out.push_str(&format!("{name},{n}\n"));
    }
    out
}

fn verify_human(report: &VerificationReport) -> String {
    let mut out = format!(
        "{} [{}]: {} ({} candidates, {} violations, {} equality cases)\n",
        report.theorem_id,
        report.mode,
        if report.passed() { "PASS" } else { "FAIL" },
        report.candidates_examined,
        report.violation_count,
        report.equality_count
    );
    for o in &report.min_observed {
        out.push_str(&format!(
            "  min {} = {} ({} attaining)\n",
            o.label,
            exact::render_human(&o.value),
            o.count
        ));
        for w in o.witnesses.iter().take(5) {
            out.push_str(&format!(
                "    {:?} {}\n",
                w.sets,
                w.structure.as_deref().unwrap_or("")
            ));
        }
    }
    for w in report.violations.iter().take(10) {
        out.push_str(&format!(
            "  violation {}: {:?} value {} vs {}\n",
            w.kind,
            w.sets,
            exact::render(&w.value),
            exact::render(&w.bound)
        ));
    }
    for (name, n) in &report.counters {
        out.push_str(&format!("  {name}: {n}\n"));
    }
    for note in &report.observations {
        out.push_str(&format!("  note: {note}\n"));
    }
    out
}

fn bounds(cli: &Cli, ms: &[i64]) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let rows = mu_table(ms)?;
    emit(
        cli,
        start.elapsed().as_millis() as u64,
        json!({ "rows": rows }),
        || mu_table_csv(&rows),
        || {
            let mut out = String::new();
            for r in &rows {
                out.push_str(&format!(
                    "m={:<6} p^alpha={}^{}  mu={}  interval={}\n",
                    r.m,
                    r.p,
                    r.alpha,
                    exact::render_human(&r.mu),
                    exact::render(&r.interval_ratio)
                ));
            }
            out
        },
    );
    Ok(Outcome::Ok)
}
