use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use dnormal_core::bounds::render_table;
use dnormal_core::io::{fmt_f64, read_points};
use dnormal_core::results::{append_record, read_records, verified_witnesses, AcuteRecord};
use dnormal_core::search::{probe_relaxed_bound, InitKind, SearchBudget};
use dnormal_core::{
    bounds_table, build_graph, classify_angle, hypercube_vertices, km_embedding, random_acute_set,
    regular_simplex, search, turan_fit, EmbeddingParams, Error, PairMode, PointSet, SearchConfig,
    Tolerance,
};

use crate::args::*;
use crate::manifest::{file_digest, sidecar, write_atomic, write_json, RunManifest};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unreadable input; exit 2.
    Usage(String),
    /// The requested construction or property failed; exit 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Failure(_) => ExitCode::from(1),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotAcute
            | Error::DegenerateAngle
            | Error::DegeneratePair
            | Error::NumericalFailure(_)
            | Error::FeasibilityFailure { .. }
            | Error::VerificationFailure(_) => CliError::Failure(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Outcome of a run that completed without error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Holds => ExitCode::SUCCESS,
            Status::Fails => ExitCode::from(1),
        }
    }
}

type CmdResult = Result<Status, CliError>;

/// Bookkeeping shared by every command that writes files.
struct Run<'a> {
    subcommand: &'static str,
    argv: &'a [String],
    params: serde_json::Value,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    start: Instant,
}

impl Run<'_> {
    fn write_manifest(&self, out: &Path) -> Result<(), CliError> {
        let inputs: Vec<&Path> = self.inputs.iter().map(PathBuf::as_path).collect();
        let m = RunManifest::new(
            self.subcommand,
            self.argv,
            self.params.clone(),
            self.seed,
            &inputs,
            self.start.elapsed(),
        )?;
        write_json(&sidecar(out, "manifest"), &m)?;
        Ok(())
    }
}

pub fn run(command: Command, argv: &[String]) -> CmdResult {
    let params = serde_json::to_value(&command).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut ctx = Run {
        subcommand: "",
        argv,
        params,
        seed: None,
        inputs: Vec::new(),
        start: Instant::now(),
    };
    match command {
        Command::Verify(a) => {
            ctx.subcommand = "verify";
            ctx.inputs.push(a.points.clone());
            verify(a, &ctx)
        }
        Command::Construct(a) => {
            ctx.subcommand = "construct";
            construct(a, &mut ctx)
        }
        Command::Bounds(a) => {
            ctx.subcommand = "bounds";
            ctx.inputs.extend(a.results.clone());
            bounds(a, &ctx)
        }
        Command::Density(a) => {
            ctx.subcommand = "density";
            ctx.seed = Some(a.seed);
            density(a, &ctx)
        }
        Command::Search(a) => {
            ctx.subcommand = "search";
            ctx.seed = Some(a.seed);
            run_search(a, &ctx)
        }
        Command::Probe(a) => {
            ctx.subcommand = "probe";
            ctx.seed = Some(a.seed);
            probe(a, &ctx)
        }
        Command::Replay(a) => replay(a),
    }
}

fn tolerance(tol: f64) -> Result<Tolerance, CliError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(Tolerance::new(tol, tol))
    } else {
        Err(CliError::Usage(format!(
            "--tol must be finite and non-negative, got {tol}"
        )))
    }
}

fn pair_mode(p: &PredicateArgs) -> Result<PairMode, CliError> {
    if !(p.delta.is_finite() && p.delta >= 0.0) {
        return Err(CliError::Usage(format!(
            "--delta must be finite and non-negative, got {}",
            p.delta
        )));
    }
    match p.mode {
        ModeArg::Standard | ModeArg::Strict if p.delta != 0.0 => Err(CliError::Usage(
            "--delta only applies to --mode almost".into(),
        )),
        ModeArg::Standard => Ok(PairMode::Standard),
        ModeArg::Strict => Ok(PairMode::Strict),
        ModeArg::Almost => Ok(PairMode::Almost { delta: p.delta }),
    }
}

#[derive(Serialize)]
struct VerifyReport {
    graph: dnormal_core::graph::GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    expect: Option<Expectation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
    /// Missing pairs for `complete`, `[vertex, a, b]` angle triples otherwise.
    violations: Vec<Vec<usize>>,
}

fn angle_violations(
    p: &PointSet,
    tol: &Tolerance,
    strict: bool,
) -> Result<Vec<Vec<usize>>, CliError> {
    let n = p.len();
    let mut out = Vec::new();
    for v in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                if a == v || b == v {
                    continue;
                }
                let class = classify_angle(p.point(v), p.point(a), p.point(b), tol)?;
                let bad = if strict {
                    !class.is_acute()
                } else {
                    class.is_obtuse()
                };
                if bad {
                    out.push(vec![v, a, b]);
                }
            }
        }
    }
    Ok(out)
}

fn verify(a: VerifyArgs, ctx: &Run) -> CmdResult {
    let tol = tolerance(a.predicate.tol)?;
    let mode = pair_mode(&a.predicate)?;
    let points = read_points(&a.points)?;
    let g = build_graph(&points, mode, &tol)?;
    println!(
        "points {}  dim {}  mode {}",
        points.len(),
        points.dim(),
        mode.name()
    );
    println!("edges {}", g.edge_count());

    let violations = match a.expect {
        None => Vec::new(),
        Some(Expectation::Complete) => g
            .missing_edges()
            .into_iter()
            .map(|(i, j)| vec![i, j])
            .collect(),
        Some(Expectation::Acute) => angle_violations(&points, &tol, true)?,
        Some(Expectation::Nonobtuse) => angle_violations(&points, &tol, false)?,
    };
    let pass = a.expect.map(|_| violations.is_empty());
    if let Some(expect) = a.expect {
        let name = serde_json::to_value(expect)
            .ok()
            .and_then(|v| v.as_str().map(String::from));
        let verdict = if violations.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "expect {}: {verdict} ({} violations)",
            name.unwrap_or_default(),
            violations.len()
        );
        for v in &violations {
            let idx: Vec<String> = v.iter().map(usize::to_string).collect();
            println!("violation {}", idx.join(" "));
        }
    }
    if let Some(out) = &a.out {
        let report = VerifyReport {
            graph: g.to_json(),
            expect: a.expect,
            pass,
            violations,
        };
        write_json(out, &report)?;
        ctx.write_manifest(out)?;
    }
    Ok(if pass == Some(false) {
        Status::Fails
    } else {
        Status::Holds
    })
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    match out {
        Some(path) => write_json(path, value)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?
        ),
    }
    Ok(())
}

#[derive(Serialize)]
struct RandomAcuteTrace {
    dim: usize,
    seed: u64,
    size: usize,
    sample_size: usize,
    best_round: Option<usize>,
    rounds: usize,
}

fn construct(a: ConstructArgs, ctx: &mut Run) -> CmdResult {
    let out = a.out.as_deref();
    match a.kind {
        ConstructKind::Hypercube { dim } => {
            let p = hypercube_vertices(dim)?;
            emit(out, &p)?;
            if out.is_some() {
                println!("hypercube: {} points in dim {}", p.len(), p.dim());
            }
        }
        ConstructKind::Simplex { m } => {
            let p = regular_simplex(m)?;
            emit(out, &p)?;
            if out.is_some() {
                println!("simplex: {} points in dim {}", p.len(), p.dim());
            }
        }
        ConstructKind::RandomAcute { dim, seed, rounds } => {
            ctx.seed = Some(seed);
            let report = random_acute_set(dim, seed, rounds)?;
            emit(out, &report.points)?;
            if let Some(path) = out {
                let trace = RandomAcuteTrace {
                    dim,
                    seed,
                    size: report.points.len(),
                    sample_size: report.sample_size,
                    best_round: report.best_round,
                    rounds: report.rounds,
                };
                write_json(&sidecar(path, "trace"), &trace)?;
                println!(
                    "random-acute: {} points in dim {}",
                    report.points.len(),
                    report.points.dim()
                );
            }
        }
        ConstructKind::KmEmbedding(k) => {
            ctx.seed = Some(k.seed);
            let tol = tolerance(k.tol)?;
            let input = match (&k.input.acute_input, k.input.simplex) {
                (Some(path), _) => {
                    ctx.inputs.push(path.clone());
                    read_points(path)?
                }
                (None, Some(m)) => regular_simplex(m)?,
                (None, None) => {
                    return Err(CliError::Usage("need --acute-input or --simplex".into()))
                }
            };
            let params = EmbeddingParams {
                epsilon: k.epsilon,
                max_halvings: k.max_halvings,
                seed: k.seed,
                ..EmbeddingParams::new(k.parts_size)
            };
            let (config, trace) = km_embedding(&input, &params, &tol)?;
            emit(out, &config)?;
            if let Some(path) = out {
                write_json(&sidecar(path, "trace"), &trace)?;
                println!(
                    "km-embedding: {} points in dim {}, {} parts, certificate {}",
                    config.points().len(),
                    config.points().dim(),
                    config.part_count(),
                    if trace.certificate.pass {
                        "pass"
                    } else {
                        "fail"
                    }
                );
            }
        }
    }
    if let Some(path) = out {
        ctx.write_manifest(path)?;
    }
    Ok(Status::Holds)
}

fn bounds(a: BoundsArgs, ctx: &Run) -> CmdResult {
    if a.from > a.to {
        return Err(CliError::Usage(format!(
            "--from {} exceeds --to {}",
            a.from, a.to
        )));
    }
    let witnesses = match &a.results {
        Some(path) => verified_witnesses(&read_records(path)?, &Tolerance::default()),
        None => Vec::new(),
    };
    let rows = bounds_table(a.from, a.to, &witnesses)?;
    let text = render_table(&rows);
    print!("{text}");
    if let Some(out) = &a.out {
        if out.extension().is_some_and(|e| e == "json") {
            return Err(CliError::Usage(
                "--out names the text table; its JSON twin is derived from it".into(),
            ));
        }
        write_atomic(out, text.as_bytes())?;
        write_json(&out.with_extension("json"), &rows)?;
        ctx.write_manifest(out)?;
    }
    Ok(Status::Holds)
}

fn random_points(dim: usize, n: usize, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

fn density(a: DensityArgs, ctx: &Run) -> CmdResult {
    let tol = tolerance(a.predicate.tol)?;
    let mode = pair_mode(&a.predicate)?;
    let dim = a.dim as usize;
    if a.n_list.contains(&0) {
        return Err(CliError::Usage("--n-list entries must be positive".into()));
    }
    if let Some(m) = a.km_simplex {
        if 2 * m != dim + 1 {
            return Err(CliError::Usage(format!(
                "--km-simplex {m} embeds in dimension {}, not --dim {dim}",
                (2 * m).saturating_sub(1)
            )));
        }
        if a.km_sizes.is_empty() || a.km_sizes.contains(&0) {
            return Err(CliError::Usage(
                "--km-simplex needs positive --km-sizes".into(),
            ));
        }
    }

    let mut csv = String::from("source,n,samples,max_edges,turan_fit,graph_edges\n");
    if a.samples > 0 {
        for &n in &a.n_list {
            let counts = (0..a.samples)
                .into_par_iter()
                .map(|s| {
                    let stream = ((n as u64) << 32) | s as u64;
                    let p = PointSet::new(dim, random_points(dim, n, a.seed, stream))?;
                    Ok(build_graph(&p, mode, &tol)?.edge_count())
                })
                .collect::<Result<Vec<usize>, Error>>()?;
            let max = counts.into_iter().max().unwrap_or(0);
            let fit = turan_fit(n as u64, max as u64)?;
            csv.push_str(&format!(
                "random,{n},{},{max},{},{max}\n",
                a.samples,
                fmt_f64(fit)
            ));
        }
    }
    if let Some(m) = a.km_simplex {
        let simplex = regular_simplex(m)?;
        for &r in &a.km_sizes {
            let (config, _) = km_embedding(&simplex, &EmbeddingParams::new(r), &tol)?;
            let n = config.points().len();
            let cross = (m * (m - 1) / 2 * r * r) as u64;
            let strict = build_graph(config.points(), PairMode::Strict, &tol)?;
            let fit = turan_fit(n as u64, cross)?;
            csv.push_str(&format!(
                "km_simplex_{m},{n},0,{cross},{},{}\n",
                fmt_f64(fit),
                strict.edge_count()
            ));
        }
    }
    match &a.out {
        Some(out) => {
            write_atomic(out, csv.as_bytes())?;
            ctx.write_manifest(out)?;
        }
        None => print!("{csv}"),
    }
    Ok(Status::Holds)
}

fn run_search(a: SearchArgs, ctx: &Run) -> CmdResult {
    let cfg = SearchConfig {
        restarts: a.restarts,
        steps_per_restart: a.steps,
        init_temperature: a.temperature,
        cooling: a.cooling,
        seed: a.seed,
        delta: a.delta,
        init: match a.init {
            InitArg::UnitCube => InitKind::UnitCube,
            InitArg::CubeVertices => InitKind::CubeVertices,
        },
        ..SearchConfig::new(a.dim, a.target)
    };
    let result = search(&cfg)?;
    println!(
        "dim {}  target {}  best_margin {}  verified {}",
        a.dim, a.target, result.best_margin, result.verified
    );
    if result.verified && a.delta == 0.0 {
        let record = AcuteRecord::new(&result.best_points, a.seed)?;
        append_record(&a.results, &record)?;
        println!("appended record to {}", a.results.display());
    }
    if let Some(out) = &a.out {
        write_json(out, &result)?;
        ctx.write_manifest(out)?;
    }
    Ok(if result.verified {
        Status::Holds
    } else {
        Status::Fails
    })
}

fn probe(a: ProbeArgs, ctx: &Run) -> CmdResult {
    let budget = SearchBudget {
        restarts: a.restarts,
        steps: a.steps,
        seed: a.seed,
    };
    let report = probe_relaxed_bound(a.dim, a.delta, &budget)?;
    println!(
        "dim {}  delta {}  size {}  best_max_angle {}  limit {}",
        report.dim, report.delta, report.size, report.best_max_angle, report.angle_limit
    );
    println!("{}", report.verdict);
    if let Some(out) = &a.out {
        write_json(out, &report)?;
        ctx.write_manifest(out)?;
    }
    Ok(Status::Holds)
}

fn replay(a: ReplayArgs) -> CmdResult {
    let text = std::fs::read_to_string(&a.manifest)?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad manifest: {e}")))?;
    for (path, digest) in &m.input_digests {
        let now = file_digest(Path::new(path))?;
        if &now != digest {
            return Err(CliError::Usage(format!(
                "input {path} changed since the recorded run"
            )));
        }
    }
    if m.tool_version != env!("CARGO_PKG_VERSION") {
        eprintln!(
            "warning: manifest written by version {}, running {}",
            m.tool_version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let cli =
        Cli::try_parse_from(std::iter::once("dnormal".to_string()).chain(m.args.iter().cloned()))
            .map_err(|e| CliError::Usage(format!("manifest arguments do not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage(
            "a manifest cannot replay another manifest".into(),
        ));
    }
    run(cli.command, &m.args)
}
