use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use schrom::coloring::exact::{find_strong_coloring, strong_chromatic_number_exact, strong_chromatic_number_from};
use schrom::coloring::{decompose_dense, verify_certificate, DenseConfig, DenseVariant};
use schrom::graph::{gen_gnp, lower_bound_partition, GnpConfig};
use schrom::io::{self, GraphFormat};
use schrom::lemmas::{self, LemmaId, LemmaParams};
use schrom::rng;
use schrom::transversal::{
    exhaustive_transversal, greedy_transversal, pinned_transversal, resampling_transversal_with_stats,
    sparse_transversal, verify_transversal, SparseConfig, Transversal, DEFAULT_DOMINATION_FRACTION,
};
use schrom::{Graph, VertexPartition};

use crate::meta::RunMetadata;
use crate::{
    Algo, Cli, CliError, ColorArgs, Command, ExactArgs, ExperimentArgs, FormatArg, GenArgs, LemmaArg, LemmaArgs,
    PartitionArgs, ReplayArgs, TransversalArgs, VariantArg,
};

/// Largest graph the exact partition checker is asked to settle.
const EXACT_FALLBACK_VERTICES: usize = schrom::coloring::exact::MAX_PARTITION_VERTICES;
/// Largest search space handed to the exhaustive transversal oracle.
const EXHAUSTIVE_LIMIT: f64 = 1e7;

type CliResult<T = ()> = Result<T, CliError>;

/// What a finished command reports into its metadata.
struct Run {
    command: &'static str,
    params: Value,
    budgets: Value,
    outcome: Result<Value, String>,
    outputs: Vec<PathBuf>,
    /// Output the metadata sidecar is attached to.
    primary: Option<PathBuf>,
}

pub fn run(cli: Cli, args: &[String]) -> CliResult {
    let start = Instant::now();
    let seed = cli.seed;
    let run = match cli.command {
        Command::Gen(a) => gen(a, seed)?,
        Command::Color(a) => color(a, seed)?,
        Command::Transversal(a) => transversal(a, seed)?,
        Command::SchromExact(a) => schrom_exact(a)?,
        Command::Lemmas(a) => lemmas(a, seed)?,
        Command::Experiment(a) => experiment(a, seed)?,
        Command::Replay(a) => return replay(a),
    };
    let (outcome, detail, failure) = match run.outcome {
        Ok(detail) => ("success".to_string(), detail, None),
        Err(msg) => ("failure".to_string(), json!({ "reason": msg }), Some(msg)),
    };
    if let Some(primary) = &run.primary {
        let meta = RunMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: run.command.to_string(),
            argv: canonical_argv(args, seed),
            params: run.params,
            root_seed: seed,
            budgets: run.budgets,
            outcome,
            detail,
            outputs: run.outputs,
            wall_time_ms: start.elapsed().as_millis(),
        };
        meta.write(primary)?;
    }
    match failure {
        Some(msg) => Err(CliError::Structured(msg)),
        None => Ok(()),
    }
}

/// Arguments with the resolved seed spelled out, so a replay does not depend on the environment.
fn canonical_argv(args: &[String], seed: u64) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len() + 2);
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--seed" {
            skip = true;
            continue;
        }
        if a.starts_with("--seed=") {
            continue;
        }
        out.push(a.clone());
    }
    out.push("--seed".into());
    out.push(seed.to_string());
    out
}

fn write(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    io::read_graph(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

// ------------------------------------------------------------------- gen

fn gen(a: GenArgs, seed: u64) -> CliResult<Run> {
    let cfg = GnpConfig::new(a.n, a.p, seed);
    let g = gen_gnp(&cfg)?;
    let format = match a.format {
        Some(FormatArg::EdgeList) => GraphFormat::EdgeList,
        Some(FormatArg::Json) => GraphFormat::Json,
        None => GraphFormat::from_path(&a.out),
    };
    write(&a.out, &io::write_graph(&g, format))?;
    println!(
        "wrote {} ({} vertices, {} edges)",
        a.out.display(),
        g.n(),
        g.edge_count()
    );
    Ok(Run {
        command: "gen",
        params: json!({ "n": a.n, "p": a.p, "format": format!("{format:?}") }),
        budgets: Value::Null,
        outcome: Ok(json!({ "edges": g.edge_count() })),
        outputs: vec![a.out.clone()],
        primary: Some(a.out),
    })
}

// ------------------------------------------------------------- partitions

/// Pads the graph to the partition's size and loads (or samples) the partition.
fn load_partition(g: Graph, a: &PartitionArgs, seed: u64) -> CliResult<(Graph, VertexPartition, bool)> {
    match (&a.partition, a.random_partition) {
        (Some(path), None) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let k = serde_json::from_str::<Value>(&text)
                .ok()
                .and_then(|v| v.get("k").and_then(Value::as_u64))
                .ok_or_else(|| CliError::Usage(format!("{}: missing part size \"k\"", path.display())))?;
            let g = g.pad_isolated(k as usize)?;
            let parts =
                io::parse_partition(&text, g.n()).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok((g, parts, false))
        }
        (None, Some(k)) => {
            let g = g.pad_isolated(k)?;
            let parts = VertexPartition::random(g.n(), k, seed)?;
            Ok((g, parts, true))
        }
        _ => Err(CliError::Usage(
            "give exactly one of --partition and --random-partition".into(),
        )),
    }
}

// ----------------------------------------------------------------- color

fn color(a: ColorArgs, seed: u64) -> CliResult<Run> {
    let cfg = DenseConfig {
        hall_retry_budget: a.hall_retry_budget,
        restart_budget: a.restart_budget,
        density: a.density,
        epsilon: a.epsilon,
        variant: match a.variant {
            VariantArg::Auto => DenseVariant::Auto,
            VariantArg::PinMaxDegree => DenseVariant::PinMaxDegree,
            VariantArg::Uniform => DenseVariant::Uniform,
        },
        ..DenseConfig::default()
    };
    let (g, parts, sampled) = load_partition(read_graph(&a.graph)?, &a.partition, seed)?;
    if g.n() == 0 {
        return Err(CliError::Usage("the graph has no vertices".into()));
    }
    let mut outputs = Vec::new();
    if sampled {
        let path = with_suffix(&a.out, ".partition.json");
        write(&path, &io::write_partition(&parts))?;
        outputs.push(path);
    }
    let (delta, _) = g.max_degree()?;
    let k = parts.k();
    let params = json!({
        "graph": a.graph,
        "partition": a.partition.partition,
        "random_partition": a.partition.random_partition,
        "config": cfg,
    });

    let mut budgets = Value::Null;
    let mut method = "decomposition";
    let mut certificate = None;
    let mut failure = None;
    if k > delta {
        let out = decompose_dense(&g, &parts, &cfg, seed)?;
        budgets = serde_json::to_value(&out.report).expect("report serializes");
        certificate = out.certificate;
        if certificate.is_none() {
            failure = out.report.failure.clone();
        }
    } else if g.n() > EXACT_FALLBACK_VERTICES {
        return Err(CliError::Usage(format!(
            "part size {k} does not exceed Δ = {delta}, and {} vertices is too many for exact search",
            g.n()
        )));
    }
    // Small instances are settled exactly, so a failure there means no coloring exists.
    if certificate.is_none() && g.n() <= EXACT_FALLBACK_VERTICES {
        method = "exact";
        certificate = find_strong_coloring(&g, &parts)?;
        if certificate.is_none() {
            failure = Some(format!(
                "no strong {k}-coloring of this partition exists (exhaustive search)"
            ));
        }
    }

    let outcome = match certificate {
        Some(cert) => {
            if !verify_certificate(&g, &parts, &cert) {
                return Err(CliError::Usage(
                    "internal error: certificate failed verification; nothing written".into(),
                ));
            }
            write(&a.out, &io::write_certificate(&cert))?;
            outputs.push(a.out.clone());
            println!(
                "wrote {} (k = {k}, {} parts, method {method})",
                a.out.display(),
                parts.r()
            );
            Ok(json!({ "method": method, "k": k, "parts": parts.r(), "delta": delta }))
        }
        None => Err(failure.unwrap_or_else(|| "budget exhausted".into())),
    };
    Ok(Run {
        command: "color",
        params,
        budgets,
        outcome,
        outputs,
        primary: Some(a.out),
    })
}

// ------------------------------------------------------------ transversal

fn parse_pins(pins: &[String]) -> CliResult<Vec<(usize, usize)>> {
    pins.iter()
        .map(|s| {
            let (p, v) = s
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("pin {s:?} is not PART:VERTEX")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad pin {s:?}")))
            };
            Ok((parse(p)?, parse(v)?))
        })
        .collect()
}

fn transversal(a: TransversalArgs, seed: u64) -> CliResult<Run> {
    let (g, parts, sampled) = load_partition(read_graph(&a.graph)?, &a.partition, seed)?;
    let pins = parse_pins(&a.pins)?;
    if !pins.is_empty() && a.algo == Algo::Sparse {
        return Err(CliError::Usage("pins are supported with --algo greedy or lll".into()));
    }
    let mut outputs = Vec::new();
    if sampled {
        let path = with_suffix(&a.out, ".partition.json");
        write(&path, &io::write_partition(&parts))?;
        outputs.push(path);
    }
    let p = parts.parts();
    let cap = a.cap.unwrap_or_else(|| (100 * g.edge_count() as u64).max(1));
    let params = json!({
        "graph": a.graph,
        "partition": a.partition.partition,
        "random_partition": a.partition.random_partition,
        "algo": format!("{:?}", a.algo).to_lowercase(),
        "pins": pins,
        "cap": cap,
        "epsilon": a.epsilon,
    });

    let mut budgets = Value::Null;
    let mut precondition = None;
    let mut aborted = None;
    let found: Option<Transversal> = if !pins.is_empty() {
        pinned_transversal(&g, p, &pins, cap, seed)?
    } else {
        match a.algo {
            Algo::Greedy => greedy_transversal(&g, p, DEFAULT_DOMINATION_FRACTION, seed)?,
            Algo::Lll => {
                let run = resampling_transversal_with_stats(&g, p, cap, seed)?;
                budgets = json!({ "resamples": run.resamples, "cap": cap });
                run.transversal
            }
            Algo::Sparse => {
                let cfg = SparseConfig {
                    epsilon: a.epsilon,
                    ..SparseConfig::default()
                };
                match sparse_transversal(&g, p, &cfg, seed) {
                    Ok(out) => {
                        budgets = serde_json::to_value(&out.stats).expect("stats serialize");
                        out.transversal
                    }
                    Err(schrom::Error::Precondition(msg)) => {
                        precondition = Some(msg);
                        None
                    }
                    // A structural bound the construction relies on failed on this sample.
                    Err(schrom::Error::Invariant(msg)) => {
                        aborted = Some(msg);
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    };

    let outcome = match found {
        Some(t) => {
            if !verify_transversal(&g, p, &t) {
                return Err(CliError::Usage(
                    "internal error: transversal failed verification; nothing written".into(),
                ));
            }
            write(&a.out, &io::write_transversal(&t))?;
            outputs.push(a.out.clone());
            println!("wrote {} ({} parts)", a.out.display(), t.len());
            Ok(json!({ "parts": t.len() }))
        }
        None => {
            let space: f64 = p.iter().map(|x| x.len() as f64).product();
            let exists =
                (pins.is_empty() && space <= EXHAUSTIVE_LIMIT).then(|| exhaustive_transversal(&g, p).is_some());
            match (exists, precondition) {
                (Some(false), _) => Err("no independent transversal exists (exhaustive search)".to_string()),
                (_, Some(msg)) => return Err(CliError::Usage(msg)),
                _ => Err(match aborted {
                    Some(msg) => format!("sparse construction aborted: {msg}"),
                    None => "no transversal found within the budget".to_string(),
                }),
            }
        }
    };
    Ok(Run {
        command: "transversal",
        params,
        budgets,
        outcome,
        outputs,
        primary: Some(a.out),
    })
}

// ------------------------------------------------------------ schrom-exact

fn schrom_exact(a: ExactArgs) -> CliResult<Run> {
    let g = read_graph(&a.graph)?;
    let result = match a.start {
        Some(start) => strong_chromatic_number_from(&g, a.guard, start)?,
        None => strong_chromatic_number_exact(&g, a.guard)?,
    };
    println!("{}", result.value);
    let mut outputs = Vec::new();
    if let Some(out) = &a.out {
        let mut witness = serde_json::to_value(&result).expect("result serializes");
        // The construction behind the Δ+1 lower bound, for comparison with the refutations.
        let (delta, _) = g.max_degree()?;
        if delta >= 1 && g.pad_isolated(delta)?.n() <= EXACT_FALLBACK_VERTICES {
            let padded = g.pad_isolated(delta)?;
            let lb = lower_bound_partition(&g, delta)?;
            witness["lower_bound_partition"] = json!({
                "k": delta,
                "parts": lb.parts(),
                "colorable": find_strong_coloring(&padded, &lb)?.is_some(),
            });
        }
        write(out, &(serde_json::to_string_pretty(&witness).expect("json") + "\n"))?;
        outputs.push(out.clone());
    }
    Ok(Run {
        command: "schrom-exact",
        params: json!({ "graph": a.graph, "guard": a.guard, "start": a.start }),
        budgets: json!({ "partitions_checked": result.partitions_checked }),
        outcome: Ok(json!({ "value": result.value, "start": result.start })),
        outputs,
        primary: a.out,
    })
}

// ----------------------------------------------------------------- lemmas

fn lemmas(a: LemmaArgs, seed: u64) -> CliResult<Run> {
    let ids: Vec<LemmaId> = match a.lemma {
        LemmaArg::All => LemmaId::ALL.to_vec(),
        LemmaArg::Codegree => vec![LemmaId::Codegree],
        LemmaArg::MaxdegreeWindow => vec![LemmaId::MaxdegreeWindow],
        LemmaArg::DegreeGap => vec![LemmaId::DegreeGap],
        LemmaArg::Domination => vec![LemmaId::Domination],
        LemmaArg::HallConfigs => vec![LemmaId::HallConfigs],
        LemmaArg::SparseSubsets => vec![LemmaId::SparseSubsets],
    };
    let params = LemmaParams {
        n: a.n,
        p: a.p,
        trials: a.trials,
        seed,
        c: a.c,
        alpha: a.alpha,
        big_c: a.big_c,
    };
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for id in ids {
        match lemmas::run_lemma(id, &params) {
            Ok(r) => reports.push(r),
            // Under `all`, a check whose sizes do not fit this (n, p) is skipped, not fatal.
            Err(schrom::Error::Config(msg)) if a.lemma == LemmaArg::All => {
                skipped.push(json!({ "lemma": id, "reason": msg }))
            }
            Err(e) => return Err(e.into()),
        }
    }
    if a.negative_control {
        reports.push(lemmas::check_sparse_subsets_negative_control(
            a.n, a.p, a.big_c, a.trials, seed,
        )?);
    }
    let mut csv = String::new();
    for (i, r) in reports.iter().enumerate() {
        let text = r.to_csv()?;
        // One header for the whole file.
        csv.push_str(if i == 0 {
            &text
        } else {
            text.split_once('\n').map_or("", |(_, rest)| rest)
        });
    }
    write(&a.out, &csv)?;
    let json_path = a.out.with_extension("json");
    write(
        &json_path,
        &(serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"),
    )?;
    for r in &reports {
        match r.pass_rate() {
            Some(rate) => println!(
                "{}: {}/{} passed ({:.1}%)",
                r.lemma_id,
                r.passes,
                r.trials,
                100.0 * rate
            ),
            None => println!("{}: {} trials recorded (observational)", r.lemma_id, r.trials),
        }
    }
    Ok(Run {
        command: "lemmas",
        params: serde_json::to_value(&params).expect("params serialize"),
        budgets: json!({ "skipped": skipped }),
        outcome: Ok(json!(reports
            .iter()
            .map(|r| json!({ "lemma": r.lemma_id, "passes": r.passes, "trials": r.trials }))
            .collect::<Vec<_>>())),
        outputs: vec![a.out.clone(), json_path],
        primary: Some(a.out),
    })
}

// ------------------------------------------------------------- experiment

#[derive(Serialize)]
struct ExperimentRow {
    n: usize,
    p: f64,
    rep: usize,
    seed: u64,
    delta: usize,
    k: usize,
    parts: usize,
    success: bool,
    verified: bool,
    method: &'static str,
    restarts: u32,
    hall_retries: u32,
    hall_violators: usize,
}

fn experiment_cell(n: usize, p: f64, rep: usize, seed: u64, hall_retry_budget: u32) -> schrom::Result<ExperimentRow> {
    let g0 = gen_gnp(&GnpConfig::new(n, p, seed))?;
    let delta = if n == 0 { 0 } else { g0.max_degree()?.0 };
    let k = delta + 1;
    let g = g0.pad_isolated(k)?;
    let parts = VertexPartition::random(g.n(), k, seed)?;
    let cfg = DenseConfig {
        hall_retry_budget,
        ..DenseConfig::default()
    };
    let out = decompose_dense(&g, &parts, &cfg, seed)?;
    let verified = out
        .certificate
        .as_ref()
        .is_some_and(|c| verify_certificate(&g, &parts, c));
    Ok(ExperimentRow {
        n,
        p,
        rep,
        seed,
        delta,
        k,
        parts: parts.r(),
        success: out.certificate.is_some(),
        verified,
        method: if out.report.complement_matching {
            "matching"
        } else {
            "pipeline"
        },
        restarts: out.report.restarts,
        hall_retries: out.report.hall_retries,
        hall_violators: out.report.hall_violators.len(),
    })
}

fn experiment(a: ExperimentArgs, seed: u64) -> CliResult<Run> {
    if a.n.contains(&0) {
        return Err(CliError::Usage("--n values must be positive".into()));
    }
    let cells: Vec<(usize, f64, usize)> =
        a.n.iter()
            .flat_map(|&n| a.p.iter().flat_map(move |&p| (0..a.reps).map(move |rep| (n, p, rep))))
            .collect();
    let root = rng::mix(seed, rng::streams::EXPERIMENT);
    let rows: Vec<ExperimentRow> = cells
        .par_iter()
        .enumerate()
        .map(|(i, &(n, p, rep))| experiment_cell(n, p, rep, rng::mix(root, i as u64), a.hall_retry_budget))
        .collect::<schrom::Result<_>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    write(&a.out, &String::from_utf8(bytes).expect("csv is utf-8"))?;
    let successes = rows.iter().filter(|r| r.success).count();
    println!("wrote {} ({successes}/{} succeeded)", a.out.display(), rows.len());
    Ok(Run {
        command: "experiment",
        params: json!({ "n": a.n, "p": a.p, "reps": a.reps, "hall_retry_budget": a.hall_retry_budget }),
        budgets: Value::Null,
        outcome: Ok(json!({ "rows": rows.len(), "successes": successes })),
        outputs: vec![a.out.clone()],
        primary: Some(a.out),
    })
}

// ----------------------------------------------------------------- replay

fn replay(a: ReplayArgs) -> CliResult {
    let meta = RunMetadata::read(&a.meta).map_err(CliError::Usage)?;
    let before: Vec<Option<Vec<u8>>> = meta.outputs.iter().map(|p| std::fs::read(p).ok()).collect();
    let exe = std::env::current_exe()?;
    let status = std::process::Command::new(exe).args(&meta.argv).status()?;
    let expected = if meta.outcome == "success" { Some(0) } else { Some(2) };
    if status.code() != expected {
        return Err(CliError::Structured(format!(
            "replay exited with {:?}, the recorded run with {:?}",
            status.code(),
            expected
        )));
    }
    let mut differing = Vec::new();
    for (path, old) in meta.outputs.iter().zip(before) {
        if std::fs::read(path).ok() != old {
            differing.push(path.display().to_string());
        }
    }
    if differing.is_empty() {
        println!("replay reproduced {} output file(s) byte for byte", meta.outputs.len());
        Ok(())
    } else {
        Err(CliError::Structured(format!("replay changed {}", differing.join(", "))))
    }
}
