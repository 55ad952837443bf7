//! Monte Carlo checks of structural properties of `G(n, p)` at finite `n`.
//!
//! Each check samples `trials` graphs from per-trial seeds derived from one
//! root seed, evaluates a statistic, and compares it against an explicit
//! threshold. Asymptotic `(1+o(1))` factors become windows of `c` standard
//! deviations. Trials run on the rayon pool; records are merged by trial
//! index, so reports depend only on the parameters and the seed.
//!
//! Trial 0 of every run is recomputed by a slower, independent routine and
//! a mismatch is an [`Error::Invariant`].

mod report;

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset;
use crate::error::{Error, Result};
use crate::graph::{gen_gnp, gnp_degrees, GnpConfig, Graph};
use crate::rng;

pub use report::{LemmaReport, TrialRecord, VerdictKind};

pub const DEFAULT_C: f64 = 3.0;
pub const DEFAULT_SPARSE_C: f64 = 20.0;
pub const DEFAULT_ALPHA: f64 = 1.0;

/// Seed of trial `t` under `root`.
pub fn trial_seed(root: u64, t: usize) -> u64 {
    rng::mix(rng::mix(root, rng::streams::TRIALS), t as u64)
}

fn ln(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < 1 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Runs `trial(t, seed)` for every trial in parallel; the closure returns an audit note on trial 0.
fn run_trials<F>(report: &mut LemmaReport, trials: usize, trial: F) -> Result<()>
where
    F: Fn(usize, u64) -> Result<(TrialRecord, Option<String>)> + Sync,
{
    let root = report.root_seed;
    let out: Vec<(TrialRecord, Option<String>)> = (0..trials)
        .into_par_iter()
        .map(|t| trial(t, trial_seed(root, t)))
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(out.len());
    for (record, audit) in out {
        if audit.is_some() {
            report.audit = audit;
        }
        records.push(record);
    }
    report.merge(records);
    Ok(())
}

fn record(trial: usize, seed: u64, statistic: f64, pass: Option<bool>) -> TrialRecord {
    TrialRecord {
        trial,
        seed,
        statistic,
        pass,
        extra: BTreeMap::new(),
    }
}

fn sorted_neighbors(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).collect()).collect()
}

fn merge_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

// ---------------------------------------------------------------- codegree

/// Codegree threshold and whether the sparse form `3 ln^{3/2} n` applies.
///
/// The sparse form is used when `np² < 3 ln^{3/2} n`; otherwise
/// `np² + c·sqrt(2·np²·ln n)`.
pub fn codegree_threshold(n: usize, p: f64, c: f64) -> (f64, bool) {
    let mean = n as f64 * p * p;
    let sparse = 3.0 * ln(n).powf(1.5);
    if mean < sparse {
        (sparse, true)
    } else {
        (mean + c * (2.0 * mean * ln(n)).sqrt(), false)
    }
}

pub fn check_codegree(n: usize, p: f64, trials: usize, c: f64, seed: u64) -> Result<LemmaReport> {
    check_trials(trials)?;
    GnpConfig::new(n, p, 0).validate()?;
    codegree_report(n, p, trials, c, seed, |s| gen_gnp(&GnpConfig::new(n, p, s)))
}

/// One trial on a given graph.
pub fn check_codegree_on(g: &Graph, p: f64, c: f64) -> Result<LemmaReport> {
    check_p(p)?;
    codegree_report(g.n(), p, 1, c, 0, |_| Ok(g.clone()))
}

fn codegree_report<S>(n: usize, p: f64, trials: usize, c: f64, seed: u64, sample: S) -> Result<LemmaReport>
where
    S: Fn(u64) -> Result<Graph> + Sync,
{
    let (threshold, sparse) = codegree_threshold(n, p, c);
    let mut report = LemmaReport::new("codegree", n, p, seed, VerdictKind::TwoSided);
    report.threshold = Some(threshold);
    report.tolerance_c = (!sparse).then_some(c);
    report.notes.push(if sparse {
        format!("sparse form: threshold 3 ln^1.5 n = {threshold:.3}")
    } else {
        format!("dense form: np^2 + c sqrt(2 np^2 ln n) = {threshold:.3}")
    });
    run_trials(&mut report, trials, |t, s| {
        let g = sample(s)?;
        let (max, pair) = match g.max_codegree_pair() {
            Some((m, u, v)) => (m, Some((u, v))),
            None => (0, None),
        };
        let mut rec = record(t, s, max as f64, Some(max as f64 <= threshold));
        if let Some((u, v)) = pair {
            rec.extra.insert("argmax_u".into(), u as f64);
            rec.extra.insert("argmax_v".into(), v as f64);
        }
        let audit = (t == 0).then(|| audit_codegree(&g, max, pair, s)).transpose()?;
        Ok((rec, audit))
    })?;
    Ok(report)
}

const FULL_AUDIT_LIMIT: usize = 2000;

fn audit_codegree(g: &Graph, max: usize, pair: Option<(usize, usize)>, seed: u64) -> Result<String> {
    let lists = sorted_neighbors(g);
    let n = g.n();
    if n <= FULL_AUDIT_LIMIT {
        let mut naive = 0;
        for u in 0..n {
            for v in u + 1..n {
                naive = naive.max(merge_count(&lists[u], &lists[v]));
            }
        }
        if naive != max {
            return Err(Error::Invariant(format!(
                "max codegree {max} but list intersection gives {naive}"
            )));
        }
        return Ok(format!(
            "all {} pairs recomputed by list intersection",
            n * n.saturating_sub(1) / 2
        ));
    }
    let (u, v) = pair.expect("n >= 2");
    if merge_count(&lists[u], &lists[v]) != max {
        return Err(Error::Invariant(format!(
            "argmax pair ({u}, {v}) does not recompute to {max}"
        )));
    }
    let mut rng = rng::stream(seed, rng::streams::TRIALS);
    const PAIRS: usize = 4096;
    for _ in 0..PAIRS {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let naive = merge_count(&lists[a], &lists[b]);
        if naive > max || naive != g.codegree(a, b)? {
            return Err(Error::Invariant(format!("codegree of ({a}, {b}) disagrees")));
        }
    }
    Ok(format!(
        "argmax pair and {PAIRS} random pairs recomputed by list intersection"
    ))
}

// ------------------------------------------------------------- max degree

/// `(np, np + c·sqrt(2·np(1−p)·ln n))`.
pub fn maxdegree_window(n: usize, p: f64, c: f64) -> (f64, f64) {
    let np = n as f64 * p;
    (np, np + c * (2.0 * np * (1.0 - p) * ln(n)).sqrt())
}

pub fn check_maxdegree_window(n: usize, p: f64, trials: usize, c: f64, seed: u64) -> Result<LemmaReport> {
    check_trials(trials)?;
    GnpConfig::new(n, p, 0).validate()?;
    let (lo, hi) = maxdegree_window(n, p, c);
    let literal = 1.01 * lo;
    let mut report = LemmaReport::new("maxdegree_window", n, p, seed, VerdictKind::TwoSided);
    report.threshold = Some(hi);
    report.tolerance_c = Some(c);
    report.summary.insert("window_low".into(), lo);
    report.summary.insert("literal_window_high".into(), literal);
    report.notes.push(
        "pass means np < Delta <= window high; literal_window records Delta <= 1.01np and is not asserted".into(),
    );
    run_trials(&mut report, trials, |t, s| {
        let cfg = GnpConfig::new(n, p, s);
        let degrees = gnp_degrees(&cfg)?;
        let delta = degrees.iter().copied().max().unwrap_or(0);
        let d = delta as f64;
        let mut rec = record(t, s, d, Some(lo < d && d <= hi));
        rec.extra
            .insert("literal_window".into(), f64::from(u8::from(lo < d && d <= literal)));
        let audit = (t == 0).then(|| audit_degrees(&cfg, &degrees)).transpose()?;
        Ok((rec, audit))
    })?;
    if let Some(freq) = report.frequency("literal_window") {
        report.summary.insert("literal_window_rate".into(), freq);
    }
    Ok(report)
}

const DENSE_AUDIT_LIMIT: usize = 20_000;

/// Recounts degrees independently of the streaming accumulator.
fn audit_degrees(cfg: &GnpConfig, degrees: &[usize]) -> Result<String> {
    let n = cfg.n;
    if n <= DENSE_AUDIT_LIMIT {
        let g = gen_gnp(cfg)?;
        let naive: Vec<usize> = (0..n).map(|v| g.neighbors(v).count()).collect();
        if naive != degrees {
            return Err(Error::Invariant("streamed degrees differ from the built graph".into()));
        }
        return Ok(format!("all {n} degrees recounted from adjacency rows"));
    }
    // Too large to build: recount a sample of vertices, including every maximum, in a second pass.
    let delta = degrees.iter().copied().max().unwrap_or(0);
    let mut rng = rng::stream(cfg.seed, rng::streams::TRIALS);
    let mut watch: HashMap<usize, usize> = (0..n).filter(|&v| degrees[v] == delta).map(|v| (v, 0)).collect();
    for _ in 0..64 {
        watch.insert(rng.gen_range(0..n), 0);
    }
    for (u, v) in cfg.edges() {
        if let Some(c) = watch.get_mut(&u) {
            *c += 1;
        }
        if let Some(c) = watch.get_mut(&v) {
            *c += 1;
        }
    }
    if let Some((&v, _)) = watch.iter().find(|(&v, &c)| c != degrees[v]) {
        return Err(Error::Invariant(format!("degree of {v} does not recount")));
    }
    Ok(format!(
        "{} degrees (all maxima and random vertices) recounted in a second pass",
        watch.len()
    ))
}

// ------------------------------------------------------------- degree gap

/// Uniqueness of the maximum degree and the gap to the runner-up, from a full sort.
fn sorted_gap(degrees: &[usize]) -> (bool, usize) {
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    match d.as_slice() {
        [] => (false, 0),
        [_] => (true, 0),
        [a, b, ..] if a > b => (true, a - b),
        _ => (false, 0),
    }
}

pub fn check_degree_gap_uniqueness(n: usize, p: f64, trials: usize, seed: u64) -> Result<LemmaReport> {
    check_trials(trials)?;
    GnpConfig::new(n, p, 0).validate()?;
    degree_gap_report(n, p, trials, seed, |s| {
        let cfg = GnpConfig::new(n, p, s);
        let degrees = gnp_degrees(&cfg)?;
        Ok((degrees, Some(cfg)))
    })
}

pub fn check_degree_gap_on(g: &Graph, p: f64) -> Result<LemmaReport> {
    check_p(p)?;
    degree_gap_report(g.n(), p, 1, 0, |_| Ok((g.degrees(), None)))
}

fn degree_gap_report<S>(n: usize, p: f64, trials: usize, seed: u64, sample: S) -> Result<LemmaReport>
where
    S: Fn(u64) -> Result<(Vec<usize>, Option<GnpConfig>)> + Sync,
{
    let target = (n as f64 * p).sqrt() / ln(n);
    let mut report = LemmaReport::new("degree_gap", n, p, seed, VerdictKind::Observational);
    report.threshold = Some(target);
    report
        .notes
        .push("observational: gap is compared with sqrt(np)/ln n but not asserted".into());
    run_trials(&mut report, trials, |t, s| {
        let (degrees, cfg) = sample(s)?;
        if degrees.is_empty() {
            return Err(Error::Domain("degree gap of the empty graph".into()));
        }
        let gap = crate::graph::degree_gap_of(&degrees);
        let delta = degrees.iter().copied().max().unwrap_or(0);
        let unique = degrees.iter().filter(|&&d| d == delta).count() == 1;
        let mut rec = record(t, s, gap as f64, None);
        rec.extra.insert("delta".into(), delta as f64);
        rec.extra.insert("unique".into(), f64::from(u8::from(unique)));
        rec.extra
            .insert("gap_at_least_target".into(), f64::from(u8::from(gap as f64 >= target)));
        let audit = if t == 0 {
            if sorted_gap(&degrees) != (unique, gap) {
                return Err(Error::Invariant("gap disagrees with the full-sort oracle".into()));
            }
            let mut note = "uniqueness and gap recomputed by full sort".to_string();
            if let Some(cfg) = cfg {
                note = format!("{note}; {}", audit_degrees(&cfg, &degrees)?);
            }
            Some(note)
        } else {
            None
        };
        Ok((rec, audit))
    })?;
    for key in ["unique", "gap_at_least_target"] {
        let freq = report.frequency(key).unwrap_or(0.0);
        report.summary.insert(format!("{key}_rate"), freq);
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &report.records {
        *histogram.entry(r.statistic as usize).or_default() += 1;
    }
    for (gap, count) in histogram {
        report.summary.insert(format!("gap_hist_{gap}"), count as f64);
    }
    Ok(report)
}

// ------------------------------------------------------------- domination

/// Set sizes of one domination trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationSizes {
    pub u: usize,
    pub sets: usize,
    pub set_size: usize,
    /// Undominated vertices of `U` tolerated by "almost dominates".
    pub allowance: f64,
}

impl DominationSizes {
    pub fn new(n: usize, p: f64, alpha: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Config(format!("domination check needs p in (0, 1], got {p}")));
        }
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        let anp = alpha * n as f64 * p;
        let sizes = Self {
            u: anp.ceil() as usize,
            sets: (50.0 * ln(n)).ceil() as usize,
            set_size: (1.0 / p).ceil() as usize,
            allowance: anp / 50.0,
        };
        if sizes.u + sizes.sets * sizes.set_size > n {
            return Err(Error::Config(format!(
                "infeasible sizes: |U| = {} plus {} sets of size {} exceed n = {n}",
                sizes.u, sizes.sets, sizes.set_size
            )));
        }
        Ok(sizes)
    }
}

pub fn check_domination(n: usize, p: f64, alpha: f64, trials: usize, seed: u64) -> Result<LemmaReport> {
    check_trials(trials)?;
    GnpConfig::new(n, p, 0).validate()?;
    domination_report(n, p, alpha, trials, seed, |s| gen_gnp(&GnpConfig::new(n, p, s)))
}

pub fn check_domination_on(g: &Graph, p: f64, alpha: f64, seed: u64) -> Result<LemmaReport> {
    domination_report(g.n(), p, alpha, 1, seed, |_| Ok(g.clone()))
}

fn domination_report<S>(n: usize, p: f64, alpha: f64, trials: usize, seed: u64, sample: S) -> Result<LemmaReport>
where
    S: Fn(u64) -> Result<Graph> + Sync,
{
    let sizes = DominationSizes::new(n, p, alpha)?;
    let mut report = LemmaReport::new("domination", n, p, seed, VerdictKind::TwoSided);
    report.threshold = Some(sizes.allowance);
    report.summary.insert("alpha".into(), alpha);
    report.summary.insert("u_size".into(), sizes.u as f64);
    report.summary.insert("sets".into(), sizes.sets as f64);
    report.summary.insert("set_size".into(), sizes.set_size as f64);
    report
        .summary
        .insert("reference_bound".into(), 3f64.powf(-alpha * n as f64 * p / 50.0));
    report
        .notes
        .push("pass means not every T_i almost dominates U; statistic is the fraction of T_i that do".into());
    run_trials(&mut report, trials, |t, s| {
        let g = sample(s)?;
        let mut rng = rng::stream(s, rng::streams::TRIALS);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let (u, rest) = order.split_at(sizes.u);
        let sets: Vec<&[usize]> = rest.chunks(sizes.set_size).take(sizes.sets).collect();
        let u_mask = g.mask(u);
        let undominated: Vec<usize> = sets.iter().map(|set| undominated_count(&g, &u_mask, set)).collect();
        let dominating = undominated.iter().filter(|&&x| x as f64 <= sizes.allowance).count();
        let mut rec = record(
            t,
            s,
            dominating as f64 / sizes.sets as f64,
            Some(dominating < sizes.sets),
        );
        rec.extra.insert("dominating_sets".into(), dominating as f64);
        rec.extra.insert(
            "mean_undominated".into(),
            undominated.iter().sum::<usize>() as f64 / sizes.sets as f64,
        );
        let audit = if t == 0 {
            for (set, &fast) in sets.iter().zip(&undominated) {
                let naive = u.iter().filter(|&&x| !set.iter().any(|&y| g.has_edge(x, y))).count();
                if naive != fast {
                    return Err(Error::Invariant(
                        "undominated count disagrees with pairwise recount".into(),
                    ));
                }
            }
            Some(format!("undominated counts of {} sets recomputed pairwise", sets.len()))
        } else {
            None
        };
        Ok((rec, audit))
    })?;
    let total: f64 = report.records.iter().map(|r| r.extra["dominating_sets"]).sum();
    report.summary.insert(
        "dominating_frequency".into(),
        total / (sizes.sets * report.trials) as f64,
    );
    Ok(report)
}

fn undominated_count(g: &Graph, u_mask: &[u64], set: &[usize]) -> usize {
    let mut covered = vec![0u64; g.words_per_row()];
    for &v in set {
        for (c, r) in covered.iter_mut().zip(g.row(v)) {
            *c |= r;
        }
    }
    bitset::and_not_count(u_mask, u_mask, &covered)
}

// ------------------------------------------------------------------ Hall

/// One `(s, t)` point of the Hall-configuration grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HallPoint {
    pub s: usize,
    pub t: i64,
    /// Why the point is not evaluated, if it is not.
    pub skipped: Option<String>,
    /// Whether `t` lies inside the range the property is stated for.
    pub in_range: bool,
    /// Natural log of the union-bound reference `n^{s+2t/p}(7/8)^{(s−t)t}`.
    pub log_bound: f64,
}

impl HallPoint {
    pub fn key(&self) -> String {
        format!("s{}_t{}", self.s, self.t)
    }
}

/// Grid of `s ∈ {np/2, np, 2np}` and `t` at both ends of its range.
pub fn hall_grid(n: usize, p: f64) -> Result<Vec<HallPoint>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Config(format!(
            "Hall grid needs p in (0, 1), got {p}; the ranges collapse"
        )));
    }
    let np = n as f64 * p;
    let set_size = (1.0 / p).ceil();
    let t_lo = (40.0 * ln(n)).ceil() as i64;
    let mut s_values = vec![
        (np / 2.0).ceil() as usize,
        np.round() as usize,
        (2.0 * np).floor() as usize,
    ];
    s_values.dedup();
    let mut grid = Vec::new();
    for s in s_values {
        let t_hi = (s as f64 - 40.0 * set_size * ln(n)).floor() as i64;
        let mut ts = vec![t_lo, t_hi];
        ts.dedup();
        for t in ts {
            let skipped = if s == 0 {
                Some("s = 0".to_string())
            } else if t <= 0 {
                Some(format!("t = {t} <= 0"))
            } else if t as usize >= s {
                Some(format!("t = {t} leaves no vertices of U to check"))
            } else if s + t as usize * set_size as usize > n {
                Some(format!("U and {t} sets of size {set_size} do not fit in n = {n}"))
            } else {
                None
            };
            let tf = t as f64;
            let log_bound = (s as f64 + 2.0 * tf / p) * ln(n) + (s as f64 - tf) * tf * (7.0f64 / 8.0).ln();
            grid.push(HallPoint {
                s,
                t,
                skipped,
                in_range: t_lo <= t && t <= t_hi,
                log_bound,
            });
        }
    }
    if grid.iter().all(|pt| pt.skipped.is_some()) {
        return Err(Error::Config(format!("no evaluable (s, t) point at n = {n}, p = {p}")));
    }
    Ok(grid)
}

pub fn check_hall_configs(n: usize, p: f64, trials: usize, seed: u64) -> Result<LemmaReport> {
    check_trials(trials)?;
    GnpConfig::new(n, p, 0).validate()?;
    let grid = hall_grid(n, p)?;
    let set_size = (1.0 / p).ceil() as usize;
    let mut report = LemmaReport::new("hall_configs", n, p, seed, VerdictKind::TwoSided);
    for pt in &grid {
        match &pt.skipped {
            Some(reason) => report.notes.push(format!("{} skipped: {reason}", pt.key())),
            None => {
                report.summary.insert(format!("log_bound_{}", pt.key()), pt.log_bound);
                if !pt.in_range {
                    report
                        .notes
                        .push(format!("{} lies outside the stated range at this n", pt.key()));
                }
            }
        }
    }
    report.notes.push(
        "pass means no evaluated point has at least s - t vertices of U adjacent to every T_i; \
         statistic is the largest such count divided by s - t"
            .into(),
    );
    let live: Vec<&HallPoint> = grid.iter().filter(|pt| pt.skipped.is_none()).collect();
    run_trials(&mut report, trials, |t, s| {
        let g = gen_gnp(&GnpConfig::new(n, p, s))?;
        let mut rng = rng::stream(s, rng::streams::TRIALS);
        let mut rec = record(t, s, 0.0, Some(true));
        let mut audit = None;
        for pt in &live {
            let (size, tt) = (pt.s, pt.t as usize);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let (u, rest) = order.split_at(size);
            let sets: Vec<&[usize]> = rest.chunks(set_size).take(tt).collect();
            let mut all = g.mask(u);
            for set in &sets {
                let mut covered = vec![0u64; g.words_per_row()];
                for &v in *set {
                    for (c, r) in covered.iter_mut().zip(g.row(v)) {
                        *c |= r;
                    }
                }
                for (a, c) in all.iter_mut().zip(&covered) {
                    *a &= c;
                }
            }
            let count = bitset::ones(&all).count();
            if t == 0 && audit.is_none() {
                let naive = u
                    .iter()
                    .filter(|&&x| sets.iter().all(|set| set.iter().any(|&y| g.has_edge(x, y))))
                    .count();
                if naive != count {
                    return Err(Error::Invariant("Hall count disagrees with pairwise recount".into()));
                }
                audit = Some(format!("count at {} recomputed pairwise", pt.key()));
            }
            let ok = count < size - tt;
            rec.extra.insert(format!("count_{}", pt.key()), count as f64);
            rec.extra.insert(format!("pass_{}", pt.key()), f64::from(u8::from(ok)));
            rec.statistic = rec.statistic.max(count as f64 / (size - tt) as f64);
            if !ok {
                rec.pass = Some(false);
            }
        }
        Ok((rec, audit))
    })?;
    for pt in &live {
        let key = format!("pass_{}", pt.key());
        let rate = report.frequency(&key).unwrap_or(0.0);
        report.summary.insert(format!("pass_rate_{}", pt.key()), rate);
    }
    Ok(report)
}

// --------------------------------------------------------- sparse subsets

/// `⌈3C ln² n⌉`: minimum degree of the core any offending subset would sit in.
pub fn sparse_core_threshold(n: usize, big_c: f64) -> usize {
    (3.0 * big_c * ln(n).powi(2)).ceil() as usize
}

/// `C p⁻¹ ln² n`: largest subset size the property speaks about.
pub fn sparse_size_bound(n: usize, p: f64, big_c: f64) -> f64 {
    big_c / p * ln(n).powi(2)
}

/// `⌈6C ln² n⌉ + 2`, capped at `n`.
pub fn negative_control_clique_size(n: usize, big_c: f64) -> usize {
    ((6.0 * big_c * ln(n).powi(2)).ceil() as usize + 2).min(n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSubsetsOptions {
    /// Add up to `8 ln² n` extra neighbors per vertex before checking.
    pub augment: bool,
    /// Plant a clique on vertices `0..m`.
    pub inject_clique: Option<usize>,
}

impl Default for SparseSubsetsOptions {
    fn default() -> Self {
        Self {
            augment: true,
            inject_clique: None,
        }
    }
}

pub fn check_sparse_subsets(n: usize, p: f64, big_c: f64, trials: usize, seed: u64) -> Result<LemmaReport> {
    check_sparse_subsets_with(n, p, big_c, trials, seed, &SparseSubsetsOptions::default())
}

/// The same check with a clique of [`negative_control_clique_size`] planted in every sample.
pub fn check_sparse_subsets_negative_control(
    n: usize,
    p: f64,
    big_c: f64,
    trials: usize,
    seed: u64,
) -> Result<LemmaReport> {
    let opts = SparseSubsetsOptions {
        augment: true,
        inject_clique: Some(negative_control_clique_size(n, big_c)),
    };
    let mut report = check_sparse_subsets_with(n, p, big_c, trials, seed, &opts)?;
    report.lemma_id = "sparse_subsets_negative_control".into();
    Ok(report)
}

pub fn check_sparse_subsets_with(
    n: usize,
    p: f64,
    big_c: f64,
    trials: usize,
    seed: u64,
    opts: &SparseSubsetsOptions,
) -> Result<LemmaReport> {
    check_trials(trials)?;
    GnpConfig::new(n, p, 0).validate()?;
    sparse_subsets_report(n, p, big_c, trials, seed, opts, |s| gen_gnp(&GnpConfig::new(n, p, s)))
}

pub fn check_sparse_subsets_on(g: &Graph, p: f64, big_c: f64) -> Result<LemmaReport> {
    check_p(p)?;
    let opts = SparseSubsetsOptions {
        augment: false,
        inject_clique: None,
    };
    sparse_subsets_report(g.n(), p, big_c, 1, 0, &opts, |_| Ok(g.clone()))
}

fn sparse_subsets_report<S>(
    n: usize,
    p: f64,
    big_c: f64,
    trials: usize,
    seed: u64,
    opts: &SparseSubsetsOptions,
    sample: S,
) -> Result<LemmaReport>
where
    S: Fn(u64) -> Result<Graph> + Sync,
{
    if big_c.is_nan() || big_c < 20.0 {
        return Err(Error::Config(format!("C must be at least 20, got {big_c}")));
    }
    if let Some(m) = opts.inject_clique {
        if m > n {
            return Err(Error::Config(format!("clique of {m} vertices does not fit in n = {n}")));
        }
    }
    let threshold = sparse_core_threshold(n, big_c);
    let size_bound = sparse_size_bound(n, p, big_c);
    let rounds = (8.0 * ln(n).powi(2)).floor() as usize;
    let mut report = LemmaReport::new("sparse_subsets", n, p, seed, VerdictKind::SufficientOnly);
    report.threshold = Some(threshold as f64);
    report.summary.insert("big_c".into(), big_c);
    report.summary.insert("size_bound".into(), size_bound);
    report
        .summary
        .insert("augment_rounds".into(), if opts.augment { rounds as f64 } else { 0.0 });
    if let Some(m) = opts.inject_clique {
        report.summary.insert("clique_size".into(), m as f64);
        if m < threshold + 1 {
            report
                .notes
                .push(format!("clique of {m} has degree below the core threshold {threshold}"));
        }
    }
    report.notes.push(format!(
        "pass means the {threshold}-core is empty or larger than {size_bound:.1}; \
         a pass certifies the sample, a fail only flags it"
    ));
    run_trials(&mut report, trials, |t, s| {
        let mut g = sample(s)?;
        let mut added = 0;
        if opts.augment {
            added = augment(&mut g, rounds, s);
        }
        if let Some(m) = opts.inject_clique {
            for u in 0..m {
                for v in u + 1..m {
                    g.set_edge(u, v);
                }
            }
        }
        let core = k_core(&g, threshold);
        let size = core.len();
        let pass = size == 0 || size as f64 > size_bound;
        let mut rec = record(t, s, size as f64, Some(pass));
        rec.extra.insert("added_edges".into(), added as f64);
        rec.extra
            .insert("max_degree".into(), g.degrees().into_iter().max().unwrap_or(0) as f64);
        let audit = if t == 0 {
            let naive = k_core_naive(&g, threshold);
            if naive != core {
                return Err(Error::Invariant("core differs from batch peeling".into()));
            }
            Some(format!("{threshold}-core recomputed by batch peeling"))
        } else {
            None
        };
        Ok((rec, audit))
    })?;
    Ok(report)
}

/// `rounds` random perfect matchings; each vertex gains at most `rounds` neighbors.
fn augment(g: &mut Graph, rounds: usize, seed: u64) -> usize {
    let mut rng = rng::stream(seed, rng::streams::TRIALS);
    let mut order: Vec<usize> = (0..g.n()).collect();
    let mut added = 0;
    for _ in 0..rounds {
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            if !g.has_edge(pair[0], pair[1]) {
                g.set_edge(pair[0], pair[1]);
                added += 1;
            }
        }
    }
    added
}

/// Vertices of the `k`-core, ascending, by one-at-a-time peeling.
pub fn k_core(g: &Graph, k: usize) -> Vec<usize> {
    let n = g.n();
    let mut degree = g.degrees();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    for &v in &stack {
        removed[v] = true;
    }
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
                if degree[u] < k {
                    removed[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

/// Removes every low-degree vertex at once and repeats until stable.
fn k_core_naive(g: &Graph, k: usize) -> Vec<usize> {
    let mut alive: Vec<usize> = (0..g.n()).collect();
    loop {
        let mask = g.mask(&alive);
        let keep: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&v| g.degree_into(v, &mask) >= k)
            .collect();
        if keep.len() == alive.len() {
            return alive;
        }
        alive = keep;
    }
}

// --------------------------------------------------------------- dispatch

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    Codegree,
    MaxdegreeWindow,
    DegreeGap,
    Domination,
    HallConfigs,
    SparseSubsets,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::Codegree,
        LemmaId::MaxdegreeWindow,
        LemmaId::DegreeGap,
        LemmaId::Domination,
        LemmaId::HallConfigs,
        LemmaId::SparseSubsets,
    ];
}

/// Parameters shared by every check; each check reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaParams {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub c: f64,
    pub alpha: f64,
    pub big_c: f64,
}

pub fn run_lemma(id: LemmaId, params: &LemmaParams) -> Result<LemmaReport> {
    let LemmaParams {
        n,
        p,
        trials,
        seed,
        c,
        alpha,
        big_c,
    } = *params;
    match id {
        LemmaId::Codegree => check_codegree(n, p, trials, c, seed),
        LemmaId::MaxdegreeWindow => check_maxdegree_window(n, p, trials, c, seed),
        LemmaId::DegreeGap => check_degree_gap_uniqueness(n, p, trials, seed),
        LemmaId::Domination => check_domination(n, p, alpha, trials, seed),
        LemmaId::HallConfigs => check_hall_configs(n, p, trials, seed),
        LemmaId::SparseSubsets => check_sparse_subsets(n, p, big_c, trials, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codegree_p_zero_all_pass() {
        let r = check_codegree(300, 0.0, 5, 3.0, 1).unwrap();
        assert_eq!((r.passes, r.trials), (5, 5));
        assert_eq!(r.observed_extreme, Some(0.0));
        assert!(r.audit.is_some());
    }

    #[test]
    fn codegree_sparse_branch_threshold() {
        let (t, sparse) = codegree_threshold(2000, 0.005, 3.0);
        assert!(sparse);
        // 3·ln(2000)^1.5
        let oracle = 3.0 * 2000f64.ln() * 2000f64.ln().sqrt();
        assert!((t - oracle).abs() < 1e-9);
        assert!((t - 62.9).abs() < 0.05);
    }

    #[test]
    fn maxdegree_p_one() {
        let r = check_maxdegree_window(50, 1.0, 2, 3.0, 0).unwrap();
        assert!(r.records.iter().all(|x| x.statistic == 49.0));
        assert_eq!(r.summary["literal_window_rate"], 0.0);
    }

    #[test]
    fn degree_gap_star_and_complete() {
        let r = check_degree_gap_on(&Graph::star(9), 0.5).unwrap();
        assert_eq!(r.records[0].statistic, 8.0);
        assert_eq!(r.records[0].extra["unique"], 1.0);
        let r = check_degree_gap_uniqueness(40, 1.0, 3, 2).unwrap();
        assert_eq!(r.summary["unique_rate"], 0.0);
        assert_eq!(r.pass_rate(), None);
    }

    #[test]
    fn domination_guards_and_edgeless() {
        assert!(matches!(check_domination(100, 0.99, 1.0, 1, 0), Err(Error::Config(_))));
        assert!(matches!(check_domination(100, 0.0, 1.0, 1, 0), Err(Error::Config(_))));
        assert!(matches!(check_domination(100, 0.5, 0.0, 1, 0), Err(Error::Config(_))));
        let r = check_domination_on(&Graph::empty(5000), 0.1, 1.0, 3).unwrap();
        assert_eq!(r.passes, 1);
        assert_eq!(r.records[0].extra["dominating_sets"], 0.0);
    }

    #[test]
    fn hall_guards() {
        assert!(matches!(check_hall_configs(100, 1.0, 1, 0), Err(Error::Config(_))));
        let grid = hall_grid(10_000, 0.1).unwrap();
        assert!(grid
            .iter()
            .any(|pt| pt.skipped.as_deref().is_some_and(|r| r.contains("<= 0"))));
        assert!(grid.iter().any(|pt| pt.skipped.is_none()));
    }

    #[test]
    fn sparse_subsets_edgeless_and_clique() {
        let r = check_sparse_subsets_on(&Graph::empty(500), 0.02, 20.0).unwrap();
        assert_eq!(r.passes, 1);
        let n = 400;
        let m = negative_control_clique_size(n, 20.0);
        assert_eq!(m, n);
        let r = check_sparse_subsets_on(&Graph::complete(n), 0.02, 20.0);
        // Threshold exceeds n - 1 at this size, so the core is empty.
        assert!(sparse_core_threshold(n, 20.0) > n - 1);
        assert_eq!(r.unwrap().passes, 1);
        assert!(matches!(
            check_sparse_subsets(100, 0.1, 10.0, 1, 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn k_core_matches_naive() {
        let g = gen_gnp(&GnpConfig::new(300, 0.1, 9)).unwrap();
        for k in [0, 5, 20, 30, 40] {
            assert_eq!(k_core(&g, k), k_core_naive(&g, k));
        }
    }

    #[test]
    fn report_round_trips_and_is_deterministic() {
        let a = check_codegree(120, 0.3, 4, 3.0, 11).unwrap();
        let b = check_codegree(120, 0.3, 4, 3.0, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(LemmaReport::from_json(&a.to_json().unwrap()).unwrap(), a);
        let csv = a.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + 4 + 1);
    }
}
