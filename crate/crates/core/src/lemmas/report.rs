use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// How a trial's pass flag may be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    /// Pass and fail are both meaningful.
    TwoSided,
    /// A pass certifies the property for the sample; a fail only flags it for inspection.
    SufficientOnly,
    /// Measurements only; no trial passes or fails.
    Observational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub statistic: f64,
    /// `None` for observational checks.
    pub pass: Option<bool>,
    #[serde(default)]
    pub extra: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub n: usize,
    pub p: f64,
    pub root_seed: u64,
    pub trials: usize,
    pub passes: usize,
    /// Largest per-trial statistic.
    pub observed_extreme: Option<f64>,
    pub threshold: Option<f64>,
    pub tolerance_c: Option<f64>,
    pub verdict: VerdictKind,
    pub seeds: Vec<u64>,
    pub records: Vec<TrialRecord>,
    #[serde(default)]
    pub summary: BTreeMap<String, f64>,
    #[serde(default)]
    pub notes: Vec<String>,
    /// What the naive recomputation compared, if it ran.
    pub audit: Option<String>,
}

impl LemmaReport {
    pub(crate) fn new(lemma_id: &str, n: usize, p: f64, root_seed: u64, verdict: VerdictKind) -> Self {
        Self {
            lemma_id: lemma_id.to_string(),
            n,
            p,
            root_seed,
            trials: 0,
            passes: 0,
            observed_extreme: None,
            threshold: None,
            tolerance_c: None,
            verdict,
            seeds: Vec::new(),
            records: Vec::new(),
            summary: BTreeMap::new(),
            notes: Vec::new(),
            audit: None,
        }
    }

    /// Adds trial records; the result does not depend on the order of calls.
    pub fn merge(&mut self, records: impl IntoIterator<Item = TrialRecord>) {
        self.records.extend(records);
        self.records.sort_by_key(|r| r.trial);
        self.trials = self.records.len();
        self.passes = self.records.iter().filter(|r| r.pass == Some(true)).count();
        self.seeds = self.records.iter().map(|r| r.seed).collect();
        self.observed_extreme = self.records.iter().map(|r| r.statistic).reduce(f64::max);
    }

    pub fn pass_rate(&self) -> Option<f64> {
        match self.verdict {
            VerdictKind::Observational => None,
            _ if self.trials == 0 => None,
            _ => Some(self.passes as f64 / self.trials as f64),
        }
    }

    /// Fraction of trials whose `extra[key]` is nonzero.
    pub fn frequency(&self, key: &str) -> Option<f64> {
        if self.records.is_empty() {
            return None;
        }
        let hits = self
            .records
            .iter()
            .filter(|r| r.extra.get(key).is_some_and(|&x| x != 0.0))
            .count();
        Some(hits as f64 / self.records.len() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per trial plus a `summary` row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "lemma_id",
            "row",
            "trial",
            "seed",
            "statistic",
            "threshold",
            "pass",
            "detail",
        ])?;
        let threshold = self.threshold.map(|t| t.to_string()).unwrap_or_default();
        for r in &self.records {
            let pass = r.pass.map(|b| b.to_string()).unwrap_or_default();
            w.write_record([
                self.lemma_id.as_str(),
                "trial",
                &r.trial.to_string(),
                &r.seed.to_string(),
                &r.statistic.to_string(),
                &threshold,
                &pass,
                &detail(&r.extra),
            ])?;
        }
        let rate = self.pass_rate().map(|x| x.to_string()).unwrap_or_default();
        let mut summary = self.summary.clone();
        summary.insert("passes".into(), self.passes as f64);
        summary.insert("trials".into(), self.trials as f64);
        w.write_record([
            self.lemma_id.as_str(),
            "summary",
            "",
            &self.root_seed.to_string(),
            &self.observed_extreme.map(|x| x.to_string()).unwrap_or_default(),
            &threshold,
            &rate,
            &detail(&summary),
        ])?;
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn detail(map: &BTreeMap<String, f64>) -> String {
    map.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

impl From<csv::Error> for crate::error::Error {
    fn from(e: csv::Error) -> Self {
        crate::error::Error::Io(std::io::Error::other(e.to_string()))
    }
}
