//! One end-to-end run: preprocess, apply a batch, answer queries, report.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::format::format_results;
use crate::fully_dynamic::FullyDynamic;
use crate::graph::{Graph, VertexId};
use crate::incremental::IncrementalIndex;
use crate::oracle::{BruteForceReference, OracleKind};
use crate::partition::{StatePartition, UpdateBatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Incremental,
    FullyDynamic,
    BruteForce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Incremental => "incremental",
            Algorithm::FullyDynamic => "fully-dynamic",
            Algorithm::BruteForce => "bruteforce",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inc" | "incremental" => Ok(Algorithm::Incremental),
            "fd" | "fully-dynamic" => Ok(Algorithm::FullyDynamic),
            "bf" | "bruteforce" => Ok(Algorithm::BruteForce),
            other => Err(Error::Config(format!("unknown algorithm '{other}' (expected inc, fd or bf)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub preprocess: Duration,
    pub update: Duration,
    pub queries: Duration,
}

/// Counters and answers of one run.
///
/// Query costs are bit probes for the incremental index and oracle calls
/// for the fully dynamic structure; the brute-force path reports zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub oracle: Option<OracleKind>,
    pub n: usize,
    pub m: usize,
    pub n_on: usize,
    pub n_off: usize,
    pub deactivated: usize,
    pub activated: usize,
    pub preprocess_cost: u64,
    pub oracles_built: usize,
    pub update_pair_probes: u64,
    pub update_delete_calls: u64,
    pub update_oracle_cost: u64,
    pub query_costs: Vec<u64>,
    pub query_cost_bound: u64,
    pub results: Vec<Option<bool>>,
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn query_errors(&self) -> usize {
        self.results.iter().filter(|r| r.is_none()).count()
    }

    /// Answer stream, one `1`/`0`/`E` per line.
    pub fn answers(&self) -> String {
        format_results(&self.results)
    }

    /// Flat `key=value` block; keys are stable.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| writeln!(out, "{k}={v}").unwrap();
        kv("algorithm", &self.algorithm.name());
        kv("oracle", &self.oracle.map_or("none", OracleKind::name));
        kv("n", &self.n);
        kv("m", &self.m);
        kv("n_on", &self.n_on);
        kv("n_off", &self.n_off);
        kv("batch_deactivate", &self.deactivated);
        kv("batch_activate", &self.activated);
        kv("preprocess_cost", &self.preprocess_cost);
        kv("oracles_built", &self.oracles_built);
        kv("update_pair_probes", &self.update_pair_probes);
        kv("update_delete_calls", &self.update_delete_calls);
        kv("update_oracle_cost", &self.update_oracle_cost);
        kv("query_count", &self.results.len());
        kv("query_errors", &self.query_errors());
        kv("query_cost_total", &self.query_costs.iter().sum::<u64>());
        kv("query_cost_max", &self.query_costs.iter().max().copied().unwrap_or(0));
        kv("query_cost_bound", &self.query_cost_bound);
        let bits: String = self
            .results
            .iter()
            .map(|r| match r {
                Some(true) => '1',
                Some(false) => '0',
                None => 'E',
            })
            .collect();
        kv("results", &bits);
        if let Some(t) = self.timings {
            kv("time_preprocess_us", &t.preprocess.as_micros());
            kv("time_update_us", &t.update.as_micros());
            kv("time_query_us", &t.queries.as_micros());
        }
        out
    }
}

/// Errors that make the batch illegal for the chosen algorithm.
pub fn is_illegal_update(e: &Error) -> bool {
    matches!(
        e,
        Error::DeactivationNotSupported(_)
            | Error::NotInitiallyOn(_)
            | Error::NotInitiallyOff(_)
            | Error::DuplicateInBatch(_)
            | Error::VertexOutOfRange { .. }
    )
}

/// Runs one algorithm. Per-query failures are recorded as `None` in
/// `results`; an illegal batch aborts the run.
pub fn execute(
    g: &Graph,
    p: &StatePartition,
    batch: &UpdateBatch,
    queries: &[(VertexId, VertexId)],
    algorithm: Algorithm,
    oracle: OracleKind,
    with_timings: bool,
) -> Result<RunReport> {
    let mut report = RunReport {
        algorithm,
        oracle: None,
        n: g.n(),
        m: g.m(),
        n_on: p.n_on(),
        n_off: p.n_off(),
        deactivated: batch.deactivate().len(),
        activated: batch.activate().len(),
        preprocess_cost: 0,
        oracles_built: 0,
        update_pair_probes: 0,
        update_delete_calls: 0,
        update_oracle_cost: 0,
        query_costs: Vec::with_capacity(queries.len()),
        query_cost_bound: 0,
        results: Vec::with_capacity(queries.len()),
        timings: None,
    };
    let mut timings = Timings::default();
    let d = batch.activate().len() as u64;

    match algorithm {
        Algorithm::Incremental => {
            let t = Instant::now();
            let index = IncrementalIndex::build(g, p);
            timings.preprocess = t.elapsed();
            let stats = index.stats();
            report.preprocess_cost = stats.edge_probes + stats.or_words + stats.direct_off_edges;

            let t = Instant::now();
            let sg = index.update(batch)?;
            timings.update = t.elapsed();
            report.update_pair_probes = sg.pair_probes();
            report.query_cost_bound = 2 * d;

            let t = Instant::now();
            for &(u, v) in queries {
                let r = index.query_with_stats(&sg, u, v).ok();
                report.query_costs.push(r.map_or(0, |(_, s)| s.probes));
                report.results.push(r.map(|(ans, _)| ans));
            }
            timings.queries = t.elapsed();
        }
        Algorithm::FullyDynamic => {
            report.oracle = Some(oracle);
            let t = Instant::now();
            let mut fd = FullyDynamic::build(g, p, oracle);
            timings.preprocess = t.elapsed();
            report.preprocess_cost = fd.build_stats().preprocess_cost;
            report.oracles_built = fd.build_stats().oracles;

            let t = Instant::now();
            let id = fd.update(batch)?;
            timings.update = t.elapsed();
            let stats = fd.session().unwrap().stats();
            report.update_pair_probes = stats.pair_queries;
            report.update_delete_calls = stats.delete_calls;
            report.update_oracle_cost = stats.oracle_update_cost;
            report.query_cost_bound = 1 + 2 * d;

            let t = Instant::now();
            for &(u, v) in queries {
                let r = fd.query_with_stats(u, v).ok();
                report.query_costs.push(r.map_or(0, |(_, s)| s.oracle_calls));
                report.results.push(r.map(|(ans, _)| ans));
            }
            timings.queries = t.elapsed();
            fd.rollback(id)?;
        }
        Algorithm::BruteForce => {
            batch.validate(p)?;
            let t = Instant::now();
            let active = batch.active_after(p);
            timings.update = t.elapsed();
            let truth = BruteForceReference::new(g, &active);
            let t = Instant::now();
            for &(u, v) in queries {
                report.query_costs.push(0);
                report.results.push(truth.connected(u, v).ok());
            }
            timings.queries = t.elapsed();
        }
    }
    if with_timings {
        report.timings = Some(timings);
    }
    Ok(report)
}
