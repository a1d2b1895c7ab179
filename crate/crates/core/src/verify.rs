//! Equivalence suites against the brute-force reference.
//!
//! Every instance (graph, partition, batch) is checked four ways:
//!
//! * `by-set`: `connected_by_set` versus reachability after activating `I`;
//! * `incremental`: [`IncrementalIndex`] queries for the activation part;
//! * `fully-dynamic`: [`FullyDynamic`] queries, one structure per oracle kind,
//!   plus the super-graph edge semantics;
//! * `counters`: the exact probe and oracle-call counts.
//!
//! Random trials are fanned out over threads; results are merged by trial
//! index so the reported first counterexample does not depend on scheduling.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::components::connected_components;
use crate::error::{Error, Result};
use crate::format::{serialize_graph, serialize_updates};
use crate::fully_dynamic::FullyDynamic;
use crate::generate;
use crate::graph::{Graph, VertexId};
use crate::incremental::{IncrementalIndex, InjectedFault};
use crate::oracle::{connected_by_set, connected_via_component, BruteForceReference, OracleKind};
use crate::pairs;
use crate::partition::{StatePartition, UpdateBatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub mode: VerifyMode,
    /// Exhaustive: every vertex count up to this. Random: upper bound on n.
    pub n_max: usize,
    pub trials: usize,
    pub edge_probs: Vec<f64>,
    /// Upper bound on `|D| + |I|`.
    pub batch_max: usize,
    pub seed: u64,
    pub oracles: Vec<OracleKind>,
    #[doc(hidden)]
    pub fault: InjectedFault,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            mode: VerifyMode::Random,
            n_max: 40,
            trials: 1000,
            edge_probs: vec![0.1, 0.3, 0.6],
            batch_max: 6,
            seed: 42,
            oracles: vec![OracleKind::Rebuild],
            fault: InjectedFault::None,
        }
    }
}

impl VerifyConfig {
    pub fn exhaustive(n_max: usize) -> Self {
        VerifyConfig {
            mode: VerifyMode::Exhaustive,
            n_max,
            batch_max: 3,
            oracles: OracleKind::ALL.to_vec(),
            ..Default::default()
        }
    }

    pub fn random(trials: usize, seed: u64) -> Self {
        VerifyConfig {
            trials,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == VerifyMode::Exhaustive && self.n_max > 6 {
            return Err(Error::Config("exhaustive mode supports n_max <= 6".into()));
        }
        if self.mode == VerifyMode::Random && (self.n_max < 1 || self.edge_probs.is_empty()) {
            return Err(Error::Config("random mode needs n_max >= 1 and an edge probability".into()));
        }
        if let Some(p) = self.edge_probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("edge probability {p} outside [0, 1]")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub mismatches: u64,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.mismatches += other.mismatches;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub suite: &'static str,
    pub oracle: Option<OracleKind>,
    pub graph: Graph,
    pub partition: StatePartition,
    pub batch: UpdateBatch,
    pub query: Option<(VertexId, VertexId)>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite: {}", self.suite)?;
        if let Some(o) = self.oracle {
            write!(f, " (oracle {o})")?;
        }
        writeln!(f)?;
        if let Some((u, v)) = self.query {
            writeln!(f, "query: {u} {v}")?;
        }
        writeln!(f, "detail: {}", self.detail)?;
        writeln!(f, "--- graph")?;
        write!(f, "{}", serialize_graph(&self.graph, &self.partition))?;
        writeln!(f, "--- update")?;
        write!(f, "{}", serialize_updates(&self.batch))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifySummary {
    pub instances: u64,
    pub by_set: Tally,
    pub incremental: Tally,
    pub fully_dynamic: Tally,
    pub counters: Tally,
    pub first_counterexample: Option<Counterexample>,
}

impl VerifySummary {
    pub fn mismatches(&self) -> u64 {
        self.by_set.mismatches
            + self.incremental.mismatches
            + self.fully_dynamic.mismatches
            + self.counters.mismatches
    }

    pub fn passed(&self) -> bool {
        self.mismatches() == 0
    }

    fn merge(&mut self, other: VerifySummary) {
        self.instances += other.instances;
        self.by_set.merge(other.by_set);
        self.incremental.merge(other.incremental);
        self.fully_dynamic.merge(other.fully_dynamic);
        self.counters.merge(other.counters);
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instances={}", self.instances)?;
        for (name, t) in [
            ("by-set", self.by_set),
            ("incremental", self.incremental),
            ("fully_dynamic", self.fully_dynamic),
            ("counters", self.counters),
        ] {
            writeln!(f, "{name}_checks={} {name}_mismatches={}", t.checks, t.mismatches)?;
        }
        writeln!(f, "mismatches={}", self.mismatches())?;
        if let Some(cx) = &self.first_counterexample {
            writeln!(f, "first counterexample:")?;
            write!(f, "{cx}")?;
        }
        Ok(())
    }
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifySummary> {
    cfg.validate()?;
    Ok(match cfg.mode {
        VerifyMode::Exhaustive => run_exhaustive(cfg),
        VerifyMode::Random => run_random(cfg),
    })
}

fn merge_in_order(parts: Vec<VerifySummary>) -> VerifySummary {
    parts.into_iter().fold(VerifySummary::default(), |mut acc, s| {
        acc.merge(s);
        acc
    })
}

fn run_exhaustive(cfg: &VerifyConfig) -> VerifySummary {
    let units: Vec<(usize, u64)> = (1..=cfg.n_max)
        .flat_map(|n| (0..1u64 << pairs(n)).map(move |mask| (n, mask)))
        .collect();
    let parts = units
        .into_par_iter()
        .map(|(n, mask)| {
            let g = generate::from_edge_mask(n, mask);
            let mut out = VerifySummary::default();
            for on in 0..1u32 << n {
                let mut bits = FixedBitSet::with_capacity(n);
                for v in (0..n).filter(|v| on >> v & 1 == 1) {
                    bits.insert(v);
                }
                let p = StatePartition::from_mask(bits);
                let mut checker = Checker::new(&g, &p, cfg);
                for i_mask in 0..1u32 << p.n_off() {
                    let set: Vec<VertexId> = (0..p.n_off())
                        .filter(|j| i_mask >> j & 1 == 1)
                        .map(|j| p.off_vertex(j))
                        .collect();
                    checker.check_activation(&set, &mut out);
                }
                for flip in (0..1u32 << n).filter(|f| f.count_ones() as usize <= cfg.batch_max) {
                    let (d, i): (Vec<VertexId>, Vec<VertexId>) =
                        (0..n).filter(|v| flip >> v & 1 == 1).partition(|&v| p.is_on(v));
                    let batch = UpdateBatch::new(d, i).unwrap();
                    out.instances += 1;
                    checker.check_fully_dynamic(&batch, &mut out);
                }
            }
            out
        })
        .collect();
    merge_in_order(parts)
}

/// Seed of trial `i`; every trial has an independent, reproducible stream.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// The random instance of trial `i`: graph, partition and batch.
pub fn random_instance(cfg: &VerifyConfig, trial: usize) -> (Graph, StatePartition, UpdateBatch) {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, trial));
    let n = rng.gen_range(1..=cfg.n_max);
    let prob = *cfg.edge_probs.choose(&mut rng).unwrap();
    let g = generate::erdos_renyi(n, prob, &mut rng);
    let n_off = rng.gen_range(0..=n);
    let p = generate::random_partition(n, n_off, &mut rng);
    let size = rng.gen_range(0..=cfg.batch_max);
    let activate = rng.gen_range(0..=size);
    let batch = generate::random_batch(&p, size - activate, activate, &mut rng);
    (g, p, batch)
}

fn run_random(cfg: &VerifyConfig) -> VerifySummary {
    let parts = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let (g, p, batch) = random_instance(cfg, t);
            let mut out = VerifySummary {
                instances: 1,
                ..Default::default()
            };
            let mut checker = Checker::new(&g, &p, cfg);
            checker.check_activation(batch.activate(), &mut out);
            checker.check_fully_dynamic(&batch, &mut out);
            out
        })
        .collect();
    merge_in_order(parts)
}

#[derive(Clone, Copy)]
enum Suite {
    BySet,
    Incremental,
    FullyDynamic,
    Counters,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::BySet => "by-set",
            Suite::Incremental => "incremental",
            Suite::FullyDynamic => "fully-dynamic",
            Suite::Counters => "counters",
        }
    }

    fn tally(self, s: &mut VerifySummary) -> &mut Tally {
        match self {
            Suite::BySet => &mut s.by_set,
            Suite::Incremental => &mut s.incremental,
            Suite::FullyDynamic => &mut s.fully_dynamic,
            Suite::Counters => &mut s.counters,
        }
    }
}

/// All structures for one (graph, partition) pair.
struct Checker<'a> {
    g: &'a Graph,
    p: &'a StatePartition,
    index: IncrementalIndex,
    dynamic: Vec<FullyDynamic>,
}

struct Ctx<'a> {
    g: &'a Graph,
    p: &'a StatePartition,
    batch: &'a UpdateBatch,
    oracle: Option<OracleKind>,
}

impl Ctx<'_> {
    fn check(
        &self,
        out: &mut VerifySummary,
        suite: Suite,
        ok: bool,
        query: Option<(VertexId, VertexId)>,
        detail: impl FnOnce() -> String,
    ) {
        let tally = suite.tally(out);
        tally.checks += 1;
        if ok {
            return;
        }
        tally.mismatches += 1;
        if out.first_counterexample.is_none() {
            out.first_counterexample = Some(Counterexample {
                suite: suite.name(),
                oracle: self.oracle,
                graph: self.g.clone(),
                partition: self.p.clone(),
                batch: self.batch.clone(),
                query,
                detail: detail(),
            });
        }
    }
}

fn active_pairs(mask: &FixedBitSet) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    mask.ones()
        .flat_map(move |u| mask.ones().filter(move |&v| v > u).map(move |v| (u, v)))
}

impl<'a> Checker<'a> {
    fn new(g: &'a Graph, p: &'a StatePartition, cfg: &VerifyConfig) -> Self {
        Checker {
            g,
            p,
            index: IncrementalIndex::build_with_fault(g, p, cfg.fault),
            dynamic: cfg.oracles.iter().map(|&k| FullyDynamic::build(g, p, k)).collect(),
        }
    }

    /// Connected-by-set and incremental suites for activating `set ⊆ V_off`.
    fn check_activation(&mut self, set: &[VertexId], out: &mut VerifySummary) {
        let batch = UpdateBatch::activate_only(set.to_vec()).unwrap();
        let ctx = Ctx {
            g: self.g,
            p: self.p,
            batch: &batch,
            oracle: None,
        };
        let active = batch.active_after(self.p);
        let truth = BruteForceReference::new(self.g, &active).labeling();
        let on = self.index.labeling();

        let k = on.k();
        let mut predicate = vec![None; k * k];
        for u in self.p.on_vertices().iter().copied() {
            for v in self.p.on_vertices().iter().copied().filter(|&v| v > u) {
                let (cu, cv) = (on.label(u).unwrap(), on.label(v).unwrap());
                if cu == cv {
                    continue;
                }
                let slot = &mut predicate[cu.min(cv) * k + cu.max(cv)];
                let got = slot
                    .get_or_insert_with(|| connected_by_set(self.g, on, set, cu, cv))
                    .clone();
                let expected = truth.same_component(u, v);
                ctx.check(out, Suite::BySet, got == Ok(expected), Some((u, v)), || {
                    format!("connected_by_set = {got:?}, brute force = {expected}")
                });
            }
        }

        let sg = match self.index.update(&batch) {
            Ok(sg) => sg,
            Err(e) => {
                ctx.check(out, Suite::Incremental, false, None, || format!("update failed: {e}"));
                return;
            }
        };
        let pair_probes = sg.pair_probes();
        ctx.check(out, Suite::Counters, pair_probes == pairs(set.len()), None, || {
            format!("incremental pair probes {pair_probes} != C({}, 2)", set.len())
        });
        for (u, v) in active_pairs(&active) {
            let expected = truth.same_component(u, v);
            match self.index.query_with_stats(&sg, u, v) {
                Ok((got, stats)) => {
                    ctx.check(out, Suite::Incremental, got == expected, Some((u, v)), || {
                        format!("incremental = {got}, brute force = {expected}")
                    });
                    let bound = 2 * set.len() as u64;
                    ctx.check(out, Suite::Counters, stats.probes <= bound, Some((u, v)), || {
                        format!("incremental query probes {} > {bound}", stats.probes)
                    });
                }
                Err(e) => ctx.check(out, Suite::Incremental, false, Some((u, v)), || e.to_string()),
            }
        }
    }

    fn check_fully_dynamic(&mut self, batch: &UpdateBatch, out: &mut VerifySummary) {
        let active = batch.active_after(self.p);
        let truth = BruteForceReference::new(self.g, &active).labeling();
        let mut survivors = self.p.on_mask().clone();
        for &v in batch.deactivate() {
            survivors.set(v, false);
        }
        let survivor_labels = connected_components(self.g, &survivors);
        let d = batch.activate().len();

        for fd in &mut self.dynamic {
            let ctx = Ctx {
                g: self.g,
                p: self.p,
                batch,
                oracle: Some(fd.oracle_kind()),
            };
            let id = match fd.update(batch) {
                Ok(id) => id,
                Err(e) => {
                    ctx.check(out, Suite::FullyDynamic, false, None, || format!("update failed: {e}"));
                    continue;
                }
            };
            let session = fd.session().unwrap();
            let stats = session.stats();
            let want_deletes = 1 + d as u64 + pairs(d);
            ctx.check(out, Suite::Counters, stats.delete_calls == want_deletes, None, || {
                format!("delete calls {} != {want_deletes}", stats.delete_calls)
            });
            ctx.check(out, Suite::Counters, stats.pair_queries == pairs(d), None, || {
                format!("pair queries {} != C({d}, 2)", stats.pair_queries)
            });

            let sg = session.supergraph();
            for (a, &u) in batch.activate().iter().enumerate() {
                for &v in &batch.activate()[a + 1..] {
                    let expected = connected_via_component(self.g, &survivor_labels, u, v);
                    let got = sg.edges().binary_search(&(u, v)).is_ok();
                    ctx.check(out, Suite::FullyDynamic, expected == Ok(got), Some((u, v)), || {
                        format!("super-graph edge = {got}, connected via component = {expected:?}")
                    });
                }
            }

            for (u, v) in active_pairs(&active) {
                let expected = truth.same_component(u, v);
                match fd.query_with_stats(u, v) {
                    Ok((got, qs)) => {
                        ctx.check(out, Suite::FullyDynamic, got == expected, Some((u, v)), || {
                            format!("fully dynamic = {got}, brute force = {expected}")
                        });
                        let bound = 1 + 2 * d as u64;
                        ctx.check(out, Suite::Counters, qs.oracle_calls <= bound, Some((u, v)), || {
                            format!("query oracle calls {} > {bound}", qs.oracle_calls)
                        });
                    }
                    Err(e) => ctx.check(out, Suite::FullyDynamic, false, Some((u, v)), || e.to_string()),
                }
            }

            let resets = fd.rollback(id);
            ctx.check(out, Suite::Counters, resets == Ok(want_deletes as usize), None, || {
                format!("rollback resets {resets:?} != delete calls {want_deletes}")
            });
        }
    }
}
