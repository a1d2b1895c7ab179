//! Counter scaling over batch sizes.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fully_dynamic::FullyDynamic;
use crate::graph::{Graph, VertexId};
use crate::incremental::IncrementalIndex;
use crate::oracle::{BruteForceReference, OracleKind};
use crate::pairs;
use crate::partition::{StatePartition, UpdateBatch};
use crate::verify::trial_seed;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub batch_sizes: Vec<usize>,
    pub repeats: usize,
    pub queries_per_repeat: usize,
    pub seed: u64,
    pub oracles: Vec<OracleKind>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            batch_sizes: vec![2, 4, 8],
            repeats: 5,
            queries_per_repeat: 100,
            seed: 42,
            oracles: OracleKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub oracle: OracleKind,
    pub batch_size: usize,
    pub repeats: usize,
    pub delete_calls: f64,
    pub pair_queries: f64,
    pub update_oracle_cost: f64,
    pub query_calls_mean: f64,
    pub query_calls_max: u64,
    pub inc_pair_probes: f64,
    pub inc_query_probes_mean: f64,
    pub inc_query_probes_max: u64,
    /// `1 + d + C(d, 2)`.
    pub expected_delete_calls: u64,
    /// `C(d, 2)`.
    pub expected_pair_queries: u64,
    /// `1 + 2d`.
    pub query_call_bound: u64,
    /// Every fully dynamic and incremental answer matched brute force.
    pub answers_agree: bool,
    /// Order-sensitive hash of the fully dynamic answers.
    pub answer_digest: u64,
    pub update_us: f64,
    pub query_us: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub warnings: Vec<String>,
}

fn sample_queries(active: &[VertexId], count: usize, rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    if active.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| (*active.choose(rng).unwrap(), *active.choose(rng).unwrap()))
        .collect()
}

pub fn run(g: &Graph, p: &StatePartition, cfg: &BenchConfig) -> BenchOutput {
    let mut out = BenchOutput::default();
    let index = IncrementalIndex::build(g, p);
    let sizes: Vec<usize> = cfg
        .batch_sizes
        .iter()
        .copied()
        .filter(|&d| {
            let ok = d <= p.n_off();
            if !ok {
                out.warnings.push(format!(
                    "skipping batch size {d}: only {} deactivated vertices",
                    p.n_off()
                ));
            }
            ok
        })
        .collect();

    for &kind in &cfg.oracles {
        let mut fd = FullyDynamic::build(g, p, kind);
        for &d in &sizes {
            let mut row = BenchRow {
                oracle: kind,
                batch_size: d,
                repeats: cfg.repeats,
                delete_calls: 0.0,
                pair_queries: 0.0,
                update_oracle_cost: 0.0,
                query_calls_mean: 0.0,
                query_calls_max: 0,
                inc_pair_probes: 0.0,
                inc_query_probes_mean: 0.0,
                inc_query_probes_max: 0,
                expected_delete_calls: 1 + d as u64 + pairs(d),
                expected_pair_queries: pairs(d),
                query_call_bound: 1 + 2 * d as u64,
                answers_agree: true,
                answer_digest: 0xcbf2_9ce4_8422_2325,
                update_us: 0.0,
                query_us: 0.0,
            };
            let mut query_total = 0u64;
            let mut inc_total = 0u64;
            let mut query_count = 0u64;
            for r in 0..cfg.repeats {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, d * 1_000_003 + r));
                let activate: Vec<VertexId> =
                    p.off_vertices().choose_multiple(&mut rng, d).copied().collect();
                let batch = UpdateBatch::activate_only(activate).unwrap();
                let active_mask = batch.active_after(p);
                let active: Vec<VertexId> = active_mask.ones().collect();
                let queries = sample_queries(&active, cfg.queries_per_repeat, &mut rng);
                let truth = BruteForceReference::new(g, &active_mask).labeling();

                let t = Instant::now();
                let id = fd.update(&batch).expect("sampled batch is legal");
                row.update_us += t.elapsed().as_secs_f64() * 1e6;
                let stats = fd.session().unwrap().stats();
                row.delete_calls += stats.delete_calls as f64;
                row.pair_queries += stats.pair_queries as f64;
                row.update_oracle_cost += stats.oracle_update_cost as f64;

                let sg = index.update(&batch).expect("sampled batch is legal");
                row.inc_pair_probes += sg.pair_probes() as f64;

                let t = Instant::now();
                for &(u, v) in &queries {
                    let (ans, qs) = fd.query_with_stats(u, v).expect("active endpoints");
                    query_total += qs.oracle_calls;
                    row.query_calls_max = row.query_calls_max.max(qs.oracle_calls);
                    let expected = truth.same_component(u, v);
                    row.answers_agree &= ans == expected;
                    row.answer_digest = (row.answer_digest ^ ans as u64).wrapping_mul(0x100_0000_01b3);
                }
                row.query_us += t.elapsed().as_secs_f64() * 1e6;
                for &(u, v) in &queries {
                    let (ans, qs) = index.query_with_stats(&sg, u, v).expect("active endpoints");
                    inc_total += qs.probes;
                    row.inc_query_probes_max = row.inc_query_probes_max.max(qs.probes);
                    row.answers_agree &= ans == truth.same_component(u, v);
                }
                query_count += queries.len() as u64;
                fd.rollback(id).expect("live session");
            }
            let reps = cfg.repeats.max(1) as f64;
            row.delete_calls /= reps;
            row.pair_queries /= reps;
            row.update_oracle_cost /= reps;
            row.inc_pair_probes /= reps;
            row.update_us /= reps;
            if query_count > 0 {
                row.query_calls_mean = query_total as f64 / query_count as f64;
                row.inc_query_probes_mean = inc_total as f64 / query_count as f64;
                row.query_us /= query_count as f64;
            }
            out.rows.push(row);
        }
    }
    out
}

const COLUMNS: [&str; 16] = [
    "oracle",
    "d",
    "delete_calls",
    "expect_1+d+C(d,2)",
    "pair_queries",
    "expect_C(d,2)",
    "query_calls_mean",
    "query_calls_max",
    "bound_1+2d",
    "inc_pair_probes",
    "inc_query_probes_max",
    "bound_2d",
    "update_oracle_cost",
    "update_us",
    "query_us",
    "agree",
];

fn fields(r: &BenchRow) -> [String; 16] {
    [
        r.oracle.name().to_string(),
        r.batch_size.to_string(),
        format!("{:.1}", r.delete_calls),
        r.expected_delete_calls.to_string(),
        format!("{:.1}", r.pair_queries),
        r.expected_pair_queries.to_string(),
        format!("{:.2}", r.query_calls_mean),
        r.query_calls_max.to_string(),
        r.query_call_bound.to_string(),
        format!("{:.1}", r.inc_pair_probes),
        r.inc_query_probes_max.to_string(),
        (2 * r.batch_size).to_string(),
        format!("{:.0}", r.update_oracle_cost),
        format!("{:.1}", r.update_us),
        format!("{:.2}", r.query_us),
        if r.answers_agree { "yes" } else { "NO" }.to_string(),
    ]
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let cells: Vec<[String; 16]> = rows.iter().map(fields).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|c| cells.iter().map(|r| r[c].len()).chain([COLUMNS[c].len()]).max().unwrap())
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        let parts: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &COLUMNS);
    for r in &cells {
        line(&mut out, &r.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

/// Tab-separated table with a header row.
pub fn to_tsv(rows: &[BenchRow]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for r in rows {
        out.push_str(&fields(r).join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn counters_match_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = generate::erdos_renyi(60, 0.08, &mut rng);
        let p = generate::random_partition(60, 10, &mut rng);
        let cfg = BenchConfig {
            batch_sizes: vec![2, 4, 8, 16],
            repeats: 2,
            queries_per_repeat: 30,
            ..Default::default()
        };
        let out = run(&g, &p, &cfg);
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(out.rows.len(), 6);
        for r in &out.rows {
            assert_eq!(r.pair_queries, r.expected_pair_queries as f64);
            assert_eq!(r.delete_calls, r.expected_delete_calls as f64);
            assert!(r.query_calls_max <= r.query_call_bound);
            assert!(r.inc_query_probes_max <= 2 * r.batch_size as u64);
            assert!(r.answers_agree);
        }
        let pq: Vec<f64> = out.rows[..3].iter().map(|r| r.pair_queries).collect();
        assert_eq!(pq, vec![1.0, 6.0, 28.0]);
        // same answers from both factories, different costs
        assert_eq!(out.rows[0].answer_digest, out.rows[3].answer_digest);
        assert_ne!(out.rows[2].update_oracle_cost, out.rows[5].update_oracle_cost);
        let tsv = to_tsv(&out.rows);
        assert_eq!(tsv.lines().count(), 7);
        assert!(format_table(&out.rows).trim_start().starts_with("oracle"));
    }
}
