//! Fully dynamic subgraph connectivity with sensitivity, reduced to a
//! decremental oracle.
//!
//! Preprocessing wraps `G_on`, every `G_u = G[V_on ∪ {u}]` and every
//! `G_{u,v} = G[V_on ∪ {u, v}]` (for off vertices `u < v`) in its own oracle.
//! An update deleting `D` and activating `I` pushes `D` into the oracles of
//! `G_on`, `G_u` and `G_{u,v}` for `u, v ∈ I`, then links `u, v ∈ I` in the
//! super-graph whenever `G_{u,v} \ D` connects them. Queries ask `G_on \ D`
//! first and then look for one super-graph component reaching both ends
//! through the `G_w` oracles.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, OnGraph, VertexId};
use crate::oracle::{DecrementalOracle, OracleKind, Phase};
use crate::partition::{StatePartition, UpdateBatch};
use crate::supergraph::SuperGraph;

pub type SessionId = u64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub oracles: usize,
    /// Sum of the oracles' preprocessing costs.
    pub preprocess_cost: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// `delete_batch` calls issued; `1 + |I| + C(|I|, 2)`.
    pub delete_calls: u64,
    /// Pair-oracle queries made while building the super-graph; `C(|I|, 2)`.
    pub pair_queries: u64,
    /// Sum of the touched oracles' update costs.
    pub oracle_update_cost: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Oracle queries issued; at most `1 + 2|I|`.
    pub oracle_calls: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    On,
    Single(usize),
    Pair(usize),
}

/// The live batch update of a [`FullyDynamic`] structure.
#[derive(Debug, Clone)]
pub struct ActiveUpdate {
    id: SessionId,
    batch: UpdateBatch,
    supergraph: SuperGraph,
    touched: Vec<Slot>,
    stats: UpdateStats,
}

impl ActiveUpdate {
    pub fn id(&self) -> SessionId {
        self.id
    }

    pub fn batch(&self) -> &UpdateBatch {
        &self.batch
    }

    pub fn supergraph(&self) -> &SuperGraph {
        &self.supergraph
    }

    pub fn stats(&self) -> UpdateStats {
        self.stats
    }

    pub fn touched_oracles(&self) -> usize {
        self.touched.len()
    }
}

enum Endpoint {
    On(VertexId),
    Activated(usize),
}

pub struct FullyDynamic {
    partition: StatePartition,
    kind: OracleKind,
    on_oracle: Box<dyn DecrementalOracle>,
    single: Vec<Box<dyn DecrementalOracle>>,
    pairs: Vec<Box<dyn DecrementalOracle>>,
    stats: BuildStats,
    session: Option<ActiveUpdate>,
    next_id: SessionId,
}

/// Position of the pair `(i, j)`, `i < j < n`, in row-major upper-triangular order.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl FullyDynamic {
    pub fn build(g: &Graph, p: &StatePartition, kind: OracleKind) -> Self {
        let on = OnGraph::new(g, p);
        let off = p.off_vertices();
        let augmented = |extra: &[VertexId]| -> Box<dyn DecrementalOracle> {
            let view = on.augment(g, p, extra).expect("off vertices are valid extras");
            kind.build(Arc::new(view))
        };

        let on_oracle = kind.build(Arc::clone(on.graph()) as Arc<dyn Adjacency>);
        let single: Vec<_> = off.par_iter().map(|&u| augmented(&[u])).collect();
        let pair_list: Vec<(VertexId, VertexId)> = (0..off.len())
            .flat_map(|i| (i + 1..off.len()).map(move |j| (off[i], off[j])))
            .collect();
        let pairs: Vec<_> = pair_list.par_iter().map(|&(u, v)| augmented(&[u, v])).collect();

        let preprocess_cost = std::iter::once(&on_oracle)
            .chain(&single)
            .chain(&pairs)
            .map(|o| o.costs().preprocess)
            .sum();
        FullyDynamic {
            partition: p.clone(),
            kind,
            stats: BuildStats {
                oracles: 1 + single.len() + pairs.len(),
                preprocess_cost,
            },
            on_oracle,
            single,
            pairs,
            session: None,
            next_id: 0,
        }
    }

    pub fn partition(&self) -> &StatePartition {
        &self.partition
    }

    pub fn oracle_kind(&self) -> OracleKind {
        self.kind
    }

    pub fn build_stats(&self) -> BuildStats {
        self.stats
    }

    pub fn single_oracle_count(&self) -> usize {
        self.single.len()
    }

    pub fn pair_oracle_count(&self) -> usize {
        self.pairs.len()
    }

    /// Every oracle: `G_on` first, then each `G_u`, then each `G_{u,v}`.
    pub fn oracles(&self) -> impl Iterator<Item = &dyn DecrementalOracle> + '_ {
        std::iter::once(&self.on_oracle)
            .chain(&self.single)
            .chain(&self.pairs)
            .map(|o| o.as_ref())
    }

    pub fn session(&self) -> Option<&ActiveUpdate> {
        self.session.as_ref()
    }

    fn local(&self, v: VertexId) -> VertexId {
        self.partition.on_index(v).expect("on vertex")
    }

    fn augmented_local(&self) -> VertexId {
        self.partition.n_on()
    }

    fn oracle_mut(&mut self, slot: Slot) -> &mut dyn DecrementalOracle {
        match slot {
            Slot::On => self.on_oracle.as_mut(),
            Slot::Single(i) => self.single[i].as_mut(),
            Slot::Pair(i) => self.pairs[i].as_mut(),
        }
    }

    fn reset_slots(&mut self, slots: &[Slot]) {
        for &slot in slots {
            self.oracle_mut(slot).reset();
        }
    }

    /// Applies one batch. Fails if a session is live or the batch does not
    /// match the initial partition.
    pub fn update(&mut self, batch: &UpdateBatch) -> Result<SessionId> {
        if self.session.is_some() {
            return Err(Error::SessionActive);
        }
        batch.validate(&self.partition)?;
        let deleted: Vec<VertexId> = batch.deactivate().iter().map(|&v| self.local(v)).collect();
        let activated: Vec<usize> = batch
            .activate()
            .iter()
            .map(|&v| self.partition.off_index(v).unwrap())
            .collect();
        let n_off = self.partition.n_off();

        let mut slots = vec![Slot::On];
        slots.extend(activated.iter().map(|&i| Slot::Single(i)));
        for (a, &i) in activated.iter().enumerate() {
            slots.extend(activated[a + 1..].iter().map(|&j| Slot::Pair(pair_index(n_off, i, j))));
        }

        let mut touched = Vec::with_capacity(slots.len());
        for &slot in &slots {
            if let Err(e) = self.oracle_mut(slot).delete_batch(&deleted) {
                self.reset_slots(&touched);
                return Err(e);
            }
            touched.push(slot);
        }

        let (u_local, v_local) = (self.augmented_local(), self.augmented_local() + 1);
        let p = &self.partition;
        let pairs = &self.pairs;
        let mut pair_queries = 0;
        let supergraph = SuperGraph::build(batch.activate().to_vec(), |u, v| {
            pair_queries += 1;
            let (i, j) = (p.off_index(u).unwrap(), p.off_index(v).unwrap());
            pairs[pair_index(n_off, i, j)].query(u_local, v_local)
        });
        let supergraph = match supergraph {
            Ok(sg) => sg,
            Err(e) => {
                self.reset_slots(&touched);
                return Err(e);
            }
        };

        let oracle_update_cost = touched
            .iter()
            .map(|&slot| match slot {
                Slot::On => self.on_oracle.costs().update,
                Slot::Single(i) => self.single[i].costs().update,
                Slot::Pair(i) => self.pairs[i].costs().update,
            })
            .sum();
        let id = self.next_id;
        self.next_id += 1;
        self.session = Some(ActiveUpdate {
            id,
            batch: batch.clone(),
            supergraph,
            stats: UpdateStats {
                delete_calls: touched.len() as u64,
                pair_queries,
                oracle_update_cost,
            },
            touched,
        });
        Ok(id)
    }

    /// Resets every oracle touched by the live session. Returns the number
    /// of reset calls.
    pub fn rollback(&mut self, id: SessionId) -> Result<usize> {
        match &self.session {
            Some(s) if s.id == id => {}
            _ => return Err(Error::StaleSession(id)),
        }
        let session = self.session.take().unwrap();
        self.reset_slots(&session.touched);
        debug_assert!(self.oracles().all(|o| o.phase() == Phase::Fresh));
        Ok(session.touched.len())
    }

    /// Connectivity in `G[(V_on \ D) ∪ I]` for the live session, or in
    /// `G_on` when no session is live.
    pub fn query(&self, u: VertexId, v: VertexId) -> Result<bool> {
        self.query_with_stats(u, v).map(|(ans, _)| ans)
    }

    pub fn query_with_stats(&self, u: VertexId, v: VertexId) -> Result<(bool, QueryStats)> {
        let eu = self.endpoint(u)?;
        let ev = self.endpoint(v)?;
        let mut stats = QueryStats::default();
        let w_local = self.augmented_local();
        let components: &[Vec<VertexId>] =
            self.session.as_ref().map_or(&[], |s| s.supergraph.components());
        let single = |w: VertexId| &self.single[self.partition.off_index(w).unwrap()];

        let ans = match (eu, ev) {
            (Endpoint::On(a), Endpoint::On(b)) => {
                stats.oracle_calls += 1;
                if self.on_oracle.query(a, b)? {
                    true
                } else {
                    let mut found = false;
                    'components: for members in components {
                        let (mut reach_a, mut reach_b) = (false, false);
                        for &w in members {
                            let oracle = single(w);
                            if !reach_a {
                                stats.oracle_calls += 1;
                                reach_a = oracle.query(w_local, a)?;
                            }
                            if !reach_b {
                                stats.oracle_calls += 1;
                                reach_b = oracle.query(w_local, b)?;
                            }
                            if reach_a && reach_b {
                                found = true;
                                break 'components;
                            }
                        }
                    }
                    found
                }
            }
            (Endpoint::Activated(s), Endpoint::On(c)) | (Endpoint::On(c), Endpoint::Activated(s)) => {
                let mut found = false;
                for &w in &components[s] {
                    stats.oracle_calls += 1;
                    if single(w).query(w_local, c)? {
                        found = true;
                        break;
                    }
                }
                found
            }
            (Endpoint::Activated(s), Endpoint::Activated(t)) => s == t,
        };
        Ok((ans, stats))
    }

    fn endpoint(&self, v: VertexId) -> Result<Endpoint> {
        let p = &self.partition;
        if v >= p.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: p.n() });
        }
        let session = self.session.as_ref();
        if p.is_on(v) {
            if session.is_some_and(|s| s.batch.deactivate().binary_search(&v).is_ok()) {
                return Err(Error::QueryOnDeleted(v));
            }
            return Ok(Endpoint::On(self.local(v)));
        }
        session
            .and_then(|s| s.supergraph.component_of(v))
            .map(Endpoint::Activated)
            .ok_or(Error::QueryOnInactive(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::BruteForceReference;

    fn p5() -> (Graph, StatePartition) {
        (
            Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap(),
            StatePartition::from_off(5, &[2]).unwrap(),
        )
    }

    /// Path 0-1-2-3-4 active, off vertex 5 attached to both ends.
    fn bypass() -> (Graph, StatePartition) {
        (
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 4)]).unwrap(),
            StatePartition::from_off(6, &[5]).unwrap(),
        )
    }

    fn batch(d: &[VertexId], i: &[VertexId]) -> UpdateBatch {
        UpdateBatch::new(d.to_vec(), i.to_vec()).unwrap()
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 5;
        let idx: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| pair_index(n, i, j)))
            .collect();
        assert_eq!(idx, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn oracle_counts() {
        let (g, p) = p5();
        for kind in OracleKind::ALL {
            let s = FullyDynamic::build(&g, &p, kind);
            assert_eq!((s.single_oracle_count(), s.pair_oracle_count()), (1, 0));
            assert_eq!(s.build_stats().oracles, 2);
        }
        let p3 = StatePartition::from_off(5, &[0, 2, 4]).unwrap();
        let s = FullyDynamic::build(&g, &p3, OracleKind::Rebuild);
        assert_eq!((s.single_oracle_count(), s.pair_oracle_count()), (3, 3));
        let p0 = StatePartition::all_on(5);
        let mut s = FullyDynamic::build(&g, &p0, OracleKind::Rebuild);
        assert_eq!(s.build_stats().oracles, 1);
        assert_eq!(s.update(&batch(&[], &[1])).unwrap_err(), Error::NotInitiallyOff(1));
        s.update(&batch(&[2], &[])).unwrap();
        assert!(!s.query(1, 3).unwrap());
    }

    #[test]
    fn p5_bridge() {
        let (g, p) = p5();
        let mut s = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        let id = s.update(&batch(&[], &[2])).unwrap();
        let a = s.session().unwrap();
        assert_eq!(a.supergraph().nodes(), &[2]);
        assert!(a.supergraph().edges().is_empty());
        assert_eq!(a.stats().delete_calls, 2);
        assert_eq!(a.stats().pair_queries, 0);
        assert!(s.query(0, 4).unwrap());
        assert_eq!(s.rollback(id).unwrap(), 2);
    }

    #[test]
    fn bypass_around_deleted_vertex() {
        let (g, p) = bypass();
        let mut active = batch(&[2], &[5]).active_after(&p);
        let truth = BruteForceReference::new(&g, &active);
        assert!(truth.connected(0, 4).unwrap());
        assert!(truth.connected(1, 3).unwrap());
        for kind in OracleKind::ALL {
            let mut s = FullyDynamic::build(&g, &p, kind);
            s.update(&batch(&[2], &[5])).unwrap();
            assert_eq!(s.session().unwrap().supergraph().nodes(), &[5]);
            assert!(s.query(0, 4).unwrap());
            assert!(s.query(1, 3).unwrap());
            assert!(s.query(5, 3).unwrap());
            assert_eq!(s.query(2, 3).unwrap_err(), Error::QueryOnDeleted(2));
        }
        active.set(5, false);
        assert!(!BruteForceReference::new(&g, &active).connected(1, 3).unwrap());
    }

    #[test]
    fn bridge_dies_with_deleted_vertex() {
        // off u=0 and w=2 share only component {1}
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (3, 1)]).unwrap();
        let p = StatePartition::from_off(4, &[0, 2]).unwrap();
        let mut s = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        s.update(&batch(&[1], &[0, 2])).unwrap();
        assert!(s.session().unwrap().supergraph().edges().is_empty());
        assert!(!s.query(0, 2).unwrap());
    }

    #[test]
    fn split_without_activations_uses_one_call() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let p = StatePartition::all_on(5);
        let mut s = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        s.update(&batch(&[2], &[])).unwrap();
        let (ans, stats) = s.query_with_stats(0, 4).unwrap();
        assert!(!ans);
        assert_eq!(stats.oracle_calls, 1);
    }

    #[test]
    fn session_protocol() {
        let (g, p) = p5();
        let mut s = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        assert!(!s.query(0, 4).unwrap());
        assert_eq!(s.query(2, 0).unwrap_err(), Error::QueryOnInactive(2));
        let id = s.update(&batch(&[], &[2])).unwrap();
        assert_eq!(s.update(&batch(&[], &[])).unwrap_err(), Error::SessionActive);
        assert_eq!(s.rollback(id + 1).unwrap_err(), Error::StaleSession(id + 1));
        let first = s.session().unwrap().supergraph().clone();
        s.rollback(id).unwrap();
        assert_eq!(s.rollback(id).unwrap_err(), Error::StaleSession(id));
        assert!(s.oracles().all(|o| o.phase() == Phase::Fresh));

        let id2 = s.update(&batch(&[], &[2])).unwrap();
        assert_ne!(id, id2);
        assert_eq!(s.session().unwrap().supergraph(), &first);
        s.rollback(id2).unwrap();

        let id3 = s.update(&batch(&[], &[])).unwrap();
        assert!(s.session().unwrap().supergraph().nodes().is_empty());
        assert!(!s.query(0, 4).unwrap());
        assert!(s.query(3, 4).unwrap());
        s.rollback(id3).unwrap();
    }

    #[test]
    fn rejected_batch_leaves_structure_fresh() {
        let (g, p) = p5();
        let mut s = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        assert_eq!(s.update(&batch(&[2], &[])).unwrap_err(), Error::NotInitiallyOn(2));
        assert!(s.session().is_none());
        assert!(s.oracles().all(|o| o.phase() == Phase::Fresh));
    }
}
