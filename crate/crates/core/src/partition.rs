use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Initial split of the vertex set into activated (`V_on`) and deactivated
/// (`V_off`) vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePartition {
    on_mask: FixedBitSet,
    on_vertices: Vec<VertexId>,
    off_vertices: Vec<VertexId>,
    /// Rank of `v` within `on_vertices` or `off_vertices`, whichever holds it.
    dense: Vec<usize>,
}

impl StatePartition {
    pub fn all_on(n: usize) -> Self {
        let mut mask = FixedBitSet::with_capacity(n);
        mask.insert_range(..);
        Self::from_mask(mask)
    }

    pub fn from_off(n: usize, off: &[VertexId]) -> Result<Self> {
        let mut mask = FixedBitSet::with_capacity(n);
        mask.insert_range(..);
        for &v in off {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask.set(v, false);
        }
        Ok(Self::from_mask(mask))
    }

    pub fn from_mask(on_mask: FixedBitSet) -> Self {
        let n = on_mask.len();
        let mut on_vertices = Vec::new();
        let mut off_vertices = Vec::new();
        let mut dense = Vec::with_capacity(n);
        for v in 0..n {
            if on_mask[v] {
                dense.push(on_vertices.len());
                on_vertices.push(v);
            } else {
                dense.push(off_vertices.len());
                off_vertices.push(v);
            }
        }
        StatePartition {
            on_mask,
            on_vertices,
            off_vertices,
            dense,
        }
    }

    pub fn n(&self) -> usize {
        self.on_mask.len()
    }

    pub fn n_on(&self) -> usize {
        self.on_vertices.len()
    }

    pub fn n_off(&self) -> usize {
        self.off_vertices.len()
    }

    pub fn is_on(&self, v: VertexId) -> bool {
        self.on_mask[v]
    }

    pub fn on_mask(&self) -> &FixedBitSet {
        &self.on_mask
    }

    pub fn on_vertices(&self) -> &[VertexId] {
        &self.on_vertices
    }

    pub fn off_vertices(&self) -> &[VertexId] {
        &self.off_vertices
    }

    /// Dense index of an off vertex in `[0, n_off)`.
    pub fn off_index(&self, v: VertexId) -> Option<usize> {
        (v < self.n() && !self.on_mask[v]).then(|| self.dense[v])
    }

    /// Dense index of an on vertex in `[0, n_on)`; equals its id in `G_on`.
    pub fn on_index(&self, v: VertexId) -> Option<usize> {
        (v < self.n() && self.on_mask[v]).then(|| self.dense[v])
    }

    pub fn off_vertex(&self, index: usize) -> VertexId {
        self.off_vertices[index]
    }
}

/// One batch of state flips: `deactivate` (D) and `activate` (I), both sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpdateBatch {
    deactivate: Vec<VertexId>,
    activate: Vec<VertexId>,
}

impl UpdateBatch {
    /// Rejects repeated vertices and vertices flipped in both directions.
    pub fn new(deactivate: Vec<VertexId>, activate: Vec<VertexId>) -> Result<Self> {
        let mut all: Vec<VertexId> = deactivate.iter().chain(&activate).copied().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateInBatch(w[0]));
        }
        let mut deactivate = deactivate;
        let mut activate = activate;
        deactivate.sort_unstable();
        activate.sort_unstable();
        Ok(UpdateBatch {
            deactivate,
            activate,
        })
    }

    pub fn activate_only(activate: Vec<VertexId>) -> Result<Self> {
        Self::new(Vec::new(), activate)
    }

    pub fn deactivate(&self) -> &[VertexId] {
        &self.deactivate
    }

    pub fn activate(&self) -> &[VertexId] {
        &self.activate
    }

    /// `|D| + |I|`.
    pub fn size(&self) -> usize {
        self.deactivate.len() + self.activate.len()
    }

    /// Checks `D ⊆ V_on` and `I ⊆ V_off` relative to the initial partition.
    pub fn validate(&self, p: &StatePartition) -> Result<()> {
        for &v in self.deactivate.iter().chain(&self.activate) {
            if v >= p.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: p.n() });
            }
        }
        if let Some(&v) = self.deactivate.iter().find(|&&v| !p.is_on(v)) {
            return Err(Error::NotInitiallyOn(v));
        }
        if let Some(&v) = self.activate.iter().find(|&&v| p.is_on(v)) {
            return Err(Error::NotInitiallyOff(v));
        }
        Ok(())
    }

    /// Activation mask `(V_on \ D) ∪ I` after applying the batch.
    pub fn active_after(&self, p: &StatePartition) -> FixedBitSet {
        let mut mask = p.on_mask().clone();
        for &v in &self.deactivate {
            mask.set(v, false);
        }
        for &v in &self.activate {
            mask.insert(v);
        }
        mask
    }
}
