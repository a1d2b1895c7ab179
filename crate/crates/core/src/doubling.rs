//! Capacity levels `2^1, ..., 2^l` so that batch cost tracks the actual batch
//! size rather than the configured maximum.

use crate::error::{Error, Result};
use crate::fully_dynamic::{FullyDynamic, SessionId};
use crate::graph::{Graph, VertexId};
use crate::oracle::OracleKind;
use crate::partition::{StatePartition, UpdateBatch};

enum Levels {
    /// One structure serves every level.
    Shared(FullyDynamic),
    PerLevel(Vec<FullyDynamic>),
}

pub struct DoublingFamily {
    capacities: Vec<usize>,
    levels: Levels,
    live: Option<(usize, SessionId)>,
}

/// Capacities `2^1 ..= 2^l` for the smallest `l >= 1` with `d_max <= 2^l`.
pub fn level_capacities(d_max: usize) -> Result<Vec<usize>> {
    if d_max == 0 {
        return Err(Error::Config("sensitivity bound must be at least 1".into()));
    }
    let top = d_max.next_power_of_two().max(2);
    Ok(std::iter::successors(Some(2usize), |&c| (c < top).then_some(c * 2)).collect())
}

impl DoublingFamily {
    pub fn build(g: &Graph, p: &StatePartition, d_max: usize, kind: OracleKind) -> Result<Self> {
        let capacities = level_capacities(d_max)?;
        let levels = if kind.depends_on_sensitivity() {
            Levels::PerLevel(capacities.iter().map(|_| FullyDynamic::build(g, p, kind)).collect())
        } else {
            Levels::Shared(FullyDynamic::build(g, p, kind))
        };
        Ok(DoublingFamily {
            capacities,
            levels,
            live: None,
        })
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn capacity(&self) -> usize {
        *self.capacities.last().unwrap()
    }

    /// Index of the smallest level whose capacity is at least `size`.
    pub fn level_for(&self, size: usize) -> Result<usize> {
        self.capacities
            .iter()
            .position(|&c| c >= size)
            .ok_or(Error::CapacityExceeded {
                size,
                capacity: self.capacity(),
            })
    }

    fn structure_mut(&mut self, level: usize) -> &mut FullyDynamic {
        match &mut self.levels {
            Levels::Shared(s) => s,
            Levels::PerLevel(v) => &mut v[level],
        }
    }

    pub fn structure(&self, level: usize) -> &FullyDynamic {
        match &self.levels {
            Levels::Shared(s) => s,
            Levels::PerLevel(v) => &v[level],
        }
    }

    /// Routes the batch to its level. Returns `(capacity, session)`.
    pub fn dispatch_update(&mut self, batch: &UpdateBatch) -> Result<(usize, SessionId)> {
        if self.live.is_some() {
            return Err(Error::SessionActive);
        }
        let level = self.level_for(batch.size())?;
        let id = self.structure_mut(level).update(batch)?;
        self.live = Some((level, id));
        Ok((self.capacities[level], id))
    }

    pub fn query(&self, u: VertexId, v: VertexId) -> Result<bool> {
        let level = self.live.map_or(0, |(l, _)| l);
        self.structure(level).query(u, v)
    }

    pub fn rollback(&mut self, id: SessionId) -> Result<usize> {
        match self.live {
            Some((level, live)) if live == id => {
                let resets = self.structure_mut(level).rollback(id)?;
                self.live = None;
                Ok(resets)
            }
            _ => Err(Error::StaleSession(id)),
        }
    }
}
