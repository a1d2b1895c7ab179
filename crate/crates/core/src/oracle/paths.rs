//! Path characterization after activating a set of inactive vertices.
//!
//! Two inactive vertices are *connected via a connected component* if some
//! component of the active graph is adjacent to both, or if they share an
//! edge. Two components are *connected by the set I* if a chain of vertices
//! of `I` links them, consecutive vertices connected via a component. After
//! activating `I`, vertices in distinct components become connected exactly
//! when their components are connected by `I`.

use std::collections::{HashSet, VecDeque};

use crate::components::{ComponentId, ComponentLabeling};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

fn inactive(labeling: &ComponentLabeling, v: VertexId) -> Result<()> {
    if v >= labeling.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: labeling.vertex_count(),
        });
    }
    if labeling.is_active(v) {
        return Err(Error::ActiveEndpoint(v));
    }
    Ok(())
}

fn adjacent_components(g: &Graph, labeling: &ComponentLabeling, v: VertexId) -> HashSet<ComponentId> {
    g.neighbors(v).iter().filter_map(|&w| labeling.label(w)).collect()
}

fn adjacent_to(g: &Graph, labeling: &ComponentLabeling, v: VertexId, c: ComponentId) -> bool {
    g.neighbors(v).iter().any(|&w| labeling.label(w) == Some(c))
}

/// True iff `(u, v) ∈ E` or some component of `labeling` is adjacent to both.
pub fn connected_via_component(
    g: &Graph,
    labeling: &ComponentLabeling,
    u: VertexId,
    v: VertexId,
) -> Result<bool> {
    inactive(labeling, u)?;
    inactive(labeling, v)?;
    if g.has_edge(u, v) {
        return Ok(true);
    }
    let around_u = adjacent_components(g, labeling, u);
    Ok(g.neighbors(v)
        .iter()
        .filter_map(|&w| labeling.label(w))
        .any(|c| around_u.contains(&c)))
}

/// True iff components `cu` and `cv` are connected by the set `set`.
///
/// Runs a BFS over the implicit graph on `set` whose edges are probed with
/// [`connected_via_component`]. Equal components are trivially connected.
pub fn connected_by_set(
    g: &Graph,
    labeling: &ComponentLabeling,
    set: &[VertexId],
    cu: ComponentId,
    cv: ComponentId,
) -> Result<bool> {
    labeling.check_component(cu)?;
    labeling.check_component(cv)?;
    for &w in set {
        inactive(labeling, w)?;
    }
    if cu == cv {
        return Ok(true);
    }
    let mut seen = vec![false; set.len()];
    let mut queue = VecDeque::new();
    for (i, &w) in set.iter().enumerate() {
        if adjacent_to(g, labeling, w, cu) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let w = set[i];
        if adjacent_to(g, labeling, w, cv) {
            return Ok(true);
        }
        for j in 0..set.len() {
            if !seen[j] && connected_via_component(g, labeling, w, set[j])? {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::connected_components;
    use crate::partition::StatePartition;

    fn on_labeling(g: &Graph, off: &[VertexId]) -> ComponentLabeling {
        let p = StatePartition::from_off(g.n(), off).unwrap();
        connected_components(g, p.on_mask())
    }

    #[test]
    fn shared_component() {
        // u=0, a=1, b=2, v=3
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let lab = on_labeling(&g, &[0, 3]);
        assert!(connected_via_component(&g, &lab, 0, 3).unwrap());
    }

    #[test]
    fn direct_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let lab = on_labeling(&g, &[0, 1]);
        assert!(connected_via_component(&g, &lab, 0, 1).unwrap());
    }

    #[test]
    fn different_components_no_edge() {
        // components {0}, {1}; off 2 touches 0, off 3 touches 1
        let g = Graph::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let lab = on_labeling(&g, &[2, 3]);
        assert_eq!(lab.k(), 2);
        assert!(!connected_via_component(&g, &lab, 2, 3).unwrap());
        assert_eq!(connected_via_component(&g, &lab, 0, 3).unwrap_err(), Error::ActiveEndpoint(0));
    }

    #[test]
    fn single_bridging_vertex() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let lab = on_labeling(&g, &[2]);
        assert!(connected_by_set(&g, &lab, &[2], 0, 1).unwrap());
        assert!(!connected_by_set(&g, &lab, &[], 0, 1).unwrap());
        assert!(matches!(
            connected_by_set(&g, &lab, &[2], 0, 2),
            Err(Error::UnknownComponent { id: 2, k: 2 })
        ));
    }

    #[test]
    fn chain_through_third_component() {
        // A = {0}, B = {1}, X = {2}; u = 3 joins A and X, w = 4 joins X and B.
        let g = Graph::from_edges(5, &[(0, 3), (3, 2), (2, 4), (4, 1)]).unwrap();
        let lab = on_labeling(&g, &[3, 4]);
        let (a, b) = (lab.label(0).unwrap(), lab.label(1).unwrap());
        assert!(connected_by_set(&g, &lab, &[3, 4], a, b).unwrap());
        assert!(!connected_by_set(&g, &lab, &[3], a, b).unwrap());
    }
}
