//! Undirected acquaintance graph and the per-skill endorsement digraphs
//! layered on top of it.
//!
//! Vertices are dense integer ids assigned in arrival order. Vertex deletion
//! is unsupported: the growth model only ever adds. Adjacency lists are kept
//! sorted so that queries are binary searches and serialization is
//! deterministic.

use thiserror::Error;

/// Dense vertex identifier, assigned in arrival order.
pub type VertexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {0} rejected")]
    SelfLoop(VertexId),
    #[error("unknown skill {skill} (have {count})")]
    UnknownSkill { skill: usize, count: usize },
    #[error("arc ({u}, {v}) is not an edge of the base graph")]
    NotBaseEdge { u: VertexId, v: VertexId },
    #[error("no eligible attachment target (all other vertices have degree 0)")]
    NoEligibleTarget,
}

/// Undirected simple graph over dense vertex ids.
///
/// Invariants maintained by construction: adjacency is symmetric, there are
/// no self-loops, and neighbor lists are duplicate-free and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` isolated vertices.
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::with_vertices(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v).expect("complete graph edges are valid");
            }
        }
        g
    }

    /// Append a new isolated vertex and return its id.
    pub fn add_vertex(&mut self) -> VertexId {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains_vertex(&self, u: VertexId) -> bool {
        u < self.adjacency.len()
    }

    fn check_vertex(&self, u: VertexId) -> Result<(), GraphError> {
        if self.contains_vertex(u) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(u))
        }
    }

    /// Insert the undirected edge {u, v}.
    ///
    /// Returns `true` if the edge was new, `false` if it was already present
    /// (set semantics, so repeats are no-ops). Self-loops and unknown
    /// vertices are rejected.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos_u) => {
                self.adjacency[u].insert(pos_u, v);
                let pos_v = self.adjacency[v]
                    .binary_search(&u)
                    .expect_err("symmetry: v->u absent iff u->v absent");
                self.adjacency[v].insert(pos_v, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains_vertex(u) && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: VertexId) -> Result<&[VertexId], GraphError> {
        self.check_vertex(u)?;
        Ok(&self.adjacency[u])
    }

    pub fn degree(&self, u: VertexId) -> Result<usize, GraphError> {
        self.check_vertex(u)?;
        Ok(self.adjacency[u].len())
    }

    /// Neighbor set together with its cardinality.
    pub fn adjacency_query(&self, u: VertexId) -> Result<(&[VertexId], usize), GraphError> {
        let n = self.neighbors(u)?;
        Ok((n, n.len()))
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.adjacency.len()
    }

    /// All edges as ordered pairs (u, v) with u < v, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// True when every vertex is reachable from vertex 0 (vacuously true for
    /// the empty graph).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut found = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    found += 1;
                    stack.push(w);
                }
            }
        }
        found == n
    }

    /// Multiset of all vertex degrees.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }
}

/// One directed endorsement subgraph per skill, all over a common base graph.
///
/// Every arc (u, v) — u endorses v — must be an orientation of a base-graph
/// edge. Both orientations may coexist; duplicates and self-arcs cannot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndorsementSet {
    digraphs: Vec<Vec<(VertexId, VertexId)>>,
}

impl EndorsementSet {
    /// Empty digraphs for `skill_count` skills.
    pub fn new(skill_count: usize) -> Self {
        EndorsementSet {
            digraphs: vec![Vec::new(); skill_count],
        }
    }

    pub fn skill_count(&self) -> usize {
        self.digraphs.len()
    }

    fn check_skill(&self, skill: usize) -> Result<(), GraphError> {
        if skill < self.digraphs.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownSkill {
                skill,
                count: self.digraphs.len(),
            })
        }
    }

    /// Arcs of one skill's digraph, sorted ascending.
    pub fn arcs(&self, skill: usize) -> Result<&[(VertexId, VertexId)], GraphError> {
        self.check_skill(skill)?;
        Ok(&self.digraphs[skill])
    }

    pub fn arc_count(&self, skill: usize) -> Result<usize, GraphError> {
        self.check_skill(skill)?;
        Ok(self.digraphs[skill].len())
    }

    pub fn total_arcs(&self) -> usize {
        self.digraphs.iter().map(Vec::len).sum()
    }

    pub fn has_arc(&self, skill: usize, u: VertexId, v: VertexId) -> bool {
        skill < self.digraphs.len() && self.digraphs[skill].binary_search(&(u, v)).is_ok()
    }

    /// Insert arc u -> v into skill's digraph, validating it against the
    /// base graph. Returns `true` if the arc was new.
    pub fn add_arc(
        &mut self,
        base: &Graph,
        skill: usize,
        u: VertexId,
        v: VertexId,
    ) -> Result<bool, GraphError> {
        self.check_skill(skill)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !base.contains_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !base.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if !base.has_edge(u, v) {
            return Err(GraphError::NotBaseEdge { u, v });
        }
        match self.digraphs[skill].binary_search(&(u, v)) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.digraphs[skill].insert(pos, (u, v));
                Ok(true)
            }
        }
    }

    /// Remove arc u -> v; returns `true` if it was present.
    pub fn remove_arc(&mut self, skill: usize, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_skill(skill)?;
        match self.digraphs[skill].binary_search(&(u, v)) {
            Ok(pos) => {
                self.digraphs[skill].remove(pos);
                Ok(true)
            }
            Err(_) => Ok(false),
        }
    }

    /// In-degree of every base vertex in one skill's digraph.
    pub fn in_degrees(&self, skill: usize, vertex_count: usize) -> Result<Vec<usize>, GraphError> {
        self.check_skill(skill)?;
        let mut indeg = vec![0usize; vertex_count];
        for &(_, v) in &self.digraphs[skill] {
            indeg[v] += 1;
        }
        Ok(indeg)
    }

    /// Check the subgraph property against `base`; returns the first
    /// offending arc, if any.
    pub fn validate_against(&self, base: &Graph) -> Result<(), GraphError> {
        for digraph in &self.digraphs {
            for &(u, v) in digraph {
                if !base.has_edge(u, v) {
                    return Err(GraphError::NotBaseEdge { u, v });
                }
            }
        }
        Ok(())
    }
}
