use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::HellyGraphError;

/// Marker for vertices no path reaches.
pub const UNREACHABLE: u32 = u32::MAX;

/// A finite simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GraphJson {
    Edges {
        vertex_count: usize,
        edges: Vec<[usize; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Adjacency {
        adjacency: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

impl Serialize for FiniteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::Edges {
            vertex_count: self.vertex_count(),
            edges: self.edges(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let built = match GraphJson::deserialize(d)? {
            GraphJson::Edges {
                vertex_count,
                edges,
                labels,
            } => FiniteGraph::from_edges(vertex_count, &edges).map(|g| (g, labels)),
            GraphJson::Adjacency { adjacency, labels } => {
                let n = adjacency.len();
                let edges: Vec<[usize; 2]> = adjacency
                    .iter()
                    .enumerate()
                    .flat_map(|(u, ns)| ns.iter().map(move |&v| [u, v]))
                    .collect();
                FiniteGraph::from_edges(n, &edges).map(|g| (g, labels))
            }
        };
        let (g, labels) = built.map_err(serde::de::Error::custom)?;
        match labels {
            Some(l) => g.with_labels(l).map_err(serde::de::Error::custom),
            None => Ok(g),
        }
    }
}

impl FiniteGraph {
    /// Undirected graph from an edge list; duplicate edges collapse, loops are rejected.
    pub fn from_edges(n: usize, edges: &[[usize; 2]]) -> Result<Self, HellyGraphError> {
        let mut sets = vec![BTreeSet::new(); n];
        for &[u, v] in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(HellyGraphError::VertexOutOfRange { vertex: w, count: n });
                }
            }
            if u == v {
                return Err(HellyGraphError::SelfLoop(u));
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        Ok(Self {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, HellyGraphError> {
        if labels.len() != self.vertex_count() {
            return Err(HellyGraphError::InvalidInput(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<[usize; 2]> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| [u, v]))
            .collect();
        Self::from_edges(n, &edges).unwrap()
    }

    /// Path with `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges: Vec<[usize; 2]> = (1..n).map(|v| [v - 1, v]).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    /// Cycle with `n ≥ 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let edges: Vec<[usize; 2]> = (0..n).map(|v| [v, (v + 1) % n]).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    /// Star with centre `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<[usize; 2]> = (1..=leaves).map(|v| [0, v]).collect();
        Self::from_edges(leaves + 1, &edges).unwrap()
    }

    /// 1-skeleton of the `n`-cube.
    pub fn hypercube(n: u32) -> Self {
        let count = 1usize << n;
        let edges: Vec<[usize; 2]> = (0..count)
            .flat_map(|u| (0..n).map(move |b| [u, u ^ (1 << b)]))
            .filter(|[u, v]| u < v)
            .collect();
        Self::from_edges(count, &edges).unwrap()
    }

    /// King-move graph on `{0..side}ⁿ`: two points are adjacent when they lie in a common
    /// unit cube. Its path metric is the ℓ∞ distance. Vertex `i` has coordinates given by
    /// [`grid_coords`] with the first coordinate varying fastest.
    pub fn grid_box(dim: usize, side: usize) -> Self {
        let width = side + 1;
        let count = width.pow(dim as u32);
        let mut edges = Vec::new();
        for u in 0..count {
            let cu = grid_coords(u, dim, side);
            // every offset in {-1,0,1}ⁿ except zero
            for code in 0..3usize.pow(dim as u32) {
                let mut rest = code;
                let mut cv = Vec::with_capacity(dim);
                let mut ok = true;
                for &c in &cu {
                    let step = (rest % 3) as i64 - 1;
                    rest /= 3;
                    let x = c as i64 + step;
                    if x < 0 || x > side as i64 {
                        ok = false;
                        break;
                    }
                    cv.push(x as usize);
                }
                if ok && cv != cu {
                    let v = grid_index(&cv, side);
                    if u < v {
                        edges.push([u, v]);
                    }
                }
            }
        }
        Self::from_edges(count, &edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| [u, v]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Breadth-first distances from `source`; [`UNREACHABLE`] marks other components.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.vertex_count()).map(|v| self.bfs(v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs(0).iter().all(|&d| d != UNREACHABLE)
    }

    pub fn require_connected(&self) -> Result<(), HellyGraphError> {
        if self.vertex_count() == 0 {
            return Err(HellyGraphError::InvalidInput("graph has no vertices".into()));
        }
        if !self.is_connected() {
            return Err(HellyGraphError::Disconnected);
        }
        Ok(())
    }

    pub fn diameter(&self) -> u32 {
        self.distance_matrix()
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }
}

/// Coordinates of vertex `index` of [`FiniteGraph::grid_box`].
pub fn grid_coords(index: usize, dim: usize, side: usize) -> Vec<usize> {
    let mut rest = index;
    (0..dim)
        .map(|_| {
            let c = rest % (side + 1);
            rest /= side + 1;
            c
        })
        .collect()
}

pub fn grid_index(coords: &[usize], side: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &c| acc * (side + 1) + c)
}

/// Graphs known by name: `K<n>`, `P<n>`, `C<n>`, `S<n>` (star with n leaves), `Q<n>`
/// (hypercube) and `box<n>x<m>` (king graph on `{0..m}ⁿ`).
pub fn builtin_graph(name: &str) -> Result<FiniteGraph, HellyGraphError> {
    let unknown = || HellyGraphError::UnknownBuiltin(name.to_string());
    if let Some(rest) = name.strip_prefix("box") {
        let (n, m) = rest.split_once('x').ok_or_else(unknown)?;
        let n: usize = n.parse().map_err(|_| unknown())?;
        let m: usize = m.parse().map_err(|_| unknown())?;
        if n == 0 || n > 6 || m > 64 {
            return Err(unknown());
        }
        return Ok(FiniteGraph::grid_box(n, m));
    }
    let mut chars = name.chars();
    let kind = chars.next().ok_or_else(unknown)?;
    let size: usize = chars.as_str().parse().map_err(|_| unknown())?;
    match kind {
        'K' if (1..=64).contains(&size) => Ok(FiniteGraph::complete(size)),
        'P' if (1..=64).contains(&size) => Ok(FiniteGraph::path(size)),
        'C' if (3..=64).contains(&size) => Ok(FiniteGraph::cycle(size)),
        'S' if size <= 63 => Ok(FiniteGraph::star(size)),
        'Q' if size <= 6 => Ok(FiniteGraph::hypercube(size as u32)),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert_eq!(FiniteGraph::complete(5).edge_count(), 10);
        assert_eq!(FiniteGraph::path(4).diameter(), 3);
        assert_eq!(FiniteGraph::cycle(6).diameter(), 3);
        assert_eq!(FiniteGraph::star(4).diameter(), 2);
        let q3 = FiniteGraph::hypercube(3);
        assert_eq!((q3.vertex_count(), q3.edge_count(), q3.diameter()), (8, 12, 3));
    }

    #[test]
    fn king_graph_is_linf() {
        let (dim, side) = (2, 4);
        let g = FiniteGraph::grid_box(dim, side);
        assert_eq!(g.vertex_count(), 25);
        let dm = g.distance_matrix();
        for u in 0..25 {
            for v in 0..25 {
                let (a, b) = (grid_coords(u, dim, side), grid_coords(v, dim, side));
                let linf = a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).max().unwrap();
                assert_eq!(dm[u][v] as usize, linf);
            }
        }
        assert_eq!(grid_index(&grid_coords(17, dim, side), side), 17);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            FiniteGraph::from_edges(2, &[[0, 0]]),
            Err(HellyGraphError::SelfLoop(0))
        );
        assert!(matches!(
            FiniteGraph::from_edges(2, &[[0, 2]]),
            Err(HellyGraphError::VertexOutOfRange { vertex: 2, count: 2 })
        ));
        let g = FiniteGraph::from_edges(3, &[[0, 1]]).unwrap();
        assert_eq!(g.require_connected(), Err(HellyGraphError::Disconnected));
    }

    #[test]
    fn json_forms() {
        let g: FiniteGraph =
            serde_json::from_str(r#"{"vertex_count": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}"#)
                .unwrap();
        assert_eq!(g, FiniteGraph::cycle(4));
        let h: FiniteGraph =
            serde_json::from_str(r#"{"adjacency": [[1,3],[0,2],[1,3],[2,0]]}"#).unwrap();
        assert_eq!(h, g);
        let back: FiniteGraph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin_graph("C4").unwrap(), FiniteGraph::cycle(4));
        assert_eq!(builtin_graph("box2x3").unwrap().vertex_count(), 16);
        assert_eq!(builtin_graph("S3").unwrap().vertex_count(), 4);
        assert!(builtin_graph("C2").is_err());
        assert!(builtin_graph("X9").is_err());
    }
}
