//! Integer-coordinate models of the three regular tilings of the plane and
//! validated finite patches of them.
//!
//! Coordinate conventions:
//! - square: `(x, y)` adjacent iff `|dx| + |dy| = 1`;
//! - triangular: axial coordinates; `(x, y)` adjacent to `(x±1, y)`,
//!   `(x, y±1)`, `(x+1, y-1)` and `(x-1, y+1)`;
//! - hexagonal: brick-wall embedding; `(x, y)` adjacent to `(x±1, y)`, plus
//!   `(x, y+1)` when `x + y` is even and `(x, y-1)` otherwise.

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which tiling a grid lives in. `Custom` means an explicit edge list with no
/// lattice validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TilingKind {
    Square,
    Triangular,
    Hexagonal,
    Custom,
}

impl TilingKind {
    /// Degree of the infinite tiling (the symbol Delta); `None` for custom
    /// graphs.
    pub fn tiling_degree(self) -> Option<usize> {
        match self {
            TilingKind::Square => Some(4),
            TilingKind::Triangular => Some(6),
            TilingKind::Hexagonal => Some(3),
            TilingKind::Custom => None,
        }
    }
}

impl fmt::Display for TilingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TilingKind::Square => "square",
            TilingKind::Triangular => "triangular",
            TilingKind::Hexagonal => "hexagonal",
            TilingKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// A lattice coordinate. Interpretation depends on the tiling kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Error, Debug)]
pub enum GridError {
    #[error("custom graphs have no lattice neighborhood")]
    CustomKind,
    #[error("node set is empty")]
    EmptyNodeSet,
    #[error("duplicate coordinate {0}")]
    DuplicateCoord(Coord),
    #[error("grid is disconnected: {0} is unreachable from {1}")]
    Disconnected(Coord, Coord),
    #[error("custom graph is disconnected: node {0} is unreachable from node 0")]
    DisconnectedIndex(usize),
    #[error("edge index {0} out of range for {1} nodes")]
    EdgeIndexOutOfRange(usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("patch {0} belongs to the {1} tiling, not {2}")]
    PatchKindMismatch(String, TilingKind, TilingKind),
    #[error("unknown patch spec `{0}`")]
    UnknownPatch(String),
    #[error("invalid patch parameters: {0}")]
    BadPatchParams(String),
    #[error("malformed grid document: {0}")]
    BadDocument(String),
}

/// Full lattice neighborhood of a coordinate.
pub fn neighbors(kind: TilingKind, c: Coord) -> Result<Vec<Coord>, GridError> {
    let deltas: &[(i32, i32)] = match kind {
        TilingKind::Square => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        TilingKind::Triangular => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)],
        TilingKind::Hexagonal => {
            if (c.x + c.y).rem_euclid(2) == 0 {
                &[(1, 0), (-1, 0), (0, 1)]
            } else {
                &[(1, 0), (-1, 0), (0, -1)]
            }
        }
        TilingKind::Custom => return Err(GridError::CustomKind),
    };
    Ok(deltas
        .iter()
        .map(|&(dx, dy)| Coord::new(c.x + dx, c.y + dy))
        .collect())
}

/// A finite induced subgraph of a tiling, or a custom simple connected graph.
///
/// Nodes are indexed `0..n`. For lattice kinds the nodes carry coordinates
/// (sorted lexicographically) and the edge set is exactly the set of
/// lattice-adjacent pairs among them. Edges are stored as `(u, v)` with
/// `u < v`, sorted; this fixed order is the canonical edge order used for
/// orientation bitstrings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnderlyingGrid {
    kind: TilingKind,
    nodes: Vec<Coord>,
    n: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

impl UnderlyingGrid {
    /// Builds the grid induced by `nodes` in the given tiling.
    pub fn build(kind: TilingKind, nodes: &[Coord]) -> Result<Self, GridError> {
        if kind == TilingKind::Custom {
            return Err(GridError::CustomKind);
        }
        if nodes.is_empty() {
            return Err(GridError::EmptyNodeSet);
        }
        let mut sorted = nodes.to_vec();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GridError::DuplicateCoord(w[0]));
            }
        }
        let index: HashMap<Coord, usize> =
            sorted.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut edges = Vec::new();
        for (i, &c) in sorted.iter().enumerate() {
            for nb in neighbors(kind, c)? {
                if let Some(&j) = index.get(&nb) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges.sort_unstable();
        let grid = UnderlyingGrid {
            kind,
            n: sorted.len(),
            nodes: sorted,
            max_degree: 0,
            edges,
        };
        let grid = grid.with_max_degree();
        grid.check_connected()?;
        Ok(grid)
    }

    /// Builds a custom graph from an explicit simple edge list on nodes
    /// `0..n`.
    pub fn custom(n: usize, edges: &[(usize, usize)]) -> Result<Self, GridError> {
        if n == 0 {
            return Err(GridError::EmptyNodeSet);
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n {
                return Err(GridError::EdgeIndexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GridError::EdgeIndexOutOfRange(b, n));
            }
            if a == b {
                return Err(GridError::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GridError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let grid = UnderlyingGrid {
            kind: TilingKind::Custom,
            nodes: Vec::new(),
            n,
            edges: normalized,
            max_degree: 0,
        };
        let grid = grid.with_max_degree();
        grid.check_connected()?;
        Ok(grid)
    }

    fn with_max_degree(mut self) -> Self {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        self.max_degree = deg.into_iter().max().unwrap_or(0);
        self
    }

    fn check_connected(&self) -> Result<(), GridError> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if let Some(bad) = seen.iter().position(|&s| !s) {
            return Err(if self.nodes.is_empty() {
                GridError::DisconnectedIndex(bad)
            } else {
                GridError::Disconnected(self.nodes[bad], self.nodes[0])
            });
        }
        Ok(())
    }

    pub fn kind(&self) -> TilingKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Coordinates in index order; empty for custom graphs.
    pub fn coords(&self) -> &[Coord] {
        &self.nodes
    }

    /// Edges as `(u, v)` with `u < v`, in canonical (sorted) order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn index_of(&self, c: Coord) -> Option<usize> {
        self.nodes.binary_search(&c).ok()
    }

    /// Undirected adjacency lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Position of `(min(u,v), max(u,v))` in the canonical edge order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn to_json(&self) -> String {
        GridDoc::from_grid(self, None).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self, GridError> {
        let doc = GridDoc::parse(text)?;
        doc.build_grid()
    }
}

/// A named patch of one of the tilings, as used in the built-in experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatchSpec {
    /// `w x h` block of the square lattice.
    SquareRect { w: u32, h: u32 },
    /// A triangular-lattice node together with its six neighbors (hexagon rim
    /// plus six spokes).
    TriWheel,
    /// Two lattice triangles sharing an edge: 4 nodes, 5 edges.
    TriDiamond,
    /// A lattice triangle with one pendant node attached: 4 nodes, 4 edges.
    TriTail,
    /// `k` fused hexagons in a row.
    HexCycle { k: u32 },
    /// A degree-3 hexagonal node and its three neighbors.
    HexStar,
}

impl PatchSpec {
    pub fn kind(&self) -> TilingKind {
        match self {
            PatchSpec::SquareRect { .. } => TilingKind::Square,
            PatchSpec::TriWheel | PatchSpec::TriDiamond | PatchSpec::TriTail => {
                TilingKind::Triangular
            }
            PatchSpec::HexCycle { .. } | PatchSpec::HexStar => TilingKind::Hexagonal,
        }
    }

    fn coords(&self) -> Result<Vec<Coord>, GridError> {
        match *self {
            PatchSpec::SquareRect { w, h } => {
                if w < 1 || h < 1 {
                    return Err(GridError::BadPatchParams(format!(
                        "squareRect({w},{h}) needs w,h >= 1"
                    )));
                }
                let mut v = Vec::new();
                for x in 0..w as i32 {
                    for y in 0..h as i32 {
                        v.push(Coord::new(x, y));
                    }
                }
                Ok(v)
            }
            PatchSpec::TriWheel => {
                let center = Coord::new(0, 0);
                let mut v = vec![center];
                v.extend(neighbors(TilingKind::Triangular, center)?);
                Ok(v)
            }
            PatchSpec::TriDiamond => Ok(vec![
                Coord::new(0, 0),
                Coord::new(1, 0),
                Coord::new(0, 1),
                Coord::new(1, 1),
            ]),
            PatchSpec::TriTail => Ok(vec![
                Coord::new(-1, 0),
                Coord::new(0, 0),
                Coord::new(1, 0),
                Coord::new(0, 1),
            ]),
            PatchSpec::HexCycle { k } => {
                if k < 1 {
                    return Err(GridError::BadPatchParams(format!(
                        "hexCycle({k}) needs k >= 1"
                    )));
                }
                let mut v = Vec::new();
                for x in 0..=(2 * k as i32) {
                    v.push(Coord::new(x, 0));
                    v.push(Coord::new(x, 1));
                }
                Ok(v)
            }
            PatchSpec::HexStar => {
                let center = Coord::new(0, 0);
                let mut v = vec![center];
                v.extend(neighbors(TilingKind::Hexagonal, center)?);
                Ok(v)
            }
        }
    }
}

impl fmt::Display for PatchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatchSpec::SquareRect { w, h } => write!(f, "squareRect({w},{h})"),
            PatchSpec::TriWheel => write!(f, "triWheel()"),
            PatchSpec::TriDiamond => write!(f, "triDiamond()"),
            PatchSpec::TriTail => write!(f, "triTail()"),
            PatchSpec::HexCycle { k } => write!(f, "hexCycle({k})"),
            PatchSpec::HexStar => write!(f, "hexStar()"),
        }
    }
}

impl FromStr for PatchSpec {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .rfind(')')
                    .ok_or_else(|| GridError::UnknownPatch(s.to_string()))?;
                (&s[..open], &s[open + 1..close])
            }
            None => (s, ""),
        };
        let nums: Vec<u32> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| GridError::BadPatchParams(s.to_string()))?
        };
        match (name, nums.as_slice()) {
            ("squareRect", [w, h]) => Ok(PatchSpec::SquareRect { w: *w, h: *h }),
            ("triWheel", []) => Ok(PatchSpec::TriWheel),
            ("triDiamond", []) => Ok(PatchSpec::TriDiamond),
            ("triTail", []) => Ok(PatchSpec::TriTail),
            ("hexCycle", [k]) => Ok(PatchSpec::HexCycle { k: *k }),
            ("hexStar", []) => Ok(PatchSpec::HexStar),
            _ => Err(GridError::UnknownPatch(s.to_string())),
        }
    }
}

/// Builds a named patch, checking it belongs to the requested tiling.
pub fn patch(kind: TilingKind, spec: &PatchSpec) -> Result<UnderlyingGrid, GridError> {
    if spec.kind() != kind {
        return Err(GridError::PatchKindMismatch(
            spec.to_string(),
            spec.kind(),
            kind,
        ));
    }
    UnderlyingGrid::build(kind, &spec.coords()?)
}

/// Convenience constructor that infers the tiling from the spec.
pub fn build_patch(spec: &PatchSpec) -> Result<UnderlyingGrid, GridError> {
    patch(spec.kind(), spec)
}

/// The JSON interchange document for grids and orientations.
///
/// Lattice grids: `{"kind":"square","nodes":[[x,y],...]}` (edges implied by
/// induction). Custom graphs: `{"kind":"custom","n":N,"edges":[[i,j],...]}`.
/// Orientations add `"arcs":[[u,v],...]`.
#[derive(Serialize, Deserialize)]
pub struct GridDoc {
    pub kind: TilingKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<(i32, i32)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<(usize, usize)>>,
}

impl GridDoc {
    pub fn from_grid(grid: &UnderlyingGrid, arcs: Option<Vec<(usize, usize)>>) -> Self {
        match grid.kind() {
            TilingKind::Custom => GridDoc {
                kind: TilingKind::Custom,
                nodes: None,
                n: Some(grid.node_count()),
                edges: Some(grid.edges().to_vec()),
                arcs,
            },
            kind => GridDoc {
                kind,
                nodes: Some(grid.coords().iter().map(|c| (c.x, c.y)).collect()),
                n: None,
                edges: None,
                arcs,
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, GridError> {
        serde_json::from_str(text).map_err(|e| GridError::BadDocument(e.to_string()))
    }

    pub fn build_grid(&self) -> Result<UnderlyingGrid, GridError> {
        match self.kind {
            TilingKind::Custom => {
                let n = self
                    .n
                    .ok_or_else(|| GridError::BadDocument("custom grid needs `n`".into()))?;
                let edges = self
                    .edges
                    .as_ref()
                    .ok_or_else(|| GridError::BadDocument("custom grid needs `edges`".into()))?;
                UnderlyingGrid::custom(n, edges)
            }
            kind => {
                let nodes = self
                    .nodes
                    .as_ref()
                    .ok_or_else(|| GridError::BadDocument("lattice grid needs `nodes`".into()))?;
                let coords: Vec<Coord> =
                    nodes.iter().map(|&(x, y)| Coord::new(x, y)).collect();
                UnderlyingGrid::build(kind, &coords)
            }
        }
    }
}

impl fmt::Display for GridDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).expect("grid document serializes"))
    }
}
