//! Double-normal graphs, cliques and complete multipartite containment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::predicates::{is_pair, PairMode};
use crate::tolerance::Tolerance;

/// Symmetric adjacency over a point set under one pair mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DnGraph {
    n: usize,
    mode: PairMode,
    tol: Tolerance,
    adjacency: Vec<bool>,
}

impl DnGraph {
    /// Builds a graph from an explicit edge list, for tests and for
    /// abstract graphs that did not come from a point set.
    pub fn from_edges(n: usize, mode: PairMode, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![false; n * n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    len: n,
                });
            }
            if i == j {
                return Err(Error::OutOfRange(format!("self-loop at {i}")));
            }
            adjacency[i * n + j] = true;
            adjacency[j * n + i] = true;
        }
        Ok(Self {
            n,
            mode,
            tol: Tolerance::default(),
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> PairMode {
        self.mode
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&e| e).count() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i * self.n..(i + 1) * self.n]
            .iter()
            .filter(|&&e| e)
            .count()
    }

    /// Every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &DnGraph) -> bool {
        self.n == other.n
            && self
                .adjacency
                .iter()
                .zip(&other.adjacency)
                .all(|(&a, &b)| !a || b)
    }

    /// Non-adjacent vertex pairs `i < j`.
    pub fn missing_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            mode: self.mode.name().to_string(),
            delta: self.mode.delta(),
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

/// Wire form of a graph: `{"n": .., "mode": .., "edges": [[i, j], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    pub edges: Vec<[usize; 2]>,
}

/// Naive sweep: every pair against every point, `O(n^3 d)`. Rows are
/// evaluated in parallel.
pub fn build_graph(v: &PointSet, mode: PairMode, tol: &Tolerance) -> Result<DnGraph> {
    let n = v.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    let rows: Vec<Vec<(usize, bool)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| is_pair(mode, i, j, v, tol).map(|e| (j, e)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut adjacency = vec![false; n * n];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, e) in row {
            adjacency[i * n + j] = e;
            adjacency[j * n + i] = e;
        }
    }
    Ok(DnGraph {
        n,
        mode,
        tol: *tol,
        adjacency,
    })
}

/// Outcome of a maximum-clique search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// False when the node budget ran out before optimality was proven.
    pub complete: bool,
    pub nodes_expanded: u64,
}

struct CliqueSearch<'a> {
    g: &'a DnGraph,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    /// Greedy sequential colouring of `cands` in order. Returns the vertices
    /// reordered by colour class together with their colour numbers (1-based),
    /// non-decreasing, so the last entry carries the largest bound.
    fn colour_sort(&self, cands: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cands {
            let slot = classes
                .iter()
                .position(|class| class.iter().all(|&w| !self.g.has_edge(v, w)));
            match slot {
                Some(k) => classes[k].push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cands.len());
        let mut colours = Vec::with_capacity(cands.len());
        for (k, class) in classes.into_iter().enumerate() {
            for v in class {
                order.push(v);
                colours.push(k + 1);
            }
        }
        (order, colours)
    }

    fn expand(&mut self, cands: Vec<usize>) {
        let (order, colours) = self.colour_sort(&cands);
        let mut remaining = order.clone();
        for idx in (0..order.len()).rev() {
            if self.current.len() + colours[idx] <= self.best.len() {
                return;
            }
            if self.nodes >= self.budget {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            let v = order[idx];
            remaining.pop();
            self.current.push(v);
            // keep candidates in input order so ties resolve towards low indices
            let mut next: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&w| self.g.has_edge(v, w))
                .collect();
            next.sort_unstable();
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Branch and bound with greedy-colouring bounds. Deterministic: candidates
/// are taken in input order.
pub fn max_clique(g: &DnGraph, node_budget: u64) -> CliqueResult {
    if g.n == 0 {
        return CliqueResult {
            vertices: Vec::new(),
            complete: true,
            nodes_expanded: 0,
        };
    }
    let mut search = CliqueSearch {
        g,
        best: vec![0],
        current: Vec::new(),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    search.expand((0..g.n).collect());
    let mut vertices = search.best;
    vertices.sort_unstable();
    CliqueResult {
        vertices,
        complete: !search.exhausted,
        nodes_expanded: search.nodes,
    }
}

/// A point set whose vertices carry part labels `1..=m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPartitioned", into = "RawPartitioned")]
pub struct PartitionedConfig {
    points: PointSet,
    parts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPartitioned {
    dim: usize,
    points: Vec<Vec<f64>>,
    parts: Vec<usize>,
}

impl TryFrom<RawPartitioned> for PartitionedConfig {
    type Error = Error;
    fn try_from(raw: RawPartitioned) -> Result<Self> {
        PartitionedConfig::new(PointSet::new(raw.dim, raw.points)?, raw.parts)
    }
}

impl From<PartitionedConfig> for RawPartitioned {
    fn from(c: PartitionedConfig) -> Self {
        RawPartitioned {
            dim: c.points.dim(),
            points: c.points.to_rows(),
            parts: c.parts,
        }
    }
}

impl PartitionedConfig {
    pub fn new(points: PointSet, parts: Vec<usize>) -> Result<Self> {
        validate_labels(&parts, points.len())?;
        Ok(Self { points, parts })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn part_count(&self) -> usize {
        self.parts.iter().copied().max().unwrap_or(0)
    }

    /// Vertex indices of part `label`.
    pub fn members(&self, label: usize) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect()
    }
}

fn validate_labels(parts: &[usize], n: usize) -> Result<()> {
    if parts.len() != n {
        return Err(Error::PartitionMismatch(format!(
            "{} labels for {n} vertices",
            parts.len()
        )));
    }
    let m = parts.iter().copied().max().unwrap_or(0);
    let mut seen = vec![false; m + 1];
    for &l in parts {
        if l == 0 {
            return Err(Error::PartitionMismatch("labels start at 1".into()));
        }
        seen[l] = true;
    }
    if let Some(missing) = (1..=m).find(|&l| !seen[l]) {
        return Err(Error::PartitionMismatch(format!("part {missing} is empty")));
    }
    Ok(())
}

/// Verdict of a containment or pair check: `{"pass": .., "violations": [[i, j], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub pass: bool,
    pub violations: Vec<(usize, usize)>,
}

impl Certificate {
    pub fn from_violations(violations: Vec<(usize, usize)>) -> Self {
        Self {
            pass: violations.is_empty(),
            violations,
        }
    }
}

/// Checks that every cross-part pair is an edge of `g`. Pairs inside a
/// part are unconstrained.
pub fn is_complete_multipartite_sub(g: &DnGraph, parts: &[usize]) -> Result<Certificate> {
    validate_labels(parts, g.n)?;
    let mut violations = Vec::new();
    for i in 0..g.n {
        for j in i + 1..g.n {
            if parts[i] != parts[j] && !g.has_edge(i, j) {
                violations.push((i, j));
            }
        }
    }
    Ok(Certificate::from_violations(violations))
}

/// Part labels of `K_k(r)` in block order: `1,1,..,2,2,..`.
pub fn block_labels(k: usize, r: usize) -> Vec<usize> {
    (1..=k).flat_map(|l| std::iter::repeat_n(l, r)).collect()
}

/// The complete multipartite graph `K_k(r)` with parts in block order.
pub fn complete_multipartite(k: usize, r: usize) -> DnGraph {
    let labels = block_labels(k, r);
    let n = labels.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if labels[i] != labels[j] {
                edges.push((i, j));
            }
        }
    }
    DnGraph::from_edges(n, PairMode::Standard, &edges).expect("indices in range")
}

/// Fits the Turán density parameter: `k = 1 / (1 - 2e/n^2)`.
///
/// Exact on `K_k(r)`. Returns `+inf` when `e = n^2/2`.
pub fn turan_fit(n: u64, edges: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n = {n} < 2")));
    }
    let max = n * (n - 1) / 2;
    if edges > max {
        return Err(Error::OutOfRange(format!(
            "{edges} edges exceed {max} for n = {n}"
        )));
    }
    let n2 = n * n;
    let denom = n2 - 2 * edges;
    if denom == 0 {
        return Ok(f64::INFINITY);
    }
    // integer numerator and denominator: one rounding step
    Ok(n2 as f64 / denom as f64)
}
