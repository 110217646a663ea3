//! Stable graphs of type `(g, n)`: connected multigraphs with loops, a genus
//! on each vertex and `n` legs, such that every vertex satisfies
//! `2 g_v - 2 + n_v > 0`.
//!
//! Graphs are stored in canonical form, so two isomorphic graphs compare
//! equal. Legs carry labels `1..=n`; label `0` marks an anonymous leg, used
//! for graph *shapes* where only the number of legs at each vertex matters.

mod canon;
mod enumerate;

pub use enumerate::{enumerate_shapes, enumerate_stable_graphs, graphs_by_cylinders};

use crate::arith::factorial;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
    /// Sorted leg labels.
    pub legs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    vertices: Vec<Vertex>,
    /// Sorted pairs `(u, v)` with `u <= v`; `u == v` is a loop.
    edges: Vec<(usize, usize)>,
    code: Vec<u32>,
    vertex_aut: u64,
}

/// Half-edge description: half-edges `2e, 2e+1` belong to edge `e`, then one
/// half-edge per leg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdges {
    pub vertex_of: Vec<usize>,
    pub partner: Vec<usize>,
    pub leg_label: Vec<Option<u32>>,
    pub genera: Vec<u32>,
}

pub(crate) fn vertex_is_stable(genus: u32, valence: usize) -> bool {
    2 * genus as i64 - 2 + valence as i64 > 0
}

impl StableGraph {
    /// Builds and canonicalizes a graph, checking connectivity and stability.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nv = vertices.len();
        if nv == 0 {
            return Err(Error::InvalidArgument("graph without vertices".into()));
        }
        for &(u, v) in &edges {
            if u >= nv || v >= nv {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range")));
            }
        }
        let mut valence: Vec<usize> = vertices.iter().map(|v| v.legs.len()).collect();
        for &(u, v) in &edges {
            valence[u] += 1;
            valence[v] += 1;
        }
        for (i, v) in vertices.iter().enumerate() {
            if !vertex_is_stable(v.genus, valence[i]) {
                return Err(Error::InvalidArgument(format!("vertex {i} is unstable")));
            }
        }
        if !connected(nv, &edges, None) {
            return Err(Error::InvalidArgument("graph is not connected".into()));
        }
        Ok(Self::new_unchecked(vertices, edges))
    }

    pub(crate) fn new_unchecked(mut vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Self {
        for v in &mut vertices {
            v.legs.sort_unstable();
        }
        canon::canonicalize(vertices, edges)
    }

    pub fn from_half_edges(h: &HalfEdges) -> Result<Self> {
        let nh = h.vertex_of.len();
        if h.partner.len() != nh || h.leg_label.len() != nh {
            return Err(Error::InvalidArgument("half-edge arrays differ in length".into()));
        }
        let mut vertices: Vec<Vertex> =
            h.genera.iter().map(|&genus| Vertex { genus, legs: Vec::new() }).collect();
        let mut edges = Vec::new();
        for x in 0..nh {
            let y = h.partner[x];
            if y >= nh || h.partner[y] != x {
                return Err(Error::InvalidArgument("partner map is not an involution".into()));
            }
            if h.vertex_of[x] >= vertices.len() {
                return Err(Error::InvalidArgument("half-edge attached to missing vertex".into()));
            }
            match (x == y, h.leg_label[x]) {
                (true, Some(l)) => vertices[h.vertex_of[x]].legs.push(l),
                (false, None) if x < y => {
                    let (a, b) = (h.vertex_of[x], h.vertex_of[y]);
                    edges.push((a.min(b), a.max(b)));
                }
                (false, None) => {}
                _ => return Err(Error::InvalidArgument("legs must be fixed points".into())),
            }
        }
        Self::new(vertices, edges)
    }

    pub fn half_edges(&self) -> HalfEdges {
        let mut h = HalfEdges {
            vertex_of: Vec::new(),
            partner: Vec::new(),
            leg_label: Vec::new(),
            genera: self.vertices.iter().map(|v| v.genus).collect(),
        };
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            h.vertex_of.extend([u, v]);
            h.partner.extend([2 * e + 1, 2 * e]);
            h.leg_label.extend([None, None]);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            for &l in &v.legs {
                let x = h.vertex_of.len();
                h.vertex_of.push(i);
                h.partner.push(x);
                h.leg_label.push(Some(l));
            }
        }
        h
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_legs(&self) -> usize {
        self.vertices.iter().map(|v| v.legs.len()).sum()
    }

    /// Genus of the graph: `h^1 + sum g_v`.
    pub fn genus(&self) -> u32 {
        let h1 = self.edges.len() as i64 - self.vertices.len() as i64 + 1;
        (h1 + self.vertices.iter().map(|v| v.genus as i64).sum::<i64>()) as u32
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].legs.len()
            + self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    /// True when all legs are anonymous (label 0), i.e. the graph is a shape.
    pub fn is_shape(&self) -> bool {
        self.vertices.iter().all(|v| v.legs.iter().all(|&l| l == 0))
    }

    /// Order of the vertex permutation group preserving genera, legs and adjacency.
    pub fn vertex_aut(&self) -> u64 {
        self.vertex_aut
    }

    /// `|Aut|`: vertex symmetries, permutations of parallel edges, and
    /// permutations and flips of loops.
    pub fn aut_order(&self) -> BigInt {
        let mut acc = BigInt::from(self.vertex_aut);
        let mut i = 0;
        while i < self.edges.len() {
            let mut j = i;
            while j < self.edges.len() && self.edges[j] == self.edges[i] {
                j += 1;
            }
            let m = (j - i) as u32;
            acc *= factorial(m);
            if self.edges[i].0 == self.edges[i].1 {
                acc *= BigInt::one() << m as usize;
            }
            i = j;
        }
        acc
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    /// True when removing edge `e` disconnects the graph.
    pub fn is_bridge(&self, e: usize) -> bool {
        !self.is_loop(e) && !connected(self.vertices.len(), &self.edges, Some(e))
    }

    /// Canonical text form; equal for isomorphic graphs and distinct otherwise.
    pub fn canonical_encoding(&self) -> String {
        self.to_string()
    }

    pub(crate) fn code(&self) -> &[u32] {
        &self.code
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph stable {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"g={}\"];\n", v.genus));
        }
        let mut leg = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            for &l in &v.legs {
                let label = if l == 0 { String::new() } else { l.to_string() };
                s.push_str(&format!("  leg{leg} [shape=plaintext,label=\"{label}\"];\n"));
                s.push_str(&format!("  v{i} -- leg{leg};\n"));
                leg += 1;
            }
        }
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            s.push_str(&format!("  v{u} -- v{v} [label=\"b{}\"];\n", e + 1));
        }
        s.push_str("}\n");
        s
    }
}

impl Ord for StableGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.edges.len(), &self.code).cmp(&(other.edges.len(), &other.code))
    }
}

impl PartialOrd for StableGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "g{}", v.genus)?;
            if !v.legs.is_empty() {
                let l: Vec<String> = v.legs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", l.join(","))?;
            }
        }
        write!(f, "|")?;
        let e: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        write!(f, "{}", e.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

impl Serialize for StableGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr { vertices: self.vertices.clone(), edges: self.edges.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StableGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        StableGraph::new(r.vertices, r.edges).map_err(serde::de::Error::custom)
    }
}

fn connected(nv: usize, edges: &[(usize, usize)], skip: Option<usize>) -> bool {
    let mut adj = vec![Vec::new(); nv];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|b| b)
}
