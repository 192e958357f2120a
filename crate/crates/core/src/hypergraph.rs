//! Hypergraphs and their monotone functions.
//!
//! A hypergraph `G` on vertices `1..=n` determines the monotone function
//! `f_G`, the disjunction over edges of the conjunction of their vertices.
//! Edges are stored as bitmasks, vertex `i` at bit `i - 1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::function::{BooleanFunction, MAX_ARITY};
use crate::minor::{minor_leq_budget, MinorError, SubstitutionWitness};

/// Default node budget for a homomorphism search.
pub const DEFAULT_HOM_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("vertex count {0} is outside 1..=20")]
    VertexCount(usize),
    #[error("edge contains vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edges must be nonempty")]
    EmptyEdge,
    #[error("complete graphs need at least 2 vertices")]
    TooSmall,
    #[error("function is not monotone")]
    NotMonotone,
    #[error("constant 1 would need the empty edge")]
    ConstantOne,
    #[error("bad hypergraph literal: {0}")]
    Syntax(String),
    #[error("homomorphism search exhausted its budget after {nodes} nodes")]
    Inconclusive { nodes: u64 },
    #[error(transparent)]
    Minor(#[from] MinorError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: BTreeSet<u32>,
}

fn sorted_edges(edges: &BTreeSet<u32>) -> Vec<u32> {
    let mut v: Vec<u32> = edges.iter().copied().collect();
    v.sort_by_key(|&e| (e.count_ones(), mask_vertices(e)));
    v
}

fn mask_vertices(e: u32) -> Vec<usize> {
    (0..32).filter(|i| (e >> i) & 1 == 1).map(|i| i + 1).collect()
}

impl Hypergraph {
    /// Builds a hypergraph from edges given as 1-based vertex lists.
    /// Duplicate edges collapse.
    pub fn new(vertex_count: usize, edges: &[Vec<usize>]) -> Result<Self, HypergraphError> {
        if !(1..=MAX_ARITY).contains(&vertex_count) {
            return Err(HypergraphError::VertexCount(vertex_count));
        }
        let mut set = BTreeSet::new();
        for edge in edges {
            if edge.is_empty() {
                return Err(HypergraphError::EmptyEdge);
            }
            let mut mask = 0u32;
            for &v in edge {
                if v == 0 || v > vertex_count {
                    return Err(HypergraphError::VertexOutOfRange {
                        vertex: v,
                        n: vertex_count,
                    });
                }
                mask |= 1 << (v - 1);
            }
            set.insert(mask);
        }
        Ok(Hypergraph {
            vertex_count,
            edges: set,
        })
    }

    fn from_masks(vertex_count: usize, edges: impl IntoIterator<Item = u32>) -> Self {
        Hypergraph {
            vertex_count,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as sorted 1-based vertex lists, smaller edges first.
    pub fn edges(&self) -> Vec<Vec<usize>> {
        sorted_edges(&self.edges).into_iter().map(mask_vertices).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, vertices: &[usize]) -> bool {
        let mask = vertices.iter().fold(0u32, |m, &v| m | 1 << (v - 1));
        self.edges.contains(&mask)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hg:{}:", self.vertex_count)?;
        for e in self.edges() {
            let parts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Hypergraph {
    type Err = HypergraphError;

    /// Parses `hg:<n>:{1,2}{1,3}`; an empty edge list is allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = |m: &str| HypergraphError::Syntax(m.to_string());
        let rest = s.trim().strip_prefix("hg:").ok_or_else(|| syntax("expected `hg:` prefix"))?;
        let (n, body) = rest.split_once(':').ok_or_else(|| syntax("expected `hg:<n>:`"))?;
        let n: usize = n.trim().parse().map_err(|_| syntax("bad vertex count"))?;
        let mut edges = Vec::new();
        let mut body = body.trim();
        while !body.is_empty() {
            let inner = body.strip_prefix('{').ok_or_else(|| syntax("expected `{`"))?;
            let close = inner.find('}').ok_or_else(|| syntax("unclosed `{`"))?;
            let mut edge = Vec::new();
            for part in inner[..close].split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                edge.push(part.parse::<usize>().map_err(|_| syntax("bad vertex"))?);
            }
            edges.push(edge);
            body = inner[close + 1..].trim_start();
        }
        Hypergraph::new(n, &edges)
    }
}

/// `K_n`: all 2-element subsets of `1..=n`.
pub fn complete_graph(n: usize) -> Result<Hypergraph, HypergraphError> {
    if n < 2 {
        return Err(HypergraphError::TooSmall);
    }
    if n > MAX_ARITY {
        return Err(HypergraphError::VertexCount(n));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((1u32 << i) | (1 << j));
        }
    }
    Ok(Hypergraph::from_masks(n, edges))
}

/// The hypergraph of `G^n_m`: pairs among the first `n - 1` vertices, and
/// triples joining one of them to a pair among the last `m`.
pub fn composite_graph(n: usize, m: usize) -> Result<Hypergraph, HypergraphError> {
    let total = m + n - 1;
    if n < 2 || m < 2 {
        return Err(HypergraphError::TooSmall);
    }
    if total > MAX_ARITY {
        return Err(HypergraphError::VertexCount(total));
    }
    let mut edges = Vec::new();
    for i in 0..n - 1 {
        for j in i + 1..n - 1 {
            edges.push((1u32 << i) | (1 << j));
        }
        for k in n - 1..total {
            for l in k + 1..total {
                edges.push((1u32 << i) | (1 << k) | (1 << l));
            }
        }
    }
    Ok(Hypergraph::from_masks(total, edges))
}

/// `f_G`; the empty edge set gives constant 0.
pub fn function_of(g: &Hypergraph) -> BooleanFunction {
    let edges: Vec<u32> = g.edges.iter().copied().collect();
    BooleanFunction::from_fn(g.vertex_count, |p| edges.iter().any(|&e| p & e == e))
        .expect("vertex count is within the arity bound")
}

/// The hypergraph whose edges are the supports of the minimal true points.
pub fn hypergraph_of(f: &BooleanFunction) -> Result<Hypergraph, HypergraphError> {
    if !f.is_monotone() {
        return Err(HypergraphError::NotMonotone);
    }
    if f.constant_value() == Some(true) {
        return Err(HypergraphError::ConstantOne);
    }
    Ok(Hypergraph::from_masks(
        f.arity(),
        crate::parse::minimal_true_points(f),
    ))
}

/// A vertex map `h: V(G) -> V(H)`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomWitness {
    pub map: Vec<usize>,
}

impl HomWitness {
    fn image(&self, e: u32) -> u32 {
        mask_vertices(e)
            .into_iter()
            .fold(0, |m, v| m | 1 << (self.map[v - 1] - 1))
    }

    fn preimage(&self, j: u32) -> u32 {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &t)| (j >> (t - 1)) & 1 == 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Whether `h` is a hyperedge-surjective homomorphism from `g` to `h`.
    pub fn verify(&self, g: &Hypergraph, h: &Hypergraph) -> bool {
        self.map.len() == g.vertex_count
            && self.map.iter().all(|&t| (1..=h.vertex_count).contains(&t))
            && g.edges.iter().all(|&e| h.edges.contains(&self.image(e)))
            && h.edges.iter().all(|&j| g.edges.contains(&self.preimage(j)))
    }
}

/// Search result with the node count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSearch {
    pub witness: Option<HomWitness>,
    pub nodes: u64,
}

struct HomSearcher<'a> {
    g_edges: Vec<u32>,
    h_edges: Vec<u32>,
    h_set: &'a BTreeSet<u32>,
    n: usize,
    m: usize,
    map: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl HomSearcher<'_> {
    /// Checks edges of `G` inside `assigned`, and that every edge of `H`
    /// still has a candidate preimage.
    fn consistent(&self, assigned: u32) -> bool {
        let image = |e: u32| {
            mask_vertices(e)
                .into_iter()
                .fold(0u32, |m, v| m | 1 << self.map[v - 1])
        };
        for &e in &self.g_edges {
            let known = e & assigned;
            if known == 0 {
                continue;
            }
            let img = image(known);
            if known == e {
                if !self.h_set.contains(&img) {
                    return false;
                }
            } else if !self.h_edges.iter().any(|&j| j & img == img) {
                return false;
            }
        }
        let free = !assigned & ((1u64 << self.n) - 1) as u32;
        for &j in &self.h_edges {
            let mut pre = 0u32;
            for v in 0..self.n {
                if (assigned >> v) & 1 == 1 && (j >> self.map[v]) & 1 == 1 {
                    pre |= 1 << v;
                }
            }
            if !self
                .g_edges
                .iter()
                .any(|&e| e & pre == pre && e & !(pre | free) == 0)
            {
                return false;
            }
        }
        true
    }

    fn search(&mut self, v: usize) -> Result<bool, HypergraphError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(HypergraphError::Inconclusive { nodes: self.nodes });
        }
        if v == self.n {
            return Ok(true);
        }
        let assigned = ((1u64 << (v + 1)) - 1) as u32;
        for t in 0..self.m {
            self.map[v] = t;
            if self.consistent(assigned) && self.search(v + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Searches for a hyperedge-surjective homomorphism from `g` to `h`.
pub fn edge_surjective_hom_budget(
    g: &Hypergraph,
    h: &Hypergraph,
    budget: u64,
) -> Result<HomSearch, HypergraphError> {
    let mut s = HomSearcher {
        g_edges: g.edges.iter().copied().collect(),
        h_edges: h.edges.iter().copied().collect(),
        h_set: &h.edges,
        n: g.vertex_count,
        m: h.vertex_count,
        map: vec![0; g.vertex_count],
        nodes: 0,
        budget,
    };
    let found = s.search(0)?;
    let witness = found.then(|| HomWitness {
        map: s.map.iter().map(|t| t + 1).collect(),
    });
    if let Some(w) = &witness {
        debug_assert!(w.verify(g, h));
    }
    Ok(HomSearch {
        witness,
        nodes: s.nodes,
    })
}

/// [`edge_surjective_hom_budget`] with [`DEFAULT_HOM_BUDGET`].
pub fn edge_surjective_hom(
    g: &Hypergraph,
    h: &Hypergraph,
) -> Result<Option<HomWitness>, HypergraphError> {
    edge_surjective_hom_budget(g, h, DEFAULT_HOM_BUDGET).map(|s| s.witness)
}

/// Both sides of the homomorphism/minor correspondence for one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma4Report {
    pub hom: Option<HomWitness>,
    pub minor: Option<SubstitutionWitness>,
}

impl Lemma4Report {
    /// A homomorphism exists exactly when `f_H ≼ f_G`.
    pub fn consistent(&self) -> bool {
        self.hom.is_some() == self.minor.is_some()
    }

    /// A homomorphism exists but `f_H` is not a minor of `f_G`.
    pub fn forward_fails(&self) -> bool {
        self.hom.is_some() && self.minor.is_none()
    }

    /// `f_H ≼ f_G` holds without a hyperedge-surjective homomorphism.
    pub fn reverse_fails(&self) -> bool {
        self.hom.is_none() && self.minor.is_some()
    }
}

/// Runs both searches for `(G, H)`: a hyperedge-surjective homomorphism
/// `G -> H`, and `f_H ≼ f_G`.
pub fn lemma4_check(g: &Hypergraph, h: &Hypergraph, budget: u64) -> Result<Lemma4Report, HypergraphError> {
    let hom = edge_surjective_hom_budget(g, h, budget)?.witness;
    let minor = minor_leq_budget(&function_of(h), &function_of(g), budget)?.witness;
    Ok(Lemma4Report { hom, minor })
}

/// All hypergraphs on `n` vertices whose edges have size at most `max_edge`.
pub fn all_hypergraphs(n: usize, max_edge: usize) -> Vec<Hypergraph> {
    let candidates: Vec<u32> = (1u32..1 << n)
        .filter(|e| e.count_ones() as usize <= max_edge)
        .collect();
    assert!(candidates.len() < 20, "too many candidate edges");
    (0u32..1 << candidates.len())
        .map(|sel| {
            Hypergraph::from_masks(
                n,
                candidates
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (sel >> i) & 1 == 1)
                    .map(|(_, &e)| e),
            )
        })
        .collect()
}
