//! The graph of irreducible 5-tuples.
//!
//! Vertices are the repeat-free words of length 5. There is an edge
//! `a1..a5 -> a2..a6`, labelled `a6`, whenever `a1..a6` is irreducible. Paths
//! spell irreducible words and every irreducible word of length >= 5 is the
//! label of exactly one path.

use std::collections::VecDeque;

use crate::dup::is_irreducible;
use crate::error::{param, Error, Result};
use crate::word::{check_alphabet, Symbol, Word};

/// Length of a vertex label (and of the marker).
pub const TUPLE_LEN: usize = 5;

pub type Tuple = [Symbol; TUPLE_LEN];

const NO_VERTEX: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct IrrGraph {
    q: u8,
    vertices: Vec<Tuple>,
    /// Dense index over all `q^5` tuples, `NO_VERTEX` for reducible ones.
    index: Vec<u32>,
    /// Out-edges `(label, target)` sorted by label.
    succ: Vec<Vec<(Symbol, usize)>>,
}

fn tuple_code(q: u8, t: &[Symbol]) -> usize {
    t.iter()
        .fold(0usize, |acc, &s| acc * q as usize + s as usize)
}

impl IrrGraph {
    /// Builds the graph for alphabet size `q` (3..=16). Vertices are numbered
    /// in lexicographic order.
    pub fn build(q: u8) -> Result<Self> {
        check_alphabet(q)?;
        let total = (q as usize).pow(TUPLE_LEN as u32);
        let mut index = vec![NO_VERTEX; total];
        let mut vertices = Vec::new();
        let mut t = [0u8; TUPLE_LEN];
        for code in 0..total {
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = (c % q as usize) as u8;
                c /= q as usize;
            }
            if is_irreducible(&t) {
                index[code] = vertices.len() as u32;
                vertices.push(t);
            }
        }
        let mut succ = Vec::with_capacity(vertices.len());
        let mut six = [0u8; TUPLE_LEN + 1];
        for v in &vertices {
            six[..TUPLE_LEN].copy_from_slice(v);
            let mut edges = Vec::new();
            for a in 0..q {
                six[TUPLE_LEN] = a;
                if is_irreducible(&six) {
                    let target = index[tuple_code(q, &six[1..])];
                    debug_assert_ne!(target, NO_VERTEX);
                    edges.push((a, target as usize));
                }
            }
            succ.push(edges);
        }
        Ok(IrrGraph {
            q,
            vertices,
            index,
            succ,
        })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn vertex(&self, id: usize) -> &Tuple {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[Tuple] {
        &self.vertices
    }

    /// Vertex id of a 5-symbol word, if it is irreducible.
    pub fn id_of(&self, t: &[Symbol]) -> Option<usize> {
        if t.len() != TUPLE_LEN || t.iter().any(|&s| s >= self.q) {
            return None;
        }
        match self.index[tuple_code(self.q, t)] {
            NO_VERTEX => None,
            id => Some(id as usize),
        }
    }

    /// Vertex id of a marker word, with a marker error otherwise.
    pub fn marker_id(&self, sigma: &Word) -> Result<usize> {
        if sigma.q() != self.q {
            return Err(Error::Marker(format!(
                "marker alphabet {} differs from graph alphabet {}",
                sigma.q(),
                self.q
            )));
        }
        if sigma.len() != TUPLE_LEN {
            return Err(Error::Marker(format!(
                "marker {sigma} has length {}, expected {TUPLE_LEN}",
                sigma.len()
            )));
        }
        self.id_of(sigma.symbols())
            .ok_or_else(|| Error::Marker(format!("marker {sigma} contains a repeat")))
    }

    pub fn successors(&self, id: usize) -> &[(Symbol, usize)] {
        &self.succ[id]
    }

    /// Follows the edge labelled `label`, if present.
    pub fn step(&self, id: usize, label: Symbol) -> Option<usize> {
        self.succ[id]
            .iter()
            .find(|&&(a, _)| a == label)
            .map(|&(_, t)| t)
    }

    /// Actual number of out-edges.
    pub fn out_degree(&self, id: usize) -> usize {
        self.succ[id].len()
    }

    /// `dist[v]` = length of a shortest path from `v` to `target`, or `None`
    /// when unreachable.
    pub fn distances_to(&self, target: usize) -> Vec<Option<usize>> {
        let mut pred = vec![Vec::new(); self.vertex_count()];
        for (v, edges) in self.succ.iter().enumerate() {
            for &(_, w) in edges {
                pred[w].push(v);
            }
        }
        let mut dist = vec![None; self.vertex_count()];
        dist[target] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(w) = queue.pop_front() {
            let d = dist[w].unwrap();
            for &v in &pred[w] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// True iff every vertex has a directed path to `target`.
    pub fn reaches(&self, target: usize) -> bool {
        self.distances_to(target).iter().all(Option::is_some)
    }

    /// Largest shortest-path distance to `target` over all vertices.
    pub fn max_distance_to(&self, target: usize) -> Option<usize> {
        self.distances_to(target)
            .into_iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
}

/// True iff every vertex of the graph has a path to `sigma`.
pub fn reaches_sigma(graph: &IrrGraph, sigma: &Word) -> Result<bool> {
    Ok(graph.reaches(graph.marker_id(sigma)?))
}

/// Out-degree predicted from the tuple alone: `q - 2` when `a3 == a5` or
/// `a1 a2 == a4 a5`, otherwise `q - 1`.
pub fn predicted_out_degree(q: u8, t: &Tuple) -> usize {
    if t[2] == t[4] || (t[0] == t[3] && t[1] == t[4]) {
        q as usize - 2
    } else {
        q as usize - 1
    }
}

/// Parses a 5-symbol marker and checks it is a vertex.
pub fn parse_marker(q: u8, text: &str) -> Result<Word> {
    let w = Word::parse(q, text)?;
    if w.len() != TUPLE_LEN {
        return Err(param(format!("marker {text} must have length 5")));
    }
    if !w.is_irreducible() {
        return Err(Error::Marker(format!("marker {text} contains a repeat")));
    }
    Ok(w)
}
