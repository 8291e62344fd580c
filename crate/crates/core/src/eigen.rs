//! Perron eigenvalues of the graph's adjacency matrix (optionally with the
//! marker's row and column deleted), with a primitivity check.

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::IrrGraph;
use crate::word::Word;

/// Relative tolerance of the power iteration.
pub const EIGEN_TOLERANCE: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200_000;

/// Nonnegative sparse matrix stored by rows.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn new(rows: Vec<Vec<(usize, f64)>>) -> Self {
        debug_assert!(rows.iter().flatten().all(|&(_, x)| x >= 0.0));
        SparseMatrix { rows }
    }

    /// Adjacency matrix of the graph, skipping vertex `removed` if given.
    pub fn adjacency(graph: &IrrGraph, removed: Option<usize>) -> Self {
        let n = graph.vertex_count();
        let map: Vec<Option<usize>> = (0..n)
            .scan(0usize, |next, v| {
                Some(if Some(v) == removed {
                    None
                } else {
                    *next += 1;
                    Some(*next - 1)
                })
            })
            .collect();
        let rows = (0..n)
            .filter(|&v| Some(v) != removed)
            .map(|v| {
                graph
                    .successors(v)
                    .iter()
                    .filter_map(|&(_, w)| map[w].map(|j| (j, 1.0)))
                    .collect()
            })
            .collect();
        SparseMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn mul_shifted(&self, x: &[f64], out: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = x[i] + row.iter().map(|&(j, a)| a * x[j]).sum::<f64>();
        }
    }

    fn pattern(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|e| e.1 > 0.0).map(|e| e.0).collect())
            .collect()
    }
}

/// Structure of the nonzero pattern relevant to Perron–Frobenius theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primitivity {
    pub strongly_connected: bool,
    /// gcd of cycle lengths; meaningful only when strongly connected.
    pub period: usize,
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        self.strongly_connected && self.period == 1
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Eigen {
    pub value: f64,
    pub primitivity: Primitivity,
    pub iterations: usize,
    /// False if the iteration cap was hit before the tolerance.
    pub converged: bool,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn bfs_levels(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[start] = Some(0);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let l = level[u].unwrap();
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(l + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

/// Strong connectivity by forward and backward search from one vertex; the
/// period as the gcd of `level(u) + 1 - level(v)` over all edges.
pub fn primitivity(m: &SparseMatrix) -> Primitivity {
    let adj = m.pattern();
    let n = adj.len();
    if n == 0 {
        return Primitivity {
            strongly_connected: false,
            period: 0,
        };
    }
    let mut rev = vec![Vec::new(); n];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            rev[v].push(u);
        }
    }
    let fwd = bfs_levels(&adj, 0);
    let bwd = bfs_levels(&rev, 0);
    let strongly_connected = fwd.iter().chain(&bwd).all(Option::is_some);
    let mut period = 0;
    for (u, outs) in adj.iter().enumerate() {
        let Some(lu) = fwd[u] else { continue };
        for &v in outs {
            if let Some(lv) = fwd[v] {
                period = gcd(period, (lu + 1).abs_diff(lv));
            }
        }
    }
    Primitivity {
        strongly_connected,
        period,
    }
}

/// Spectral radius by power iteration on `A + I`.
///
/// For an irreducible matrix the shift makes the iteration converge even
/// when `A` is periodic, and the Collatz–Wielandt quotients bracket the
/// radius, so iteration stops once the bracket is within the relative
/// tolerance. Reducible matrices are flagged and the last estimate returned.
pub fn dominant_eigenvalue(m: &SparseMatrix) -> Eigen {
    let primitivity = primitivity(m);
    let n = m.dim();
    if n == 0 {
        return Eigen {
            value: 0.0,
            primitivity,
            iterations: 0,
            converged: true,
        };
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut estimate = 0.0;
    for it in 1..=MAX_ITERATIONS {
        m.mul_shifted(&x, &mut y);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (xi, yi) in x.iter().zip(&y) {
            if *xi > 1e-300 {
                let r = yi / xi;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        let peak = y.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return Eigen {
                value: 0.0,
                primitivity,
                iterations: it,
                converged: true,
            };
        }
        let prev = estimate;
        estimate = 0.5 * (lo + hi);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / peak;
        }
        let done = if primitivity.strongly_connected {
            hi - lo <= EIGEN_TOLERANCE * hi
        } else {
            it > 1 && (estimate - prev).abs() <= EIGEN_TOLERANCE * estimate
        };
        if done {
            return Eigen {
                value: estimate - 1.0,
                primitivity,
                iterations: it,
                converged: true,
            };
        }
    }
    Eigen {
        value: estimate - 1.0,
        primitivity,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}

/// `λ` of the full adjacency matrix (`sigma = None`) or of the matrix with the
/// marker's row and column deleted.
pub fn graph_eigenvalue(graph: &IrrGraph, sigma: Option<&Word>) -> Result<Eigen> {
    let removed = sigma.map(|s| graph.marker_id(s)).transpose()?;
    Ok(dominant_eigenvalue(&SparseMatrix::adjacency(
        graph, removed,
    )))
}

/// The marker maximising `λ`, ties (within tolerance) broken towards the
/// lexicographically smallest marker.
pub fn best_sigma(graph: &IrrGraph) -> (Word, Eigen) {
    let values: Vec<Eigen> = (0..graph.vertex_count())
        .into_par_iter()
        .map(|v| dominant_eigenvalue(&SparseMatrix::adjacency(graph, Some(v))))
        .collect();
    let top = values.iter().map(|e| e.value).fold(f64::MIN, f64::max);
    // Vertices are numbered lexicographically.
    let best = values
        .iter()
        .position(|e| e.value >= top - 10.0 * EIGEN_TOLERANCE * top)
        .expect("graph has vertices");
    (
        Word::from_raw(graph.q(), graph.vertex(best).to_vec()),
        values[best],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let m = SparseMatrix::new(vec![vec![(0, 2.5)]]);
        let e = dominant_eigenvalue(&m);
        assert!((e.value - 2.5).abs() < 1e-12);
        assert!(e.primitivity.is_primitive());
    }

    #[test]
    fn periodic_cycle_still_converges() {
        // 3-cycle: λ = 1, period 3
        let m = SparseMatrix::new(vec![vec![(1, 1.0)], vec![(2, 1.0)], vec![(0, 1.0)]]);
        let e = dominant_eigenvalue(&m);
        assert!(e.converged);
        assert!((e.value - 1.0).abs() < 1e-8);
        assert_eq!(e.primitivity.period, 3);
        assert!(!e.primitivity.is_primitive());
    }

    #[test]
    fn reducible_flagged() {
        // 0 -> 1 only; 1 has a self loop of weight 2
        let m = SparseMatrix::new(vec![vec![(1, 1.0)], vec![(1, 2.0)]]);
        let e = dominant_eigenvalue(&m);
        assert!(!e.primitivity.strongly_connected);
        assert!((e.value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn golden_ratio() {
        // [[1,1],[1,0]]
        let m = SparseMatrix::new(vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 1.0)]]);
        let e = dominant_eigenvalue(&m);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((e.value - phi).abs() < 1e-8);
    }
}
