//! Shared oracles for the integration tests.
#![allow(dead_code)]

use torus2c_core::torus::dist_to_integer;
use torus2c_core::{circle_dist, SkewProduct, TorusPoint};

pub const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Undirected graph on bitset rows.
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Size of a maximum clique, by branch and bound with greedy-colouring
    /// bounds.
    pub fn max_clique(&self) -> usize {
        let mut best = 0;
        self.expand(self.all(), 0, &mut best);
        best
    }

    fn all(&self) -> Vec<u64> {
        let mut p = vec![!0u64; self.words];
        if !self.n.is_multiple_of(64) {
            p[self.words - 1] = (1u64 << (self.n % 64)) - 1;
        }
        p
    }

    /// Largest clique through `root` inside `allowed`, or `best` if none is
    /// larger.
    pub fn max_clique_through(&self, root: usize, allowed: &[u64], best: usize) -> usize {
        let p: Vec<u64> = self.row(root).iter().zip(allowed).map(|(a, b)| a & b).collect();
        let mut best = best.max(1);
        if p.iter().any(|&w| w != 0) {
            self.expand(p, 1, &mut best);
        }
        best
    }

    fn expand(&self, mut p: Vec<u64>, size: usize, best: &mut usize) {
        let (order, colors) = self.colour(&p);
        for i in (0..order.len()).rev() {
            if size + colors[i] <= *best {
                return;
            }
            let v = order[i];
            let next: Vec<u64> = p.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                *best = (*best).max(size + 1);
            } else {
                self.expand(next, size + 1, best);
            }
            p[v / 64] &= !(1 << (v % 64));
        }
    }

    fn colour(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.to_vec();
        let (mut order, mut colors) = (Vec::new(), Vec::new());
        let mut k = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            k += 1;
            let mut q = uncoloured.clone();
            while let Some(wi) = q.iter().position(|&w| w != 0) {
                let v = wi * 64 + q[wi].trailing_zeros() as usize;
                q[wi] &= !(1 << (v % 64));
                uncoloured[wi] &= !(1 << (v % 64));
                for (a, b) in q.iter_mut().zip(self.row(v)) {
                    *a &= !b;
                }
                order.push(v);
                colors.push(k);
            }
        }
        (order, colors)
    }
}

/// Largest `(n, eps)`-separated subset of the `grid x grid` lattice, by
/// exhaustive search.
///
/// Fiber translations by multiples of `1/grid` preserve `d_n` and the
/// lattice, so every separated set can be moved to contain `(c/grid, 0)`
/// where `c` is its smallest column. Edges use the fiber offsets of
/// `T^i(x, 0)`, which makes the symmetry exact in floating point too.
pub fn max_separated(t: &SkewProduct, n: usize, eps: f64, grid: usize) -> usize {
    let offsets: Vec<Vec<TorusPoint>> = (0..grid)
        .map(|c| t.orbit(TorusPoint::new(c as f64 / grid as f64, 0.0), n))
        .collect();
    let idx = |c: usize, r: usize| c * grid + r;
    let mut g = Graph::new(grid * grid);
    for c in 0..grid {
        for c2 in c..grid {
            for dr in 0..grid {
                let dy = dr as f64 / grid as f64;
                let d = offsets[c]
                    .iter()
                    .zip(&offsets[c2])
                    .map(|(p, q)| {
                        let base = circle_dist(p.x, q.x);
                        base.max(dist_to_integer(dy + q.y.value() - p.y.value()))
                    })
                    .fold(0.0, f64::max);
                if d > eps {
                    for r in 0..grid {
                        let (a, b) = (idx(c, r), idx(c2, (r + dr) % grid));
                        if a != b {
                            g.add_edge(a, b);
                        }
                    }
                }
            }
        }
    }
    let mut best = 0;
    for c in 0..grid {
        let mut allowed = vec![0u64; g.words];
        for v in idx(c, 0)..grid * grid {
            allowed[v / 64] |= 1 << (v % 64);
        }
        best = g.max_clique_through(idx(c, 0), &allowed, best);
    }
    best
}
