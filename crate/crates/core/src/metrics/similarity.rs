//! Neighbor-matching graph similarity.
//!
//! Node pair scores start at 1 and are refined in sweeps: the score of
//! `(i, j)` becomes the weight of an optimal matching between the neighbors
//! of `i` and of `j` under the previous scores, divided by the larger
//! degree. Sweeps stop when no entry moves by more than [`EPSILON`] or after
//! [`MAX_SWEEPS`]. The graph score is an optimal node assignment over the
//! final pair scores divided by the larger node count.

use crate::topology::{Graph, NodeId};
use crate::{Error, Result};

pub const EPSILON: f64 = 1e-4;
pub const MAX_SWEEPS: usize = 100;

struct Compact {
    adj: Vec<Vec<usize>>,
}

impl Compact {
    fn new(g: &Graph) -> Self {
        let mut index = vec![usize::MAX; g.capacity()];
        let live: Vec<NodeId> = g.live_nodes().collect();
        for (i, id) in live.iter().enumerate() {
            index[id.index()] = i;
        }
        let adj = live
            .iter()
            .map(|&id| g.neighbors(id).iter().map(|nb| index[nb.index()]).collect())
            .collect();
        Compact { adj }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }
}

/// Maximum-weight assignment solver with reusable scratch space.
#[derive(Default)]
struct Assignment {
    w: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    minv: Vec<f64>,
    p: Vec<usize>,
    way: Vec<usize>,
    used: Vec<bool>,
}

impl Assignment {
    /// Weight of a maximum assignment between `rows` and `cols` over the
    /// row-major matrix `x` with `width` columns.
    fn weight(&mut self, x: &[f64], width: usize, rows: &[usize], cols: &[usize]) -> f64 {
        self.w.clear();
        if rows.len() <= cols.len() {
            for &r in rows {
                let row = &x[r * width..(r + 1) * width];
                self.w.extend(cols.iter().map(|&c| row[c]));
            }
            self.solve(rows.len(), cols.len())
        } else {
            for &c in cols {
                self.w.extend(rows.iter().map(|&r| x[r * width + c]));
            }
            self.solve(cols.len(), rows.len())
        }
    }

    /// Assigns each of `nr` rows of the `nr x nc` matrix in `self.w` to a
    /// distinct column maximizing total weight. Up to three rows are
    /// enumerated; the rest use shortest augmenting paths with potentials.
    fn solve(&mut self, nr: usize, nc: usize) -> f64 {
        debug_assert!(nr <= nc);
        let w = &self.w;
        match nr {
            0 => return 0.0,
            1 => return w.iter().copied().fold(0.0, f64::max),
            2 => {
                let (r0, r1) = w.split_at(nc);
                let mut best: f64 = 0.0;
                for a in 0..nc {
                    for b in 0..nc {
                        if a != b {
                            best = best.max(r0[a] + r1[b]);
                        }
                    }
                }
                return best;
            }
            3 if nc <= 8 => {
                let (r0, rest) = w.split_at(nc);
                let (r1, r2) = rest.split_at(nc);
                let mut best: f64 = 0.0;
                for a in 0..nc {
                    for b in 0..nc {
                        if a == b {
                            continue;
                        }
                        let ab = r0[a] + r1[b];
                        for c in 0..nc {
                            if c != a && c != b {
                                best = best.max(ab + r2[c]);
                            }
                        }
                    }
                }
                return best;
            }
            _ => {}
        }
        let (n, m) = (nr, nc);
        for buf in [&mut self.u, &mut self.v] {
            buf.clear();
        }
        self.u.resize(n + 1, 0.0);
        self.v.resize(m + 1, 0.0);
        self.p.clear();
        self.p.resize(m + 1, 0);
        self.way.clear();
        self.way.resize(m + 1, 0);
        self.minv.resize(m + 1, 0.0);
        self.used.resize(m + 1, false);
        // 1-based rows and columns; column 0 is the virtual root.
        let cost = |i: usize, j: usize| -w[(i - 1) * m + j - 1];
        for i in 1..=n {
            self.p[0] = i;
            let mut j0 = 0;
            self.minv[..=m].fill(f64::INFINITY);
            self.used[..=m].fill(false);
            loop {
                self.used[j0] = true;
                let i0 = self.p[j0];
                let mut delta = f64::INFINITY;
                let mut j1 = 0;
                for j in 1..=m {
                    if self.used[j] {
                        continue;
                    }
                    let cur = cost(i0, j) - self.u[i0] - self.v[j];
                    if cur < self.minv[j] {
                        self.minv[j] = cur;
                        self.way[j] = j0;
                    }
                    if self.minv[j] < delta {
                        delta = self.minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=m {
                    if self.used[j] {
                        self.u[self.p[j]] += delta;
                        self.v[j] -= delta;
                    } else {
                        self.minv[j] -= delta;
                    }
                }
                j0 = j1;
                if self.p[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = self.way[j0];
                self.p[j0] = self.p[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }
        (1..=m)
            .filter(|&j| self.p[j] != 0)
            .map(|j| w[(self.p[j] - 1) * m + j - 1])
            .sum()
    }
}

/// Pair scores between live nodes of `a` (rows) and `b` (columns), in live
/// id order, together with the number of sweeps run.
pub fn node_similarity(a: &Graph, b: &Graph) -> (Vec<f64>, usize) {
    let (ca, cb) = (Compact::new(a), Compact::new(b));
    node_similarity_compact(&ca, &cb)
}

fn node_similarity_compact(ca: &Compact, cb: &Compact) -> (Vec<f64>, usize) {
    let (na, nb) = (ca.len(), cb.len());
    let mut x = vec![1.0; na * nb];
    let mut next = vec![0.0; na * nb];
    let mut solver = Assignment::default();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut delta: f64 = 0.0;
        for i in 0..na {
            let ni = &ca.adj[i];
            for j in 0..nb {
                let nj = &cb.adj[j];
                let v = match (ni.len(), nj.len()) {
                    (0, 0) => 1.0,
                    (0, _) | (_, 0) => 0.0,
                    (di, dj) => solver.weight(&x, nb, ni, nj) / di.max(dj) as f64,
                };
                delta = delta.max((v - x[i * nb + j]).abs());
                next[i * nb + j] = v;
            }
        }
        std::mem::swap(&mut x, &mut next);
        if delta < EPSILON {
            break;
        }
    }
    (x, sweeps)
}

/// Similarity score in `[0, 1]` of `current` against `original`, over live
/// nodes. Identical id and edge sets short-circuit to 1.
pub fn graph_similarity(original: &Graph, current: &Graph) -> Result<f64> {
    if original.live_count() == 0 || current.live_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if original.live_nodes().eq(current.live_nodes()) && original.edges().eq(current.edges()) {
        return Ok(1.0);
    }
    let (ca, cb) = (Compact::new(original), Compact::new(current));
    let (x, _) = node_similarity_compact(&ca, &cb);
    let (na, nb) = (ca.len(), cb.len());
    let rows: Vec<usize> = (0..na).collect();
    let cols: Vec<usize> = (0..nb).collect();
    let total = Assignment::default().weight(&x, nb, &rows, &cols);
    Ok((total / na.max(nb) as f64).clamp(0.0, 1.0))
}
