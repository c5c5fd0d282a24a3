//! Generation of the three network families and their summary statistics.
//!
//! All generators are deterministic in `(parameters, seed)` and return
//! connected, simple, undirected graphs. The game can never reach global
//! consensus on a disconnected graph, so generators redraw with
//! `seed + attempt` up to [`CONNECTIVITY_ATTEMPTS`] times and fail loudly
//! after that; in the supported parameter regimes retries are rare.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::rng::{self, SimRng, Stream};

/// How many reseeded redraws a generator attempts before giving up.
pub const CONNECTIVITY_ATTEMPTS: u64 = 100;

/// An immutable simple undirected graph with nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: u32,
    /// Normalized `(min, max)` pairs, sorted lexicographically.
    edges: Vec<(u32, u32)>,
    /// Sorted neighbor list per node.
    adj: Vec<Vec<u32>>,
}

impl Network {
    /// Builds a network from an edge list, rejecting self-loops, duplicate
    /// edges, and out-of-range node ids. Edge order and orientation do not
    /// matter; the result is normalized.
    pub fn from_edges(
        n: u32,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, NetError> {
        if n == 0 {
            return Err(NetError::InvalidParameter("node count must be positive".into()));
        }
        let mut normalized: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(NetError::InvalidEdge(format!("self-loop at node {u}")));
            }
            if u >= n || v >= n {
                return Err(NetError::InvalidEdge(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(NetError::InvalidEdge(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![Vec::new(); n as usize];
        for &(u, v) in &normalized {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            edges: normalized,
            adj,
        })
    }

    pub fn node_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized `(min, max)` edges in sorted order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1u32;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// Parameters of one of the three supported network families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    /// Every unordered pair is an edge independently with probability `p`.
    RandomGraph { n: u32, p: f64 },
    /// Ring lattice with `k_half` neighbors per side (degree `2*k_half`),
    /// each lattice edge rewired with probability `rp`.
    SmallWorld { n: u32, k_half: u32, rp: f64 },
    /// Growth from a complete graph on `m0` nodes; each arrival attaches to
    /// `m` distinct nodes by degree-proportional preferential attachment.
    ScaleFree { n: u32, m0: u32, m: u32 },
}

impl Topology {
    pub fn node_count(&self) -> u32 {
        match *self {
            Topology::RandomGraph { n, .. }
            | Topology::SmallWorld { n, .. }
            | Topology::ScaleFree { n, .. } => n,
        }
    }
}

// Shown in error messages and run summaries; compact but names every
// parameter.
impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Topology::RandomGraph { n, p } => write!(f, "random-graph(n={n}, p={p})"),
            Topology::SmallWorld { n, k_half, rp } => {
                write!(f, "small-world(n={n}, k_half={k_half}, rp={rp})")
            }
            Topology::ScaleFree { n, m0, m } => write!(f, "scale-free(n={n}, m0={m0}, m={m})"),
        }
    }
}

/// A reproducible network specification: family parameters plus seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetSpec {
    pub topology: Topology,
    pub seed: u64,
}

/// Generates the network described by `spec`.
pub fn generate(spec: &NetSpec) -> Result<Network, NetError> {
    match spec.topology {
        Topology::RandomGraph { n, p } => gen_random_graph(n, p, spec.seed),
        Topology::SmallWorld { n, k_half, rp } => gen_small_world(n, k_half, rp, spec.seed),
        Topology::ScaleFree { n, m0, m } => gen_scale_free(n, m0, m, spec.seed),
    }
}

fn connected_or_retry(
    topology: Topology,
    seed: u64,
    build: impl Fn(&mut SimRng) -> Vec<(u32, u32)>,
) -> Result<Network, NetError> {
    for attempt in 0..CONNECTIVITY_ATTEMPTS {
        let mut rng = rng::seeded(seed.wrapping_add(attempt), Stream::NetGen);
        let net = Network::from_edges(topology.node_count(), build(&mut rng))
            .expect("generators emit simple in-range edges");
        if net.is_connected() {
            return Ok(net);
        }
    }
    Err(NetError::GenerationFailed(format!(
        "{topology} with seed {seed}: no connected draw in {CONNECTIVITY_ATTEMPTS} attempts"
    )))
}

/// Random graph: each unordered pair is an edge with probability `p`.
pub fn gen_random_graph(n: u32, p: f64, seed: u64) -> Result<Network, NetError> {
    if n < 2 {
        return Err(NetError::InvalidParameter(format!(
            "random graph needs n >= 2, got {n}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(NetError::InvalidParameter(format!(
            "edge probability must be in (0, 1], got {p}"
        )));
    }
    connected_or_retry(Topology::RandomGraph { n, p }, seed, |rng| {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        edges
    })
}

/// Watts–Strogatz small world: ring lattice plus random rewiring.
///
/// Lattice edges are visited ring distance by ring distance; a rewired edge
/// keeps its near endpoint and moves the far one to a uniformly chosen
/// non-neighbor. Each of the `n * k_half` lattice edges is visited exactly
/// once, so the edge count is invariant under rewiring.
pub fn gen_small_world(n: u32, k_half: u32, rp: f64, seed: u64) -> Result<Network, NetError> {
    if k_half == 0 || n <= 2 * k_half {
        return Err(NetError::InvalidParameter(format!(
            "small world needs 1 <= k_half and n > 2*k_half, got n={n}, k_half={k_half}"
        )));
    }
    if !(0.0..=1.0).contains(&rp) {
        return Err(NetError::InvalidParameter(format!(
            "rewiring probability must be in [0, 1], got {rp}"
        )));
    }
    connected_or_retry(Topology::SmallWorld { n, k_half, rp }, seed, |rng| {
        let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n as usize];
        for d in 1..=k_half {
            for u in 0..n {
                let v = (u + d) % n;
                adj[u as usize].insert(v);
                adj[v as usize].insert(u);
            }
        }
        for d in 1..=k_half {
            for u in 0..n {
                let v = (u + d) % n;
                if !rng.random_bool(rp) {
                    continue;
                }
                // A saturated near endpoint has nowhere to rewire to.
                if adj[u as usize].len() as u32 == n - 1 {
                    continue;
                }
                let w = loop {
                    let w = rng.random_range(0..n);
                    if w != u && !adj[u as usize].contains(&w) {
                        break w;
                    }
                };
                adj[u as usize].remove(&v);
                adj[v as usize].remove(&u);
                adj[u as usize].insert(w);
                adj[w as usize].insert(u);
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for &v in adj[u as usize].range(u + 1..) {
                edges.push((u, v));
            }
        }
        edges
    })
}

/// Barabási–Albert scale free: complete seed graph on `m0` nodes, then each
/// arriving node attaches to `m` distinct existing nodes, drawn with
/// probability proportional to degree (repeated draws, duplicates rejected).
pub fn gen_scale_free(n: u32, m0: u32, m: u32, seed: u64) -> Result<Network, NetError> {
    if !(1 <= m && m <= m0 && m0 <= n) {
        return Err(NetError::InvalidParameter(format!(
            "scale free needs 1 <= m <= m0 <= n, got n={n}, m0={m0}, m={m}"
        )));
    }
    if m0 < 2 && n > m0 {
        return Err(NetError::InvalidParameter(format!(
            "scale free growth needs a seed graph with edges, got m0={m0}"
        )));
    }
    connected_or_retry(Topology::ScaleFree { n, m0, m }, seed, |rng| {
        let mut edges = Vec::new();
        // One entry per degree unit, so uniform draws from this list are
        // degree-proportional.
        let mut pool: Vec<u32> = Vec::new();
        for u in 0..m0 {
            for v in u + 1..m0 {
                edges.push((u, v));
                pool.push(u);
                pool.push(v);
            }
        }
        let mut chosen: Vec<u32> = Vec::with_capacity(m as usize);
        for v in m0..n {
            chosen.clear();
            while (chosen.len() as u32) < m {
                let t = pool[rng.random_range(0..pool.len())];
                if !chosen.contains(&t) {
                    chosen.push(t);
                }
            }
            for &t in &chosen {
                edges.push((t, v));
                pool.push(t);
                pool.push(v);
            }
        }
        edges
    })
}

/// Summary statistics of a connected network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    /// `2|E|/N`.
    pub avg_degree: f64,
    /// Mean shortest-path length over all unordered node pairs.
    pub avg_path_length: f64,
    /// Mean over nodes of `2*triangles(v) / (deg(v)*(deg(v)-1))`, taken as 0
    /// where the degree is below 2.
    pub avg_clustering: f64,
}

/// Computes average degree, average path length (exact all-pairs BFS), and
/// average clustering coefficient. Disconnected input is an error: path
/// lengths would be infinite.
pub fn graph_stats(net: &Network) -> Result<GraphStats, NetError> {
    let n = net.node_count();
    if n == 0 {
        return Err(NetError::InvalidParameter("empty network".into()));
    }

    let mut dist_sum: u64 = 0; // over ordered pairs; halved below
    let mut dist = vec![u32::MAX; n as usize];
    let mut queue = VecDeque::new();
    for src in 0..n {
        dist.fill(u32::MAX);
        dist[src as usize] = 0;
        queue.clear();
        queue.push_back(src);
        let mut reached = 0u32;
        while let Some(v) = queue.pop_front() {
            reached += 1;
            dist_sum += dist[v as usize] as u64;
            for &w in net.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        if reached != n {
            return Err(NetError::Disconnected);
        }
    }
    let pairs = n as f64 * (n as f64 - 1.0);
    let avg_path_length = if n == 1 { 0.0 } else { dist_sum as f64 / pairs };

    // For each edge, the number of common neighbors is added to both
    // endpoints; each triangle at v is seen via two of its edges, so the
    // per-node sum is exactly 2*triangles(v).
    let mut tri2 = vec![0u64; n as usize];
    for &(u, v) in net.edges() {
        let common = sorted_intersection_len(net.neighbors(u), net.neighbors(v));
        tri2[u as usize] += common;
        tri2[v as usize] += common;
    }
    let avg_clustering = (0..n)
        .map(|v| {
            let d = net.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                tri2[v as usize] as f64 / (d * (d - 1.0))
            }
        })
        .sum::<f64>()
        / n as f64;

    Ok(GraphStats {
        avg_degree: net.average_degree(),
        avg_path_length,
        avg_clustering,
    })
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Errors from network construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetError {
    /// Arguments violate a generator's parameter contract.
    InvalidParameter(String),
    /// An explicit edge list is not a simple in-range graph.
    InvalidEdge(String),
    /// No connected draw within the retry budget.
    GenerationFailed(String),
    /// Path statistics requested on a disconnected network.
    Disconnected,
}

impl fmt::Display for NetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            NetError::InvalidEdge(msg) => write!(f, "invalid edge list: {msg}"),
            NetError::GenerationFailed(msg) => write!(f, "network generation failed: {msg}"),
            NetError::Disconnected => write!(f, "network is disconnected: paths are infinite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NetError {}
