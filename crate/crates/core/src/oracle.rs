//! Independent ground truth for ranks: model a metric chain as a finite
//! multigraph by scaling every length to an integer and subdividing each
//! unit into an edge, then compute divisor ranks with reduced divisors and
//! Dhar's burning criterion. For divisors supported on the scaled lattice,
//! the rank on the metric graph equals the rank on the subdivision, so
//! this path shares nothing with the partition-based pipeline it checks.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::Integer;
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::divisors::{self, ChainDivisor, Location};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// A connected multigraph with a base vertex and bookkeeping from chain
/// coordinates to vertices.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    n: usize,
    q: usize,
    /// Neighbor lists with edge multiplicities.
    adj: Vec<Vec<(usize, i64)>>,
    deg: Vec<i64>,
    edge_count: usize,
    /// `cycle_vertex[i][s]` is the vertex at `s` scaled arc units clockwise
    /// from `w_{i+1}` on cycle `i+1`.
    cycle_vertex: Vec<Vec<usize>>,
    /// Scaled units per original length unit.
    scale: BigInt,
}

/// Chips per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChipConfig(pub Vec<i64>);

impl ChipConfig {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl FiniteGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn base_vertex(&self) -> usize {
        self.q
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// First Betti number; equals the chain's genus.
    pub fn genus(&self) -> i64 {
        self.edge_count as i64 - self.n as i64 + 1
    }

    pub fn vertex_on_cycle(&self, cycle: usize, scaled_arc: usize) -> usize {
        self.cycle_vertex[cycle - 1][scaled_arc]
    }

    /// Scaled units per original length unit.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// `sum_v (deg(v) - 2) v`.
    pub fn canonical_chips(&self) -> ChipConfig {
        ChipConfig(self.deg.iter().map(|d| d - 2).collect())
    }

    fn distances_from_base(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[self.q] = 0;
        queue.push_back(self.q);
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The unique representative of the divisor class that is effective
    /// away from the base vertex and lets a fire started there burn the
    /// whole graph.
    pub fn dhar_reduce(&self, chips: &ChipConfig) -> ChipConfig {
        let mut c = chips.0.clone();
        let dist = self.distances_from_base();
        let max_dist = dist.iter().copied().max().unwrap_or(0);

        // Lift every non-base vertex to a nonnegative count by borrowing on
        // the set of vertices at distance >= lvl, working outermost shell
        // inward. Each pass only adds chips on its shell and leaves deeper
        // shells untouched, so one sweep suffices.
        for lvl in (1..=max_dist).rev() {
            let in_set: Vec<bool> = dist.iter().map(|&d| d >= lvl).collect();
            let mut need = 0i64;
            for v in 0..self.n {
                if dist[v] == lvl && c[v] < 0 {
                    let gain: i64 = self.adj[v]
                        .iter()
                        .filter(|&&(u, _)| !in_set[u])
                        .map(|&(_, k)| k)
                        .sum();
                    need = need.max((-c[v] + gain - 1) / gain);
                }
            }
            if need > 0 {
                self.fire_set(&mut c, &in_set, -need);
            }
        }

        // Dhar loop: burn from the base; if some set survives, it can fire
        // without going negative. Each firing moves chips strictly toward
        // the base, so the loop terminates with everything burnable.
        loop {
            let burnt = self.burnt_set(&c);
            if burnt.iter().all(|&b| b) {
                return ChipConfig(c);
            }
            let unburnt: Vec<bool> = burnt.iter().map(|&b| !b).collect();
            self.fire_set(&mut c, &unburnt, 1);
        }
    }

    /// Fires every vertex of `set` `times` times (negative = borrowing).
    fn fire_set(&self, c: &mut [i64], set: &[bool], times: i64) {
        for v in 0..self.n {
            for &(u, k) in &self.adj[v] {
                if set[v] && !set[u] {
                    c[v] -= k * times;
                    c[u] += k * times;
                }
            }
        }
    }

    /// Vertices reached by a fire starting at the base: an unburnt vertex
    /// ignites when its edges into the burnt region outnumber its chips.
    fn burnt_set(&self, c: &[i64]) -> Vec<bool> {
        let mut burnt = vec![false; self.n];
        burnt[self.q] = true;
        loop {
            let mut changed = false;
            for v in 0..self.n {
                if burnt[v] {
                    continue;
                }
                let heat: i64 = self.adj[v]
                    .iter()
                    .filter(|&&(u, _)| burnt[u])
                    .map(|&(_, k)| k)
                    .sum();
                if heat > c[v] {
                    burnt[v] = true;
                    changed = true;
                }
            }
            if !changed {
                return burnt;
            }
        }
    }

    pub fn is_reduced(&self, chips: &ChipConfig) -> bool {
        (0..self.n).all(|v| v == self.q || chips.0[v] >= 0)
            && self.burnt_set(&chips.0).iter().all(|&b| b)
    }

    /// Baker-Norine rank: the largest `k` such that subtracting any
    /// effective divisor of degree `k` leaves an effective class. Uses the
    /// recursion `r(D) >= k iff r(D - v) >= k - 1 for every vertex v`,
    /// memoized on reduced forms.
    pub fn bn_rank(&self, chips: &ChipConfig) -> i64 {
        let mut memo: HashMap<(Vec<i64>, i64), bool> = HashMap::new();
        let mut k = 0;
        while self.rank_at_least(chips, k, &mut memo) {
            k += 1;
        }
        k - 1
    }

    fn rank_at_least(
        &self,
        chips: &ChipConfig,
        k: i64,
        memo: &mut HashMap<(Vec<i64>, i64), bool>,
    ) -> bool {
        let reduced = self.dhar_reduce(chips);
        if reduced.0[self.q] < 0 {
            return false;
        }
        if k == 0 {
            return true;
        }
        let key = (reduced.0.clone(), k);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut ok = true;
        for v in 0..self.n {
            let mut next = reduced.clone();
            next.0[v] -= 1;
            if !self.rank_at_least(&next, k - 1, memo) {
                ok = false;
                break;
            }
        }
        memo.insert(key, ok);
        ok
    }
}

/// Builds the finite model of a metric chain and places a divisor's chips
/// on its vertices. All lengths and chip positions are multiplied by the
/// least common denominator (times `extra`), every cycle is forced to at
/// least 3 units, bridges become paths when lengths are present and are
/// contracted otherwise.
pub fn to_finite_graph(spec: &ChainSpec, d: &ChainDivisor) -> Result<(FiniteGraph, ChipConfig)> {
    to_finite_graph_scaled(spec, d, 1)
}

pub fn to_finite_graph_scaled(
    spec: &ChainSpec,
    d: &ChainDivisor,
    extra: u32,
) -> Result<(FiniteGraph, ChipConfig)> {
    let ChainSpec::Metric { cycles, bridges } = spec else {
        return Err(Error::OracleNeedsMetric);
    };
    d.validate(spec)?;
    let g = cycles.len();

    // Arc position of a divisor point, clockwise from w_i, in length units.
    let arc_of = |cycle: usize, xi: &Rat| -> Rat {
        let geom = &cycles[cycle - 1];
        (xi * &geom.cw).rem_euclid(&geom.total)
    };

    let mut denominators: Vec<BigInt> = Vec::new();
    for c in cycles {
        denominators.push(c.cw.denom().clone());
        denominators.push(c.total.denom().clone());
    }
    if let Some(bs) = bridges {
        for b in bs {
            denominators.push(b.denom().clone());
        }
    }
    for (loc, _) in &d.terms {
        if let Location::Cycle(p) = loc {
            denominators.push(arc_of(p.cycle, &p.xi).denom().clone());
        }
    }
    let mut scale = BigInt::from(1);
    for den in denominators {
        scale = scale.lcm(&den);
    }
    scale *= BigInt::from(extra.max(1));
    // Units per cycle; pad the scale until the shortest cycle has >= 3.
    let units = |scale: &BigInt| -> Vec<i64> {
        cycles
            .iter()
            .map(|c| {
                i64::try_from((&c.total * Rat::from_bigint(scale.clone())).to_bigint().unwrap())
                    .expect("scaled length fits in i64")
            })
            .collect()
    };
    let min_units = units(&scale).into_iter().min().unwrap();
    if min_units < 3 {
        scale *= BigInt::from((3 + min_units - 1) / min_units);
    }
    let n_units = units(&scale);

    let to_scaled = |len: &Rat| -> i64 {
        i64::try_from((len * Rat::from_bigint(scale.clone())).to_bigint().unwrap())
            .expect("scaled length fits in i64")
    };

    // Provisional ids: per-cycle rings, then bridge-path interiors.
    let mut base = Vec::with_capacity(g);
    let mut total_vertices = 0usize;
    for &u in &n_units {
        base.push(total_vertices);
        total_vertices += u as usize;
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, &u) in n_units.iter().enumerate() {
        for s in 0..u as usize {
            edges.push((base[i] + s, base[i] + (s + 1) % u as usize));
        }
    }

    // Union-find for contracted joints.
    let mut parent: Vec<usize> = (0..total_vertices).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let r = find(parent, parent[v]);
            parent[v] = r;
        }
        parent[v]
    }

    // v_{i+1} sits total - cw clockwise from w_{i+1}.
    let v_vertex = |i: usize| -> usize {
        let geom = &cycles[i];
        let arc = to_scaled(&(&geom.total - &geom.cw));
        base[i] + arc as usize
    };
    for i in 0..g - 1 {
        let w = base[i];
        let v = v_vertex(i + 1);
        let bridge_len = bridges.as_ref().map(|bs| to_scaled(&bs[i])).unwrap_or(0);
        if bridge_len == 0 {
            let (rw, rv) = (find(&mut parent, w), find(&mut parent, v));
            if rw != rv {
                parent[rw] = rv;
            }
        } else {
            let mut prev = w;
            for _ in 0..bridge_len - 1 {
                edges.push((prev, total_vertices));
                prev = total_vertices;
                total_vertices += 1;
                parent.push(total_vertices - 1);
            }
            edges.push((prev, v));
        }
    }

    // Compact ids.
    let mut remap = vec![usize::MAX; total_vertices];
    let mut n = 0usize;
    for v in 0..total_vertices {
        let r = find(&mut parent, v);
        if remap[r] == usize::MAX {
            remap[r] = n;
            n += 1;
        }
        remap[v] = remap[r];
    }

    let mut count: HashMap<(usize, usize), i64> = HashMap::new();
    for (a, b) in &edges {
        let (x, y) = (remap[*a], remap[*b]);
        let key = if x <= y { (x, y) } else { (y, x) };
        *count.entry(key).or_insert(0) += 1;
    }
    let mut adj = vec![Vec::new(); n];
    let mut deg = vec![0i64; n];
    for (&(a, b), &k) in &count {
        adj[a].push((b, k));
        deg[a] += k;
        if a != b {
            adj[b].push((a, k));
            deg[b] += k;
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }

    let cycle_vertex: Vec<Vec<usize>> = (0..g)
        .map(|i| (0..n_units[i] as usize).map(|s| remap[base[i] + s]).collect())
        .collect();
    let q = cycle_vertex[g - 1][0];

    let graph = FiniteGraph {
        n,
        q,
        adj,
        deg,
        edge_count: edges.len(),
        cycle_vertex,
        scale: scale.clone(),
    };

    let mut chips = vec![0i64; n];
    for (loc, mult) in &d.terms {
        let v = match loc {
            Location::Cycle(p) => {
                let arc = arc_of(p.cycle, &p.xi) * Rat::from_bigint(scale.clone());
                let s = i64::try_from(arc.to_bigint().expect("scale clears the denominator"))
                    .expect("scaled arc fits in i64") as usize;
                graph.vertex_on_cycle(p.cycle, s)
            }
            Location::Bridge(b) => graph.vertex_on_cycle(*b, 0),
        };
        chips[v] += mult;
    }
    chips[q] += d.wg;

    Ok((graph, ChipConfig(chips)))
}

/// One rank comparison: the partition pipeline against the chip-firing
/// pipeline, with the inputs echoed for reproduction.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub divisor: ChainDivisor,
    pub degree: i64,
    pub rank_wp: i64,
    pub rank_oracle: i64,
    #[serde(rename = "match")]
    pub matched: bool,
}

pub fn cross_check(spec: &ChainSpec, d: &ChainDivisor) -> Result<CrossCheckReport> {
    let rank_wp = divisors::rank(spec, d)?;
    let (graph, chips) = to_finite_graph(spec, d)?;
    let rank_oracle = graph.bn_rank(&chips);
    Ok(CrossCheckReport {
        seed: None,
        divisor: d.clone(),
        degree: d.degree(),
        rank_wp,
        rank_oracle,
        matched: rank_wp == rank_oracle,
    })
}
