//! Brute-force ground truth: orbit enumeration over all `2ⁿ` states, shortest
//! move sequences, group orders by matrix closure, and the exhaustive check of
//! the closed-form classifier against all of it.
//!
//! States are integers with bit `i` holding the state of `s_{i+1}`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use crate::basis::{basis_checks, BasisChecks};
use crate::classify::{Classifier, Clause};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::forms::{self, FormsReport};
use crate::graph::GraphSpec;

pub const DEFAULT_CAP: usize = 20;
pub const DEFAULT_GROUP_MAX_N: usize = 5;
pub const DEFAULT_GROUP_CAP: usize = 100_000_000;
/// Matrices are packed into one `u64`, so closure needs `n² <= 64`.
pub const GROUP_HARD_MAX_N: usize = 8;

const UNSEEN: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for state-space enumeration.
    pub max_n: usize,
    /// Largest `n` for group closure.
    pub group_max_n: usize,
    /// Largest group closure, in elements.
    pub group_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_CAP,
            group_max_n: DEFAULT_GROUP_MAX_N,
            group_elements: DEFAULT_GROUP_CAP,
        }
    }
}

impl Limits {
    pub fn with_max_n(max_n: usize) -> Self {
        Self {
            max_n,
            ..Self::default()
        }
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        // u32 states with UNSEEN reserved
        let cap = self.max_n.min(31);
        if n > cap {
            Err(Error::CapExceeded { n, cap })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Smallest state in the block.
    pub representative: u32,
    pub size: usize,
    /// Smallest Hamming weight in the block.
    pub min_weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    n: usize,
    block_of: Vec<u32>,
    blocks: Vec<Block>,
}

impl OrbitPartition {
    /// Closure of every state under `step(state, generator)`. Blocks are
    /// numbered by increasing representative.
    pub fn from_step(n: usize, generators: &[usize], step: impl Fn(u32, usize) -> u32) -> Self {
        let total = 1usize << n;
        let mut block_of = vec![UNSEEN; total];
        let mut blocks = Vec::new();
        let mut stack = Vec::new();
        for start in 0..total as u32 {
            if block_of[start as usize] != UNSEEN {
                continue;
            }
            let id = blocks.len() as u32;
            block_of[start as usize] = id;
            stack.push(start);
            let (mut size, mut min_weight) = (0usize, u32::MAX);
            while let Some(x) = stack.pop() {
                size += 1;
                min_weight = min_weight.min(x.count_ones());
                for &v in generators {
                    let y = step(x, v);
                    if block_of[y as usize] == UNSEEN {
                        block_of[y as usize] = id;
                        stack.push(y);
                    }
                }
            }
            blocks.push(Block {
                representative: start,
                size,
                min_weight,
            });
        }
        Self {
            n,
            block_of,
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, state: u32) -> usize {
        self.block_of[state as usize] as usize
    }

    /// Largest block minimum weight, ignoring the zero block.
    pub fn max_min_weight(&self) -> u32 {
        self.blocks.iter().skip(1).map(|b| b.min_weight).max().unwrap_or(0)
    }

    /// Block sizes, sorted.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(|b| b.size).collect();
        s.sort_unstable();
        s
    }

    /// True when `key` takes equal values exactly on states sharing a block.
    pub fn matches_keys<K: Eq + Hash>(&self, key: impl Fn(u32) -> K) -> bool {
        let mut block_for_key: HashMap<K, u32> = HashMap::new();
        let mut key_seen_for_block = vec![false; self.blocks.len()];
        for state in 0..self.block_of.len() as u32 {
            let b = self.block_of[state as usize];
            match block_for_key.entry(key(state)) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != b {
                        return false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    if key_seen_for_block[b as usize] {
                        return false;
                    }
                    key_seen_for_block[b as usize] = true;
                    e.insert(b);
                }
            }
        }
        true
    }
}

fn word_masks(g: &GraphSpec) -> Vec<u32> {
    g.word_masks()
        .expect("n checked against the cap")
        .into_iter()
        .map(|m| m as u32)
        .collect()
}

fn to_state(u: &Config) -> u32 {
    u.to_u64().expect("n checked against the cap") as u32
}

/// Orbit partition under legal moves at the given vertices (all vertices when
/// `generators` is `None`).
pub fn bfs_partition(g: &GraphSpec, generators: Option<&[usize]>, limits: &Limits) -> Result<OrbitPartition> {
    let n = g.n();
    limits.check(n)?;
    let all: Vec<usize> = (1..=n).collect();
    let gens = generators.unwrap_or(&all);
    if let Some(&bad) = gens.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    let masks = word_masks(g);
    Ok(OrbitPartition::from_step(n, gens, |x, v| {
        if x >> (v - 1) & 1 == 1 {
            x ^ masks[v - 1]
        } else {
            x
        }
    }))
}

/// A sequence of vertices to select, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Witness {
    pub moves: Vec<usize>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Plays the moves strictly from `u`.
    pub fn replay(&self, g: &GraphSpec, u: &Config) -> Result<Config> {
        self.moves
            .iter()
            .try_fold(u.clone(), |cur, &v| g.apply_move(&cur, v, true))
    }
}

/// A shortest legal move sequence from `u` to `v`, or `None` when they lie in
/// different orbits.
pub fn find_witness(g: &GraphSpec, u: &Config, v: &Config, limits: &Limits) -> Result<Option<Witness>> {
    let n = g.n();
    limits.check(n)?;
    g.check_config(u)?;
    g.check_config(v)?;
    let masks = word_masks(g);
    let (start, goal) = (to_state(u), to_state(v));
    let mut parent = vec![UNSEEN; 1 << n];
    let mut via = vec![0u8; 1 << n];
    parent[start as usize] = start;
    let mut queue = VecDeque::from([start]);
    let mut found = start == goal;
    while let Some(x) = queue.pop_front() {
        if found {
            break;
        }
        for vtx in 1..=n {
            if x >> (vtx - 1) & 1 == 0 {
                continue;
            }
            let y = x ^ masks[vtx - 1];
            if parent[y as usize] == UNSEEN {
                parent[y as usize] = x;
                via[y as usize] = vtx as u8;
                if y == goal {
                    found = true;
                    break;
                }
                queue.push_back(y);
            }
        }
    }
    if !found {
        return Ok(None);
    }
    let mut moves = Vec::new();
    let mut cur = goal;
    while cur != start {
        moves.push(via[cur as usize] as usize);
        cur = parent[cur as usize];
    }
    moves.reverse();
    let witness = Witness { moves };
    let end = witness.replay(g, u).expect("witness move is illegal");
    assert_eq!(&end, v, "witness does not reach the target");
    Ok(Some(witness))
}

/// BFS distance from `u` to every state; `None` where unreachable.
pub fn bfs_distances(g: &GraphSpec, u: &Config, limits: &Limits) -> Result<Vec<Option<u32>>> {
    let n = g.n();
    limits.check(n)?;
    g.check_config(u)?;
    let masks = word_masks(g);
    let mut dist = vec![None; 1 << n];
    let start = to_state(u);
    dist[start as usize] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize].unwrap();
        for vtx in 1..=n {
            if x >> (vtx - 1) & 1 == 1 {
                let y = x ^ masks[vtx - 1];
                if dist[y as usize].is_none() {
                    dist[y as usize] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(dist)
}

/// `|W|` by closing the move matrices under left multiplication.
pub fn group_order(g: &GraphSpec, limits: &Limits) -> Result<u64> {
    let n = g.n();
    let cap = limits.group_max_n.min(GROUP_HARD_MAX_N);
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let masks: Vec<u64> = g.word_masks().expect("n <= 8");
    let col_mask = (1u64 << n) - 1;
    // column c occupies bits [c·n, c·n + n)
    let identity: u64 = (0..n).map(|c| 1u64 << (c * n + c)).sum();
    let left_mul = |m: u64, v: usize| -> u64 {
        let mut out = 0;
        for c in 0..n {
            let mut col = (m >> (c * n)) & col_mask;
            if col >> (v - 1) & 1 == 1 {
                col ^= masks[v - 1];
            }
            out |= col << (c * n);
        }
        out
    };
    let mut seen = HashSet::from([identity]);
    let mut frontier = vec![identity];
    while let Some(m) = frontier.pop() {
        for v in 1..=n {
            let next = left_mul(m, v);
            if seen.insert(next) {
                if seen.len() > limits.group_elements {
                    return Err(Error::GroupCapExceeded(limits.group_elements));
                }
                frontier.push(next);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Comparison of the classifier against brute force on one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub n: usize,
    pub attach: Vec<usize>,
    pub pi1_size: usize,
    pub clause: Clause,
    pub predicted_orbit_count: usize,
    pub table_orbit_count: usize,
    pub oracle_orbit_count: usize,
    #[serde(rename = "predicted_M")]
    pub predicted_m: u32,
    #[serde(rename = "oracle_M")]
    pub oracle_m: u32,
    pub partition_match: bool,
    pub sizes_match: bool,
    pub min_weights_match: bool,
    pub subgroup_partition_match: bool,
    pub basis: BasisChecks,
    pub forms: FormsReport,
}

impl GraphReport {
    pub fn passed(&self) -> bool {
        self.partition_match
            && self.sizes_match
            && self.min_weights_match
            && self.subgroup_partition_match
            && self.predicted_orbit_count == self.oracle_orbit_count
            && self.table_orbit_count == self.oracle_orbit_count
            && self.predicted_m == self.oracle_m
            && self.basis.all()
            && self.forms.passed()
    }
}

/// Runs every check on `g`.
pub fn verify_graph(g: &GraphSpec, limits: &Limits) -> Result<GraphReport> {
    let n = g.n();
    limits.check(n)?;
    let cls = Classifier::new(g)?;
    let partition = bfs_partition(g, None, limits)?;
    let table = cls.orbit_table();

    let labels: Vec<_> = (0..1u32 << n)
        .map(|s| cls.classify(&Config::from_u64(n, s as u64)))
        .collect();
    let partition_match = partition.matches_keys(|s| labels[s as usize].clone());

    let mut sizes_match = table.orbit_count == partition.len();
    let mut min_weights_match = sizes_match;
    if partition_match {
        let block_for: HashMap<_, _> = (0..1u32 << n)
            .map(|s| (&labels[s as usize], partition.block_of(s)))
            .collect();
        for entry in &table.orbits {
            match block_for.get(&entry.label) {
                Some(&b) => {
                    let block = &partition.blocks()[b];
                    sizes_match &= entry.size == block.size.into();
                    min_weights_match &= entry.min_weight == block.min_weight;
                }
                None => {
                    sizes_match = false;
                    min_weights_match = false;
                }
            }
        }
    } else {
        sizes_match = false;
        min_weights_match = false;
    }

    let path_moves: Vec<usize> = (1..n).collect();
    let sub = bfs_partition(g, Some(&path_moves), limits)?;
    let subgroup_partition_match =
        sub.matches_keys(|s| cls.path_subgroup_key(&Config::from_u64(n, s as u64)));

    Ok(GraphReport {
        n,
        attach: g.attach().to_vec(),
        pi1_size: cls.pi().pi1_size(),
        clause: cls.clause(),
        predicted_orbit_count: table.orbit_count,
        table_orbit_count: cls.orbit_count(),
        oracle_orbit_count: partition.len(),
        predicted_m: table.max_orbit_weight,
        oracle_m: partition.max_min_weight(),
        partition_match,
        sizes_match,
        min_weights_match,
        subgroup_partition_match,
        basis: basis_checks(g),
        forms: forms::forms_report(g, &partition, limits)?,
    })
}

/// Every graph with `2 <= n <= n_max`, one per nonempty attachment set.
pub fn all_graphs(n_max: usize) -> Vec<GraphSpec> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for subset in 1u64..1 << (n - 1) {
            let attach: Vec<usize> = (1..n).filter(|j| subset >> (j - 1) & 1 == 1).collect();
            out.push(GraphSpec::new(n, &attach).expect("enumerated graphs are valid"));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub graphs: usize,
    pub failures: usize,
    pub failed: Vec<GraphReport>,
    #[serde(skip)]
    pub reports: Vec<GraphReport>,
}

/// [`verify_graph`] over [`all_graphs`], on `jobs` worker threads.
pub fn sweep(n_max: usize, jobs: usize, limits: &Limits) -> Result<SweepReport> {
    use rayon::prelude::*;
    limits.check(n_max)?;
    let graphs = all_graphs(n_max);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let reports: Vec<GraphReport> = pool.install(|| {
        graphs
            .par_iter()
            .map(|g| verify_graph(g, limits))
            .collect::<Result<_>>()
    })?;
    let failed: Vec<GraphReport> = reports.iter().filter(|r| !r.passed()).cloned().collect();
    Ok(SweepReport {
        graphs: reports.len(),
        failures: failed.len(),
        failed,
        reports,
    })
}
