//! Closed-form orbit classification.
//!
//! Every orbit is a set of configurations with prescribed simple weights, on
//! one side of the split `F₂ⁿ = U ∪ Ū` when `|Π₁|` is even. An orbit is
//! labelled by that side together with its set of simple weights, so two
//! configurations are equivalent exactly when their labels are equal.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::basis::{Parity, PiSystem, SimpleBasis, WeightIndexSets};
use crate::config::Config;
use crate::error::Result;
use crate::graph::GraphSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    /// `|Π₁|` odd: `U` is the whole space.
    #[serde(rename = "WHOLE")]
    Whole,
    #[serde(rename = "U")]
    U,
    #[serde(rename = "UBAR")]
    UBar,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Whole => "WHOLE",
            Side::U => "U",
            Side::UBar => "UBAR",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitLabel {
    pub side: Side,
    /// Sorted simple weights occupied by the orbit.
    pub weights: Vec<usize>,
}

impl OrbitLabel {
    pub fn is_trivial(&self) -> bool {
        self.weights == [0]
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "{}{{{}}}", self.side, w.join(","))
    }
}

/// Which orbit theorem governs a given `(n, |Π₁|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Pi1One,
    Pi1Two,
    Pi1NMinusOne,
    Pi1NMinusTwo,
    Generic,
}

/// All clauses whose hypotheses hold, in dispatch order `1, 2, n−1, n−2,
/// generic`. Never empty for a valid graph.
pub fn applicable_clauses(n: usize, pi1_size: usize) -> Vec<Clause> {
    let q = pi1_size;
    let mut out = Vec::new();
    let odd = q % 2 == 1;
    if odd && q == 1 {
        out.push(Clause::Pi1One);
    }
    if !odd && q == 2 {
        out.push(Clause::Pi1Two);
    }
    if q + 1 == n {
        out.push(Clause::Pi1NMinusOne);
    }
    if q + 2 == n {
        out.push(Clause::Pi1NMinusTwo);
    }
    let lower = if odd { 3 } else { 4 };
    if q >= lower && q + 3 <= n {
        out.push(Clause::Generic);
    }
    out
}

/// One nontrivial orbit: a side and the simple weights it occupies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightClass {
    pub side: Side,
    pub weights: BTreeSet<usize>,
}

/// Feasible simple weights of nonzero vectors on `side`.
fn feasible(side: Side, n: usize) -> (i64, i64) {
    match side {
        Side::Whole | Side::UBar => (1, n as i64),
        Side::U => (1, n as i64 - 1),
    }
}

struct ClassBuilder {
    n: usize,
    out: Vec<WeightClass>,
}

impl ClassBuilder {
    fn push(&mut self, side: Side, weights: impl IntoIterator<Item = i64>) {
        let (lo, hi) = feasible(side, self.n);
        let weights: BTreeSet<usize> = weights
            .into_iter()
            .filter(|w| (lo..=hi).contains(w))
            .map(|w| w as usize)
            .collect();
        let class = WeightClass { side, weights };
        if !class.weights.is_empty() && !self.out.contains(&class) {
            self.out.push(class);
        }
    }

    /// `{ j in [lo, hi] : j ≡ r (mod 4) for some r in residues }`.
    fn push_mod4(&mut self, side: Side, residues: &[i64]) {
        let (lo, hi) = feasible(side, self.n);
        let rs: Vec<i64> = residues.iter().map(|r| r.rem_euclid(4)).collect();
        self.push(side, (lo..=hi).filter(|j| rs.contains(&j.rem_euclid(4))));
    }

    fn push_odd(&mut self, side: Side) {
        let (lo, hi) = feasible(side, self.n);
        self.push(side, (lo..=hi).filter(|j| j % 2 == 1));
    }
}

/// The nontrivial orbits stated by `clause`, clipped to feasible weights,
/// with empty and repeated classes dropped, sorted by side then weights.
pub fn theorem_classes(n: usize, pi1_size: usize, clause: Clause) -> Vec<WeightClass> {
    let mut b = ClassBuilder { n, out: Vec::new() };
    let (ni, q) = (n as i64, pi1_size as i64);
    let ceil = |a: i64, d: i64| (a + d - 1).div_euclid(d);
    match (Parity::of(pi1_size), clause) {
        (Parity::Odd, Clause::Pi1One) => {
            for i in 1..=ceil(ni, 2) {
                b.push(Side::Whole, [i, ni + 1 - i]);
            }
        }
        (Parity::Odd, Clause::Pi1NMinusTwo) => {
            b.push_odd(Side::Whole);
            for j in 1..=(ni - 1) / 2 {
                b.push(Side::Whole, [2 * j]);
            }
        }
        (Parity::Odd, Clause::Pi1NMinusOne) => {
            for i in 1..=ceil(ni, 2) {
                b.push(Side::Whole, [2 * i - 1, 2 * i]);
            }
        }
        (Parity::Odd, Clause::Generic) => {
            for i in 1..=4 {
                b.push_mod4(Side::Whole, &[i, ni + q - i]);
            }
        }
        (Parity::Even, Clause::Pi1Two) => {
            for i in 1..=ni / 2 {
                b.push(Side::U, [i, ni - i]);
            }
            for i in 1..=2 {
                b.push_mod4(Side::UBar, &c_residues(ni, q, i));
            }
        }
        (Parity::Even, Clause::Pi1NMinusTwo) => {
            b.push_odd(Side::U);
            for j in 1..=ceil(ni - 2, 4) {
                b.push(Side::U, [2 * j, ni - 2 * j]);
            }
            b.push_odd(Side::UBar);
            for t in 1..=ceil(ni, 4) {
                b.push(Side::UBar, [2 * t, ni + 2 - 2 * t]);
            }
        }
        (Parity::Even, Clause::Pi1NMinusOne) => {
            for j in 1..=ceil(ni - 2, 4) {
                b.push(Side::U, [2 * j - 1, 2 * j, ni - 2 * j, ni + 1 - 2 * j]);
            }
            for t in 1..=ceil(ni, 4) {
                b.push(Side::UBar, [2 * t - 1, 2 * t, ni + 2 - 2 * t, ni + 3 - 2 * t]);
            }
        }
        (Parity::Even, Clause::Generic) => {
            for i in 1..=4 {
                b.push_mod4(Side::U, &[i, i + q - 2, ni - i, ni - i + q - 2]);
            }
            for i in 1..=4 {
                b.push_mod4(Side::UBar, &c_residues(ni, q, i));
            }
        }
        (parity, clause) => unreachable!("{clause:?} does not apply to {parity:?} |Π₁|"),
    }
    let mut classes = b.out;
    classes.sort();
    classes
}

fn c_residues(n: i64, q: i64, i: i64) -> [i64; 4] {
    [i, i + q, n + 2 - i, n + 2 - i + q]
}

/// True when every feasible nonzero weight on every side lies in exactly one
/// class.
pub fn classes_partition_weights(n: usize, parity: Parity, classes: &[WeightClass]) -> bool {
    let sides: &[Side] = match parity {
        Parity::Odd => &[Side::Whole],
        Parity::Even => &[Side::U, Side::UBar],
    };
    if classes.iter().any(|c| !sides.contains(&c.side)) {
        return false;
    }
    sides.iter().all(|&side| {
        let (lo, hi) = feasible(side, n);
        (lo..=hi).all(|w| {
            classes
                .iter()
                .filter(|c| c.side == side && c.weights.contains(&(w as usize)))
                .count()
                == 1
        })
    })
}

/// `|P|` from the summary table, by `(|Π₁|, n)` row.
pub fn table_orbit_count(n: usize, pi1_size: usize) -> usize {
    let q = pi1_size;
    let n_even = n.is_multiple_of(2);
    let clause = applicable_clauses(n, q)[0];
    match (Parity::of(q), clause) {
        (Parity::Odd, Clause::Pi1One) => (n + 2).div_ceil(2),
        (Parity::Odd, Clause::Pi1NMinusTwo) => (n + 3) / 2,
        (Parity::Odd, Clause::Pi1NMinusOne) => (n + 2) / 2,
        (Parity::Odd, _) => {
            if n_even {
                3
            } else {
                4
            }
        }
        (Parity::Even, Clause::Pi1Two) => {
            if n_even {
                (n + 6) / 2
            } else {
                (n + 3) / 2
            }
        }
        (Parity::Even, Clause::Pi1NMinusTwo) => (n + 6) / 2,
        (Parity::Even, Clause::Pi1NMinusOne) => (n + 3) / 2,
        (Parity::Even, _) => {
            if n_even {
                6
            } else {
                4
            }
        }
    }
}

/// Orbit classifier for one graph. Construction is `O(n³/64)`; each query is
/// one change of basis plus a table lookup.
#[derive(Clone, Debug)]
pub struct Classifier {
    graph: GraphSpec,
    pi: PiSystem,
    basis: SimpleBasis,
    index_sets: WeightIndexSets,
    clause: Clause,
    classes: Vec<WeightClass>,
    /// Weight → class index, for `Whole`/`U` and for `UBar`.
    lookup: [Vec<Option<usize>>; 2],
}

impl Classifier {
    pub fn new(g: &GraphSpec) -> Result<Self> {
        let n = g.n();
        let pi = PiSystem::new(g);
        let basis = SimpleBasis::new(&pi)?;
        let index_sets = WeightIndexSets::new(&pi);
        let q = pi.pi1_size();
        let clauses = applicable_clauses(n, q);
        let clause = clauses[0];
        let classes = theorem_classes(n, q, clause);
        if cfg!(debug_assertions) {
            for &other in &clauses[1..] {
                assert_eq!(
                    classes,
                    theorem_classes(n, q, other),
                    "{clause:?} and {other:?} disagree on {g}"
                );
            }
            assert!(
                classes_partition_weights(n, pi.parity(), &classes),
                "weight classes do not partition the weights of {g}"
            );
        }
        let mut lookup = [vec![None; n + 1], vec![None; n + 1]];
        for (idx, c) in classes.iter().enumerate() {
            let table = &mut lookup[usize::from(c.side == Side::UBar)];
            for &w in &c.weights {
                table[w] = Some(idx);
            }
        }
        Ok(Self {
            graph: g.clone(),
            pi,
            basis,
            index_sets,
            clause,
            classes,
            lookup,
        })
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn pi(&self) -> &PiSystem {
        &self.pi
    }

    pub fn basis(&self) -> &SimpleBasis {
        &self.basis
    }

    pub fn index_sets(&self) -> &WeightIndexSets {
        &self.index_sets
    }

    pub fn clause(&self) -> Clause {
        self.clause
    }

    pub fn classes(&self) -> &[WeightClass] {
        &self.classes
    }

    fn home_side(&self) -> Side {
        match self.pi.parity() {
            Parity::Odd => Side::Whole,
            Parity::Even => Side::U,
        }
    }

    pub fn trivial_label(&self) -> OrbitLabel {
        OrbitLabel {
            side: self.home_side(),
            weights: vec![0],
        }
    }

    /// Side and simple weight of `u`.
    pub fn side_and_weight(&self, u: &Config) -> (Side, usize) {
        let coords = self.basis.simple_coords(u);
        let side = if self.basis.in_u_coords(&coords) {
            self.home_side()
        } else {
            Side::UBar
        };
        (side, coords.count_ones())
    }

    /// Orbit label of `u`. Panics if `u` has the wrong length; see
    /// [`Classifier::classify_checked`].
    pub fn classify(&self, u: &Config) -> OrbitLabel {
        assert_eq!(u.len(), self.graph.n(), "configuration length");
        let (side, sw) = self.side_and_weight(u);
        if sw == 0 {
            return self.trivial_label();
        }
        let idx = self.lookup[usize::from(side == Side::UBar)][sw]
            .unwrap_or_else(|| panic!("no class holds weight {sw} on {side} for {}", self.graph));
        OrbitLabel {
            side,
            weights: self.classes[idx].weights.iter().copied().collect(),
        }
    }

    pub fn classify_checked(&self, u: &Config) -> Result<OrbitLabel> {
        self.graph.check_config(u)?;
        Ok(self.classify(u))
    }

    pub fn reachable(&self, u: &Config, v: &Config) -> Result<bool> {
        Ok(self.classify_checked(u)? == self.classify_checked(v)?)
    }

    /// Label of the `W_P`-orbit of `u`, where `W_P` is generated by the path
    /// moves only: the simple weight in the odd case, and the unordered pair
    /// `{sw, n − sw}` on `U` or `{sw, n + 2 − sw}` on `Ū` in the even case.
    pub fn path_subgroup_key(&self, u: &Config) -> (Side, usize) {
        let n = self.graph.n();
        let (side, sw) = self.side_and_weight(u);
        let key = match side {
            Side::Whole => sw,
            Side::U => sw.min(n - sw),
            Side::UBar => sw.min(n + 2 - sw),
        };
        (side, key)
    }

    /// Minimum Hamming weight over the orbit with label `label`.
    pub fn min_weight(&self, label: &OrbitLabel) -> u32 {
        if label.is_trivial() {
            return 0;
        }
        let hits = |w: &usize| match label.side {
            Side::UBar => self.index_sets.contains_j(*w),
            _ => self.index_sets.contains_i(*w),
        };
        if label.weights.iter().any(hits) {
            1
        } else {
            2
        }
    }

    /// Number of configurations in the orbit with label `label`.
    pub fn orbit_size(&self, label: &OrbitLabel) -> BigUint {
        let n = self.graph.n();
        let row = binomial_row(match self.pi.parity() {
            Parity::Odd => n,
            Parity::Even => n - 1,
        });
        label
            .weights
            .iter()
            .map(|&t| match label.side {
                Side::UBar => row[t - 1].clone(),
                _ => row.get(t).cloned().unwrap_or_default(),
            })
            .sum()
    }

    pub fn orbit_table(&self) -> OrbitTable {
        let mut labels = vec![self.trivial_label()];
        labels.extend(self.classes.iter().map(|c| OrbitLabel {
            side: c.side,
            weights: c.weights.iter().copied().collect(),
        }));
        labels.sort();
        let orbits: Vec<OrbitEntry> = labels
            .into_iter()
            .map(|label| OrbitEntry {
                size: self.orbit_size(&label),
                min_weight: self.min_weight(&label),
                label,
            })
            .collect();
        let max_orbit_weight = orbits.iter().map(|o| o.min_weight).max().unwrap_or(0);
        OrbitTable {
            orbit_count: orbits.len(),
            max_orbit_weight,
            orbits,
        }
    }

    /// `|P|` from the summary table.
    pub fn orbit_count(&self) -> usize {
        table_orbit_count(self.graph.n(), self.pi.pi1_size())
    }

    /// `M(S)`.
    pub fn max_orbit_weight(&self) -> u32 {
        self.orbit_table().max_orbit_weight
    }
}

fn binomial_row(m: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(m + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for t in 1..=m {
        c = c * BigUint::from(m - t + 1) / BigUint::from(t);
        row.push(c.clone());
    }
    row
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitEntry {
    #[serde(flatten)]
    pub label: OrbitLabel,
    #[serde(serialize_with = "serialize_big")]
    pub size: BigUint,
    pub min_weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitTable {
    pub orbits: Vec<OrbitEntry>,
    pub orbit_count: usize,
    pub max_orbit_weight: u32,
}

/// JSON number when it fits in a `u64`, decimal string otherwise.
fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.collect_str(v),
    }
}
