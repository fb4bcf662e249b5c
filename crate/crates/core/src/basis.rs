//! The vectors `1̄ … n̄` obtained by walking `s̃_1` down the path, their
//! split into Π₀/Π₁ by the dot product with `s̃_n`, and the simple basis Δ.
//!
//! `ī` is stored at index `i - 1`. Δ uses the same indices, except that in
//! the even case slot `n` holds `s̃_n` (written `n+1̄`) instead of `n̄`.

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::graph::GraphSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(x: usize) -> Self {
        if x % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiSystem {
    n: usize,
    pi: Vec<Config>,
    /// Bit `i - 1` set iff `ī ∈ Π₁`.
    pi1: Config,
    /// `prefix[i] = |[ī] ∩ Π₁|`, with `prefix[0] = 0`.
    prefix: Vec<usize>,
}

impl PiSystem {
    /// Closed-form construction, cross-checked against the recursive one in
    /// debug builds.
    pub fn new(g: &GraphSpec) -> Self {
        let p = Self::closed(g);
        debug_assert_eq!(p, Self::recursive(g), "closed and recursive Π differ for {g}");
        debug_assert_eq!(p.pi1, pi1_by_intervals(g));
        debug_assert_eq!(p.pi1_size(), pi1_size_formula(g));
        p
    }

    /// `1̄ = s̃_1` and `i+1‾ = s_i ī`.
    pub fn recursive(g: &GraphSpec) -> Self {
        let n = g.n();
        let mut pi = Vec::with_capacity(n);
        let mut cur = Config::unit(n, 1);
        pi.push(cur.clone());
        for i in 1..n {
            g.feign(&mut cur, i);
            pi.push(cur.clone());
        }
        let mut pi1 = Config::zeros(n);
        let sn = Config::unit(n, n);
        for (i, v) in pi.iter().enumerate() {
            pi1.set(i, v.dot(&sn));
        }
        Self::from_parts(n, pi, pi1)
    }

    /// `ī = s̃_{i-1} + s̃_i (+ s̃_n)` for `i < n` and `n̄ = s̃_{n-1} (+ s̃_n)`,
    /// with `s̃_n` present exactly on Π₁ and `s̃_0 = 0`.
    pub fn closed(g: &GraphSpec) -> Self {
        let n = g.n();
        let pi1 = pi1_by_intervals(g);
        let pi = (1..=n)
            .map(|i| {
                let mut v = Config::zeros(n);
                // s̃_0 = 0
                if i >= 2 {
                    v.set(i - 2, true);
                }
                if i < n {
                    v.set(i - 1, true);
                }
                if pi1.get(i - 1) {
                    v.set(n - 1, true);
                }
                v
            })
            .collect();
        Self::from_parts(n, pi, pi1)
    }

    fn from_parts(n: usize, pi: Vec<Config>, pi1: Config) -> Self {
        let mut prefix = vec![0; n + 1];
        for i in 1..=n {
            prefix[i] = prefix[i - 1] + usize::from(pi1.get(i - 1));
        }
        Self { n, pi, pi1, prefix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ī` for `1 <= i <= n`.
    pub fn vector(&self, i: usize) -> &Config {
        &self.pi[i - 1]
    }

    pub fn vectors(&self) -> &[Config] {
        &self.pi
    }

    pub fn in_pi1(&self, i: usize) -> bool {
        self.pi1.get(i - 1)
    }

    pub fn pi1_mask(&self) -> &Config {
        &self.pi1
    }

    pub fn pi1_size(&self) -> usize {
        self.prefix[self.n]
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.pi1_size())
    }

    /// `|[ī] ∩ Π₁|`.
    pub fn prefix_pi1(&self, i: usize) -> usize {
        self.prefix[i]
    }

    pub fn pi0_indices(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| !self.in_pi1(i)).collect()
    }

    pub fn pi1_indices(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.in_pi1(i)).collect()
    }
}

/// Π₁ membership from the interval description: `ī ∈ Π₁` iff `i` lies in
/// `(j_1, j_2] ∪ (j_3, j_4] ∪ …`, where `j_t = n` past the end of `attach`.
pub fn pi1_by_intervals(g: &GraphSpec) -> Config {
    let n = g.n();
    let mut mask = Config::zeros(n);
    for (lo, hi) in attach_intervals(g) {
        for i in lo + 1..=hi {
            mask.set(i - 1, true);
        }
    }
    mask
}

/// `|Π₁| = Σ_k (j_{2k} − j_{2k−1})`.
pub fn pi1_size_formula(g: &GraphSpec) -> usize {
    attach_intervals(g).map(|(lo, hi)| hi - lo).sum()
}

fn attach_intervals(g: &GraphSpec) -> impl Iterator<Item = (usize, usize)> + '_ {
    let j = g.attach();
    j.chunks(2).map(move |c| (c[0], c.get(1).copied().unwrap_or(g.n())))
}

/// The simple basis Δ and the change of coordinates into it.
#[derive(Clone, Debug)]
pub struct SimpleBasis {
    n: usize,
    parity: Parity,
    delta: Vec<Config>,
    to_simple: BitMatrix,
    /// Δ slots holding an element of Π₁.
    pi1_slots: Config,
}

impl SimpleBasis {
    pub fn new(p: &PiSystem) -> Result<Self> {
        let n = p.n();
        let parity = p.parity();
        let mut delta = p.vectors().to_vec();
        let mut pi1_slots = p.pi1_mask().clone();
        if parity == Parity::Even {
            delta[n - 1] = Config::unit(n, n);
            pi1_slots.set(n - 1, false);
        }
        let from_simple = BitMatrix::from_columns(&delta);
        let to_simple = from_simple.inverse().ok_or_else(|| Error::InternalRankError {
            rank: from_simple.rank(),
            n,
        })?;
        Ok(Self {
            n,
            parity,
            delta,
            to_simple,
            pi1_slots,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn vectors(&self) -> &[Config] {
        &self.delta
    }

    /// Label of Δ slot `slot` (1-based): `i` for `ī`, or `n + 1` for `s̃_n`.
    pub fn label(&self, slot: usize) -> usize {
        if self.parity == Parity::Even && slot == self.n {
            self.n + 1
        } else {
            slot
        }
    }

    /// `Δ(u)` as a mask over Δ slots.
    pub fn simple_coords(&self, u: &Config) -> Config {
        self.to_simple.mul_vec(u)
    }

    /// `Δ(u)` as sorted labels (see [`SimpleBasis::label`]).
    pub fn simple_labels(&self, u: &Config) -> Vec<usize> {
        self.simple_coords(u).ones().map(|s| self.label(s + 1)).collect()
    }

    /// `sw(u) = |Δ(u)|`.
    pub fn simple_weight(&self, u: &Config) -> usize {
        self.simple_coords(u).count_ones()
    }

    pub fn combine(&self, coords: &Config) -> Config {
        let mut u = Config::zeros(self.n);
        for s in coords.ones() {
            u ^= &self.delta[s];
        }
        u
    }

    /// Whether `u` lies in `U = span(Π)`. Always true in the odd case.
    pub fn in_u(&self, u: &Config) -> bool {
        self.parity == Parity::Odd || !self.simple_coords(u).get(self.n - 1)
    }

    pub(crate) fn in_u_coords(&self, coords: &Config) -> bool {
        self.parity == Parity::Odd || !coords.get(self.n - 1)
    }

    /// `|Π₁ ∩ Δ(u)|` from precomputed coordinates.
    pub fn pi1_count(&self, coords: &Config) -> usize {
        coords.dot_count(&self.pi1_slots)
    }

    /// `sw(s̃_i)` from the case formulas.
    pub fn sw_of_standard(&self, p: &PiSystem, i: usize) -> usize {
        let n = self.n;
        let odd_prefix = p.prefix_pi1(i.min(n)) % 2 == 1;
        match (self.parity, i == n) {
            (Parity::Odd, true) => n,
            (Parity::Odd, false) if odd_prefix => n - i,
            (Parity::Odd, false) => i,
            (Parity::Even, true) => 1,
            (Parity::Even, false) if odd_prefix => i + 1,
            (Parity::Even, false) => i,
        }
    }

    /// Simple weight of `s_n u` predicted from `sw(u)` and `k = |Π₁ ∩ Δ(u)|`.
    pub fn predicted_sn_weight(&self, p: &PiSystem, u: &Config) -> usize {
        let coords = self.simple_coords(u);
        let sw = coords.count_ones();
        let k = self.pi1_count(&coords);
        let (n, q) = (self.n, p.pi1_size());
        let nbar_in_pi1 = p.in_pi1(n);
        match self.parity {
            Parity::Odd => {
                if k.is_multiple_of(2) {
                    sw
                } else {
                    n - q + 2 * k - sw
                }
            }
            Parity::Even => {
                // on Ū the fixed case flips: k odd leaves u alone
                let on_ubar = coords.get(n - 1);
                let fixed = k.is_multiple_of(2) != on_ubar;
                let extra = usize::from(on_ubar) * 2;
                if fixed {
                    sw
                } else if nbar_in_pi1 {
                    n + 2 * k + extra - q - sw
                } else {
                    sw + q - 2 * k
                }
            }
        }
    }

    /// Applies the non-strict move at `s_n` and reports the new simple weight.
    pub fn sn_action(&self, g: &GraphSpec, p: &PiSystem, u: &Config) -> SnAction {
        let mut moved = u.clone();
        g.feign(&mut moved, g.n());
        let simple_weight = self.simple_weight(&moved);
        debug_assert_eq!(simple_weight, self.predicted_sn_weight(p, u));
        SnAction {
            config: moved,
            simple_weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnAction {
    pub config: Config,
    pub simple_weight: usize,
}

/// Simple weights that admit a vector of Hamming weight 1: `I` on `U` (the
/// whole space in the odd case) and `J` on `Ū`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightIndexSets {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Option<Vec<usize>>,
}

impl WeightIndexSets {
    pub fn new(p: &PiSystem) -> Self {
        let n = p.n();
        let odd = |x: usize| p.prefix_pi1(x) % 2 == 1;
        match p.parity() {
            Parity::Odd => WeightIndexSets {
                i: (1..=n).filter(|&i| !odd(i) || i == n || odd(n - i)).collect(),
                j: None,
            },
            Parity::Even => WeightIndexSets {
                i: (1..n).filter(|&i| !odd(i)).collect(),
                j: Some((1..=n).filter(|&j| j == 1 || odd(j - 1)).collect()),
            },
        }
    }

    pub fn contains_i(&self, w: usize) -> bool {
        self.i.binary_search(&w).is_ok()
    }

    pub fn contains_j(&self, w: usize) -> bool {
        self.j.as_ref().is_some_and(|j| j.binary_search(&w).is_ok())
    }
}

/// Outcome of the structural identities satisfied by Π on one graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasisChecks {
    pub constructions_agree: bool,
    pub pi1_formula: bool,
    pub partial_sums: bool,
    pub pi0_sum: bool,
    pub transpositions: bool,
    pub submodule: bool,
}

impl BasisChecks {
    pub fn all(&self) -> bool {
        self.constructions_agree
            && self.pi1_formula
            && self.partial_sums
            && self.pi0_sum
            && self.transpositions
            && self.submodule
    }
}

/// Evaluates each identity directly from the vectors.
pub fn basis_checks(g: &GraphSpec) -> BasisChecks {
    let n = g.n();
    let rec = PiSystem::recursive(g);
    let closed = PiSystem::closed(g);
    let p = &closed;
    let sn = Config::unit(n, n);

    let constructions_agree = rec == closed
        && closed.pi1_mask() == &pi1_by_intervals(g)
        && rec.pi1_mask() == &pi1_by_intervals(g);
    let pi1_formula = pi1_size_formula(g) == rec.pi1_size();

    // 1̄ + … + ī is s̃_i, plus s̃_n when the Π₁ prefix is odd; Hamming weight 1 or 2
    let mut partial_sums = true;
    let mut acc = Config::zeros(n);
    for i in 1..=n {
        acc ^= p.vector(i);
        let odd = p.prefix_pi1(i) % 2 == 1;
        let mut expected = if i < n { Config::unit(n, i) } else { Config::zeros(n) };
        if odd {
            expected ^= &sn;
        }
        partial_sums &= acc == expected;
        if i < n {
            partial_sums &= acc.count_ones() == if odd { 2 } else { 1 };
        }
    }

    let mut sum_pi0 = Config::zeros(n);
    for i in p.pi0_indices() {
        sum_pi0 ^= p.vector(i);
    }
    let mut sum_attach = Config::zeros(n);
    for &j in g.attach() {
        sum_attach ^= &Config::unit(n, j);
    }
    let pi0_sum = sum_pi0 == sum_attach;

    let mut transpositions = true;
    for i in 1..n {
        for t in 1..=n {
            let mut v = p.vector(t).clone();
            g.feign(&mut v, i);
            let target = match t {
                t if t == i => i + 1,
                t if t == i + 1 => i,
                t => t,
            };
            transpositions &= &v == p.vector(target);
        }
    }

    // span(Π) is closed under every generator; linearity reduces this to Π itself
    let span = BitMatrix::from_columns(p.vectors());
    let base_rank = span.rank();
    let mut submodule = true;
    for v in 1..=n {
        for t in 1..=n {
            let mut w = p.vector(t).clone();
            g.feign(&mut w, v);
            let mut cols = p.vectors().to_vec();
            cols.push(w);
            submodule &= BitMatrix::from_columns(&cols).rank() == base_rank;
        }
    }

    BasisChecks {
        constructions_agree,
        pi1_formula,
        partial_sums,
        pi0_sum,
        transpositions,
        submodule,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, attach: &[usize]) -> GraphSpec {
        GraphSpec::new(n, attach).unwrap()
    }

    fn strs(v: &[Config]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn path4_pi() {
        let p = PiSystem::recursive(&g(4, &[3]));
        assert_eq!(strs(p.vectors()), ["1000", "1100", "0110", "0011"]);
        assert_eq!(p.pi1_indices(), vec![4]);
        assert_eq!(p.pi1_size(), 1);
        assert_eq!(p, PiSystem::closed(&g(4, &[3])));
    }

    #[test]
    fn two_vertex_pi() {
        let p = PiSystem::recursive(&g(2, &[1]));
        assert_eq!(strs(p.vectors()), ["10", "11"]);
        assert_eq!(p.pi1_indices(), vec![2]);
    }

    #[test]
    fn five_cycle_pi() {
        let c5 = g(5, &[1, 4]);
        let p = PiSystem::new(&c5);
        assert_eq!(p.pi0_indices(), vec![1, 5]);
        assert_eq!(p.pi1_indices(), vec![2, 3, 4]);
        // 3 ∈ (1, 4], so 3̄ = s̃_2 + s̃_3 + s̃_5
        assert_eq!(PiSystem::closed(&c5).vector(3).to_string(), "01101");
    }

    #[test]
    fn pi1_formula_examples() {
        assert_eq!(pi1_size_formula(&g(4, &[3])), 1);
        assert_eq!(pi1_size_formula(&g(5, &[1, 4])), 3);
        assert_eq!(pi1_size_formula(&g(4, &[1, 2, 3])), 2);
    }

    #[test]
    fn delta_choice() {
        let p = PiSystem::new(&g(4, &[3]));
        let b = SimpleBasis::new(&p).unwrap();
        assert_eq!(b.parity(), Parity::Odd);
        assert_eq!(b.vectors(), p.vectors());

        let c6 = g(6, &[1, 5]);
        let p = PiSystem::new(&c6);
        assert_eq!(p.pi1_size(), 4);
        let b = SimpleBasis::new(&p).unwrap();
        assert_eq!(&b.vectors()[..5], &p.vectors()[..5]);
        assert_eq!(b.vectors()[5], Config::unit(6, 6));
        assert_eq!(b.label(6), 7);
    }

    #[test]
    fn simple_coordinate_examples() {
        let p = PiSystem::new(&g(4, &[3]));
        let b = SimpleBasis::new(&p).unwrap();
        assert_eq!(b.simple_labels(&"0011".parse().unwrap()), vec![4]);
        assert_eq!(b.simple_labels(&"0010".parse().unwrap()), vec![1, 2, 3]);
        assert_eq!(b.simple_weight(&Config::zeros(4)), 0);
    }

    #[test]
    fn sw_of_standard_examples() {
        let p4 = PiSystem::new(&g(4, &[3]));
        let b4 = SimpleBasis::new(&p4).unwrap();
        assert_eq!(b4.sw_of_standard(&p4, 4), 4);
        assert_eq!(b4.sw_of_standard(&p4, 1), 1);
        let p6 = PiSystem::new(&g(6, &[1, 5]));
        let b6 = SimpleBasis::new(&p6).unwrap();
        assert_eq!(b6.sw_of_standard(&p6, 6), 1);
    }

    #[test]
    fn index_set_examples() {
        let c5 = WeightIndexSets::new(&PiSystem::new(&g(5, &[1, 4])));
        assert_eq!(c5.i, vec![1, 3, 5]);
        assert_eq!(c5.j, None);
        let c6 = WeightIndexSets::new(&PiSystem::new(&g(6, &[1, 5])));
        assert_eq!(c6.i, vec![1, 3, 5]);
        assert_eq!(c6.j, Some(vec![1, 3, 5]));
        let p4 = WeightIndexSets::new(&PiSystem::new(&g(4, &[3])));
        assert_eq!(p4.i, vec![1, 2, 3, 4]);
    }

    #[test]
    fn sn_action_examples() {
        let c5 = g(5, &[1, 4]);
        let p = PiSystem::new(&c5);
        let b = SimpleBasis::new(&p).unwrap();
        let u = Config::unit(5, 5);
        assert_eq!(b.simple_labels(&u), vec![1, 2, 3, 4, 5]);
        let out = b.sn_action(&c5, &p, &u);
        assert_eq!(out.simple_weight, 3);
        assert_eq!(out.config, c5.apply_move(&u, 5, false).unwrap());

        // even k in the odd case: sw is unchanged
        let u = &(p.vector(2) ^ p.vector(3)) ^ p.vector(1);
        assert_eq!(b.sn_action(&c5, &p, &u).simple_weight, 3);

        // Ū with odd k is fixed
        let c6 = g(6, &[1, 5]);
        let p = PiSystem::new(&c6);
        let b = SimpleBasis::new(&p).unwrap();
        let u = &Config::unit(6, 6) ^ p.vector(2);
        assert!(!b.in_u(&u));
        assert_eq!(b.sn_action(&c6, &p, &u).config, u);
    }
}
