//! Graphs made of an induced path `s_1 … s_{n-1}` plus a vertex `s_n` joined
//! to the path vertices listed in `attach`, and the flipping moves on them.
//!
//! Vertices are 1-based on every public interface.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// A validated graph in `(n, attach)` normal form.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct GraphSpec {
    n: usize,
    attach: Vec<usize>,
    /// `masks[v-1]` is the neighbor set of `s_v`.
    masks: Vec<Config>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    attach: Vec<i64>,
}

impl TryFrom<RawGraph> for GraphSpec {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        GraphSpec::validate(raw.n, &raw.attach)
    }
}

impl From<GraphSpec> for RawGraph {
    fn from(g: GraphSpec) -> Self {
        RawGraph {
            n: g.n,
            attach: g.attach.iter().map(|&j| j as i64).collect(),
        }
    }
}

impl GraphSpec {
    /// Validates raw input. `attach` is sorted and deduplicated first, so only
    /// genuine violations are reported.
    pub fn validate(n: usize, attach: &[i64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::NBelowTwo(n));
        }
        let mut sorted = attach.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::EmptyAttach);
        }
        if let Some(&bad) = sorted.iter().find(|&&j| j < 1 || j > (n - 1) as i64) {
            return Err(Error::AttachOutOfRange {
                vertex: bad,
                max: n - 1,
            });
        }
        let attach: Vec<usize> = sorted.into_iter().map(|j| j as usize).collect();
        Ok(Self::build(n, attach))
    }

    /// Convenience constructor for already-positive indices.
    pub fn new(n: usize, attach: &[usize]) -> Result<Self> {
        let raw: Vec<i64> = attach.iter().map(|&j| j as i64).collect();
        Self::validate(n, &raw)
    }

    /// The path `P_n`: `s_n` hangs off `s_{n-1}`.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, &[n.saturating_sub(1)])
    }

    /// The cycle `C_n`: `s_n` joins both path ends.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, &[1, n.saturating_sub(1)])
    }

    fn build(n: usize, attach: Vec<usize>) -> Self {
        let mut masks = vec![Config::zeros(n); n];
        for i in 1..n - 1 {
            masks[i - 1].set(i, true);
            masks[i].set(i - 1, true);
        }
        for &j in &attach {
            masks[j - 1].set(n - 1, true);
            masks[n - 1].set(j - 1, true);
        }
        Self { n, attach, masks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn attach(&self) -> &[usize] {
        &self.attach
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Neighbors of `s_v`, ascending.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self.masks[v - 1].ones().map(|i| i + 1).collect())
    }

    /// Neighbor set of `s_v` as a vector. Panics on an invalid vertex.
    pub fn neighbor_mask(&self, v: usize) -> &Config {
        &self.masks[v - 1]
    }

    /// Neighbor masks packed into words, for `n <= 64`.
    pub fn word_masks(&self) -> Option<Vec<u64>> {
        self.masks.iter().map(Config::to_u64).collect()
    }

    /// Edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.n {
            for b in self.masks[a - 1].ones().map(|i| i + 1) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Selects `s_v` in `u`.
    ///
    /// In strict mode a white `s_v` is an [`Error::IllegalMove`]; otherwise it
    /// is a feigning move and `u` comes back unchanged.
    pub fn apply_move(&self, u: &Config, v: usize, strict: bool) -> Result<Config> {
        self.check_vertex(v)?;
        self.check_config(u)?;
        if !u.get(v - 1) {
            return if strict {
                Err(Error::IllegalMove(v))
            } else {
                Ok(u.clone())
            };
        }
        Ok(u ^ &self.masks[v - 1])
    }

    /// Non-strict move in place, without validation.
    #[inline]
    pub fn feign(&self, u: &mut Config, v: usize) {
        if u.get(v - 1) {
            *u ^= &self.masks[v - 1];
        }
    }

    pub fn check_config(&self, u: &Config) -> Result<()> {
        if u.len() != self.n {
            return Err(Error::ConfigLength {
                got: u.len(),
                expected: self.n,
            });
        }
        Ok(())
    }

    /// Parses a bitstring of exactly `n` characters.
    pub fn parse_config(&self, s: &str) -> Result<Config> {
        Config::parse_with_len(s, self.n)
    }

    pub fn move_matrix(&self, v: usize) -> Result<MoveMatrix> {
        self.check_vertex(v)?;
        Ok(MoveMatrix {
            vertex: v,
            column: self.masks[v - 1].clone(),
        })
    }

    /// The adjacency matrix over F₂.
    pub fn adjacency(&self) -> BitMatrix {
        BitMatrix::from_rows(self.masks.clone())
    }
}

impl fmt::Debug for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphSpec({self})")
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let attach: Vec<String> = self.attach.iter().map(ToString::to_string).collect();
        write!(f, "n={} attach={}", self.n, attach.join(","))
    }
}

/// Accepts `n=<int> attach=<ints>` or the JSON object form.
impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let raw: RawGraph =
                serde_json::from_str(s).map_err(|_| Error::GraphParse(s.to_string()))?;
            return GraphSpec::try_from(raw);
        }
        let bad = || Error::GraphParse(s.to_string());
        let mut n = None;
        let mut attach = None;
        for token in s.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(bad)?;
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "attach" => {
                    let list = if value.is_empty() {
                        Vec::new()
                    } else {
                        value
                            .split(',')
                            .map(|x| x.trim().parse::<i64>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| bad())?
                    };
                    attach = Some(list);
                }
                _ => return Err(bad()),
            }
        }
        GraphSpec::validate(n.ok_or_else(bad)?, &attach.unwrap_or_default())
    }
}

/// The flipping move of one vertex: the identity plus the neighbor set of
/// `vertex` placed in column `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveMatrix {
    pub vertex: usize,
    pub column: Config,
}

impl MoveMatrix {
    pub fn apply(&self, u: &Config) -> Config {
        if u.get(self.vertex - 1) {
            u ^ &self.column
        } else {
            u.clone()
        }
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.column.len();
        let mut m = BitMatrix::identity(n);
        for a in self.column.ones() {
            m.set(a, self.vertex - 1, true);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p4() -> GraphSpec {
        GraphSpec::new(4, &[3]).unwrap()
    }

    fn c5() -> GraphSpec {
        GraphSpec::new(5, &[1, 4]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let g = p4();
        assert_eq!((g.n(), g.attach()), (4, &[3][..]));
        assert_eq!(c5().attach(), &[1, 4]);
        assert_eq!(GraphSpec::validate(3, &[]), Err(Error::EmptyAttach));
        assert_eq!(GraphSpec::validate(1, &[1]), Err(Error::NBelowTwo(1)));
        assert_eq!(
            GraphSpec::validate(4, &[0, 2]),
            Err(Error::AttachOutOfRange { vertex: 0, max: 3 })
        );
        assert_eq!(
            GraphSpec::validate(4, &[4]),
            Err(Error::AttachOutOfRange { vertex: 4, max: 3 })
        );
        // unsorted, duplicated input is normalized rather than rejected
        assert_eq!(GraphSpec::validate(5, &[4, 1, 4]).unwrap(), c5());
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(p4().neighbors(2).unwrap(), vec![1, 3]);
        assert_eq!(p4().neighbors(4).unwrap(), vec![3]);
        assert_eq!(c5().neighbors(5).unwrap(), vec![1, 4]);
        assert_eq!(c5().neighbors(1).unwrap(), vec![2, 5]);
        assert_eq!(
            p4().neighbors(5),
            Err(Error::VertexOutOfRange { vertex: 5, n: 4 })
        );
        assert!(p4().neighbors(0).is_err());
    }

    #[test]
    fn move_examples() {
        let g = p4();
        let u: Config = "1000".parse().unwrap();
        assert_eq!(g.apply_move(&u, 1, true).unwrap().to_string(), "1100");
        let zero = Config::zeros(4);
        assert_eq!(g.apply_move(&zero, 1, true), Err(Error::IllegalMove(1)));
        assert_eq!(g.apply_move(&zero, 1, false).unwrap(), zero);
        let u: Config = "10001".parse().unwrap();
        assert_eq!(c5().apply_move(&u, 1, true).unwrap().to_string(), "11000");
        assert!(g.apply_move(&"100".parse().unwrap(), 1, false).is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let g: GraphSpec = "n=5 attach=1,4".parse().unwrap();
        assert_eq!(g, c5());
        assert_eq!(g.to_string(), "n=5 attach=1,4");
        let j: GraphSpec = r#"{"n": 5, "attach": [4, 1]}"#.parse().unwrap();
        assert_eq!(j, c5());
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":5,"attach":[1,4]}"#);
        assert_eq!("n=3 attach=".parse::<GraphSpec>(), Err(Error::EmptyAttach));
        assert!(matches!(
            "n=x attach=1".parse::<GraphSpec>(),
            Err(Error::GraphParse(_))
        ));
        assert!(serde_json::from_str::<GraphSpec>(r#"{"n": 4, "attach": []}"#).is_err());
    }

    #[test]
    fn move_matrix_matches_definition() {
        let g = c5();
        let m = g.move_matrix(1).unwrap().to_matrix();
        // column 1 holds the diagonal plus neighbors s_2 and s_5
        for a in 0..5 {
            for b in 0..5 {
                let expected = a == b || (b == 0 && (a == 1 || a == 4));
                assert_eq!(m.get(a, b), expected, "entry ({a},{b})");
            }
        }
    }

    fn arb_graph() -> impl Strategy<Value = GraphSpec> {
        (2usize..40).prop_flat_map(|n| {
            proptest::collection::btree_set(1..n, 1..n.min(8) + 1).prop_map(move |s| {
                GraphSpec::new(n, &s.into_iter().collect::<Vec<_>>()).unwrap()
            })
        })
    }

    fn arb_graph_config() -> impl Strategy<Value = (GraphSpec, Config, usize)> {
        arb_graph().prop_flat_map(|g| {
            let n = g.n();
            (
                Just(g),
                proptest::collection::vec(any::<bool>(), n),
                1..=n,
            )
                .prop_map(|(g, bits, v)| {
                    let mut c = Config::zeros(bits.len());
                    for (i, b) in bits.into_iter().enumerate() {
                        c.set(i, b);
                    }
                    (g, c, v)
                })
        })
    }

    proptest! {
        #[test]
        fn moves_are_local_involutions((g, u, v) in arb_graph_config()) {
            let once = g.apply_move(&u, v, false).unwrap();
            prop_assert_eq!(g.apply_move(&once, v, false).unwrap(), u.clone());
            let changed = &once ^ &u;
            prop_assert!(!changed.get(v - 1));
            if u.get(v - 1) {
                prop_assert_eq!(changed.ones().map(|i| i + 1).collect::<Vec<_>>(), g.neighbors(v).unwrap());
            } else {
                prop_assert!(changed.is_zero());
            }
            prop_assert_eq!(g.move_matrix(v).unwrap().apply(&u), once);
        }

        #[test]
        fn edge_set_is_the_normal_form(g in arb_graph()) {
            let n = g.n();
            for v in 1..=n {
                let nb = g.neighbors(v).unwrap();
                prop_assert!(!nb.contains(&v));
                if v < n {
                    prop_assert!(nb.len() <= 3);
                } else {
                    prop_assert_eq!(nb.len(), g.attach().len());
                }
                for &w in &nb {
                    prop_assert!(g.neighbors(w).unwrap().contains(&v));
                }
            }
            let mut expected: Vec<(usize, usize)> = (1..n - 1).map(|i| (i, i + 1)).collect();
            expected.extend(g.attach().iter().map(|&j| (j, n)));
            expected.sort_unstable();
            prop_assert_eq!(g.edges(), expected);
        }
    }
}
