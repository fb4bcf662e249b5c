//! Serializable views shared by the command line and the HTTP API.

use serde::Serialize;

use crate::basis::Parity;
use crate::classify::{Classifier, Clause, OrbitLabel};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::oracle::{bfs_distances, find_witness, Limits, Witness};

#[derive(Clone, Debug, Serialize)]
pub struct PiVector {
    /// `i` for `ī`.
    pub index: usize,
    pub vector: Config,
    pub in_pi1: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaVector {
    /// `i` for `ī`; `n+1` stands for `s̃_n` in the even case.
    pub label: usize,
    pub vector: Config,
}

/// The Π system, simple basis and weight index sets of a graph.
#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub graph: GraphSpec,
    pub pi: Vec<PiVector>,
    pub pi0: Vec<usize>,
    pub pi1: Vec<usize>,
    pub pi1_size: usize,
    pub parity: &'static str,
    pub clause: Clause,
    pub delta: Vec<DeltaVector>,
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Option<Vec<usize>>,
    pub orbit_count: usize,
    pub max_orbit_weight: u32,
}

impl GraphSummary {
    pub fn new(cls: &Classifier) -> Self {
        let p = cls.pi();
        let b = cls.basis();
        Self {
            graph: cls.graph().clone(),
            pi: (1..=p.n())
                .map(|i| PiVector {
                    index: i,
                    vector: p.vector(i).clone(),
                    in_pi1: p.in_pi1(i),
                })
                .collect(),
            pi0: p.pi0_indices(),
            pi1: p.pi1_indices(),
            pi1_size: p.pi1_size(),
            parity: match p.parity() {
                Parity::Odd => "odd",
                Parity::Even => "even",
            },
            clause: cls.clause(),
            delta: b
                .vectors()
                .iter()
                .enumerate()
                .map(|(slot, v)| DeltaVector {
                    label: b.label(slot + 1),
                    vector: v.clone(),
                })
                .collect(),
            i: cls.index_sets().i.clone(),
            j: cls.index_sets().j.clone(),
            orbit_count: cls.orbit_count(),
            max_orbit_weight: cls.max_orbit_weight(),
        }
    }
}

/// Answer to "can `from` reach `to`?". The decision comes from the
/// classifier; the witness and distance come from the oracle only when asked
/// for and when `n` is within the cap.
#[derive(Clone, Debug, Serialize)]
pub struct ReachOutcome {
    pub reachable: bool,
    pub from_label: OrbitLabel,
    pub to_label: OrbitLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    /// Set when a witness was requested but `n` exceeds the cap.
    #[serde(skip)]
    pub capped: bool,
}

pub fn reach(cls: &Classifier, from: &Config, to: &Config, want_witness: bool, limits: &Limits) -> Result<ReachOutcome> {
    let from_label = cls.classify_checked(from)?;
    let to_label = cls.classify_checked(to)?;
    let reachable = from_label == to_label;
    let mut out = ReachOutcome {
        reachable,
        from_label,
        to_label,
        witness: None,
        distance: None,
        notice: None,
        capped: false,
    };
    if !(want_witness && reachable) {
        return Ok(out);
    }
    match find_witness(cls.graph(), from, to, limits) {
        Ok(Some(w)) => {
            debug_assert_eq!(w.replay(cls.graph(), from).as_ref(), Ok(to));
            out.distance = Some(w.len());
            out.witness = Some(w);
        }
        Ok(None) => unreachable!("classifier and oracle disagree on {} -> {}", from, to),
        Err(e @ Error::CapExceeded { .. }) => {
            out.notice = Some(format!("{e}; witness not computed"));
            out.capped = true;
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// Shortest legal move sequence, or `None` when `to` is unreachable.
pub fn solve(g: &GraphSpec, from: &Config, to: &Config, limits: &Limits) -> Result<Option<Witness>> {
    find_witness(g, from, to, limits)
}

/// Distance from `from` to `to` by BFS, `None` when unreachable.
pub fn distance(g: &GraphSpec, from: &Config, to: &Config, limits: &Limits) -> Result<Option<u32>> {
    g.check_config(to)?;
    let d = bfs_distances(g, from, limits)?;
    Ok(d[to.to_u64().expect("within cap") as usize])
}
