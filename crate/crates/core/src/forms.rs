//! The alternating form `⟨u, v⟩_A = uᵗAv` of the adjacency matrix, its
//! quadratic refinement `q`, and the transposed action of the moves
//! (symplectic transvections).

use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::gf2::BitMatrix;
use crate::graph::GraphSpec;
use crate::oracle::{bfs_partition, Limits, OrbitPartition};

/// `q`-invariance is checked on every state up to this size.
pub const Q_CHECK_MAX_N: usize = 10;

#[derive(Clone, Debug)]
pub struct AdjacencyForm {
    graph: GraphSpec,
    matrix: BitMatrix,
    rank: usize,
}

impl AdjacencyForm {
    pub fn new(g: &GraphSpec) -> Self {
        let matrix = g.adjacency();
        let rank = matrix.rank();
        Self {
            graph: g.clone(),
            matrix,
            rank,
        }
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nonsingular(&self) -> bool {
        self.rank == self.graph.n()
    }

    /// `uᵗAv`.
    pub fn bilinear(&self, u: &Config, v: &Config) -> bool {
        u.dot(&self.matrix.mul_vec(v))
    }

    /// `|supp u| + #{edges inside supp u}` mod 2: the form with `q(s̃) = 1`
    /// whose polarization is `⟨,⟩_A`.
    pub fn quadratic(&self, u: &Config) -> bool {
        let inside: usize = u
            .ones()
            .map(|i| self.graph.neighbor_mask(i + 1).dot_count(u))
            .sum();
        (u.count_ones() + inside / 2) % 2 == 1
    }

    /// `sᵗu = u + ⟨s̃, u⟩_A s̃`.
    pub fn transvection_apply(&self, s: usize, u: &Config) -> Config {
        let mut out = u.clone();
        if self.graph.neighbor_mask(s).dot(u) {
            out.flip(s - 1);
        }
        out
    }
}

/// Whether `s A sᵗ = A` for the matrix of every move.
pub fn check_congruence(g: &GraphSpec) -> bool {
    let a = g.adjacency();
    (1..=g.n()).all(|v| {
        let s = g.move_matrix(v).expect("valid vertex").to_matrix();
        s.mul(&a).mul(&s.transpose()) == a
    })
}

struct WordForm {
    masks: Vec<u32>,
}

impl WordForm {
    fn new(g: &GraphSpec) -> Self {
        Self {
            masks: g
                .word_masks()
                .expect("n checked against the cap")
                .into_iter()
                .map(|m| m as u32)
                .collect(),
        }
    }

    fn transvect(&self, x: u32, s: usize) -> u32 {
        if (x & self.masks[s - 1]).count_ones() % 2 == 1 {
            x ^ 1 << (s - 1)
        } else {
            x
        }
    }

    fn q(&self, x: u32) -> bool {
        let mut inside = 0;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            inside += (self.masks[i] & x).count_ones();
        }
        (x.count_ones() + inside / 2) % 2 == 1
    }

    fn apply_a(&self, x: u32) -> u32 {
        let mut out = 0;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out ^= self.masks[i];
        }
        out
    }
}

/// Orbits of `Wᵗ`, generated by the transvections. No legality condition
/// applies to this action.
pub fn transpose_partition(g: &GraphSpec, limits: &Limits) -> Result<OrbitPartition> {
    limits.check(g.n())?;
    let form = WordForm::new(g);
    let gens: Vec<usize> = (1..=g.n()).collect();
    Ok(OrbitPartition::from_step(g.n(), &gens, |x, s| form.transvect(x, s)))
}

/// True when `q` is unchanged by every transvection on every state.
pub fn check_q_invariance(g: &GraphSpec, limits: &Limits) -> Result<bool> {
    limits.check(g.n())?;
    let form = WordForm::new(g);
    Ok((0..1u32 << g.n()).all(|x| (1..=g.n()).all(|s| form.q(form.transvect(x, s)) == form.q(x))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AoCheck {
    pub rank: usize,
    pub nonsingular: bool,
    pub transpose_orbit_count: usize,
    pub orbit_count: usize,
    /// Each `Wᵗ`-orbit `O` has `AO` inside a single `W`-orbit.
    pub well_defined: bool,
    /// Only decided when `A` is nonsingular.
    pub bijection: Option<bool>,
}

/// Checks the map `O ↦ AO` from `Wᵗ`-orbits to `W`-orbits.
pub fn check_ao_bijection(g: &GraphSpec, limits: &Limits) -> Result<AoCheck> {
    let orbits = bfs_partition(g, None, limits)?;
    let transposed = transpose_partition(g, limits)?;
    Ok(ao_check(g, &orbits, &transposed))
}

fn ao_check(g: &GraphSpec, orbits: &OrbitPartition, transposed: &OrbitPartition) -> AoCheck {
    let form = WordForm::new(g);
    let rank = g.adjacency().rank();
    let mut image: Vec<Option<usize>> = vec![None; transposed.len()];
    let mut well_defined = true;
    for x in 0..1u32 << g.n() {
        let target = orbits.block_of(form.apply_a(x));
        let slot = &mut image[transposed.block_of(x)];
        match slot {
            Some(t) if *t != target => well_defined = false,
            _ => *slot = Some(target),
        }
    }
    let nonsingular = rank == g.n();
    let bijection = nonsingular.then(|| {
        let mut hit = vec![false; orbits.len()];
        let injective = image.iter().flatten().all(|&t| !std::mem::replace(&mut hit[t], true));
        well_defined && injective && hit.iter().all(|&h| h)
    });
    AoCheck {
        rank,
        nonsingular,
        transpose_orbit_count: transposed.len(),
        orbit_count: orbits.len(),
        well_defined,
        bijection,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormsReport {
    pub congruence: bool,
    /// `None` above [`Q_CHECK_MAX_N`].
    pub q_invariant: Option<bool>,
    /// `q` is constant on every `Wᵗ`-orbit.
    pub q_constant_on_orbits: bool,
    pub ao: AoCheck,
}

impl FormsReport {
    pub fn passed(&self) -> bool {
        self.congruence
            && self.q_invariant.unwrap_or(true)
            && self.q_constant_on_orbits
            && self.ao.well_defined
            && self.ao.bijection.unwrap_or(true)
    }
}

/// Every form-related check on `g`, reusing an already computed `W`-partition.
pub fn forms_report(g: &GraphSpec, orbits: &OrbitPartition, limits: &Limits) -> Result<FormsReport> {
    let transposed = transpose_partition(g, limits)?;
    let form = WordForm::new(g);
    let mut q_of_block: Vec<Option<bool>> = vec![None; transposed.len()];
    let mut q_constant_on_orbits = true;
    for x in 0..1u32 << g.n() {
        let q = form.q(x);
        let slot = &mut q_of_block[transposed.block_of(x)];
        match slot {
            Some(prev) if *prev != q => q_constant_on_orbits = false,
            _ => *slot = Some(q),
        }
    }
    let q_invariant = if g.n() <= Q_CHECK_MAX_N {
        Some(check_q_invariance(g, limits)?)
    } else {
        None
    };
    Ok(FormsReport {
        congruence: check_congruence(g),
        q_invariant,
        q_constant_on_orbits,
        ao: ao_check(g, orbits, &transposed),
    })
}
