//! Extremal-family constructors and reduction gadgets.
//!
//! * Ω: functional seed plus vertices `U` whose two out-arcs fill every seed
//!   up to in-degree `r`. The seed is then a maximum 2-limited packing of
//!   size `2n/(δ⁻+1)`.
//! * Θ: the mirror image built on a contrafunctional seed. The seed is a
//!   minimum double dominating set of size `2n/(Δ⁺+1)`.
//! * Γ: directed trees grown from a forest of P₂ copies and stars by
//!   attaching vertices `w_j`, each with two in-arcs. The forest is a minimum
//!   total 2-dominating set of size `(2n+e-p+2)/3`.
//! * R: four pendant P₂'s per vertex of a connected digraph, with
//!   `Lᵗ₂(R) + Lᵗ₂(R⁻¹) = 16|V(R)|/9`.
//! * D′ and D″: gadgets with `γ×₂(D′) = γᵗ×₂(D′) = 2n + γ(D)` and
//!   `L₂(D″) = Lᵗ₂(D″) = n + ρ(D)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::FamilyError;
use crate::generators;
use crate::solvers::{solve_with, validate, ParameterKind, SolveOptions, SolveStatus};
use crate::vertex_set::VertexSet;

/// Largest `r` tried when choosing a default for Ω/Θ.
pub const DEFAULT_R_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Omega,
    Theta,
    GammaTree,
    RGadget,
    ReductionDd,
    ReductionLp,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Omega => "omega",
            Family::Theta => "theta",
            Family::GammaTree => "gamma-tree",
            Family::RGadget => "r-gadget",
            Family::ReductionDd => "reduction-dd",
            Family::ReductionLp => "reduction-lp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "omega" => Family::Omega,
            "theta" => Family::Theta,
            "gamma-tree" | "gamma" => Family::GammaTree,
            "r-gadget" | "r" => Family::RGadget,
            "reduction-dd" | "dd-gadget" => Family::ReductionDd,
            "reduction-lp" | "lp-gadget" => Family::ReductionLp,
            _ => return Err(format!("unknown family `{s}`")),
        })
    }
}

/// Construction parameters; only the ones meaningful for the family are set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_prime: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_orders: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    #[serde(skip)]
    pub digraph: Digraph,
    pub family: Family,
    /// The embedded seed digraph, forest F₀, or original vertex set.
    pub seed_vertices: VertexSet,
    /// U, the attached w_j, the gadget vertices, or the R paths.
    pub added_vertices: VertexSet,
    pub params: FamilyParams,
    /// The set the construction certifies optimal.
    pub extremal_set: VertexSet,
}

impl FamilyInstance {
    /// Kinds under which `extremal_set` must validate. The R gadget's set
    /// must additionally validate in the converse.
    pub fn certificate_kinds(&self) -> &'static [ParameterKind] {
        match self.family {
            Family::Omega => &[ParameterKind::TwoLimitedPacking],
            Family::Theta => &[ParameterKind::DoubleDomination],
            Family::GammaTree => &[ParameterKind::Total2Domination],
            Family::RGadget => &[ParameterKind::Total2LimitedPacking],
            Family::ReductionDd => &[ParameterKind::DoubleDomination, ParameterKind::Total2Domination],
            Family::ReductionLp => &[ParameterKind::TwoLimitedPacking, ParameterKind::Total2LimitedPacking],
        }
    }

    /// Checks the partition invariant and validates the extremal set.
    pub fn certificate_holds(&self) -> bool {
        let n = self.digraph.order();
        let partition = self.seed_vertices.is_disjoint(&self.added_vertices)
            && self.seed_vertices.union(&self.added_vertices) == VertexSet::full(n);
        let valid_in = |d: &Digraph| {
            self.certificate_kinds()
                .iter()
                .all(|&kind| validate(d, &self.extremal_set, kind).map(|v| v.is_valid()).unwrap_or(false))
        };
        let converse_ok = self.family != Family::RGadget || valid_in(&self.digraph.converse());
        partition && valid_in(&self.digraph) && converse_ok
    }
}

fn require(condition: bool, message: impl FnOnce() -> String) -> Result<(), FamilyError> {
    if condition {
        Ok(())
    } else {
        Err(FamilyError::Precondition(message()))
    }
}

/// Smallest `r >= max(min, 1)` with `(r-1)*n` even, up to `cap`.
pub fn default_r(min: usize, n: usize, cap: usize) -> Result<usize, FamilyError> {
    (min.max(1)..=cap)
        .find(|r| (r - 1) * n % 2 == 0)
        .ok_or(FamilyError::NoValidR { min, cap, n })
}

/// Pairs deficiency slots two at a time so that no pair repeats a vertex.
///
/// Slots are paired greedily (2i with 2i+1); a clash is resolved by swapping
/// in the next slot naming a different vertex. If the greedy pass gets stuck
/// the pairing `i <-> i + len/2` over the sorted slots is tried, which
/// succeeds whenever any valid pairing exists.
fn pair_slots(slots: &[usize]) -> Result<Vec<(usize, usize)>, FamilyError> {
    let mut work = slots.to_vec();
    let mut greedy_ok = true;
    let mut i = 0;
    while i + 1 < work.len() {
        if work[i] == work[i + 1] {
            match (i + 2..work.len()).find(|&j| work[j] != work[i]) {
                Some(j) => work.swap(i + 1, j),
                None => {
                    greedy_ok = false;
                    break;
                }
            }
        }
        i += 2;
    }
    if greedy_ok {
        return Ok(work.chunks(2).map(|c| (c[0], c[1])).collect());
    }
    let mut sorted = slots.to_vec();
    sorted.sort_unstable();
    let half = sorted.len() / 2;
    let pairs: Vec<(usize, usize)> = (0..half).map(|i| (sorted[i], sorted[i + half])).collect();
    if pairs.iter().all(|(a, b)| a != b) {
        Ok(pairs)
    } else {
        Err(FamilyError::PairingImpossible)
    }
}

/// Builds a member of Ω from a functional digraph.
///
/// Every seed vertex ends with in-degree exactly `r`; each added vertex has
/// exactly two out-arcs, both into the seed, and receives in-arcs from the
/// first `r` other vertices (seed vertices first), so `δ⁻ = r`.
pub fn construct_omega(seed: &Digraph, r: Option<usize>) -> Result<FamilyInstance, FamilyError> {
    let n_prime = seed.order();
    require(n_prime >= 2 && seed.classify().is_functional, || "seed digraph must be functional".into())?;
    let max_in = seed.max_in_degree();
    let r = match r {
        Some(r) => {
            require(r >= max_in && r >= 1, || format!("r={r} below Δ⁻(D′)={max_in}"))?;
            require((r - 1) * n_prime % 2 == 0, || format!("(r-1)·n′ = {} is odd", (r - 1) * n_prime))?;
            r
        }
        None => default_r(max_in, n_prime, DEFAULT_R_CAP)?,
    };

    let slots: Vec<usize> = (0..n_prime)
        .flat_map(|v| std::iter::repeat(v).take(r - seed.in_degree(v)))
        .collect();
    let p = slots.len();
    debug_assert_eq!(p, (r - 1) * n_prime);
    let pairs = pair_slots(&slots)?;
    let added = pairs.len();
    let n = n_prime + added;
    require(n - 1 >= r, || format!("only {} possible in-neighbors for in-degree {r}", n - 1))?;

    let mut arcs: Vec<(usize, usize)> = seed.arcs().collect();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        arcs.push((n_prime + i, a));
        arcs.push((n_prime + i, b));
    }
    for i in 0..added {
        let u = n_prime + i;
        arcs.extend((0..n).filter(|&s| s != u).take(r).map(|s| (s, u)));
    }
    let digraph = Digraph::new(n, arcs)?;
    let seed_vertices = VertexSet::from_indices(n, 0..n_prime)?;
    Ok(FamilyInstance {
        digraph,
        family: Family::Omega,
        added_vertices: seed_vertices.complement(),
        extremal_set: seed_vertices.clone(),
        seed_vertices,
        params: FamilyParams { r: Some(r), p: Some(p), n_prime: Some(n_prime), ..Default::default() },
    })
}

/// Builds a member of Θ from a contrafunctional digraph: the converse of the
/// Ω construction applied to the (functional) converse seed.
///
/// Every seed vertex ends with out-degree exactly `r`, each added vertex has
/// exactly two in-arcs from the seed, and `Δ⁺ = r`.
pub fn construct_theta(seed: &Digraph, r: Option<usize>) -> Result<FamilyInstance, FamilyError> {
    require(seed.order() >= 2 && seed.classify().is_contrafunctional, || {
        "seed digraph must be contrafunctional".into()
    })?;
    let mirror = construct_omega(&seed.converse(), r)?;
    let FamilyParams { r, p, n_prime, .. } = mirror.params;
    Ok(FamilyInstance {
        digraph: mirror.digraph.converse(),
        family: Family::Theta,
        params: FamilyParams { r, q: p, n_prime, ..Default::default() },
        ..mirror
    })
}

/// Builds a member of Γ.
///
/// F₀ holds `r` copies of P₂ (vertices `2i -> 2i+1`) followed by one star per
/// entry of `star_orders` (center first, each leaf arc oriented by a coin
/// flip). Then `q = r + r′ - 1` vertices `w_j` are attached with arcs
/// `(x_j, w_j)`, `(y_j, w_j)`, where `x_j, y_j` are P₂ vertices or star
/// centers and exactly one of them lies in `N_F₀[N⁻({w_1..w_{j-1}})]`
/// (for `w_1`: the two lie in different components). Pairs are drawn
/// uniformly from the admissible ones.
pub fn construct_gamma_tree(r: usize, star_orders: &[usize], seed: u64) -> Result<FamilyInstance, FamilyError> {
    let r_prime = star_orders.len();
    require(r + r_prime >= 2, || format!("r + r′ = {} but at least 2 components are needed", r + r_prime))?;
    require(star_orders.iter().all(|&t| t >= 3), || "every star must have order at least 3".into())?;

    let mut rng = generators::rng(seed);
    let mut arcs = Vec::new();
    let mut component = Vec::new();
    let mut attachable = Vec::new();
    for i in 0..r {
        arcs.push((2 * i, 2 * i + 1));
        component.extend([i, i]);
        attachable.extend([2 * i, 2 * i + 1]);
    }
    let mut next = 2 * r;
    for (s, &t) in star_orders.iter().enumerate() {
        let center = next;
        attachable.push(center);
        component.extend(std::iter::repeat(r + s).take(t));
        for leaf in center + 1..center + t {
            arcs.push(if rng.gen_bool(0.5) { (center, leaf) } else { (leaf, center) });
        }
        next += t;
    }
    let forest_order = next;
    let forest = Digraph::new(forest_order, arcs.iter().copied())?;

    let q = r + r_prime - 1;
    let mut attached_in_neighbors = VertexSet::empty(forest_order);
    for step in 1..=q {
        let w = forest_order + step - 1;
        let pairs: Vec<(usize, usize)> = if step == 1 {
            attachable
                .iter()
                .enumerate()
                .flat_map(|(i, &x)| attachable[i + 1..].iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| component[x] != component[y])
                .collect()
        } else {
            let mut closed = attached_in_neighbors.clone();
            for v in attached_in_neighbors.iter() {
                for nb in forest.neighbors(v) {
                    closed.insert(nb)?;
                }
            }
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                attachable.iter().partition(|&&v| closed.contains(v));
            inside
                .iter()
                .flat_map(|&x| outside.iter().map(move |&y| (x, y)))
                .collect()
        };
        let &(x, y) = pairs.choose(&mut rng).ok_or(FamilyError::NoAttachmentPair { step })?;
        arcs.push((x, w));
        arcs.push((y, w));
        attached_in_neighbors.insert(x)?;
        attached_in_neighbors.insert(y)?;
    }

    let n = forest_order + q;
    let digraph = Digraph::new(n, arcs)?;
    if !digraph.classify().is_directed_tree {
        return Err(FamilyError::Precondition("attachment produced a non-tree".into()));
    }
    let seed_vertices = VertexSet::from_indices(n, 0..forest_order)?;
    Ok(FamilyInstance {
        digraph,
        family: Family::GammaTree,
        added_vertices: seed_vertices.complement(),
        extremal_set: seed_vertices.clone(),
        seed_vertices,
        params: FamilyParams {
            r: Some(r),
            r_prime: Some(r_prime),
            q: Some(q),
            star_orders: Some(star_orders.to_vec()),
            seed: Some(seed),
            ..Default::default()
        },
    })
}

/// The sharpness gadget R: for each seed vertex `v`, four directed P₂'s
/// `a_k -> b_k` with arcs `v -> a_1`, `v -> a_2`, `a_3 -> v`, `a_4 -> v`.
/// The added block for seed vertex `i` occupies `n′ + 8i .. n′ + 8i + 8`,
/// laid out as `a_1 b_1 a_2 b_2 a_3 b_3 a_4 b_4`.
pub fn construct_r_gadget(seed: &Digraph) -> Result<FamilyInstance, FamilyError> {
    let n_prime = seed.order();
    require(n_prime >= 1, || "seed digraph must be non-empty".into())?;
    require(seed.is_weakly_connected(), || "seed digraph must be connected".into())?;
    let n = 9 * n_prime;
    let mut arcs: Vec<(usize, usize)> = seed.arcs().collect();
    for v in 0..n_prime {
        let base = n_prime + 8 * v;
        for k in 0..4 {
            arcs.push((base + 2 * k, base + 2 * k + 1));
        }
        arcs.extend([(v, base), (v, base + 2), (base + 4, v), (base + 6, v)]);
    }
    let digraph = Digraph::new(n, arcs)?;
    let seed_vertices = VertexSet::from_indices(n, 0..n_prime)?;
    let added = seed_vertices.complement();
    Ok(FamilyInstance {
        digraph,
        family: Family::RGadget,
        extremal_set: added.clone(),
        added_vertices: added,
        seed_vertices,
        params: FamilyParams { n_prime: Some(n_prime), ..Default::default() },
    })
}

/// D′: for each vertex `v_i` add `w_i = n + i`, `u_i = 2n + i` and arcs
/// `w_i <-> u_i`, `u_i -> v_i`.
pub fn reduce_domination_gadget(d: &Digraph) -> Digraph {
    let n = d.order();
    let arcs = d
        .arcs()
        .chain((0..n).flat_map(|i| [(n + i, 2 * n + i), (2 * n + i, n + i), (2 * n + i, i)]));
    Digraph::new(3 * n, arcs).expect("gadget arcs are valid")
}

/// D″: for each vertex `v_i` add `x_i = n + i` and the arc `v_i -> x_i`.
pub fn reduce_packing_gadget(d: &Digraph) -> Digraph {
    let n = d.order();
    Digraph::new(2 * n, d.arcs().chain((0..n).map(|i| (i, n + i)))).expect("gadget arcs are valid")
}

fn solved_set(d: &Digraph, kind: ParameterKind, budget: u64) -> Result<VertexSet, FamilyError> {
    let result = solve_with(d, kind, SolveOptions::pruned(budget)).map_err(|e| FamilyError::Indeterminate(e.to_string()))?;
    match result.status {
        SolveStatus::Optimal => Ok(result.witness.expect("optimal results carry a witness")),
        status => Err(FamilyError::Indeterminate(format!("{} on the seed digraph: {status}", kind.symbol()))),
    }
}

/// D′ with its certificate: a minimum dominating set of `d` plus every gadget vertex.
pub fn reduction_dd_instance(d: &Digraph, budget: u64) -> Result<FamilyInstance, FamilyError> {
    let n = d.order();
    let gamma_set = solved_set(d, ParameterKind::Domination, budget)?;
    let digraph = reduce_domination_gadget(d);
    let seed_vertices = VertexSet::from_indices(3 * n, 0..n)?;
    let added = seed_vertices.complement();
    let extremal_set = added.union(&VertexSet::from_indices(3 * n, gamma_set.iter())?);
    Ok(FamilyInstance {
        digraph,
        family: Family::ReductionDd,
        seed_vertices,
        added_vertices: added,
        params: FamilyParams { n_prime: Some(n), ..Default::default() },
        extremal_set,
    })
}

/// D″ with its certificate: a maximum packing of `d` plus every pendant vertex.
pub fn reduction_lp_instance(d: &Digraph, budget: u64) -> Result<FamilyInstance, FamilyError> {
    let n = d.order();
    let rho_set = solved_set(d, ParameterKind::Packing, budget)?;
    let digraph = reduce_packing_gadget(d);
    let seed_vertices = VertexSet::from_indices(2 * n, 0..n)?;
    let added = seed_vertices.complement();
    let extremal_set = added.union(&VertexSet::from_indices(2 * n, rho_set.iter())?);
    Ok(FamilyInstance {
        digraph,
        family: Family::ReductionLp,
        seed_vertices,
        added_vertices: added,
        params: FamilyParams { n_prime: Some(n), ..Default::default() },
        extremal_set,
    })
}

/// Equality test for the Ω / Θ characterisations, decided by exact solving:
/// Ω iff `(δ⁻+1)·L₂ = 2n`, Θ iff `(Δ⁺+1)·γ×₂ = 2n`.
pub fn extremal_membership(d: &Digraph, family: Family, budget: u64) -> Result<bool, FamilyError> {
    require(d.order() >= 1 && d.min_in_degree() >= 1, || "membership needs δ⁻ ≥ 1".into())?;
    let two_n = 2 * d.order();
    match family {
        Family::Omega => {
            let l2 = solved_set(d, ParameterKind::TwoLimitedPacking, budget)?.len();
            Ok((d.min_in_degree() + 1) * l2 == two_n)
        }
        Family::Theta => {
            let gx2 = solved_set(d, ParameterKind::DoubleDomination, budget)?.len();
            Ok((d.max_out_degree() + 1) * gx2 == two_n)
        }
        other => Err(FamilyError::Precondition(format!("no membership test for {other}"))),
    }
}
