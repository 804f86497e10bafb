//! Set validators and exact optimal-value search.
//!
//! Every parameter is computed by enumerating candidate sets by cardinality
//! (increasing for the domination-type minimisations, decreasing for the
//! packing-type maximisations) and lexicographically within a cardinality.
//! The first valid set is optimal, and it is the canonical witness: the
//! lexicographically least optimal set.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::digraph::Digraph;
use crate::error::SolveError;
use crate::vertex_set::VertexSet;

/// Default cap on candidate subsets examined per solve.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Largest order the exact search accepts; sets are held in one machine word.
pub const MAX_SEARCH_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParameterKind {
    /// γ: every vertex outside S has an in-neighbor in S.
    Domination,
    /// γₖ: every vertex outside S has at least k in-neighbors in S.
    KDomination(usize),
    /// γ×₂: |N⁻[v] ∩ S| ≥ 2 for every vertex.
    DoubleDomination,
    /// γᵗ×₂: outside vertices have ≥ 2 in-neighbors in S and D⟨S⟩ has no isolated vertex.
    Total2Domination,
    /// ρ: |N⁺[v] ∩ B| ≤ 1 for every vertex.
    Packing,
    /// Lₖ: |N⁺[v] ∩ B| ≤ k for every vertex.
    KLimitedPacking(usize),
    /// L₂: |N⁺[v] ∩ B| ≤ 2 for every vertex.
    TwoLimitedPacking,
    /// Lᵗ₂: members are adjacent with ≤ 1 member, non-members have ≤ 2 out-neighbors in B.
    Total2LimitedPacking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Minimize,
    Maximize,
}

/// The predicate a kind reduces to, with `k` made explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    KDom(usize),
    Double,
    TotalDom,
    KPack(usize),
    TotalPack,
}

impl ParameterKind {
    /// The kinds `solve_all` computes.
    pub const ALL: [ParameterKind; 8] = [
        ParameterKind::Domination,
        ParameterKind::KDomination(2),
        ParameterKind::DoubleDomination,
        ParameterKind::Total2Domination,
        ParameterKind::Packing,
        ParameterKind::KLimitedPacking(1),
        ParameterKind::TwoLimitedPacking,
        ParameterKind::Total2LimitedPacking,
    ];

    pub fn objective(self) -> Objective {
        match self {
            ParameterKind::Domination
            | ParameterKind::KDomination(_)
            | ParameterKind::DoubleDomination
            | ParameterKind::Total2Domination => Objective::Minimize,
            _ => Objective::Maximize,
        }
    }

    fn rule(self) -> Rule {
        match self {
            ParameterKind::Domination => Rule::KDom(1),
            ParameterKind::KDomination(k) => Rule::KDom(k),
            ParameterKind::DoubleDomination => Rule::Double,
            ParameterKind::Total2Domination => Rule::TotalDom,
            ParameterKind::Packing => Rule::KPack(1),
            ParameterKind::KLimitedPacking(k) => Rule::KPack(k),
            ParameterKind::TwoLimitedPacking => Rule::KPack(2),
            ParameterKind::Total2LimitedPacking => Rule::TotalPack,
        }
    }

    fn k(self) -> Option<usize> {
        match self {
            ParameterKind::KDomination(k) | ParameterKind::KLimitedPacking(k) => Some(k),
            _ => None,
        }
    }

    /// Stable kebab-case name used by the CLI and in reports.
    pub fn name(self) -> String {
        match self {
            ParameterKind::Domination => "gamma".into(),
            ParameterKind::KDomination(k) => format!("gamma-{k}"),
            ParameterKind::DoubleDomination => "gamma-x2".into(),
            ParameterKind::Total2Domination => "gamma-t2".into(),
            ParameterKind::Packing => "rho".into(),
            ParameterKind::KLimitedPacking(k) => format!("l-{k}"),
            ParameterKind::TwoLimitedPacking => "l2".into(),
            ParameterKind::Total2LimitedPacking => "l2t".into(),
        }
    }

    pub fn symbol(self) -> String {
        const SUB: [&str; 10] = ["₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"];
        let sub = |k: usize| -> String {
            k.to_string().bytes().map(|b| SUB[(b - b'0') as usize]).collect()
        };
        match self {
            ParameterKind::Domination => "γ".into(),
            ParameterKind::KDomination(k) => format!("γ{}", sub(k)),
            ParameterKind::DoubleDomination => "γ×₂".into(),
            ParameterKind::Total2Domination => "γᵗ×₂".into(),
            ParameterKind::Packing => "ρ".into(),
            ParameterKind::KLimitedPacking(k) => format!("L{}", sub(k)),
            ParameterKind::TwoLimitedPacking => "L₂".into(),
            ParameterKind::Total2LimitedPacking => "Lᵗ₂".into(),
        }
    }
}

impl fmt::Display for ParameterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for ParameterKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl FromStr for ParameterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let parse_k = |rest: &str| -> Result<usize, String> {
            rest.parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| format!("invalid k in `{s}`"))
        };
        Ok(match lower.as_str() {
            "gamma" | "dom" | "domination" => ParameterKind::Domination,
            "gamma-x2" | "double-dom" | "double-domination" => ParameterKind::DoubleDomination,
            "gamma-t2" | "total-2-dom" | "total-2-domination" => ParameterKind::Total2Domination,
            "rho" | "packing" => ParameterKind::Packing,
            "l2" | "2-limited-packing" | "two-limited-packing" => ParameterKind::TwoLimitedPacking,
            "l2t" | "total-2-pack" | "total-2-limited-packing" => {
                ParameterKind::Total2LimitedPacking
            }
            other => {
                if let Some(rest) = other.strip_prefix("gamma-").or_else(|| other.strip_prefix("k-dom-")) {
                    ParameterKind::KDomination(parse_k(rest)?)
                } else if let Some(rest) = other.strip_prefix("l-").or_else(|| other.strip_prefix("k-pack-")) {
                    ParameterKind::KLimitedPacking(parse_k(rest)?)
                } else {
                    return Err(format!("unknown parameter kind `{s}`"));
                }
            }
        })
    }
}

/// Which defining clause a vertex fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Clause {
    /// Vertex outside the set has too few in-neighbors in it.
    FewInNeighbors { required: usize, found: usize },
    /// |N⁻[v] ∩ S| below 2 (double domination).
    FewClosedInNeighbors { required: usize, found: usize },
    /// Member with no neighbor in the set.
    IsolatedInInduced,
    /// |N⁺[v] ∩ B| above the limit.
    ClosedOutNeighborhoodOverLimit { limit: usize, found: usize },
    /// Member adjacent with more than one member.
    AdjacentWithMembers { found: usize },
    /// Non-member with more than two out-neighbors in the set.
    ManyOutNeighbors { limit: usize, found: usize },
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::FewInNeighbors { required, found } => {
                write!(f, "needs ≥{required} in-neighbors in the set, has {found}")
            }
            Clause::FewClosedInNeighbors { required, found } => {
                write!(f, "closed in-neighborhood meets the set in {found} < {required} vertices")
            }
            Clause::IsolatedInInduced => f.write_str("isolated in the induced subdigraph"),
            Clause::ClosedOutNeighborhoodOverLimit { limit, found } => {
                write!(f, "closed out-neighborhood holds {found} > {limit} members")
            }
            Clause::AdjacentWithMembers { found } => write!(f, "adjacent with {found} members"),
            Clause::ManyOutNeighbors { limit, found } => {
                write!(f, "has {found} > {limit} out-neighbors in the set")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: usize,
    #[serde(flatten)]
    pub clause: Clause,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertex {}: {}", self.vertex, self.clause)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Validation {
    Valid,
    Violation(Violation),
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// Checks `set` against the defining property of `kind`, reporting the
/// smallest-index violating vertex.
pub fn validate(digraph: &Digraph, set: &VertexSet, kind: ParameterKind) -> Result<Validation, SolveError> {
    digraph.check_set(set)?;
    if kind.k() == Some(0) {
        return Err(SolveError::ZeroK);
    }
    let in_set = |v: usize| set.contains(v);
    let count = |vs: &[usize]| vs.iter().filter(|&&w| in_set(w)).count();
    for v in 0..digraph.order() {
        let member = in_set(v);
        let in_count = count(digraph.in_neighbors(v));
        let out_count = count(digraph.out_neighbors(v));
        let clause = match kind.rule() {
            Rule::KDom(k) if !member && in_count < k => {
                Some(Clause::FewInNeighbors { required: k, found: in_count })
            }
            Rule::Double => {
                let found = in_count + usize::from(member);
                (found < 2).then_some(Clause::FewClosedInNeighbors { required: 2, found })
            }
            Rule::TotalDom if !member && in_count < 2 => {
                Some(Clause::FewInNeighbors { required: 2, found: in_count })
            }
            Rule::TotalDom if member && digraph.neighbors(v).iter().all(|&w| !in_set(w)) => {
                Some(Clause::IsolatedInInduced)
            }
            Rule::KPack(k) => {
                let found = out_count + usize::from(member);
                (found > k).then_some(Clause::ClosedOutNeighborhoodOverLimit { limit: k, found })
            }
            Rule::TotalPack if member => {
                let found = digraph.neighbors(v).iter().filter(|&&w| in_set(w)).count();
                (found > 1).then_some(Clause::AdjacentWithMembers { found })
            }
            Rule::TotalPack if out_count > 2 => {
                Some(Clause::ManyOutNeighbors { limit: 2, found: out_count })
            }
            _ => None,
        };
        if let Some(clause) = clause {
            return Ok(Validation::Violation(Violation { vertex: v, clause }));
        }
    }
    Ok(Validation::Valid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    BudgetExceeded,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::BudgetExceeded => "budget_exceeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub kind: ParameterKind,
    pub status: SolveStatus,
    pub value: Option<usize>,
    pub witness: Option<VertexSet>,
    pub subsets_examined: u64,
    #[serde(serialize_with = "serialize_secs")]
    pub elapsed: Duration,
}

fn serialize_secs<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: u64,
    /// Prune the search tree using heredity (packings) or monotonicity
    /// (dominating sets). Returns the same value and witness as plain enumeration.
    pub pruning: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: DEFAULT_BUDGET, pruning: false }
    }
}

impl SolveOptions {
    pub fn plain(budget: u64) -> Self {
        SolveOptions { budget, pruning: false }
    }

    pub fn pruned(budget: u64) -> Self {
        SolveOptions { budget, pruning: true }
    }
}

/// Exact optimum by plain cardinality-ordered enumeration.
pub fn solve_exact(digraph: &Digraph, kind: ParameterKind, budget: u64) -> Result<SolveResult, SolveError> {
    solve_with(digraph, kind, SolveOptions::plain(budget))
}

pub fn solve_with(
    digraph: &Digraph,
    kind: ParameterKind,
    options: SolveOptions,
) -> Result<SolveResult, SolveError> {
    match kind.k() {
        Some(0) => return Err(SolveError::ZeroK),
        Some(k) if k > 2 => return Err(SolveError::UnsupportedK(k)),
        _ => {}
    }
    let started = Instant::now();
    let finish = |status, found: Option<u64>, examined| SolveResult {
        kind,
        status,
        value: found.map(|m| m.count_ones() as usize),
        witness: found.map(|m| VertexSet::from_mask(digraph.order(), m)),
        subsets_examined: examined,
        elapsed: started.elapsed(),
    };

    let infeasible = match kind.rule() {
        Rule::Double => digraph.order() > 0 && digraph.min_in_degree() == 0,
        Rule::TotalDom => digraph.has_isolated_vertex(),
        _ => false,
    };
    if infeasible {
        return Ok(finish(SolveStatus::Infeasible, None, 0));
    }
    if digraph.order() > MAX_SEARCH_ORDER {
        return Ok(finish(SolveStatus::BudgetExceeded, None, 0));
    }

    let masks = Masks::new(digraph, kind.rule());
    let mut search = Search { masks: &masks, budget: options.budget, examined: 0 };
    let outcome = if options.pruning { search.run_pruned(kind.objective()) } else { search.run_plain(kind.objective()) };
    Ok(match outcome {
        Outcome::Found(mask) => finish(SolveStatus::Optimal, Some(mask), search.examined),
        Outcome::OutOfBudget => finish(SolveStatus::BudgetExceeded, None, search.examined),
        // Unreachable for feasible instances: the full set (minimisation) or
        // the empty set (maximisation) is always valid once the feasibility
        // gate above has passed.
        Outcome::Exhausted => finish(SolveStatus::Infeasible, None, search.examined),
    })
}

/// Solves every kind in [`ParameterKind::ALL`]. Per-kind statuses are kept;
/// one kind running out of budget does not stop the others.
pub fn solve_all(digraph: &Digraph, options: SolveOptions) -> BTreeMap<ParameterKind, SolveResult> {
    ParameterKind::ALL
        .iter()
        .map(|&kind| {
            let result = solve_with(digraph, kind, options).expect("built-in kinds have supported k");
            (kind, result)
        })
        .collect()
}

/// Adjacency masks for word-sized search.
struct Masks {
    n: usize,
    rule: Rule,
    in_mask: Vec<u64>,
    out_mask: Vec<u64>,
    nbr_mask: Vec<u64>,
}

impl Masks {
    fn new(digraph: &Digraph, rule: Rule) -> Self {
        let n = digraph.order();
        let to_mask = |vs: &[usize]| vs.iter().fold(0u64, |m, &w| m | (1u64 << w));
        let in_mask: Vec<u64> = (0..n).map(|v| to_mask(digraph.in_neighbors(v))).collect();
        let out_mask: Vec<u64> = (0..n).map(|v| to_mask(digraph.out_neighbors(v))).collect();
        let nbr_mask = (0..n).map(|v| in_mask[v] | out_mask[v]).collect();
        Masks { n, rule, in_mask, out_mask, nbr_mask }
    }

    fn is_valid(&self, set: u64) -> bool {
        let pop = |m: u64| m.count_ones() as usize;
        (0..self.n).all(|v| {
            let member = set >> v & 1 == 1;
            match self.rule {
                Rule::KDom(k) => member || pop(self.in_mask[v] & set) >= k,
                Rule::Double => pop(self.in_mask[v] & set) + usize::from(member) >= 2,
                Rule::TotalDom => {
                    if member {
                        self.nbr_mask[v] & set != 0
                    } else {
                        pop(self.in_mask[v] & set) >= 2
                    }
                }
                Rule::KPack(k) => pop(self.out_mask[v] & set) + usize::from(member) <= k,
                Rule::TotalPack => {
                    if member {
                        pop(self.nbr_mask[v] & set) <= 1
                    } else {
                        pop(self.out_mask[v] & set) <= 2
                    }
                }
            }
        })
    }
}

enum Outcome {
    Found(u64),
    OutOfBudget,
    Exhausted,
}

struct Search<'a> {
    masks: &'a Masks,
    budget: u64,
    examined: u64,
}

impl Search<'_> {
    /// Counts one validity evaluation against the budget.
    fn check(&mut self, set: u64) -> Option<bool> {
        if self.examined >= self.budget {
            return None;
        }
        self.examined += 1;
        Some(self.masks.is_valid(set))
    }

    fn sizes(&self, objective: Objective) -> Vec<usize> {
        let n = self.masks.n;
        match objective {
            Objective::Minimize => (0..=n).collect(),
            Objective::Maximize => (0..=n).rev().collect(),
        }
    }

    fn run_plain(&mut self, objective: Objective) -> Outcome {
        let n = self.masks.n;
        for size in self.sizes(objective) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                let mask = combo.iter().fold(0u64, |m, &v| m | (1u64 << v));
                match self.check(mask) {
                    None => return Outcome::OutOfBudget,
                    Some(true) => return Outcome::Found(mask),
                    Some(false) => {}
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        Outcome::Exhausted
    }

    fn run_pruned(&mut self, objective: Objective) -> Outcome {
        for size in self.sizes(objective) {
            match self.dfs(objective, 0, size, 0) {
                Ok(Some(mask)) => return Outcome::Found(mask),
                Ok(None) => {}
                Err(()) => return Outcome::OutOfBudget,
            }
        }
        Outcome::Exhausted
    }

    /// Depth-first lexicographic extension of `prefix` by `remaining` vertices
    /// drawn from `start..n`. Leaves are visited in the same order as
    /// [`next_combination`], so the first hit equals the plain search's.
    fn dfs(&mut self, objective: Objective, prefix: u64, remaining: usize, start: usize) -> Result<Option<u64>, ()> {
        let n = self.masks.n;
        if n - start < remaining {
            return Ok(None);
        }
        match objective {
            // Dominating-type properties are closed under supersets: if even
            // prefix ∪ {start..n} fails, no completion can succeed.
            Objective::Minimize => {
                if remaining == 0 {
                    return match self.check(prefix) {
                        None => Err(()),
                        Some(true) => Ok(Some(prefix)),
                        Some(false) => Ok(None),
                    };
                }
                let tail = if start >= 64 { 0 } else { (u64::MAX << start) & full_mask(n) };
                match self.check(prefix | tail) {
                    None => return Err(()),
                    Some(false) => return Ok(None),
                    Some(true) => {}
                }
            }
            // Packing-type properties are closed under subsets.
            Objective::Maximize => match self.check(prefix) {
                None => return Err(()),
                Some(false) => return Ok(None),
                Some(true) if remaining == 0 => return Ok(Some(prefix)),
                Some(true) => {}
            },
        }
        for v in start..n {
            if n - v < remaining {
                break;
            }
            if let Some(found) = self.dfs(objective, prefix | (1u64 << v), remaining - 1, v + 1)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Advances `combo` (sorted, distinct, < n) to the next k-combination in
/// lexicographic order. Returns false when `combo` was the last one.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
