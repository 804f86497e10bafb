//! Bound audits: every inequality and characterisation is evaluated on a
//! concrete digraph with exact optimal values. Comparisons are done in exact
//! rational arithmetic, and a hypothesis that fails is reported as such.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::digraph::{Digraph, VertexClassification};
use crate::error::AnalysisError;
use crate::families::{reduce_domination_gadget, reduce_packing_gadget};
use crate::generators::GenSpec;
use crate::solvers::{solve_with, ParameterKind, SolveOptions, SolveStatus};
use crate::vertex_set::VertexSet;

/// An exact rational value. Serialized as `"a"` or `"a/b"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Ratio<i64>);

impl Exact {
    pub fn int(v: usize) -> Self {
        Exact(Ratio::from_integer(v as i64))
    }

    pub fn frac(num: usize, den: usize) -> Self {
        Exact(Ratio::new(num as i64, den as i64))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Exact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("bad number `{t}`: {e}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let den = parse(b)?;
                if den == 0 {
                    return Err("zero denominator".into());
                }
                Ok(Exact(Ratio::new(parse(a)?, den)))
            }
            None => Ok(Exact(Ratio::from_integer(parse(s)?))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// L₂ ≥ ρ + 1 when Δ⁺ ≥ 1.
    T1i,
    /// γ×₂ ≥ γ + 1 when δ⁻ ≥ 1.
    T1ii,
    /// Lₖ ≤ (k/r)·γ×ᵣ when δ⁻ ≥ r − 1.
    T2 { k: usize, r: usize },
    /// (δ⁻+1)·L₂ ≤ 2n, equality iff Ω.
    Thm123,
    /// (Δ⁺+1)·γ×₂ ≥ 2n, equality iff Θ.
    ThmTheta,
    /// Lᵗ₂ ≤ γᵗ×₂ on directed trees.
    Duality,
    /// 3·γᵗ×₂ ≥ 2n + e − p + 2 on directed trees.
    T3,
    /// γᵗ×₂ = n iff every non-end, non-penultimate vertex has deg⁻ ≤ 1.
    Ng1,
    /// γᵗ×₂(D) + γᵗ×₂(D⁻¹) = 2n iff the in- and out-degree conditions hold.
    Ng1Corollary,
    /// 9·(Lᵗ₂(D) + Lᵗ₂(D⁻¹)) ≤ 16n for connected D, n ≥ 3.
    Tng2,
    /// 81·Lᵗ₂(D)·Lᵗ₂(D⁻¹) ≤ 64n² for connected D, n ≥ 3.
    Tng2Product,
    /// γ×₂(D′) = γᵗ×₂(D′) = 2n + γ(D).
    RedDd,
    /// L₂(D″) = Lᵗ₂(D″) = n + ρ(D).
    RedLp,
    /// ρ(T) = γ(T) on directed trees.
    RhoEqGammaTree,
}

impl TheoremId {
    /// Every record `bounds_report` emits, in report order.
    pub fn all() -> Vec<TheoremId> {
        let mut ids = vec![TheoremId::T1i, TheoremId::T1ii];
        for k in 1..=2 {
            for r in 1..=2 {
                ids.push(TheoremId::T2 { k, r });
            }
        }
        ids.extend([
            TheoremId::Thm123,
            TheoremId::ThmTheta,
            TheoremId::Duality,
            TheoremId::T3,
            TheoremId::Ng1,
            TheoremId::Ng1Corollary,
            TheoremId::Tng2,
            TheoremId::Tng2Product,
            TheoremId::RedDd,
            TheoremId::RedLp,
            TheoremId::RhoEqGammaTree,
        ]);
        ids
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremId::T1i => f.write_str("T1i"),
            TheoremId::T1ii => f.write_str("T1ii"),
            TheoremId::T2 { k, r } => write!(f, "T2(k={k},r={r})"),
            TheoremId::Thm123 => f.write_str("Thm123"),
            TheoremId::ThmTheta => f.write_str("ThmTheta"),
            TheoremId::Duality => f.write_str("Duality"),
            TheoremId::T3 => f.write_str("T3"),
            TheoremId::Ng1 => f.write_str("NG1"),
            TheoremId::Ng1Corollary => f.write_str("NG1-Corollary"),
            TheoremId::Tng2 => f.write_str("TNG2"),
            TheoremId::Tng2Product => f.write_str("TNG2-Product"),
            TheoremId::RedDd => f.write_str("RedDD"),
            TheoremId::RedLp => f.write_str("RedLP"),
            TheoremId::RhoEqGammaTree => f.write_str("RhoEqGammaTree"),
        }
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        TheoremId::all()
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(&compact))
            .ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// lhs ≤ rhs
    Le,
    /// lhs ≥ rhs
    Ge,
    /// lhs = rhs
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "le",
            Relation::Ge => "ge",
            Relation::Eq => "eq",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The relation holds strictly.
    Holds,
    /// The relation holds with equality.
    Equality,
    Violated,
    /// A needed value could not be computed within budget.
    Indeterminate,
}

impl Status {
    pub fn holds(self) -> bool {
        matches!(self, Status::Holds | Status::Equality)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Equality => "equality",
            Status::Violated => "violated",
            Status::Indeterminate => "indeterminate",
        })
    }
}

fn compare(lhs: Exact, rhs: Exact, relation: Relation) -> Status {
    let ok = match relation {
        Relation::Le => lhs <= rhs,
        Relation::Ge => lhs >= rhs,
        Relation::Eq => lhs == rhs,
    };
    match (ok, lhs == rhs) {
        (false, _) => Status::Violated,
        (true, true) => Status::Equality,
        (true, false) => Status::Holds,
    }
}

/// One audited result on one digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub theorem_id: TheoremId,
    pub applicable: bool,
    /// The hypothesis that was checked, or why the record does not apply.
    pub reason: String,
    pub relation: Relation,
    pub lhs: Option<Exact>,
    pub rhs: Option<Exact>,
    /// `None` when not applicable.
    pub status: Option<Status>,
    /// Outcome of the equality characterisation, for results that have one.
    pub characterization: Option<bool>,
    /// Optimal set behind the left-hand side.
    pub witness: Option<VertexSet>,
    /// Optimal set behind the right-hand side, when it is a parameter.
    pub rhs_witness: Option<VertexSet>,
    /// Extra values worth seeing, as `name=value` pairs.
    pub detail: String,
}

impl BoundRecord {
    fn inapplicable(theorem_id: TheoremId, relation: Relation, reason: String) -> Self {
        BoundRecord {
            theorem_id,
            applicable: false,
            reason,
            relation,
            lhs: None,
            rhs: None,
            status: None,
            characterization: None,
            witness: None,
            rhs_witness: None,
            detail: String::new(),
        }
    }

    fn indeterminate(theorem_id: TheoremId, relation: Relation, reason: String, missing: &str) -> Self {
        BoundRecord {
            status: Some(Status::Indeterminate),
            applicable: true,
            detail: format!("unsolved={missing}"),
            ..Self::inapplicable(theorem_id, relation, reason)
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == Some(Status::Violated)
    }
}

/// Lᵗ₂(S) + Lᵗ₂(S⁻¹) for a directed star with `a` out-leaves and `b`
/// in-leaves, by the four-case table. Stated for stars on at least three
/// vertices.
pub fn star_sum_formula(a: usize, b: usize) -> usize {
    let n = a + b + 1;
    match (a.min(b), a.max(b)) {
        (0, _) => n + 1,
        (1, 1) => n + 1,
        (1, _) => n + 2,
        _ => n + 3,
    }
}

/// Result of one exact solve, as the audit consumes it.
#[derive(Debug, Clone)]
enum Solved {
    Value(usize, VertexSet),
    Infeasible,
    Unknown,
}

/// Memoised exact values for a digraph, its converse and its gadgets.
struct Oracle<'a> {
    digraph: &'a Digraph,
    converse: Digraph,
    options: SolveOptions,
    cache: HashMap<(Target, ParameterKind), Solved>,
    dd_gadget: Option<Digraph>,
    lp_gadget: Option<Digraph>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Target {
    Base,
    Converse,
    DdGadget,
    LpGadget,
}

impl<'a> Oracle<'a> {
    fn new(digraph: &'a Digraph, budget: u64) -> Self {
        Oracle {
            digraph,
            converse: digraph.converse(),
            options: SolveOptions::pruned(budget),
            cache: HashMap::new(),
            dd_gadget: None,
            lp_gadget: None,
        }
    }

    fn solve(&mut self, target: Target, kind: ParameterKind) -> Solved {
        if let Some(hit) = self.cache.get(&(target, kind)) {
            return hit.clone();
        }
        let d: &Digraph = match target {
            Target::Base => self.digraph,
            Target::Converse => &self.converse,
            Target::DdGadget => self.dd_gadget.get_or_insert_with(|| reduce_domination_gadget(self.digraph)),
            Target::LpGadget => self.lp_gadget.get_or_insert_with(|| reduce_packing_gadget(self.digraph)),
        };
        let result = solve_with(d, kind, self.options).expect("audit kinds use k <= 2");
        let solved = match result.status {
            SolveStatus::Optimal => Solved::Value(
                result.value.expect("optimal has value"),
                result.witness.expect("optimal has witness"),
            ),
            SolveStatus::Infeasible => Solved::Infeasible,
            SolveStatus::BudgetExceeded => Solved::Unknown,
        };
        self.cache.insert((target, kind), solved.clone());
        solved
    }

    /// Value and witness, or the symbol of the parameter that did not finish.
    fn value(&mut self, target: Target, kind: ParameterKind) -> Result<(usize, VertexSet), String> {
        let label = match target {
            Target::Base => kind.symbol(),
            Target::Converse => format!("{}(D⁻¹)", kind.symbol()),
            Target::DdGadget => format!("{}(D′)", kind.symbol()),
            Target::LpGadget => format!("{}(D″)", kind.symbol()),
        };
        match self.solve(target, kind) {
            Solved::Value(v, w) => Ok((v, w)),
            Solved::Infeasible => Err(format!("{label} infeasible")),
            Solved::Unknown => Err(label),
        }
    }
}

/// γ×ᵣ for r ∈ {1,2}: r = 1 is plain domination.
fn tuple_domination(r: usize) -> ParameterKind {
    if r == 1 {
        ParameterKind::Domination
    } else {
        ParameterKind::DoubleDomination
    }
}

fn limited_packing(k: usize) -> ParameterKind {
    if k == 1 {
        ParameterKind::Packing
    } else {
        ParameterKind::TwoLimitedPacking
    }
}

/// Vertices that are neither end-vertices nor penultimate.
fn interior_vertices(c: &VertexClassification) -> VertexSet {
    c.end_vertices.union(&c.penultimate_vertices).complement()
}

/// Degree condition of the γᵗ×₂ = n characterisation: every vertex that is
/// neither an end-vertex nor penultimate has in-degree at most one.
pub fn ng1_condition(d: &Digraph) -> bool {
    interior_vertices(&d.classify()).iter().all(|v| d.in_degree(v) <= 1)
}

/// Degree condition of the corollary: in- and out-degree at most one on the same vertices.
pub fn ng1_corollary_condition(d: &Digraph) -> bool {
    interior_vertices(&d.classify())
        .iter()
        .all(|v| d.in_degree(v) <= 1 && d.out_degree(v) <= 1)
}

/// Structural Ω certificate for a 2-limited packing `b`: D⟨B⟩ functional,
/// every member of in-degree δ⁻, every non-member with exactly two
/// out-neighbors in B.
pub fn omega_structure(d: &Digraph, b: &VertexSet) -> bool {
    let delta = d.min_in_degree();
    let outs_in_b = |v: usize| d.out_neighbors(v).iter().filter(|&&w| b.contains(w)).count();
    (0..d.order()).all(|v| {
        if b.contains(v) {
            outs_in_b(v) == 1 && d.in_degree(v) == delta
        } else {
            outs_in_b(v) == 2
        }
    })
}

/// Structural Θ certificate for a double dominating set `s`: D⟨S⟩
/// contrafunctional, every member of out-degree Δ⁺, every non-member with
/// exactly two in-neighbors in S.
pub fn theta_structure(d: &Digraph, s: &VertexSet) -> bool {
    let delta = d.max_out_degree();
    let ins_in_s = |v: usize| d.in_neighbors(v).iter().filter(|&&w| s.contains(w)).count();
    (0..d.order()).all(|v| {
        if s.contains(v) {
            ins_in_s(v) == 1 && d.out_degree(v) == delta
        } else {
            ins_in_s(v) == 2
        }
    })
}

/// All audit records for one digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    pub classification: VertexClassification,
    pub records: Vec<BoundRecord>,
}

impl BoundReport {
    pub fn record(&self, id: TheoremId) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.theorem_id == id)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRecord> {
        self.records.iter().filter(|r| r.is_violated())
    }
}

/// Evaluates every result whose hypotheses the digraph meets.
pub fn bounds_report(d: &Digraph, budget: u64) -> BoundReport {
    let mut oracle = Oracle::new(d, budget);
    let classification = d.classify();
    let records = TheoremId::all()
        .into_iter()
        .map(|id| evaluate(&mut oracle, &classification, id))
        .collect();
    BoundReport { n: d.order(), m: d.arc_count(), classification, records }
}

/// Evaluates a single record.
pub fn evaluate_theorem(d: &Digraph, id: TheoremId, budget: u64) -> BoundRecord {
    let mut oracle = Oracle::new(d, budget);
    evaluate(&mut oracle, &d.classify(), id)
}

fn evaluate(oracle: &mut Oracle<'_>, c: &VertexClassification, id: TheoremId) -> BoundRecord {
    let d = oracle.digraph;
    let n = d.order();
    let tree_gate = |c: &VertexClassification| -> Result<String, String> {
        if c.is_directed_tree && n >= 2 {
            Ok("directed tree, n ≥ 2".into())
        } else if c.is_directed_tree {
            Err("needs n ≥ 2".into())
        } else {
            Err("not a directed tree".into())
        }
    };
    let connected_gate = |min_n: usize| -> Result<String, String> {
        if !c.is_connected {
            Err("not connected".into())
        } else if n < min_n {
            Err(format!("needs n ≥ {min_n} (n = {n})"))
        } else {
            Ok(format!("connected, n ≥ {min_n}"))
        }
    };
    let min_in_gate = |need: usize| -> Result<String, String> {
        if n >= 1 && c.min_in_degree >= need {
            Ok(format!("δ⁻ = {} ≥ {need}", c.min_in_degree))
        } else {
            Err(format!("needs δ⁻ ≥ {need} (δ⁻ = {})", c.min_in_degree))
        }
    };

    // (gate, relation, body). The body returns lhs, rhs, witnesses,
    // characterisation and detail, or the name of the unsolved value.
    let relation = match id {
        TheoremId::T1i | TheoremId::T1ii | TheoremId::ThmTheta | TheoremId::T3 => Relation::Ge,
        TheoremId::RedDd | TheoremId::RedLp | TheoremId::RhoEqGammaTree => Relation::Eq,
        TheoremId::Tng2 if n <= 2 => Relation::Eq,
        TheoremId::Ng1Corollary => Relation::Le,
        _ => Relation::Le,
    };
    let gate = match id {
        TheoremId::T1i => {
            if c.max_out_degree >= 1 {
                Ok(format!("Δ⁺ = {} ≥ 1", c.max_out_degree))
            } else {
                Err("needs Δ⁺ ≥ 1 (Δ⁺ = 0)".into())
            }
        }
        TheoremId::T1ii | TheoremId::Thm123 | TheoremId::ThmTheta => min_in_gate(1),
        TheoremId::T2 { r, .. } => {
            if n == 0 {
                Err("empty digraph".into())
            } else {
                min_in_gate(r - 1)
            }
        }
        TheoremId::Duality | TheoremId::T3 => tree_gate(c),
        TheoremId::RhoEqGammaTree => {
            if c.is_directed_tree {
                Ok("directed tree".into())
            } else {
                Err("not a directed tree".into())
            }
        }
        TheoremId::Ng1 | TheoremId::Ng1Corollary => connected_gate(2),
        TheoremId::Tng2 => connected_gate(1),
        TheoremId::Tng2Product => connected_gate(3),
        TheoremId::RedDd | TheoremId::RedLp => {
            if n >= 1 {
                Ok("any digraph".into())
            } else {
                Err("empty digraph".into())
            }
        }
    };
    let reason = match gate {
        Ok(reason) => reason,
        Err(reason) => return BoundRecord::inapplicable(id, relation, reason),
    };

    match body(oracle, c, id) {
        Ok(out) => {
            let mut status = compare(out.lhs, out.rhs, relation);
            if let Some(characterized) = out.characterization {
                // equality must coincide with the characterisation
                if status.holds() && (status == Status::Equality) != characterized {
                    status = Status::Violated;
                }
            }
            if let Some(false) = out.side_condition {
                status = Status::Violated;
            }
            BoundRecord {
                theorem_id: id,
                applicable: true,
                reason,
                relation,
                lhs: Some(out.lhs),
                rhs: Some(out.rhs),
                status: Some(status),
                characterization: out.characterization,
                witness: out.witness,
                rhs_witness: out.rhs_witness,
                detail: out.detail,
            }
        }
        Err(missing) => BoundRecord::indeterminate(id, relation, reason, &missing),
    }
}

struct BodyOut {
    lhs: Exact,
    rhs: Exact,
    witness: Option<VertexSet>,
    rhs_witness: Option<VertexSet>,
    characterization: Option<bool>,
    /// An extra equality that must hold alongside the main relation.
    side_condition: Option<bool>,
    detail: String,
}

impl BodyOut {
    fn new(lhs: Exact, rhs: Exact) -> Self {
        BodyOut {
            lhs,
            rhs,
            witness: None,
            rhs_witness: None,
            characterization: None,
            side_condition: None,
            detail: String::new(),
        }
    }
}

fn body(oracle: &mut Oracle<'_>, c: &VertexClassification, id: TheoremId) -> Result<BodyOut, String> {
    use ParameterKind as K;
    use Target::*;
    let d = oracle.digraph;
    let n = d.order();
    Ok(match id {
        TheoremId::T1i => {
            let (l2, w) = oracle.value(Base, K::TwoLimitedPacking)?;
            let (rho, rw) = oracle.value(Base, K::Packing)?;
            BodyOut { witness: Some(w), rhs_witness: Some(rw), detail: format!("rho={rho}"), ..BodyOut::new(Exact::int(l2), Exact::int(rho + 1)) }
        }
        TheoremId::T1ii => {
            let (gx2, w) = oracle.value(Base, K::DoubleDomination)?;
            let (gamma, rw) = oracle.value(Base, K::Domination)?;
            BodyOut { witness: Some(w), rhs_witness: Some(rw), detail: format!("gamma={gamma}"), ..BodyOut::new(Exact::int(gx2), Exact::int(gamma + 1)) }
        }
        TheoremId::T2 { k, r } => {
            let (lk, w) = oracle.value(Base, limited_packing(k))?;
            let (gr, rw) = oracle.value(Base, tuple_domination(r))?;
            BodyOut {
                witness: Some(w),
                rhs_witness: Some(rw),
                detail: format!("gamma_x{r}={gr}"),
                ..BodyOut::new(Exact::int(lk), Exact(Ratio::new((k * gr) as i64, r as i64)))
            }
        }
        TheoremId::Thm123 => {
            let (l2, w) = oracle.value(Base, K::TwoLimitedPacking)?;
            let structure = omega_structure(d, &w);
            BodyOut {
                characterization: Some(structure),
                detail: format!("omega_member={structure}"),
                witness: Some(w),
                ..BodyOut::new(Exact::int(l2), Exact::frac(2 * n, c.min_in_degree + 1))
            }
        }
        TheoremId::ThmTheta => {
            let (gx2, w) = oracle.value(Base, K::DoubleDomination)?;
            let structure = theta_structure(d, &w);
            BodyOut {
                characterization: Some(structure),
                detail: format!("theta_member={structure}"),
                witness: Some(w),
                ..BodyOut::new(Exact::int(gx2), Exact::frac(2 * n, c.max_out_degree + 1))
            }
        }
        TheoremId::Duality => {
            let (l2t, w) = oracle.value(Base, K::Total2LimitedPacking)?;
            let (gt2, rw) = oracle.value(Base, K::Total2Domination)?;
            BodyOut { witness: Some(w), rhs_witness: Some(rw), detail: format!("gap={}", gt2 as i64 - l2t as i64), ..BodyOut::new(Exact::int(l2t), Exact::int(gt2)) }
        }
        TheoremId::T3 => {
            let (gt2, w) = oracle.value(Base, K::Total2Domination)?;
            let numerator = (2 * n + c.e + 2) as i64 - c.p as i64;
            BodyOut {
                witness: Some(w),
                detail: format!("e={} p={}", c.e, c.p),
                ..BodyOut::new(Exact::int(gt2), Exact(Ratio::new(numerator, 3)))
            }
        }
        TheoremId::Ng1 => {
            let (gt2, w) = oracle.value(Base, K::Total2Domination)?;
            let condition = ng1_condition(d);
            BodyOut { witness: Some(w), characterization: Some(condition), detail: format!("degree_condition={condition}"), ..BodyOut::new(Exact::int(gt2), Exact::int(n)) }
        }
        TheoremId::Ng1Corollary => {
            let (a, w) = oracle.value(Base, K::Total2Domination)?;
            let (b, rw) = oracle.value(Converse, K::Total2Domination)?;
            let condition = ng1_corollary_condition(d);
            BodyOut {
                witness: Some(w),
                rhs_witness: Some(rw),
                characterization: Some(condition),
                detail: format!("gamma_t2={a} gamma_t2_converse={b} product={} degree_condition={condition}", a * b),
                ..BodyOut::new(Exact::int(a + b), Exact::int(2 * n))
            }
        }
        TheoremId::Tng2 | TheoremId::Tng2Product => {
            let (a, w) = oracle.value(Base, K::Total2LimitedPacking)?;
            let (b, rw) = oracle.value(Converse, K::Total2LimitedPacking)?;
            let detail = format!("l2t={a} l2t_converse={b}");
            let (lhs, rhs) = match (id, n) {
                (TheoremId::Tng2, 1 | 2) => (Exact::int(a + b), Exact::int(2 * n)),
                (TheoremId::Tng2, _) => (Exact::int(a + b), Exact::frac(16 * n, 9)),
                _ => (Exact::int(a * b), Exact::frac(64 * n * n, 81)),
            };
            BodyOut { witness: Some(w), rhs_witness: Some(rw), detail, ..BodyOut::new(lhs, rhs) }
        }
        TheoremId::RedDd => {
            let (gamma, rw) = oracle.value(Base, K::Domination)?;
            let (gx2, w) = oracle.value(DdGadget, K::DoubleDomination)?;
            let (gt2, _) = oracle.value(DdGadget, K::Total2Domination)?;
            BodyOut {
                witness: Some(w),
                rhs_witness: Some(rw),
                side_condition: Some(gt2 == 2 * n + gamma),
                detail: format!("gamma={gamma} gamma_x2_gadget={gx2} gamma_t2_gadget={gt2}"),
                ..BodyOut::new(Exact::int(gx2), Exact::int(2 * n + gamma))
            }
        }
        TheoremId::RedLp => {
            let (rho, rw) = oracle.value(Base, K::Packing)?;
            let (l2, w) = oracle.value(LpGadget, K::TwoLimitedPacking)?;
            let (l2t, _) = oracle.value(LpGadget, K::Total2LimitedPacking)?;
            BodyOut {
                witness: Some(w),
                rhs_witness: Some(rw),
                side_condition: Some(l2t == n + rho),
                detail: format!("rho={rho} l2_gadget={l2} l2t_gadget={l2t}"),
                ..BodyOut::new(Exact::int(l2), Exact::int(n + rho))
            }
        }
        TheoremId::RhoEqGammaTree => {
            let (rho, w) = oracle.value(Base, K::Packing)?;
            let (gamma, rw) = oracle.value(Base, K::Domination)?;
            BodyOut { witness: Some(w), rhs_witness: Some(rw), ..BodyOut::new(Exact::int(rho), Exact::int(gamma)) }
        }
    })
}

/// Sum and product of Lᵗ₂ over a connected digraph and its converse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NordhausGaddumRecord {
    pub n: usize,
    pub l2t: Option<usize>,
    pub l2t_converse: Option<usize>,
    pub sum: Option<usize>,
    pub product: Option<usize>,
    /// 16n/9, or 2n when n ≤ 2 (where the sum is exactly 2n).
    pub sum_bound: Exact,
    /// 64n²/81; not a bound for n ≤ 2.
    pub product_bound: Exact,
    pub sum_status: Status,
    /// `None` for n ≤ 2.
    pub product_status: Option<Status>,
    pub status: Status,
}

pub fn nordhaus_gaddum_check(d: &Digraph, budget: u64) -> Result<NordhausGaddumRecord, AnalysisError> {
    let n = d.order();
    if n == 0 || !d.is_weakly_connected() {
        return Err(AnalysisError::Precondition("Nordhaus–Gaddum check needs a connected digraph".into()));
    }
    let mut oracle = Oracle::new(d, budget);
    let a = oracle.value(Target::Base, ParameterKind::Total2LimitedPacking).ok().map(|x| x.0);
    let b = oracle.value(Target::Converse, ParameterKind::Total2LimitedPacking).ok().map(|x| x.0);
    let small = n <= 2;
    let sum_bound = if small { Exact::int(2 * n) } else { Exact::frac(16 * n, 9) };
    let product_bound = Exact::frac(64 * n * n, 81);
    let (sum, product) = match (a, b) {
        (Some(a), Some(b)) => (Some(a + b), Some(a * b)),
        _ => (None, None),
    };
    let sum_status = match sum {
        None => Status::Indeterminate,
        Some(s) if small => compare(Exact::int(s), sum_bound, Relation::Eq),
        Some(s) => compare(Exact::int(s), sum_bound, Relation::Le),
    };
    let product_status = if small {
        None
    } else {
        Some(product.map_or(Status::Indeterminate, |p| compare(Exact::int(p), product_bound, Relation::Le)))
    };
    let status = combine(std::iter::once(sum_status).chain(product_status));
    Ok(NordhausGaddumRecord {
        n,
        l2t: a,
        l2t_converse: b,
        sum,
        product,
        sum_bound,
        product_bound,
        sum_status,
        product_status,
        status,
    })
}

/// Worst status wins: violated, then indeterminate, then holds, then equality.
fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
    let rank = |s: Status| match s {
        Status::Violated => 3,
        Status::Indeterminate => 2,
        Status::Holds => 1,
        Status::Equality => 0,
    };
    statuses.into_iter().max_by_key(|&s| rank(s)).unwrap_or(Status::Equality)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityRecord {
    pub n: usize,
    pub l2t: Option<usize>,
    pub gamma_t2: Option<usize>,
    pub status: Status,
    /// γᵗ×₂ − Lᵗ₂.
    pub gap: Option<i64>,
    pub l2t_witness: Option<VertexSet>,
    pub gamma_t2_witness: Option<VertexSet>,
}

/// Lᵗ₂(T) ≤ γᵗ×₂(T) on a directed tree. A violation is returned as
/// [`AnalysisError::ProvenBoundViolated`].
pub fn duality_check(t: &Digraph, budget: u64) -> Result<DualityRecord, AnalysisError> {
    let c = t.classify();
    if !c.is_directed_tree || t.order() < 2 {
        return Err(AnalysisError::Precondition("duality check needs a directed tree with n ≥ 2".into()));
    }
    let mut oracle = Oracle::new(t, budget);
    let packing = oracle.value(Target::Base, ParameterKind::Total2LimitedPacking).ok();
    let domination = oracle.value(Target::Base, ParameterKind::Total2Domination).ok();
    let (status, gap) = match (&packing, &domination) {
        (Some((l, _)), Some((g, _))) => (compare(Exact::int(*l), Exact::int(*g), Relation::Le), Some(*g as i64 - *l as i64)),
        _ => (Status::Indeterminate, None),
    };
    let record = DualityRecord {
        n: t.order(),
        l2t: packing.as_ref().map(|p| p.0),
        gamma_t2: domination.as_ref().map(|p| p.0),
        status,
        gap,
        l2t_witness: packing.map(|p| p.1),
        gamma_t2_witness: domination.map(|p| p.1),
    };
    if status == Status::Violated {
        return Err(AnalysisError::ProvenBoundViolated(format!(
            "Lᵗ₂ = {:?} > γᵗ×₂ = {:?} on directed tree {t:?}",
            record.l2t, record.gamma_t2
        )));
    }
    Ok(record)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetIdentity {
    /// γ(D) or ρ(D).
    pub base_value: Option<usize>,
    /// 2n + γ(D) or n + ρ(D).
    pub expected: Option<usize>,
    /// γ×₂(D′) or L₂(D″).
    pub first: Option<usize>,
    /// γᵗ×₂(D′) or Lᵗ₂(D″).
    pub second: Option<usize>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionRecord {
    pub n: usize,
    pub domination_gadget: GadgetIdentity,
    pub packing_gadget: GadgetIdentity,
}

/// Solves both gadgets and checks `γ×₂(D′) = γᵗ×₂(D′) = 2n + γ(D)` and
/// `L₂(D″) = Lᵗ₂(D″) = n + ρ(D)`.
pub fn reduction_identity_check(d: &Digraph, budget: u64) -> ReductionRecord {
    let n = d.order();
    let mut oracle = Oracle::new(d, budget);
    let mut identity = |base: ParameterKind, gadget: Target, first: ParameterKind, second: ParameterKind, offset: usize| {
        let base_value = oracle.value(Target::Base, base).ok().map(|x| x.0);
        let first = oracle.value(gadget, first).ok().map(|x| x.0);
        let second = oracle.value(gadget, second).ok().map(|x| x.0);
        let expected = base_value.map(|v| v + offset);
        let status = match (expected, first, second) {
            (Some(e), Some(a), Some(b)) if a == e && b == e => Status::Equality,
            (Some(_), Some(_), Some(_)) => Status::Violated,
            _ => Status::Indeterminate,
        };
        GadgetIdentity { base_value, expected, first, second, status }
    };
    let domination_gadget = identity(ParameterKind::Domination, Target::DdGadget, ParameterKind::DoubleDomination, ParameterKind::Total2Domination, 2 * n);
    let packing_gadget = identity(ParameterKind::Packing, Target::LpGadget, ParameterKind::TwoLimitedPacking, ParameterKind::Total2LimitedPacking, n);
    ReductionRecord { n, domination_gadget, packing_gadget }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoGammaRecord {
    pub n: usize,
    pub rho: Option<usize>,
    pub gamma: Option<usize>,
    pub status: Status,
}

/// ρ(T) = γ(T) on a directed tree, used as an extra cross-check of the solver.
pub fn tree_rho_gamma_check(t: &Digraph, budget: u64) -> Result<RhoGammaRecord, AnalysisError> {
    if !t.classify().is_directed_tree {
        return Err(AnalysisError::Precondition("ρ = γ check needs a directed tree".into()));
    }
    let mut oracle = Oracle::new(t, budget);
    let rho = oracle.value(Target::Base, ParameterKind::Packing).ok().map(|x| x.0);
    let gamma = oracle.value(Target::Base, ParameterKind::Domination).ok().map(|x| x.0);
    let status = match (rho, gamma) {
        (Some(a), Some(b)) => compare(Exact::int(a), Exact::int(b), Relation::Eq),
        _ => Status::Indeterminate,
    };
    Ok(RhoGammaRecord { n: t.order(), rho, gamma, status })
}

/// What a counterexample search looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "theorem")]
pub enum Problem {
    /// Does Lᵗ₂ ≤ γᵗ×₂ hold beyond directed trees? Samples non-tree digraphs without isolated vertices.
    P1Duality,
    /// Which directed trees have Lᵗ₂ = γᵗ×₂? Collects the equality cases.
    P2TreeEquality,
    /// Re-audit one proven result on sampled instances.
    Theorem(TheoremId),
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p1" | "p1_duality_general" | "p1-duality-general" => Ok(Problem::P1Duality),
            "p2" | "p2_tree_equality" | "p2-tree-equality" => Ok(Problem::P2TreeEquality),
            _ => s.parse::<TheoremId>().map(Problem::Theorem),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::P1Duality => f.write_str("P1"),
            Problem::P2TreeEquality => f.write_str("P2"),
            Problem::Theorem(id) => write!(f, "{id}"),
        }
    }
}

/// A serialized instance found by a search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub index: u64,
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
    pub detail: String,
}

/// An equality tree for the P2 census, with the classification data that
/// any characterisation would be phrased in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub index: u64,
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
    pub value: usize,
    pub e: usize,
    pub p: usize,
    pub l2t_witness: VertexSet,
    pub gamma_t2_witness: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub problem: Problem,
    pub generator: String,
    pub trials: usize,
    /// Instances actually evaluated.
    pub examined: usize,
    /// Instances outside the problem's scope (e.g. trees in P1 mode).
    pub filtered: usize,
    /// Instances where a needed value ran out of budget.
    pub skipped_budget: usize,
    pub violations: Vec<Finding>,
    pub equality_count: usize,
    pub holds_count: usize,
    pub corpus: Vec<CorpusEntry>,
}

impl SearchReport {
    /// A P1 violation is a new finding; any other violation contradicts a proven result.
    pub fn has_open_problem_finding(&self) -> bool {
        self.problem == Problem::P1Duality && !self.violations.is_empty()
    }

    pub fn has_proven_violation(&self) -> bool {
        self.problem != Problem::P1Duality && !self.violations.is_empty()
    }
}

/// Samples instances from `gen` and looks for violations or equality cases.
/// Exhaustive sources ignore `trials`. Budget overruns are counted, not fatal.
pub fn counterexample_search(problem: Problem, gen: &GenSpec, trials: usize, budget: u64) -> Result<SearchReport, AnalysisError> {
    let mut report = SearchReport {
        problem,
        generator: gen.to_string(),
        trials,
        examined: 0,
        filtered: 0,
        skipped_budget: 0,
        violations: Vec::new(),
        equality_count: 0,
        holds_count: 0,
        corpus: Vec::new(),
    };
    for (index, d) in gen.instances(trials)? {
        let finding = |detail: String| Finding { index, n: d.order(), arcs: d.arcs().collect(), detail };
        match problem {
            Problem::P1Duality | Problem::P2TreeEquality => {
                let c = d.classify();
                let in_scope = match problem {
                    Problem::P1Duality => !c.is_directed_tree && !d.has_isolated_vertex(),
                    _ => c.is_directed_tree && d.order() >= 2,
                };
                if !in_scope {
                    report.filtered += 1;
                    continue;
                }
                let mut oracle = Oracle::new(&d, budget);
                let packing = oracle.value(Target::Base, ParameterKind::Total2LimitedPacking);
                let domination = oracle.value(Target::Base, ParameterKind::Total2Domination);
                let ((l, lw), (g, gw)) = match (packing, domination) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => {
                        report.skipped_budget += 1;
                        continue;
                    }
                };
                report.examined += 1;
                if l > g {
                    report.violations.push(finding(format!("l2t={l} gamma_t2={g} l2t_witness={lw} gamma_t2_witness={gw}")));
                } else if l == g {
                    report.equality_count += 1;
                    if problem == Problem::P2TreeEquality {
                        report.corpus.push(CorpusEntry {
                            index,
                            n: d.order(),
                            arcs: d.arcs().collect(),
                            value: l,
                            e: c.e,
                            p: c.p,
                            l2t_witness: lw,
                            gamma_t2_witness: gw,
                        });
                    }
                } else {
                    report.holds_count += 1;
                }
            }
            Problem::Theorem(id) => {
                let record = evaluate_theorem(&d, id, budget);
                match record.status {
                    None => report.filtered += 1,
                    Some(Status::Indeterminate) => report.skipped_budget += 1,
                    Some(status) => {
                        report.examined += 1;
                        match status {
                            Status::Violated => report.violations.push(finding(format!(
                                "lhs={} rhs={} {}",
                                record.lhs.map(|x| x.to_string()).unwrap_or_default(),
                                record.rhs.map(|x| x.to_string()).unwrap_or_default(),
                                record.detail
                            ))),
                            Status::Equality => report.equality_count += 1,
                            _ => report.holds_count += 1,
                        }
                    }
                }
            }
        }
    }
    report.violations.sort_by_key(|f| f.index);
    Ok(report)
}

/// Outcome counts for one result over a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremTally {
    pub theorem_id: TheoremId,
    pub not_applicable: usize,
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub indeterminate: usize,
    /// Up to [`MAX_RECORDED_FINDINGS`] violating instances.
    pub violations: Vec<Finding>,
}

pub const MAX_RECORDED_FINDINGS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusAudit {
    pub generator: String,
    pub instances: usize,
    pub tallies: Vec<TheoremTally>,
}

impl CorpusAudit {
    pub fn tally(&self, id: TheoremId) -> Option<&TheoremTally> {
        self.tallies.iter().find(|t| t.theorem_id == id)
    }

    pub fn violated(&self) -> bool {
        self.tallies.iter().any(|t| t.violated > 0)
    }
}

/// Runs [`bounds_report`] on every generated instance and tallies outcomes.
pub fn audit_corpus(gen: &GenSpec, trials: usize, budget: u64) -> Result<CorpusAudit, AnalysisError> {
    let mut tallies: Vec<TheoremTally> = TheoremId::all()
        .into_iter()
        .map(|theorem_id| TheoremTally {
            theorem_id,
            not_applicable: 0,
            holds: 0,
            equality: 0,
            violated: 0,
            indeterminate: 0,
            violations: Vec::new(),
        })
        .collect();
    let mut instances = 0;
    for (index, d) in gen.instances(trials)? {
        instances += 1;
        let report = bounds_report(&d, budget);
        for (tally, record) in tallies.iter_mut().zip(&report.records) {
            match record.status {
                None => tally.not_applicable += 1,
                Some(Status::Holds) => tally.holds += 1,
                Some(Status::Equality) => tally.equality += 1,
                Some(Status::Indeterminate) => tally.indeterminate += 1,
                Some(Status::Violated) => {
                    tally.violated += 1;
                    if tally.violations.len() < MAX_RECORDED_FINDINGS {
                        tally.violations.push(Finding {
                            index,
                            n: d.order(),
                            arcs: d.arcs().collect(),
                            detail: format!(
                                "lhs={} rhs={} {}",
                                record.lhs.map(|x| x.to_string()).unwrap_or_default(),
                                record.rhs.map(|x| x.to_string()).unwrap_or_default(),
                                record.detail
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(CorpusAudit { generator: gen.to_string(), instances, tallies })
}
