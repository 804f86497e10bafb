//! Seeded random and exhaustive instance sources.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64`, so a given
//! `(parameters, seed)` pair always yields the same digraph.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::GenError;

/// Default largest order accepted by [`enumerate_directed_trees`].
pub const DEFAULT_TREE_ENUMERATION_CAP: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered pair `(u,v)`, `u != v`, becomes an arc independently with probability `arc_prob`.
pub fn random_digraph(n: usize, arc_prob: f64, seed: u64) -> Result<Digraph, GenError> {
    if n == 0 {
        return Err(GenError::Invalid("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&arc_prob) {
        return Err(GenError::Invalid(format!("arc probability {arc_prob} outside [0,1]")));
    }
    let mut rng = rng(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(arc_prob) {
                arcs.push((u, v));
            }
        }
    }
    Ok(Digraph::new(n, arcs).expect("generated arcs are valid"))
}

/// Decodes a Prüfer sequence over `0..n` (length `n - 2`) into tree edges `(min, max)`.
pub fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && code.len() == n - 2, "Prüfer code length must be n-2");
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Orients `edges` by the low bits of `orientation`: bit i clear keeps
/// `edges[i]` as `min -> max`, set reverses it.
fn orient(n: usize, edges: &[(usize, usize)], orientation: u64) -> Digraph {
    let arcs = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| if orientation >> i & 1 == 0 { (a, b) } else { (b, a) });
    Digraph::new(n, arcs).expect("tree arcs are valid")
}

/// Uniform labeled tree (via a uniform Prüfer code) with each edge oriented by a fair coin.
pub fn random_directed_tree(n: usize, seed: u64) -> Result<Digraph, GenError> {
    if n == 0 {
        return Err(GenError::Invalid("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok(Digraph::empty(1));
    }
    let mut rng = rng(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let edges = prufer_decode(&code, n);
    let arcs = edges
        .into_iter()
        .map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
    Ok(Digraph::new(n, arcs).expect("tree arcs are valid"))
}

/// Number of Prüfer codes on `n` labels, nⁿ⁻² (1 for n = 1).
pub fn labeled_tree_count(n: usize) -> u64 {
    if n <= 2 {
        1
    } else {
        (n as u64).pow(n as u32 - 2)
    }
}

/// Every labeled tree on `n` vertices under every edge orientation:
/// nⁿ⁻²·2ⁿ⁻¹ digraphs, no isomorphism reduction.
pub fn enumerate_directed_trees(n: usize) -> Result<DirectedTrees, GenError> {
    enumerate_directed_trees_capped(n, DEFAULT_TREE_ENUMERATION_CAP)
}

pub fn enumerate_directed_trees_capped(n: usize, cap: usize) -> Result<DirectedTrees, GenError> {
    if n == 0 {
        return Err(GenError::Invalid("n must be at least 1".into()));
    }
    if n > cap {
        return Err(GenError::AboveCap { n, cap });
    }
    Ok(DirectedTrees::over_codes(n, 0..labeled_tree_count(n)))
}

/// Stream of directed trees for a range of Prüfer-code indices. Ranges can be
/// handed to independent workers.
#[derive(Debug, Clone)]
pub struct DirectedTrees {
    n: usize,
    code: u64,
    code_end: u64,
    orientation: u64,
    edges: Option<Vec<(usize, usize)>>,
}

impl DirectedTrees {
    pub fn over_codes(n: usize, codes: std::ops::Range<u64>) -> Self {
        DirectedTrees {
            n,
            code: codes.start,
            code_end: codes.end.min(labeled_tree_count(n)),
            orientation: 0,
            edges: None,
        }
    }

    /// Exact number of items the stream yields in total.
    pub fn total(&self) -> u64 {
        let orientations = 1u64 << self.n.saturating_sub(1);
        self.code_end.saturating_sub(self.code) * orientations
    }

    fn code_digits(&self, index: u64) -> Vec<usize> {
        let n = self.n as u64;
        let len = self.n.saturating_sub(2);
        let mut digits = vec![0usize; len];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = (rest % n) as usize;
            rest /= n;
        }
        digits
    }
}

impl Iterator for DirectedTrees {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        if self.code >= self.code_end {
            return None;
        }
        if self.n == 1 {
            self.code += 1;
            return Some(Digraph::empty(1));
        }
        if self.edges.is_none() {
            self.edges = Some(prufer_decode(&self.code_digits(self.code), self.n));
        }
        let tree = orient(self.n, self.edges.as_ref().expect("decoded above"), self.orientation);
        self.orientation += 1;
        if self.orientation == 1u64 << (self.n - 1) {
            self.orientation = 0;
            self.code += 1;
            self.edges = None;
        }
        Some(tree)
    }
}

/// Directed star: center 0 with arcs to leaves `1..=a` and from leaves `a+1..=a+b`.
pub fn directed_star(a: usize, b: usize) -> Result<Digraph, GenError> {
    if a + b == 0 {
        return Err(GenError::Invalid("a directed star needs a + b >= 1".into()));
    }
    let arcs = (1..=a).map(|l| (0, l)).chain((a + 1..=a + b).map(|l| (l, 0)));
    Ok(Digraph::new(a + b + 1, arcs).expect("star arcs are valid"))
}

/// Every vertex gets one out-arc to a uniformly chosen other vertex.
pub fn random_functional(n: usize, seed: u64) -> Result<Digraph, GenError> {
    if n < 2 {
        return Err(GenError::Invalid("a functional digraph without loops needs n >= 2".into()));
    }
    let mut rng = rng(seed);
    let arcs: Vec<(usize, usize)> = (0..n)
        .map(|v| {
            let r = rng.gen_range(0..n - 1);
            (v, if r >= v { r + 1 } else { r })
        })
        .collect();
    Ok(Digraph::new(n, arcs).expect("functional arcs are valid"))
}

/// Converse of a [`random_functional`] draw: every vertex has in-degree one.
pub fn random_contrafunctional(n: usize, seed: u64) -> Result<Digraph, GenError> {
    random_functional(n, seed).map(|d| d.converse())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    RandomDigraph,
    RandomDirectedTree,
    EnumerateDirectedTrees,
    DirectedStar,
    RandomFunctional,
    RandomContrafunctional,
}

/// A generator description, written on the command line as colon-separated
/// `key=value` fields after a kind tag:
///
/// ```text
/// random:n=8:p=0.3:seed=7        trees:n=6:exhaustive     tree:n=9
/// star:a=2:b=3                   functional:n=5           contrafunctional:n=5
/// ```
///
/// A `trials=N` field is accepted as a convenience for callers that sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub arc_prob: f64,
    pub a: usize,
    pub b: usize,
    pub seed: u64,
    pub trials: Option<usize>,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize) -> Self {
        GenSpec { kind, n, arc_prob: 0.5, a: 0, b: 0, seed: 0, trials: None }
    }

    pub fn random(n: usize, arc_prob: f64, seed: u64) -> Self {
        GenSpec { arc_prob, seed, ..Self::new(GenKind::RandomDigraph, n) }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.kind == GenKind::DirectedStar {
            if self.a + self.b == 0 {
                return Err(GenError::Invalid("star needs a + b >= 1".into()));
            }
            return Ok(());
        }
        if self.n == 0 {
            return Err(GenError::Invalid("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.arc_prob) {
            return Err(GenError::Invalid(format!("arc probability {} outside [0,1]", self.arc_prob)));
        }
        if matches!(self.kind, GenKind::RandomFunctional | GenKind::RandomContrafunctional) && self.n < 2 {
            return Err(GenError::Invalid("functional digraphs need n >= 2".into()));
        }
        if self.kind == GenKind::EnumerateDirectedTrees && self.n > DEFAULT_TREE_ENUMERATION_CAP {
            return Err(GenError::AboveCap { n: self.n, cap: DEFAULT_TREE_ENUMERATION_CAP });
        }
        Ok(())
    }

    /// Whether the source yields a fixed, finite instance list regardless of trial count.
    pub fn is_exhaustive(&self) -> bool {
        matches!(self.kind, GenKind::EnumerateDirectedTrees | GenKind::DirectedStar)
    }

    /// The instance for trial `index`; random kinds use seed `seed + index`.
    pub fn sample(&self, index: u64) -> Result<Digraph, GenError> {
        self.validate()?;
        let seed = self.seed.wrapping_add(index);
        match self.kind {
            GenKind::RandomDigraph => random_digraph(self.n, self.arc_prob, seed),
            GenKind::RandomDirectedTree => random_directed_tree(self.n, seed),
            GenKind::RandomFunctional => random_functional(self.n, seed),
            GenKind::RandomContrafunctional => random_contrafunctional(self.n, seed),
            GenKind::DirectedStar => directed_star(self.a, self.b),
            GenKind::EnumerateDirectedTrees => {
                let per_code = 1u64 << (self.n - 1);
                DirectedTrees::over_codes(self.n, index / per_code..index / per_code + 1)
                    .nth((index % per_code) as usize)
                    .ok_or_else(|| GenError::Invalid(format!("tree index {index} out of range")))
            }
        }
    }

    /// `(index, instance)` pairs: every instance for exhaustive sources,
    /// `trials` samples otherwise.
    pub fn instances(&self, trials: usize) -> Result<Box<dyn Iterator<Item = (u64, Digraph)> + '_>, GenError> {
        self.validate()?;
        Ok(match self.kind {
            GenKind::EnumerateDirectedTrees => {
                Box::new(enumerate_directed_trees(self.n)?.enumerate().map(|(i, d)| (i as u64, d)))
            }
            GenKind::DirectedStar => Box::new(std::iter::once((0, directed_star(self.a, self.b)?))),
            _ => Box::new((0..trials as u64).map(move |i| (i, self.sample(i).expect("validated spec")))),
        })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::RandomDigraph => write!(f, "random:n={}:p={}:seed={}", self.n, self.arc_prob, self.seed),
            GenKind::RandomDirectedTree => write!(f, "tree:n={}:seed={}", self.n, self.seed),
            GenKind::EnumerateDirectedTrees => write!(f, "trees:n={}:exhaustive", self.n),
            GenKind::DirectedStar => write!(f, "star:a={}:b={}", self.a, self.b),
            GenKind::RandomFunctional => write!(f, "functional:n={}:seed={}", self.n, self.seed),
            GenKind::RandomContrafunctional => write!(f, "contrafunctional:n={}:seed={}", self.n, self.seed),
        }
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut fields = s.split(':');
        let tag = fields.next().unwrap_or_default().trim().to_ascii_lowercase();
        let mut spec = GenSpec::new(GenKind::RandomDigraph, 0);
        let mut exhaustive = false;
        let bad = |msg: String| GenError::Invalid(msg);
        for field in fields {
            let field = field.trim();
            if field.eq_ignore_ascii_case("exhaustive") {
                exhaustive = true;
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("field `{field}` is not key=value")))?;
            let int = |v: &str| v.parse::<u64>().map_err(|_| bad(format!("`{v}` is not an integer")));
            match key {
                "n" => spec.n = int(value)? as usize,
                "p" | "arc_prob" => {
                    spec.arc_prob = value.parse().map_err(|_| bad(format!("`{value}` is not a probability")))?
                }
                "a" => spec.a = int(value)? as usize,
                "b" => spec.b = int(value)? as usize,
                "seed" => spec.seed = int(value)?,
                "trials" => spec.trials = Some(int(value)? as usize),
                other => return Err(bad(format!("unknown generator field `{other}`"))),
            }
        }
        spec.kind = match (tag.as_str(), exhaustive) {
            ("random", false) => GenKind::RandomDigraph,
            ("tree", false) | ("trees", false) => GenKind::RandomDirectedTree,
            ("tree", true) | ("trees", true) => GenKind::EnumerateDirectedTrees,
            ("star", _) => GenKind::DirectedStar,
            ("functional", false) => GenKind::RandomFunctional,
            ("contrafunctional", false) => GenKind::RandomContrafunctional,
            _ => return Err(bad(format!("unknown generator `{s}`"))),
        };
        if spec.kind == GenKind::DirectedStar {
            spec.n = spec.a + spec.b + 1;
        }
        spec.validate()?;
        Ok(spec)
    }
}
