//! Representation theory over reductive groups: weight systems with exact
//! multiplicities (Freudenthal's recursion per simple factor, tensored across
//! factors), branching along an embedding by iterated peeling of highest
//! dominant weights, and the isotropy module of a pair.

use crate::embed::EmbeddingSpec;
use crate::rootsys::{self, root_system, RootSystem, SimpleType, Weight};
use crate::{Error, Rat, Result};
use num::{BigUint, One, Zero};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

/// A product of simple factors plus a central torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReductiveSpec {
    pub factors: Vec<SimpleType>,
    pub torus_rank: usize,
}

impl ReductiveSpec {
    pub fn new(factors: Vec<SimpleType>, torus_rank: usize) -> Self {
        ReductiveSpec {
            factors,
            torus_rank,
        }
    }

    pub fn simple(t: SimpleType) -> Self {
        ReductiveSpec {
            factors: vec![t],
            torus_rank: 0,
        }
    }

    pub fn torus(rank: usize) -> Self {
        ReductiveSpec {
            factors: Vec::new(),
            torus_rank: rank,
        }
    }

    pub fn dim(&self) -> i64 {
        self.factors
            .iter()
            .map(|t| root_system(*t).dim() as i64)
            .sum::<i64>()
            + self.torus_rank as i64
    }

    pub fn rank(&self) -> i64 {
        self.semisimple_rank() + self.torus_rank as i64
    }

    pub fn semisimple_rank(&self) -> i64 {
        self.factors.iter().map(|t| t.rank as i64).sum()
    }

    /// Number of positive roots.
    pub fn dim_u(&self) -> i64 {
        self.factors
            .iter()
            .map(|t| root_system(*t).num_positive_roots() as i64)
            .sum()
    }

    /// dim B = dim U + rank (the central torus counts toward the rank).
    pub fn dim_b(&self) -> i64 {
        self.dim_u() + self.rank()
    }

    /// A single simple factor, no torus, connected diagram.
    pub fn is_simple(&self) -> bool {
        self.torus_rank == 0
            && self.factors.len() == 1
            && root_system(self.factors[0]).is_irreducible()
    }

    /// Start offset of each factor inside the concatenated coordinates.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.factors.len());
        let mut acc = 0;
        for t in &self.factors {
            off.push(acc);
            acc += t.rank;
        }
        off
    }

    pub fn check_weight_shape(&self, w: &Weight) -> Result<()> {
        if w.coords.len() != self.semisimple_rank() as usize
            || w.torus.len() != self.torus_rank
        {
            return Err(Error::ShapeMismatch(format!(
                "weight {w} does not fit group of semisimple rank {} and torus rank {}",
                self.semisimple_rank(),
                self.torus_rank
            )));
        }
        Ok(())
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::zero(self.semisimple_rank() as usize, self.torus_rank)
    }

    /// Highest weight of the dual module: per-factor `-w₀`, torus charges negated.
    pub fn dual_weight(&self, w: &Weight) -> Result<Weight> {
        self.check_weight_shape(w)?;
        let mut coords = Vec::with_capacity(w.coords.len());
        for (t, off) in self.factors.iter().zip(self.offsets()) {
            let rs = root_system(*t);
            let slice = &w.coords[off..off + t.rank];
            coords.extend(rootsys::dual_weight_coords(rs, slice));
        }
        Ok(Weight::new(coords, w.torus.iter().map(|c| -c).collect()))
    }

    /// Exact dimension of the irreducible with highest weight `w`.
    pub fn weyl_dim(&self, w: &Weight) -> Result<BigUint> {
        self.check_weight_shape(w)?;
        let mut dim = BigUint::one();
        for (t, off) in self.factors.iter().zip(self.offsets()) {
            let rs = root_system(*t);
            dim *= rootsys::weyl_dim(rs, &w.coords[off..off + t.rank])?;
        }
        Ok(dim)
    }

    /// The adjoint module as a list of (highest weight, multiplicity): one
    /// irreducible per connected component of each factor plus `torus_rank`
    /// trivial summands.
    pub fn adjoint_summands(&self) -> Vec<(Weight, u64)> {
        let total = self.semisimple_rank() as usize;
        let mut out: Vec<(Weight, u64)> = Vec::new();
        for (t, off) in self.factors.iter().zip(self.offsets()) {
            let rs = root_system(*t);
            for theta in rs.component_highest_roots() {
                let fw = rs.root_fw(&theta);
                let mut coords = vec![0i64; total];
                coords[off..off + t.rank].copy_from_slice(&fw);
                out.push((Weight::new(coords, vec![Rat::zero(); self.torus_rank]), 1));
            }
        }
        if self.torus_rank > 0 {
            out.push((self.zero_weight(), self.torus_rank as u64));
        }
        out
    }

    /// Height functional on weights: sum of the simple-root coordinates across
    /// factors. Strictly positive on positive roots, so it orders peeling.
    pub fn height(&self, w: &Weight) -> Rat {
        let mut h = Rat::zero();
        for (t, off) in self.factors.iter().zip(self.offsets()) {
            let rs = root_system(*t);
            let slice = &w.coords[off..off + t.rank];
            for row in &rs.cartan_inv {
                // height adds the α-coordinates: Σ_k (C^{-1} λ)_k
                let mut c = Rat::zero();
                for (j, &l) in slice.iter().enumerate() {
                    c += row[j] * Rat::from_integer(l);
                }
                h += c;
            }
        }
        h
    }
}

type WeightTable = Arc<BTreeMap<Vec<i64>, u64>>;
type WeightTableCache = Mutex<HashMap<(SimpleType, Vec<i64>), WeightTable>>;

/// Weight multiset of one irreducible over one simple type. Memoized: the
/// tables are pure functions of `(type, highest weight)`.
fn simple_weight_system(t: SimpleType, lambda: &[i64]) -> WeightTable {
    static CACHE: OnceLock<WeightTableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(t, lambda.to_vec())) {
        return Arc::clone(hit);
    }
    let table = Arc::new(freudenthal(root_system(t), lambda));
    cache
        .lock()
        .unwrap()
        .insert((t, lambda.to_vec()), Arc::clone(&table));
    table
}

/// Whether `λ - μ` is a non-negative integral combination of simple roots.
fn root_lattice_above(rs: &RootSystem, lambda: &[i64], mu: &[i64]) -> bool {
    let diff: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
    for row in &rs.cartan_inv {
        let mut c = Rat::zero();
        for (j, &d) in diff.iter().enumerate() {
            c += row[j] * Rat::from_integer(d);
        }
        if !c.is_integer() || c < Rat::zero() {
            return false;
        }
    }
    true
}

/// All weights of `V_λ` with multiplicities, by Freudenthal's recursion on the
/// dominant weights and Weyl-invariance elsewhere.
fn freudenthal(rs: &RootSystem, lambda: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    assert!(lambda.iter().all(|&c| c >= 0), "highest weight must be dominant");
    let n = rs.rank();
    let simple_fw: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            rs.root_fw(&e)
        })
        .collect();

    // 1. the full weight set: BFS downward from λ, membership via μ⁺ ≤ λ.
    let mut weights: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    weights.insert(lambda.to_vec());
    queue.push_back(lambda.to_vec());
    while let Some(w) = queue.pop_front() {
        for alpha in &simple_fw {
            let cand: Vec<i64> = w.iter().zip(alpha).map(|(a, b)| a - b).collect();
            if weights.contains(&cand) {
                continue;
            }
            let dom = rs.dominant_rep(&cand);
            if root_lattice_above(rs, lambda, &dom) {
                weights.insert(cand.clone());
                queue.push_back(cand);
            }
        }
    }

    // 2. dominant weights by level (height of λ - μ).
    let mut dominants: Vec<(i64, Vec<i64>)> = weights
        .iter()
        .filter(|w| w.iter().all(|&c| c >= 0))
        .map(|w| {
            let diff: Vec<i64> = lambda.iter().zip(w.iter()).map(|(a, b)| a - b).collect();
            let mut level = Rat::zero();
            for row in &rs.cartan_inv {
                for (j, &d) in diff.iter().enumerate() {
                    level += row[j] * Rat::from_integer(d);
                }
            }
            debug_assert!(level.is_integer());
            (level.to_integer(), w.clone())
        })
        .collect();
    dominants.sort();

    // 3. Freudenthal recursion downward.
    let rho = rs.rho();
    let lam_rho: Vec<i64> = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let norm_top = rs.pair_weights(&lam_rho, &lam_rho);
    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    for (level, mu) in &dominants {
        if *level == 0 {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mut acc = Rat::zero();
        for alpha in &rs.positive_roots {
            let alpha_fw = rs.root_fw(alpha);
            let mut k = 1i64;
            loop {
                let shifted: Vec<i64> = mu
                    .iter()
                    .zip(&alpha_fw)
                    .map(|(m, a)| m + k * a)
                    .collect();
                if !weights.contains(&shifted) {
                    break;
                }
                let m = mult[&rs.dominant_rep(&shifted)];
                acc += rs.pair_weight_root(&shifted, alpha) * Rat::from_integer(m as i64);
                k += 1;
            }
        }
        let mu_rho: Vec<i64> = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let den = norm_top - rs.pair_weights(&mu_rho, &mu_rho);
        let value = Rat::from_integer(2) * acc / den;
        assert!(value.is_integer(), "Freudenthal multiplicity must be integral");
        mult.insert(mu.clone(), value.to_integer() as u64);
    }

    // 4. spread over the Weyl orbits.
    weights
        .into_iter()
        .map(|w| {
            let m = mult[&rs.dominant_rep(&w)];
            (w, m)
        })
        .collect()
}

/// Weight multiset of a finite-dimensional module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub entries: BTreeMap<Weight, u64>,
}

impl WeightSystem {
    pub fn total_multiplicity(&self) -> BigUint {
        self.entries
            .values()
            .fold(BigUint::zero(), |acc, &m| acc + BigUint::from(m))
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }
}

/// Full weight multiset of the irreducible `V_λ` over `g`: the product of the
/// per-factor Freudenthal tables; torus charges pass through unchanged.
pub fn weight_system(g: &ReductiveSpec, lambda: &Weight) -> Result<WeightSystem> {
    g.check_weight_shape(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NonDominant(lambda.to_string()));
    }
    let mut partial: Vec<(Vec<i64>, u64)> = vec![(Vec::new(), 1)];
    for (t, off) in g.factors.iter().zip(g.offsets()) {
        let table = simple_weight_system(*t, &lambda.coords[off..off + t.rank]);
        let mut next = Vec::with_capacity(partial.len() * table.len());
        for (prefix, m) in &partial {
            for (w, wm) in table.iter() {
                let mut coords = prefix.clone();
                coords.extend_from_slice(w);
                next.push((coords, m * wm));
            }
        }
        partial = next;
    }
    let mut entries = BTreeMap::new();
    for (coords, m) in partial {
        entries.insert(Weight::new(coords, lambda.torus.clone()), m);
    }
    Ok(WeightSystem { entries })
}

/// A decomposition into irreducibles of `H`: dominant weight → multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub summands: BTreeMap<Weight, u64>,
}

impl Decomposition {
    pub fn dimension(&self, h: &ReductiveSpec) -> Result<BigUint> {
        let mut acc = BigUint::zero();
        for (w, &m) in &self.summands {
            acc += h.weyl_dim(w)? * BigUint::from(m);
        }
        Ok(acc)
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.summands.get(w).copied().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.summands.values().copied().max().unwrap_or(0)
    }

    /// Applies `-w₀` of `H` (and torus negation) to every summand.
    pub fn dualized(&self, h: &ReductiveSpec) -> Result<Decomposition> {
        let mut summands = BTreeMap::new();
        for (w, &m) in &self.summands {
            summands.insert(h.dual_weight(w)?, m);
        }
        Ok(Decomposition { summands })
    }
}

/// Decomposes a weight multiset of `H` into irreducibles by repeatedly peeling
/// the highest remaining dominant weight (height first, then lexicographic).
pub fn peel(h: &ReductiveSpec, multiset: BTreeMap<Weight, i64>) -> Result<Decomposition> {
    let mut remaining: BTreeMap<Weight, i64> =
        multiset.into_iter().filter(|(_, m)| *m != 0).collect();
    let mut summands: BTreeMap<Weight, u64> = BTreeMap::new();
    while !remaining.is_empty() {
        let head = remaining
            .iter()
            .max_by(|(wa, _), (wb, _)| {
                h.height(wa)
                    .cmp(&h.height(wb))
                    .then_with(|| wa.cmp(wb))
            })
            .map(|(w, m)| (w.clone(), *m))
            .expect("nonempty");
        let (top, mult) = head;
        if mult < 0 {
            return Err(Error::InconsistentEmbedding(format!(
                "weight {top} has multiplicity {mult} during peeling"
            )));
        }
        if !top.is_dominant() {
            return Err(Error::InconsistentEmbedding(format!(
                "highest remaining weight {top} is not dominant"
            )));
        }
        let ws = weight_system(h, &top)?;
        for (w, m) in &ws.entries {
            let entry = remaining.entry(w.clone()).or_insert(0);
            *entry -= mult * (*m as i64);
            if *entry == 0 {
                remaining.remove(w);
            } else if *entry < 0 {
                return Err(Error::InconsistentEmbedding(format!(
                    "weight {w} driven negative while removing {mult}·V_{top}"
                )));
            }
        }
        *summands.entry(top).or_insert(0) += mult as u64;
    }
    Ok(Decomposition { summands })
}

/// Branches `V_λ` of `G` along the embedding: restrict every weight through
/// the pair's matrix, then peel.
pub fn branch(e: &EmbeddingSpec, lambda: &Weight) -> Result<Decomposition> {
    let ws = weight_system(&e.big, lambda)?;
    let mut restricted: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w, m) in &ws.entries {
        let rw = e.restrict(w)?;
        *restricted.entry(rw).or_insert(0) += *m as i64;
    }
    let dec = peel(&e.small, restricted)?;
    let got = dec.dimension(&e.small)?;
    let want = e.big.weyl_dim(lambda)?;
    if got != want {
        return Err(Error::Inconsistency(format!(
            "dimension conservation fails in branch: {got} vs {want}"
        )));
    }
    Ok(dec)
}

/// Branches a module given as a list of highest weights with multiplicities.
pub fn branch_module(e: &EmbeddingSpec, module: &[(Weight, u64)]) -> Result<Decomposition> {
    let mut summands: BTreeMap<Weight, u64> = BTreeMap::new();
    for (lam, mult) in module {
        let dec = branch(e, lam)?;
        for (w, m) in dec.summands {
            *summands.entry(w).or_insert(0) += m * mult;
        }
    }
    Ok(Decomposition { summands })
}

/// Branch of the adjoint module of `G` along the embedding.
pub fn branch_adjoint(e: &EmbeddingSpec) -> Result<Decomposition> {
    branch_module(e, &e.big.adjoint_summands())
}

/// Multiplicity of `W_μ` in `V_λ^* |_H`; this equals the multiplicity of the
/// pair `(λ, μ)` in the rank monoid of the double space.
pub fn multiplicity(e: &EmbeddingSpec, lambda: &Weight, mu: &Weight) -> Result<u64> {
    if !lambda.is_dominant() {
        return Err(Error::NonDominant(lambda.to_string()));
    }
    if !mu.is_dominant() {
        return Err(Error::NonDominant(mu.to_string()));
    }
    let dual = e.big.dual_weight(lambda)?;
    Ok(branch(e, &dual)?.multiplicity(mu))
}

/// The isotropy module `m ≅ g/h`: the branched adjoint of `G` minus the
/// adjoint summands of `H`.
pub fn isotropy_module(e: &EmbeddingSpec) -> Result<Decomposition> {
    let mut dec = branch_adjoint(e)?;
    for (w, m) in e.small.adjoint_summands() {
        match dec.summands.get_mut(&w) {
            Some(entry) if *entry >= m => {
                *entry -= m;
                if *entry == 0 {
                    dec.summands.remove(&w);
                }
            }
            _ => {
                return Err(Error::AdjointNotContained(format!(
                    "adjoint summand {w} of H missing in the branched adjoint of G"
                )))
            }
        }
    }
    Ok(dec)
}

/// All dominant weights of `g` with zero torus charges and coordinate sum at
/// most `bound`, in lexicographic order.
pub fn dominant_weights_up_to(g: &ReductiveSpec, bound: u32) -> Vec<Weight> {
    let n = g.semisimple_rank() as usize;
    let mut out: Vec<Vec<i64>> = vec![vec![0; n]];
    for i in 0..n {
        let mut next = Vec::new();
        for base in &out {
            let used: i64 = base.iter().sum();
            for v in 0..=(bound as i64 - used) {
                let mut w = base.clone();
                w[i] = v;
                next.push(w);
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out.into_iter()
        .map(|coords| Weight::new(coords, vec![Rat::zero(); g.torus_rank]))
        .collect()
}

/// Exhaustively checks that every branching decomposition of `V_λ` with
/// coordinate sum of λ at most `bound` is multiplicity free; returns the
/// first violating weight otherwise.
pub fn multiplicity_free_up_to(e: &EmbeddingSpec, bound: u32) -> Result<Option<Weight>> {
    for lam in dominant_weights_up_to(&e.big, bound) {
        if branch(e, &lam)?.max_multiplicity() >= 2 {
            return Ok(Some(lam));
        }
    }
    Ok(None)
}

/// Finds the first dominant weight (by coordinate sum, then lexicographic)
/// whose branching decomposition has a multiplicity ≥ 2. Positive-complexity
/// pairs always have one; the search bound is empirical.
pub fn multiplicity_witness(e: &EmbeddingSpec, bound: u32) -> Result<Option<Weight>> {
    let mut weights = dominant_weights_up_to(&e.big, bound);
    weights.sort_by_key(|w| (w.coord_sum(), w.coords.clone()));
    for lam in weights {
        if branch(e, &lam)?.max_multiplicity() >= 2 {
            return Ok(Some(lam));
        }
    }
    Ok(None)
}

fn superscript(n: i64) -> String {
    if n == 1 {
        return String::new();
    }
    let digits = "⁰¹²³⁴⁵⁶⁷⁸⁹";
    let mut out = String::new();
    if n < 0 {
        out.push('⁻');
    }
    for ch in n.abs().to_string().chars() {
        let d = ch.to_digit(10).unwrap() as usize;
        out.push(digits.chars().nth(d).unwrap());
    }
    out
}

fn subscript(n: usize) -> String {
    let digits = "₀₁₂₃₄₅₆₇₈₉";
    n.to_string()
        .chars()
        .map(|ch| {
            let d = ch.to_digit(10).unwrap() as usize;
            digits.chars().nth(d).unwrap()
        })
        .collect()
}

/// One weight in multiplicative notation: `ϖ₁ϖ₂`, `ϖ'²`, `ε²`, `1`.
pub fn weight_notation(h: &ReductiveSpec, w: &Weight) -> String {
    let mut out = String::new();
    for (fi, (t, off)) in h.factors.iter().zip(h.offsets()).enumerate() {
        let primes = "'".repeat(fi);
        for k in 0..t.rank {
            let v = w.coords[off + k];
            if v != 0 {
                out.push('ϖ');
                out.push_str(&primes);
                if t.rank > 1 {
                    out.push_str(&subscript(k + 1));
                }
                out.push_str(&superscript(v));
            }
        }
    }
    for (ti, c) in w.torus.iter().enumerate() {
        if !c.is_zero() {
            out.push('ε');
            if w.torus.len() > 1 {
                out.push_str(&subscript(ti + 1));
            }
            if c.is_integer() {
                out.push_str(&superscript(c.to_integer()));
            } else {
                out.push_str(&format!("^({c})"));
            }
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// A decomposition in multiplicative notation, highest summand first.
pub fn decomposition_notation(h: &ReductiveSpec, dec: &Decomposition) -> String {
    if dec.summands.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<(Rat, Weight, u64)> = dec
        .summands
        .iter()
        .map(|(w, &m)| (h.height(w), w.clone(), m))
        .collect();
    parts.sort_by(|a, b| b.cmp(a));
    parts
        .into_iter()
        .map(|(_, w, m)| {
            let base = weight_notation(h, &w);
            if m == 1 {
                base
            } else {
                format!("{m}·{base}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parses `"1,0,2"` or `"1,0;1/2,-1"` (fundamental coords, then torus
/// charges) or the keyword `adjoint` handled by the caller.
pub fn parse_weight(h: &ReductiveSpec, s: &str) -> Result<Weight> {
    let (coord_part, torus_part) = match s.split_once(';') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let coords: Vec<i64> = if coord_part.trim().is_empty() {
        Vec::new()
    } else {
        coord_part
            .split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| Error::Catalog(format!("bad coordinate {x:?}")))
            })
            .collect::<Result<_>>()?
    };
    let torus: Vec<Rat> = match torus_part {
        None => vec![Rat::zero(); h.torus_rank],
        Some(t) => t
            .split(',')
            .map(|x| crate::parse_rat(x.trim()))
            .collect::<Result<_>>()?,
    };
    let w = Weight::new(coords, torus);
    h.check_weight_shape(&w)?;
    Ok(w)
}
