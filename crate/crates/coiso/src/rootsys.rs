//! Root-system core: Cartan data, positive roots, weights, the Weyl dimension
//! formula and dual Coxeter numbers for the simple types A-G.
//!
//! Conventions (fixed; the catalog data depends on them):
//! * Bourbaki numbering of simple roots for every family.
//! * `cartan[i][j] = ⟨α_j, α_i^∨⟩`, so a root with simple-root coordinate
//!   vector `c` has fundamental-weight coordinates `C·c`.
//! * Weights are stored in fundamental-weight coordinates, roots in
//!   simple-root coordinates; all pairings stay integral or small-rational.
//! * The invariant bilinear form is normalized so long roots have squared
//!   length 2 (`d_i = (α_i,α_i)/2`).

use crate::{Error, Rat, Result};
use num::{BigUint, One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

/// The seven Cartan families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A simple type `(family, rank)`, e.g. `B3` or `G2`.
///
/// `D2` is admitted (it is the reducible system `A1×A1`); the catalog only
/// uses `D` from rank 3 up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C | Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::InadmissibleType(format!("{family:?}{rank}")))
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (fam, rk) = s.split_at(1);
        let family = match fam {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            _ => return Err(Error::InadmissibleType(s.to_string())),
        };
        let rank: usize = rk
            .parse()
            .map_err(|_| Error::InadmissibleType(s.to_string()))?;
        SimpleType::new(family, rank)
    }
}

/// A weight of a reductive group: integer fundamental-weight coordinates
/// (concatenated over the simple factors) plus one exact rational charge per
/// central torus factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<i64>,
    pub torus: Vec<Rat>,
}

impl Weight {
    pub fn new(coords: Vec<i64>, torus: Vec<Rat>) -> Self {
        Weight { coords, torus }
    }

    pub fn of(coords: Vec<i64>) -> Self {
        Weight {
            coords,
            torus: Vec::new(),
        }
    }

    pub fn zero(rank: usize, torus_rank: usize) -> Self {
        Weight {
            coords: vec![0; rank],
            torus: vec![Rat::zero(); torus_rank],
        }
    }

    /// Dominant iff every fundamental coordinate is non-negative; torus
    /// charges are unconstrained.
    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0) && self.torus.iter().all(|t| t.is_zero())
    }

    pub fn negated(&self) -> Self {
        Weight {
            coords: self.coords.iter().map(|&c| -c).collect(),
            torus: self.torus.iter().map(|t| -t).collect(),
        }
    }

    pub fn coord_sum(&self) -> i64 {
        self.coords.iter().sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({}", coords.join(","))?;
        if !self.torus.is_empty() {
            let ch: Vec<String> = self.torus.iter().map(|c| c.to_string()).collect();
            write!(f, ";{}", ch.join(","))?;
        }
        write!(f, ")")
    }
}

/// Cartan data of one simple type: Cartan matrix, positive roots (simple-root
/// coordinates, graded-lexicographic order), half squared lengths `d_i`, and
/// the derived pairing tables.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub simple_type: SimpleType,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by (height, lex).
    pub positive_roots: Vec<Vec<i64>>,
    /// `d_i = (α_i, α_i)/2`, long roots normalized to `d = 1`.
    pub d: Vec<Rat>,
    /// Gram matrix of the form on fundamental weights: `(ϖ_i, ϖ_j)`.
    pub fw_gram: Vec<Vec<Rat>>,
    /// Inverse Cartan matrix (rational): simple-root coordinates of the ϖ_i.
    pub cartan_inv: Vec<Vec<Rat>>,
}

fn cartan_matrix(t: SimpleType) -> (Vec<Vec<i64>>, Vec<Rat>) {
    let n = t.rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    let mut d = vec![Rat::one(); n];
    match t.family {
        Family::A => {
            for i in 1..n {
                chain(&mut c, i - 1, i);
            }
        }
        Family::B => {
            for i in 1..n {
                chain(&mut c, i - 1, i);
            }
            // α_n short: ⟨α_{n-1}, α_n^∨⟩ = -2
            c[n - 1][n - 2] = -2;
            d[n - 1] = Rat::new(1, 2);
        }
        Family::C => {
            for i in 1..n {
                chain(&mut c, i - 1, i);
            }
            // α_n long, the others short
            c[n - 2][n - 1] = -2;
            for di in d.iter_mut().take(n - 1) {
                *di = Rat::new(1, 2);
            }
        }
        Family::D => {
            for i in 1..n.saturating_sub(1) {
                chain(&mut c, i - 1, i);
            }
            if n >= 3 {
                chain(&mut c, n - 3, n - 1);
            }
            // n == 2: two disconnected A1 nodes
        }
        Family::E => {
            // Bourbaki: chain 1-3-4-5-6(-7-8), node 2 attached to node 4.
            chain(&mut c, 0, 2);
            for i in 3..n {
                chain(&mut c, i - 1, i);
            }
            chain(&mut c, 1, 3);
        }
        Family::F => {
            for i in 1..n {
                chain(&mut c, i - 1, i);
            }
            // α1, α2 long; α3, α4 short
            c[2][1] = -2;
            d[2] = Rat::new(1, 2);
            d[3] = Rat::new(1, 2);
        }
        Family::G => {
            // α1 short, α2 long
            c[0][1] = -3;
            c[1][0] = -1;
            d[0] = Rat::new(1, 3);
        }
    }
    (c, d)
}

fn invert_rational(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        Rat::from_integer(m[i][j])
                    } else if j - n == i {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..2 * n {
                    let sub = f * a[col][j];
                    a[r][j] -= sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Builds the root system of a simple type: Cartan matrix from the Dynkin
/// diagram, positive roots by breadth-first closure of the simple roots under
/// simple reflections, pairing tables from the `d_i`.
pub fn build_root_system(t: SimpleType) -> RootSystem {
    let (cartan, d) = cartan_matrix(t);
    let n = t.rank;

    // BFS closure: s_i(c) = c - ⟨β, α_i^∨⟩ e_i with ⟨β, α_i^∨⟩ = Σ_j C[i][j] c_j.
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(root) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| cartan[i][j] * root[j]).sum();
            let mut refl = root.clone();
            refl[i] -= pairing;
            if refl.iter().all(|&c| c >= 0) && seen.insert(refl.clone()) {
                queue.push_back(refl);
            }
        }
    }
    let mut positive_roots: Vec<Vec<i64>> = seen.into_iter().collect();
    positive_roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));

    let cartan_inv = invert_rational(&cartan);
    // (ϖ_i, ϖ_j) = (C^{-1})_{ji} d_j
    let fw_gram: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| cartan_inv[j][i] * d[j]).collect())
        .collect();

    let rs = RootSystem {
        simple_type: t,
        cartan,
        positive_roots,
        d,
        fw_gram,
        cartan_inv,
    };
    debug_assert_eq!(rs.num_positive_roots(), classical_positive_count(t));
    rs
}

/// Closed-form positive-root counts, used as an independent cross-check.
pub fn classical_positive_count(t: SimpleType) -> usize {
    let n = t.rank;
    match t.family {
        Family::A => n * (n + 1) / 2,
        Family::B | Family::C => n * n,
        Family::D => n * (n - 1),
        Family::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Family::F => 24,
        Family::G => 6,
    }
}

/// Shared cache of built root systems; construction is deterministic, so the
/// cache is a pure function table.
pub fn root_system(t: SimpleType) -> &'static RootSystem {
    static CACHE: OnceLock<Mutex<HashMap<SimpleType, &'static RootSystem>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(t)
        .or_insert_with(|| Box::leak(Box::new(build_root_system(t))))
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.simple_type.rank
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// dim g = rank + 2·#positive roots.
    pub fn dim(&self) -> usize {
        self.rank() + 2 * self.num_positive_roots()
    }

    /// The Weyl vector ρ (all fundamental coordinates 1).
    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank()]
    }

    /// Fundamental-weight coordinates of a root given in simple-root coordinates.
    pub fn root_fw(&self, root: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| self.cartan[i][j] * root[j]).sum())
            .collect()
    }

    /// `(λ, β)` for λ in fundamental coordinates and β a root in simple-root
    /// coordinates: `Σ_j c_j d_j λ_j`.
    pub fn pair_weight_root(&self, lambda: &[i64], root: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for j in 0..self.rank() {
            acc += self.d[j] * Rat::from_integer(root[j] * lambda[j]);
        }
        acc
    }

    /// `(β, β)` for a root in simple-root coordinates.
    pub fn root_norm(&self, root: &[i64]) -> Rat {
        let fw = self.root_fw(root);
        self.pair_weight_root(&fw, root)
    }

    /// `⟨λ, β^∨⟩ = 2(λ,β)/(β,β)`, exact rational.
    pub fn pair_coroot(&self, lambda: &[i64], root: &[i64]) -> Rat {
        let two = Rat::from_integer(2);
        two * self.pair_weight_root(lambda, root) / self.root_norm(root)
    }

    /// `(λ, μ)` for two weights in fundamental coordinates.
    pub fn pair_weights(&self, lambda: &[i64], mu: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                acc += self.fw_gram[i][j] * Rat::from_integer(lambda[i] * mu[j]);
            }
        }
        acc
    }

    /// Simple reflection s_i acting on fundamental-weight coordinates.
    pub fn reflect_fw(&self, lambda: &[i64], i: usize) -> Vec<i64> {
        let li = lambda[i];
        (0..self.rank())
            .map(|k| lambda[k] - li * self.cartan[k][i])
            .collect()
    }

    /// The dominant representative of a weight under the Weyl group.
    pub fn dominant_rep(&self, lambda: &[i64]) -> Vec<i64> {
        let mut w = lambda.to_vec();
        loop {
            match (0..self.rank()).find(|&i| w[i] < 0) {
                Some(i) => w = self.reflect_fw(&w, i),
                None => return w,
            }
        }
    }

    /// The antidominant representative (image under the longest element).
    pub fn antidominant_rep(&self, lambda: &[i64]) -> Vec<i64> {
        let mut w = lambda.to_vec();
        loop {
            match (0..self.rank()).find(|&i| w[i] > 0) {
                Some(i) => w = self.reflect_fw(&w, i),
                None => return w,
            }
        }
    }

    /// Full Weyl orbit of a weight (fundamental coordinates).
    pub fn weyl_orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        seen.insert(lambda.to_vec());
        queue.push_back(lambda.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                let r = self.reflect_fw(&w, i);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The highest root θ (unique maximal root for a connected diagram).
    pub fn highest_root(&self) -> &Vec<i64> {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// Connected components of the Dynkin diagram, as index sets.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for u in 0..n {
                    if u != v && self.cartan[v][u] != 0 && comp[u] == usize::MAX {
                        comp[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        let mut out = vec![Vec::new(); count];
        for (i, &c) in comp.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// Highest roots of the irreducible components, in simple-root coordinates.
    /// The adjoint module of the corresponding algebra is the direct sum of the
    /// irreducibles with these highest weights.
    pub fn component_highest_roots(&self) -> Vec<Vec<i64>> {
        self.components()
            .iter()
            .map(|comp| {
                self.positive_roots
                    .iter()
                    .filter(|r| comp.iter().any(|&i| r[i] != 0))
                    .max_by_key(|r| (r.iter().sum::<i64>(), (*r).clone()))
                    .expect("component has roots")
                    .clone()
            })
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.components().len() == 1
    }
}

/// Weyl dimension formula `∏_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`, exact.
pub fn weyl_dim(rs: &RootSystem, lambda: &[i64]) -> Result<BigUint> {
    if lambda.iter().any(|&c| c < 0) {
        return Err(Error::NonDominant(format!("{lambda:?}")));
    }
    let rho = rs.rho();
    let lam_rho: Vec<i64> = (0..rs.rank()).map(|i| lambda[i] + rho[i]).collect();
    let mut num = num::BigInt::one();
    let mut den = num::BigInt::one();
    for root in &rs.positive_roots {
        // denominators of the form cancel inside the ratio, so pair with the
        // root itself instead of the coroot
        let a = rs.pair_weight_root(&lam_rho, root);
        let b = rs.pair_weight_root(&rho, root);
        num *= num::BigInt::from(*a.numer()) * num::BigInt::from(*b.denom());
        den *= num::BigInt::from(*a.denom()) * num::BigInt::from(*b.numer());
    }
    let (q, r) = num::Integer::div_rem(&num, &den);
    assert!(r.is_zero(), "Weyl dimension must be integral");
    q.try_into()
        .map_err(|_| Error::Inconsistency("negative Weyl dimension".into()))
}

/// Dual Coxeter number `h^∨ = 1 + ⟨ρ, θ^∨⟩`.
pub fn dual_coxeter_number(rs: &RootSystem) -> i64 {
    let theta = rs.highest_root();
    let p = rs.pair_coroot(&rs.rho(), theta);
    assert!(p.is_integer(), "⟨ρ, θ^∨⟩ must be integral");
    1 + p.to_integer()
}

/// Highest weight of the dual module: `-w₀·λ` (torus charges are negated by
/// the caller at the reductive-group level).
pub fn dual_weight_coords(rs: &RootSystem, lambda: &[i64]) -> Vec<i64> {
    rs.antidominant_rep(lambda)
        .iter()
        .map(|&c| -c)
        .collect()
}
