//! Chevalley-basis structure constants, embedded subalgebra realizations, and
//! exact pointwise orbit-dimension computations.
//!
//! Basis order: Cartan generators `h_1..h_n` (simple coroots), then root
//! vectors `e_β` over the positive roots in graded-lexicographic order, then
//! `f_β = e_{-β}` in the same order. Signs follow the extraspecial-pair
//! convention: for each non-simple positive `γ` the decomposition `γ = α + β`
//! with minimal `α` gets `N_{α,β} = p+1 > 0`; everything else is forced.

use crate::linalg::{self, big, Matrix, Vector};
use crate::rootsys::{self, root_system, RootSystem, SimpleType};
use crate::{BigRat, Error, Rat, Result};
use num::{One, Signed, Zero};
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// Structure constants and the invariant form of one simple algebra.
#[derive(Debug, Clone)]
pub struct LieAlgebraData {
    pub simple_type: SimpleType,
    pub dim: usize,
    pub rank: usize,
    /// Signed simple-root coordinates per root-vector basis element (empty for
    /// Cartan generators).
    pub roots: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    /// `bracket_table[(i, j)]` for `i < j`: sparse integral coordinates of
    /// `[b_i, b_j]`.
    bracket_table: HashMap<(usize, usize), Vec<(usize, i64)>>,
    /// Invariant form: Killing form divided by `2h^∨`, so long roots get
    /// squared length 2.
    pub psi: Vec<Vec<BigRat>>,
}

fn root_label(root: &[i64]) -> String {
    let positive = root.iter().sum::<i64>() > 0;
    let abs: Vec<String> = root.iter().map(|c| c.abs().to_string()).collect();
    format!("{}[{}]", if positive { "e" } else { "f" }, abs.join(","))
}

impl LieAlgebraData {
    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[b_i, b_j]` as sparse integral coordinates.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vec::new(),
            Less => self.bracket_table.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .bracket_table
                .get(&(j, i))
                .map(|v| v.iter().map(|&(k, c)| (k, -c)).collect())
                .unwrap_or_default(),
        }
    }

    /// Bilinear extension of the bracket to rational coordinate vectors.
    pub fn bracket(&self, x: &[BigRat], y: &[BigRat]) -> Vector {
        let mut out = vec![BigRat::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                for (k, c) in self.bracket_basis(i, j) {
                    out[k] += xi * yj * big(c);
                }
            }
        }
        out
    }

    pub fn psi_pair(&self, x: &[BigRat], y: &[BigRat]) -> BigRat {
        let mut acc = BigRat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * yj * &self.psi[i][j];
                }
            }
        }
        acc
    }

    /// Verifies antisymmetry, the Jacobi identity and form invariance on all
    /// basis triples, and non-degeneracy of the form. Exhaustive and exact.
    pub fn self_check(&self) -> Result<()> {
        let basis: Vec<Vector> = (0..self.dim)
            .map(|i| {
                let mut v = vec![BigRat::zero(); self.dim];
                v[i] = BigRat::one();
                v
            })
            .collect();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let xy = self.bracket(&basis[i], &basis[j]);
                let yx = self.bracket(&basis[j], &basis[i]);
                for k in 0..self.dim {
                    if xy[k] != -yx[k].clone() {
                        return Err(Error::Inconsistency(format!(
                            "antisymmetry fails at ({i},{j})"
                        )));
                    }
                }
            }
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let bij = self.bracket(&basis[i], &basis[j]);
                for k in (j + 1)..self.dim {
                    let bjk = self.bracket(&basis[j], &basis[k]);
                    let bki = self.bracket(&basis[k], &basis[i]);
                    let mut total = self.bracket(&bij, &basis[k]);
                    for (t, v) in self.bracket(&bjk, &basis[i]).into_iter().enumerate() {
                        total[t] += v;
                    }
                    for (t, v) in self.bracket(&bki, &basis[j]).into_iter().enumerate() {
                        total[t] += v;
                    }
                    if total.iter().any(|c| !c.is_zero()) {
                        return Err(Error::Inconsistency(format!(
                            "Jacobi fails at triple ({i},{j},{k})"
                        )));
                    }
                    // invariance: Ψ([x,y],z) + Ψ(y,[x,z]) = 0 with x=b_i, y=b_j, z=b_k
                }
            }
        }
        for i in 0..self.dim {
            let brackets_i: Vec<Vec<(usize, i64)>> =
                (0..self.dim).map(|a| self.bracket_basis(i, a)).collect();
            for j in 0..self.dim {
                for k in 0..self.dim {
                    // Ψ([b_i,b_j], b_k) + Ψ(b_j, [b_i,b_k]) = 0
                    let mut lhs = BigRat::zero();
                    for &(t, c) in &brackets_i[j] {
                        lhs += &self.psi[t][k] * big(c);
                    }
                    for &(t, c) in &brackets_i[k] {
                        lhs += &self.psi[j][t] * big(c);
                    }
                    if !lhs.is_zero() {
                        return Err(Error::Inconsistency(format!(
                            "form invariance fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        if Matrix::from_rows(self.psi.clone()).rank() != self.dim {
            return Err(Error::Inconsistency("degenerate invariant form".into()));
        }
        Ok(())
    }
}

struct ChevalleyBuilder<'a> {
    rs: &'a RootSystem,
    /// all roots (positive then negative), signed simple coordinates
    all_roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// table of N_{α,β} over positive special pairs, keyed by positive-root
    /// order indices (i, j) with i < j
    special: HashMap<(usize, usize), i64>,
}

impl<'a> ChevalleyBuilder<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let mut all_roots = rs.positive_roots.clone();
        all_roots.extend(
            rs.positive_roots
                .iter()
                .map(|r| r.iter().map(|c| -c).collect::<Vec<i64>>()),
        );
        let index = all_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        ChevalleyBuilder {
            rs,
            all_roots,
            index,
            special: HashMap::new(),
        }
    }

    fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    fn pos_index(&self, v: &[i64]) -> Option<usize> {
        self.index
            .get(v)
            .copied()
            .filter(|&i| i < self.rs.positive_roots.len())
    }

    fn norm(&self, v: &[i64]) -> Rat {
        self.rs.root_norm(v)
    }

    /// Chain length downward: max k ≥ 0 with β − kα a root.
    fn chain_down(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut k = 1i64;
        loop {
            let v: Vec<i64> = beta
                .iter()
                .zip(alpha)
                .map(|(b, a)| b - k * a)
                .collect();
            if v.iter().all(|&c| c == 0) || !self.is_root(&v) {
                return k - 1;
            }
            k += 1;
        }
    }

    /// N_{μ,ν} for arbitrary roots with μ+ν a root, reduced to the positive
    /// special-pair table through antisymmetry, negation, and the zero-sum
    /// identity N_{x,y}/(z,z) = N_{y,z}/(x,x) for x+y+z = 0.
    fn n_const(&self, mu: &[i64], nu: &[i64]) -> Rat {
        let mu_pos = self.pos_index(mu);
        let nu_pos = self.pos_index(nu);
        match (mu_pos, nu_pos) {
            (Some(i), Some(j)) => {
                let n = if i < j {
                    self.special[&(i, j)]
                } else {
                    -self.special[&(j, i)]
                };
                Rat::from_integer(n)
            }
            (None, None) => {
                let m: Vec<i64> = mu.iter().map(|c| -c).collect();
                let n: Vec<i64> = nu.iter().map(|c| -c).collect();
                -self.n_const(&m, &n)
            }
            (Some(_), None) => {
                let sigma: Vec<i64> = mu.iter().zip(nu).map(|(a, b)| a + b).collect();
                if self.pos_index(&sigma).is_some() {
                    // x+y+z = 0 with x=μ, y=ν, z=−σ: N(μ,ν) = (σ,σ)/(μ,μ)·N(ν,−σ)
                    let neg_sigma: Vec<i64> = sigma.iter().map(|c| -c).collect();
                    self.norm(&sigma) / self.norm(mu) * self.n_const(nu, &neg_sigma)
                } else {
                    let m: Vec<i64> = mu.iter().map(|c| -c).collect();
                    let n: Vec<i64> = nu.iter().map(|c| -c).collect();
                    -self.n_const(&m, &n)
                }
            }
            (None, Some(_)) => -self.n_const(nu, mu),
        }
    }

    /// Fills the special-pair table in increasing height of the sum.
    fn build(&mut self) {
        let positives = self.rs.positive_roots.clone();
        for gamma in positives.iter() {
            if gamma.iter().sum::<i64>() < 2 {
                continue;
            }
            // decompositions γ = α + β into positive roots, α ≤ β in order
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for (ai, alpha) in positives.iter().enumerate() {
                let beta: Vec<i64> = gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
                if let Some(bi) = self.pos_index(&beta) {
                    if ai < bi {
                        pairs.push((ai, bi));
                    }
                }
            }
            pairs.sort();
            let &(a1, b1) = pairs.first().expect("non-simple root decomposes");
            let alpha1 = positives[a1].clone();
            let beta1 = positives[b1].clone();
            let p = self.chain_down(&alpha1, &beta1);
            self.special.insert((a1, b1), p + 1);

            for &(ai, bi) in pairs.iter().skip(1) {
                let alpha = positives[ai].clone();
                let beta = positives[bi].clone();
                let neg_a1: Vec<i64> = alpha1.iter().map(|c| -c).collect();
                // Jacobi on (e_{−α1}, e_α, e_β), coefficients of e_{β1}:
                // N(α,β)·N(γ,−α1) = −[N(−α1,α)N(α−α1,β) + N(β,−α1)N(β−α1,α)]
                let k = self.n_const(gamma, &neg_a1);
                assert!(!k.is_zero());
                let mut acc = Rat::zero();
                let da: Vec<i64> = alpha.iter().zip(&alpha1).map(|(x, y)| x - y).collect();
                if self.is_root(&da) {
                    acc += self.n_const(&neg_a1, &alpha) * self.n_const(&da, &beta);
                }
                let db: Vec<i64> = beta.iter().zip(&alpha1).map(|(x, y)| x - y).collect();
                if self.is_root(&db) {
                    acc += self.n_const(&beta, &neg_a1) * self.n_const(&db, &alpha);
                }
                let n = -acc / k;
                assert!(n.is_integer(), "structure constant must be integral");
                let n = n.to_integer();
                let expected = self.chain_down(&alpha, &beta) + 1;
                assert_eq!(n.abs(), expected, "|N| must be p+1 at {gamma:?}");
                self.special.insert((ai, bi), n);
            }
        }
    }
}

/// Builds the Chevalley basis of a simple type (connected diagram, rank ≤ 4).
/// All invariants are verified exhaustively before the data is returned.
/// Results are shared through a cache; construction is deterministic.
pub fn chevalley(t: SimpleType) -> Result<Arc<LieAlgebraData>> {
    use std::collections::hash_map::Entry;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<SimpleType, Arc<LieAlgebraData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(hit) = guard.get(&t) {
            return Ok(Arc::clone(hit));
        }
    }
    let built = chevalley_uncached(t)?;
    let mut guard = cache.lock().unwrap();
    match guard.entry(t) {
        Entry::Occupied(e) => Ok(Arc::clone(e.get())),
        Entry::Vacant(e) => Ok(Arc::clone(e.insert(built))),
    }
}

fn chevalley_uncached(t: SimpleType) -> Result<Arc<LieAlgebraData>> {
    let rs = root_system(t);
    if !rs.is_irreducible() {
        return Err(Error::InadmissibleType(format!(
            "{t}: structure constants need a connected diagram"
        )));
    }
    if t.rank > crate::Config::default().chevalley_max_rank {
        return Err(Error::InadmissibleType(format!(
            "{t}: rank exceeds the structure-constant bound"
        )));
    }
    let n = t.rank;
    let num_pos = rs.num_positive_roots();
    let dim = n + 2 * num_pos;

    let mut builder = ChevalleyBuilder::new(rs);
    builder.build();

    // basis: h_1..h_n, e_β (positives), f_β (negatives)
    let mut roots: Vec<Vec<i64>> = vec![Vec::new(); n];
    roots.extend(builder.all_roots.iter().cloned());
    let mut labels: Vec<String> = (1..=n).map(|i| format!("h{i}")).collect();
    labels.extend(builder.all_roots.iter().map(|r| root_label(r)));

    let basis_of_root = |root: &[i64]| -> usize { n + builder.index[root] };

    let mut table: HashMap<(usize, usize), Vec<(usize, i64)>> = HashMap::new();
    let mut insert = |i: usize, j: usize, val: Vec<(usize, i64)>| {
        let val: Vec<(usize, i64)> = val.into_iter().filter(|(_, c)| *c != 0).collect();
        if !val.is_empty() {
            assert!(i < j);
            table.insert((i, j), val);
        }
    };

    // [h_i, e_β] = ⟨β, α_i^∨⟩ e_β
    for i in 0..n {
        for (ri, root) in builder.all_roots.iter().enumerate() {
            let fw: i64 = (0..n).map(|j| rs.cartan[i][j] * root[j]).sum();
            insert(i, n + ri, vec![(n + ri, fw)]);
        }
    }
    // [e_α, e_β]
    for (ri, alpha) in builder.all_roots.iter().enumerate() {
        for (rj, beta) in builder.all_roots.iter().enumerate().skip(ri + 1) {
            let sum: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
            if sum.iter().all(|&c| c == 0) {
                // [e_β, e_{−β}] = h_{β^∨} for β > 0; here α = −β is impossible
                // for ri < rj unless α positive and β = −α
                let coroot: Vec<(usize, i64)> = (0..n)
                    .map(|i| {
                        let c = Rat::from_integer(alpha[i]) * rs.d[i] / rs.root_norm(alpha)
                            * Rat::from_integer(2);
                        assert!(c.is_integer());
                        (i, c.to_integer())
                    })
                    .collect();
                insert(n + ri, n + rj, coroot);
            } else if builder.is_root(&sum) {
                let nval = builder.n_const(alpha, beta);
                assert!(nval.is_integer());
                insert(
                    n + ri,
                    n + rj,
                    vec![(basis_of_root(&sum), nval.to_integer())],
                );
            }
        }
    }

    // Killing form, then Ψ = K / 2h^∨
    let mut alg = LieAlgebraData {
        simple_type: t,
        dim,
        rank: n,
        roots,
        labels,
        bracket_table: table,
        psi: vec![vec![BigRat::zero(); dim]; dim],
    };
    let mut killing = vec![vec![0i64; dim]; dim];
    for i in 0..dim {
        // ad_i as a sparse column map
        let cols: Vec<Vec<(usize, i64)>> =
            (0..dim).map(|a| alg.bracket_basis(i, a)).collect();
        for j in i..dim {
            let mut tr = 0i64;
            for a in 0..dim {
                for &(b, c1) in &alg.bracket_basis(j, a) {
                    for &(k, c2) in &cols[b] {
                        if k == a {
                            tr += c1 * c2;
                        }
                    }
                }
            }
            killing[i][j] = tr;
            killing[j][i] = tr;
        }
    }
    let two_h = big(2 * rootsys::dual_coxeter_number(rs));
    for i in 0..dim {
        for j in 0..dim {
            alg.psi[i][j] = big(killing[i][j]) / two_h.clone();
        }
    }

    alg.self_check()?;
    Ok(Arc::new(alg))
}

/// A realization of a pair inside a Chevalley-basis ambient algebra: a basis
/// of `h` and the Ψ-orthogonal complement `m`.
#[derive(Debug, Clone)]
pub struct EmbeddedSubalgebra {
    pub ambient: Arc<LieAlgebraData>,
    pub h_basis: Vec<Vector>,
    pub m_basis: Vec<Vector>,
}

/// Builds the realization from explicit `h`-generators, verifying closure
/// under the bracket, `Ψ`-orthogonality, the dimension split, and the module
/// property `[h, m] ⊆ m`.
pub fn realize(ambient: &Arc<LieAlgebraData>, h_basis: Vec<Vector>) -> Result<EmbeddedSubalgebra> {
    let dim = ambient.dim;
    for v in &h_basis {
        if v.len() != dim {
            return Err(Error::ShapeMismatch(
                "h-generator has wrong coordinate length".into(),
            ));
        }
    }
    if linalg::span_rank(&h_basis) != h_basis.len() {
        return Err(Error::NotSubalgebra("h-generators are dependent".into()));
    }
    for x in &h_basis {
        for y in &h_basis {
            let b = ambient.bracket(x, y);
            if !linalg::in_span(&h_basis, &b) {
                return Err(Error::NotSubalgebra(format!(
                    "bracket of generators leaves the span: {b:?}"
                )));
            }
        }
    }
    // m = kernel of the pairing against h
    let pairing_rows: Vec<Vector> = h_basis
        .iter()
        .map(|h| {
            (0..dim)
                .map(|j| {
                    let mut col = vec![BigRat::zero(); dim];
                    col[j] = BigRat::one();
                    ambient.psi_pair(h, &col)
                })
                .collect()
        })
        .collect();
    let m_basis = Matrix::from_rows(pairing_rows).nullspace();
    if h_basis.len() + m_basis.len() != dim {
        return Err(Error::NotSubalgebra(format!(
            "Ψ degenerates on h: dim h = {}, dim m = {}, dim g = {dim}",
            h_basis.len(),
            m_basis.len()
        )));
    }
    for x in &h_basis {
        for m in &m_basis {
            let b = ambient.bracket(x, m);
            if !linalg::in_span(&m_basis, &b) {
                return Err(Error::NotSubalgebra(
                    "[h, m] is not contained in m".into(),
                ));
            }
        }
    }
    Ok(EmbeddedSubalgebra {
        ambient: Arc::clone(ambient),
        h_basis,
        m_basis,
    })
}

impl EmbeddedSubalgebra {
    pub fn dim_h(&self) -> usize {
        self.h_basis.len()
    }

    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    /// Maps m-coordinates to ambient coordinates.
    pub fn m_to_ambient(&self, coeffs: &[BigRat]) -> Vector {
        let dim = self.ambient.dim;
        let mut out = vec![BigRat::zero(); dim];
        for (c, b) in coeffs.iter().zip(&self.m_basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Expresses an ambient vector lying in `span(m)` in m-coordinates.
    pub fn ambient_to_m(&self, v: &Vector) -> Option<Vector> {
        Matrix::from_columns(&self.m_basis).solve(v)
    }

    /// Matrices of `ad(h_k)` restricted to `m`, in m-coordinates. These are
    /// the vector fields that annihilate invariant functions on `m`.
    pub fn action_fields_on_m(&self) -> Result<Vec<Vec<Vector>>> {
        let dm = self.dim_m();
        let mut fields = Vec::with_capacity(self.h_basis.len());
        for h in &self.h_basis {
            let mut mat = vec![vec![BigRat::zero(); dm]; dm];
            for (j, m) in self.m_basis.iter().enumerate() {
                let b = self.ambient.bracket(h, m);
                let coeffs = self
                    .ambient_to_m(&b)
                    .ok_or_else(|| Error::NotSubalgebra("[h, m] left m".into()))?;
                for (i, c) in coeffs.into_iter().enumerate() {
                    mat[i][j] = c;
                }
            }
            fields.push(mat);
        }
        Ok(fields)
    }

    /// Coordinate vector fields of the `h`-action on `g^*` in dual-basis
    /// coordinates (the coadjoint action): for `ξ_i = ⟨ξ, b_i⟩` the flow along
    /// `h` is `ξ_i' = −⟨ξ, [h, b_i]⟩`, i.e. the negative transpose of `ad h`.
    /// These fields annihilate exactly the invariants of `S(g) = k[g^*]`.
    pub fn action_fields_on_ambient(&self) -> Vec<Vec<Vector>> {
        let dim = self.ambient.dim;
        self.h_basis
            .iter()
            .map(|h| {
                let mut mat = vec![vec![BigRat::zero(); dim]; dim];
                for i in 0..dim {
                    let mut e = vec![BigRat::zero(); dim];
                    e[i] = BigRat::one();
                    let b = self.ambient.bracket(h, &e);
                    for (j, c) in b.into_iter().enumerate() {
                        mat[i][j] = -c;
                    }
                }
                mat
            })
            .collect()
    }
}

/// Orbit dimensions at a point `x ∈ m` (ambient coordinates):
/// `(dim G·x, dim H·x, dim([g,x] ∩ m), dim [h,x])`.
///
/// The first always equals the second plus the third; equality of the last
/// two is equivalent to `dim G·x = 2 dim H·x`.
pub fn orbit_dims_at(
    sub: &EmbeddedSubalgebra,
    x: &Vector,
) -> Result<(usize, usize, usize, usize)> {
    if sub.ambient_to_m(x).is_none() {
        return Err(Error::NotInIsotropy(format!("{x:?}")));
    }
    let dim = sub.ambient.dim;
    let g_cols: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut e = vec![BigRat::zero(); dim];
            e[i] = BigRat::one();
            sub.ambient.bracket(&e, x)
        })
        .collect();
    let h_cols: Vec<Vector> = sub.h_basis.iter().map(|h| sub.ambient.bracket(h, x)).collect();
    let dim_gx = linalg::span_rank(&g_cols);
    let dim_hx = linalg::span_rank(&h_cols);
    let dim_gx_cap_m = linalg::intersection_dim(&g_cols, &sub.m_basis);
    let dim_hx_in_m = linalg::span_rank(&h_cols);
    Ok((dim_gx, dim_hx, dim_gx_cap_m, dim_hx_in_m))
}

/// Seeded random rational in `[-height, height]` with denominator ≤ height.
pub fn random_rat<R: Rng>(rng: &mut R, height: i64) -> BigRat {
    let num = rng.gen_range(-height..=height);
    let den = rng.gen_range(1..=height);
    BigRat::new(num.into(), den.into())
}

/// Seeded random point of `m`, in ambient coordinates.
pub fn random_m_point<R: Rng>(sub: &EmbeddedSubalgebra, rng: &mut R, height: i64) -> Vector {
    let coeffs: Vec<BigRat> = (0..sub.dim_m()).map(|_| random_rat(rng, height)).collect();
    sub.m_to_ambient(&coeffs)
}
