//! Lie-Poisson and coisotropy Poisson brackets, invariant sets with their
//! polynomial relations, and Poisson-rank computations.
//!
//! Brackets are computed symbolically when the result has degree ≤ 4 and
//! pointwise otherwise; the two paths agree exactly where both apply (tested).

use crate::liealg::{self, EmbeddedSubalgebra, LieAlgebraData};
use crate::linalg::{self, big, Matrix, Vector};
use crate::poly::PolyFn;
use crate::{BigRat, Error, Result};
use num::{One, Zero};
use rand::Rng;
use std::sync::Arc;

/// Symbolic Lie-Poisson bracket on `S(g)`:
/// `{f, g} = Σ_{i<j} (∂_i f ∂_j g − ∂_j f ∂_i g) · x_{[b_i, b_j]}`.
pub fn lie_poisson(alg: &LieAlgebraData, f: &PolyFn, g: &PolyFn) -> PolyFn {
    assert_eq!(f.vars, alg.dim);
    assert_eq!(g.vars, alg.dim);
    let mut out = PolyFn::zero(alg.dim);
    let df: Vec<PolyFn> = f.gradient();
    let dg: Vec<PolyFn> = g.gradient();
    for i in 0..alg.dim {
        for j in (i + 1)..alg.dim {
            let coeffs = alg.bracket_basis(i, j);
            if coeffs.is_empty() {
                continue;
            }
            let wedge = df[i].mul(&dg[j]).sub(&df[j].mul(&dg[i]));
            if wedge.is_zero() {
                continue;
            }
            for (k, c) in coeffs {
                out = out.add(&wedge.mul(&PolyFn::var(alg.dim, k)).scale(&big(c)));
            }
        }
    }
    out
}

/// Pointwise Lie-Poisson bracket `{f, g}(ξ) = ⟨ξ, [d_ξ f, d_ξ g]⟩`.
pub fn lie_poisson_at(alg: &LieAlgebraData, f: &PolyFn, g: &PolyFn, xi: &[BigRat]) -> BigRat {
    let u = f.eval_gradient(xi);
    let v = g.eval_gradient(xi);
    let w = alg.bracket(&u, &v);
    xi.iter().zip(&w).map(|(a, b)| a * b).sum()
}

/// Quadratic Casimir `Σ (Ψ^{-1})_{ij} x_i x_j`; it generates the degree-2 part
/// of the Poisson centre of `S(g)`.
pub fn quadratic_casimir(alg: &LieAlgebraData) -> PolyFn {
    let n = alg.dim;
    let psi = Matrix::from_rows(alg.psi.clone());
    let mut inv_cols: Vec<Vector> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![BigRat::zero(); n];
        e[j] = BigRat::one();
        inv_cols.push(psi.solve(&e).expect("Ψ is non-degenerate"));
    }
    let mut c = PolyFn::zero(n);
    for (j, col) in inv_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                let mut e = vec![0u32; n];
                e[i] += 1;
                e[j] += 1;
                c.add_term(e, v.clone());
            }
        }
    }
    c
}

/// Checks that `f` (a polynomial on `m` in m-coordinates) is annihilated by
/// every `ad(h_k)` vector field, as a polynomial identity.
pub fn is_invariant_on_m(sub: &EmbeddedSubalgebra, f: &PolyFn) -> Result<bool> {
    let fields = sub.action_fields_on_m()?;
    Ok(fields.iter().all(|a| f.derive_along(a).is_zero()))
}

/// Coisotropy bracket `{f, g}(α) = ⟨α, [d_α f, d_α g]⟩` for `H`-invariant
/// polynomials on `m = h^⊥`, with the differentials lifted to `g` through the
/// Ψ-splitting. The value is checked against a second, deliberately different
/// lift; invariance makes the two agree.
pub fn coiso_bracket_at(
    sub: &EmbeddedSubalgebra,
    f: &PolyFn,
    g: &PolyFn,
    alpha: &[BigRat],
) -> Result<BigRat> {
    let dm = sub.dim_m();
    assert_eq!(f.vars, dm);
    assert_eq!(g.vars, dm);
    assert_eq!(alpha.len(), dm);
    if !is_invariant_on_m(sub, f)? || !is_invariant_on_m(sub, g)? {
        return Err(Error::NotInvariant(
            "coisotropy bracket needs H-invariant arguments".into(),
        ));
    }

    // primary lift: solve the Ψ-Gram system inside m
    let gram_rows: Vec<Vector> = sub
        .m_basis
        .iter()
        .map(|mi| {
            sub.m_basis
                .iter()
                .map(|mj| sub.ambient.psi_pair(mi, mj))
                .collect()
        })
        .collect();
    let gram = Matrix::from_rows(gram_rows);
    let lift = |p: &PolyFn| -> Vector {
        let grad = p.eval_gradient(alpha);
        let coeffs = gram.solve(&grad).expect("Ψ non-degenerate on m");
        sub.m_to_ambient(&coeffs)
    };
    let u = lift(f);
    let v = lift(g);
    let alpha_g = sub.m_to_ambient(alpha);
    let value: BigRat = {
        let w = sub.ambient.bracket(&u, &v);
        sub.ambient.psi_pair(&alpha_g, &w)
    };

    // second lift: shift both representatives by fixed h-elements
    let shift = |mut x: Vector, scale: i64| -> Vector {
        for (k, h) in sub.h_basis.iter().enumerate() {
            for (xi, hi) in x.iter_mut().zip(h) {
                *xi += hi * big(scale * (k as i64 + 1));
            }
        }
        x
    };
    let u2 = shift(u, 1);
    let v2 = shift(v, -2);
    let value2: BigRat = {
        let w = sub.ambient.bracket(&u2, &v2);
        sub.ambient.psi_pair(&alpha_g, &w)
    };
    if value != value2 {
        return Err(Error::Inconsistency(format!(
            "coisotropy bracket depends on the lift: {value} vs {value2}"
        )));
    }
    Ok(value)
}

/// How an invariant set's brackets are evaluated.
#[derive(Clone)]
pub enum BracketMode {
    /// Generators live on `g^*`; bracket = Lie-Poisson of the algebra.
    LiePoisson(Arc<LieAlgebraData>),
    /// Generators live on `m`; bracket = the coisotropy bracket of the pair.
    Coisotropy(Arc<EmbeddedSubalgebra>),
    /// Relations only; no Poisson structure attached.
    None,
}

impl std::fmt::Debug for BracketMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BracketMode::LiePoisson(a) => write!(f, "LiePoisson({})", a.simple_type),
            BracketMode::Coisotropy(s) => {
                write!(f, "Coisotropy({})", s.ambient.simple_type)
            }
            BracketMode::None => write!(f, "None"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub poly: PolyFn,
}

/// A polynomial identity among the named generators. `expect_holds = false`
/// marks a deliberate negative control that must fail.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    /// Polynomial in the generator symbols (vars = number of generators).
    pub poly: PolyFn,
    pub expect_holds: bool,
}

/// A labelled set of invariant generators with expected relations, the vector
/// fields that must annihilate them, and the bracket they are measured with.
#[derive(Debug, Clone)]
pub struct InvariantSet {
    pub label: String,
    /// Number of coordinates of the underlying space.
    pub vars: usize,
    /// Linear vector fields (matrices) annihilating every generator.
    pub action_fields: Vec<Vec<Vector>>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub bracket: BracketMode,
    /// Upper bound `2c` for the Poisson-matrix rank, when known.
    pub rank_bound: Option<i64>,
    /// Expected generic rank, when known.
    pub expected_rank: Option<i64>,
}

impl InvariantSet {
    /// Symbolic check that every generator is annihilated by every field.
    pub fn check_invariance(&self) -> Result<()> {
        for g in &self.generators {
            if g.poly.vars != self.vars {
                return Err(Error::ShapeMismatch(format!(
                    "generator {} has {} vars, domain has {}",
                    g.name, g.poly.vars, self.vars
                )));
            }
            for a in &self.action_fields {
                if !g.poly.derive_along(a).is_zero() {
                    return Err(Error::NotInvariant(format!(
                        "{}: generator {}",
                        self.label, g.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn generator(&self, name: &str) -> Option<&PolyFn> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| &g.poly)
    }

    fn bracket_at(&self, f: &PolyFn, g: &PolyFn, alpha: &[BigRat]) -> Result<BigRat> {
        match &self.bracket {
            BracketMode::LiePoisson(alg) => {
                // symbolic route for low degree, pointwise otherwise
                if f.degree() + g.degree() <= 5 {
                    Ok(lie_poisson(alg, f, g).eval(alpha))
                } else {
                    Ok(lie_poisson_at(alg, f, g, alpha))
                }
            }
            BracketMode::Coisotropy(sub) => coiso_bracket_at(sub, f, g, alpha),
            BracketMode::None => Err(Error::Inconsistency(format!(
                "{}: no bracket attached",
                self.label
            ))),
        }
    }

    /// The antisymmetric matrix `({g_i, g_j}(α))`.
    pub fn bracket_matrix(&self, alpha: &[BigRat]) -> Result<Vec<Vec<BigRat>>> {
        let n = self.generators.len();
        let mut m = vec![vec![BigRat::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.bracket_at(
                    &self.generators[i].poly,
                    &self.generators[j].poly,
                    alpha,
                )?;
                m[i][j] = v.clone();
                m[j][i] = -v;
            }
        }
        Ok(m)
    }

    /// Values of all generators at a point, in order.
    pub fn evaluate_generators(&self, alpha: &[BigRat]) -> Vec<BigRat> {
        self.generators
            .iter()
            .map(|g| g.poly.eval(alpha))
            .collect()
    }
}

/// Rank of the Poisson matrix of the generator set at one point; always even.
pub fn poisson_matrix_rank(inv: &InvariantSet, alpha: &[BigRat]) -> Result<usize> {
    let m = inv.bracket_matrix(alpha)?;
    let r = Matrix::from_rows(m).rank();
    debug_assert!(r.is_multiple_of(2), "antisymmetric matrices have even rank");
    Ok(r)
}

/// Outcome of sampling the Poisson rank: the maximum attained, whether it
/// stabilized (repeated `stabilize` consecutive times), and every sampled
/// rank in order.
#[derive(Debug, Clone)]
pub struct RankSample {
    pub max_rank: usize,
    pub stabilized: bool,
    pub ranks: Vec<usize>,
}

/// Samples seeded points until the maximum rank has been re-attained at
/// `stabilize` consecutive samples (capped at 100 attempts).
pub fn generic_rank<R: Rng>(
    inv: &InvariantSet,
    rng: &mut R,
    height: i64,
    stabilize: usize,
) -> Result<RankSample> {
    let mut max_rank = 0;
    let mut streak = 0;
    let mut ranks = Vec::new();
    for _ in 0..100 {
        let alpha: Vec<BigRat> = (0..inv.vars)
            .map(|_| liealg::random_rat(rng, height))
            .collect();
        let r = poisson_matrix_rank(inv, &alpha)?;
        ranks.push(r);
        if r > max_rank {
            max_rank = r;
            streak = 1;
        } else if r == max_rank {
            streak += 1;
            if streak >= stabilize {
                return Ok(RankSample {
                    max_rank,
                    stabilized: true,
                    ranks,
                });
            }
        }
    }
    Ok(RankSample {
        max_rank,
        stabilized: false,
        ranks,
    })
}

/// Verdict for one relation after pointwise evaluation.
#[derive(Debug, Clone)]
pub struct RelationOutcome {
    pub name: String,
    pub holds: bool,
    /// First point where the relation fails, if any.
    pub witness: Option<Vec<BigRat>>,
    /// Whether the outcome matches the relation's expectation.
    pub as_expected: bool,
}

/// Evaluates every relation at `n_points` seeded rational points; exact
/// equality is required at every point for a relation to hold.
pub fn verify_relations<R: Rng>(
    inv: &InvariantSet,
    n_points: usize,
    rng: &mut R,
    height: i64,
) -> Vec<RelationOutcome> {
    let n = inv.generators.len();
    inv.relations
        .iter()
        .map(|rel| {
            assert_eq!(rel.poly.vars, n, "relation vars must match generator count");
            let mut witness = None;
            for _ in 0..n_points {
                let alpha: Vec<BigRat> = (0..inv.vars)
                    .map(|_| liealg::random_rat(rng, height))
                    .collect();
                let values = inv.evaluate_generators(&alpha);
                if !rel.poly.eval(&values).is_zero() {
                    witness = Some(alpha);
                    break;
                }
            }
            let holds = witness.is_none();
            RelationOutcome {
                name: rel.name.clone(),
                holds,
                witness,
                as_expected: holds == rel.expect_holds,
            }
        })
        .collect()
}

/// Largest differential rank over all sub-lists of generators whose pairwise
/// brackets vanish at every sampled point. For a Poisson-commutative family
/// this is bounded by `c + r`.
pub fn max_commuting_differential_rank<R: Rng>(
    inv: &InvariantSet,
    rng: &mut R,
    n_points: usize,
    height: i64,
) -> Result<usize> {
    let n = inv.generators.len();
    let points: Vec<Vec<BigRat>> = (0..n_points)
        .map(|_| (0..inv.vars).map(|_| liealg::random_rat(rng, height)).collect())
        .collect();
    // pairwise vanishing across all sampled points
    let mut commute = vec![vec![true; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            for p in &points {
                let v =
                    self::InvariantSet::bracket_at(inv, &inv.generators[i].poly, &inv.generators[j].poly, p)?;
                if !v.is_zero() {
                    commute[i][j] = false;
                    commute[j][i] = false;
                    break;
                }
            }
        }
    }
    let mut best = 0usize;
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if members.len() < 2 {
            continue;
        }
        let ok = members
            .iter()
            .all(|&i| members.iter().all(|&j| i == j || commute[i][j]));
        if !ok {
            continue;
        }
        for p in &points {
            let grads: Vec<Vector> = members
                .iter()
                .map(|&i| inv.generators[i].poly.eval_gradient(p))
                .collect();
            best = best.max(linalg::span_rank(&grads));
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// model builders
// ---------------------------------------------------------------------------

/// The representation of sl2 on a binary quadratic `a x² + b xy + c y²` in
/// the coordinates `(a, b, c)`: matrices of e, h, f.
fn sl2_quadratic_action() -> [Vec<Vector>; 3] {
    let z = BigRat::zero;
    let e = vec![
        vec![z(), z(), z()],
        vec![big(-2), z(), z()],
        vec![z(), big(-1), z()],
    ];
    let h = vec![
        vec![big(-2), z(), z()],
        vec![z(), z(), z()],
        vec![z(), z(), big(2)],
    ];
    let f = vec![
        vec![z(), big(-1), z()],
        vec![z(), z(), big(-2)],
        vec![z(), z(), z()],
    ];
    [e, h, f]
}

fn block_diag(blocks: &[&Vec<Vector>]) -> Vec<Vector> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![BigRat::zero(); n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[off + i][off + j] = v.clone();
            }
        }
        off += b.len();
    }
    out
}

/// Invariant pairing of two binary quadratics, calibrated with λ = 1:
/// `(v, w) = 2(a₁c₂ + a₂c₁) − b₁b₂` as a polynomial in the model coordinates.
fn pairing_poly(vars: usize, v: [usize; 3], w: [usize; 3]) -> PolyFn {
    let x = |i: usize| PolyFn::var(vars, i);
    x(v[0])
        .mul(&x(w[2]))
        .add(&x(w[0]).mul(&x(v[2])))
        .scale(&big(2))
        .sub(&x(v[1]).mul(&x(w[1])))
}

/// 3×3 determinant of columns given as index triples, as a polynomial.
fn det3_poly(vars: usize, cols: [[usize; 3]; 3]) -> PolyFn {
    let x = |i: usize| PolyFn::var(vars, i);
    let mut det = PolyFn::zero(vars);
    let perms: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    for (p, sign) in perms {
        let term = x(cols[0][p[0]]).mul(&x(cols[1][p[1]])).mul(&x(cols[2][p[2]]));
        det = det.add(&term.scale(&big(sign)));
    }
    det
}

/// Named generators of the ring of SL2-invariants of three binary quadratics:
/// the pairings `F_ij`, the determinant `F̃ = 2·det[v₁ v₂ v₃]` (the factor 2
/// calibrates `det((F_ij)) = F̃²` exactly), and the torus-stable products
/// `x₁, y₁, z₁, z₂`.
fn quadratic_triple_generators(vars: usize, slots: [[usize; 3]; 3]) -> Vec<Generator> {
    let f = |i: usize, j: usize| pairing_poly(vars, slots[i], slots[j]);
    let ft = det3_poly(vars, slots).scale(&big(2));
    let named = |name: &str, poly: PolyFn| Generator {
        name: name.into(),
        poly,
    };
    vec![
        named("F11", f(0, 0)),
        named("F12", f(0, 1)),
        named("F13", f(0, 2)),
        named("F22", f(1, 1)),
        named("F23", f(1, 2)),
        named("F33", f(2, 2)),
        named("Ft", ft),
        named("x1", f(0, 0).mul(&f(2, 2))),
        named("y1", f(0, 1).mul(&f(1, 2))),
        named("z1", f(0, 0).mul(&f(1, 2).pow(2))),
        named("z2", f(2, 2).mul(&f(0, 1).pow(2))),
    ]
}

/// Relations among the eleven named generators, in their listed order:
/// the determinant identity, the monomial identity `x₁y₁² = z₁z₂`, the
/// expansion of the determinant through the torus-stable products, and a
/// deliberately perturbed determinant identity as a negative control.
fn quadratic_triple_relations() -> Vec<Relation> {
    // symbol order: F11 F12 F13 F22 F23 F33 Ft x1 y1 z1 z2
    let n = 11;
    let y = |i: usize| PolyFn::var(n, i);
    let (f11, f12, f13, f22, f23, f33, ft) = (0, 1, 2, 3, 4, 5, 6);
    let (x1, y1, z1, z2) = (7, 8, 9, 10);
    let det = y(f11)
        .mul(&y(f22))
        .mul(&y(f33))
        .add(&y(f12).mul(&y(f23)).mul(&y(f13)).scale(&big(2)))
        .sub(&y(f11).mul(&y(f23).pow(2)))
        .sub(&y(f22).mul(&y(f13).pow(2)))
        .sub(&y(f33).mul(&y(f12).pow(2)));
    let det_identity = det.sub(&y(ft).pow(2));
    let monomial_identity = y(x1).mul(&y(y1).pow(2)).sub(&y(z1).mul(&y(z2)));
    // det((F_ij)) rewritten through x1, y1, z1, z2
    let derived = y(x1)
        .mul(&y(f22))
        .add(&y(y1).mul(&y(f13)).scale(&big(2)))
        .sub(&y(f13).pow(2).mul(&y(f22)))
        .sub(&y(z1))
        .sub(&y(z2))
        .sub(&y(ft).pow(2));
    let perturbed = det_identity.add(&y(f11).mul(&y(f23).pow(2)).scale(&big(2)));
    vec![
        Relation {
            name: "det_pairing_identity".into(),
            poly: det_identity,
            expect_holds: true,
        },
        Relation {
            name: "monomial_identity".into(),
            poly: monomial_identity,
            expect_holds: true,
        },
        Relation {
            name: "det_expansion_identity".into(),
            poly: derived,
            expect_holds: true,
        },
        Relation {
            name: "perturbed_det_identity".into(),
            poly: perturbed,
            expect_holds: false,
        },
    ]
}

/// The standalone model: SL2 acting on three binary quadratics (9
/// coordinates), with the full generator list and relations. Relations only;
/// no Poisson structure is attached to this linear model.
pub fn binary_quadratic_model() -> InvariantSet {
    let vars = 9;
    let [e, h, f] = sl2_quadratic_action();
    let fields = vec![
        block_diag(&[&e, &e, &e]),
        block_diag(&[&h, &h, &h]),
        block_diag(&[&f, &f, &f]),
    ];
    let slots = [[0, 1, 2], [3, 4, 5], [6, 7, 8]];
    let set = InvariantSet {
        label: "binary-quadratics".into(),
        vars,
        action_fields: fields,
        generators: quadratic_triple_generators(vars, slots),
        relations: quadratic_triple_relations(),
        bracket: BracketMode::None,
        rank_bound: None,
        expected_rank: None,
    };
    set.check_invariance().expect("model invariants");
    set
}

/// Builds the model coordinate functionals of one 3-dimensional sl2-copy
/// inside the dual of the ambient algebra. The coordinate functionals
/// `x_u(ξ) = ⟨ξ, u⟩` transform contragrediently, so the support vectors
/// chain downward from the highest-weight vector:
/// `u_b = [f, u_a]`, `u_c = [f, u_b]/2`.
fn equivariant_triple(
    alg: &LieAlgebraData,
    e_vec: &Vector,
    f_vec: &Vector,
    u_a: Vector,
) -> Result<[PolyFn; 3]> {
    let u_b = alg.bracket(f_vec, &u_a);
    let u_c = alg
        .bracket(f_vec, &u_b)
        .into_iter()
        .map(|x| x / big(2))
        .collect::<Vector>();
    // consistency of the e-action with the model coordinate matrices
    let top = alg.bracket(e_vec, &u_a);
    let eb = alg.bracket(e_vec, &u_b);
    let expect_eb: Vector = u_a.iter().map(|x| x * big(2)).collect();
    let ec = alg.bracket(e_vec, &u_c);
    let expect_ec: Vector = u_b.clone();
    let fc = alg.bracket(f_vec, &u_c);
    if top.iter().any(|x| !x.is_zero())
        || eb != expect_eb
        || ec != expect_ec
        || fc.iter().any(|x| !x.is_zero())
    {
        return Err(Error::Inconsistency(
            "triple is not equivariant for the quadratic model".into(),
        ));
    }
    // each slot must be supported on a single basis vector; the coordinate
    // functional is the scaled coordinate
    let functional = |v: &Vector| -> Result<PolyFn> {
        let support: Vec<usize> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect();
        if support.len() != 1 {
            return Err(Error::Inconsistency(
                "slot vector is not a coordinate direction".into(),
            ));
        }
        let i = support[0];
        Ok(PolyFn::var(alg.dim, i).scale(&(BigRat::one() / v[i].clone())))
    };
    Ok([functional(&u_a)?, functional(&u_b)?, functional(&u_c)?])
}

/// Invariants of the short-root Levi `SL2·T1 ⊂ Sp4` acting on `sp4^*`: the
/// ambient algebra splits into three quadratic-model copies (torus weights
/// −2, 0, 2) plus a central line, and the generators are the torus-stable
/// combinations of the copy pairings. Brackets are Lie-Poisson on `S(sp4)`.
pub fn short_levi_sp4_model() -> Result<(Arc<EmbeddedSubalgebra>, InvariantSet)> {
    let alg = liealg::chevalley("C2".parse()?)?;
    let dim = alg.dim;
    let idx = |l: &str| {
        alg.basis_index(l)
            .ok_or_else(|| Error::Inconsistency(format!("missing basis label {l}")))
    };
    let unit = |i: usize| -> Vector {
        let mut v = vec![BigRat::zero(); dim];
        v[i] = BigRat::one();
        v
    };
    let e1 = unit(idx("e[1,0]")?);
    let f1 = unit(idx("f[1,0]")?);
    let h1 = unit(idx("h1")?);
    let mut z = vec![BigRat::zero(); dim];
    z[idx("h1")?] = BigRat::one();
    z[idx("h2")?] = big(2);
    let sub = Arc::new(liealg::realize(
        &alg,
        vec![e1.clone(), f1.clone(), h1.clone(), z.clone()],
    )?);

    // coordinate triples of the three copies, named by their torus weight as
    // functionals: the copy spanned by the z-weight +2 root vectors (top
    // e_{2α1+α2}) carries functional weight −2, the adjoint copy (top e_{α1})
    // weight 0, and the z-weight −2 copy (top f_{α2}) weight +2
    let t_minus = equivariant_triple(&alg, &e1, &f1, unit(idx("e[2,1]")?))?;
    let t_zero = equivariant_triple(&alg, &e1, &f1, unit(idx("e[1,0]")?))?;
    let t_plus = equivariant_triple(&alg, &e1, &f1, unit(idx("f[0,1]")?))?;

    let pairing = |u: &[PolyFn; 3], w: &[PolyFn; 3]| -> PolyFn {
        u[0].mul(&w[2])
            .add(&w[0].mul(&u[2]))
            .scale(&big(2))
            .sub(&u[1].mul(&w[1]))
    };
    let det = {
        let cols = [&t_minus, &t_zero, &t_plus];
        let x = |i: usize, j: usize| cols[j][i].clone();
        let mut d = PolyFn::zero(dim);
        let perms: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([0, 2, 1], -1),
            ([2, 1, 0], -1),
            ([1, 0, 2], -1),
        ];
        for (p, sign) in perms {
            d = d.add(&x(p[0], 0).mul(&x(p[1], 1)).mul(&x(p[2], 2)).scale(&big(sign)));
        }
        d.scale(&big(2))
    };
    let f = |i: usize, j: usize| -> PolyFn {
        let copies = [&t_minus, &t_zero, &t_plus];
        pairing(copies[i], copies[j])
    };
    let named = |name: &str, poly: PolyFn| Generator {
        name: name.into(),
        poly,
    };
    let generators = vec![
        named("F13", f(0, 2)),
        named("F22", f(1, 1)),
        named("Ft", det),
        named("x1", f(0, 0).mul(&f(2, 2))),
        named("y1", f(0, 1).mul(&f(1, 2))),
        named("z1", f(0, 0).mul(&f(1, 2).pow(2))),
        named("z2", f(2, 2).mul(&f(0, 1).pow(2))),
    ];
    // det expansion in the torus-stable products, specialized to this list:
    // x1·F22 + 2·y1·F13 − F13²·F22 − z1 − z2 = Ft²
    let relations = {
        let n = generators.len();
        let y = |i: usize| PolyFn::var(n, i);
        let (f13, f22, ft, x1, y1, z1, z2) = (0, 1, 2, 3, 4, 5, 6);
        let derived = y(x1)
            .mul(&y(f22))
            .add(&y(y1).mul(&y(f13)).scale(&big(2)))
            .sub(&y(f13).pow(2).mul(&y(f22)))
            .sub(&y(z1))
            .sub(&y(z2))
            .sub(&y(ft).pow(2));
        let monomial = y(x1).mul(&y(y1).pow(2)).sub(&y(z1).mul(&y(z2)));
        vec![
            Relation {
                name: "det_expansion_identity".into(),
                poly: derived,
                expect_holds: true,
            },
            Relation {
                name: "monomial_identity".into(),
                poly: monomial,
                expect_holds: true,
            },
        ]
    };

    let set = InvariantSet {
        label: "sp4-short-levi".into(),
        vars: dim,
        action_fields: sub.action_fields_on_ambient(),
        generators,
        relations,
        bracket: BracketMode::LiePoisson(Arc::clone(&alg)),
        rank_bound: Some(2),
        expected_rank: Some(2),
    };
    set.check_invariance()?;
    Ok((sub, set))
}

/// Trace-power style invariants of a symmetric realization: the quadratic
/// from the Ψ-Gram matrix on `m` and the unique invariant cubic (solved
/// exactly from the invariance equations). Brackets are coisotropy brackets,
/// which vanish identically for a symmetric pair, so the expected Poisson
/// rank is 0.
pub fn symmetric_pair_invariants(
    label: &str,
    sub: &Arc<EmbeddedSubalgebra>,
) -> Result<InvariantSet> {
    let dm = sub.dim_m();
    let mut p2 = PolyFn::zero(dm);
    for i in 0..dm {
        for j in 0..dm {
            let pair = sub.ambient.psi_pair(&sub.m_basis[i], &sub.m_basis[j]);
            if !pair.is_zero() {
                let mut e = vec![0u32; dm];
                e[i] += 1;
                e[j] += 1;
                p2.add_term(e, pair);
            }
        }
    }
    let fields = sub.action_fields_on_m()?;
    let cubics = solve_invariants(dm, 3, &fields);
    if cubics.len() != 1 {
        return Err(Error::Inconsistency(format!(
            "{label}: expected a unique invariant cubic, found {}",
            cubics.len()
        )));
    }
    let set = InvariantSet {
        label: label.into(),
        vars: dm,
        action_fields: fields,
        generators: vec![
            Generator {
                name: "p2".into(),
                poly: p2,
            },
            Generator {
                name: "p3".into(),
                poly: cubics[0].clone(),
            },
        ],
        relations: Vec::new(),
        bracket: BracketMode::Coisotropy(Arc::clone(sub)),
        rank_bound: Some(0),
        expected_rank: Some(0),
    };
    set.check_invariance()?;
    Ok(set)
}

/// Degree-`degree` polynomials on `vars` coordinates annihilated by all the
/// given fields, solved exactly; returns a canonical basis (each element
/// scaled so its lexicographically first monomial has coefficient 1).
pub fn solve_invariants(vars: usize, degree: u32, fields: &[Vec<Vector>]) -> Vec<PolyFn> {
    // enumerate monomials of exact total degree
    fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
        if vars == 1 {
            return vec![vec![degree]];
        }
        let mut out = Vec::new();
        for first in 0..=degree {
            for rest in monomials(vars - 1, degree - first) {
                let mut m = vec![first];
                m.extend(rest);
                out.push(m);
            }
        }
        out
    }
    let monos = monomials(vars, degree);
    let mut rows: Vec<Vector> = Vec::new();
    for field in fields {
        // derivative of each basis monomial along the field
        let derived: Vec<PolyFn> = monos
            .iter()
            .map(|m| PolyFn::monomial(vars, m.clone(), BigRat::one()).derive_along(field))
            .collect();
        // one constraint row per output monomial
        let mut outputs: std::collections::BTreeSet<Vec<u32>> = Default::default();
        for d in &derived {
            outputs.extend(d.terms.keys().cloned());
        }
        for out_mono in outputs {
            let row: Vector = derived
                .iter()
                .map(|d| d.terms.get(&out_mono).cloned().unwrap_or_else(BigRat::zero))
                .collect();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        rows.push(vec![BigRat::zero(); monos.len()]);
    }
    let null = Matrix::from_rows(rows).nullspace();
    null.into_iter()
        .map(|coeffs| {
            let mut p = PolyFn::zero(vars);
            for (i, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    p.add_term(monos[i].clone(), c.clone());
                }
            }
            let lead = p
                .terms
                .iter()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(BigRat::one);
            p.scale(&(BigRat::one() / lead))
        })
        .filter(|p| !p.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::chevalley;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_brackets_are_structure_constants() {
        let alg = chevalley("A1".parse().unwrap()).unwrap();
        let e = PolyFn::var(3, alg.basis_index("e[1]").unwrap());
        let f = PolyFn::var(3, alg.basis_index("f[1]").unwrap());
        let h = PolyFn::var(3, alg.basis_index("h1").unwrap());
        assert_eq!(lie_poisson(&alg, &e, &f), h);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pt: Vec<BigRat> = (0..3).map(|_| liealg::random_rat(&mut rng, 50)).collect();
        assert_eq!(lie_poisson_at(&alg, &e, &f, &pt), h.eval(&pt));
    }

    #[test]
    fn sl2_casimir_is_central() {
        let alg = chevalley("A1".parse().unwrap()).unwrap();
        let c = quadratic_casimir(&alg);
        for i in 0..3 {
            let x = PolyFn::var(3, i);
            assert!(lie_poisson(&alg, &c, &x).is_zero());
        }
    }

    #[test]
    fn binary_model_relations() {
        let model = binary_quadratic_model();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let outcomes = verify_relations(&model, 100, &mut rng, 100);
        for o in &outcomes {
            assert!(o.as_expected, "{}: holds={} unexpected", o.name, o.holds);
        }
        assert!(outcomes.iter().any(|o| !o.holds), "negative control fired");
    }

    #[test]
    fn casimir_commutes_with_levi_invariants() {
        // the Poisson centre of S(g) contains the Casimirs, so every
        // H-invariant generator must bracket to zero with them
        let (_, set) = short_levi_sp4_model().unwrap();
        let BracketMode::LiePoisson(alg) = &set.bracket else {
            panic!("ambient bracket expected");
        };
        let cas = quadratic_casimir(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let pt: Vec<BigRat> = (0..alg.dim)
                .map(|_| liealg::random_rat(&mut rng, 50))
                .collect();
            for g in &set.generators {
                assert!(
                    lie_poisson_at(alg, &cas, &g.poly, &pt).is_zero(),
                    "Casimir must commute with {}",
                    g.name
                );
            }
        }
    }

    #[test]
    fn short_levi_model_has_rank_two() {
        let (_, set) = short_levi_sp4_model().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let outcomes = verify_relations(&set, 25, &mut rng, 40);
        assert!(outcomes.iter().all(|o| o.as_expected), "{outcomes:?}");
        let sample = generic_rank(&set, &mut rng, 40, 5).unwrap();
        assert!(sample.stabilized);
        assert_eq!(sample.max_rank, 2);
        assert!(sample.ranks.iter().all(|&r| r <= 2));
    }

    #[test]
    fn symmetric_so3_brackets_vanish() {
        let alg = chevalley("A2".parse().unwrap()).unwrap();
        let dim = alg.dim;
        let idx = |l: &str| alg.basis_index(l).unwrap();
        let pm = |plus: &str, minus: &str| {
            let mut v = vec![BigRat::zero(); dim];
            v[idx(plus)] = BigRat::one();
            v[idx(minus)] = -BigRat::one();
            v
        };
        let sub = realize_transpose_so3(&alg, pm);
        assert_eq!(sub.dim_m(), 5);
        // p2 from the invariant-form Gram matrix on m
        let gram_p2 = {
            let mut p = PolyFn::zero(5);
            for i in 0..5 {
                for j in 0..5 {
                    let pair = sub.ambient.psi_pair(&sub.m_basis[i], &sub.m_basis[j]);
                    if !pair.is_zero() {
                        let mut e = vec![0u32; 5];
                        e[i] += 1;
                        e[j] += 1;
                        p.add_term(e, pair);
                    }
                }
            }
            p
        };
        let fields = sub.action_fields_on_m().unwrap();
        assert!(gram_p2.derive_along(&fields[0]).is_zero());
        let cubics = solve_invariants(5, 3, &fields);
        assert_eq!(cubics.len(), 1, "one invariant cubic on the quartic module");
        let p3 = cubics[0].clone();

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let alpha: Vec<BigRat> = (0..5).map(|_| liealg::random_rat(&mut rng, 60)).collect();
            let v = coiso_bracket_at(&sub, &gram_p2, &p3, &alpha).unwrap();
            assert!(v.is_zero(), "symmetric pair bracket must vanish");
        }
        // antisymmetry: {f, f} = 0
        let alpha: Vec<BigRat> = (0..5).map(|_| liealg::random_rat(&mut rng, 60)).collect();
        assert!(coiso_bracket_at(&sub, &p3, &p3, &alpha).unwrap().is_zero());
        // non-invariant arguments are rejected
        assert!(matches!(
            coiso_bracket_at(&sub, &PolyFn::var(5, 0), &gram_p2, &alpha),
            Err(Error::NotInvariant(_))
        ));
    }

    fn realize_transpose_so3(
        alg: &Arc<LieAlgebraData>,
        pm: impl Fn(&str, &str) -> Vector,
    ) -> Arc<EmbeddedSubalgebra> {
        Arc::new(
            liealg::realize(
                alg,
                vec![
                    pm("e[1,0]", "f[1,0]"),
                    pm("e[0,1]", "f[0,1]"),
                    pm("e[1,1]", "f[1,1]"),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn jacobi_for_lie_poisson_on_sl3() {
        let alg = chevalley("A2".parse().unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let random_quadratic = |rng: &mut ChaCha8Rng| {
            let mut p = PolyFn::zero(8);
            for _ in 0..5 {
                let i = rng.gen_range(0..8usize);
                let j = rng.gen_range(0..8usize);
                let mut e = vec![0u32; 8];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, liealg::random_rat(rng, 20));
            }
            p
        };
        for _ in 0..10 {
            let f = random_quadratic(&mut rng);
            let g = random_quadratic(&mut rng);
            let h = random_quadratic(&mut rng);
            let jac = lie_poisson(&alg, &f, &lie_poisson(&alg, &g, &h))
                .add(&lie_poisson(&alg, &g, &lie_poisson(&alg, &h, &f)))
                .add(&lie_poisson(&alg, &h, &lie_poisson(&alg, &f, &g)));
            assert!(jac.is_zero());
        }
    }

    #[test]
    fn symbolic_and_pointwise_brackets_agree() {
        let alg = chevalley("C2".parse().unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = alg.dim;
        let random_poly = |rng: &mut ChaCha8Rng, deg: u32| {
            let mut p = PolyFn::zero(n);
            for _ in 0..6 {
                let mut e = vec![0u32; n];
                for _ in 0..deg {
                    e[rng.gen_range(0..n)] += 1;
                }
                p.add_term(e, liealg::random_rat(rng, 10));
            }
            p
        };
        for deg in [1u32, 2, 3] {
            let f = random_poly(&mut rng, deg);
            let g = random_poly(&mut rng, 2);
            let sym = lie_poisson(&alg, &f, &g);
            for _ in 0..5 {
                let pt: Vec<BigRat> =
                    (0..n).map(|_| liealg::random_rat(&mut rng, 30)).collect();
                assert_eq!(sym.eval(&pt), lie_poisson_at(&alg, &f, &g, &pt));
            }
        }
    }

    #[test]
    fn invariance_of_binary_model_is_detected() {
        let mut model = binary_quadratic_model();
        assert!(model.check_invariance().is_ok());
        model.generators.push(Generator {
            name: "not_invariant".into(),
            poly: PolyFn::var(9, 0),
        });
        assert!(model.check_invariance().is_err());
    }
}
