//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Used both for functions on (subspaces of) a Lie algebra's dual and for
//! relations among named invariant generators. Exponent vectors are dense and
//! fixed-length; coefficient maps are ordered for deterministic output.

use crate::linalg::big;
use crate::BigRat;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFn {
    pub vars: usize,
    pub terms: BTreeMap<Vec<u32>, BigRat>,
}

impl PolyFn {
    pub fn zero(vars: usize) -> Self {
        PolyFn {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigRat) -> Self {
        let mut p = PolyFn::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0u32; vars];
        e[i] = 1;
        let mut p = PolyFn::zero(vars);
        p.terms.insert(e, BigRat::one());
        p
    }

    pub fn monomial(vars: usize, exps: Vec<u32>, c: BigRat) -> Self {
        assert_eq!(exps.len(), vars);
        let mut p = PolyFn::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRat::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            // keep the map free of explicit zeros
            let key: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &PolyFn) -> PolyFn {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyFn) -> PolyFn {
        self.add(&other.scale(&big(-1)))
    }

    pub fn scale(&self, c: &BigRat) -> PolyFn {
        if c.is_zero() {
            return PolyFn::zero(self.vars);
        }
        PolyFn {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &PolyFn) -> PolyFn {
        assert_eq!(self.vars, other.vars);
        let mut out = PolyFn::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> PolyFn {
        let mut out = PolyFn::constant(self.vars, BigRat::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn partial(&self, i: usize) -> PolyFn {
        let mut out = PolyFn::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * big(e[i] as i64));
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<PolyFn> {
        (0..self.vars).map(|i| self.partial(i)).collect()
    }

    pub fn eval(&self, point: &[BigRat]) -> BigRat {
        assert_eq!(point.len(), self.vars);
        let mut acc = BigRat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = &m * &point[i];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_gradient(&self, point: &[BigRat]) -> Vec<BigRat> {
        (0..self.vars).map(|i| self.partial(i).eval(point)).collect()
    }

    /// Substitutes the given polynomials for the variables (exact composition).
    pub fn compose(&self, args: &[PolyFn]) -> PolyFn {
        assert_eq!(args.len(), self.vars);
        let out_vars = args.first().map_or(0, |p| p.vars);
        let mut out = PolyFn::zero(out_vars);
        for (e, c) in &self.terms {
            let mut m = PolyFn::constant(out_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m.mul(&args[i].pow(k));
                }
            }
            out = out.add(&m);
        }
        out
    }

    /// Directional derivative along the linear vector field `x ↦ A·x`:
    /// `(D_A f)(x) = Σ_i (A x)_i ∂_i f(x)`, a polynomial identity.
    pub fn derive_along(&self, field: &[Vec<BigRat>]) -> PolyFn {
        assert_eq!(field.len(), self.vars);
        let mut out = PolyFn::zero(self.vars);
        for i in 0..self.vars {
            let di = self.partial(i);
            if di.is_zero() {
                continue;
            }
            // (A x)_i = Σ_j A[i][j] x_j
            for (j, a) in field[i].iter().enumerate() {
                if !a.is_zero() {
                    out = out.add(&di.mul(&PolyFn::var(self.vars, j)).scale(a));
                }
            }
        }
        out
    }
}

impl fmt::Display for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{k}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
