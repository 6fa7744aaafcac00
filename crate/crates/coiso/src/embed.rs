//! Concrete reductive pairs `H ⊂ G`: a rational weight-restriction matrix,
//! validation against the branching machinery, and the fixed-space /
//! torus-weight counts that drive the nullcone formulas.

use crate::repth::{self, ReductiveSpec};
use crate::rootsys::Weight;
use crate::{Error, Rat, Result};
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// A reductive pair given by the weight-restriction matrix
/// `Λ(G) → Λ(H)` on `(fundamental ++ torus)` coordinates.
///
/// The matrix is data, not a computation: each catalog pair ships one
/// representative matrix, locked by the branching expectations stored next to
/// it.
#[derive(Debug, Clone)]
pub struct EmbeddingSpec {
    pub label: String,
    pub big: ReductiveSpec,
    pub small: ReductiveSpec,
    /// `(rank_H + torus_H) × (rank_G + torus_G)` rational matrix.
    pub restriction: Vec<Vec<Rat>>,
    /// Whether `H` contains no infinite normal subgroup of `G` (the complexity
    /// formula requires it; `H = G` is the standard counterexample).
    pub proper: bool,
}

impl EmbeddingSpec {
    pub fn new(
        label: impl Into<String>,
        big: ReductiveSpec,
        small: ReductiveSpec,
        restriction: Vec<Vec<Rat>>,
        proper: bool,
    ) -> Result<Self> {
        let e = EmbeddingSpec {
            label: label.into(),
            big,
            small,
            restriction,
            proper,
        };
        e.check_shape()?;
        Ok(e)
    }

    pub fn check_shape(&self) -> Result<()> {
        let rows = (self.small.semisimple_rank() + self.small.torus_rank as i64) as usize;
        let cols = (self.big.semisimple_rank() + self.big.torus_rank as i64) as usize;
        if self.restriction.len() != rows
            || self.restriction.iter().any(|r| r.len() != cols)
        {
            return Err(Error::ShapeMismatch(format!(
                "restriction matrix of {} must be {rows}×{cols}",
                self.label
            )));
        }
        Ok(())
    }

    /// Identity pair `G ⊂ G` (flagged improper: the complexity formula does
    /// not apply to it).
    pub fn identity(label: impl Into<String>, g: ReductiveSpec) -> Self {
        let n = (g.semisimple_rank() + g.torus_rank as i64) as usize;
        let restriction = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rat::from_integer(1)
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        EmbeddingSpec {
            label: label.into(),
            big: g.clone(),
            small: g,
            restriction,
            proper: false,
        }
    }

    /// Restricts a `G`-weight through the matrix. The fundamental coordinates
    /// of the image must come out integral; a fractional value signals a wrong
    /// matrix.
    pub fn restrict(&self, w: &Weight) -> Result<Weight> {
        self.big.check_weight_shape(w)?;
        let mut input: Vec<Rat> = w.coords.iter().map(|&c| Rat::from_integer(c)).collect();
        input.extend(w.torus.iter().cloned());
        let h_rank = self.small.semisimple_rank() as usize;
        let mut coords = Vec::with_capacity(h_rank);
        let mut torus = Vec::with_capacity(self.small.torus_rank);
        for (i, row) in self.restriction.iter().enumerate() {
            let mut acc = Rat::zero();
            for (a, b) in row.iter().zip(&input) {
                acc += a * b;
            }
            if i < h_rank {
                if !acc.is_integer() {
                    return Err(Error::InconsistentEmbedding(format!(
                        "weight {w} of {} restricts to fractional fundamental coordinate {acc}",
                        self.label
                    )));
                }
                coords.push(acc.to_integer());
            } else {
                torus.push(acc);
            }
        }
        Ok(Weight::new(coords, torus))
    }
}

/// Result of one validation check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Per-check report produced by [`embed_validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub label: String,
    pub checks: Vec<CheckOutcome>,
    pub isotropy_dim: Option<u64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation of {}:", self.label)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {} {}{}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", c.detail)
                }
            )?;
        }
        Ok(())
    }
}

/// Runs the pair invariants: the adjoint of `H` embeds in the branched adjoint
/// of `G`, the branched adjoint is self-dual (torus charges symmetric under
/// negation), and `dim G − dim H` equals the isotropy dimension.
pub fn embed_validate(e: &EmbeddingSpec) -> Result<ValidationReport> {
    e.check_shape()?;
    let mut checks = Vec::new();
    let mut isotropy_dim = None;

    let adjoint = repth::branch_adjoint(e)?;
    let dual = adjoint.dualized(&e.small)?;
    checks.push(CheckOutcome {
        name: "adjoint self-dual",
        passed: dual == adjoint,
        detail: if dual == adjoint {
            String::new()
        } else {
            let diff = adjoint
                .summands
                .keys()
                .find(|w| dual.multiplicity(w) != adjoint.multiplicity(w));
            format!("asymmetric at {}", diff.map_or("?".into(), |w| w.to_string()))
        },
    });

    match repth::isotropy_module(e) {
        Ok(m) => {
            let dim: num::BigUint = m.dimension(&e.small)?;
            let expected = (e.big.dim() - e.small.dim()) as u64;
            let dim_u64: u64 = dim.clone().try_into().unwrap_or(u64::MAX);
            checks.push(CheckOutcome {
                name: "isotropy dimension",
                passed: dim_u64 == expected,
                detail: format!("dim m = {dim}, dim G − dim H = {expected}"),
            });
            isotropy_dim = Some(dim_u64);
        }
        Err(err) => checks.push(CheckOutcome {
            name: "isotropy dimension",
            passed: false,
            detail: err.to_string(),
        }),
    }

    Ok(ValidationReport {
        label: e.label.clone(),
        checks,
        isotropy_dim,
    })
}

/// The full `T_H`-character of a weight: fundamental coordinates and torus
/// charges flattened to one rational vector.
fn th_character(w: &Weight) -> Vec<Rat> {
    let mut v: Vec<Rat> = w.coords.iter().map(|&c| Rat::from_integer(c)).collect();
    v.extend(w.torus.iter().cloned());
    v
}

/// Multiplicity table of the `T_H`-weights of `g` (all weights of all summands
/// of the branched adjoint), including the zero weight.
pub fn th_weight_table(e: &EmbeddingSpec) -> Result<BTreeMap<Vec<Rat>, u64>> {
    let adjoint = repth::branch_adjoint(e)?;
    let mut table: BTreeMap<Vec<Rat>, u64> = BTreeMap::new();
    for (mu, &mult) in &adjoint.summands {
        let ws = repth::weight_system(&e.small, mu)?;
        for (w, &m) in &ws.entries {
            *table.entry(th_character(w)).or_insert(0) += m * mult;
        }
    }
    Ok(table)
}

/// `dim g^{T_H}`: the multiplicity of the zero `T_H`-weight in `g`.
pub fn fixed_space_dim(e: &EmbeddingSpec) -> Result<i64> {
    let table = th_weight_table(e)?;
    let zero = vec![
        Rat::zero();
        (e.small.semisimple_rank() + e.small.torus_rank as i64) as usize
    ];
    Ok(table.get(&zero).copied().unwrap_or(0) as i64)
}

/// Exact multiplicity table of the **nonzero** `T_H`-weights of `g`.
pub fn th_weight_multiplicities(e: &EmbeddingSpec) -> Result<BTreeMap<Vec<Rat>, u64>> {
    let mut table = th_weight_table(e)?;
    table.retain(|k, _| k.iter().any(|c| !c.is_zero()));
    Ok(table)
}

/// Verdicts for the two torus-multiplicity conditions: (1) every nonzero
/// `T_H`-weight of `g` has multiplicity ≤ 2; (2) the number of weights of
/// multiplicity 2 is at most `2·rk H`.
pub fn diamond_verdicts(e: &EmbeddingSpec) -> Result<(bool, bool)> {
    let table = th_weight_multiplicities(e)?;
    let d1 = table.values().all(|&m| m <= 2);
    let twos = table.values().filter(|&&m| m == 2).count() as i64;
    let d2 = twos <= 2 * e.small.rank();
    Ok((d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::SimpleType;

    fn st(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect())
            .collect()
    }

    fn sl3_so3() -> EmbeddingSpec {
        EmbeddingSpec::new(
            "sl3-so3",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::simple(st("A1")),
            mat(&[&[2, 2]]),
            true,
        )
        .unwrap()
    }

    fn sl3_t2() -> EmbeddingSpec {
        EmbeddingSpec::new(
            "sl3-t2",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::torus(2),
            mat(&[&[1, 0], &[0, 1]]),
            true,
        )
        .unwrap()
    }

    fn spin7_g2() -> EmbeddingSpec {
        EmbeddingSpec::new(
            "spin7-g2",
            ReductiveSpec::simple(st("B3")),
            ReductiveSpec::simple(st("G2")),
            mat(&[&[1, 3, 1], &[0, -1, 0]]),
            true,
        )
        .unwrap()
    }

    fn sl3_gl2() -> EmbeddingSpec {
        EmbeddingSpec::new(
            "sl3-gl2",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::new(vec![st("A1")], 1),
            mat(&[&[1, 0], &[1, 2]]),
            true,
        )
        .unwrap()
    }

    #[test]
    fn branch_adjoint_so3_in_sl3() {
        let e = sl3_so3();
        let dec = repth::branch_adjoint(&e).unwrap();
        let expect: Vec<(Vec<i64>, u64)> = vec![(vec![2], 1), (vec![4], 1)];
        let got: Vec<(Vec<i64>, u64)> = dec
            .summands
            .iter()
            .map(|(w, &m)| (w.coords.clone(), m))
            .collect();
        assert_eq!(got, expect);
        let m = repth::isotropy_module(&e).unwrap();
        assert_eq!(m.summands.len(), 1);
        assert_eq!(m.multiplicity(&Weight::of(vec![4])), 1);
    }

    #[test]
    fn branch_adjoint_g2_in_spin7() {
        let e = spin7_g2();
        let dec = repth::branch_adjoint(&e).unwrap();
        assert_eq!(dec.multiplicity(&Weight::of(vec![1, 0])), 1);
        assert_eq!(dec.multiplicity(&Weight::of(vec![0, 1])), 1);
        assert_eq!(dec.summands.len(), 2);
        let report = embed_validate(&e).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.isotropy_dim, Some(7));
    }

    #[test]
    fn fixed_space_dims() {
        assert_eq!(fixed_space_dim(&sl3_t2()).unwrap(), 2);
        assert_eq!(fixed_space_dim(&spin7_g2()).unwrap(), 3);
        assert_eq!(fixed_space_dim(&sl3_gl2()).unwrap(), 2);
    }

    #[test]
    fn identity_embedding() {
        let e = EmbeddingSpec::identity("id-sl3", ReductiveSpec::simple(st("A2")));
        let report = embed_validate(&e).unwrap();
        assert!(report.passed());
        assert_eq!(report.isotropy_dim, Some(0));
        assert_eq!(fixed_space_dim(&e).unwrap(), 2);
        // nonzero T_H-weights are the six roots, multiplicity 1
        let table = th_weight_multiplicities(&e).unwrap();
        assert_eq!(table.len(), 6);
        assert!(table.values().all(|&m| m == 1));
    }

    #[test]
    fn th_weights_of_principal_so3() {
        let e = sl3_so3();
        let table = th_weight_multiplicities(&e).unwrap();
        let expect: BTreeMap<Vec<Rat>, u64> = [
            (vec![rat(-4, 1)], 1),
            (vec![rat(-2, 1)], 2),
            (vec![rat(2, 1)], 2),
            (vec![rat(4, 1)], 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(table, expect);
        // self-duality: symmetric under negation
        for (w, m) in &table {
            let neg: Vec<Rat> = w.iter().map(|c| -c).collect();
            assert_eq!(table.get(&neg), Some(m));
        }
    }

    #[test]
    fn diamond_conditions_for_spin7_g2() {
        // the six doubled torus weights (the short roots) exceed 2·rk H = 4
        let e = spin7_g2();
        let table = th_weight_multiplicities(&e).unwrap();
        assert!(table.values().all(|&m| m <= 2));
        assert_eq!(table.values().filter(|&&m| m == 2).count(), 6);
        let (d1, d2) = diamond_verdicts(&e).unwrap();
        assert!(d1);
        assert!(!d2);
    }

    #[test]
    fn corrupted_matrix_detected() {
        // Sp6 ⊃ Sp4×SL2 with a corrupted row: branching must fail loudly.
        let good = EmbeddingSpec::new(
            "sp6-sp4sl2",
            ReductiveSpec::simple(st("C3")),
            ReductiveSpec::new(vec![st("C2"), st("A1")], 0),
            mat(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
            true,
        )
        .unwrap();
        assert!(embed_validate(&good).unwrap().passed());
        let bad = EmbeddingSpec::new(
            "sp6-bad",
            good.big.clone(),
            good.small.clone(),
            mat(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]),
            true,
        )
        .unwrap();
        let adj = repth::branch_adjoint(&bad);
        let failed = match &adj {
            Err(Error::InconsistentEmbedding(_)) => true,
            Err(_) => false,
            Ok(_) => !embed_validate(&bad).unwrap().passed(),
        };
        assert!(failed, "corruption must surface: {adj:?}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let r = EmbeddingSpec::new(
            "bad-shape",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::simple(st("A1")),
            mat(&[&[2, 2], &[0, 0]]),
            true,
        );
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }
}
