//! Numerics of the double homogeneous space `(G×H)/ΔH` for a reductive pair:
//! complexity and rank, nullcone dimension, defect of equidimensionality,
//! s-regularity, and the theorem-level inequality suite. One-sided pairs
//! `G/H` get a bounds record driven by catalog values of `(c, r)`.

use crate::embed::{self, EmbeddingSpec};
use crate::repth;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of a single inequality or identity check. For an inequality
/// `lhs ≤ rhs`, `Strict` means `<`, `Holds` means `=`; identities use
/// `Holds`/`Fails` only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Strict,
    Fails,
}

impl Verdict {
    pub fn ok(self) -> bool {
        self != Verdict::Fails
    }

    fn of_le(lhs: i64, rhs: i64) -> Verdict {
        use std::cmp::Ordering::*;
        match lhs.cmp(&rhs) {
            Less => Verdict::Strict,
            Equal => Verdict::Holds,
            Greater => Verdict::Fails,
        }
    }

    fn of_eq(lhs: i64, rhs: i64) -> Verdict {
        if lhs == rhs {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    fn of_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Strict => write!(f, "strict"),
            Verdict::Fails => write!(f, "fails"),
        }
    }
}

/// All derived numerics for one pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub label: String,
    #[serde(rename = "ctilde")]
    pub c_tilde: i64,
    #[serde(rename = "rtilde")]
    pub r_tilde: i64,
    /// `2c̃ + r̃ = dim g − dim h`.
    pub quotient_dim: i64,
    /// `dim g^{T_H}`.
    pub fixed_dim: i64,
    pub nullcone_dim: i64,
    pub defect: i64,
    pub s_regular: bool,
    /// `rk G̃ − r̃`; zero for every double pair.
    pub generic_stab_rank: i64,
    pub inequality_verdicts: BTreeMap<String, Verdict>,
    /// (multiplicities ≤ 2, count of multiplicity-2 weights ≤ 2·rk H).
    pub diamond_verdicts: (bool, bool),
}

impl PairReport {
    pub fn all_checks_pass(&self) -> bool {
        self.inequality_verdicts.values().all(|v| v.ok())
    }
}

/// `(c̃, r̃)` of the double space: `c̃ = dim U(G) − dim B(H)`,
/// `r̃ = rk G + rk H`. Requires a proper pair.
pub fn complexity_rank(e: &EmbeddingSpec) -> Result<(i64, i64)> {
    if !e.proper {
        return Err(Error::InadmissiblePair(format!(
            "{}: H contains an infinite normal subgroup of G; the complexity formula does not apply",
            e.label
        )));
    }
    let c = e.big.dim_u() - e.small.dim_b();
    if c < 0 {
        return Err(Error::InadmissiblePair(format!(
            "{}: dim U(G) − dim B(H) = {c} < 0",
            e.label
        )));
    }
    Ok((c, e.big.rank() + e.small.rank()))
}

/// Dimension of the nullcone of `(H : g)`:
/// `dim U_H + (dim g − dim g^{T_H})/2`. The halved term is integral because
/// the nonzero `T_H`-weights of the self-dual module `g` pair off.
pub fn nullcone_dim(e: &EmbeddingSpec) -> Result<i64> {
    let fixed = embed::fixed_space_dim(e)?;
    let diff = e.big.dim() - fixed;
    if diff % 2 != 0 {
        return Err(Error::Inconsistency(format!(
            "{}: dim g − dim g^(T_H) = {diff} is odd",
            e.label
        )));
    }
    Ok(e.small.dim_u() + diff / 2)
}

/// Defect of equidimensionality of the quotient `g → g ⫽ H`:
/// `dim N_H(g) − dim h`.
pub fn defect(e: &EmbeddingSpec) -> Result<i64> {
    Ok(nullcone_dim(e)? - e.small.dim())
}

/// `H` is s-regular iff `g^{T_H}` is a Cartan subalgebra, i.e.
/// `dim g^{T_H} = rk g`.
pub fn s_regular(e: &EmbeddingSpec) -> Result<bool> {
    Ok(embed::fixed_space_dim(e)? == e.big.rank())
}

/// Full report: every theorem-level inequality and identity checked, with
/// strictness recorded. Failed checks are recorded, never dropped.
pub fn verify_theorems(e: &EmbeddingSpec) -> Result<PairReport> {
    let (c, r) = complexity_rank(e)?;
    let fixed = embed::fixed_space_dim(e)?;
    let ncone = nullcone_dim(e)?;
    let dim_g = e.big.dim();
    let dim_h = e.small.dim();
    let defect = ncone - dim_h;
    let sreg = fixed == e.big.rank();
    let half = (dim_g - fixed) / 2;
    let (d1, d2) = embed::diamond_verdicts(e)?;

    let mut v: BTreeMap<String, Verdict> = BTreeMap::new();

    // two-sided bound dim B_H ≤ ½(dim g − dim g^{T_H}) ≤ dim U
    v.insert(
        "eq35_first".into(),
        Verdict::of_le(e.small.dim_b(), half),
    );
    v.insert("eq35_second".into(), Verdict::of_le(half, e.big.dim_u()));
    v.insert(
        "parity".into(),
        Verdict::of_bool((dim_g - fixed) % 2 == 0),
    );
    // the fixed space always contains the centralizer of a torus, hence a
    // Cartan subalgebra worth of dimensions
    v.insert(
        "fixed_ge_rank".into(),
        Verdict::of_bool(fixed >= e.big.rank()),
    );

    // no equidimensionality for c̃ > 0, h ≠ 0, G simple
    if c > 0 && dim_h > 0 && e.big.is_simple() {
        v.insert(
            "no_equidimensional".into(),
            Verdict::of_bool(e.small.dim_b() < half),
        );
    }

    // c̃ = 1 forces s-regularity and defect 1
    if c == 1 {
        v.insert(
            "ctilde1_sregular_defect1".into(),
            Verdict::of_bool(sreg && defect == 1),
        );
        v.insert(
            "ctilde1_dichotomy".into(),
            Verdict::of_bool((defect == 0) ^ sreg),
        );
    }

    // c̃ = 0 forces equidimensionality and s-regularity
    if c == 0 {
        v.insert(
            "ctilde0_equidimensional_sregular".into(),
            Verdict::of_bool(defect == 0 && sreg),
        );
    }

    // nullcone bound and the proper-intersection identity
    v.insert("nullcone_le".into(), Verdict::of_le(ncone, dim_h + c));
    v.insert(
        "intersection_identity".into(),
        Verdict::of_eq(dim_h + 2 * c, dim_g - e.big.rank() - e.small.rank()),
    );
    v.insert(
        "defect_range".into(),
        Verdict::of_bool(0 <= defect && defect <= c),
    );

    // if dim g^{T_H} = rk g + 2c̃ were to hold with c̃ > 0 and h ≠ 0, the
    // torus-multiplicity conditions must fail somewhere
    if fixed == e.big.rank() + 2 * c && c > 0 && dim_h > 0 {
        v.insert(
            "equidimensional_premise_refuted".into(),
            Verdict::of_bool(!(d1 && d2)),
        );
    }

    Ok(PairReport {
        label: e.label.clone(),
        c_tilde: c,
        r_tilde: r,
        quotient_dim: dim_g - dim_h,
        fixed_dim: fixed,
        nullcone_dim: ncone,
        defect,
        s_regular: sreg,
        generic_stab_rank: (e.big.rank() + e.small.rank()) - r,
        inequality_verdicts: v,
        diamond_verdicts: (d1, d2),
    })
}

/// Bound record for a one-sided pair `G/H` whose complexity and rank come
/// from the catalog.
#[derive(Debug, Clone, Serialize)]
pub struct OneSidedReport {
    pub label: String,
    pub c: i64,
    pub r: i64,
    pub dim_m: i64,
    /// `dim m ⫽ H = 2c + r`.
    pub quotient_dim: i64,
    /// Window for the nullcone dimension: `[dim m − 2c − r, dim m − c − r]`.
    pub nullcone_lo: i64,
    pub nullcone_hi: i64,
    /// `dim (m ∩ N(g*)) = dim m − r`.
    pub cone_intersection_dim: i64,
    /// `dim U_H + (dim m − dim m^{T_H})/2`.
    pub gerry_bound: i64,
    /// `dim m^{T_H}`.
    pub fixed_dim_m: i64,
}

/// Builds the bounds record for a one-sided pair, checking the bound
/// arithmetic for internal consistency.
pub fn one_sided_report(e: &EmbeddingSpec, c: i64, r: i64) -> Result<OneSidedReport> {
    if c < 0 || r < 0 || r > e.big.rank() {
        return Err(Error::Catalog(format!(
            "{}: impossible one-sided values c={c}, r={r}",
            e.label
        )));
    }
    let dim_m = e.big.dim() - e.small.dim();
    let quotient_dim = 2 * c + r;
    if quotient_dim > dim_m {
        return Err(Error::Catalog(format!(
            "{}: 2c+r = {quotient_dim} exceeds dim m = {dim_m}",
            e.label
        )));
    }

    // dim m^{T_H}: zero T_H-weight count across the isotropy module
    let m = repth::isotropy_module(e)?;
    let mut fixed_m: i64 = 0;
    for (mu, &mult) in &m.summands {
        let ws = repth::weight_system(&e.small, mu)?;
        for (w, &wm) in &ws.entries {
            if w.coords.iter().all(|&x| x == 0) && w.torus.iter().all(num::Zero::is_zero) {
                fixed_m += (wm * mult) as i64;
            }
        }
    }
    let diff = dim_m - fixed_m;
    if diff % 2 != 0 {
        return Err(Error::Inconsistency(format!(
            "{}: dim m − dim m^(T_H) = {diff} is odd",
            e.label
        )));
    }
    let gerry = e.small.dim_u() + diff / 2;

    let lo = dim_m - 2 * c - r;
    let hi = dim_m - c - r;
    if lo > hi || lo > gerry {
        return Err(Error::Catalog(format!(
            "{}: empty nullcone window [{lo}, {}]",
            e.label,
            hi.min(gerry)
        )));
    }

    Ok(OneSidedReport {
        label: e.label.clone(),
        c,
        r,
        dim_m,
        quotient_dim,
        nullcone_lo: lo,
        nullcone_hi: hi,
        cone_intersection_dim: dim_m - r,
        gerry_bound: gerry,
        fixed_dim_m: fixed_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repth::ReductiveSpec;
    use crate::rootsys::SimpleType;
    use crate::Rat;

    fn st(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect())
            .collect()
    }

    fn pair(
        label: &str,
        big: ReductiveSpec,
        small: ReductiveSpec,
        rows: &[&[i64]],
    ) -> EmbeddingSpec {
        EmbeddingSpec::new(label, big, small, mat(rows), true).unwrap()
    }

    fn sl3_t2() -> EmbeddingSpec {
        pair(
            "sl3-t2",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::torus(2),
            &[&[1, 0], &[0, 1]],
        )
    }

    fn sl3_gl2() -> EmbeddingSpec {
        pair(
            "sl3-gl2",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::new(vec![st("A1")], 1),
            &[&[1, 0], &[1, 2]],
        )
    }

    fn spin7_g2() -> EmbeddingSpec {
        pair(
            "spin7-g2",
            ReductiveSpec::simple(st("B3")),
            ReductiveSpec::simple(st("G2")),
            &[&[1, 3, 1], &[0, -1, 0]],
        )
    }

    #[test]
    fn complexity_rank_examples() {
        let sp6 = pair(
            "sp6-sp4sl2",
            ReductiveSpec::simple(st("C3")),
            ReductiveSpec::new(vec![st("C2"), st("A1")], 0),
            &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]],
        );
        assert_eq!(complexity_rank(&sp6).unwrap(), (1, 6));
        assert_eq!(complexity_rank(&sl3_gl2()).unwrap(), (0, 4));
        let g2_sl3 = pair(
            "g2-sl3",
            ReductiveSpec::simple(st("G2")),
            ReductiveSpec::simple(st("A2")),
            &[&[0, 1], &[1, 1]],
        );
        assert_eq!(complexity_rank(&g2_sl3).unwrap(), (1, 4));
    }

    #[test]
    fn identity_pair_is_inadmissible() {
        let id = EmbeddingSpec::identity("id-sl3", ReductiveSpec::simple(st("A2")));
        assert!(matches!(
            complexity_rank(&id),
            Err(Error::InadmissiblePair(_))
        ));
    }

    #[test]
    fn nullcone_and_defect_examples() {
        assert_eq!(nullcone_dim(&sl3_t2()).unwrap(), 3);
        assert_eq!(defect(&sl3_t2()).unwrap(), 1);
        assert_eq!(nullcone_dim(&sl3_gl2()).unwrap(), 4);
        assert_eq!(defect(&sl3_gl2()).unwrap(), 0);
        assert_eq!(nullcone_dim(&spin7_g2()).unwrap(), 15);
        assert_eq!(defect(&spin7_g2()).unwrap(), 1);
    }

    #[test]
    fn s_regularity_examples() {
        assert!(s_regular(&sl3_t2()).unwrap());
        assert!(s_regular(&spin7_g2()).unwrap());
        // Sp4 ⊃ Sp2 (first symplectic plane) is not s-regular
        let sp4_sp2 = pair(
            "sp4-sp2",
            ReductiveSpec::simple(st("C2")),
            ReductiveSpec::simple(st("A1")),
            &[&[1, 1]],
        );
        assert!(!s_regular(&sp4_sp2).unwrap());
    }

    #[test]
    fn verify_theorems_on_spin7_g2() {
        let rep = verify_theorems(&spin7_g2()).unwrap();
        assert_eq!(rep.c_tilde, 1);
        assert_eq!(rep.r_tilde, 5);
        assert_eq!(rep.quotient_dim, 7);
        assert_eq!(rep.defect, 1);
        assert!(rep.s_regular);
        assert_eq!(rep.generic_stab_rank, 0);
        assert!(rep.all_checks_pass(), "{:?}", rep.inequality_verdicts);
        // dim B_H = 8 < 9 = ½(21-3): strict first inequality
        assert_eq!(rep.inequality_verdicts["eq35_first"], Verdict::Strict);
        assert_eq!(rep.inequality_verdicts["eq35_second"], Verdict::Holds);
    }

    #[test]
    fn verify_theorems_on_gelfand_pair() {
        let rep = verify_theorems(&sl3_gl2()).unwrap();
        assert_eq!(rep.c_tilde, 0);
        assert_eq!(rep.defect, 0);
        assert!(rep.s_regular);
        assert!(rep.all_checks_pass());
    }

    #[test]
    fn one_sided_reports() {
        // Sp4 ⊃ principal SL2: m = ϖ^6, c = 1, r = 2
        let p = pair(
            "sp4-psl2",
            ReductiveSpec::simple(st("C2")),
            ReductiveSpec::simple(st("A1")),
            &[&[3, 4]],
        );
        let rep = one_sided_report(&p, 1, 2).unwrap();
        assert_eq!(rep.dim_m, 7);
        assert_eq!(rep.quotient_dim, 4);
        assert_eq!((rep.nullcone_lo, rep.nullcone_hi), (3, 4));
        assert_eq!(rep.cone_intersection_dim, 5);
        assert_eq!(rep.gerry_bound, 4);

        // symmetric pair SL3 ⊃ SO3: window degenerates to a point
        let s = pair(
            "sl3-so3",
            ReductiveSpec::simple(st("A2")),
            ReductiveSpec::simple(st("A1")),
            &[&[2, 2]],
        );
        let rep = one_sided_report(&s, 0, 2).unwrap();
        assert_eq!(rep.dim_m, 5);
        assert_eq!((rep.nullcone_lo, rep.nullcone_hi), (3, 3));
        assert_eq!(rep.gerry_bound, 3);

        // zero-width window for any c = 0
        assert_eq!(rep.nullcone_hi - rep.nullcone_lo, 0);

        // impossible catalog data is rejected
        assert!(one_sided_report(&s, 3, 2).is_err());
    }
}
