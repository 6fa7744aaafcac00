//! Versioned catalog of curated pairs: embedding matrices, expected values
//! with provenance notes, optional subalgebra realizations and invariant
//! sets, plus the verify-everything harness that recomputes every expectation
//! from first principles.
//!
//! Catalog files are TOML; rationals are strings parsed exactly. A catalog
//! "path" may be a single file or a directory of `*.toml` files (loaded in
//! sorted order). The bundled catalog is embedded in the binary.

use crate::embed::{self, EmbeddingSpec};
use crate::homog;
use crate::liealg::{self, EmbeddedSubalgebra, LieAlgebraData};
use crate::linalg::Vector;
use crate::poisson::{self, BracketMode, Generator, InvariantSet, Relation};
use crate::poly::PolyFn;
use crate::repth::{self, ReductiveSpec};
use crate::rootsys::{SimpleType, Weight};
use crate::{BigRat, Error, Rat, Result};
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// raw TOML schema
// ---------------------------------------------------------------------------

fn default_true() -> bool {
    true
}
fn default_mult() -> u64 {
    1
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema_version: u32,
    #[serde(default)]
    entry: Vec<RawEntry>,
    #[serde(default)]
    invariant_set: Vec<RawInvariantSet>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    label: String,
    provenance: String,
    #[serde(default = "default_true")]
    proper: bool,
    big: RawGroup,
    small: RawGroup,
    restriction: Vec<Vec<String>>,
    #[serde(default)]
    expected: RawExpected,
    onesided: Option<RawOneSided>,
    realization: Option<RawRealization>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    #[serde(default)]
    factors: Vec<String>,
    #[serde(default)]
    torus: usize,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    ctilde: Option<i64>,
    rtilde: Option<i64>,
    defect: Option<i64>,
    s_regular: Option<bool>,
    fixed_dim: Option<i64>,
    nullcone_dim: Option<i64>,
    branch_adjoint: Option<Vec<RawSummand>>,
    isotropy: Option<Vec<RawSummand>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSummand {
    #[serde(default)]
    coords: Vec<i64>,
    #[serde(default)]
    torus: Vec<String>,
    #[serde(default = "default_mult")]
    mult: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOneSided {
    c: i64,
    r: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRealization {
    #[serde(default)]
    symmetric: bool,
    vectors: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawInvariantSet {
    pub entry: String,
    pub label: String,
    /// "ambient" | "isotropy" | "model"
    pub domain: String,
    /// "lie-poisson" | "coisotropy" | "none"
    pub bracket: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_rank: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub model_fields: Vec<RawField>,
    pub generators: Vec<RawGenerator>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RawRelation>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawField {
    pub entries: Vec<RawMatEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawMatEntry {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawGenerator {
    pub name: String,
    pub monomials: Vec<RawMonomial>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawMonomial {
    pub c: String,
    pub e: Vec<u32>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawRelation {
    pub name: String,
    /// "holds" or "fails" (negative control)
    pub expect: String,
    pub monomials: Vec<RawMonomial>,
}

pub(crate) fn parse_bigrat(s: &str) -> Result<BigRat> {
    let bad = || Error::Catalog(format!("bad rational {s:?}"));
    match s.split_once('/') {
        None => s
            .trim()
            .parse::<num::BigInt>()
            .map(BigRat::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: num::BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: num::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(p, q))
        }
    }
}

pub(crate) fn format_bigrat(x: &BigRat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// ---------------------------------------------------------------------------
// domain types
// ---------------------------------------------------------------------------

/// Where an invariant set's polynomials live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainKind {
    /// Coordinates on the dual of the ambient algebra of the pair.
    Ambient,
    /// Coordinates on the isotropy space `m` of the pair's realization.
    Isotropy,
    /// A standalone linear model with explicit action matrices.
    Model,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketKind {
    LiePoisson,
    Coisotropy,
    None,
}

/// Sparse monomial list: exponent vectors with exact coefficients.
pub type MonomialData = Vec<(Vec<u32>, BigRat)>;

/// Parsed invariant-set data; resolved to a [`poisson::InvariantSet`] on
/// demand (the required algebra and realization come from the owning entry).
#[derive(Debug, Clone)]
pub struct InvariantSetData {
    pub label: String,
    pub domain: DomainKind,
    pub bracket: BracketKind,
    pub rank_bound: Option<i64>,
    pub expected_rank: Option<i64>,
    pub model_dim: Option<usize>,
    pub model_fields: Vec<Vec<(usize, usize, BigRat)>>,
    pub generators: Vec<(String, MonomialData)>,
    pub relations: Vec<(String, bool, MonomialData)>,
}

/// Explicit h-generators over the ambient Chevalley basis.
#[derive(Debug, Clone)]
pub struct Realization {
    pub symmetric: bool,
    pub vectors: Vec<BTreeMap<String, String>>,
}

/// Expected values carried by an entry; every value has the provenance of the
/// entry itself.
#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub ctilde: Option<i64>,
    pub rtilde: Option<i64>,
    pub defect: Option<i64>,
    pub s_regular: Option<bool>,
    pub fixed_dim: Option<i64>,
    pub nullcone_dim: Option<i64>,
    pub branch_adjoint: Option<Vec<(Weight, u64)>>,
    pub isotropy: Option<Vec<(Weight, u64)>>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: String,
    pub provenance: String,
    pub embedding: EmbeddingSpec,
    pub expected: Expected,
    pub one_sided: Option<(i64, i64)>,
    pub realization: Option<Realization>,
    pub invariant_sets: Vec<InvariantSetData>,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

fn parse_group(raw: &RawGroup) -> Result<ReductiveSpec> {
    let factors: Vec<SimpleType> = raw
        .factors
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    Ok(ReductiveSpec::new(factors, raw.torus))
}

fn parse_summands(g: &ReductiveSpec, raws: &[RawSummand]) -> Result<Vec<(Weight, u64)>> {
    raws.iter()
        .map(|s| {
            let torus: Vec<Rat> = s
                .torus
                .iter()
                .map(|t| crate::parse_rat(t))
                .collect::<Result<_>>()?;
            let torus = if torus.is_empty() && g.torus_rank > 0 {
                vec![Rat::zero(); g.torus_rank]
            } else {
                torus
            };
            let w = Weight::new(s.coords.clone(), torus);
            g.check_weight_shape(&w)?;
            if !w.is_dominant() {
                return Err(Error::Catalog(format!("summand {w} is not dominant")));
            }
            Ok((w, s.mult))
        })
        .collect()
}

fn parse_entry(raw: RawEntry) -> Result<CatalogEntry> {
    let big = parse_group(&raw.big)?;
    let small = parse_group(&raw.small)?;
    let restriction: Vec<Vec<Rat>> = raw
        .restriction
        .iter()
        .map(|row| row.iter().map(|x| crate::parse_rat(x)).collect())
        .collect::<Result<_>>()?;
    let embedding = EmbeddingSpec::new(
        raw.label.clone(),
        big.clone(),
        small.clone(),
        restriction,
        raw.proper,
    )?;
    if let Some(c) = raw.expected.ctilde {
        if c < 0 {
            return Err(Error::Catalog(format!(
                "{}: expected ctilde = {c} is impossible",
                raw.label
            )));
        }
    }
    if let Some(d) = raw.expected.defect {
        if d < 0 {
            return Err(Error::Catalog(format!(
                "{}: expected defect = {d} is impossible",
                raw.label
            )));
        }
    }
    let expected = Expected {
        ctilde: raw.expected.ctilde,
        rtilde: raw.expected.rtilde,
        defect: raw.expected.defect,
        s_regular: raw.expected.s_regular,
        fixed_dim: raw.expected.fixed_dim,
        nullcone_dim: raw.expected.nullcone_dim,
        branch_adjoint: raw
            .expected
            .branch_adjoint
            .as_deref()
            .map(|s| parse_summands(&small, s))
            .transpose()?,
        isotropy: raw
            .expected
            .isotropy
            .as_deref()
            .map(|s| parse_summands(&small, s))
            .transpose()?,
    };
    Ok(CatalogEntry {
        label: raw.label,
        provenance: raw.provenance,
        embedding,
        expected,
        one_sided: raw.onesided.map(|o| (o.c, o.r)),
        realization: raw.realization.map(|r| Realization {
            symmetric: r.symmetric,
            vectors: r.vectors,
        }),
        invariant_sets: Vec::new(),
    })
}

fn parse_invariant_set(raw: RawInvariantSet) -> Result<(String, InvariantSetData)> {
    let domain = match raw.domain.as_str() {
        "ambient" => DomainKind::Ambient,
        "isotropy" => DomainKind::Isotropy,
        "model" => DomainKind::Model,
        other => return Err(Error::Catalog(format!("unknown domain {other:?}"))),
    };
    let bracket = match raw.bracket.as_str() {
        "lie-poisson" => BracketKind::LiePoisson,
        "coisotropy" => BracketKind::Coisotropy,
        "none" => BracketKind::None,
        other => return Err(Error::Catalog(format!("unknown bracket {other:?}"))),
    };
    let monos = |ms: &[RawMonomial]| -> Result<Vec<(Vec<u32>, BigRat)>> {
        ms.iter()
            .map(|m| Ok((m.e.clone(), parse_bigrat(&m.c)?)))
            .collect()
    };
    let generators = raw
        .generators
        .iter()
        .map(|g| Ok((g.name.clone(), monos(&g.monomials)?)))
        .collect::<Result<_>>()?;
    let relations = raw
        .relations
        .iter()
        .map(|r| {
            let expect = match r.expect.as_str() {
                "holds" => true,
                "fails" => false,
                other => {
                    return Err(Error::Catalog(format!(
                        "relation expectation must be holds or fails, got {other:?}"
                    )))
                }
            };
            Ok((r.name.clone(), expect, monos(&r.monomials)?))
        })
        .collect::<Result<_>>()?;
    let model_fields = raw
        .model_fields
        .iter()
        .map(|f| {
            f.entries
                .iter()
                .map(|e| Ok((e.i, e.j, parse_bigrat(&e.c)?)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    Ok((
        raw.entry,
        InvariantSetData {
            label: raw.label,
            domain,
            bracket,
            rank_bound: raw.rank_bound,
            expected_rank: raw.expected_rank,
            model_dim: raw.model_dim,
            model_fields,
            generators,
            relations,
        },
    ))
}

impl Catalog {
    /// Parses and merges a list of named TOML documents.
    pub fn from_sources(sources: &[(&str, &str)]) -> Result<Catalog> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        let mut pending_sets: Vec<(String, InvariantSetData)> = Vec::new();
        for (name, text) in sources {
            let raw: RawFile = toml::from_str(text)
                .map_err(|e| Error::Catalog(format!("{name}: {e}")))?;
            if raw.schema_version != 1 {
                return Err(Error::Catalog(format!(
                    "{name}: unsupported schema version {}",
                    raw.schema_version
                )));
            }
            for e in raw.entry {
                let parsed = parse_entry(e).map_err(|err| match err {
                    Error::Catalog(m) => Error::Catalog(format!("{name}: {m}")),
                    other => other,
                })?;
                if entries.iter().any(|x| x.label == parsed.label) {
                    return Err(Error::Catalog(format!(
                        "{name}: duplicate label {}",
                        parsed.label
                    )));
                }
                entries.push(parsed);
            }
            for s in raw.invariant_set {
                pending_sets.push(parse_invariant_set(s)?);
            }
        }
        for (entry_label, set) in pending_sets {
            let entry = entries
                .iter_mut()
                .find(|e| e.label == entry_label)
                .ok_or_else(|| {
                    Error::Catalog(format!(
                        "invariant set {} references unknown entry {entry_label}",
                        set.label
                    ))
                })?;
            entry.invariant_sets.push(set);
        }
        entries.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(Catalog { entries })
    }

    /// Loads a catalog from a file or from a directory of `*.toml` files.
    pub fn load(path: &std::path::Path) -> Result<Catalog> {
        let mut sources: Vec<(String, String)> = Vec::new();
        if path.is_dir() {
            let mut files: Vec<_> = std::fs::read_dir(path)
                .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?
                .filter_map(|f| f.ok().map(|f| f.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                .collect();
            files.sort();
            for f in files {
                let text = std::fs::read_to_string(&f)
                    .map_err(|e| Error::Catalog(format!("{}: {e}", f.display())))?;
                sources.push((f.display().to_string(), text));
            }
        } else {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
            sources.push((path.display().to_string(), text));
        }
        let borrowed: Vec<(&str, &str)> = sources
            .iter()
            .map(|(n, t)| (n.as_str(), t.as_str()))
            .collect();
        Catalog::from_sources(&borrowed)
    }

    /// The catalog embedded in the library.
    pub fn bundled() -> Catalog {
        Catalog::from_sources(&[
            ("table1.toml", include_str!("../data/table1.toml")),
            (
                "strong_gelfand.toml",
                include_str!("../data/strong_gelfand.toml"),
            ),
            ("one_sided.toml", include_str!("../data/one_sided.toml")),
            (
                "invariant_sets.toml",
                include_str!("../data/invariant_sets.toml"),
            ),
        ])
        .expect("bundled catalog is valid")
    }

    pub fn get(&self, label: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

// ---------------------------------------------------------------------------
// resolution of realizations and invariant sets
// ---------------------------------------------------------------------------

/// The ambient Chevalley algebra of the pair (requires simple `G` of rank ≤ 4).
pub fn ambient_algebra(entry: &CatalogEntry) -> Result<Arc<LieAlgebraData>> {
    let g = &entry.embedding.big;
    if g.factors.len() != 1 || g.torus_rank != 0 {
        return Err(Error::RealizationMismatch(format!(
            "{}: realizations need a simple ambient group",
            entry.label
        )));
    }
    liealg::chevalley(g.factors[0])
}

fn parse_h_vector(
    alg: &LieAlgebraData,
    coeffs: &BTreeMap<String, String>,
) -> Result<Vector> {
    let mut v = vec![BigRat::zero(); alg.dim];
    for (label, c) in coeffs {
        let i = alg.basis_index(label).ok_or_else(|| {
            Error::Catalog(format!("unknown basis label {label:?}"))
        })?;
        v[i] = parse_bigrat(c)?;
    }
    Ok(v)
}

/// Builds the realization of an entry and cross-checks `dim m` against the
/// branching-side isotropy module.
pub fn realize_entry(entry: &CatalogEntry) -> Result<Arc<EmbeddedSubalgebra>> {
    let real = entry.realization.as_ref().ok_or_else(|| {
        Error::RealizationMismatch(format!("{}: no realization data", entry.label))
    })?;
    let alg = ambient_algebra(entry)?;
    let vectors = real
        .vectors
        .iter()
        .map(|v| parse_h_vector(&alg, v))
        .collect::<Result<Vec<_>>>()?;
    let sub = liealg::realize(&alg, vectors)?;
    let m = repth::isotropy_module(&entry.embedding)?;
    let m_dim: u64 = m
        .dimension(&entry.embedding.small)?
        .try_into()
        .map_err(|_| Error::Inconsistency("isotropy dimension overflow".into()))?;
    if sub.dim_m() as u64 != m_dim {
        return Err(Error::RealizationMismatch(format!(
            "{}: dim m = {} from the realization, {} from branching",
            entry.label,
            sub.dim_m(),
            m_dim
        )));
    }
    if sub.dim_h() as i64 != entry.embedding.small.dim() {
        return Err(Error::RealizationMismatch(format!(
            "{}: dim h = {} from the realization, {} from the group",
            entry.label,
            sub.dim_h(),
            entry.embedding.small.dim()
        )));
    }
    Ok(Arc::new(sub))
}

/// Resolves stored invariant-set data into a runnable [`InvariantSet`].
pub fn resolve_invariant_set(
    entry: &CatalogEntry,
    data: &InvariantSetData,
) -> Result<InvariantSet> {
    let build_poly = |vars: usize, monos: &[(Vec<u32>, BigRat)]| -> Result<PolyFn> {
        let mut p = PolyFn::zero(vars);
        for (e, c) in monos {
            if e.len() != vars {
                return Err(Error::Catalog(format!(
                    "{}: monomial arity {} does not match domain {vars}",
                    data.label,
                    e.len()
                )));
            }
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    };
    let (vars, action_fields, bracket) = match data.domain {
        DomainKind::Ambient => {
            let sub = realize_entry(entry)?;
            let alg = Arc::clone(&sub.ambient);
            let fields = sub.action_fields_on_ambient();
            let bracket = match data.bracket {
                BracketKind::LiePoisson => BracketMode::LiePoisson(alg.clone()),
                BracketKind::None => BracketMode::None,
                BracketKind::Coisotropy => {
                    return Err(Error::Catalog(format!(
                        "{}: coisotropy bracket needs the isotropy domain",
                        data.label
                    )))
                }
            };
            (alg.dim, fields, bracket)
        }
        DomainKind::Isotropy => {
            let sub = realize_entry(entry)?;
            let fields = sub.action_fields_on_m()?;
            let bracket = match data.bracket {
                BracketKind::Coisotropy => BracketMode::Coisotropy(Arc::clone(&sub)),
                BracketKind::None => BracketMode::None,
                BracketKind::LiePoisson => {
                    return Err(Error::Catalog(format!(
                        "{}: Lie-Poisson bracket needs the ambient domain",
                        data.label
                    )))
                }
            };
            (sub.dim_m(), fields, bracket)
        }
        DomainKind::Model => {
            let dim = data.model_dim.ok_or_else(|| {
                Error::Catalog(format!("{}: model domain needs model_dim", data.label))
            })?;
            let fields: Vec<Vec<Vector>> = data
                .model_fields
                .iter()
                .map(|f| {
                    let mut m = vec![vec![BigRat::zero(); dim]; dim];
                    for (i, j, c) in f {
                        m[*i][*j] = c.clone();
                    }
                    m
                })
                .collect();
            if data.bracket != BracketKind::None {
                return Err(Error::Catalog(format!(
                    "{}: model domains carry no bracket",
                    data.label
                )));
            }
            (dim, fields, BracketMode::None)
        }
    };
    let generators = data
        .generators
        .iter()
        .map(|(name, monos)| {
            Ok(Generator {
                name: name.clone(),
                poly: build_poly(vars, monos)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n_gen = generators.len();
    let relations = data
        .relations
        .iter()
        .map(|(name, expect, monos)| {
            Ok(Relation {
                name: name.clone(),
                poly: build_poly(n_gen, monos)?,
                expect_holds: *expect,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let set = InvariantSet {
        label: data.label.clone(),
        vars,
        action_fields,
        generators,
        relations,
        bracket,
        rank_bound: data.rank_bound,
        expected_rank: data.expected_rank,
    };
    Ok(set)
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

/// Sampling parameters for the checks that evaluate at random rational points.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub orbit_points: usize,
    pub relation_points: usize,
    pub height: i64,
    pub rank_stabilize: usize,
    /// Coordinate-sum bound for the multiplicity scans; `None` skips them.
    pub multiplicity_bound: Option<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            orbit_points: 25,
            relation_points: 50,
            height: 40,
            rank_stabilize: 5,
            multiplicity_bound: None,
        }
    }
}

/// Deterministic per-entry RNG stream: the global seed mixed with the label.
fn entry_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Match { detail: String },
    Mismatch { expected: String, computed: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct QuantityResult {
    pub name: String,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct EntryVerdict {
    pub label: String,
    pub results: Vec<QuantityResult>,
}

impl EntryVerdict {
    pub fn passed(&self) -> bool {
        self.results
            .iter()
            .all(|r| !matches!(r.status, Status::Mismatch { .. }))
    }

    pub fn mismatches(&self) -> usize {
        self.results
            .iter()
            .filter(|r| matches!(r.status, Status::Mismatch { .. }))
            .count()
    }
}

impl fmt::Display for EntryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.status {
                Status::Match { detail } => {
                    write!(f, "{} {}: match", self.label, r.name)?;
                    if !detail.is_empty() {
                        write!(f, " ({detail})")?;
                    }
                    writeln!(f)?;
                }
                Status::Mismatch { expected, computed } => writeln!(
                    f,
                    "{} {}: MISMATCH expected {expected}, computed {computed}",
                    self.label, r.name
                )?,
                Status::Skipped { reason } => {
                    writeln!(f, "{} {}: skipped ({reason})", self.label, r.name)?
                }
            }
        }
        Ok(())
    }
}

fn decomposition_of(summands: &[(Weight, u64)]) -> repth::Decomposition {
    repth::Decomposition {
        summands: summands.iter().cloned().collect(),
    }
}

fn check_eq<T: PartialEq + fmt::Display>(
    results: &mut Vec<QuantityResult>,
    name: &str,
    expected: Option<T>,
    computed: std::result::Result<T, &Error>,
) {
    let Some(exp) = expected else { return };
    let status = match computed {
        Ok(c) if c == exp => Status::Match {
            detail: format!("{c}"),
        },
        Ok(c) => Status::Mismatch {
            expected: format!("{exp}"),
            computed: format!("{c}"),
        },
        Err(e) => Status::Mismatch {
            expected: format!("{exp}"),
            computed: format!("error: {e}"),
        },
    };
    results.push(QuantityResult {
        name: name.into(),
        status,
    });
}

/// Recomputes every expected value of the entry from first principles and
/// runs the structural checks. Mismatches are data, not errors.
pub fn verify_entry(entry: &CatalogEntry, cfg: &VerifyConfig) -> EntryVerdict {
    let mut results: Vec<QuantityResult> = Vec::new();
    let e = &entry.embedding;

    // structural validation
    match embed::embed_validate(e) {
        Ok(rep) if rep.passed() => results.push(QuantityResult {
            name: "validation".into(),
            status: Status::Match {
                detail: format!("isotropy dim {}", rep.isotropy_dim.unwrap_or(0)),
            },
        }),
        Ok(rep) => results.push(QuantityResult {
            name: "validation".into(),
            status: Status::Mismatch {
                expected: "all validation checks pass".into(),
                computed: rep
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| format!("{} ({})", c.name, c.detail))
                    .collect::<Vec<_>>()
                    .join("; "),
            },
        }),
        Err(err) => results.push(QuantityResult {
            name: "validation".into(),
            status: Status::Mismatch {
                expected: "validation runs".into(),
                computed: err.to_string(),
            },
        }),
    }

    // complexity-level numerics
    if e.proper {
        let report = homog::verify_theorems(e);
        match &report {
            Ok(rep) => {
                check_eq(&mut results, "ctilde", entry.expected.ctilde, Ok(rep.c_tilde));
                check_eq(&mut results, "rtilde", entry.expected.rtilde, Ok(rep.r_tilde));
                check_eq(&mut results, "defect", entry.expected.defect, Ok(rep.defect));
                check_eq(
                    &mut results,
                    "s_regular",
                    entry.expected.s_regular,
                    Ok(rep.s_regular),
                );
                check_eq(
                    &mut results,
                    "fixed_dim",
                    entry.expected.fixed_dim,
                    Ok(rep.fixed_dim),
                );
                check_eq(
                    &mut results,
                    "nullcone_dim",
                    entry.expected.nullcone_dim,
                    Ok(rep.nullcone_dim),
                );
                let failed: Vec<String> = rep
                    .inequality_verdicts
                    .iter()
                    .filter(|(_, v)| !v.ok())
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                results.push(QuantityResult {
                    name: "theorems".into(),
                    status: if failed.is_empty() {
                        Status::Match {
                            detail: format!("{} checks", rep.inequality_verdicts.len()),
                        }
                    } else {
                        Status::Mismatch {
                            expected: "all theorem checks hold".into(),
                            computed: failed.join("; "),
                        }
                    },
                });
            }
            Err(err) => results.push(QuantityResult {
                name: "theorems".into(),
                status: Status::Mismatch {
                    expected: "report computes".into(),
                    computed: err.to_string(),
                },
            }),
        }

        // multiplicity boundary: complexity-zero pairs are multiplicity free
        // (exhaustive at the configured bound); positive-complexity pairs must
        // show a multiplicity ≥ 2 — empirically that needs two more steps of
        // the bound for the smallest witnesses
        if let (Some(bound), Ok(rep)) = (cfg.multiplicity_bound, &report) {
            let status = if rep.c_tilde == 0 {
                match repth::multiplicity_free_up_to(e, bound) {
                    Ok(None) => Status::Match {
                        detail: format!("multiplicity free up to coordinate sum {bound}"),
                    },
                    Ok(Some(w)) => Status::Mismatch {
                        expected: "all branching multiplicities ≤ 1".into(),
                        computed: format!("multiplicity ≥ 2 at {w}"),
                    },
                    Err(err) => Status::Mismatch {
                        expected: "multiplicity scan runs".into(),
                        computed: err.to_string(),
                    },
                }
            } else {
                match repth::multiplicity_witness(e, bound + 2) {
                    Ok(Some(w)) => Status::Match {
                        detail: format!("multiplicity ≥ 2 at {w}"),
                    },
                    Ok(None) => Status::Mismatch {
                        expected: "a branching multiplicity ≥ 2 within the bound".into(),
                        computed: format!("all ≤ 1 up to coordinate sum {}", bound + 2),
                    },
                    Err(err) => Status::Mismatch {
                        expected: "multiplicity scan runs".into(),
                        computed: err.to_string(),
                    },
                }
            };
            results.push(QuantityResult {
                name: "multiplicities".into(),
                status,
            });
        }
    } else {
        for name in ["ctilde", "rtilde", "defect", "theorems"] {
            results.push(QuantityResult {
                name: name.into(),
                status: Status::Skipped {
                    reason: "complexity formula needs a proper pair".into(),
                },
            });
        }
        check_eq(
            &mut results,
            "fixed_dim",
            entry.expected.fixed_dim,
            embed::fixed_space_dim(e).as_ref().map(|&v| v),
        );
        check_eq(
            &mut results,
            "nullcone_dim",
            entry.expected.nullcone_dim,
            homog::nullcone_dim(e).as_ref().map(|&v| v),
        );
    }

    // branching expectations
    if let Some(exp) = &entry.expected.branch_adjoint {
        let expected = decomposition_of(exp);
        let status = match repth::branch_adjoint(e) {
            Ok(dec) if dec == expected => Status::Match {
                detail: repth::decomposition_notation(&e.small, &dec),
            },
            Ok(dec) => Status::Mismatch {
                expected: repth::decomposition_notation(&e.small, &expected),
                computed: repth::decomposition_notation(&e.small, &dec),
            },
            Err(err) => Status::Mismatch {
                expected: repth::decomposition_notation(&e.small, &expected),
                computed: format!("error: {err}"),
            },
        };
        results.push(QuantityResult {
            name: "branch_adjoint".into(),
            status,
        });
    }
    if let Some(exp) = &entry.expected.isotropy {
        let expected = decomposition_of(exp);
        let status = match repth::isotropy_module(e) {
            Ok(dec) if dec == expected => Status::Match {
                detail: repth::decomposition_notation(&e.small, &dec),
            },
            Ok(dec) => Status::Mismatch {
                expected: repth::decomposition_notation(&e.small, &expected),
                computed: repth::decomposition_notation(&e.small, &dec),
            },
            Err(err) => Status::Mismatch {
                expected: repth::decomposition_notation(&e.small, &expected),
                computed: format!("error: {err}"),
            },
        };
        results.push(QuantityResult {
            name: "isotropy".into(),
            status,
        });
    }

    // one-sided bounds record
    if let Some((c, r)) = entry.one_sided {
        let status = match homog::one_sided_report(e, c, r) {
            Ok(rep) => Status::Match {
                detail: format!(
                    "dim m {}, quotient {}, nullcone window [{}, {}], intersection {}, upper bound {}",
                    rep.dim_m,
                    rep.quotient_dim,
                    rep.nullcone_lo,
                    rep.nullcone_hi,
                    rep.cone_intersection_dim,
                    rep.gerry_bound
                ),
            },
            Err(err) => Status::Mismatch {
                expected: "consistent one-sided bounds".into(),
                computed: err.to_string(),
            },
        };
        results.push(QuantityResult {
            name: "onesided".into(),
            status,
        });
    }

    // realization spot checks
    if entry.realization.is_some() {
        let status = match realize_entry(entry) {
            Ok(sub) => {
                let mut rng = entry_rng(cfg.seed, &entry.label);
                let symmetric = entry.realization.as_ref().is_some_and(|r| r.symmetric);
                let mut failure = None;
                for _ in 0..cfg.orbit_points {
                    let x = liealg::random_m_point(&sub, &mut rng, cfg.height);
                    match liealg::orbit_dims_at(&sub, &x) {
                        Ok((gx, hx, cap, hxm)) => {
                            if gx != hx + cap || cap < hxm {
                                failure =
                                    Some(format!("orbit identity fails: {gx} vs {hx}+{cap}"));
                                break;
                            }
                            if symmetric && gx != 2 * hx {
                                failure =
                                    Some(format!("doubling fails: {gx} != 2·{hx}"));
                                break;
                            }
                        }
                        Err(err) => {
                            failure = Some(err.to_string());
                            break;
                        }
                    }
                }
                match failure {
                    None => Status::Match {
                        detail: format!(
                            "dim h {}, dim m {}, {} orbit points",
                            sub.dim_h(),
                            sub.dim_m(),
                            cfg.orbit_points
                        ),
                    },
                    Some(msg) => Status::Mismatch {
                        expected: "orbit identities at every sampled point".into(),
                        computed: msg,
                    },
                }
            }
            Err(err) => Status::Mismatch {
                expected: "realization builds".into(),
                computed: err.to_string(),
            },
        };
        results.push(QuantityResult {
            name: "realization".into(),
            status,
        });
    }

    // invariant sets
    for data in &entry.invariant_sets {
        let prefix = format!("invariants[{}]", data.label);
        match resolve_invariant_set(entry, data) {
            Ok(set) => {
                results.push(QuantityResult {
                    name: format!("{prefix}.invariance"),
                    status: match set.check_invariance() {
                        Ok(()) => Status::Match {
                            detail: format!("{} generators", set.generators.len()),
                        },
                        Err(err) => Status::Mismatch {
                            expected: "all generators invariant".into(),
                            computed: err.to_string(),
                        },
                    },
                });
                if !set.relations.is_empty() {
                    let mut rng = entry_rng(cfg.seed.wrapping_add(1), &data.label);
                    let outcomes = poisson::verify_relations(
                        &set,
                        cfg.relation_points,
                        &mut rng,
                        cfg.height,
                    );
                    let bad: Vec<String> = outcomes
                        .iter()
                        .filter(|o| !o.as_expected)
                        .map(|o| format!("{} (holds={})", o.name, o.holds))
                        .collect();
                    results.push(QuantityResult {
                        name: format!("{prefix}.relations"),
                        status: if bad.is_empty() {
                            Status::Match {
                                detail: format!(
                                    "{} relations at {} points",
                                    outcomes.len(),
                                    cfg.relation_points
                                ),
                            }
                        } else {
                            Status::Mismatch {
                                expected: "all relation expectations met".into(),
                                computed: bad.join("; "),
                            }
                        },
                    });
                }
                if set.expected_rank.is_some() || set.rank_bound.is_some() {
                    let mut rng = entry_rng(cfg.seed.wrapping_add(2), &data.label);
                    let status = match poisson::generic_rank(
                        &set,
                        &mut rng,
                        cfg.height,
                        cfg.rank_stabilize,
                    ) {
                        Ok(sample) => {
                            let bound_ok = set
                                .rank_bound
                                .is_none_or(|b| sample.ranks.iter().all(|&r| r as i64 <= b));
                            let rank_ok = set
                                .expected_rank
                                .is_none_or(|r| sample.max_rank as i64 == r);
                            if bound_ok && rank_ok && sample.stabilized {
                                Status::Match {
                                    detail: format!(
                                        "rank {} over {} samples",
                                        sample.max_rank,
                                        sample.ranks.len()
                                    ),
                                }
                            } else {
                                Status::Mismatch {
                                    expected: format!(
                                        "rank {:?} within bound {:?} (stabilized)",
                                        set.expected_rank, set.rank_bound
                                    ),
                                    computed: format!(
                                        "max {} stabilized {}",
                                        sample.max_rank, sample.stabilized
                                    ),
                                }
                            }
                        }
                        Err(err) => Status::Mismatch {
                            expected: "rank sampling runs".into(),
                            computed: err.to_string(),
                        },
                    };
                    results.push(QuantityResult {
                        name: format!("{prefix}.rank"),
                        status,
                    });
                }
            }
            Err(err) => results.push(QuantityResult {
                name: prefix,
                status: Status::Mismatch {
                    expected: "invariant set resolves".into(),
                    computed: err.to_string(),
                },
            }),
        }
    }

    EntryVerdict {
        label: entry.label.clone(),
        results,
    }
}

// ---------------------------------------------------------------------------
// bundled invariant-set data generation
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RawInvariantFileOut {
    schema_version: u32,
    invariant_set: Vec<RawInvariantSet>,
}

fn raw_from_set(
    entry: &str,
    domain: &str,
    bracket: &str,
    set: &InvariantSet,
    store_fields: bool,
) -> RawInvariantSet {
    let monomials = |p: &PolyFn| -> Vec<RawMonomial> {
        p.terms
            .iter()
            .map(|(e, c)| RawMonomial {
                c: format_bigrat(c),
                e: e.clone(),
            })
            .collect()
    };
    RawInvariantSet {
        entry: entry.into(),
        label: set.label.clone(),
        domain: domain.into(),
        bracket: bracket.into(),
        rank_bound: set.rank_bound,
        expected_rank: set.expected_rank,
        model_dim: if store_fields { Some(set.vars) } else { None },
        model_fields: if store_fields {
            set.action_fields
                .iter()
                .map(|f| RawField {
                    entries: f
                        .iter()
                        .enumerate()
                        .flat_map(|(i, row)| {
                            row.iter().enumerate().filter_map(move |(j, c)| {
                                if c.is_zero() {
                                    None
                                } else {
                                    Some((i, j, c.clone()))
                                }
                            })
                        })
                        .map(|(i, j, c)| RawMatEntry {
                            i,
                            j,
                            c: format_bigrat(&c),
                        })
                        .collect(),
                })
                .collect()
        } else {
            Vec::new()
        },
        generators: set
            .generators
            .iter()
            .map(|g| RawGenerator {
                name: g.name.clone(),
                monomials: monomials(&g.poly),
            })
            .collect(),
        relations: set
            .relations
            .iter()
            .map(|r| RawRelation {
                name: r.name.clone(),
                expect: if r.expect_holds { "holds" } else { "fails" }.into(),
                monomials: monomials(&r.poly),
            })
            .collect(),
    }
}

/// Regenerates the bundled invariant-set file from the model builders. The
/// polynomials are derived, not hand-written; the stored file is the catalog
/// serialization the loader consumes, and a test pins the two together.
pub fn builtin_invariant_sets_toml() -> Result<String> {
    let binary = poisson::binary_quadratic_model();
    let (_, short_levi) = poisson::short_levi_sp4_model()?;
    // the symmetric realization of sym-sl3-so3 (transpose fixed points)
    let base = Catalog::from_sources(&[(
        "one_sided.toml",
        include_str!("../data/one_sided.toml"),
    )])?;
    let sym_entry = base.get("sym-sl3-so3")?;
    let sub = realize_entry(sym_entry)?;
    let symmetric = poisson::symmetric_pair_invariants("sl3-so3-symmetric", &sub)?;

    let out = RawInvariantFileOut {
        schema_version: 1,
        invariant_set: vec![
            raw_from_set("table1-7s", "model", "none", &binary, true),
            raw_from_set("table1-7s", "ambient", "lie-poisson", &short_levi, false),
            raw_from_set("sym-sl3-so3", "isotropy", "coisotropy", &symmetric, false),
        ],
    };
    let header = "# Invariant generators and relations, serialized as sparse monomial lists.\n\
                  # This file is derived from the model builders; regenerate with\n\
                  # COISO_REGEN=1 cargo test -p coiso --lib catalog::tests::bundled_invariant_sets_match_builders\n\n";
    let body = toml::to_string_pretty(&out)
        .map_err(|e| Error::Catalog(format!("serialize invariant sets: {e}")))?;
    Ok(format!("{header}{body}"))
}
