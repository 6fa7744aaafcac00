//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured evidence. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; every tolerance is pinned in the assertions.

use coiso::catalog::Catalog;
use coiso::liealg;
use coiso::poisson::{self, BracketMode};
use coiso::poly::PolyFn;
use coiso::repth;
use coiso::rootsys::Weight;
use coiso::{homog, parse_rat, BigRat, Rat};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn weight(coords: &[i64], torus: &[&str]) -> Weight {
    Weight::new(
        coords.to_vec(),
        torus.iter().map(|t| parse_rat(t).unwrap()).collect(),
    )
}

fn dec(summands: &[(Weight, u64)]) -> repth::Decomposition {
    repth::Decomposition {
        summands: summands.iter().cloned().collect(),
    }
}

/// Criterion 1: Complexity-one table reproduction: all nine instantiations have
/// complexity exactly 1, within one second.
#[test]
fn acceptance_1_table_reproduction() {
    let cat = Catalog::bundled();
    let rows = [
        "table1-1", "table1-2", "table1-3", "table1-4", "table1-5", "table1-6", "table1-7l",
        "table1-7s", "table1-8",
    ];
    let t0 = Instant::now();
    for row in rows {
        let e = &cat.get(row).unwrap().embedding;
        let (c, r) = homog::complexity_rank(e).unwrap();
        assert_eq!(c, 1, "{row}");
        assert_eq!(r, e.big.rank() + e.small.rank(), "{row}");
    }
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "table reproduction took {elapsed:?}"
    );
    println!("ACCEPTANCE 1 PASS: 9 table rows at complexity 1 in {elapsed:?}");
}

/// Criterion 2: Strong Gelfand reproduction: both series have complexity 0, defect 0,
/// s-regularity, and multiplicity-free branching exhaustively at coordinate
/// sum ≤ 3, within thirty seconds.
#[test]
fn acceptance_2_strong_gelfand() {
    let cat = Catalog::bundled();
    let labels = [
        "sg-sl-2", "sg-sl-3", "sg-sl-4", "sg-sl-5", "sg-so-5", "sg-so-6", "sg-so-7", "sg-so-8",
    ];
    let t0 = Instant::now();
    for label in labels {
        let e = &cat.get(label).unwrap().embedding;
        let rep = homog::verify_theorems(e).unwrap();
        assert_eq!(rep.c_tilde, 0, "{label}");
        assert_eq!(rep.defect, 0, "{label}");
        assert!(rep.s_regular, "{label}");
        let violation = repth::multiplicity_free_up_to(e, 3).unwrap();
        assert!(
            violation.is_none(),
            "{label}: multiplicity ≥ 2 at {violation:?}"
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "scan took {elapsed:?}");
    println!("ACCEPTANCE 2 PASS: 8 strong Gelfand pairs multiplicity-free (bound 3) in {elapsed:?}");
}

/// Criterion 3: No equidimensionality: every catalog double pair with positive
/// complexity, nonzero h and simple G has the first inequality strict, and
/// every complexity-one pair is s-regular with defect exactly 1.
#[test]
fn acceptance_3_strictness_suite() {
    let cat = Catalog::bundled();
    let mut strict_checked = 0;
    let mut c1_checked = 0;
    for entry in &cat.entries {
        let e = &entry.embedding;
        if !e.proper {
            continue;
        }
        let rep = homog::verify_theorems(e).unwrap();
        if rep.c_tilde >= 1 && e.small.dim() > 0 && e.big.is_simple() {
            let half = (e.big.dim() - rep.fixed_dim) / 2;
            assert!(
                e.small.dim_b() < half,
                "{}: dim B_H = {} not < {half}",
                entry.label,
                e.small.dim_b()
            );
            strict_checked += 1;
        }
        if rep.c_tilde == 1 {
            assert!(rep.s_regular, "{}", entry.label);
            assert_eq!(rep.defect, 1, "{}", entry.label);
            c1_checked += 1;
        }
    }
    assert!(strict_checked >= 15);
    assert_eq!(
        c1_checked, 13,
        "nine table rows, three family instances, one symmetric duplicate"
    );
    println!(
        "ACCEPTANCE 3 PASS: strict inequality on {strict_checked} pairs, defect 1 on {c1_checked} complexity-one pairs"
    );
}

/// Criterion 4: The two-sided bound, parity, and the intersection identity
/// `dim h + 2c̃ = dim g − rk g − rk h` hold exactly for every proper pair.
#[test]
fn acceptance_4_inequalities_and_identities() {
    let cat = Catalog::bundled();
    let mut checked = 0;
    for entry in &cat.entries {
        let e = &entry.embedding;
        if !e.proper {
            continue;
        }
        let rep = homog::verify_theorems(e).unwrap();
        let half = (e.big.dim() - rep.fixed_dim) / 2;
        assert!(e.small.dim_b() <= half, "{}", entry.label);
        assert!(half <= e.big.dim_u(), "{}", entry.label);
        assert_eq!((e.big.dim() - rep.fixed_dim) % 2, 0, "{}", entry.label);
        assert_eq!(
            e.small.dim() + 2 * rep.c_tilde,
            e.big.dim() - e.big.rank() - e.small.rank(),
            "{}",
            entry.label
        );
        checked += 1;
    }
    assert_eq!(checked, 24);
    println!("ACCEPTANCE 4 PASS: bounds, parity and intersection identity exact on {checked} pairs");
}

/// Criterion 5: Branching oracles: the eight adjoint decompositions (torus charges
/// included for items 6-8) and the binary-sextic isotropy module of the
/// principal pair, reproduced exactly.
#[test]
fn acceptance_5_branching_oracles() {
    let cat = Catalog::bundled();
    let expect: Vec<(&str, Vec<(Weight, u64)>)> = vec![
        (
            "table1-1",
            vec![
                (weight(&[1, 1], &[]), 1),
                (weight(&[1, 0], &[]), 1),
                (weight(&[0, 1], &[]), 1),
                (weight(&[0, 0], &[]), 1),
            ],
        ),
        (
            "table1-2",
            vec![
                (weight(&[2, 0, 0], &[]), 1),
                (weight(&[1, 0, 1], &[]), 1),
                (weight(&[0, 0, 2], &[]), 1),
            ],
        ),
        (
            "table1-3",
            vec![(weight(&[1, 0], &[]), 1), (weight(&[0, 1], &[]), 1)],
        ),
        (
            "table1-4",
            vec![
                (weight(&[1, 1], &[]), 1),
                (weight(&[1, 0], &[]), 1),
                (weight(&[0, 1], &[]), 1),
            ],
        ),
        (
            "table1-5",
            vec![(weight(&[2], &[]), 1), (weight(&[4], &[]), 1)],
        ),
        (
            "table1-6",
            vec![
                (weight(&[], &["2", "-1"]), 1),
                (weight(&[], &["-1", "2"]), 1),
                (weight(&[], &["1", "1"]), 1),
                (weight(&[], &["-2", "1"]), 1),
                (weight(&[], &["1", "-2"]), 1),
                (weight(&[], &["-1", "-1"]), 1),
                (weight(&[], &["0", "0"]), 2),
            ],
        ),
        (
            "table1-7l",
            vec![
                (weight(&[2], &["0"]), 1),
                (weight(&[1], &["1"]), 1),
                (weight(&[1], &["-1"]), 1),
                (weight(&[0], &["2"]), 1),
                (weight(&[0], &["-2"]), 1),
                (weight(&[0], &["0"]), 1),
            ],
        ),
        (
            "table1-7s",
            vec![
                (weight(&[2], &["2"]), 1),
                (weight(&[2], &["0"]), 1),
                (weight(&[2], &["-2"]), 1),
                (weight(&[0], &["0"]), 1),
            ],
        ),
        (
            "table1-8",
            vec![
                (weight(&[1, 1], &["1"]), 1),
                (weight(&[1, 1], &["-1"]), 1),
                (weight(&[2, 0], &["0"]), 1),
                (weight(&[0, 2], &["0"]), 1),
                (weight(&[0, 0], &["0"]), 1),
            ],
        ),
    ];
    for (label, summands) in &expect {
        let e = &cat.get(label).unwrap().embedding;
        let got = repth::branch_adjoint(e).unwrap();
        assert_eq!(got, dec(summands), "{label}");
    }
    // item 14: the isotropy module of the principal pair is the binary sextics
    let e = &cat.get("os-sp4-psl2").unwrap().embedding;
    let m = repth::isotropy_module(e).unwrap();
    assert_eq!(m, dec(&[(weight(&[6], &[]), 1)]));
    println!("ACCEPTANCE 5 PASS: 9 adjoint decompositions and the sextic isotropy module exact");
}

/// Criterion 6: Pointwise orbit identity `dim G·x = dim H·x + dim([g,x] ∩ m)` at 100
/// seeded rational points per realized pair, doubling for the symmetric
/// realization, within sixty seconds.
#[test]
fn acceptance_6_orbit_identities() {
    let cat = Catalog::bundled();
    let t0 = Instant::now();
    let mut total_points = 0;
    for (label, symmetric) in [
        ("table1-5", false),
        ("table1-6", false),
        ("table1-7l", false),
        ("table1-7s", false),
        ("sym-sl3-so3", true),
    ] {
        let entry = cat.get(label).unwrap();
        let sub = coiso::catalog::realize_entry(entry).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC015_0000 + total_points as u64);
        for _ in 0..100 {
            let x = liealg::random_m_point(&sub, &mut rng, 100);
            let (gx, hx, cap, hxm) = liealg::orbit_dims_at(&sub, &x).unwrap();
            assert_eq!(gx, hx + cap, "{label}: orbit identity");
            assert!(cap >= hxm, "{label}");
            assert_eq!(gx == 2 * hx, cap == hxm, "{label}: doubling criterion");
            if symmetric {
                assert_eq!(gx, 2 * hx, "{label}: symmetric doubling");
            }
            total_points += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "orbit checks took {elapsed:?}");
    println!("ACCEPTANCE 6 PASS: orbit identity exact at {total_points} points in {elapsed:?}");
}

/// Criterion 7: Invariant relations of the binary-quadratic model at 100 seeded points
/// each, with the perturbed relation failing as the negative control.
#[test]
fn acceptance_7_invariant_relations() {
    let model = poisson::binary_quadratic_model();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let outcomes = poisson::verify_relations(&model, 100, &mut rng, 100);
    let by_name = |n: &str| outcomes.iter().find(|o| o.name == n).unwrap();
    assert!(by_name("det_pairing_identity").holds);
    assert!(by_name("monomial_identity").holds);
    assert!(by_name("det_expansion_identity").holds);
    let control = by_name("perturbed_det_identity");
    assert!(!control.holds, "negative control must fail");
    assert!(control.witness.is_some(), "failure carries a witness point");
    assert!(outcomes.iter().all(|o| o.as_expected));
    println!("ACCEPTANCE 7 PASS: 3 relations exact at 100 points, negative control failed with witness");
}

/// Criterion 8: Poisson suite: symmetric-pair bracket vanishing, Casimir centrality,
/// the Jacobi identity on 200 random triples, and the short-Levi rank.
#[test]
fn acceptance_8_poisson_suite() {
    // (a) symmetric pair: coisotropy bracket of p2, p3 vanishes at 100 points
    let cat = Catalog::bundled();
    let entry = cat.get("sym-sl3-so3").unwrap();
    let sub = coiso::catalog::realize_entry(entry).unwrap();
    let set = poisson::symmetric_pair_invariants("sl3-so3-symmetric", &sub).unwrap();
    let p2 = set.generator("p2").unwrap().clone();
    let p3 = set.generator("p3").unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let alpha: Vec<BigRat> = (0..sub.dim_m())
            .map(|_| liealg::random_rat(&mut rng, 100))
            .collect();
        let v = poisson::coiso_bracket_at(&sub, &p2, &p3, &alpha).unwrap();
        assert!(v.is_zero(), "symmetric bracket must vanish");
    }

    // (b) Casimir centrality for sl2 and sl3 at 100 points
    for ty in ["A1", "A2"] {
        let alg = liealg::chevalley(ty.parse().unwrap()).unwrap();
        let cas = poisson::quadratic_casimir(&alg);
        for i in 0..alg.dim {
            let x = PolyFn::var(alg.dim, i);
            assert!(poisson::lie_poisson(&alg, &cas, &x).is_zero());
        }
        for k in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(800 + k);
            let pt: Vec<BigRat> = (0..alg.dim)
                .map(|_| liealg::random_rat(&mut rng, 100))
                .collect();
            for i in 0..alg.dim {
                let x = PolyFn::var(alg.dim, i);
                assert!(poisson::lie_poisson_at(&alg, &cas, &x, &pt).is_zero());
            }
        }
    }

    // (c) Jacobi identity for the Lie-Poisson bracket on 200 random triples
    let alg = liealg::chevalley("A2".parse().unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let random_quadratic = |rng: &mut ChaCha8Rng| {
        let mut p = PolyFn::zero(8);
        for _ in 0..4 {
            let i = rng.gen_range(0..8usize);
            let j = rng.gen_range(0..8usize);
            let mut e = vec![0u32; 8];
            e[i] += 1;
            e[j] += 1;
            p.add_term(e, liealg::random_rat(rng, 50));
        }
        p
    };
    for _ in 0..200 {
        let f = random_quadratic(&mut rng);
        let g = random_quadratic(&mut rng);
        let h = random_quadratic(&mut rng);
        let jac = poisson::lie_poisson(&alg, &f, &poisson::lie_poisson(&alg, &g, &h))
            .add(&poisson::lie_poisson(&alg, &g, &poisson::lie_poisson(&alg, &h, &f)))
            .add(&poisson::lie_poisson(&alg, &h, &poisson::lie_poisson(&alg, &f, &g)));
        assert!(jac.is_zero(), "Jacobi identity");
    }

    // (d) short-Levi invariants: Poisson matrix rank 2 = 2c̃ at a generic
    // sampled point and ≤ 2 at every point
    let (_, short) = poisson::short_levi_sp4_model().unwrap();
    assert!(matches!(short.bracket, BracketMode::LiePoisson(_)));
    let mut rng = ChaCha8Rng::seed_from_u64(888);
    let sample = poisson::generic_rank(&short, &mut rng, 100, 5).unwrap();
    assert!(sample.stabilized);
    assert_eq!(sample.max_rank, 2);
    assert!(sample.ranks.iter().all(|&r| r <= 2));

    // rank parity and the commuting-family transcendence bound c̃ + r̃ = 5
    let mut rng = ChaCha8Rng::seed_from_u64(889);
    let bound = poisson::max_commuting_differential_rank(&short, &mut rng, 4, 60).unwrap();
    assert!(bound <= 5, "commuting family differential rank {bound}");

    println!("ACCEPTANCE 8 PASS: symmetric brackets zero (100 pts), Casimirs central (100 pts), Jacobi on 200 triples, short-Levi rank 2");
}

/// Criterion 9: Structure-constant self-check: Jacobi and form invariance exhaustively
/// on all basis triples for the seven catalog types (B2 and C2 both), zero
/// failures.
#[test]
fn acceptance_9_structure_constants() {
    let mut triples = 0usize;
    for ty in ["A1", "A2", "A3", "B2", "C2", "B3", "C3", "G2"] {
        let alg = liealg::chevalley(ty.parse().unwrap()).unwrap();
        alg.self_check().unwrap();
        let d = alg.dim;
        triples += d * (d - 1) * (d - 2) / 6;
    }
    println!("ACCEPTANCE 9 PASS: Jacobi and invariance exhaustive over {triples} ordered-free triples, 8 algebras");
}

/// Criterion 10: `verify-all` on the bundled catalog exits 0 and is byte-deterministic
/// under a fixed seed, within five minutes.
#[test]
fn acceptance_10_verify_all_deterministic() {
    let exe = env!("CARGO_BIN_EXE_coiso");
    let t0 = Instant::now();
    let run = |fmt: &str| {
        std::process::Command::new(exe)
            .args(["verify-all", "--seed", "31415", "--format", fmt])
            .output()
            .expect("binary runs")
    };
    let a = run("text");
    assert!(a.status.success(), "verify-all must exit 0");
    let b = run("text");
    assert_eq!(a.stdout, b.stdout, "byte determinism under a fixed seed");
    let c = run("json");
    let d = run("json");
    assert!(c.status.success());
    assert_eq!(c.stdout, d.stdout);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "verify-all took {elapsed:?}");
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("0 mismatches: PASS"));
    println!("ACCEPTANCE 10 PASS: verify-all clean and deterministic, 4 runs in {elapsed:?}");
}

/// Supplementary: the multiplicity interface realizes the rank-monoid
/// semantics of the double space on the complexity-one witness pair.
#[test]
fn multiplicity_examples() {
    let cat = Catalog::bundled();
    let e = &cat.get("table1-4").unwrap().embedding;
    // the 7-dimensional module restricts with one copy of each fundamental
    let lam = weight(&[1, 0], &[]);
    let mu1 = weight(&[1, 0], &[]);
    let mu2 = weight(&[0, 1], &[]);
    assert_eq!(repth::multiplicity(e, &lam, &mu1).unwrap(), 1);
    assert_eq!(repth::multiplicity(e, &lam, &mu2).unwrap(), 1);
    let zero_g = e.big.zero_weight();
    let zero_h = e.small.zero_weight();
    assert_eq!(repth::multiplicity(e, &zero_g, &zero_h).unwrap(), 1);

    // the strong Gelfand pair answers only 0 or 1 on a grid
    let sg = &cat.get("sg-sl-2").unwrap().embedding;
    for lam in repth::dominant_weights_up_to(&sg.big, 3) {
        let dec = repth::branch(sg, &sg.big.dual_weight(&lam).unwrap()).unwrap();
        for (mu, _) in &dec.summands {
            let m = repth::multiplicity(sg, &lam, mu).unwrap();
            assert!(m <= 1, "λ={lam} μ={mu}: {m}");
        }
    }
}

/// Supplementary: positive-complexity pairs show a branching multiplicity ≥ 2
/// within the configured witness bound.
#[test]
fn multiplicity_witnesses_for_positive_complexity() {
    let cat = Catalog::bundled();
    let mut found = 0;
    for entry in &cat.entries {
        let e = &entry.embedding;
        if !e.proper {
            continue;
        }
        let (c, _) = homog::complexity_rank(e).unwrap();
        if c == 0 {
            continue;
        }
        let witness = repth::multiplicity_witness(e, 5).unwrap();
        assert!(witness.is_some(), "{}: no witness at bound 5", entry.label);
        found += 1;
    }
    assert!(found >= 16);
    println!("witnesses found for {found} positive-complexity pairs");
}

/// Supplementary: the one-sided bounds records quoted in the text.
#[test]
fn one_sided_bounds_examples() {
    let cat = Catalog::bundled();
    let sextic = cat.get("os-sp4-psl2").unwrap();
    let rep = homog::one_sided_report(&sextic.embedding, 1, 2).unwrap();
    assert_eq!(
        (rep.dim_m, rep.quotient_dim, rep.nullcone_lo, rep.nullcone_hi),
        (7, 4, 3, 4)
    );
    let sym = cat.get("sym-sl3-so3").unwrap();
    let rep = homog::one_sided_report(&sym.embedding, 0, 2).unwrap();
    assert_eq!((rep.nullcone_lo, rep.nullcone_hi), (3, 3));
    assert_eq!(rep.gerry_bound, 3);
    // the two equidimensional families have their upper bound pinched to the
    // lower end of the window by the fixed-space count
    for label in ["rem34-sp4-sp2", "rem34-so5-so3"] {
        let entry = cat.get(label).unwrap();
        let rep = homog::one_sided_report(&entry.embedding, 1, 2).unwrap();
        assert_eq!(rep.gerry_bound, rep.nullcone_lo, "{label}");
    }
}

/// Supplementary: on a non-symmetric realization, invariant brackets cannot
/// all vanish — the torus pair has complexity one, so its five basic
/// invariants exceed the commuting-family transcendence bound.
#[test]
fn coisotropy_bracket_on_nonsymmetric_pair() {
    let cat = Catalog::bundled();
    let entry = cat.get("table1-6").unwrap();
    let sub = coiso::catalog::realize_entry(entry).unwrap();
    let fields = sub.action_fields_on_m().unwrap();
    let quads = poisson::solve_invariants(sub.dim_m(), 2, &fields);
    let cubics = poisson::solve_invariants(sub.dim_m(), 3, &fields);
    assert_eq!(quads.len(), 3, "one quadratic per root pair");
    assert_eq!(cubics.len(), 2, "one cubic per root triangle");
    let gens: Vec<PolyFn> = quads.into_iter().chain(cubics).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut nonzero_seen = false;
    for _ in 0..20 {
        let alpha: Vec<BigRat> = (0..sub.dim_m())
            .map(|_| liealg::random_rat(&mut rng, 50))
            .collect();
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                let v = poisson::coiso_bracket_at(&sub, &gens[i], &gens[j], &alpha).unwrap();
                if !v.is_zero() {
                    nonzero_seen = true;
                }
            }
        }
    }
    assert!(
        nonzero_seen,
        "a complexity-one pair has a non-vanishing invariant bracket"
    );
}

/// Supplementary: branch display matches the multiplicative notation used in
/// the catalog provenance tables.
#[test]
fn branch_notation() {
    let cat = Catalog::bundled();
    let e = &cat.get("table1-4").unwrap().embedding;
    let dec = repth::branch_adjoint(e).unwrap();
    assert_eq!(
        repth::decomposition_notation(&e.small, &dec),
        "ϖ₁ϖ₂ + ϖ₁ + ϖ₂"
    );
    let e = &cat.get("table1-2").unwrap().embedding;
    let dec = repth::branch_adjoint(e).unwrap();
    assert_eq!(
        repth::decomposition_notation(&e.small, &dec),
        "ϖ₁² + ϖ₁ϖ' + ϖ'²"
    );
}

/// Supplementary: weight systems and heights drive a deterministic peeling
/// order (regression guard for the torus-only degenerate case).
#[test]
fn torus_only_branching() {
    let cat = Catalog::bundled();
    let e = &cat.get("table1-6").unwrap().embedding;
    let lam = weight(&[1, 0], &[]);
    let dec = repth::branch(e, &lam).unwrap();
    assert_eq!(dec.summands.len(), 3);
    assert!(dec.summands.values().all(|&m| m == 1));
    let charges: Vec<Vec<Rat>> = dec.summands.keys().map(|w| w.torus.clone()).collect();
    let expect: Vec<Vec<Rat>> = [["-1", "1"], ["0", "-1"], ["1", "0"]]
        .iter()
        .map(|r| r.iter().map(|x| parse_rat(x).unwrap()).collect())
        .collect();
    assert_eq!(charges, expect);
}
