//! Acceptance criteria, run sequentially so the runtime budgets are
//! measured without interference. Prints one line per criterion.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superext_core::algebra::associativity_witness;
use superext_core::analysis::{cancelable, check_two_sided_ideal, is_commutative, is_isomorphism, isomorphic};
use superext_core::checkers::{check_lemma41, check_prop45_all, search_central_nonprincipal, CertificateL41, Lemma41Verdict};
use superext_core::hyperspace::{enumerate_inclusion_hyperspaces, enumerate_mls};
use superext_core::superext::{product_via_unions, sampled_associativity_witness, translate_mls, DEFAULT_SEED};
use superext_core::{oracle, parse_spec, product, suite, CayleyTable, FiniteSemigroup, LambdaTable, SetFamily, Subset};

const SEED: u64 = DEFAULT_SEED;

struct Outcome {
    ok: bool,
    details: String,
}

fn pass(details: impl Into<String>) -> Outcome {
    Outcome { ok: true, details: details.into() }
}

fn fail(details: impl Into<String>) -> Outcome {
    Outcome { ok: false, details: details.into() }
}

fn g(spec: &str) -> FiniteSemigroup {
    parse_spec(spec).unwrap()
}

fn lambda(spec: &str) -> LambdaTable {
    superext_core::lambda_table(&g(spec)).unwrap()
}

fn sorted_masks(n: usize) -> Vec<u128> {
    let mut m: Vec<u128> = enumerate_mls(n).unwrap().iter().map(|x| oracle::family_mask(x)).collect();
    m.sort_unstable();
    m
}

fn mls_counts() -> Outcome {
    let expected = [1usize, 2, 4, 12, 81, 2646];
    for n in 1..=5 {
        let start = Instant::now();
        let found = enumerate_mls(n).unwrap();
        let took = start.elapsed();
        if found.len() != expected[n - 1] || took >= Duration::from_secs(1) {
            return fail(format!("n={n}: {} systems in {took:?}", found.len()));
        }
    }
    for n in 1..=4 {
        let masks = sorted_masks(n);
        if masks != oracle::mls_by_all_families(n) || masks != oracle::mls_by_self_duality(n) {
            return fail(format!("n={n}: disagrees with brute-force oracles"));
        }
    }
    if sorted_masks(5) != oracle::mls_by_linked_antichains(5) {
        return fail("n=5: disagrees with linked-antichain oracle");
    }
    let start = Instant::now();
    let six = enumerate_mls(6).unwrap().len();
    let took = start.elapsed();
    if six != 2646 || took >= Duration::from_secs(60) {
        return fail(format!("n=6: {six} systems in {took:?}"));
    }
    pass(format!("1,2,4,12,81,{six}; n=6 in {took:?}"))
}

fn lambda_c4_iso() -> Outcome {
    let t = lambda("C4");
    let m = g("C4xC2e");
    match isomorphic(&t, &m).unwrap() {
        Some(phi) if is_isomorphism(&t, &m, &phi) => pass(format!("phi = {phi:?}")),
        _ => fail("no isomorphism λ(C4) -> C4×C2¹"),
    }
}

fn commutativity_boundary() -> Outcome {
    for (spec, expected) in [("C1", true), ("C2", true), ("C3", true), ("C4", true), ("C2xC2", true), ("C5", false)] {
        let t = lambda(spec);
        if is_commutative(&t) != expected {
            return fail(format!("λ({spec}) commutative != {expected}"));
        }
    }
    pass("commutative for C1..C4, C2×C2; not for C5")
}

const GROUPS_2_TO_5: [&str; 5] = ["C2", "C3", "C4", "C2xC2", "C5"];

fn ideal() -> Outcome {
    for spec in GROUPS_2_TO_5 {
        let t = lambda(spec);
        if let Err(w) = check_two_sided_ideal(&t, &t.non_principal_indices()) {
            return fail(format!("λ({spec}): witness {w:?}"));
        }
    }
    pass("λ(G)∖G is a two-sided ideal for all groups of order 2..5")
}

fn cancelability() -> Outcome {
    for spec in GROUPS_2_TO_5 {
        let t = lambda(spec);
        let principal = t.principal_index().to_vec();
        let (left, right) = cancelable(&t);
        if left != principal || right != principal {
            return fail(format!("λ({spec}): left {left:?}, right {right:?}"));
        }
    }
    let c4 = g("C4");
    let t = lambda("C4");
    let (left, right) = cancelable(&t);
    for i in t.non_principal_indices() {
        let mut orbit: Vec<SetFamily> = (0..4)
            .map(|x| translate_mls(x, t.element(i), &c4).unwrap().into_family())
            .collect();
        orbit.sort();
        orbit.dedup();
        if orbit.len() != 4 || left.contains(&i) || right.contains(&i) {
            return fail(format!("λ(C4) element {i}: orbit {}", orbit.len()));
        }
    }
    pass("cancelable = principal; λ(C4) non-principal orbits have 4 elements")
}

fn centers() -> Outcome {
    for (spec, expected) in [("C2", false), ("C3", true), ("C4", true), ("C2xC2", true), ("C5", true)] {
        let found = search_central_nonprincipal(&g(spec)).unwrap();
        if found.is_some() != expected {
            return fail(format!("{spec}: found = {found:?}"));
        }
        if let Some((i, _)) = found {
            let t = lambda(spec);
            if (0..t.order()).any(|x| t.op(i, x) != t.op(x, i)) {
                return fail(format!("{spec}: element {i} is not central"));
            }
        }
    }
    pass("found for C3, C4, C2×C2, C5; none for C2")
}

fn involution() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for f in enumerate_inclusion_hyperspaces(n).unwrap() {
            if f.transversal().unwrap().transversal().unwrap() != f {
                return fail(format!("{f:?}"));
            }
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 5..=7 {
        for _ in 0..10_000 {
            let f = suite::random_family(&mut rng, n);
            let t = f.transversal().unwrap();
            if t.transversal().unwrap() != f || oracle::family_mask(&t) != oracle::transversal_by_scan(&f) {
                return fail(format!("{f:?}"));
            }
        }
    }
    pass(format!("{count} hyperspaces exhaustively, 3×10^4 random"))
}

fn union_form() -> Outcome {
    for (spec, pairs) in [("C3", 16), ("C4", 144)] {
        let grp = g(spec);
        let all = enumerate_mls(grp.order()).unwrap();
        let mut k = 0;
        for a in &all {
            for b in &all {
                if product_via_unions(a, b, &grp).unwrap() != product(a, b, &grp).unwrap() {
                    return fail(format!("{spec}: {a} * {b}"));
                }
                k += 1;
            }
        }
        if k != pairs {
            return fail(format!("{spec}: {k} pairs, expected {pairs}"));
        }
    }
    let c5 = g("C5");
    let all = enumerate_mls(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let a = all.choose(&mut rng).unwrap();
        let b = all.choose(&mut rng).unwrap();
        if product_via_unions(a, b, &c5).unwrap() != product(a, b, &c5).unwrap() {
            return fail(format!("C5: {a} * {b}"));
        }
    }
    pass("16 + 144 pairs exhaustively, 1000 random pairs on C5")
}

fn associativity() -> Outcome {
    let t5 = lambda("C5");
    if let Some(w) = associativity_witness(&t5) {
        return fail(format!("λ(C5) at {w:?}"));
    }
    let t6 = LambdaTable::build(&g("C6"), SEED).unwrap();
    if let Some(w) = sampled_associativity_witness(&t6, 1_000_000, SEED) {
        return fail(format!("λ(C6) at {w:?}"));
    }
    let s3 = LambdaTable::build(&g("S3"), SEED).unwrap();
    if let Some(w) = sampled_associativity_witness(&s3, 1_000_000, SEED) {
        return fail(format!("λ(S3) at {w:?}"));
    }
    pass(format!("81^3 triples on λ(C5); 10^6 sampled on λ(C6) and λ(S3) (|λ| = {}), seed {SEED:#x}", t6.order()))
}

fn lemma41() -> Outcome {
    let (c12, cert) = suite::c12_certificate();
    match check_lemma41(&cert, &c12).unwrap() {
        Lemma41Verdict::NotCentral { a_times_tee, tee_times_a, .. } => {
            let tee = superext_core::checkers::tee_system(cert.t, 12).unwrap();
            // independent evaluation of both products from the definition
            let left = oracle_product(&cert.a, &tee, &c12);
            let right = oracle_product(&tee, &cert.a, &c12);
            if left == right || left != *a_times_tee.family() || right != *tee_times_a.family() {
                return fail("C12 products do not match the literal definition");
            }
        }
        other => return fail(format!("C12 fixture: {other:?}")),
    }
    let c5 = g("C5");
    for a in enumerate_mls(5).unwrap() {
        for s in Subset::all(5) {
            for b in Subset::all(5).filter(|&b| a.member(b)) {
                for t in Subset::all(5).filter(|t| t.len() == 3) {
                    let cert = CertificateL41 { a: a.clone(), s, t, b };
                    match check_lemma41(&cert, &c5).unwrap().failed_condition() {
                        Some(2) | Some(3) => {}
                        other => return fail(format!("C5 {cert:?}: {other:?}")),
                    }
                    if superext_core::checkers::restriction_failure(&a, s).is_none()
                        && check_lemma41(&cert, &c5).unwrap().failed_condition() != Some(3)
                    {
                        return fail("C5 certificate passing (2) did not fail (3)");
                    }
                }
            }
        }
    }
    pass("C12 fixture valid with A∘T ≠ T∘A; every C5 3-set fails condition (3)")
}

fn oracle_product(a: &SetFamily, b: &SetFamily, grp: &FiniteSemigroup) -> SetFamily {
    let n = grp.order();
    let members = Subset::all(n).filter(|&c| {
        let d: Subset = (0..n)
            .filter(|&x| b.member((0..n).filter(|&z| c.contains(grp.op(x, z))).collect()))
            .collect();
        a.member(d)
    });
    SetFamily::from_sets(n, members).unwrap()
}

fn prop45() -> Outcome {
    let mut pairs = 0;
    for spec in ["C1", "C2", "C3", "C4", "C2xC2", "C5"] {
        let grp = g(spec);
        let all = Subset::full(grp.order());
        let s = check_prop45_all(&grp, all, all).unwrap();
        if !s.failures.is_empty() {
            return fail(format!("{spec}: {:?}", s.failures));
        }
        pairs += s.pairs_checked;
    }
    pass(format!("{pairs} (L, u) pairs commute"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 11] = [
        ("1 mls-counts", mls_counts, 61),
        ("2 lambda-c4-iso", lambda_c4_iso, 1),
        ("3 commutativity-boundary", commutativity_boundary, 5),
        ("4 ideal", ideal, 5),
        ("5 cancelability", cancelability, 5),
        ("6 centers", centers, 10),
        ("7 involution", involution, 30),
        ("8 eq1-eq2", union_form, 30),
        ("9 associativity", associativity, 120),
        ("10 lemma41", lemma41, 10),
        ("11 prop45", prop45, 10),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(budget);
        let ok = outcome.ok && in_time;
        println!(
            "CRITERION {name}: {} ({}; {took:.2?} of {budget}s)",
            if ok { "PASS" } else { "FAIL" },
            outcome.details
        );
        if !ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
