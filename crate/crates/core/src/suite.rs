//! Named verification suites. Each claim is recomputed from scratch and
//! reported as `CLAIM <name>: PASS|FAIL (<details>)`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{associativity_witness, parse_spec, CayleyTable, FiniteSemigroup};
use crate::analysis::{cancelable, check_two_sided_ideal, is_commutative, is_isomorphism, isomorphic};
use crate::checkers::{check_lemma41, check_prop45_all, search_central_nonprincipal, tee_system, CertificateL41};
use crate::error::{Error, Result};
use crate::hyperspace::{enumerate_inclusion_hyperspaces, enumerate_mls, SetFamily};
use crate::oracle;
use crate::subset::Subset;
use crate::superext::{
    lambda_table, product, product_via_unions, sampled_associativity_witness, translate_mls,
    LambdaTable,
};

pub const SUITES: [&str; 12] = [
    "counts",
    "iso",
    "commute",
    "ideal",
    "cancel",
    "center",
    "involution",
    "eq1eq2",
    "assoc",
    "lemma41",
    "prop45",
    "all",
];

/// Known numbers of maximal linked systems on 1..=6 points.
pub const MLS_COUNTS: [usize; 6] = [1, 2, 4, 12, 81, 2646];
pub const INVOLUTION_SAMPLES: usize = 10_000;
pub const UNION_FORM_SAMPLES: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl ClaimResult {
    fn new(name: impl Into<String>, passed: bool, details: impl Into<String>) -> Self {
        ClaimResult {
            name: name.into(),
            passed,
            details: details.into(),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, details)) => ClaimResult::new(name, passed, details),
            Err(e) => ClaimResult::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "CLAIM {}: {status} ({})", self.name, self.details)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub claims: Vec<ClaimResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SUITE {} (seed {:#x})", self.suite, self.seed)?;
        for c in &self.claims {
            writeln!(f, "{c}")?;
        }
        let failed = self.claims.iter().filter(|c| !c.passed).count();
        write!(
            f,
            "SUMMARY: {} claims, {} passed, {failed} failed",
            self.claims.len(),
            self.claims.len() - failed
        )
    }
}

/// Runs one named suite, or every suite for `"all"`.
pub fn verify_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let names: Vec<&str> = match name {
        "all" => SUITES[..SUITES.len() - 1].to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => {
            return Err(Error::UnknownSuite(other.to_owned(), SUITES.join(", ")));
        }
    };
    let claims: Vec<ClaimResult> = names
        .par_iter()
        .map(|s| run_one(s, seed))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SuiteReport {
        suite: name.to_owned(),
        seed,
        claims,
    })
}

fn run_one(name: &str, seed: u64) -> Vec<ClaimResult> {
    match name {
        "counts" => counts(),
        "iso" => vec![iso()],
        "commute" => commute(),
        "ideal" => ideal(),
        "cancel" => cancel(),
        "center" => center(),
        "involution" => involution(seed),
        "eq1eq2" => eq1eq2(seed),
        "assoc" => assoc(seed),
        "lemma41" => lemma41(),
        "prop45" => prop45(),
        _ => unreachable!("suite names are validated"),
    }
}

fn group(spec: &str) -> FiniteSemigroup {
    parse_spec(spec).expect("built-in spec")
}

/// Groups of order 2..=5 up to isomorphism.
const SMALL_GROUPS: [&str; 5] = ["C2", "C3", "C4", "C2xC2", "C5"];

pub fn counts() -> Vec<ClaimResult> {
    (1..=6)
        .map(|n| {
            ClaimResult::from_result(format!("counts.n{n}"), (|| {
                let found = enumerate_mls(n)?;
                let expected = MLS_COUNTS[n - 1];
                let mut details = format!("{} systems, expected {expected}", found.len());
                let mut ok = found.len() == expected;
                if n <= 5 {
                    let mut masks: Vec<u128> =
                        found.iter().map(|m| oracle::family_mask(m)).collect();
                    masks.sort_unstable();
                    let mut oracles = vec![("linked-antichain", oracle::mls_by_linked_antichains(n))];
                    if n <= 4 {
                        oracles.push(("all-families", oracle::mls_by_all_families(n)));
                        oracles.push(("self-dual", oracle::mls_by_self_duality(n)));
                    }
                    for (label, o) in oracles {
                        let agree = o == masks;
                        ok &= agree;
                        details.push_str(&format!(
                            "; {label} oracle {}",
                            if agree { "agrees" } else { "DISAGREES" }
                        ));
                    }
                }
                Ok((ok, details))
            })())
        })
        .collect()
}

pub fn iso() -> ClaimResult {
    ClaimResult::from_result("iso.lambda_C4_vs_C4xC2e", (|| {
        let t = lambda_table(&group("C4"))?;
        let m = group("C4xC2e");
        Ok(match isomorphic(&t, &m)? {
            Some(phi) if is_isomorphism(&t, &m, &phi) => (true, format!("bijection {phi:?}")),
            Some(_) => (false, "search returned a non-homomorphism".into()),
            None => (false, "no isomorphism".into()),
        })
    })())
}

pub fn commute() -> Vec<ClaimResult> {
    [("C1", true), ("C2", true), ("C3", true), ("C4", true), ("C2xC2", true), ("C5", false)]
        .iter()
        .map(|&(spec, expected)| {
            ClaimResult::from_result(format!("commute.{spec}"), (|| {
                let t = lambda_table(&group(spec))?;
                let c = is_commutative(&t);
                Ok((
                    c == expected,
                    format!("|λ| = {}, commutative = {c}, expected {expected}", t.order()),
                ))
            })())
        })
        .collect()
}

pub fn ideal() -> Vec<ClaimResult> {
    SMALL_GROUPS
        .iter()
        .map(|spec| {
            ClaimResult::from_result(format!("ideal.{spec}"), (|| {
                let t = lambda_table(&group(spec))?;
                let ideal = t.non_principal_indices();
                Ok(match check_two_sided_ideal(&t, &ideal) {
                    Ok(()) => (true, format!("{} non-principal elements closed", ideal.len())),
                    Err((a, b)) => (false, format!("{a}*{b} = {} is principal", t.op(a, b))),
                })
            })())
        })
        .collect()
}

pub fn cancel() -> Vec<ClaimResult> {
    let mut claims: Vec<ClaimResult> = SMALL_GROUPS
        .iter()
        .map(|spec| {
            ClaimResult::from_result(format!("cancel.{spec}"), (|| {
                let t = lambda_table(&group(spec))?;
                let mut principal = t.principal_index().to_vec();
                principal.sort_unstable();
                let (left, right) = cancelable(&t);
                Ok((
                    left == principal && right == principal,
                    format!("left {left:?}, right {right:?}, principal {principal:?}"),
                ))
            })())
        })
        .collect();
    claims.push(ClaimResult::from_result("cancel.C4_orbits", (|| {
        let g = group("C4");
        let t = lambda_table(&g)?;
        let (left, right) = cancelable(&t);
        let mut ok = true;
        for i in t.non_principal_indices() {
            let mut orbit: Vec<SetFamily> = (0..4)
                .map(|x| translate_mls(x, t.element(i), &g).map(|m| m.into_family()))
                .collect::<Result<_>>()?;
            orbit.sort();
            orbit.dedup();
            ok &= orbit.len() == 4 && !left.contains(&i) && !right.contains(&i);
        }
        Ok((ok, format!("{} non-principal elements: 4-element orbits, none cancelable", t.non_principal_indices().len())))
    })()));
    claims.push(ClaimResult::from_result("cancel.orbit_condition", (|| {
        let mut checked = 0;
        for spec in SMALL_GROUPS {
            let g = group(spec);
            let t = lambda_table(&g)?;
            let (_, right) = cancelable(&t);
            for &a in &right {
                for x in 0..g.order() {
                    for y in (0..g.order()).filter(|&y| y != x) {
                        if translate_mls(x, t.element(a), &g)? == translate_mls(y, t.element(a), &g)? {
                            return Ok((false, format!("{spec}: x{a} collides for {x},{y}")));
                        }
                        checked += 1;
                    }
                }
            }
        }
        Ok((true, format!("{checked} distinct-pair translates differ")))
    })()));
    claims
}

pub fn center() -> Vec<ClaimResult> {
    [("C2", false), ("C3", true), ("C4", true), ("C2xC2", true), ("C5", true)]
        .iter()
        .map(|&(spec, expected)| {
            ClaimResult::from_result(format!("center.{spec}"), (|| {
                let found = search_central_nonprincipal(&group(spec))?;
                let details = match &found {
                    Some((i, m)) => format!("central non-principal #{i} = {m}"),
                    None => "no central non-principal element".into(),
                };
                Ok((found.is_some() == expected, details))
            })())
        })
        .collect()
}

/// A random inclusion hyperspace: the upward closure of a few random
/// nonempty sets.
pub fn random_family(rng: &mut ChaCha8Rng, n: usize) -> SetFamily {
    let k = rng.gen_range(1..=2 * n);
    let sets = (0..k).map(|_| Subset::from_bits(rng.gen_range(1..1u32 << n)));
    SetFamily::from_sets(n, sets).expect("nonempty subsets of the ground set")
}

pub fn involution(seed: u64) -> Vec<ClaimResult> {
    let mut claims = vec![ClaimResult::from_result("involution.exhaustive_n1_4", (|| {
        let mut count = 0;
        for n in 1..=4 {
            for f in enumerate_inclusion_hyperspaces(n)? {
                let t = f.transversal()?;
                if oracle::family_mask(&t) != oracle::transversal_by_scan(&f) || t.transversal()? != f {
                    return Ok((false, format!("fails on {f:?}")));
                }
                count += 1;
            }
        }
        Ok((true, format!("{count} hyperspaces")))
    })())];
    for n in 5..=7 {
        claims.push(ClaimResult::from_result(format!("involution.random_n{n}"), (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            for _ in 0..INVOLUTION_SAMPLES {
                let f = random_family(&mut rng, n);
                let t = f.transversal()?;
                if t.transversal()? != f {
                    return Ok((false, format!("fails on {f:?}")));
                }
                if oracle::family_mask(&t) != oracle::transversal_by_scan(&f) {
                    return Ok((false, format!("transversal of {f:?} disagrees with scan")));
                }
            }
            Ok((true, format!("{INVOLUTION_SAMPLES} random families")))
        })()));
    }
    claims
}

pub fn eq1eq2(seed: u64) -> Vec<ClaimResult> {
    let mut claims: Vec<ClaimResult> = ["C1", "C2", "C3", "C4", "C2xC2"]
        .iter()
        .map(|spec| {
            ClaimResult::from_result(format!("eq1eq2.{spec}"), (|| {
                let g = group(spec);
                let all = enumerate_mls(g.order())?;
                let mut pairs = 0;
                for a in &all {
                    for b in &all {
                        if product_via_unions(a, b, &g)? != product(a, b, &g)? {
                            return Ok((false, format!("differ on {a} * {b}")));
                        }
                        pairs += 1;
                    }
                }
                Ok((true, format!("{pairs} pairs equal")))
            })())
        })
        .collect();
    claims.push(ClaimResult::from_result("eq1eq2.C5_random", (|| {
        let g = group("C5");
        let all = enumerate_mls(5)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..UNION_FORM_SAMPLES {
            let a = all.choose(&mut rng).unwrap();
            let b = all.choose(&mut rng).unwrap();
            let p = product(a, b, &g)?;
            if product_via_unions(a, b, &g)? != p
                || oracle::product_by_definition(a, b, &g) != oracle::family_mask(&p)
            {
                return Ok((false, format!("differ on {a} * {b}")));
            }
        }
        Ok((true, format!("{UNION_FORM_SAMPLES} random pairs equal")))
    })()));
    claims
}

pub fn assoc(seed: u64) -> Vec<ClaimResult> {
    vec![
        ClaimResult::from_result("assoc.C5_exhaustive", (|| {
            let t = lambda_table(&group("C5"))?;
            Ok(match associativity_witness(&t) {
                None => (true, format!("{} triples", t.order().pow(3))),
                Some(w) => (false, format!("fails at {w:?}")),
            })
        })()),
        ClaimResult::from_result("assoc.C6_sampled", (|| {
            let t = LambdaTable::build(&group("C6"), seed)?;
            let samples = crate::superext::SAMPLED_TRIPLES;
            Ok(match sampled_associativity_witness(&t, samples, seed) {
                None => (true, format!("|λ| = {}, {samples} triples, seed {seed:#x}", t.order())),
                Some(w) => (false, format!("fails at {w:?}")),
            })
        })()),
    ]
}

/// The fixture certificate on the 12-element cyclic group.
pub fn c12_certificate() -> (FiniteSemigroup, CertificateL41) {
    let s: Subset = [0, 4, 8].into_iter().collect();
    let cert = CertificateL41 {
        a: tee_system(s, 12).expect("3-point set"),
        s,
        t: [0, 1, 2].into_iter().collect(),
        b: [0, 4].into_iter().collect(),
    };
    (group("C12"), cert)
}

pub fn lemma41() -> Vec<ClaimResult> {
    vec![
        ClaimResult::from_result("lemma41.C12_fixture", (|| {
            let (g, cert) = c12_certificate();
            let verdict = check_lemma41(&cert, &g)?;
            Ok(match verdict {
                crate::checkers::Lemma41Verdict::NotCentral { a_times_tee, tee_times_a, swapped_separation } => {
                    // re-derive both products from the literal definition
                    let tee = tee_system(cert.t, 12)?;
                    let left = oracle_product_12(&cert.a, &tee, &g);
                    let right = oracle_product_12(&tee, &cert.a, &g);
                    let ok = left != right && left == *a_times_tee.family() && right == *tee_times_a.family();
                    (ok, format!("A∘T = {a_times_tee}, T∘A = {tee_times_a}; TT^-1 form passes: {swapped_separation}"))
                }
                other => (false, format!("{other:?}")),
            })
        })()),
        ClaimResult::from_result("lemma41.C5_all_T_fail_separation", (|| {
            let g = group("C5");
            let mut reached = 0usize;
            let mut total = 0usize;
            for a in enumerate_mls(5)? {
                let members: Vec<Subset> = Subset::all(5).filter(|&b| a.member(b)).collect();
                for s in Subset::all(5) {
                    for &b in &members {
                        for t in Subset::all(5).filter(|t| t.len() == 3) {
                            let cert = CertificateL41 { a: a.clone(), s, t, b };
                            let v = check_lemma41(&cert, &g)?;
                            total += 1;
                            match v.failed_condition() {
                                Some(3) => reached += 1,
                                Some(2) => {}
                                _ => return Ok((false, format!("{cert:?} gives {v:?}"))),
                            }
                        }
                    }
                }
            }
            Ok((reached > 0, format!("{total} certificates, {reached} pass (1),(2) and fail (3)")))
        })()),
    ]
}

/// Literal product on a 12-point ground set without membership maps.
fn oracle_product_12(a: &SetFamily, b: &SetFamily, g: &FiniteSemigroup) -> SetFamily {
    let n = g.order();
    let members = Subset::all(n).filter(|&c| {
        let d: Subset = (0..n)
            .filter(|&x| b.member((0..n).filter(|&z| c.contains(g.op(x, z))).collect()))
            .collect();
        a.member(d)
    });
    SetFamily::from_sets(n, members).expect("nonempty members")
}

pub fn prop45() -> Vec<ClaimResult> {
    ["C1", "C2", "C3", "C4", "C2xC2", "C5"]
        .iter()
        .map(|spec| {
            ClaimResult::from_result(format!("prop45.{spec}"), (|| {
                let g = group(spec);
                let all = Subset::full(g.order());
                let s = check_prop45_all(&g, all, all)?;
                Ok((
                    s.failures.is_empty(),
                    format!("{} pairs, {} failures", s.pairs_checked, s.failures.len()),
                ))
            })())
        })
        .collect()
}
