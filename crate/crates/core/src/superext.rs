//! The extended product on maximal linked systems and the full composition
//! table of the superextension of a small group.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{CayleyTable, FiniteSemigroup, GroupJson};
use crate::error::{Error, Result};
use crate::hyperspace::{enumerate_mls, minimal_antichain, MaximalLinkedSystem, SetFamily};
use crate::subset::{Subset, MAX_LATTICE_GROUND};

/// Largest ground set for [`product_via_unions`].
pub const MAX_UNION_FORM: usize = 6;
/// Largest group order accepted by [`lambda_table`].
pub const MAX_LAMBDA_GROUP: usize = 6;
/// Tables up to this many elements get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 81;
/// Number of sampled triples for larger tables.
pub const SAMPLED_TRIPLES: usize = 1_000_000;
/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_1a4b_da00_0001;

fn check_same_ground(a: &SetFamily, b: &SetFamily, g: &FiniteSemigroup) -> Result<usize> {
    let n = g.order();
    for f in [a, b] {
        if f.ground_size() != n {
            return Err(Error::GroundMismatch {
                expected: n,
                found: f.ground_size(),
            });
        }
    }
    if n > MAX_LATTICE_GROUND {
        return Err(Error::SizeGuard {
            what: "ground set for products",
            value: n,
            max: MAX_LATTICE_GROUND,
        });
    }
    Ok(n)
}

/// `A * B = {C : {x : x^{-1}C in B} in A}`, evaluated on every subset and
/// canonicalized.
pub fn product(
    a: &MaximalLinkedSystem,
    b: &MaximalLinkedSystem,
    g: &FiniteSemigroup,
) -> Result<MaximalLinkedSystem> {
    let n = check_same_ground(a, b, g)?;
    let in_a = a.membership()?;
    let in_b = b.membership()?;
    let family = minimal_antichain(
        |c| {
            let d: Subset = (0..n)
                .filter(|&x| in_b.get(g.preimage_unchecked(x, c)))
                .collect();
            in_a.get(d)
        },
        n,
    )?;
    Ok(MaximalLinkedSystem::new_unchecked(family))
}

/// The same product through unions of translates:
/// `{ U_{x in U} x*V_x : U in A, V_x in B }`, upward closed.
///
/// Only minimal `U` and minimal `V_x` are needed, since any other choice
/// yields a superset of one of these unions.
pub fn product_via_unions(
    a: &MaximalLinkedSystem,
    b: &MaximalLinkedSystem,
    g: &FiniteSemigroup,
) -> Result<MaximalLinkedSystem> {
    let n = check_same_ground(a, b, g)?;
    if n > MAX_UNION_FORM {
        return Err(Error::SizeGuard {
            what: "ground set for the union form",
            value: n,
            max: MAX_UNION_FORM,
        });
    }
    // translates[x][j] = x * V_j
    let translates: Vec<Vec<Subset>> = (0..n)
        .map(|x| {
            b.min_sets()
                .iter()
                .map(|&v| v.iter().map(|y| g.op(x, y)).collect())
                .collect()
        })
        .collect();
    let mut found: Vec<Subset> = Vec::new();
    for &u in a.min_sets() {
        let points: Vec<usize> = u.iter().collect();
        unions_of_choices(&points, &translates, Subset::EMPTY, &mut found);
    }
    MaximalLinkedSystem::new(SetFamily::from_sets(n, found)?)
}

fn unions_of_choices(
    points: &[usize],
    translates: &[Vec<Subset>],
    acc: Subset,
    found: &mut Vec<Subset>,
) {
    // anything built from here contains acc, so a known subset of acc makes
    // the whole branch redundant
    if found.iter().any(|f| f.is_subset_of(acc)) {
        return;
    }
    match points.split_first() {
        None => {
            found.retain(|f| !acc.is_subset_of(*f));
            found.push(acc);
        }
        Some((&x, rest)) => {
            for &t in &translates[x] {
                unions_of_choices(rest, translates, acc.union(t), found);
            }
        }
    }
}

/// `x L`, the product of the principal ultrafilter at `x` with `L`.
pub fn translate_mls(
    x: usize,
    l: &MaximalLinkedSystem,
    g: &FiniteSemigroup,
) -> Result<MaximalLinkedSystem> {
    let p = MaximalLinkedSystem::principal(x, g.order())?;
    product(&p, l, g)
}

/// `{x*A : A in L}` computed directly on the minimal sets. Agrees with
/// [`translate_mls`] for groups, where left translation is a lattice
/// automorphism.
pub fn translate_min_sets(
    x: usize,
    l: &MaximalLinkedSystem,
    g: &FiniteSemigroup,
) -> Result<MaximalLinkedSystem> {
    if !g.is_group() {
        return Err(Error::NotAGroup("translating minimal sets"));
    }
    if l.ground_size() != g.order() {
        return Err(Error::GroundMismatch {
            expected: g.order(),
            found: l.ground_size(),
        });
    }
    let sets = l
        .min_sets()
        .iter()
        .map(|&a| g.translate(x, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(MaximalLinkedSystem::new_unchecked(SetFamily::from_sets(
        g.order(),
        sets,
    )?))
}

/// How the associativity of a built table was confirmed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum AssociativityCheck {
    Exhaustive { triples: u64 },
    Sampled { triples: u64, seed: u64 },
}

/// The superextension of a group with its composition table.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    group: FiniteSemigroup,
    elements: Vec<MaximalLinkedSystem>,
    table: Vec<u32>,
    principal_index: Vec<usize>,
    index: HashMap<SetFamily, usize>,
    associativity: AssociativityCheck,
}

impl CayleyTable for LambdaTable {
    fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }
}

/// Builds `lambda(G)` with the default sampling seed.
pub fn lambda_table(g: &FiniteSemigroup) -> Result<LambdaTable> {
    LambdaTable::build(g, DEFAULT_SEED)
}

/// Membership of every subset of an `n <= 6` ground set, one bit per subset.
fn small_mask(f: &SetFamily) -> u64 {
    let n = f.ground_size();
    Subset::all(n)
        .filter(|&s| f.member(s))
        .fold(0u64, |m, s| m | 1 << s.bits())
}

impl LambdaTable {
    pub fn build(g: &FiniteSemigroup, seed: u64) -> Result<Self> {
        if !g.is_group() {
            return Err(Error::NotAGroup("superextension tables"));
        }
        let n = g.order();
        if n > MAX_LAMBDA_GROUP {
            return Err(Error::SizeGuard {
                what: "group order for lambda tables",
                value: n,
                max: MAX_LAMBDA_GROUP,
            });
        }
        let elements = enumerate_mls(n)?;
        let m = elements.len();
        let masks: Vec<u64> = elements.par_iter().map(|e| small_mask(e)).collect();
        let by_mask: HashMap<u64, u32> = masks
            .iter()
            .enumerate()
            .map(|(i, &mk)| (mk, i as u32))
            .collect();
        let size = 1usize << n;
        // pre[x * size + c] = x^{-1}C
        let pre: Vec<u32> = (0..n)
            .flat_map(|x| {
                (0..size as u32).map(move |c| g.preimage_unchecked(x, Subset::from_bits(c)).bits())
            })
            .collect();

        // For a right factor B, points[c] = {x : x^{-1}C in B}; then
        // C is in A*B iff points[c] is in A.
        let columns: Vec<Vec<u32>> = masks
            .par_iter()
            .map(|&mb| {
                let points: Vec<u32> = (0..size)
                    .map(|c| {
                        (0..n).fold(0u32, |d, x| d | ((mb >> pre[x * size + c] & 1) as u32) << x)
                    })
                    .collect();
                masks
                    .iter()
                    .map(|&ma| {
                        let prod = points
                            .iter()
                            .enumerate()
                            .fold(0u64, |acc, (c, &d)| acc | (ma >> d & 1) << c);
                        *by_mask
                            .get(&prod)
                            .expect("product of maximal linked systems is maximal linked")
                    })
                    .collect()
            })
            .collect();
        let mut table = vec![0u32; m * m];
        for (b, col) in columns.iter().enumerate() {
            for (a, &v) in col.iter().enumerate() {
                table[a * m + b] = v;
            }
        }

        let index: HashMap<SetFamily, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.family().clone(), i))
            .collect();
        let principal_index = (0..n)
            .map(|x| Ok(index[MaximalLinkedSystem::principal(x, n)?.family()]))
            .collect::<Result<Vec<_>>>()?;

        let mut lt = LambdaTable {
            group: g.clone(),
            elements,
            table,
            principal_index,
            index,
            associativity: AssociativityCheck::Exhaustive { triples: 0 },
        };
        lt.associativity = lt.check_associativity(seed)?;
        Ok(lt)
    }

    fn check_associativity(&self, seed: u64) -> Result<AssociativityCheck> {
        let m = self.order();
        if m <= EXHAUSTIVE_ASSOC_LIMIT {
            if let Some((a, b, c)) = crate::algebra::associativity_witness(self) {
                return Err(Error::NotAssociative { a, b, c });
            }
            return Ok(AssociativityCheck::Exhaustive {
                triples: (m * m * m) as u64,
            });
        }
        let bad = sampled_associativity_witness(self, SAMPLED_TRIPLES, seed);
        if let Some((a, b, c)) = bad {
            return Err(Error::NotAssociative { a, b, c });
        }
        Ok(AssociativityCheck::Sampled {
            triples: SAMPLED_TRIPLES as u64,
            seed,
        })
    }

    pub fn group(&self) -> &FiniteSemigroup {
        &self.group
    }

    pub fn elements(&self) -> &[MaximalLinkedSystem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &MaximalLinkedSystem {
        &self.elements[i]
    }

    pub fn index_of(&self, f: &SetFamily) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// `principal_index()[x]` is the index of `<{x}>`.
    pub fn principal_index(&self) -> &[usize] {
        &self.principal_index
    }

    pub fn is_principal(&self, i: usize) -> bool {
        self.elements[i].principal_point().is_some()
    }

    pub fn non_principal_indices(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| !self.is_principal(i)).collect()
    }

    pub fn associativity(&self) -> AssociativityCheck {
        self.associativity
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let m = self.order();
        self.table
            .chunks(m)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn to_json(&self) -> LambdaTableJson {
        LambdaTableJson {
            group: self.group.to_json(),
            elements: self.elements.iter().map(|e| e.family().clone()).collect(),
            table: self.rows(),
        }
    }

    /// Rebuilds a table from its JSON form, checking the element list and
    /// every entry against a fresh build.
    pub fn from_json(json: LambdaTableJson, seed: u64) -> Result<Self> {
        let group = FiniteSemigroup::from_json(json.group)?;
        let built = LambdaTable::build(&group, seed)?;
        let elements: Vec<&SetFamily> = built.elements.iter().map(|e| e.family()).collect();
        if json.elements.iter().collect::<Vec<_>>() != elements {
            return Err(Error::Validation(
                "element list is not the canonical maximal linked systems".into(),
            ));
        }
        if json.table != built.rows() {
            return Err(Error::Validation("composition table does not match".into()));
        }
        Ok(built)
    }

    /// A generating set of the underlying group, chosen greedily.
    pub fn group_generators(&self) -> Vec<usize> {
        let g = &self.group;
        let n = g.order();
        let e = g.identity().expect("lambda tables are built over groups");
        let mut gens = Vec::new();
        let mut reached = vec![false; n];
        reached[e] = true;
        for x in 0..n {
            if reached[x] {
                continue;
            }
            gens.push(x);
            let mut stack: Vec<usize> = (0..n).filter(|&y| reached[y]).collect();
            while let Some(y) = stack.pop() {
                for &s in &gens {
                    let z = g.op(y, s);
                    if !reached[z] {
                        reached[z] = true;
                        stack.push(z);
                    }
                }
            }
        }
        gens
    }

    /// Graphviz rendering of left translation by each group generator.
    pub fn to_dot(&self) -> String {
        const COLORS: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        let mut out = String::from("digraph lambda {\n  node [shape=box, fontname=monospace];\n");
        for (i, e) in self.elements.iter().enumerate() {
            let style = if self.is_principal(i) { ", style=bold" } else { "" };
            let _ = writeln!(out, "  n{i} [label=\"{i}: {e}\"{style}];");
        }
        for (k, &x) in self.group_generators().iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let p = self.principal_index[x];
            let label = &self.group.labels()[x];
            for i in 0..self.order() {
                let _ = writeln!(
                    out,
                    "  n{i} -> n{} [color={color}, label=\"{label}\"];",
                    self.op(p, i)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Checks `samples` random triples drawn from a seeded stream.
pub fn sampled_associativity_witness<T: CayleyTable + Sync>(
    t: &T,
    samples: usize,
    seed: u64,
) -> Option<(usize, usize, usize)> {
    let m = t.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(usize, usize, usize)> = (0..samples)
        .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m)))
        .collect();
    triples
        .into_par_iter()
        .find_first(|&(a, b, c)| t.op(t.op(a, b), c) != t.op(a, t.op(b, c)))
}

/// On-disk form of a [`LambdaTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaTableJson {
    pub group: GroupJson,
    pub elements: Vec<SetFamily>,
    pub table: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_spec;

    fn c(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::cyclic(n).unwrap()
    }

    fn mls(n: usize, sets: &[&[usize]]) -> MaximalLinkedSystem {
        MaximalLinkedSystem::new(
            SetFamily::from_sets(n, sets.iter().map(|s| s.iter().copied().collect())).unwrap(),
        )
        .unwrap()
    }

    fn p(x: usize, n: usize) -> MaximalLinkedSystem {
        MaximalLinkedSystem::principal(x, n).unwrap()
    }

    /// The defining formula evaluated literally on every subset.
    fn oracle_product(
        a: &MaximalLinkedSystem,
        b: &MaximalLinkedSystem,
        g: &FiniteSemigroup,
    ) -> SetFamily {
        let n = g.order();
        let members = Subset::all(n).filter(|&c| {
            let d: Subset = (0..n)
                .filter(|&x| b.member((0..n).filter(|&z| c.contains(g.op(x, z))).collect()))
                .collect();
            a.member(d)
        });
        SetFamily::from_sets(n, members).unwrap()
    }

    #[test]
    fn c3_products() {
        let g = c(3);
        let delta = mls(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert_eq!(product(&delta, &delta, &g).unwrap(), delta);
        assert_eq!(product(&p(1, 3), &delta, &g).unwrap(), delta);
        assert_eq!(product(&delta, &p(1, 3), &g).unwrap(), delta);
        assert_eq!(oracle_product(&delta, &delta, &g), *delta.family());
    }

    #[test]
    fn principal_products_follow_the_group() {
        for g in [c(4), c(5), FiniteSemigroup::symmetric3()] {
            let n = g.order();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(product(&p(x, n), &p(y, n), &g).unwrap(), p(g.op(x, y), n));
                }
            }
        }
    }

    #[test]
    fn product_matches_literal_formula() {
        for g in [c(4), parse_spec("C2xC2").unwrap(), c(5)] {
            let all = enumerate_mls(g.order()).unwrap();
            for a in &all {
                for b in &all {
                    assert_eq!(*product(a, b, &g).unwrap().family(), oracle_product(a, b, &g));
                }
            }
        }
    }

    #[test]
    fn union_form_agrees_on_c3_c4() {
        for g in [c(3), c(4)] {
            let all = enumerate_mls(g.order()).unwrap();
            for a in &all {
                for b in &all {
                    assert_eq!(product_via_unions(a, b, &g).unwrap(), product(a, b, &g).unwrap());
                }
            }
        }
        let big = c(7);
        let q = p(0, 7);
        assert!(matches!(
            product_via_unions(&q, &q, &big),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn ground_mismatch_is_rejected() {
        assert!(matches!(
            product(&p(0, 3), &p(0, 4), &c(4)),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn translation_routes_agree_on_c4() {
        let g = c(4);
        let all = enumerate_mls(4).unwrap();
        for l in &all {
            assert_eq!(translate_mls(0, l, &g).unwrap(), *l);
            for x in 0..4 {
                assert_eq!(translate_mls(x, l, &g).unwrap(), translate_min_sets(x, l, &g).unwrap());
            }
        }
    }

    #[test]
    fn lambda_tables_for_small_groups() {
        let t3 = lambda_table(&c(3)).unwrap();
        assert_eq!(t3.order(), 4);
        assert_eq!(t3.principal_index(), &[0, 1, 2]);
        let t4 = lambda_table(&c(4)).unwrap();
        assert_eq!(t4.order(), 12);
        assert!(matches!(
            t4.associativity(),
            AssociativityCheck::Exhaustive { triples: 1728 }
        ));
        assert!(matches!(
            lambda_table(&parse_spec("C2e").unwrap()),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            lambda_table(&c(7)),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn fast_table_matches_generic_product() {
        for g in [c(4), parse_spec("C2xC2").unwrap(), c(5)] {
            let t = lambda_table(&g).unwrap();
            for a in 0..t.order() {
                for b in 0..t.order() {
                    let direct = product(t.element(a), t.element(b), &g).unwrap();
                    assert_eq!(t.element(t.op(a, b)), &direct);
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_dot() {
        let t = lambda_table(&c(3)).unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        let back = LambdaTable::from_json(serde_json::from_str(&text).unwrap(), DEFAULT_SEED).unwrap();
        assert_eq!(back.rows(), t.rows());
        let mut tampered = t.to_json();
        tampered.table[3][3] = 0;
        assert!(LambdaTable::from_json(tampered, DEFAULT_SEED).is_err());

        let dot = t.to_dot();
        assert!(dot.starts_with("digraph lambda {"));
        // C3 is generated by one element: one edge per table element
        assert_eq!(dot.matches("->").count(), 4);
        assert_eq!(lambda_table(&parse_spec("C2xC2").unwrap()).unwrap().group_generators().len(), 2);
    }
}
