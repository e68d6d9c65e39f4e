//! Brute-force reference implementations.
//!
//! These scan whole subset lattices and families as raw bitmaps. They share
//! no code with the search, transversal or product routines they check, and
//! are only practical for tiny ground sets.

use crate::algebra::{CayleyTable, FiniteSemigroup};
use crate::hyperspace::SetFamily;

/// Bit `s` set iff subset `s` is a member; ground sets up to 7 points.
pub fn family_mask(f: &SetFamily) -> u128 {
    let n = f.ground_size();
    assert!(n <= 7);
    (0..1u32 << n)
        .filter(|&s| f.min_sets().iter().any(|m| m.bits() & !s == 0))
        .fold(0u128, |acc, s| acc | 1 << s)
}

fn member(mask: u128, s: u32) -> bool {
    mask >> s & 1 == 1
}

fn is_upward_closed(n: usize, mask: u128) -> bool {
    (0..1u32 << n)
        .filter(|&s| member(mask, s))
        .all(|s| (0..n).all(|i| member(mask, s | 1 << i)))
}

fn members(n: usize, mask: u128) -> impl Iterator<Item = u32> {
    (0..1u32 << n).filter(move |&s| member(mask, s))
}

/// Maximal linked systems found by testing every family of subsets for
/// monotonicity, linkedness and maximality. `n <= 4`.
pub fn mls_by_all_families(n: usize) -> Vec<u128> {
    assert!((1..=4).contains(&n));
    let subsets = 1u32 << n;
    let full = subsets - 1;
    let mut out = Vec::new();
    for f in 0..1u128 << subsets {
        if member(f, 0) || !is_upward_closed(n, f) || f == 0 {
            continue;
        }
        let linked = members(n, f).all(|a| members(n, f).all(|b| a & b != 0));
        if !linked {
            continue;
        }
        // adding any outside set C breaks linkedness iff C misses a member
        let maximal = (0..=full)
            .filter(|&c| !member(f, c))
            .all(|c| members(n, f).any(|a| a & c == 0));
        if maximal {
            out.push(f);
        }
    }
    out.sort_unstable();
    out
}

/// Monotone families with `A ∈ F  <=>  complement(A) ∉ F`. `n <= 4`.
pub fn mls_by_self_duality(n: usize) -> Vec<u128> {
    assert!((1..=4).contains(&n));
    let subsets = 1u32 << n;
    let full = subsets - 1;
    let mut out: Vec<u128> = (0..1u128 << subsets)
        .filter(|&f| is_upward_closed(n, f))
        .filter(|&f| (0..=full).all(|a| member(f, a) != member(f, full ^ a)))
        .collect();
    out.sort_unstable();
    out
}

/// Pairwise-intersecting antichains whose upward closure equals the family
/// of sets meeting every member. `n <= 5`.
pub fn mls_by_linked_antichains(n: usize) -> Vec<u128> {
    assert!((1..=5).contains(&n));
    let sets: Vec<u32> = (1..1u32 << n).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    linked_antichains(n, &sets, 0, &mut chosen, &mut out);
    out.sort_unstable();
    out
}

fn linked_antichains(n: usize, sets: &[u32], start: usize, chosen: &mut Vec<u32>, out: &mut Vec<u128>) {
    if !chosen.is_empty() {
        let closure = (0..1u32 << n)
            .filter(|&s| chosen.iter().any(|&m| m & !s == 0))
            .fold(0u128, |acc, s| acc | 1 << s);
        let blockers = (0..1u32 << n)
            .filter(|&s| chosen.iter().all(|&m| m & s != 0))
            .fold(0u128, |acc, s| acc | 1 << s);
        if closure == blockers {
            out.push(closure);
        }
    }
    for i in start..sets.len() {
        let s = sets[i];
        let comparable = chosen.iter().any(|&c| c & !s == 0 || s & !c == 0);
        let disjoint = chosen.iter().any(|&c| c & s == 0);
        if comparable || disjoint {
            continue;
        }
        chosen.push(s);
        linked_antichains(n, sets, i + 1, chosen, out);
        chosen.pop();
    }
}

/// Transversal as a membership bitmap, by testing every subset.
pub fn transversal_by_scan(f: &SetFamily) -> u128 {
    let n = f.ground_size();
    let fm = family_mask(f);
    (0..1u32 << n)
        .filter(|&a| members(n, fm).all(|m| a & m != 0))
        .fold(0u128, |acc, a| acc | 1 << a)
}

/// The product evaluated straight from its definition
/// `{C : {x : {z : x*z ∈ C} ∈ B} ∈ A}` on raw bitmaps. `n <= 7`.
pub fn product_by_definition(a: &SetFamily, b: &SetFamily, g: &FiniteSemigroup) -> u128 {
    let n = g.order();
    let (am, bm) = (family_mask(a), family_mask(b));
    (0..1u32 << n)
        .filter(|&c| {
            let d = (0..n)
                .filter(|&x| {
                    let pre = (0..n)
                        .filter(|&z| c >> g.op(x, z) & 1 == 1)
                        .fold(0u32, |acc, z| acc | 1 << z);
                    member(bm, pre)
                })
                .fold(0u32, |acc, x| acc | 1 << x);
            member(am, d)
        })
        .fold(0u128, |acc, c| acc | 1 << c)
}
