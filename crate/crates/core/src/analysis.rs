//! Structure of finite semigroups read off their composition tables.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::CayleyTable;
use crate::error::{Error, Result};

/// Largest order accepted by [`isomorphic`].
pub const MAX_ISO_ORDER: usize = 100;

pub fn idempotents<T: CayleyTable + ?Sized>(t: &T) -> Vec<usize> {
    (0..t.order()).filter(|&a| t.op(a, a) == a).collect()
}

/// `(left_zeros, right_zeros)`: `z*x = z` for all `x`, resp. `x*z = z`.
pub fn zeros<T: CayleyTable + ?Sized>(t: &T) -> (Vec<usize>, Vec<usize>) {
    let n = t.order();
    let left = (0..n).filter(|&z| (0..n).all(|x| t.op(z, x) == z)).collect();
    let right = (0..n).filter(|&z| (0..n).all(|x| t.op(x, z) == z)).collect();
    (left, right)
}

pub fn center_of_table<T: CayleyTable + ?Sized>(t: &T) -> Vec<usize> {
    let n = t.order();
    (0..n)
        .filter(|&a| (0..n).all(|x| t.op(a, x) == t.op(x, a)))
        .collect()
}

pub fn is_commutative<T: CayleyTable + ?Sized>(t: &T) -> bool {
    let n = t.order();
    (0..n).all(|a| (a + 1..n).all(|b| t.op(a, b) == t.op(b, a)))
}

fn injective(n: usize, f: impl Fn(usize) -> usize) -> bool {
    let mut seen = vec![false; n];
    (0..n).all(|x| !std::mem::replace(&mut seen[f(x)], true))
}

/// `(left_cancelable, right_cancelable)`: `x -> a*x` injective, resp.
/// `x -> x*a` injective.
pub fn cancelable<T: CayleyTable + ?Sized>(t: &T) -> (Vec<usize>, Vec<usize>) {
    let n = t.order();
    let left = (0..n).filter(|&a| injective(n, |x| t.op(a, x))).collect();
    let right = (0..n).filter(|&a| injective(n, |x| t.op(x, a))).collect();
    (left, right)
}

/// `Ok(())` when `T*I` and `I*T` lie in `I`, otherwise the first pair
/// `(left, right)` whose product escapes.
pub fn check_two_sided_ideal<T: CayleyTable + ?Sized>(
    t: &T,
    ideal: &[usize],
) -> std::result::Result<(), (usize, usize)> {
    let n = t.order();
    let mut inside = vec![false; n];
    for &i in ideal {
        inside[i] = true;
    }
    for x in 0..n {
        for &i in ideal {
            if !inside[t.op(x, i)] {
                return Err((x, i));
            }
            if !inside[t.op(i, x)] {
                return Err((i, x));
            }
        }
    }
    Ok(())
}

fn bitset(n: usize, items: impl Iterator<Item = usize>) -> Vec<u64> {
    let mut b = vec![0u64; n.div_ceil(64)];
    for i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Minimal left ideals, each sorted, listed by smallest member.
///
/// Every left ideal contains a principal one `S*a ∪ {a}`, so the minimal
/// left ideals are the inclusion-minimal principal ones.
pub fn minimal_left_ideals<T: CayleyTable + ?Sized>(t: &T) -> Vec<Vec<usize>> {
    let n = t.order();
    let mut principal: Vec<Vec<u64>> = (0..n)
        .map(|a| bitset(n, (0..n).map(|x| t.op(x, a)).chain([a])))
        .collect();
    principal.sort();
    principal.dedup();
    let minimal: Vec<&Vec<u64>> = principal
        .iter()
        .filter(|l| !principal.iter().any(|k| k != *l && bits_subset(k, l)))
        .collect();
    let mut out: Vec<Vec<usize>> = minimal
        .into_iter()
        .map(|l| (0..n).filter(|&i| l[i / 64] >> (i % 64) & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// `(index, period)` of the cyclic subsemigroup generated by `a`: the
/// powers `a, a^2, ...` run through `index` distinct values before entering
/// a cycle of length `period`.
pub fn order_profile<T: CayleyTable + ?Sized>(t: &T, a: usize) -> (usize, usize) {
    let mut first_seen: HashMap<usize, usize> = HashMap::new();
    let mut power = a;
    let mut k = 1;
    loop {
        if let Some(&j) = first_seen.get(&power) {
            return (j, k - j);
        }
        first_seen.insert(power, k);
        power = t.op(power, a);
        k += 1;
    }
}

/// Summary of the standard structural invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub order: usize,
    pub idempotents: Vec<usize>,
    pub left_zeros: Vec<usize>,
    pub right_zeros: Vec<usize>,
    pub center: Vec<usize>,
    pub left_cancelable: Vec<usize>,
    pub right_cancelable: Vec<usize>,
    pub is_commutative: bool,
    pub minimal_left_ideals: Vec<Vec<usize>>,
}

impl AnalysisReport {
    pub fn compute<T: CayleyTable + ?Sized>(t: &T) -> Self {
        let (left_zeros, right_zeros) = zeros(t);
        let (left_cancelable, right_cancelable) = cancelable(t);
        AnalysisReport {
            order: t.order(),
            idempotents: idempotents(t),
            left_zeros,
            right_zeros,
            center: center_of_table(t),
            left_cancelable,
            right_cancelable,
            is_commutative: is_commutative(t),
            minimal_left_ideals: minimal_left_ideals(t),
        }
    }
}

/// Per-element invariants preserved by every isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Signature {
    idempotent: bool,
    profile: (usize, usize),
    commuting: usize,
    left_image: usize,
    right_image: usize,
    square_roots: usize,
}

fn signatures<T: CayleyTable + ?Sized>(t: &T) -> Vec<Signature> {
    let n = t.order();
    let image = |f: &dyn Fn(usize) -> usize| {
        let mut seen = vec![false; n];
        (0..n).filter(|&x| !std::mem::replace(&mut seen[f(x)], true)).count()
    };
    let mut roots = vec![0usize; n];
    for x in 0..n {
        roots[t.op(x, x)] += 1;
    }
    (0..n)
        .map(|a| Signature {
            idempotent: t.op(a, a) == a,
            profile: order_profile(t, a),
            commuting: (0..n).filter(|&x| t.op(a, x) == t.op(x, a)).count(),
            left_image: image(&|x| t.op(a, x)),
            right_image: image(&|x| t.op(x, a)),
            square_roots: roots[a],
        })
        .collect()
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Joint refinement of both tables so that colors are comparable.
fn joint_colors<A, B>(a: &A, b: &B) -> (Vec<usize>, Vec<usize>)
where
    A: CayleyTable + ?Sized,
    B: CayleyTable + ?Sized,
{
    let mut sig_ids: HashMap<Signature, usize> = HashMap::new();
    let mut color_of = |s: Signature| {
        let len = sig_ids.len();
        *sig_ids.entry(s).or_insert(len)
    };
    let mut ca: Vec<usize> = signatures(a).into_iter().map(&mut color_of).collect();
    let mut cb: Vec<usize> = signatures(b).into_iter().map(&mut color_of).collect();
    // one shared palette keeps refined colors aligned between the tables
    let n = a.order();
    for _ in 0..n {
        let mut palette: HashMap<Vec<usize>, usize> = HashMap::new();
        let (before_a, before_b) = (distinct(&ca), distinct(&cb));
        let mut na = ca.clone();
        let mut nb = cb.clone();
        refine_once(a, &ca, &mut na, &mut palette);
        refine_once(b, &cb, &mut nb, &mut palette);
        ca = na;
        cb = nb;
        if distinct(&ca) == before_a && distinct(&cb) == before_b {
            break;
        }
    }
    (ca, cb)
}

fn refine_once<T: CayleyTable + ?Sized>(
    t: &T,
    colors: &[usize],
    out: &mut [usize],
    palette: &mut HashMap<Vec<usize>, usize>,
) {
    let n = t.order();
    for a in 0..n {
        let mut left: Vec<(usize, usize)> = (0..n).map(|x| (colors[x], colors[t.op(a, x)])).collect();
        let mut right: Vec<(usize, usize)> = (0..n).map(|x| (colors[x], colors[t.op(x, a)])).collect();
        left.sort_unstable();
        right.sort_unstable();
        let mut key = vec![colors[a]];
        key.extend(left.into_iter().flat_map(|(p, q)| [p, q]));
        key.extend(right.into_iter().flat_map(|(p, q)| [p, q]));
        let len = palette.len();
        out[a] = *palette.entry(key).or_insert(len);
    }
}

struct IsoSearch<'a, A: ?Sized, B: ?Sized> {
    a: &'a A,
    b: &'a B,
    color_a: Vec<usize>,
    color_b: Vec<usize>,
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
    trail: Vec<usize>,
}

impl<A: CayleyTable + ?Sized, B: CayleyTable + ?Sized> IsoSearch<'_, A, B> {
    /// Assigns `x -> y` and everything it forces through products with
    /// already assigned elements. On conflict the caller rolls back.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match (self.fwd[x], self.bwd[y]) {
                (Some(yy), _) if yy == y => continue,
                (None, None) if self.color_a[x] == self.color_b[y] => {}
                _ => return false,
            }
            self.fwd[x] = Some(y);
            self.bwd[y] = Some(x);
            self.trail.push(x);
            for k in 0..self.trail.len() {
                let z = self.trail[k];
                let w = self.fwd[z].unwrap();
                queue.push((self.a.op(x, z), self.b.op(y, w)));
                queue.push((self.a.op(z, x), self.b.op(w, y)));
            }
        }
        true
    }

    fn rollback(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().unwrap();
            let y = self.fwd[x].take().unwrap();
            self.bwd[y] = None;
        }
    }

    fn solve(&mut self) -> bool {
        let n = self.fwd.len();
        // branch on the unassigned element with the fewest candidates
        let mut best: Option<(usize, usize)> = None;
        for x in (0..n).filter(|&x| self.fwd[x].is_none()) {
            let k = (0..n)
                .filter(|&y| self.bwd[y].is_none() && self.color_b[y] == self.color_a[x])
                .count();
            if k == 0 {
                return false;
            }
            if best.is_none_or(|(_, bk)| k < bk) {
                best = Some((x, k));
            }
        }
        let Some((x, _)) = best else {
            return true;
        };
        let candidates: Vec<usize> = (0..n)
            .filter(|&y| self.bwd[y].is_none() && self.color_b[y] == self.color_a[x])
            .collect();
        for y in candidates {
            let mark = self.trail.len();
            if self.assign(x, y) && self.solve() {
                return true;
            }
            self.rollback(mark);
        }
        false
    }
}

/// An isomorphism `phi` with `phi(a*b) = phi(a)*phi(b)`, if one exists.
///
/// Elements are first colored by invariants (idempotency, cyclic profile,
/// commuting degree, shift image sizes, square roots) and the coloring is
/// refined jointly; backtracking then only pairs equally colored elements
/// and propagates every forced product.
pub fn isomorphic<A, B>(a: &A, b: &B) -> Result<Option<Vec<usize>>>
where
    A: CayleyTable + ?Sized,
    B: CayleyTable + ?Sized,
{
    let n = a.order();
    for order in [n, b.order()] {
        if order > MAX_ISO_ORDER {
            return Err(Error::SizeGuard {
                what: "isomorphism search order",
                value: order,
                max: MAX_ISO_ORDER,
            });
        }
    }
    if n != b.order() {
        return Ok(None);
    }
    let (color_a, color_b) = joint_colors(a, b);
    let mut ha = color_a.clone();
    let mut hb = color_b.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return Ok(None);
    }
    let mut search = IsoSearch {
        a,
        b,
        color_a,
        color_b,
        fwd: vec![None; n],
        bwd: vec![None; n],
        trail: Vec::with_capacity(n),
    };
    if !search.solve() {
        return Ok(None);
    }
    let phi: Vec<usize> = search.fwd.into_iter().map(Option::unwrap).collect();
    debug_assert!(is_isomorphism(a, b, &phi));
    Ok(Some(phi))
}

/// Exhaustive check that `phi` is a bijective homomorphism.
pub fn is_isomorphism<A, B>(a: &A, b: &B, phi: &[usize]) -> bool
where
    A: CayleyTable + ?Sized,
    B: CayleyTable + ?Sized,
{
    let n = a.order();
    if phi.len() != n || b.order() != n || !injective(n, |x| phi[x]) {
        return false;
    }
    (0..n).all(|x| (0..n).all(|y| phi[a.op(x, y)] == b.op(phi[x], phi[y])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_spec, FiniteSemigroup};
    use crate::superext::lambda_table;

    fn c(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::cyclic(n).unwrap()
    }

    #[test]
    fn group_invariants() {
        for g in [c(1), c(4), c(5), FiniteSemigroup::symmetric3(), parse_spec("C2xC2").unwrap()] {
            let n = g.order();
            let r = AnalysisReport::compute(&g);
            assert_eq!(r.idempotents, vec![g.identity().unwrap()]);
            assert_eq!(r.left_cancelable, (0..n).collect::<Vec<_>>());
            assert_eq!(r.right_cancelable, (0..n).collect::<Vec<_>>());
            assert_eq!(r.minimal_left_ideals, vec![(0..n).collect::<Vec<_>>()]);
            if n > 1 {
                assert!(r.left_zeros.is_empty() && r.right_zeros.is_empty());
            }
        }
        assert_eq!(center_of_table(&FiniteSemigroup::symmetric3()), vec![0]);
    }

    #[test]
    fn monoid_with_external_unit() {
        let m = parse_spec("C2e").unwrap();
        assert_eq!(idempotents(&m), vec![0, 2]);
        assert_eq!(center_of_table(&m), vec![0, 1, 2]);
    }

    #[test]
    fn lambda_c3_structure() {
        let t = lambda_table(&c(3)).unwrap();
        assert_eq!(idempotents(&t), vec![0, 3]);
        assert_eq!(zeros(&t), (vec![3], vec![3]));
        assert_eq!(minimal_left_ideals(&t), vec![vec![3]]);
        assert!(is_commutative(&t));
    }

    #[test]
    fn ideal_witnesses() {
        assert_eq!(check_two_sided_ideal(&c(4), &[0]), Err((1, 0)));
        assert_eq!(check_two_sided_ideal(&c(4), &[0, 1, 2, 3]), Ok(()));
        let t = lambda_table(&c(5)).unwrap();
        assert_eq!(check_two_sided_ideal(&t, &t.non_principal_indices()), Ok(()));
    }

    #[test]
    fn order_profiles() {
        assert_eq!(order_profile(&c(4), 1), (1, 4));
        assert_eq!(order_profile(&c(4), 0), (1, 1));
        // a nilpotent-ish element: x*y = 0 except 1*1 = 0 gives profile (2,1)
        let zero = FiniteSemigroup::from_rows(vec![vec![0, 0], vec![0, 0]], None).unwrap();
        assert_eq!(order_profile(&zero, 1), (2, 1));
    }

    #[test]
    fn isomorphism_search() {
        assert!(isomorphic(&c(4), &parse_spec("C2xC2").unwrap()).unwrap().is_none());
        let s3 = FiniteSemigroup::symmetric3();
        let phi = isomorphic(&s3, &s3).unwrap().unwrap();
        assert!(is_isomorphism(&s3, &s3, &phi));
        assert!(isomorphic(&c(6), &s3).unwrap().is_none());
        let a = parse_spec("C2xC3").unwrap();
        let phi = isomorphic(&a, &c(6)).unwrap().unwrap();
        assert!(is_isomorphism(&a, &c(6), &phi));
        assert!(isomorphic(&c(3), &c(4)).unwrap().is_none());
        assert!(matches!(isomorphic(&c(101), &c(101)), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn lambda_c4_is_c4_times_c2_with_unit() {
        let t = lambda_table(&c(4)).unwrap();
        let m = parse_spec("C4xC2e").unwrap();
        let phi = isomorphic(&t, &m).unwrap().expect("isomorphic");
        assert!(is_isomorphism(&t, &m, &phi));
        let back = isomorphic(&m, &t).unwrap().expect("symmetric");
        assert!(is_isomorphism(&m, &t, &back));
    }
}
