//! Upward-closed set families over a finite ground set, stored by their
//! antichain of minimal members.
//!
//! For a finite ground set the minimal antichain is the finite support of a
//! family, so every maximal linked system here has finite support and none
//! is free.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_BITS, MAX_LATTICE_GROUND};

/// Largest ground set accepted by [`enumerate_mls`].
pub const MAX_MLS_ENUM: usize = 7;
/// Largest ground set accepted by [`enumerate_inclusion_hyperspaces`].
pub const MAX_HYPERSPACE_ENUM: usize = 4;

/// An upward-closed family of nonempty subsets of `{0, .., n-1}`.
///
/// `min_sets` is always a canonical antichain: no member empty, no member
/// containing another, sorted by [`Subset`]'s order. Two families are equal
/// exactly when their antichains are.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct SetFamily {
    n: usize,
    min_sets: Vec<Subset>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    n: usize,
    min_sets: Vec<Subset>,
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(json: FamilyJson) -> Result<Self> {
        SetFamily::from_sets(json.n, json.min_sets)
    }
}

impl From<SetFamily> for FamilyJson {
    fn from(f: SetFamily) -> Self {
        FamilyJson {
            n: f.n,
            min_sets: f.min_sets,
        }
    }
}

/// Keeps only the inclusion-minimal sets, sorted canonically.
fn minimize(mut sets: Vec<Subset>) -> Vec<Subset> {
    sets.sort_unstable();
    sets.dedup();
    let mut kept: Vec<Subset> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset_of(s)) {
            kept.push(s);
        }
    }
    kept
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_BITS {
        return Err(Error::SizeGuard {
            what: "ground set",
            value: n,
            max: MAX_BITS,
        });
    }
    Ok(())
}

fn check_lattice_ground(n: usize) -> Result<()> {
    if n > MAX_LATTICE_GROUND {
        return Err(Error::SizeGuard {
            what: "ground set for lattice scans",
            value: n,
            max: MAX_LATTICE_GROUND,
        });
    }
    Ok(())
}

impl SetFamily {
    /// The upward closure of `generators`, in canonical form.
    pub fn from_sets<I: IntoIterator<Item = Subset>>(n: usize, generators: I) -> Result<Self> {
        check_ground(n)?;
        let sets: Vec<Subset> = generators.into_iter().collect();
        for &s in &sets {
            if s.is_empty() {
                return Err(Error::EmptyMember);
            }
            if !s.fits(n) {
                return Err(Error::OutOfGround { subset: s, n });
            }
        }
        Ok(SetFamily {
            n,
            min_sets: minimize(sets),
        })
    }

    /// Caller guarantees a canonical antichain.
    pub(crate) fn from_canonical(n: usize, min_sets: Vec<Subset>) -> Self {
        debug_assert!(min_sets.windows(2).all(|w| w[0] < w[1]));
        SetFamily { n, min_sets }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn min_sets(&self) -> &[Subset] {
        &self.min_sets
    }

    pub fn is_empty(&self) -> bool {
        self.min_sets.is_empty()
    }

    /// Union of all minimal sets.
    pub fn support(&self) -> Subset {
        self.min_sets
            .iter()
            .fold(Subset::EMPTY, |acc, &s| acc.union(s))
    }

    pub fn member(&self, a: Subset) -> bool {
        self.min_sets.iter().any(|m| m.is_subset_of(a))
    }

    /// `{A : A meets every member}`, by incremental minimal hitting sets.
    pub fn transversal(&self) -> Result<SetFamily> {
        let mut current = vec![Subset::EMPTY];
        if self.min_sets.is_empty() {
            return Err(Error::UndefinedTransversal);
        }
        for &m in &self.min_sets {
            let mut next = Vec::with_capacity(current.len() * 2);
            for &t in &current {
                if t.intersects(m) {
                    next.push(t);
                } else {
                    next.extend(m.iter().map(|v| t.with(v)));
                }
            }
            current = minimize(next);
        }
        Ok(SetFamily::from_canonical(self.n, current))
    }

    /// Every two members meet. Checking the minimal sets suffices.
    pub fn is_linked(&self) -> bool {
        self.min_sets
            .iter()
            .enumerate()
            .all(|(i, a)| self.min_sets[i..].iter().all(|b| a.intersects(*b)))
    }

    /// Fixed point of transversality.
    pub fn is_mls(&self) -> bool {
        match self.transversal() {
            Ok(t) => t == *self,
            Err(_) => false,
        }
    }

    /// Membership of every subset, as a bitmap indexed by bit-vector value.
    pub fn membership(&self) -> Result<MembershipMap> {
        check_lattice_ground(self.n)?;
        let mut map = MembershipMap::new(self.n);
        let full = Subset::full(self.n).bits();
        for m in &self.min_sets {
            let free = full & !m.bits();
            // walk every subset of `free`
            let mut extra = free;
            loop {
                map.set(Subset::from_bits(m.bits() | extra));
                if extra == 0 {
                    break;
                }
                extra = (extra - 1) & free;
            }
        }
        Ok(map)
    }

    /// One line of the CSV enumeration format: `{0,1}|{0,2}`.
    pub fn to_csv_line(&self) -> String {
        self.min_sets
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn parse_csv_line(n: usize, line: &str) -> Result<SetFamily> {
        let line = line.trim();
        if line.is_empty() {
            return SetFamily::from_sets(n, []);
        }
        let sets = line
            .split('|')
            .map(|tok| tok.parse::<Subset>().map_err(Error::FamilySyntax))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::from_sets(n, sets)
    }
}

impl PartialOrd for SetFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical global order: ground size, number of minimal sets, then the
/// minimal sets lexicographically.
impl Ord for SetFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.min_sets.len().cmp(&other.min_sets.len()))
            .then_with(|| self.min_sets.cmp(&other.min_sets))
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, s) in self.min_sets.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, {self})", self.n)
    }
}

/// A bitmap over all `2^n` subsets of the ground set.
#[derive(Clone, PartialEq, Eq)]
pub struct MembershipMap {
    n: usize,
    words: Vec<u64>,
}

impl MembershipMap {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_LATTICE_GROUND);
        MembershipMap {
            n,
            words: vec![0; (1usize << n).div_ceil(64)],
        }
    }

    #[inline]
    pub fn get(&self, s: Subset) -> bool {
        let i = s.bits() as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, s: Subset) {
        let i = s.bits() as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// Minimal members, canonical order. Fails if the map is not upward
    /// closed or contains the empty set.
    pub fn minimal_sets(&self) -> Result<SetFamily> {
        let n = self.n;
        if self.get(Subset::EMPTY) {
            return Err(Error::EmptyMember);
        }
        let mut mins = Vec::new();
        for s in Subset::all(n) {
            if !self.get(s) {
                continue;
            }
            for i in 0..n {
                if !s.contains(i) && !self.get(s.with(i)) {
                    return Err(Error::NotMonotone {
                        accepted: s,
                        rejected: s.with(i),
                    });
                }
            }
            if s.iter().all(|i| !self.get(s.without(i))) {
                mins.push(s);
            }
        }
        mins.sort_unstable();
        Ok(SetFamily::from_canonical(n, mins))
    }
}

/// The canonical antichain of a monotone membership oracle.
///
/// The oracle is evaluated once on every subset; any accepted set with a
/// rejected one-point extension is reported as non-monotone.
pub fn minimal_antichain<F>(mut oracle: F, n: usize) -> Result<SetFamily>
where
    F: FnMut(Subset) -> bool,
{
    check_lattice_ground(n)?;
    let mut map = MembershipMap::new(n);
    for s in Subset::all(n) {
        if oracle(s) {
            map.set(s);
        }
    }
    map.minimal_sets()
}

/// A family that is linked and equal to its own transversal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SetFamily", into = "SetFamily")]
pub struct MaximalLinkedSystem(SetFamily);

impl MaximalLinkedSystem {
    pub fn new(family: SetFamily) -> Result<Self> {
        if family.is_mls() {
            Ok(MaximalLinkedSystem(family))
        } else {
            Err(Error::NotMaximalLinked)
        }
    }

    pub(crate) fn new_unchecked(family: SetFamily) -> Self {
        debug_assert!(family.is_mls(), "{family} is not maximal linked");
        MaximalLinkedSystem(family)
    }

    /// The principal ultrafilter `<{x}>`.
    pub fn principal(x: usize, n: usize) -> Result<Self> {
        if x >= n {
            return Err(Error::ElementOutOfRange { element: x, n });
        }
        check_ground(n)?;
        Ok(MaximalLinkedSystem(SetFamily::from_canonical(
            n,
            vec![Subset::singleton(x)],
        )))
    }

    /// The point `x` when this is the principal ultrafilter at `x`.
    pub fn principal_point(&self) -> Option<usize> {
        match self.0.min_sets() {
            [s] if s.len() == 1 => s.iter().next(),
            _ => None,
        }
    }

    pub fn family(&self) -> &SetFamily {
        &self.0
    }

    pub fn into_family(self) -> SetFamily {
        self.0
    }
}

impl TryFrom<SetFamily> for MaximalLinkedSystem {
    type Error = Error;

    fn try_from(f: SetFamily) -> Result<Self> {
        MaximalLinkedSystem::new(f)
    }
}

impl From<MaximalLinkedSystem> for SetFamily {
    fn from(m: MaximalLinkedSystem) -> Self {
        m.0
    }
}

impl Deref for MaximalLinkedSystem {
    type Target = SetFamily;

    fn deref(&self) -> &SetFamily {
        &self.0
    }
}

impl fmt::Display for MaximalLinkedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for MaximalLinkedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mls(n={}, {})", self.0.n, self.0)
    }
}

fn check_enum_range(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SizeGuardMin {
            what: "ground set",
            value: n,
            min: 1,
        });
    }
    if n > max {
        return Err(Error::SizeGuard {
            what: "ground set",
            value: n,
            max,
        });
    }
    Ok(())
}

/// Branch-and-propagate search for self-dual monotone families.
///
/// A family is a bitmap over the `2^n <= 128` subsets. Each step takes the
/// first undecided subset `s` and either puts `s` in the family (forcing all
/// supersets in and all subsets of its complement out) or puts its
/// complement in. Every leaf decides each complementary pair exactly once,
/// so leaves are exactly the maximal linked systems.
struct MlsSearch {
    up: Vec<u128>,
    down: Vec<u128>,
    order: Vec<u32>,
    full: u32,
}

const PARALLEL_DEPTH: usize = 10;

impl MlsSearch {
    fn new(n: usize) -> Self {
        let size = 1usize << n;
        let full = Subset::full(n).bits();
        let up = (0..size as u32)
            .map(|s| {
                (0..size as u32)
                    .filter(|&t| s & !t == 0)
                    .fold(0u128, |m, t| m | 1 << t)
            })
            .collect();
        let down = (0..size as u32)
            .map(|s| {
                (0..size as u32)
                    .filter(|&t| t & !s == 0)
                    .fold(0u128, |m, t| m | 1 << t)
            })
            .collect();
        let mut order: Vec<u32> = (0..size as u32).collect();
        order.sort_by_key(|&s| Subset::from_bits(s));
        MlsSearch {
            up,
            down,
            order,
            full,
        }
    }

    fn run(&self) -> Vec<u128> {
        self.dfs(0, 0, 0, 0)
    }

    fn dfs(&self, mut pos: usize, inn: u128, out: u128, depth: usize) -> Vec<u128> {
        let decided = inn | out;
        while pos < self.order.len() && decided >> self.order[pos] & 1 == 1 {
            pos += 1;
        }
        if pos == self.order.len() {
            return vec![inn];
        }
        let s = self.order[pos] as usize;
        let c = (self.full ^ s as u32) as usize;
        let take = |keep: usize, drop: usize| {
            let i = inn | self.up[keep];
            let o = out | self.down[drop];
            (i & o == 0).then_some((i, o))
        };
        let left = take(s, c);
        let right = take(c, s);
        let branch = |opt: Option<(u128, u128)>| match opt {
            Some((i, o)) => self.dfs(pos + 1, i, o, depth + 1),
            None => Vec::new(),
        };
        if depth < PARALLEL_DEPTH {
            let (mut a, b) = rayon::join(|| branch(left), || branch(right));
            a.extend(b);
            a
        } else {
            let mut a = branch(left);
            a.extend(branch(right));
            a
        }
    }
}

fn mask_to_family(n: usize, mask: u128) -> SetFamily {
    let mut mins: Vec<Subset> = Subset::all(n)
        .filter(|s| mask >> s.bits() & 1 == 1)
        .filter(|s| s.iter().all(|i| mask >> s.without(i).bits() & 1 == 0))
        .collect();
    mins.sort_unstable();
    SetFamily::from_canonical(n, mins)
}

/// All maximal linked systems on `{0, .., n-1}` in canonical order.
///
/// The principal ultrafilters come first, `<{x}>` at index `x`.
pub fn enumerate_mls(n: usize) -> Result<Vec<MaximalLinkedSystem>> {
    check_enum_range(n, MAX_MLS_ENUM)?;
    let masks = MlsSearch::new(n).run();
    let mut out: Vec<MaximalLinkedSystem> = masks
        .into_par_iter()
        .map(|m| MaximalLinkedSystem(mask_to_family(n, m)))
        .collect();
    out.par_sort_unstable();
    Ok(out)
}

/// All inclusion hyperspaces (nonempty upward-closed families of nonempty
/// sets) on `{0, .., n-1}`, canonical order.
pub fn enumerate_inclusion_hyperspaces(n: usize) -> Result<Vec<SetFamily>> {
    check_enum_range(n, MAX_HYPERSPACE_ENUM)?;
    let mut sets: Vec<Subset> = Subset::all(n).skip(1).collect();
    sets.sort_unstable();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    antichains(&sets, 0, &mut chosen, &mut |c| {
        if !c.is_empty() {
            out.push(SetFamily::from_canonical(n, c.to_vec()));
        }
    });
    out.sort_unstable();
    Ok(out)
}

fn antichains(
    sets: &[Subset],
    start: usize,
    chosen: &mut Vec<Subset>,
    emit: &mut dyn FnMut(&[Subset]),
) {
    emit(chosen);
    for i in start..sets.len() {
        let s = sets[i];
        // later sets never sit strictly inside earlier ones in canonical order
        if chosen.iter().any(|c| c.is_subset_of(s)) {
            continue;
        }
        chosen.push(s);
        antichains(sets, i + 1, chosen, emit);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::from_sets(n, sets.iter().map(|s| Subset::from_indices(s.iter().copied())))
            .unwrap()
    }

    fn delta3() -> SetFamily {
        fam(3, &[&[0, 1], &[0, 2], &[1, 2]])
    }

    /// Transversal by scanning every subset.
    fn brute_transversal(f: &SetFamily) -> SetFamily {
        let n = f.ground_size();
        let all: Vec<Subset> = Subset::all(n).filter(|&s| f.member(s)).collect();
        SetFamily::from_sets(
            n,
            Subset::all(n).filter(|a| all.iter().all(|m| a.intersects(*m))),
        )
        .unwrap()
    }

    #[test]
    fn construction_minimizes_and_rejects_bad_sets() {
        let f = fam(3, &[&[0, 1, 2], &[1, 2], &[0], &[0]]);
        assert_eq!(f.min_sets(), &[Subset::singleton(0), Subset::from_indices([1, 2])]);
        assert!(matches!(
            SetFamily::from_sets(3, [Subset::EMPTY]),
            Err(Error::EmptyMember)
        ));
        assert!(matches!(
            SetFamily::from_sets(2, [Subset::singleton(2)]),
            Err(Error::OutOfGround { .. })
        ));
    }

    #[test]
    fn membership() {
        assert!(fam(3, &[&[0]]).member(Subset::from_indices([0, 2])));
        assert!(!delta3().member(Subset::singleton(1)));
        assert!(delta3().member(Subset::full(3)));
    }

    #[test]
    fn transversal_examples() {
        let p0 = fam(3, &[&[0]]);
        assert_eq!(p0.transversal().unwrap(), p0);
        // enumerate the 7 nonempty subsets by hand: those meeting {0,1} are
        // {0},{1},{0,1},{0,2},{1,2},{0,1,2}; minimal ones {0},{1}
        assert_eq!(fam(3, &[&[0, 1]]).transversal().unwrap(), fam(3, &[&[0], &[1]]));
        assert_eq!(delta3().transversal().unwrap(), delta3());
        assert!(matches!(
            SetFamily::from_sets(3, []).unwrap().transversal(),
            Err(Error::UndefinedTransversal)
        ));
    }

    #[test]
    fn linked_and_mls() {
        assert!(!fam(2, &[&[0], &[1]]).is_linked());
        assert!(delta3().is_linked());
        assert!(fam(3, &[&[0]]).is_linked());
        assert!(fam(3, &[&[0]]).is_mls());
        assert!(!fam(3, &[&[0, 1]]).is_mls());
        assert!(delta3().is_mls());
        assert!(!SetFamily::from_sets(3, []).unwrap().is_mls());
    }

    #[test]
    fn minimal_antichain_examples() {
        assert_eq!(minimal_antichain(|s| s.contains(0), 3).unwrap(), fam(3, &[&[0]]));
        assert_eq!(minimal_antichain(|s| s.len() >= 2, 3).unwrap(), delta3());
        let d = delta3();
        assert_eq!(minimal_antichain(|s| d.member(s), 3).unwrap(), d);
        assert!(matches!(
            minimal_antichain(|s| s.len() == 1, 3),
            Err(Error::NotMonotone { .. })
        ));
        assert!(matches!(
            minimal_antichain(|_| true, 3),
            Err(Error::EmptyMember)
        ));
    }

    #[test]
    fn membership_map_matches_member() {
        let f = fam(5, &[&[0, 1], &[2, 3, 4], &[1, 4]]);
        let map = f.membership().unwrap();
        for s in Subset::all(5) {
            assert_eq!(map.get(s), f.member(s));
        }
        assert_eq!(map.minimal_sets().unwrap(), f);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_mls(1).unwrap().len(), 1);
        assert_eq!(enumerate_mls(2).unwrap().len(), 2);
        let three = enumerate_mls(3).unwrap();
        assert_eq!(three.len(), 4);
        assert_eq!(three[3].family(), &delta3());
        for (x, m) in three.iter().take(3).enumerate() {
            assert_eq!(m.principal_point(), Some(x));
        }
        assert!(enumerate_mls(0).is_err());
        assert!(enumerate_mls(8).is_err());

        assert_eq!(
            enumerate_inclusion_hyperspaces(1).unwrap(),
            vec![fam(1, &[&[0]])]
        );
        assert_eq!(
            enumerate_inclusion_hyperspaces(2).unwrap(),
            vec![fam(2, &[&[0]]), fam(2, &[&[1]]), fam(2, &[&[0, 1]]), fam(2, &[&[0], &[1]])]
        );
        assert!(enumerate_inclusion_hyperspaces(5).is_err());
    }

    #[test]
    fn involution_on_all_small_hyperspaces() {
        for n in 1..=4 {
            for f in enumerate_inclusion_hyperspaces(n).unwrap() {
                let t = f.transversal().unwrap();
                assert_eq!(t, brute_transversal(&f));
                assert_eq!(t.transversal().unwrap(), f);
            }
        }
    }

    #[test]
    fn mls_are_fixed_points_of_transversal() {
        for n in 1..=4 {
            let fixed: Vec<SetFamily> = enumerate_inclusion_hyperspaces(n)
                .unwrap()
                .into_iter()
                .filter(SetFamily::is_mls)
                .collect();
            let mls: Vec<SetFamily> = enumerate_mls(n)
                .unwrap()
                .into_iter()
                .map(MaximalLinkedSystem::into_family)
                .collect();
            assert_eq!(fixed, mls);
        }
    }

    #[test]
    fn mls_are_maximal() {
        for n in 1..=5 {
            for m in enumerate_mls(n).unwrap() {
                assert!(m.is_linked());
                for c in Subset::all(n).filter(|&c| !m.member(c)) {
                    assert!(m.min_sets().iter().any(|s| !s.intersects(c)));
                }
            }
        }
    }

    #[test]
    fn csv_and_json_round_trip() {
        let f = fam(4, &[&[0, 1], &[0, 2], &[1, 2, 3]]);
        assert_eq!(f.to_csv_line(), "{0,1}|{0,2}|{1,2,3}");
        assert_eq!(SetFamily::parse_csv_line(4, &f.to_csv_line()).unwrap(), f);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"n":4,"min_sets":[[0,1],[0,2],[1,2,3]]}"#);
        assert_eq!(serde_json::from_str::<SetFamily>(&json).unwrap(), f);
        assert!(serde_json::from_str::<SetFamily>(r#"{"n":2,"min_sets":[[]]}"#).is_err());
        let m = serde_json::from_str::<MaximalLinkedSystem>(r#"{"n":3,"min_sets":[[1,2],[0,1],[0,2]]}"#)
            .unwrap();
        assert_eq!(m.family(), &delta3());
        assert!(serde_json::from_str::<MaximalLinkedSystem>(r#"{"n":3,"min_sets":[[0,1]]}"#).is_err());
    }
}
