//! Finite semigroups and groups given by explicit composition tables.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Read access to a finite composition table over dense indices `0..order`.
///
/// Every analysis in [`crate::analysis`] is written against this trait so it
/// applies equally to groups, monoids and superextension tables.
pub trait CayleyTable {
    fn order(&self) -> usize;

    /// `a * b`. Both arguments must be `< order()`.
    fn op(&self, a: usize, b: usize) -> usize;
}

impl<T: CayleyTable + ?Sized> CayleyTable for &T {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn op(&self, a: usize, b: usize) -> usize {
        (**self).op(a, b)
    }
}

/// Finds a triple violating associativity, scanning all `n^3` triples.
pub fn associativity_witness<T: CayleyTable + ?Sized>(t: &T) -> Option<(usize, usize, usize)> {
    let n = t.order();
    for a in 0..n {
        for b in 0..n {
            let ab = t.op(a, b);
            for c in 0..n {
                if t.op(ab, c) != t.op(a, t.op(b, c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// A finite semigroup with its full composition table.
///
/// The table is verified to be associative when the value is built, so every
/// `FiniteSemigroup` in circulation is a genuine semigroup.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<usize>,
    labels: Vec<String>,
    identity: Option<usize>,
    is_group: bool,
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemigroup")
            .field("n", &self.n)
            .field("identity", &self.identity)
            .field("is_group", &self.is_group)
            .finish_non_exhaustive()
    }
}

impl CayleyTable for FiniteSemigroup {
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }
}

impl FiniteSemigroup {
    /// Builds a semigroup from rows of a Cayley table, checking range and
    /// associativity. Identity and group structure are detected.
    pub fn from_rows(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        if n > MAX_ORDER {
            return Err(Error::SizeGuard {
                what: "table order",
                value: n,
                max: MAX_ORDER,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|&v| v >= n) {
                return Err(Error::Validation(format!(
                    "entry ({i},{j}) = {} is out of range 0..{n}",
                    row[j]
                )));
            }
            table.extend(row);
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::Validation(format!(
                    "{} labels given for {n} elements",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Self::from_flat(n, table, labels)
    }

    fn from_flat(n: usize, table: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        let mut s = FiniteSemigroup {
            n,
            table,
            labels,
            identity: None,
            is_group: false,
        };
        if let Some((a, b, c)) = associativity_witness(&s) {
            return Err(Error::NotAssociative { a, b, c });
        }
        s.identity = (0..n).find(|&e| (0..n).all(|x| s.op(e, x) == x && s.op(x, e) == x));
        s.is_group = match s.identity {
            Some(e) => (0..n).all(|x| (0..n).any(|y| s.op(x, y) == e && s.op(y, x) == e)),
            None => false,
        };
        Ok(s)
    }

    /// The cyclic group of order `n` (addition mod `n`).
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_flat(n, table, (0..n).map(|i| i.to_string()).collect())
    }

    /// The symmetric group on three points, elements in the fixed order
    /// `id, (01), (02), (12), (012), (021)`, composed right to left.
    pub fn symmetric3() -> Self {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        const LABELS: [&str; 6] = ["id", "(01)", "(02)", "(12)", "(012)", "(021)"];
        let mut table = Vec::with_capacity(36);
        for p in &PERMS {
            for q in &PERMS {
                let pq = [p[q[0]], p[q[1]], p[q[2]]];
                table.push(PERMS.iter().position(|r| *r == pq).unwrap());
            }
        }
        Self::from_flat(6, table, LABELS.iter().map(|s| s.to_string()).collect())
            .expect("S3 is a group")
    }

    /// Componentwise product; element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (x1, x2) = (x / nb, x % nb);
                let (y1, y2) = (y / nb, y % nb);
                table.push(a.op(x1, y1) * nb + b.op(x2, y2));
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        Self::from_flat(n, table, labels).expect("products of semigroups are associative")
    }

    /// Adjoins a new two-sided unit `e` at index `|S|`, even if `S` already
    /// has one.
    pub fn adjoin_external_unit(s: &Self) -> Self {
        let n = s.n + 1;
        let e = s.n;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(match (x == e, y == e) {
                    (true, _) => y,
                    (_, true) => x,
                    _ => s.op(x, y),
                });
            }
        }
        let mut labels = s.labels.clone();
        let mut unit = String::from("e");
        while labels.contains(&unit) {
            unit.push('\'');
        }
        labels.push(unit);
        Self::from_flat(n, table, labels).expect("adjoining a unit preserves associativity")
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn is_group(&self) -> bool {
        self.is_group
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Two-sided inverse, when the semigroup is a group.
    pub fn inverse(&self, x: usize) -> Option<usize> {
        let e = self.identity?;
        (0..self.n).find(|&y| self.op(x, y) == e && self.op(y, x) == e)
    }

    /// Elements commuting with every element.
    pub fn algebraic_center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| (0..self.n).all(|y| self.op(x, y) == self.op(y, x)))
            .collect()
    }

    fn check_element(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: x, n: self.n })
        }
    }

    fn check_subset(&self, a: Subset) -> Result<()> {
        if self.n <= crate::subset::MAX_BITS && a.fits(self.n) {
            Ok(())
        } else {
            Err(Error::OutOfGround { subset: a, n: self.n })
        }
    }

    /// `{x * a : a in A}`.
    pub fn translate(&self, x: usize, a: Subset) -> Result<Subset> {
        self.check_element(x)?;
        self.check_subset(a)?;
        Ok(a.iter().map(|y| self.op(x, y)).collect())
    }

    /// `x^{-1}A = {z : x * z in A}`.
    pub fn preimage_translate(&self, x: usize, a: Subset) -> Result<Subset> {
        self.check_element(x)?;
        self.check_subset(a)?;
        Ok(self.preimage_unchecked(x, a))
    }

    #[inline]
    pub(crate) fn preimage_unchecked(&self, x: usize, a: Subset) -> Subset {
        let row = &self.table[x * self.n..(x + 1) * self.n];
        let mut out = 0u32;
        for (z, &xz) in row.iter().enumerate() {
            out |= (a.bits() >> xz & 1) << z;
        }
        Subset::from_bits(out)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            n: self.n,
            table: self.rows(),
            labels: Some(self.labels.clone()),
            identity: self.identity,
        }
    }

    pub fn from_json(json: GroupJson) -> Result<Self> {
        if json.n != json.table.len() {
            return Err(Error::Validation(format!(
                "declared n = {} but table has {} rows",
                json.n,
                json.table.len()
            )));
        }
        let s = Self::from_rows(json.table, json.labels)?;
        if let Some(e) = json.identity {
            if s.identity != Some(e) {
                return Err(Error::Validation(format!(
                    "declared identity {e} is not a two-sided unit"
                )));
            }
        }
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}

/// On-disk form of a composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
}

/// Largest order accepted from spec strings and table files; keeps the
/// cubic associativity check bounded.
pub const MAX_ORDER: usize = 256;

/// Parses a group spec string.
///
/// ```text
/// spec    := product
/// product := postfix ('x' postfix)*
/// postfix := atom 'e'*
/// atom    := 'C' digits | 'S3' | '(' product ')' | 'file:' path
/// ```
///
/// `file:` consumes the rest of the input. `x` is left associative and the
/// unit suffix `e` binds tighter, so `C4xC2e` is `C4 x (C2 with unit)`.
pub fn parse_spec(spec: &str) -> Result<FiniteSemigroup> {
    let mut p = SpecParser {
        src: spec.as_bytes(),
        text: spec,
        pos: 0,
        depth: 0,
    };
    let g = p.product()?;
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(g)
}

const MAX_NESTING: usize = 32;

struct SpecParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    depth: usize,
}

impl SpecParser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Spec {
            position: self.pos,
            message: message.to_owned(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<FiniteSemigroup> {
        let mut acc = self.postfix()?;
        while self.peek() == Some(b'x') {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.postfix()?;
            if acc.order() * rhs.order() > MAX_ORDER {
                return Err(Error::Spec {
                    position: at,
                    message: format!("product order exceeds {MAX_ORDER}"),
                });
            }
            acc = FiniteSemigroup::direct_product(&acc, &rhs);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<FiniteSemigroup> {
        let mut g = self.atom()?;
        while self.peek() == Some(b'e') {
            if g.order() >= MAX_ORDER {
                return Err(self.err("order limit reached"));
            }
            self.pos += 1;
            g = FiniteSemigroup::adjoin_external_unit(&g);
        }
        Ok(g)
    }

    fn atom(&mut self) -> Result<FiniteSemigroup> {
        match self.peek() {
            Some(b'C') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected digits after `C`"));
                }
                let n: usize = self.text[start..self.pos]
                    .parse()
                    .ok()
                    .filter(|&n| n <= MAX_ORDER)
                    .ok_or_else(|| Error::Spec {
                        position: start,
                        message: format!("cyclic order must be at most {MAX_ORDER}"),
                    })?;
                if n == 0 {
                    return Err(Error::Spec {
                        position: start,
                        message: "cyclic order must be positive".into(),
                    });
                }
                FiniteSemigroup::cyclic(n)
            }
            Some(b'S') => {
                if self.src[self.pos..].starts_with(b"S3") {
                    self.pos += 2;
                    Ok(FiniteSemigroup::symmetric3())
                } else {
                    Err(self.err("only `S3` is built in"))
                }
            }
            Some(b'(') => {
                if self.depth == MAX_NESTING {
                    return Err(self.err("parentheses nested too deeply"));
                }
                self.pos += 1;
                self.depth += 1;
                let g = self.product()?;
                self.depth -= 1;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(g)
            }
            Some(b'f') if self.src[self.pos..].starts_with(b"file:") => {
                let path = &self.text[self.pos + 5..];
                if path.is_empty() {
                    return Err(Error::Spec {
                        position: self.pos + 5,
                        message: "empty path after `file:`".into(),
                    });
                }
                self.pos = self.src.len();
                FiniteSemigroup::load(Path::new(path))
            }
            Some(_) => Err(self.err("expected `C<n>`, `S3`, `(` or `file:<path>`")),
            None => Err(self.err("unexpected end of spec")),
        }
    }
}
