//! Certificate checkers for non-centrality and commuting pairs. They work on
//! explicitly given systems and never enumerate the superextension, so they
//! run on ground sets up to 16 points.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_spec, CayleyTable, FiniteSemigroup};
use crate::analysis::center_of_table;
use crate::error::{Error, Result};
use crate::hyperspace::{enumerate_mls, MaximalLinkedSystem, SetFamily};
use crate::subset::Subset;
use crate::superext::{lambda_table, product};

/// `{A : |A ∩ T| >= 2}` for a three-point set `T`.
pub fn tee_system(t: Subset, n: usize) -> Result<MaximalLinkedSystem> {
    if t.len() != 3 {
        return Err(Error::CertificateShape(format!(
            "tee system needs |T| = 3, got |{t}| = {}",
            t.len()
        )));
    }
    if !t.fits(n) {
        return Err(Error::OutOfGround { subset: t, n });
    }
    let pairs = t.iter().map(|x| t.without(x));
    MaximalLinkedSystem::new(SetFamily::from_sets(n, pairs)?)
}

/// Witness that `a` is not central: sets `s`, `t` and a member `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateL41 {
    pub a: MaximalLinkedSystem,
    pub s: Subset,
    pub t: Subset,
    pub b: Subset,
}

/// On-disk certificate: the group is given as a spec string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub group: String,
    #[serde(rename = "A")]
    pub a: SetFamily,
    #[serde(rename = "S")]
    pub s: Subset,
    #[serde(rename = "T")]
    pub t: Subset,
    #[serde(rename = "B")]
    pub b: Subset,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<(FiniteSemigroup, CertificateL41)> {
        let file: CertificateFile = serde_json::from_str(text)?;
        file.resolve()
    }

    pub fn load(path: &Path) -> Result<(FiniteSemigroup, CertificateL41)> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn resolve(self) -> Result<(FiniteSemigroup, CertificateL41)> {
        let g = parse_spec(&self.group)?;
        let a = MaximalLinkedSystem::new(self.a).map_err(|_| {
            Error::CertificateShape("`A` is not a maximal linked system".into())
        })?;
        Ok((
            g,
            CertificateL41 {
                a,
                s: self.s,
                t: self.t,
                b: self.b,
            },
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Lemma41Verdict {
    /// All three conditions hold and the products with the tee system differ.
    NotCentral {
        a_times_tee: MaximalLinkedSystem,
        tee_times_a: MaximalLinkedSystem,
        /// Whether the separation condition also holds with `T T^{-1}` in
        /// place of `T^{-1} T`.
        swapped_separation: bool,
    },
    /// The conditions hold but the products agree.
    ConclusionFailed { product: MaximalLinkedSystem },
    Invalid { condition: u8, reason: String },
}

impl Lemma41Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Lemma41Verdict::NotCentral { .. })
    }

    pub fn failed_condition(&self) -> Option<u8> {
        match self {
            Lemma41Verdict::Invalid { condition, .. } => Some(*condition),
            _ => None,
        }
    }
}

/// Every member `A` satisfies `A ∩ S ∈ 𝒜` and `|A ∩ S| >= 2`. By
/// monotonicity only the minimal sets need checking; returns the first
/// minimal set that fails.
pub fn restriction_failure(a: &SetFamily, s: Subset) -> Option<Subset> {
    a.min_sets()
        .iter()
        .copied()
        .find(|&m| {
            let ms = m.intersection(s);
            ms.len() < 2 || !a.member(ms)
        })
}

/// `{x * y^{-1} : x in X, y in Y}`.
fn right_quotient(g: &FiniteSemigroup, x: Subset, y: Subset) -> Subset {
    let inv: Vec<usize> = y.iter().map(|v| g.inverse(v).expect("group")).collect();
    x.iter()
        .flat_map(|u| inv.iter().map(move |&vi| g.op(u, vi)))
        .collect()
}

/// `{x^{-1} * y : x in X, y in Y}`.
fn left_quotient(g: &FiniteSemigroup, x: Subset, y: Subset) -> Subset {
    let inv: Vec<usize> = x.iter().map(|u| g.inverse(u).expect("group")).collect();
    inv.iter()
        .flat_map(|&ui| y.iter().map(move |v| g.op(ui, v)))
        .collect()
}

/// `BS^{-1} ∩ T^{-1}T ⊆ {e}`, and the same with `TT^{-1}`.
fn separation(g: &FiniteSemigroup, c: &CertificateL41) -> (Subset, Subset, Subset) {
    let bs = right_quotient(g, c.b, c.s);
    (bs, left_quotient(g, c.t, c.t), right_quotient(g, c.t, c.t))
}

/// Checks the three conditions of the non-centrality certificate and, when
/// they hold, recomputes `A∘𝒯` and `𝒯∘A` to confirm they differ.
pub fn check_lemma41(cert: &CertificateL41, g: &FiniteSemigroup) -> Result<Lemma41Verdict> {
    if !g.is_group() {
        return Err(Error::NotAGroup("non-centrality certificates"));
    }
    let n = g.order();
    if cert.a.ground_size() != n {
        return Err(Error::GroundMismatch {
            expected: n,
            found: cert.a.ground_size(),
        });
    }
    for (name, s) in [("S", cert.s), ("T", cert.t), ("B", cert.b)] {
        if !s.fits(n) {
            return Err(Error::CertificateShape(format!(
                "{name} = {s} is not a subset of the {n}-element group"
            )));
        }
    }
    if cert.t.len() != 3 {
        return Ok(Lemma41Verdict::Invalid {
            condition: 1,
            reason: format!("|T| = {}, expected 3", cert.t.len()),
        });
    }
    if let Some(m) = restriction_failure(&cert.a, cert.s) {
        let ms = m.intersection(cert.s);
        let reason = if ms.len() < 2 {
            format!("minimal set {m} meets S in {ms}, fewer than 2 points")
        } else {
            format!("minimal set {m} meets S in {ms}, which is not a member")
        };
        return Ok(Lemma41Verdict::Invalid {
            condition: 2,
            reason,
        });
    }
    if !cert.a.member(cert.b) {
        return Ok(Lemma41Verdict::Invalid {
            condition: 3,
            reason: format!("B = {} is not a member of A", cert.b),
        });
    }
    let e = g.identity().expect("group");
    let allowed = Subset::singleton(e);
    let (bs, tt_left, tt_right) = separation(g, cert);
    let meet = bs.intersection(tt_left);
    if !meet.is_subset_of(allowed) {
        return Ok(Lemma41Verdict::Invalid {
            condition: 3,
            reason: format!("BS^-1 = {bs} meets T^-1T = {tt_left} in {meet}"),
        });
    }
    let swapped_separation = bs.intersection(tt_right).is_subset_of(allowed);
    let tee = tee_system(cert.t, n)?;
    let left = product(&cert.a, &tee, g)?;
    let right = product(&tee, &cert.a, g)?;
    if left == right {
        return Ok(Lemma41Verdict::ConclusionFailed { product: left });
    }
    Ok(Lemma41Verdict::NotCentral {
        a_times_tee: left,
        tee_times_a: right,
        swapped_separation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop45Outcome {
    pub holds: bool,
    pub l_times_u: MaximalLinkedSystem,
    pub u_times_l: MaximalLinkedSystem,
}

/// Verifies that `y*z = z*y` on `Y x Z`, then compares `L∘U` with `U∘L`
/// for the principal ultrafilter `U` at `u`.
pub fn check_prop45(
    y: Subset,
    z: Subset,
    l: &MaximalLinkedSystem,
    u: usize,
    g: &FiniteSemigroup,
) -> Result<Prop45Outcome> {
    let n = g.order();
    if l.ground_size() != n {
        return Err(Error::GroundMismatch {
            expected: n,
            found: l.ground_size(),
        });
    }
    for s in [y, z] {
        if !s.fits(n) {
            return Err(Error::OutOfGround { subset: s, n });
        }
    }
    if !l.support().is_subset_of(y) {
        return Err(Error::CertificateShape(format!(
            "L is not supported on Y = {y}"
        )));
    }
    if !z.contains(u) {
        return Err(Error::CertificateShape(format!("u = {u} is not in Z = {z}")));
    }
    commuting_witness(g, y, z)?;
    let p = MaximalLinkedSystem::principal(u, n)?;
    let l_times_u = product(l, &p, g)?;
    let u_times_l = product(&p, l, g)?;
    Ok(Prop45Outcome {
        holds: l_times_u == u_times_l,
        l_times_u,
        u_times_l,
    })
}

fn commuting_witness(g: &FiniteSemigroup, y: Subset, z: Subset) -> Result<()> {
    for a in y.iter() {
        for b in z.iter() {
            if g.op(a, b) != g.op(b, a) {
                return Err(Error::PreconditionViolated { y: a, z: b });
            }
        }
    }
    Ok(())
}

/// Summary of [`check_prop45_all`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop45Summary {
    pub pairs_checked: usize,
    pub failures: Vec<(MaximalLinkedSystem, usize)>,
}

/// Runs [`check_prop45`] for every maximal linked system supported on `Y`
/// and every `u` in `Z`.
pub fn check_prop45_all(g: &FiniteSemigroup, y: Subset, z: Subset) -> Result<Prop45Summary> {
    let n = g.order();
    for s in [y, z] {
        if !s.fits(n) {
            return Err(Error::OutOfGround { subset: s, n });
        }
    }
    commuting_witness(g, y, z)?;
    let points: Vec<usize> = y.iter().collect();
    let systems = if points.is_empty() {
        Vec::new()
    } else {
        enumerate_mls(points.len())?
    };
    let mut summary = Prop45Summary {
        pairs_checked: 0,
        failures: Vec::new(),
    };
    for local in systems {
        let sets = local
            .min_sets()
            .iter()
            .map(|s| s.iter().map(|i| points[i]).collect::<Subset>());
        let l = MaximalLinkedSystem::new(SetFamily::from_sets(n, sets)?)?;
        for u in z.iter() {
            let outcome = check_prop45(y, z, &l, u, g)?;
            summary.pairs_checked += 1;
            if !outcome.holds {
                summary.failures.push((l.clone(), u));
            }
        }
    }
    Ok(summary)
}

/// The first central element of the superextension that is not a principal
/// ultrafilter, with its table index.
pub fn search_central_nonprincipal(
    g: &FiniteSemigroup,
) -> Result<Option<(usize, MaximalLinkedSystem)>> {
    let t = lambda_table(g)?;
    let found = center_of_table(&t)
        .into_iter()
        .find(|&i| !t.is_principal(i))
        .map(|i| (i, t.element(i).clone()));
    if let Some((i, _)) = &found {
        debug_assert!((0..t.order()).all(|x| t.op(*i, x) == t.op(x, *i)));
    }
    Ok(found)
}
