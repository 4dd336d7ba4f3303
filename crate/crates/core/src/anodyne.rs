//! The parent/child pairing on `O(-,n) \ A` and certificate generation.
//!
//! `A ⊂ O(-,n)` consists of the simplices whose support operators all have
//! preimages of `n` of one common size. Outside `A` every nondegenerate
//! simplex is either a parent (it satisfies condition (†)) or a child, and
//! each child `x` sits in exactly one parent as the face `w∂_ℓ`. Filling
//! these horns in lexicographic order of `(dimension, corank, level)` builds
//! `O(-,n)` from `A`. `A` itself is built from `Δ[n]` by coning the
//! certificate for `n - 1`.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::certificate::{replay_legality, CertStep, Certificate, JoinOrder, StepKind};
use crate::chain::Chain;
use crate::enumeration::{enumerate_o, Oracle, DEFAULT_BOUND};
use crate::error::Error;
use crate::oriental::{check_membership, in_a_chain, is_marked_chain, OSimplex};
use crate::pasting::decompose_sum;

/// Rank, split, level and corank of a simplex outside `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankData {
    /// First index sent to `n` by some support operator.
    pub rank: usize,
    /// `x̌`: the terms with `α(r) < n`.
    pub check: Chain,
    /// `x̄`: the terms with `α(r) = n`.
    pub bar: Chain,
    pub level: usize,
    /// `dim(x) - rank(x)`.
    pub corank: usize,
    /// Condition (†): `x̄` is degenerate at `level - 1`.
    pub dagger: bool,
}

impl RankData {
    pub fn index(&self) -> (usize, usize) {
        (self.corank, self.level)
    }
}

// Rank data without the nondegeneracy precondition. `None` for chains in A.
fn split(x: &Chain) -> Result<Option<RankData>, Error> {
    if in_a_chain(x) {
        return Ok(None);
    }
    let (m, n) = (x.dim(), x.target());
    let rank = x
        .support()
        .map(|a| a.preimage_of(n).start)
        .min()
        .expect("chains outside A are nonzero");
    let (mut check, mut bar) = (Vec::new(), Vec::new());
    for &(a, c) in x.terms() {
        if a.at(rank) < n {
            check.push((c, a));
        } else {
            bar.push((c, a));
        }
    }
    let check = Chain::new(m, n, check)?;
    let bar = Chain::new(m, n, bar)?;
    if check.is_zero() || bar.is_zero() {
        return Err(Error::Invariant(format!(
            "{x} lies outside A but one side of its split is zero"
        )));
    }
    let level = (0..=rank)
        .find(|&i| check.support().all(|a| a.at(i) == a.at(rank)))
        .expect("i = rank qualifies");
    if level == 0 {
        return Err(Error::Invariant(format!("{x} has level 0")));
    }
    let corank = m - rank;
    let top = x.support().map(|a| a.preimage_of(n).len()).max().unwrap_or(0);
    if top != corank + 1 {
        return Err(Error::Invariant(format!(
            "{x}: largest preimage of n has size {top}, corank is {corank}"
        )));
    }
    let dagger = bar.is_degenerate_at(level - 1);
    if dagger && level >= rank {
        return Err(Error::Invariant(format!(
            "{x} satisfies (†) with level {level} not below rank {rank}"
        )));
    }
    Ok(Some(RankData {
        rank,
        check,
        bar,
        level,
        corank,
        dagger,
    }))
}

/// Rank data of a nondegenerate simplex outside `A`.
pub fn rank_data(x: &OSimplex) -> Result<RankData, Error> {
    if x.is_degenerate() {
        return Err(Error::Precondition("simplex is degenerate"));
    }
    split(x.chain())?.ok_or(Error::Precondition("simplex lies in A"))
}

/// The child `x∂_ℓ` of a simplex satisfying (†).
pub fn child(x: &OSimplex) -> Result<OSimplex, Error> {
    let data = rank_data(x)?;
    if !data.dagger {
        return Err(Error::Precondition("simplex does not satisfy (†)"));
    }
    let l = data.level;
    let y = x.face(l)?;
    let bug = |what: &str| Error::Invariant(format!("child {y} of {x}: {what}"));
    if y.is_degenerate() {
        return Err(bug("degenerate"));
    }
    let yd = split(y.chain())?.ok_or_else(|| bug("lies in A"))?;
    if yd.rank + 1 != data.rank || yd.level != l || yd.dagger {
        return Err(bug("rank, level or (†) is wrong"));
    }
    if yd.check != data.check.face(l) || yd.bar != data.bar.face(l) {
        return Err(bug("split does not restrict"));
    }
    if y.chain().support_size() != x.chain().support_size() {
        return Err(bug("support size changed"));
    }
    Ok(y)
}

/// The parent `x̌σ_ℓ + x̄σ_(ℓ-1)` of a simplex failing (†), built as the
/// filler `u ∧_ℓ v` of two checked members.
pub fn parent(x: &OSimplex) -> Result<OSimplex, Error> {
    let data = rank_data(x)?;
    if data.dagger {
        return Err(Error::Precondition("simplex satisfies (†)"));
    }
    let l = data.level;
    let d = decompose_sum(&data.check, &data.bar, l)?;
    let bug = |what: &str| Error::Invariant(format!("parent of {x}: {what}"));
    check_membership(&d.u).map_err(|v| bug(&format!("u = {} is not a member: {v}", d.u)))?;
    check_membership(&d.v).map_err(|v| bug(&format!("v = {} is not a member: {v}", d.v)))?;
    let w = check_membership(&d.witness)
        .map_err(|v| bug(&format!("{} is not a member: {v}", d.witness)))?;
    if w.chain().face(l) != *x.chain() {
        return Err(bug("w∂_ℓ does not recover x"));
    }
    if w.is_degenerate() {
        return Err(bug("degenerate"));
    }
    let wd = split(w.chain())?.ok_or_else(|| bug("lies in A"))?;
    if wd.rank != data.rank + 1 || wd.level != l || !wd.dagger || wd.corank != data.corank {
        return Err(bug("rank, level, corank or (†) is wrong"));
    }
    if w.chain().support_size() != x.chain().support_size() {
        return Err(bug("support size changed"));
    }
    Ok(w)
}

/// How a face `w∂_k` (`k ≠ ℓ`) of a parent is already accounted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceTag {
    InA,
    /// Outside `A` and a parent itself.
    Dagger,
    /// Outside `A`, a child, with `(corank, level)` below that of `w`.
    Lower,
}

/// Tags every face `w∂_k` with `k ≠ ℓ`. Returns `(k, tag)` pairs; a face that
/// fits no tag is reported as an invariant violation.
pub fn classify_faces(w: &OSimplex) -> Result<Vec<(usize, FaceTag)>, Error> {
    let data = rank_data(w)?;
    if !data.dagger {
        return Err(Error::Precondition("simplex does not satisfy (†)"));
    }
    let mut out = Vec::new();
    for k in (0..=w.dim()).filter(|&k| k != data.level) {
        let face = w.chain().face(k);
        let tag = match split(&face)? {
            None => FaceTag::InA,
            Some(fd) if fd.dagger => FaceTag::Dagger,
            Some(fd) if fd.index().cmp(&data.index()) == Ordering::Less => FaceTag::Lower,
            Some(fd) => {
                return Err(Error::Invariant(format!(
                    "face {k} of {w} is a child with (corank, level) = {:?}, not below {:?}",
                    fd.index(),
                    data.index()
                )))
            }
        };
        out.push((k, tag));
    }
    Ok(out)
}

fn cone_chain(x: &Chain) -> Chain {
    let n = x.target() + 1;
    let raw = x
        .terms()
        .iter()
        .map(|&(a, c)| (a.push_value(n, n), c))
        .collect();
    Chain::from_unsorted(x.dim() + 1, n, raw)
}

/// `x ⋆ (n)`: appends the vertex `n` to every operator of `x ∈ O(m,n-1)`.
pub fn join_cone(x: &OSimplex) -> Result<OSimplex, Error> {
    let out = cone_chain(x.chain());
    let y = check_membership(&out)
        .map_err(|v| Error::Invariant(format!("cone {out} of {x} is not a member: {v}")))?;
    if !y.in_a() || y.is_marked() != x.is_marked() {
        return Err(Error::Invariant(format!(
            "cone {out} of {x} is outside A or changed marking"
        )));
    }
    Ok(y)
}

/// Outcome of [`verify_a_join_structure`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JoinReport {
    pub n: usize,
    pub max_dim: usize,
    /// Per dimension: nondegenerate simplices of `A` avoiding `n`.
    pub base: Vec<usize>,
    /// Per dimension: nondegenerate cones.
    pub cones: Vec<usize>,
    /// Per dimension: nondegenerate simplices of `A` in the oracle.
    pub total: Vec<usize>,
    /// Simplices that fit neither class, or whose class count disagrees.
    pub failures: Vec<alloc::string::String>,
}

impl JoinReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the nondegenerate simplices of `A ⊂ O(-,n)` are the
/// nondegenerate simplices of `O(-,n-1)`, their cones, and the point `(n)`,
/// with cones marked exactly when their bases are. `upper` enumerates
/// `O(-,n)` and `lower` enumerates `O(-,n-1)` at least as far.
pub fn verify_a_join_structure(upper: &Oracle, lower: &Oracle) -> Result<JoinReport, Error> {
    let n = upper.target();
    if n == 0 || lower.target() + 1 != n {
        return Err(Error::Precondition("oracles must enumerate O(-,n) and O(-,n-1)"));
    }
    let max_dim = upper.max_dim();
    if lower.max_dim() < max_dim {
        return Err(Error::Precondition("lower oracle is too shallow"));
    }
    let mut report = JoinReport {
        n,
        max_dim,
        ..JoinReport::default()
    };
    for m in 0..=max_dim {
        let (mut base, mut cones, mut total) = (0, 0, 0);
        for x in upper.nondegenerate(m).filter(|x| x.in_a()) {
            total += 1;
            let c = x.chain().support().next().expect("nonzero").preimage_of(n).len();
            if c == 0 {
                let y = x.chain().retarget(n - 1)?;
                if lower.contains(&y) {
                    base += 1;
                } else {
                    report.failures.push(format!("{x} avoids {n} but is not in O(-,{})", n - 1));
                }
                continue;
            }
            if c == m + 1 {
                if m == 0 {
                    cones += 1;
                } else {
                    report.failures.push(format!("{x} is a nondegenerate constant"));
                }
                continue;
            }
            let front = m - c;
            let mut raw = Vec::new();
            for &(a, coef) in x.chain().terms() {
                let vals: Vec<usize> = a.values()[..=front].iter().map(|&v| v as usize).collect();
                raw.push((coef, crate::operator::Operator::new(&vals, n - 1)?));
            }
            let y = Chain::new(front, n - 1, raw)?;
            let rebuilt = (1..c).fold(cone_chain(&y), |z, _| z.degeneracy(front + 1));
            match lower.get(&y) {
                Some(base_simplex) if rebuilt == *x.chain() => {
                    if base_simplex.is_marked() != x.is_marked() {
                        report.failures.push(format!("cone {x} and its base {y} differ in marking"));
                    } else {
                        cones += 1;
                    }
                }
                _ => report.failures.push(format!("{x} is not the cone of its front face {y}")),
            }
        }
        let expected = lower.nondegenerate(m).count()
            + if m == 0 { 1 } else { lower.nondegenerate(m - 1).count() };
        if expected != total {
            report
                .failures
                .push(format!("dimension {m}: A has {total} nondegenerate simplices, expected {expected}"));
        }
        report.base.push(base);
        report.cones.push(cones);
        report.total.push(total);
    }
    Ok(report)
}

/// `(m, c, ℓ)`: dimension, corank and level of a parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiltrationIndex {
    pub m: usize,
    pub corank: usize,
    pub level: usize,
}

/// Every parent of dimension at most `max_dim`, sorted by filtration index
/// and then by chain. The oracle must reach dimension `max_dim - 1`.
pub fn parents(oracle: &Oracle, max_dim: usize) -> Result<Vec<(FiltrationIndex, OSimplex)>, Error> {
    let mut out = Vec::new();
    for d in 0..max_dim.min(oracle.max_dim() + 1) {
        for x in oracle.nondegenerate(d).filter(|x| !x.in_a()) {
            let data = rank_data(x)?;
            if data.dagger {
                continue;
            }
            let w = parent(x)?;
            let idx = FiltrationIndex {
                m: d + 1,
                corank: data.corank,
                level: data.level,
            };
            out.push((idx, w));
        }
    }
    out.sort();
    Ok(out)
}

/// Generates a certificate for `Δ[n] -> O(-,n)` through dimension `max_dim`,
/// enumerating the needed oracles with the default coefficient bound.
pub fn generate_certificate(n: usize, max_dim: usize) -> Result<Certificate, Error> {
    let depth = max_dim.saturating_sub(1);
    let oracles = (0..=n)
        .map(|t| enumerate_o(depth, t, DEFAULT_BOUND))
        .collect::<Result<Vec<_>, _>>()?;
    generate_certificate_with(&oracles, max_dim)
}

/// As [`generate_certificate`] with caller-supplied oracles: `oracles[t]`
/// enumerates `O(-,t)` through at least dimension `max_dim - 1`, for every
/// `t ≤ n`.
pub fn generate_certificate_with(oracles: &[Oracle], max_dim: usize) -> Result<Certificate, Error> {
    let n = oracles
        .len()
        .checked_sub(1)
        .ok_or(Error::Precondition("no oracles supplied"))?;
    if max_dim < n {
        return Err(Error::Precondition("cutoff must be at least n"));
    }
    for (t, o) in oracles.iter().enumerate() {
        if o.target() != t || o.max_dim() + 1 < max_dim {
            return Err(Error::Precondition("oracle has the wrong target or depth"));
        }
    }
    generate_rec(oracles, n, max_dim)
}

fn generate_rec(oracles: &[Oracle], n: usize, max_dim: usize) -> Result<Certificate, Error> {
    if n == 0 {
        return Ok(Certificate {
            n,
            max_dim,
            steps: Vec::new(),
            join_order: JoinOrder::Interleaved,
        });
    }
    let lower = generate_rec(oracles, n - 1, max_dim)?;
    let units = lower_units(&lower, n)?;
    let stage_c = filling_steps(&oracles[n], max_dim)?;

    let assemble = |order: JoinOrder| {
        let mut steps = Vec::new();
        match order {
            JoinOrder::Interleaved => {
                for (original, cone) in &units {
                    steps.extend(original.iter().cloned());
                    steps.extend(cone.iter().flatten().cloned());
                }
            }
            JoinOrder::OriginalsFirst => {
                steps.extend(units.iter().flat_map(|(o, _)| o.iter().cloned()));
                steps.extend(units.iter().flat_map(|(_, c)| c.iter().flatten().cloned()));
            }
        }
        steps.extend(stage_c.iter().cloned());
        Certificate {
            n,
            max_dim,
            steps,
            join_order: order,
        }
    };
    let first = assemble(JoinOrder::Interleaved);
    let rejection = match replay_legality(&first) {
        Ok(()) => return Ok(first),
        Err(r) => r,
    };
    let second = assemble(JoinOrder::OriginalsFirst);
    if replay_legality(&second).is_ok() {
        return Ok(second);
    }
    Err(Error::Invariant(format!(
        "generated certificate for n = {n} does not replay: {rejection}"
    )))
}

type Unit = (Vec<CertStep>, Option<Vec<CertStep>>);

// Groups the lower certificate into horn-plus-thinness units, retargets each
// to [n], and pairs it with its cone when the cone fits under the cutoff.
fn lower_units(lower: &Certificate, n: usize) -> Result<Vec<Unit>, Error> {
    let mut units: Vec<Unit> = Vec::new();
    for step in &lower.steps {
        let moved = CertStep {
            w: step.w.retarget(n)?,
            ..step.clone()
        };
        let cone = (step.m < lower.max_dim).then(|| CertStep {
            m: step.m + 1,
            w: cone_chain(&step.w),
            ..step.clone()
        });
        match step.kind {
            StepKind::Horn => units.push((alloc::vec![moved], cone.map(|c| alloc::vec![c]))),
            StepKind::Thin => {
                let last = units
                    .last_mut()
                    .ok_or_else(|| Error::Invariant("certificate starts with a thinness step".into()))?;
                last.0.push(moved);
                if let (Some(cs), Some(c)) = (last.1.as_mut(), cone) {
                    cs.push(c);
                }
            }
        }
    }
    Ok(units)
}

fn filling_steps(oracle: &Oracle, max_dim: usize) -> Result<Vec<CertStep>, Error> {
    let mut steps = Vec::new();
    for (idx, w) in parents(oracle, max_dim)? {
        if !w.is_marked() {
            return Err(Error::Invariant(format!("parent {w} is not marked")));
        }
        classify_faces(&w)?;
        let l = idx.level;
        steps.push(CertStep {
            kind: StepKind::Horn,
            m: idx.m,
            k: l,
            w: w.chain().clone(),
        });
        if is_marked_chain(&w.chain().face(l)) {
            if !is_marked_chain(&w.chain().face(l - 1)) || !is_marked_chain(&w.chain().face(l + 1)) {
                return Err(Error::Invariant(format!(
                    "parent {w} has a marked child but unmarked neighbouring faces"
                )));
            }
            steps.push(CertStep {
                kind: StepKind::Thin,
                m: idx.m,
                k: l,
                w: w.chain().clone(),
            });
        }
    }
    Ok(steps)
}
