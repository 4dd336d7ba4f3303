//! Replay checker for anodyne certificates.
//!
//! A certificate is a list of inner horn fillings and thinness extensions.
//! Replay starts from `Δ[n]` and mutates a face-closed set of nondegenerate
//! simplices of `O(-,n)`, one legal step at a time. Marking is never stored:
//! every subset here is regular, so a simplex is marked exactly when it is
//! marked in `O(-,n)`, which is read off its support. The checker knows
//! nothing about ranks or parents.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::Chain;
use crate::enumeration::Oracle;
use crate::operator::Operator;
use crate::oriental::{check_membership, is_marked_chain};
use crate::pasting::fill;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    /// Fill the inner horn `Λ^k[m] -> Δ^k[m]` picked out by `w`.
    Horn,
    /// Mark the face `w∂_k` of a just-filled horn.
    Thin,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Horn => "horn",
            StepKind::Thin => "thin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CertStep {
    pub kind: StepKind,
    pub m: usize,
    pub k: usize,
    pub w: Chain,
}

impl fmt::Display for CertStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {}, {})", self.kind.name(), self.m, self.k, self.w)
    }
}

/// How cone steps were ordered relative to the steps they were coned from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinOrder {
    /// Each step is followed directly by its cone.
    Interleaved,
    /// All transported steps first, then all cones.
    OriginalsFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub max_dim: usize,
    pub steps: Vec<CertStep>,
    pub join_order: JoinOrder,
}

/// The legality clause a rejected step violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    HornIndexNotInner,
    DimensionMismatch,
    DimensionExceedsCutoff,
    NotMember,
    SimplexDegenerate,
    InteriorNotMarked,
    SimplexAlreadyPresent,
    MissingFaceAlreadyPresent,
    MissingFaceDegenerate,
    FaceNotPresent,
    HornMarkingViolated,
    ThinnessExtensionMissing,
    UnexpectedThinnessExtension,
    ThinFacesNotMarked,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::HornIndexNotInner => "horn index not inner",
            Clause::DimensionMismatch => "dimension mismatch",
            Clause::DimensionExceedsCutoff => "dimension exceeds cutoff",
            Clause::NotMember => "not a member",
            Clause::SimplexDegenerate => "simplex degenerate",
            Clause::InteriorNotMarked => "interior not marked",
            Clause::SimplexAlreadyPresent => "simplex already present",
            Clause::MissingFaceAlreadyPresent => "missing face already present",
            Clause::MissingFaceDegenerate => "missing face degenerate",
            Clause::FaceNotPresent => "face not present",
            Clause::HornMarkingViolated => "horn marking violated",
            Clause::ThinnessExtensionMissing => "thinness extension missing",
            Clause::UnexpectedThinnessExtension => "unexpected thinness extension",
            Clause::ThinFacesNotMarked => "thin faces not marked",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why replay stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// Position of the offending step; equal to the number of steps when the
    /// certificate ends with an obligation outstanding.
    pub index: usize,
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}: {}", self.index, self.clause, self.detail)
    }
}

/// Face-closed set of nondegenerate simplices of `O(-,n)` up to dimension
/// `max_dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexState {
    n: usize,
    max_dim: usize,
    levels: Vec<BTreeSet<Chain>>,
    pending: Option<CertStep>,
}

impl ComplexState {
    /// `Δ[n]`: the injective operators into `[n]`.
    pub fn simplex(n: usize, max_dim: usize) -> Self {
        let mut levels = alloc::vec![BTreeSet::new(); max_dim + 1];
        for (p, level) in levels.iter_mut().enumerate().take(n + 1) {
            for op in Operator::enumerate(p, n, true) {
                level.insert(Chain::from_operator(op));
            }
        }
        ComplexState {
            n,
            max_dim,
            levels,
            pending: None,
        }
    }

    pub fn target(&self) -> usize {
        self.n
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn level(&self, m: usize) -> &BTreeSet<Chain> {
        &self.levels[m]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(BTreeSet::len).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the nondegenerate core of `x` is present.
    pub fn contains(&self, x: &Chain) -> bool {
        let core = x.nondegenerate_core();
        core.dim() <= self.max_dim && self.levels[core.dim()].contains(&core)
    }

    /// Applies one step, leaving the state untouched on rejection.
    pub fn replay_step(&mut self, step: &CertStep) -> Result<(), (Clause, String)> {
        match step.kind {
            StepKind::Horn => {
                if let Some(p) = &self.pending {
                    return Err((
                        Clause::ThinnessExtensionMissing,
                        format!("{p} has a marked missing face but is not followed by its thinness step"),
                    ));
                }
                let marked_face = self.check_horn(step)?;
                let face = step.w.face(step.k);
                self.levels[step.m].insert(step.w.clone());
                self.levels[step.m - 1].insert(face);
                if marked_face {
                    self.pending = Some(step.clone());
                }
                Ok(())
            }
            StepKind::Thin => {
                let expected = self.pending.as_ref().map(|p| CertStep {
                    kind: StepKind::Thin,
                    ..p.clone()
                });
                if expected.as_ref() != Some(step) {
                    return Err((
                        Clause::UnexpectedThinnessExtension,
                        format!("{step} does not follow a horn with a marked missing face"),
                    ));
                }
                for i in [step.k - 1, step.k + 1] {
                    if !is_marked_chain(&step.w.face(i)) {
                        return Err((
                            Clause::ThinFacesNotMarked,
                            format!("face {i} of {} is not marked", step.w),
                        ));
                    }
                }
                self.pending = None;
                Ok(())
            }
        }
    }

    // Returns whether the missing face is marked.
    fn check_horn(&self, step: &CertStep) -> Result<bool, (Clause, String)> {
        let (m, k, w) = (step.m, step.k, &step.w);
        if w.dim() != m || w.target() != self.n {
            return Err((
                Clause::DimensionMismatch,
                format!("{w} is not an {m}-simplex of O(-,{})", self.n),
            ));
        }
        if m > self.max_dim {
            return Err((
                Clause::DimensionExceedsCutoff,
                format!("dimension {m} exceeds {}", self.max_dim),
            ));
        }
        if k == 0 || k >= m {
            return Err((Clause::HornIndexNotInner, format!("k = {k}, m = {m}")));
        }
        if let Err(v) = check_membership(w) {
            return Err((Clause::NotMember, format!("{w}: {v}")));
        }
        if w.is_degenerate() {
            return Err((Clause::SimplexDegenerate, format!("{w}")));
        }
        if !is_marked_chain(w) {
            return Err((Clause::InteriorNotMarked, format!("{w}")));
        }
        if self.levels[m].contains(w) {
            return Err((Clause::SimplexAlreadyPresent, format!("{w}")));
        }
        let missing = w.face(k);
        if self.contains(&missing) {
            return Err((
                Clause::MissingFaceAlreadyPresent,
                format!("face {k} of {w} is {missing}"),
            ));
        }
        if missing.is_degenerate() {
            return Err((
                Clause::MissingFaceDegenerate,
                format!("face {k} of {w} is {missing}"),
            ));
        }
        for i in (0..=m).filter(|&i| i != k) {
            let face = w.face(i);
            if !self.contains(&face) {
                return Err((
                    Clause::FaceNotPresent,
                    format!("face {i} of {w} is {face}"),
                ));
            }
        }
        // Every restriction of w whose image contains k-1, k and k+1 must be
        // marked, so the horn inclusion maps into w marking-preservingly.
        for p in 2..m {
            for alpha in Operator::enumerate(p, m, true) {
                let image = alpha.values();
                let covers = [k - 1, k, k + 1]
                    .iter()
                    .all(|&j| image.contains(&(j as u8)));
                if covers {
                    let x = w.act(&alpha).expect("alpha targets [m]");
                    if !is_marked_chain(&x) {
                        return Err((
                            Clause::HornMarkingViolated,
                            format!("{w} restricted along {alpha} is {x}, which is not marked"),
                        ));
                    }
                }
            }
        }
        Ok(is_marked_chain(&missing))
    }

    /// Reports an outstanding thinness obligation.
    pub fn finish(&self) -> Result<(), (Clause, String)> {
        match &self.pending {
            Some(p) => Err((
                Clause::ThinnessExtensionMissing,
                format!("certificate ends after {p}"),
            )),
            None => Ok(()),
        }
    }
}

/// Result of comparing a replayed state with an oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub n: usize,
    pub max_dim: usize,
    pub steps: usize,
    pub horn_fills: usize,
    pub thin_extensions: usize,
    /// Nondegenerate simplices per dimension in the final state.
    pub counts: Vec<usize>,
    /// Nondegenerate members per dimension according to the oracle.
    pub oracle_counts: Vec<usize>,
    /// The final state equals the oracle in dimensions `0..=verified_through`.
    pub verified_through: Option<usize>,
    /// Oracle simplices missing from the state, and state simplices the
    /// oracle lacks, at the first dimension where they differ.
    pub missing: Vec<Chain>,
    pub extra: Vec<Chain>,
}

impl ReplayReport {
    /// Complete through dimension `max_dim - 1`.
    pub fn complete(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.verified_through == self.max_dim.checked_sub(1)
    }
}

fn run(cert: &Certificate) -> Result<ComplexState, Rejection> {
    let mut state = ComplexState::simplex(cert.n, cert.max_dim);
    for (index, step) in cert.steps.iter().enumerate() {
        state
            .replay_step(step)
            .map_err(|(clause, detail)| Rejection {
                index,
                clause,
                detail,
            })?;
    }
    state.finish().map_err(|(clause, detail)| Rejection {
        index: cert.steps.len(),
        clause,
        detail,
    })?;
    Ok(state)
}

/// Replays without an oracle comparison.
pub fn replay_legality(cert: &Certificate) -> Result<(), Rejection> {
    run(cert).map(|_| ())
}

/// Replays `cert` and compares the final state with `oracle` through
/// dimension `max_dim - 1`. The oracle must enumerate `O(-,n)` that far.
pub fn replay(cert: &Certificate, oracle: &Oracle) -> Result<(ComplexState, ReplayReport), Rejection> {
    let state = run(cert)?;
    let top = cert.max_dim.checked_sub(1).map(|t| t.min(oracle.max_dim()));
    let mut report = ReplayReport {
        n: cert.n,
        max_dim: cert.max_dim,
        steps: cert.steps.len(),
        horn_fills: cert.steps.iter().filter(|s| s.kind == StepKind::Horn).count(),
        thin_extensions: cert.steps.iter().filter(|s| s.kind == StepKind::Thin).count(),
        counts: state.counts(),
        oracle_counts: Vec::new(),
        verified_through: None,
        missing: Vec::new(),
        extra: Vec::new(),
    };
    if oracle.target() != cert.n {
        report.extra = state.levels.iter().flatten().cloned().collect();
        return Ok((state, report));
    }
    if let Some(top) = top {
        for m in 0..=top {
            let expected: BTreeSet<Chain> = oracle.nondegenerate(m).map(|x| x.chain().clone()).collect();
            report.oracle_counts.push(expected.len());
            let got = &state.levels[m];
            if &expected != got {
                report.missing = expected.difference(got).cloned().collect();
                report.extra = got.difference(&expected).cloned().collect();
                break;
            }
            report.verified_through = Some(m);
        }
    }
    Ok((state, report))
}

/// Outcome of [`unique_filler_test`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillerVerdict {
    pub expected: Chain,
    pub witnesses: Vec<Chain>,
}

impl FillerVerdict {
    pub fn unique(&self) -> bool {
        self.witnesses.len() == 1 && self.witnesses[0] == self.expected
    }
}

/// Searches the oracle's `(m+1)`-simplices for marked `z` with
/// `z∂_(k-1) = y`, `z∂_(k+1) = x`, and every restriction along an injective
/// `α ≠ id` covering `{k-1, k, k+1}` marked.
pub fn unique_filler_test(
    x: &Chain,
    y: &Chain,
    k: usize,
    oracle: &Oracle,
) -> Result<FillerVerdict, crate::error::Error> {
    let expected = fill(x, y, k)?;
    let m = x.dim() + 1;
    if m > oracle.max_dim() {
        return Err(crate::error::Error::Precondition("oracle does not reach dimension m+1"));
    }
    let admissible = |z: &Chain| {
        if !is_marked_chain(z) || z.face(k - 1) != *y || z.face(k + 1) != *x {
            return false;
        }
        (2..m).all(|p| {
            Operator::enumerate(p, m, true).iter().all(|a| {
                let covers = [k - 1, k, k + 1].iter().all(|&j| a.values().contains(&(j as u8)));
                !covers || is_marked_chain(&z.act(a).expect("a targets [m]"))
            })
        })
    };
    let witnesses = oracle
        .members(m)
        .iter()
        .map(|s| s.chain())
        .filter(|z| admissible(z))
        .cloned()
        .collect();
    Ok(FillerVerdict {
        expected,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anodyne::generate_certificate;
    use crate::chain::parse_chain;
    use crate::enumeration::enumerate_o;

    fn c(text: &str, n: usize) -> Chain {
        parse_chain(text, n).unwrap()
    }

    fn horn(m: usize, k: usize, w: Chain) -> CertStep {
        CertStep {
            kind: StepKind::Horn,
            m,
            k,
            w,
        }
    }

    fn a_state(n: usize, max_dim: usize) -> ComplexState {
        let oracle = enumerate_o(max_dim, n, 2).unwrap();
        let mut state = ComplexState::simplex(n, max_dim);
        for m in 0..=max_dim {
            for x in oracle.nondegenerate(m).filter(|x| x.in_a()) {
                state.levels[m].insert(x.chain().clone());
            }
        }
        state
    }

    #[test]
    fn first_horn() {
        let mut state = a_state(2, 2);
        let w = c("(0,1,1)-(1,1,1)+(1,1,2)", 2);
        state.replay_step(&horn(2, 1, w.clone())).unwrap();
        assert!(state.level(2).contains(&w));
        assert!(state.level(1).contains(&c("(0,1)-(1,1)+(1,2)", 2)));
        assert_eq!(
            state.replay_step(&horn(2, 1, w)).unwrap_err().0,
            Clause::SimplexAlreadyPresent
        );
    }

    #[test]
    fn rejections() {
        let w = c("(0,1,1)-(1,1,1)+(1,1,2)", 2);
        let mut bare = ComplexState::simplex(2, 2);
        bare.levels[1].remove(&c("(1,2)", 2));
        assert_eq!(
            bare.replay_step(&horn(2, 1, w.clone())).unwrap_err().0,
            Clause::FaceNotPresent
        );
        let mut state = ComplexState::simplex(2, 2);
        assert_eq!(
            state.replay_step(&horn(2, 1, c("(0,1,2)", 2))).unwrap_err().0,
            Clause::InteriorNotMarked
        );
        assert_eq!(
            state.replay_step(&horn(2, 0, w.clone())).unwrap_err().0,
            Clause::HornIndexNotInner
        );
        assert_eq!(
            state.replay_step(&horn(3, 1, w)).unwrap_err().0,
            Clause::DimensionMismatch
        );
    }

    #[test]
    fn small_replays() {
        for (n, max_dim) in [(0, 3), (1, 3), (2, 3)] {
            let cert = generate_certificate(n, max_dim).unwrap();
            let oracle = enumerate_o(max_dim - 1, n, 2).unwrap();
            let (_, report) = replay(&cert, &oracle).unwrap();
            assert!(report.complete(), "{n} {max_dim}: {report:?}");
        }
    }

    #[test]
    fn filler_uniqueness() {
        let oracle = enumerate_o(2, 2, 2).unwrap();
        let v = unique_filler_test(&c("(0,1)", 2), &c("(1,2)", 2), 1, &oracle).unwrap();
        assert!(v.unique());
        assert_eq!(v.witnesses[0], c("(0,1,1)-(1,1,1)+(1,1,2)", 2));
        let v = unique_filler_test(&c("(1,1)", 2), &c("(1,1)", 2), 1, &oracle).unwrap();
        assert!(v.unique());
        assert_eq!(v.expected, c("(1,1,1)", 2));
    }
}
