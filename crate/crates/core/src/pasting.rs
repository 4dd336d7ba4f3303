//! Pasting `x ∘_k y` and its witness `x ∧_k y` on chains.
//!
//! For `x, y ∈ ZΔ([m],[n])` with `1 ≤ k ≤ m` and `x∂_{k-1} = y∂_k`:
//!
//! ```text
//! x ∧_k y = xσ_k − x∂_{k-1}σ_{k-1}σ_{k-1} + yσ_{k-1}
//! x ∘_k y = x − x∂_{k-1}σ_{k-1} + y
//! ```
//!
//! The shared face can be read from either side, which gives a second form of
//! each formula; debug builds evaluate both and compare. Index `k` is chosen
//! so that the `k`-th face of `x ∧_k y` is the pasting.

use crate::chain::Chain;
use crate::error::Error;

fn check_composable(x: &Chain, y: &Chain, k: usize) -> Result<Chain, Error> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    if x.target() != y.target() {
        return Err(Error::DimensionMismatch {
            expected: x.target(),
            found: y.target(),
        });
    }
    let m = x.dim();
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { index: k, bound: m });
    }
    let left = x.face(k - 1);
    let right = y.face(k);
    if left != right {
        return Err(Error::NotComposable { left, right });
    }
    Ok(left)
}

/// `x ∘_k y`.
pub fn paste(x: &Chain, y: &Chain, k: usize) -> Result<Chain, Error> {
    let shared = check_composable(x, y, k)?;
    let out = x
        .sub(&shared.degeneracy(k - 1))
        .and_then(|c| c.add(y))
        .expect("shapes agree");
    debug_assert_eq!(
        out,
        x.sub(&y.face(k).degeneracy(k - 1)).unwrap().add(y).unwrap(),
        "the two pasting formulas disagree"
    );
    Ok(out)
}

/// `x ∧_k y ∈ ZΔ([m+1],[n])`.
pub fn fill(x: &Chain, y: &Chain, k: usize) -> Result<Chain, Error> {
    let shared = check_composable(x, y, k)?;
    let out = fill_from_shared(x, y, &shared, k);
    debug_assert_eq!(
        out,
        fill_from_shared(x, y, &y.face(k), k),
        "the two filler formulas disagree"
    );
    Ok(out)
}

fn fill_from_shared(x: &Chain, y: &Chain, shared: &Chain, k: usize) -> Chain {
    x.degeneracy(k)
        .sub(&shared.degeneracy(k - 1).degeneracy(k - 1))
        .and_then(|c| c.add(&y.degeneracy(k - 1)))
        .expect("shapes agree")
}

/// Whether every operator in the support is degenerate at `k-1` or at `k`.
/// Exactly then `x = (x∂_{k+1}) ∧_k (x∂_{k-1})`; both sides are computed and
/// compared in debug builds.
pub fn is_filler_shaped(x: &Chain, k: usize) -> Result<bool, Error> {
    let m = x.dim();
    if k == 0 || k + 1 > m {
        return Err(Error::IndexOutOfRange { index: k, bound: m });
    }
    let shaped = x
        .support()
        .all(|a| a.is_degenerate_at(k - 1) || a.is_degenerate_at(k));
    debug_assert_eq!(
        shaped,
        fill(&x.face(k + 1), &x.face(k - 1), k).expect("simplicial identity") == *x,
        "support test and reconstruction disagree for {x} at {k}"
    );
    Ok(shaped)
}

/// The pasting decomposition of a sum `y + z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub u: Chain,
    pub v: Chain,
    /// `u ∧_k v`, equal to `yσ_k + zσ_{k-1}`.
    pub witness: Chain,
}

/// Rewrites `y + z` as `u ∘_k v` with `u = y + z∂_kσ_{k-1}` and
/// `v = y∂_{k-1}σ_{k-1} + z`. The three defining identities are checked and
/// a failure is reported as an invariant violation.
pub fn decompose_sum(y: &Chain, z: &Chain, k: usize) -> Result<Decomposition, Error> {
    if y.dim() != z.dim() || y.target() != z.target() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            found: z.dim(),
        });
    }
    let m = y.dim();
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { index: k, bound: m });
    }
    let u = y.add(&z.face(k).degeneracy(k - 1))?;
    let v = y.face(k - 1).degeneracy(k - 1).add(z)?;
    let witness = fill(&u, &v, k)
        .map_err(|e| Error::Invariant(alloc::format!("decomposition not composable: {e}")))?;
    let expected = y.degeneracy(k).add(&z.degeneracy(k - 1))?;
    if witness != expected {
        return Err(Error::Invariant(alloc::format!(
            "u ∧ v = {witness} but yσ_k + zσ_(k-1) = {expected}"
        )));
    }
    let pasted = paste(&u, &v, k)?;
    let sum = y.add(z)?;
    if pasted != sum {
        return Err(Error::Invariant(alloc::format!(
            "u ∘ v = {pasted} but y + z = {sum}"
        )));
    }
    Ok(Decomposition { u, v, witness })
}
