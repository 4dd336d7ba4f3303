//! Simplicial operators: the monotone maps `[m] -> [n]` that make up the
//! simplex category.
//!
//! An [`Operator`] is stored as its value tuple `(α(0), ..., α(m))` together
//! with its target `n`. Composition follows the postfix convention used for
//! simplicial sets: for a simplex `x` and an operator `β`, `xβ` is the action
//! of `β` by precomposition, so `α.then_apply(β)` below means `α ∘ β`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::error::Error;

/// Largest supported domain length (`m + 1`).
pub const MAX_LEN: usize = 16;

/// A weakly increasing map `[m] -> [n]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Operator {
    len: u8,
    target: u8,
    values: [u8; MAX_LEN],
}

impl Operator {
    /// Builds an operator from its value tuple, validating monotonicity and range.
    pub fn new(values: &[usize], target: usize) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyOperator);
        }
        if values.len() > MAX_LEN || target > u8::MAX as usize {
            return Err(Error::TooLarge);
        }
        let mut out = [0u8; MAX_LEN];
        let mut prev = 0;
        for (i, &v) in values.iter().enumerate() {
            if v > target {
                return Err(Error::ValueOutOfRange { value: v, target });
            }
            if v < prev {
                return Err(Error::NotMonotone);
            }
            prev = v;
            out[i] = v as u8;
        }
        Ok(Operator {
            len: values.len() as u8,
            target: target as u8,
            values: out,
        })
    }

    // Callers guarantee monotonicity and range.
    pub(crate) fn from_raw(values: &[u8], target: usize) -> Self {
        debug_assert!(!values.is_empty() && values.len() <= MAX_LEN);
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(values.iter().all(|&v| (v as usize) <= target));
        let mut out = [0u8; MAX_LEN];
        out[..values.len()].copy_from_slice(values);
        Operator {
            len: values.len() as u8,
            target: target as u8,
            values: out,
        }
    }

    pub fn identity(n: usize) -> Result<Self, Error> {
        let values: Vec<usize> = (0..=n).collect();
        Operator::new(&values, n)
    }

    /// The constant operator `[m] -> [n]` with value `v`.
    pub fn constant(m: usize, v: usize, n: usize) -> Result<Self, Error> {
        let values = alloc::vec![v; m + 1];
        Operator::new(&values, n)
    }

    /// The source dimension `m`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    /// The target dimension `n`.
    #[inline]
    pub fn target(&self) -> usize {
        self.target as usize
    }

    #[inline]
    pub fn values(&self) -> &[u8] {
        &self.values[..self.len as usize]
    }

    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.values()[i] as usize
    }

    pub fn first(&self) -> usize {
        self.values[0] as usize
    }

    pub fn last(&self) -> usize {
        self.values[self.len as usize - 1] as usize
    }

    /// `self ∘ inner`, i.e. `i ↦ self(inner(i))`.
    pub fn compose(&self, inner: &Operator) -> Result<Operator, Error> {
        if inner.target() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: inner.target(),
            });
        }
        let mut out = [0u8; MAX_LEN];
        for (o, &i) in out.iter_mut().zip(inner.values()) {
            *o = self.values[i as usize];
        }
        Ok(Operator {
            len: inner.len,
            target: self.target,
            values: out,
        })
    }

    /// The coface `δ_k : [m-1] -> [m]`, which skips `k`.
    pub fn face_map(k: usize, m: usize) -> Result<Operator, Error> {
        if m == 0 || k > m {
            return Err(Error::IndexOutOfRange { index: k, bound: m });
        }
        let values: Vec<usize> = (0..=m).filter(|&i| i != k).collect();
        Operator::new(&values, m)
    }

    /// The codegeneracy `σ_k : [m+1] -> [m]`, which repeats `k`.
    pub fn degeneracy_map(k: usize, m: usize) -> Result<Operator, Error> {
        if k > m {
            return Err(Error::IndexOutOfRange { index: k, bound: m });
        }
        let values: Vec<usize> = (0..=m + 1).map(|i| if i <= k { i } else { i - 1 }).collect();
        Operator::new(&values, m)
    }

    /// `self ∘ δ_k`: the value tuple with position `k` removed.
    pub fn drop_index(&self, k: usize) -> Operator {
        let len = self.len as usize;
        assert!(len >= 2 && k < len, "face index {k} out of range");
        let mut out = [0u8; MAX_LEN];
        let mut j = 0;
        for i in 0..len {
            if i != k {
                out[j] = self.values[i];
                j += 1;
            }
        }
        Operator {
            len: self.len - 1,
            target: self.target,
            values: out,
        }
    }

    /// `self ∘ σ_k`: the value tuple with position `k` repeated.
    pub fn repeat_index(&self, k: usize) -> Operator {
        let len = self.len as usize;
        assert!(k < len && len < MAX_LEN, "degeneracy index {k} out of range");
        let mut out = [0u8; MAX_LEN];
        out[..=k].copy_from_slice(&self.values[..=k]);
        out[k + 1..=len].copy_from_slice(&self.values[k..len]);
        Operator {
            len: self.len + 1,
            target: self.target,
            values: out,
        }
    }

    /// Appends `value` as a new last entry and retargets to `target`.
    pub(crate) fn push_value(&self, value: usize, target: usize) -> Operator {
        let len = self.len as usize;
        assert!(len < MAX_LEN && value >= self.last() && value <= target);
        let mut out = self.values;
        out[len] = value as u8;
        Operator {
            len: self.len + 1,
            target: target as u8,
            values: out,
        }
    }

    /// The same value tuple regarded as a map into `[target]`.
    pub fn retarget(&self, target: usize) -> Result<Operator, Error> {
        if self.last() > target {
            return Err(Error::ValueOutOfRange {
                value: self.last(),
                target,
            });
        }
        Ok(Operator {
            target: target as u8,
            ..*self
        })
    }

    pub fn is_injective(&self) -> bool {
        self.values().windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.first() == 0
            && self.last() == self.target()
            && self.values().windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `α(k) = α(k+1)`.
    pub fn is_degenerate_at(&self, k: usize) -> bool {
        k + 1 < self.len as usize && self.values[k] == self.values[k + 1]
    }

    pub fn is_degenerate(&self) -> bool {
        !self.is_injective()
    }

    /// The image as an increasing list of values.
    pub fn image(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.values().iter().map(|&v| v as usize).collect();
        out.dedup();
        out
    }

    /// `α⁻¹(v)`, which is always a contiguous range of positions.
    pub fn preimage_of(&self, v: usize) -> Range<usize> {
        let vals = self.values();
        let start = vals.partition_point(|&x| (x as usize) < v);
        let end = vals.partition_point(|&x| (x as usize) <= v);
        start..end
    }

    /// Epi-mono factorization `self = mono ∘ epi`.
    pub fn factor(&self) -> (Operator, Operator) {
        let image = self.image();
        let mono: Vec<usize> = image.clone();
        let epi: Vec<usize> = self
            .values()
            .iter()
            .map(|&v| image.binary_search(&(v as usize)).unwrap())
            .collect();
        let k = image.len() - 1;
        (
            Operator::new(&epi, k).expect("epi part is monotone"),
            Operator::new(&mono, self.target()).expect("mono part is monotone"),
        )
    }

    /// All operators `[m] -> [n]` in lexicographic order.
    pub fn enumerate(m: usize, n: usize, injective_only: bool) -> Vec<Operator> {
        let mut out = Vec::new();
        if m + 1 > MAX_LEN || n > u8::MAX as usize {
            return out;
        }
        let mut cur = [0u8; MAX_LEN];
        fn rec(
            pos: usize,
            m: usize,
            n: usize,
            injective: bool,
            cur: &mut [u8; MAX_LEN],
            out: &mut Vec<Operator>,
        ) {
            if pos > m {
                out.push(Operator::from_raw(&cur[..=m], n));
                return;
            }
            let lo = if pos == 0 {
                0
            } else if injective {
                cur[pos - 1] as usize + 1
            } else {
                cur[pos - 1] as usize
            };
            // Leave room for the remaining positions when strictly increasing.
            let hi = if injective { n.saturating_sub(m - pos) } else { n };
            if injective && n < m - pos {
                return;
            }
            for v in lo..=hi {
                cur[pos] = v as u8;
                rec(pos + 1, m, n, injective, cur, out);
            }
        }
        rec(0, m, n, injective_only, &mut cur, &mut out);
        out
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Binomial coefficient, used for operator counts.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn op(v: &[usize], n: usize) -> Operator {
        Operator::new(v, n).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(op(&[0, 2], 2).compose(&op(&[1], 1)).unwrap(), op(&[2], 2));
        let id3 = Operator::identity(3).unwrap();
        assert_eq!(id3.compose(&op(&[0, 1, 3], 3)).unwrap(), op(&[0, 1, 3], 3));
        // (0,2) then σ₀ = (0,0,1)
        assert_eq!(
            op(&[0, 0, 1], 1).compose(&op(&[0, 2], 2)).unwrap(),
            op(&[0, 1], 1)
        );
        assert!(op(&[0, 2], 2).compose(&op(&[0, 1], 2)).is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(Operator::face_map(0, 1).unwrap(), op(&[1], 1));
        assert_eq!(Operator::degeneracy_map(0, 1).unwrap(), op(&[0, 0, 1], 1));
        assert_eq!(Operator::face_map(2, 3).unwrap(), op(&[0, 1, 3], 3));
        assert!(Operator::face_map(3, 2).is_err());
        assert!(Operator::degeneracy_map(2, 1).is_err());
        assert!(Operator::face_map(0, 0).is_err());
    }

    #[test]
    fn predicates() {
        let a = op(&[0, 1, 1, 3], 3);
        assert!(a.is_degenerate_at(1));
        assert!(!a.is_degenerate_at(0));
        assert!(!a.is_degenerate_at(3));
        assert_eq!(op(&[1, 2], 2).preimage_of(2), 1..2);
        assert_eq!(op(&[1, 2], 2).preimage_of(0), 0..0);
        assert!(!op(&[1, 1, 2], 2).is_injective());
        assert!(op(&[0, 1, 1, 2], 2).is_surjective());
        assert!(!op(&[0, 2], 2).is_surjective());
        assert_eq!(a.image(), vec![0, 1, 3]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            Operator::enumerate(0, 2, false),
            vec![op(&[0], 2), op(&[1], 2), op(&[2], 2)]
        );
        assert_eq!(Operator::enumerate(1, 1, true), vec![op(&[0, 1], 1)]);
        assert_eq!(Operator::enumerate(1, 2, false).len(), 6);
        for m in 0..5 {
            for n in 0..5 {
                let all = Operator::enumerate(m, n, false);
                assert_eq!(all.len(), binomial(n + m + 1, m + 1));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(
                    Operator::enumerate(m, n, true).len(),
                    binomial(n + 1, m + 1)
                );
            }
        }
    }

    #[test]
    fn invalid_operators_rejected() {
        assert_eq!(Operator::new(&[1, 0], 2), Err(Error::NotMonotone));
        assert!(matches!(
            Operator::new(&[0, 3], 2),
            Err(Error::ValueOutOfRange { .. })
        ));
        assert_eq!(Operator::new(&[], 2), Err(Error::EmptyOperator));
    }

    #[test]
    fn drop_and_repeat_match_generators() {
        for m in 1..5 {
            for a in Operator::enumerate(m, 3, false) {
                for k in 0..=m {
                    let d = Operator::face_map(k, m).unwrap();
                    assert_eq!(a.drop_index(k), a.compose(&d).unwrap());
                    let s = Operator::degeneracy_map(k, m).unwrap();
                    assert_eq!(a.repeat_index(k), a.compose(&s).unwrap());
                }
            }
        }
    }
}
