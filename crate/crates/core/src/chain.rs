//! Integer linear combinations of simplicial operators.
//!
//! A [`Chain`] is an element of the free abelian group on `Δ([m],[n])`. It is
//! kept in canonical form: terms sorted by operator, no zero coefficients. Two
//! chains are equal exactly when their canonical forms are.
//!
//! Coefficients are `i64`. Every coefficient operation is checked and an
//! overflow aborts with a panic rather than wrapping.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::operator::Operator;

#[inline]
pub(crate) fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("chain coefficient overflow")
}

#[inline]
pub(crate) fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("chain coefficient overflow")
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    m: usize,
    n: usize,
    terms: Vec<(Operator, i64)>,
}

impl Chain {
    /// Builds a chain from `(coefficient, operator)` pairs. Repeated
    /// operators are summed and zero terms dropped.
    pub fn new<I>(m: usize, n: usize, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (i64, Operator)>,
    {
        let mut raw = Vec::new();
        for (c, op) in terms {
            if op.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: op.dim(),
                });
            }
            if op.target() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: op.target(),
                });
            }
            raw.push((op, c));
        }
        Ok(Self::from_unsorted(m, n, raw))
    }

    pub(crate) fn from_unsorted(m: usize, n: usize, mut raw: Vec<(Operator, i64)>) -> Self {
        raw.sort_unstable_by_key(|t| t.0);
        let mut terms: Vec<(Operator, i64)> = Vec::with_capacity(raw.len());
        for (op, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == op => last.1 = checked_add(last.1, c),
                _ => {
                    if let Some(last) = terms.last() {
                        if last.1 == 0 {
                            terms.pop();
                        }
                    }
                    terms.push((op, c));
                }
            }
        }
        if let Some(last) = terms.last() {
            if last.1 == 0 {
                terms.pop();
            }
        }
        Chain { m, n, terms }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Chain {
            m,
            n,
            terms: Vec::new(),
        }
    }

    /// The chain `1·α`.
    pub fn from_operator(op: Operator) -> Self {
        Chain {
            m: op.dim(),
            n: op.target(),
            terms: alloc::vec![(op, 1)],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn target(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn terms(&self) -> &[(Operator, i64)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Operator> + '_ {
        self.terms.iter().map(|(op, _)| op)
    }

    /// Number of operators in the support.
    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, op: &Operator) -> i64 {
        match self.terms.binary_search_by(|t| t.0.cmp(op)) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.terms.iter().fold(0, |acc, t| checked_add(acc, t.1))
    }

    pub fn max_abs_coefficient(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| t.1.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    fn check_same_shape(&self, other: &Chain) -> Result<(), Error> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain) -> Result<Chain, Error> {
        self.check_same_shape(other)?;
        Ok(self.merge(other, 1))
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain, Error> {
        self.check_same_shape(other)?;
        Ok(self.merge(other, -1))
    }

    // self + sign * other, for same-shape chains.
    fn merge(&self, other: &Chain, sign: i64) -> Chain {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                terms.push(self.terms[i]);
                i += 1;
            } else if take_right {
                let (op, c) = other.terms[j];
                terms.push((op, checked_mul(sign, c)));
                j += 1;
            } else {
                let c = checked_add(self.terms[i].1, checked_mul(sign, other.terms[j].1));
                if c != 0 {
                    terms.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Chain {
            m: self.m,
            n: self.n,
            terms,
        }
    }

    pub fn scale(&self, c: i64) -> Chain {
        if c == 0 {
            return Chain::zero(self.m, self.n);
        }
        Chain {
            m: self.m,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|&(op, x)| (op, checked_mul(c, x)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Chain {
        self.scale(-1)
    }

    /// The right action `xβ = Σ x_α (α ∘ β)`.
    pub fn act(&self, beta: &Operator) -> Result<Chain, Error> {
        if beta.target() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: beta.target(),
            });
        }
        let raw = self
            .terms
            .iter()
            .map(|&(op, c)| (op.compose(beta).expect("dimensions checked"), c))
            .collect();
        Ok(Chain::from_unsorted(beta.dim(), self.n, raw))
    }

    /// `x∂_k`, the action of the coface `δ_k`.
    ///
    /// Panics if `k > m` or `m == 0`.
    pub fn face(&self, k: usize) -> Chain {
        assert!(self.m >= 1 && k <= self.m, "face index {k} out of range");
        let raw = self
            .terms
            .iter()
            .map(|&(op, c)| (op.drop_index(k), c))
            .collect();
        Chain::from_unsorted(self.m - 1, self.n, raw)
    }

    /// `xσ_k`, the action of the codegeneracy `σ_k`. The support maps
    /// injectively, so no cancellation can occur.
    ///
    /// Panics if `k > m`.
    pub fn degeneracy(&self, k: usize) -> Chain {
        assert!(k <= self.m, "degeneracy index {k} out of range");
        // Precomposition with σ_k is order preserving on operators.
        let terms = self
            .terms
            .iter()
            .map(|&(op, c)| (op.repeat_index(k), c))
            .collect();
        Chain {
            m: self.m + 1,
            n: self.n,
            terms,
        }
    }

    /// Bilinear composition `x ∘ w` for `x : [m] -> [n]`, `w : [k] -> [m]`.
    pub fn compose(&self, w: &Chain) -> Result<Chain, Error> {
        if w.n != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: w.n,
            });
        }
        let mut raw = Vec::with_capacity(self.terms.len() * w.terms.len());
        for &(a, x) in &self.terms {
            for &(b, y) in &w.terms {
                raw.push((a.compose(&b).expect("dimensions checked"), checked_mul(x, y)));
            }
        }
        Ok(Chain::from_unsorted(w.m, self.n, raw))
    }

    /// Whether every operator in the support is degenerate at `k`, i.e. the
    /// chain is in the image of `σ_k`. The zero chain is degenerate everywhere.
    pub fn is_degenerate_at(&self, k: usize) -> bool {
        k < self.m && self.terms.iter().all(|(op, _)| op.is_degenerate_at(k))
    }

    pub fn is_degenerate(&self) -> bool {
        (0..self.m).any(|k| self.is_degenerate_at(k))
    }

    /// Whether every operator in the support is non-injective.
    pub fn all_support_degenerate(&self) -> bool {
        self.terms.iter().all(|(op, _)| op.is_degenerate())
    }

    /// Strips common degeneracies, smallest index first.
    ///
    /// Returns the nondegenerate core together with the stripped indices in
    /// the order they were removed; [`Chain::apply_degeneracies`] rebuilds the
    /// original chain.
    pub fn degeneracy_normalize(&self) -> Result<(Chain, Vec<usize>), Error> {
        if self.is_zero() {
            return Err(Error::ZeroChain);
        }
        let mut core = self.clone();
        let mut word = Vec::new();
        while let Some(k) = (0..core.m).find(|&k| core.is_degenerate_at(k)) {
            core = core.face(k);
            word.push(k);
        }
        Ok((core, word))
    }

    /// The nondegenerate core alone. Zero maps to zero.
    pub fn nondegenerate_core(&self) -> Chain {
        let mut core = self.clone();
        if core.is_zero() {
            return core;
        }
        while let Some(k) = (0..core.m).find(|&k| core.is_degenerate_at(k)) {
            core = core.face(k);
        }
        core
    }

    /// Inverse of [`Chain::degeneracy_normalize`]: applies `σ_k` for the
    /// recorded indices, last stripped first.
    pub fn apply_degeneracies(&self, word: &[usize]) -> Chain {
        word.iter().rev().fold(self.clone(), |c, &k| c.degeneracy(k))
    }

    /// The same chain regarded in `ZΔ([m],[target])`.
    pub fn retarget(&self, target: usize) -> Result<Chain, Error> {
        let terms = self
            .terms
            .iter()
            .map(|&(op, c)| op.retarget(target).map(|o| (o, c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Chain {
            m: self.m,
            n: target,
            terms,
        })
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (op, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", c.unsigned_abs()) } else { ("+", *c as u64) };
            if i == 0 {
                if *c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Parses a compact literal such as `"(0,1)-(1,1)+(1,2)"` or `"2*(0,1)"`.
/// Intended for tests and small command-line inputs.
pub fn parse_chain(text: &str, n: usize) -> Result<Chain, Error> {
    let mut raw = Vec::new();
    let mut m = None;
    let bytes = text.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let read_num = |i: &mut usize| -> Option<usize> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        core::str::from_utf8(&bytes[start..*i]).ok()?.parse().ok()
    };
    let bad = || Error::Precondition("malformed chain literal");
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            break;
        }
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !raw.is_empty() {
            return Err(bad());
        }
        let mut coeff = 1i64;
        if i < bytes.len() && bytes[i].is_ascii_digit() {
            coeff = read_num(&mut i).ok_or_else(bad)? as i64;
            skip_ws(&mut i);
            if i >= bytes.len() || bytes[i] != b'*' {
                return Err(bad());
            }
            i += 1;
            skip_ws(&mut i);
        }
        if i >= bytes.len() || bytes[i] != b'(' {
            return Err(bad());
        }
        i += 1;
        let mut vals = Vec::new();
        loop {
            skip_ws(&mut i);
            vals.push(read_num(&mut i).ok_or_else(bad)?);
            skip_ws(&mut i);
            match bytes.get(i) {
                Some(b',') => i += 1,
                Some(b')') => {
                    i += 1;
                    break;
                }
                _ => return Err(bad()),
            }
        }
        let op = Operator::new(&vals, n)?;
        match m {
            None => m = Some(op.dim()),
            Some(d) if d != op.dim() => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: op.dim(),
                })
            }
            _ => {}
        }
        raw.push((sign * coeff, op));
    }
    let m = m.ok_or_else(bad)?;
    Chain::new(m, n, raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str, n: usize) -> Chain {
        parse_chain(s, n).unwrap()
    }

    #[test]
    fn addition_and_cancellation() {
        let a = c("(0,1)", 2);
        let b = c("-(1,1)", 2);
        assert_eq!(a.add(&b).unwrap(), c("(0,1)-(1,1)", 2));
        let x = c("(0,1)-(1,1)+(1,2)", 2);
        assert!(x.add(&x.scale(-1)).unwrap().is_zero());
        assert_eq!(
            c("(0,1)-(1,1)", 2).add(&c("(1,1)+(1,2)", 2)).unwrap(),
            c("(0,1)+(1,2)", 2)
        );
        assert!(c("(0,1)", 2).add(&c("(0)", 2)).is_err());
        assert!(c("(0,1)", 2).add(&c("(0,1)", 3)).is_err());
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let x = c("(0,1)+(1,1)-(1,1)", 2);
        assert_eq!(x.support_size(), 1);
        assert_eq!(x.coefficient(&Operator::new(&[1, 1], 2).unwrap()), 0);
        assert_eq!(c("(0,1)+(0,1)", 2).coefficient(&Operator::new(&[0, 1], 2).unwrap()), 2);
    }

    #[test]
    fn action_examples() {
        let x = c("(0,1)-(1,1)+(1,2)", 2);
        let d0 = Operator::face_map(0, 1).unwrap();
        assert_eq!(x.act(&d0).unwrap(), c("(2)", 2));
        assert_eq!(x.act(&Operator::identity(1).unwrap()).unwrap(), x);
        let y = c("(0,0,2)-(0,2,2)+(0,2,3)", 3);
        assert_eq!(
            y.act(&Operator::face_map(0, 2).unwrap()).unwrap(),
            c("(0,2)-(2,2)+(2,3)", 3)
        );
        assert!(x.act(&Operator::face_map(0, 2).unwrap()).is_err());
    }

    #[test]
    fn composition_examples() {
        let x = c("(0,1)-(1,1)+(1,2)", 2);
        let id = Chain::from_operator(Operator::identity(1).unwrap());
        assert_eq!(x.compose(&id).unwrap(), x);
        assert_eq!(c("(0,2)", 2).compose(&c("(1)", 1)).unwrap(), c("(2)", 2));
        assert_eq!(x.compose(&c("(0)", 1)).unwrap(), c("(0)", 2));
    }

    #[test]
    fn normalize_examples() {
        let (core, word) = c("(0,0)", 2).degeneracy_normalize().unwrap();
        assert_eq!(core, c("(0)", 2));
        assert_eq!(word, alloc::vec![0]);
        let x = c("(0,1)-(1,1)+(1,2)", 2);
        assert_eq!(x.degeneracy_normalize().unwrap(), (x.clone(), alloc::vec![]));
        let w = c("(0,1,1)-(1,1,1)+(1,1,2)", 2);
        assert_eq!(w.degeneracy_normalize().unwrap(), (w.clone(), alloc::vec![]));
        assert_eq!(Chain::zero(1, 2).degeneracy_normalize(), Err(Error::ZeroChain));
        let d = c("(0,0,1,1,1)", 2);
        let (core, word) = d.degeneracy_normalize().unwrap();
        assert_eq!(core, c("(0,1)", 2));
        assert_eq!(core.apply_degeneracies(&word), d);
    }

    #[test]
    fn display_round_trips_through_parser() {
        let x = c("2*(0,1)-(1,1)+(1,2)", 2);
        let s = alloc::format!("{x}");
        assert_eq!(s, "2*(0,1) - (1,1) + (1,2)");
        assert_eq!(parse_chain(&s, 2).unwrap(), x);
    }
}
