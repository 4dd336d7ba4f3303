//! Membership in `O(m,n)` and the structure carried by its simplices.
//!
//! A chain `x ∈ ZΔ([m],[n])` lies in `O(m,n)` when its coefficients sum to 1
//! and, for all injective `β : [p] -> [m]` and `γ : [p] -> [n]`, the
//! coefficient of `γ` in `xβ` is non-negative. Marking is read off the
//! support: a simplex is marked exactly when every operator in its support is
//! degenerate.

use alloc::vec::Vec;
use core::fmt;

use crate::chain::Chain;
use crate::error::Error;
use crate::operator::Operator;

/// Why a chain fails to be a member of `O(m,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Coefficients do not sum to 1.
    Sum { sum: i64 },
    /// `(xβ)_γ < 0` for injective `β`, `γ`.
    Negative {
        beta: Operator,
        gamma: Operator,
        coefficient: i64,
    },
    /// `x·(i)` is not a single vertex. Unreachable for chains that pass the
    /// two conditions above.
    Vertex { index: usize },
    /// First or last vertex disagrees with the extreme values of the support.
    Terminus { index: usize, vertex: usize, extreme: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Sum { sum } => write!(f, "coefficients sum to {sum}, not 1"),
            Violation::Negative {
                beta,
                gamma,
                coefficient,
            } => write!(
                f,
                "coefficient {coefficient} of {gamma} in the restriction along {beta} is negative"
            ),
            Violation::Vertex { index } => write!(f, "vertex {index} is not a single point"),
            Violation::Terminus {
                index,
                vertex,
                extreme,
            } => write!(
                f,
                "vertex {index} is {vertex} but the support extreme is {extreme}"
            ),
        }
    }
}

/// Checks (O1) and (O2), reporting the first violation found. Injective
/// restrictions are visited by increasing `p`, then `β` and `γ` in
/// lexicographic order.
pub fn check_membership(x: &Chain) -> Result<OSimplex, Violation> {
    let sum = x.coefficient_sum();
    if sum != 1 {
        return Err(Violation::Sum { sum });
    }
    let (m, n) = (x.dim(), x.target());
    for p in 0..=m.min(n) {
        for beta in Operator::enumerate(p, m, true) {
            let restricted = x.act(&beta).expect("β targets [m]");
            for &(gamma, coefficient) in restricted.terms() {
                if coefficient < 0 && gamma.is_injective() {
                    return Err(Violation::Negative {
                        beta,
                        gamma,
                        coefficient,
                    });
                }
            }
        }
    }
    OSimplex::from_checked(x.clone())
}

/// Whether every operator in the support is degenerate.
pub fn is_marked_chain(x: &Chain) -> bool {
    x.all_support_degenerate()
}

/// Whether `|α⁻¹(n)|` is the same for every `α` in the support.
pub fn in_a_chain(x: &Chain) -> bool {
    let n = x.target();
    let mut sizes = x.support().map(|op| op.preimage_of(n).len());
    match sizes.next() {
        None => true,
        Some(first) => sizes.all(|s| s == first),
    }
}

/// A chain known to lie in `O(m,n)`: an `m`-simplex of the nerve of the
/// `n`-th oriental.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OSimplex {
    chain: Chain,
    vertices: Vec<u8>,
    marked: bool,
    in_a: bool,
}

impl OSimplex {
    fn from_checked(chain: Chain) -> Result<Self, Violation> {
        let m = chain.dim();
        let mut vertices = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let point = chain
                .act(&Operator::constant(0, i, m).expect("i ≤ m"))
                .expect("dimensions agree");
            match point.terms() {
                [(op, 1)] => vertices.push(op.at(0) as u8),
                _ => return Err(Violation::Vertex { index: i }),
            }
        }
        let lowest = chain.support().map(|a| a.first()).min().unwrap_or(0);
        if vertices[0] as usize != lowest {
            return Err(Violation::Terminus {
                index: 0,
                vertex: vertices[0] as usize,
                extreme: lowest,
            });
        }
        let highest = chain.support().map(|a| a.last()).max().unwrap_or(0);
        if vertices[m] as usize != highest {
            return Err(Violation::Terminus {
                index: m,
                vertex: vertices[m] as usize,
                extreme: highest,
            });
        }
        if vertices.windows(2).any(|w| w[0] > w[1]) {
            return Err(Violation::Vertex { index: m });
        }
        let marked = is_marked_chain(&chain);
        let in_a = in_a_chain(&chain);
        Ok(OSimplex {
            chain,
            vertices,
            marked,
            in_a,
        })
    }

    /// The simplex picked out by a single operator.
    pub fn from_operator(op: Operator) -> Self {
        check_membership(&Chain::from_operator(op)).expect("operators are members")
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn into_chain(self) -> Chain {
        self.chain
    }

    pub fn dim(&self) -> usize {
        self.chain.dim()
    }

    pub fn target(&self) -> usize {
        self.chain.target()
    }

    /// `x(i)`, the vertex picked out by `(i) : [0] -> [m]`.
    pub fn vertex(&self, i: usize) -> Result<usize, Error> {
        self.vertices
            .get(i)
            .map(|&v| v as usize)
            .ok_or(Error::IndexOutOfRange {
                index: i,
                bound: self.dim(),
            })
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().map(|&v| v as usize)
    }

    pub fn is_marked(&self) -> bool {
        self.marked
    }

    pub fn in_a(&self) -> bool {
        self.in_a
    }

    pub fn is_degenerate(&self) -> bool {
        self.chain.is_degenerate()
    }

    /// `xβ`, re-checked for membership.
    pub fn act(&self, beta: &Operator) -> Result<OSimplex, Error> {
        let chain = self.chain.act(beta)?;
        check_membership(&chain).map_err(Error::NotMember)
    }

    pub fn face(&self, k: usize) -> Result<OSimplex, Error> {
        if self.dim() == 0 || k > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: k,
                bound: self.dim(),
            });
        }
        check_membership(&self.chain.face(k)).map_err(Error::NotMember)
    }

    /// Composition in the category `O`: `x ∘ w` for `x ∈ O(m,n)` and
    /// `w ∈ O(k,m)`. The result is re-checked; a failure there is a bug.
    pub fn compose(&self, w: &OSimplex) -> Result<OSimplex, Error> {
        let chain = self.chain.compose(&w.chain)?;
        check_membership(&chain).map_err(|v| {
            Error::Invariant(alloc::format!(
                "composite {chain} of members left O: {v}"
            ))
        })
    }
}

impl fmt::Debug for OSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chain)
    }
}

impl fmt::Display for OSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chain)
    }
}
