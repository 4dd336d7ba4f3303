//! Brute-force oracles for `O(m,n)`.
//!
//! The search strategy looks for integer coefficient vectors on `Δ([m],[n])`
//! with every coefficient in `[-B, B]` and every injective coefficient
//! non-negative. It works one dimension at a time. Every injective
//! restriction of an `m`-simplex other than the identity factors through a
//! face, so `x` lies in `O(m,n)` exactly when all faces `x∂_k` lie in
//! `O(m-1,n)` and the injective coefficients of `x` are non-negative. The
//! search therefore walks the compatible boundaries `(y_0, ..., y_m)` drawn
//! from the previous level and solves the linear system `x∂_k = y_k` by
//! depth-first search with unit propagation. In dimension 0 the only
//! constraint is that the coefficients sum to 1. Every solution is re-checked
//! with [`check_membership`] before it is accepted.
//!
//! A member attaining `|coefficient| = B` sets the boundary flag: the bound
//! may be cutting off members and the level is not certified complete.
//!
//! The closure strategy grows a family from single operators by faces,
//! degeneracies, fills, pastings, and cones, and is used only as a
//! cross-check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::anodyne::join_cone;
use crate::chain::Chain;
use crate::error::Error;
use crate::operator::Operator;
use crate::oriental::{check_membership, OSimplex};
use crate::pasting::{fill, paste};

/// Bound used when none is requested.
pub const DEFAULT_BOUND: i64 = 3;

/// Members of `O(m,n)` for every `m` up to some maximum, as found by one
/// strategy.
#[derive(Debug, Clone)]
pub struct Oracle {
    n: usize,
    bound: i64,
    levels: Vec<Vec<OSimplex>>,
    boundary_hit: Vec<bool>,
}

impl Oracle {
    pub fn target(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn max_dim(&self) -> usize {
        self.levels.len() - 1
    }

    /// All members of `O(m,n)`, sorted by chain.
    pub fn members(&self, m: usize) -> &[OSimplex] {
        &self.levels[m]
    }

    pub fn nondegenerate(&self, m: usize) -> impl Iterator<Item = &OSimplex> + '_ {
        self.levels[m].iter().filter(|x| !x.is_degenerate())
    }

    pub fn contains(&self, x: &Chain) -> bool {
        x.dim() < self.levels.len()
            && self.levels[x.dim()]
                .binary_search_by(|s| s.chain().cmp(x))
                .is_ok()
    }

    pub fn get(&self, x: &Chain) -> Option<&OSimplex> {
        let level = self.levels.get(x.dim())?;
        level
            .binary_search_by(|s| s.chain().cmp(x))
            .ok()
            .map(|i| &level[i])
    }

    /// Whether some member in dimension `m` attains the coefficient bound.
    pub fn boundary_hit(&self, m: usize) -> bool {
        self.boundary_hit[m]
    }

    /// Complete through dimension `m`: no level up to `m` touches the bound.
    pub fn certified(&self) -> bool {
        !self.boundary_hit.iter().any(|&b| b)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        count_nondegenerate(self)
    }

    /// Builds an oracle from externally computed levels (for instance a
    /// parallel search). Levels are sorted and checked for membership.
    pub fn from_levels(n: usize, bound: i64, levels: Vec<Vec<Chain>>) -> Result<Self, Error> {
        let mut out = Vec::with_capacity(levels.len());
        let mut hits = Vec::with_capacity(levels.len());
        for (m, level) in levels.into_iter().enumerate() {
            let mut checked = Vec::with_capacity(level.len());
            let mut hit = false;
            for x in level {
                if x.dim() != m || x.target() != n {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        found: x.dim(),
                    });
                }
                hit |= x.max_abs_coefficient() >= bound as u64;
                checked.push(check_membership(&x).map_err(Error::NotMember)?);
            }
            checked.sort();
            checked.dedup();
            out.push(checked);
            hits.push(hit);
        }
        Ok(Oracle {
            n,
            bound,
            levels: out,
            boundary_hit: hits,
        })
    }
}

/// Per-dimension counts of nondegenerate members, found by stripping
/// degeneracies.
pub fn count_nondegenerate(oracle: &Oracle) -> Vec<usize> {
    oracle
        .levels
        .iter()
        .map(|level| {
            level
                .iter()
                .filter(|x| {
                    let (core, _) = x
                        .chain()
                        .degeneracy_normalize()
                        .expect("members are nonzero");
                    core.dim() == x.dim()
                })
                .count()
        })
        .collect()
}

/// Exhaustive bounded search for `O(m,n)` for every `m ≤ max_m`.
pub fn enumerate_o(max_m: usize, n: usize, bound: i64) -> Result<Oracle, Error> {
    let mut levels: Vec<Vec<Chain>> = Vec::with_capacity(max_m + 1);
    for m in 0..=max_m {
        let level = if m == 0 {
            search_vertices(n, bound)
        } else {
            let plan = LevelPlan::new(&levels[m - 1], m, n, bound);
            plan.solve_range(0..levels[m - 1].len())
        };
        levels.push(level);
    }
    Oracle::from_levels(n, bound, levels)
}

fn search_vertices(n: usize, bound: i64) -> Vec<Chain> {
    let ops = Operator::enumerate(0, n, false);
    let system = System {
        lower: vec![0; ops.len()],
        upper: vec![bound; ops.len()],
        constraints: vec![(0..ops.len()).collect()],
        var_constraints: (0..ops.len()).map(|_| vec![0]).collect(),
    };
    let mut out = Vec::new();
    system.solve(&[1], &mut |values| {
        out.push(chain_from_values(&ops, values, 0, n));
    });
    out.into_iter()
        .filter(|x| check_membership(x).is_ok())
        .collect()
}

fn chain_from_values(ops: &[Operator], values: &[i64], m: usize, n: usize) -> Chain {
    let raw = ops
        .iter()
        .zip(values)
        .filter(|(_, &v)| v != 0)
        .map(|(&op, &v)| (op, v))
        .collect();
    Chain::from_unsorted(m, n, raw)
}

/// Everything needed to extend level `m - 1` to level `m`. Work can be split
/// across the choice of last face `y_m`, which is how callers parallelise.
pub struct LevelPlan<'a> {
    prev: &'a [Chain],
    m: usize,
    n: usize,
    ops: Vec<Operator>,
    face_ops: Vec<Operator>,
    system: System,
    // by_last_face[j] maps y∂_(m-1) to the members y with that face, for
    // choosing y_j given y_m.
    by_last_face: BTreeMap<Chain, Vec<usize>>,
    faces: Vec<Vec<Chain>>,
}

impl<'a> LevelPlan<'a> {
    pub fn new(prev: &'a [Chain], m: usize, n: usize, bound: i64) -> Self {
        assert!(m >= 1);
        let ops = Operator::enumerate(m, n, false);
        let face_ops = Operator::enumerate(m - 1, n, false);
        let nf = face_ops.len();
        let mut constraints = vec![Vec::new(); (m + 1) * nf];
        let mut var_constraints = vec![Vec::new(); ops.len()];
        for (i, op) in ops.iter().enumerate() {
            for k in 0..=m {
                let f = face_ops
                    .binary_search(&op.drop_index(k))
                    .expect("faces of operators are operators");
                constraints[k * nf + f].push(i);
                var_constraints[i].push(k * nf + f);
            }
        }
        let lower = ops
            .iter()
            .map(|op| if op.is_injective() { 0 } else { -bound })
            .collect();
        let upper = vec![bound; ops.len()];
        let faces: Vec<Vec<Chain>> = if m >= 2 {
            prev.iter().map(|y| (0..m).map(|j| y.face(j)).collect()).collect()
        } else {
            Vec::new()
        };
        let mut by_last_face: BTreeMap<Chain, Vec<usize>> = BTreeMap::new();
        if m >= 2 {
            for (idx, fs) in faces.iter().enumerate() {
                by_last_face.entry(fs[m - 1].clone()).or_default().push(idx);
            }
        }
        LevelPlan {
            prev,
            m,
            n,
            ops,
            face_ops,
            system: System {
                lower,
                upper,
                constraints,
                var_constraints,
            },
            by_last_face,
            faces,
        }
    }

    /// Solves for every boundary whose last face `y_m` is `prev[i]` for some
    /// `i` in `seeds`. Returns members in no particular order.
    pub fn solve_range<I: IntoIterator<Item = usize>>(&self, seeds: I) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut tuple = vec![usize::MAX; self.m + 1];
        for last in seeds {
            tuple[self.m] = last;
            self.extend(self.m, &mut tuple, &mut out);
        }
        out
    }

    // Chooses y_(j-1) given y_j, ..., y_m.
    fn extend(&self, j: usize, tuple: &mut Vec<usize>, out: &mut Vec<Chain>) {
        if j == 0 {
            self.solve_boundary(tuple, out);
            return;
        }
        let target = j - 1;
        if self.m == 1 {
            for idx in 0..self.prev.len() {
                tuple[target] = idx;
                self.extend(target, tuple, out);
            }
            return;
        }
        // y_target ∂_(i-1) = y_i ∂_target for every i > target.
        let key = &self.faces[tuple[self.m]][target];
        let Some(candidates) = self.by_last_face.get(key) else {
            return;
        };
        'cand: for &idx in candidates {
            for (i, &chosen) in tuple.iter().enumerate().take(self.m).skip(target + 1) {
                if self.faces[idx][i - 1] != self.faces[chosen][target] {
                    continue 'cand;
                }
            }
            tuple[target] = idx;
            self.extend(target, tuple, out);
        }
    }

    fn solve_boundary(&self, tuple: &[usize], out: &mut Vec<Chain>) {
        let nf = self.face_ops.len();
        let mut targets = vec![0i64; (self.m + 1) * nf];
        for (k, &idx) in tuple.iter().enumerate() {
            for &(op, c) in self.prev[idx].terms() {
                let f = self.face_ops.binary_search(&op).expect("same shape");
                targets[k * nf + f] = c;
            }
        }
        self.system.solve(&targets, &mut |values| {
            let x = chain_from_values(&self.ops, values, self.m, self.n);
            if check_membership(&x).is_ok() {
                out.push(x);
            }
        });
    }
}

/// A system of equalities `Σ_{i ∈ S_c} x_i = t_c` over bounded integers.
struct System {
    lower: Vec<i64>,
    upper: Vec<i64>,
    constraints: Vec<Vec<usize>>,
    var_constraints: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct SearchState {
    value: Vec<i64>,
    assigned: Vec<bool>,
    rest: Vec<i64>,
    open: Vec<u32>,
    low_sum: Vec<i64>,
    high_sum: Vec<i64>,
    unassigned: usize,
}

impl System {
    fn solve(&self, targets: &[i64], emit: &mut dyn FnMut(&[i64])) {
        let nv = self.lower.len();
        let nc = self.constraints.len();
        let mut state = SearchState {
            value: vec![0; nv],
            assigned: vec![false; nv],
            rest: targets.to_vec(),
            open: self.constraints.iter().map(|c| c.len() as u32).collect(),
            low_sum: vec![0; nc],
            high_sum: vec![0; nc],
            unassigned: nv,
        };
        for (c, vars) in self.constraints.iter().enumerate() {
            state.low_sum[c] = vars.iter().map(|&i| self.lower[i]).sum();
            state.high_sum[c] = vars.iter().map(|&i| self.upper[i]).sum();
        }
        let mut queue: Vec<usize> = (0..nc).collect();
        if self.propagate(&mut state, &mut queue) {
            self.search(state, emit);
        }
    }

    fn feasible(&self, s: &SearchState, c: usize) -> bool {
        s.low_sum[c] <= s.rest[c] && s.rest[c] <= s.high_sum[c]
    }

    fn assign(&self, s: &mut SearchState, i: usize, v: i64, queue: &mut Vec<usize>) -> bool {
        if v < self.lower[i] || v > self.upper[i] {
            return false;
        }
        s.value[i] = v;
        s.assigned[i] = true;
        s.unassigned -= 1;
        let mut ok = true;
        for &c in &self.var_constraints[i] {
            s.rest[c] -= v;
            s.open[c] -= 1;
            s.low_sum[c] -= self.lower[i];
            s.high_sum[c] -= self.upper[i];
            if !self.feasible(s, c) {
                ok = false;
            }
            if s.open[c] <= 1 {
                queue.push(c);
            }
        }
        ok
    }

    fn propagate(&self, s: &mut SearchState, queue: &mut Vec<usize>) -> bool {
        while let Some(c) = queue.pop() {
            if !self.feasible(s, c) {
                return false;
            }
            if s.open[c] == 1 {
                let i = *self.constraints[c]
                    .iter()
                    .find(|&&i| !s.assigned[i])
                    .expect("one open variable");
                let v = s.rest[c];
                if !self.assign(s, i, v, queue) {
                    return false;
                }
            } else if s.open[c] == 0 && s.rest[c] != 0 {
                return false;
            }
        }
        true
    }

    fn search(&self, s: SearchState, emit: &mut dyn FnMut(&[i64])) {
        if s.unassigned == 0 {
            emit(&s.value);
            return;
        }
        // Branch on an open variable of the most constrained equation.
        let c = (0..self.constraints.len())
            .filter(|&c| s.open[c] > 0)
            .min_by_key(|&c| s.open[c])
            .expect("some constraint is open");
        let i = *self.constraints[c]
            .iter()
            .find(|&&i| !s.assigned[i])
            .expect("open constraint has an open variable");
        // Bounds implied by the other constraints on i.
        let mut lo = self.lower[i];
        let mut hi = self.upper[i];
        for &d in &self.var_constraints[i] {
            lo = lo.max(s.rest[d] - (s.high_sum[d] - self.upper[i]));
            hi = hi.min(s.rest[d] - (s.low_sum[d] - self.lower[i]));
        }
        for v in lo..=hi {
            let mut next = s.clone();
            let mut queue = Vec::new();
            if self.assign(&mut next, i, v, &mut queue) && self.propagate(&mut next, &mut queue) {
                self.search(next, emit);
            }
        }
    }
}

/// Per-dimension output of the closure strategy.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub n: usize,
    pub max_dim: usize,
    pub levels: Vec<BTreeSet<Chain>>,
}

impl ClosureResult {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(BTreeSet::len).collect()
    }
}

/// How the search and closure strategies compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    /// Search members the closure did not reach.
    pub missing_from_closure: Vec<Chain>,
    /// Closure members the search did not find. Always a search bug, since
    /// closure output is membership-checked.
    pub missing_from_search: Vec<Chain>,
    pub search_certified: bool,
}

impl Agreement {
    pub fn exact(&self) -> bool {
        self.missing_from_closure.is_empty() && self.missing_from_search.is_empty()
    }

    /// The closure is contained in the search result, and equal to it when
    /// the search is certified complete.
    pub fn agree(&self) -> bool {
        self.missing_from_search.is_empty()
            && (self.missing_from_closure.is_empty() || !self.search_certified)
    }
}

/// Compares the two strategies over the dimensions both cover.
pub fn compare_strategies(search: &Oracle, closure: &ClosureResult) -> Agreement {
    let mut out = Agreement {
        missing_from_closure: Vec::new(),
        missing_from_search: Vec::new(),
        search_certified: search.certified(),
    };
    let top = search.max_dim().min(closure.max_dim);
    for m in 0..=top {
        let found: BTreeSet<&Chain> = search.members(m).iter().map(OSimplex::chain).collect();
        let reached = &closure.levels[m];
        out.missing_from_search
            .extend(reached.iter().filter(|x| !found.contains(x)).cloned());
        out.missing_from_closure
            .extend(found.into_iter().filter(|x| !reached.contains(*x)).cloned());
    }
    out
}

/// Closure of the single-operator simplices `α : [m] -> [n]` (`m ≤ max_dim`)
/// under faces, degeneracies, fills and pastings of composable pairs, and
/// cones over the closure for `n - 1`. Every produced chain is checked for
/// membership; a failure is reported as an invariant violation.
pub fn enumerate_by_closure(n: usize, max_dim: usize) -> Result<ClosureResult, Error> {
    let mut levels: Vec<BTreeSet<Chain>> = vec![BTreeSet::new(); max_dim + 1];
    let mut work: Vec<Chain> = Vec::new();
    let insert = |x: Chain, levels: &mut Vec<BTreeSet<Chain>>, work: &mut Vec<Chain>| -> Result<(), Error> {
        if x.dim() > max_dim || levels[x.dim()].contains(&x) {
            return Ok(());
        }
        if let Err(v) = check_membership(&x) {
            return Err(Error::Invariant(alloc::format!(
                "closure produced non-member {x}: {v}"
            )));
        }
        levels[x.dim()].insert(x.clone());
        work.push(x);
        Ok(())
    };
    for m in 0..=max_dim {
        for op in Operator::enumerate(m, n, false) {
            insert(Chain::from_operator(op), &mut levels, &mut work)?;
        }
    }
    if n >= 1 && max_dim >= 1 {
        let lower = enumerate_by_closure(n - 1, max_dim - 1)?;
        for level in &lower.levels {
            for x in level {
                let base = check_membership(x).map_err(Error::NotMember)?;
                insert(join_cone(&base)?.into_chain(), &mut levels, &mut work)?;
                insert(x.retarget(n)?, &mut levels, &mut work)?;
            }
        }
    }
    // Composable pairs are found through indexes on the faces that must agree:
    // x∂_(k-1) for the left factor, y∂_k for the right one.
    let mut left_index: BTreeMap<(usize, Chain), Vec<Chain>> = BTreeMap::new();
    let mut right_index: BTreeMap<(usize, Chain), Vec<Chain>> = BTreeMap::new();
    while let Some(x) = work.pop() {
        let m = x.dim();
        if m >= 1 {
            for k in 0..=m {
                insert(x.face(k), &mut levels, &mut work)?;
            }
        }
        if m < max_dim {
            for k in 0..=m {
                insert(x.degeneracy(k), &mut levels, &mut work)?;
            }
        }
        if m == 0 {
            continue;
        }
        let mut products = Vec::new();
        for k in 1..=m {
            let as_left = (k, x.face(k - 1));
            let as_right = (k, x.face(k));
            left_index.entry(as_left.clone()).or_default().push(x.clone());
            right_index.entry(as_right.clone()).or_default().push(x.clone());
            if let Some(rights) = right_index.get(&as_left) {
                for y in rights {
                    products.push((x.clone(), y.clone(), k));
                }
            }
            if let Some(lefts) = left_index.get(&as_right) {
                for w in lefts {
                    if *w != x {
                        products.push((w.clone(), x.clone(), k));
                    }
                }
            }
        }
        for (a, b, k) in products {
            insert(paste(&a, &b, k)?, &mut levels, &mut work)?;
            if m < max_dim {
                insert(fill(&a, &b, k)?, &mut levels, &mut work)?;
            }
        }
    }
    Ok(ClosureResult {
        n,
        max_dim,
        levels,
    })
}
