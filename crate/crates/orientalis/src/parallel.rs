use orientalis_core::enumeration::{enumerate_o, LevelPlan, Oracle};
use orientalis_core::{Chain, Error};
use rayon::prelude::*;

/// [`enumerate_o`] with each level split across the choice of last face.
/// `jobs = 0` uses rayon's default thread count. The result does not depend
/// on the number of threads.
pub fn enumerate_parallel(max_m: usize, n: usize, bound: i64, jobs: usize) -> Result<Oracle, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("cannot start thread pool: {e}")))?;
    pool.install(|| {
        let vertices = enumerate_o(0, n, bound)?;
        let mut levels: Vec<Vec<Chain>> = vec![vertices.members(0).iter().map(|x| x.chain().clone()).collect()];
        for m in 1..=max_m {
            let prev = &levels[m - 1];
            let plan = LevelPlan::new(prev, m, n, bound);
            let level: Vec<Chain> = (0..prev.len())
                .into_par_iter()
                .flat_map_iter(|i| plan.solve_range(i..i + 1))
                .collect();
            levels.push(level);
        }
        Oracle::from_levels(n, bound, levels)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential() {
        for n in 0..=3 {
            let a = enumerate_o(4, n, 3).unwrap();
            for jobs in [1, 4] {
                let b = enumerate_parallel(4, n, 3, jobs).unwrap();
                for m in 0..=4 {
                    assert_eq!(a.members(m), b.members(m));
                }
                assert_eq!(a.certified(), b.certified());
            }
        }
    }
}
