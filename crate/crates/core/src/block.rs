//! Linear block codes over a chain ring.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gamma::{self, BlockParameters, IndependenceMethod};
use crate::matrix::RingMatrix;
use crate::ring::{ChainRing, Elem};

#[derive(Clone, Debug)]
pub struct BlockCode {
    ring: ChainRing,
    generator: RingMatrix,
    original: Option<RingMatrix>,
}

impl BlockCode {
    /// Accepts any generator matrix; one whose rows are not already a
    /// gamma-basis is replaced by [`gamma::gamma_basis`] and kept as
    /// `original`.
    pub fn new(generator: RingMatrix) -> Result<Self> {
        let ring = generator.ring().clone();
        let is_basis = gamma::is_gamma_generator_sequence(&generator)
            && gamma::full_gamma_dimension(&generator);
        if is_basis {
            Ok(BlockCode {
                ring,
                generator,
                original: None,
            })
        } else {
            Ok(BlockCode {
                ring,
                generator: gamma::gamma_basis(&generator),
                original: Some(generator),
            })
        }
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    /// gamma-dimension
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &RingMatrix {
        &self.generator
    }

    pub fn original(&self) -> Option<&RingMatrix> {
        self.original.as_ref()
    }

    pub fn parameters(&self) -> BlockParameters {
        gamma::parameters_of(&self.generator)
    }

    /// Minimum Hamming weight of `u G` over nonzero `u` in `T^k`.
    pub fn min_distance(&self, budget: u128) -> Result<usize> {
        let q = self.ring.q();
        let k = self.k() as u32;
        let total = (q as u128).checked_pow(k).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::BudgetExceeded {
                attempted: total,
                budget,
            });
        }
        let t = self.ring.representatives();
        let g = &self.generator;
        let n = self.n();
        let d = (1..total as u64)
            .into_par_iter()
            .map(|mut idx| {
                let mut word = vec![Elem::ZERO; n];
                for i in 0..self.k() {
                    let c = t[(idx % q) as usize];
                    idx /= q;
                    if c.is_zero() {
                        continue;
                    }
                    for (j, w) in word.iter_mut().enumerate() {
                        *w = self.ring.add(w, &self.ring.mul(&c, &g.get(i, j)));
                    }
                }
                word.iter().filter(|x| !x.is_zero()).count()
            })
            .min()
            .unwrap_or(n);
        Ok(d)
    }

    pub fn is_mds(&self, budget: u128) -> Result<bool> {
        let nu = self.ring.nu();
        Ok(self.min_distance(budget)? == singleton_bound_block(self.n(), self.k(), nu)?)
    }

    pub fn is_gamma_basis(&self) -> Result<bool> {
        gamma::is_gamma_linearly_independent(&self.generator, IndependenceMethod::Auto, gamma::DEFAULT_BUDGET)
    }
}

pub fn min_distance_block(c: &BlockCode, budget: u128) -> Result<usize> {
    c.min_distance(budget)
}

/// `n - ceil(k / nu) + 1`
pub fn singleton_bound_block(n: usize, k: usize, nu: usize) -> Result<usize> {
    if k == 0 || nu == 0 {
        return Err(Error::InvalidParams("need k >= 1 and nu >= 1".into()));
    }
    let c = k.div_ceil(nu);
    if n < c {
        return Err(Error::InvalidParams(format!("n = {n} is smaller than ceil(k/nu) = {c}")));
    }
    Ok(n - c + 1)
}

/// All `(k_0..k_{nu-1})` with `sum k_i (nu - i) = k` and minimal `sum k_i`,
/// in lexicographic order.
pub fn nu_optimal_sets(k: usize, nu: usize) -> Vec<BlockParameters> {
    assert!(nu >= 1, "nu must be positive");
    let mut all = Vec::new();
    let mut cur = vec![0usize; nu];
    enumerate_params(k, nu, 0, &mut cur, &mut all);
    let best = all.iter().map(|p: &Vec<usize>| p.iter().sum::<usize>()).min().unwrap_or(0);
    let mut out: Vec<BlockParameters> = all
        .into_iter()
        .filter(|p| p.iter().sum::<usize>() == best)
        .map(|k_list| BlockParameters { k_list })
        .collect();
    out.sort();
    out
}

fn enumerate_params(rest: usize, nu: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == nu {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let w = nu - i;
    for ki in 0..=rest / w {
        cur[i] = ki;
        enumerate_params(rest - ki * w, nu, i + 1, cur, out);
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        let z4 = ChainRing::integers_mod(2, 2).unwrap();
        let c = BlockCode::new(RingMatrix::from_ints(&z4, &[vec![1, 1], vec![2, 2]])).unwrap();
        assert!(c.original().is_none());
        assert_eq!(c.min_distance(1000).unwrap(), 2);
        assert!(c.is_mds(1000).unwrap());
        let c = BlockCode::new(RingMatrix::from_ints(&z4, &[vec![1, 0]])).unwrap();
        assert_eq!(c.generator(), &RingMatrix::from_ints(&z4, &[vec![1, 0], vec![2, 0]]));
        assert_eq!(c.min_distance(1000).unwrap(), 1);
        let f2 = ChainRing::prime_field(2).unwrap();
        let rep = BlockCode::new(RingMatrix::from_ints(&f2, &[vec![1, 1, 1]])).unwrap();
        assert_eq!(rep.min_distance(1000).unwrap(), 3);
    }

    #[test]
    fn singleton_values() {
        assert_eq!(singleton_bound_block(2, 2, 2), Ok(2));
        assert_eq!(singleton_bound_block(3, 1, 1), Ok(3));
        assert_eq!(singleton_bound_block(4, 6, 2), Ok(2));
        assert!(singleton_bound_block(1, 6, 2).is_err());
    }

    #[test]
    fn optimal_parameter_sets() {
        let sets: Vec<Vec<usize>> = nu_optimal_sets(16, 5).into_iter().map(|p| p.k_list).collect();
        assert_eq!(
            sets,
            vec![
                vec![0, 4, 0, 0, 0],
                vec![1, 2, 1, 0, 0],
                vec![2, 0, 2, 0, 0],
                vec![2, 1, 0, 1, 0],
                vec![3, 0, 0, 0, 1]
            ]
        );
        assert_eq!(nu_optimal_sets(4, 2)[0].k_list, vec![2, 0]);
        assert_eq!(nu_optimal_sets(4, 2).len(), 1);
        assert_eq!(nu_optimal_sets(0, 3)[0].k_list, vec![0, 0, 0]);
    }
}
