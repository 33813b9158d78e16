use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::hdc::Hypervector;

/// The `k` level hypervectors s₁..s_k.
///
/// s₁ is random bipolar; each following seed copies its predecessor and flips
/// `E = ⌊D / 2k⌋` further positions. Flip positions never repeat along the
/// chain, so Hamming(s₁, s_j) = (j − 1)·E and similarity decays monotonically
/// with level distance.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedSet {
    seeds: Vec<Hypervector>,
    flips_per_step: usize,
}

impl SeedSet {
    pub fn generate<R: Rng + ?Sized>(dims: usize, levels: usize, rng: &mut R) -> Result<Self> {
        if levels < 2 {
            return Err(invalid(format!("level count must be >= 2, got {levels}")));
        }
        if dims < 2 * levels {
            return Err(invalid(format!("dims ({dims}) must be >= 2k ({})", 2 * levels)));
        }
        let flips = dims / (2 * levels);
        let first = Hypervector::random_bipolar(dims, rng)?;
        // One draw without replacement covers every step; step j takes the
        // j-th block of `flips` positions.
        let positions = index::sample(rng, dims, (levels - 1) * flips).into_vec();

        let mut seeds = Vec::with_capacity(levels);
        let mut current = first.into_elems();
        seeds.push(Hypervector::from_bipolar(current.clone())?);
        for block in positions.chunks(flips) {
            for &p in block {
                current[p] = -current[p];
            }
            seeds.push(Hypervector::from_bipolar(current.clone())?);
        }
        Ok(Self { seeds, flips_per_step: flips })
    }

    pub fn from_parts(seeds: Vec<Hypervector>, flips_per_step: usize) -> Result<Self> {
        let dims = seeds.first().map(Hypervector::dims).ok_or_else(|| invalid("no seeds"))?;
        if seeds.len() < 2 {
            return Err(invalid("need at least two seeds"));
        }
        if seeds.iter().any(|s| s.dims() != dims || s.kind() != crate::Kind::Bipolar) {
            return Err(invalid("seeds must be bipolar with equal dimension"));
        }
        Ok(Self { seeds, flips_per_step })
    }

    pub fn dims(&self) -> usize {
        self.seeds[0].dims()
    }

    pub fn levels(&self) -> usize {
        self.seeds.len()
    }

    pub fn flips_per_step(&self) -> usize {
        self.flips_per_step
    }

    /// Seed for a 1-based level index.
    pub fn seed(&self, level: usize) -> &Hypervector {
        &self.seeds[level - 1]
    }

    pub fn seeds(&self) -> &[Hypervector] {
        &self.seeds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn flip_count_formula() {
        let s = SeedSet::generate(10_000, 10, &mut rng::master(1)).unwrap();
        assert_eq!(s.flips_per_step(), 500);
        assert_eq!(s.levels(), 10);
    }

    #[test]
    fn consecutive_and_end_to_end_hamming() {
        let s = SeedSet::generate(10_000, 10, &mut rng::master(2)).unwrap();
        for w in s.seeds().windows(2) {
            assert_eq!(w[0].hamming(&w[1]).unwrap(), 500);
        }
        assert_eq!(s.seed(1).hamming(s.seed(10)).unwrap(), 9 * 500);
        // Flip arithmetic: cos = 1 - 2·H/D = 1 - (k-1)/k.
        let cos = s.seed(1).cosine_similarity(s.seed(10)).unwrap();
        assert!((cos - 0.1).abs() < 1e-12);
    }

    #[test]
    fn similarity_decays_with_level_distance() {
        let s = SeedSet::generate(2_000, 8, &mut rng::master(3)).unwrap();
        let sims: Vec<f64> =
            (1..=8).map(|j| s.seed(1).cosine_similarity(s.seed(j)).unwrap()).collect();
        assert!(sims.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn too_small_dimension_is_rejected() {
        assert!(SeedSet::generate(7, 4, &mut rng::master(0)).is_err());
        assert!(SeedSet::generate(8, 4, &mut rng::master(0)).is_ok());
    }
}
