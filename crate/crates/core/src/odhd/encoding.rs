use crate::error::{invalid, Error, Result};
use crate::hdc::Hypervector;

use super::{Quantizer, SeedSet};

/// H = Σᵢ ρ^(i−1)(s_level(xᵢ)): the seed of each feature's level, rotated by
/// the feature's position, summed over all features.
pub fn encode(seeds: &SeedSet, quantizer: &Quantizer, x: &[f64]) -> Result<Hypervector> {
    let levels = quantizer.quantize(x)?;
    encode_levels(seeds, &levels)
}

/// Encoding from 1-based level indices.
pub fn encode_levels(seeds: &SeedSet, levels: &[usize]) -> Result<Hypervector> {
    if levels.is_empty() {
        return Err(invalid("feature vector is empty"));
    }
    let dims = seeds.dims();
    let mut out = vec![0i64; dims];
    for (i, &level) in levels.iter().enumerate() {
        if level == 0 || level > seeds.levels() {
            return Err(invalid(format!("level {level} out of range 1..={}", seeds.levels())));
        }
        let seed = seeds.seed(level).elems();
        // ρ^r(s)[j] = s[(j − r) mod D]
        let r = i % dims;
        let (head, tail) = seed.split_at(dims - r);
        for (o, &v) in out[r..].iter_mut().zip(head) {
            *o += v;
        }
        for (o, &v) in out[..r].iter_mut().zip(tail) {
            *o += v;
        }
    }
    Hypervector::from_accumulator(out)
}

/// H_OC = Σ H_Fᵢ.
pub fn train(encoded: &[Hypervector]) -> Result<Hypervector> {
    let (first, rest) = encoded.split_first().ok_or_else(|| invalid("no encoded samples"))?;
    let mut h_oc = first.clone();
    for h in rest {
        if h.dims() != h_oc.dims() {
            return Err(Error::DimensionMismatch { left: h_oc.dims(), right: h.dims() });
        }
        h_oc.bundle_assign(h)?;
    }
    // A single bipolar input still becomes an accumulator model.
    Hypervector::from_accumulator(h_oc.into_elems())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn tiny_seeds() -> SeedSet {
        let a = Hypervector::from_bipolar(vec![1, 1, 1, 1]).unwrap();
        let b = Hypervector::from_bipolar(vec![1, -1, 1, -1]).unwrap();
        SeedSet::from_parts(vec![a, b], 1).unwrap()
    }

    #[test]
    fn hand_computed_two_feature_encoding() {
        let h = encode_levels(&tiny_seeds(), &[1, 2]).unwrap();
        assert_eq!(h.elems(), &[0, 2, 0, 2]);
    }

    #[test]
    fn single_feature_is_the_seed() {
        let s = SeedSet::generate(64, 4, &mut rng::master(9)).unwrap();
        let q = Quantizer::new(4, vec![(0.0, 1.0)]).unwrap();
        let h = encode(&s, &q, &[0.6]).unwrap();
        assert_eq!(h.elems(), s.seed(3).elems());
    }

    #[test]
    fn encoding_matches_explicit_permute_and_bundle() {
        let s = SeedSet::generate(50, 5, &mut rng::master(4)).unwrap();
        let levels = [3, 1, 5, 5, 2, 4, 1];
        let mut expected = Hypervector::zeros(50).unwrap();
        for (i, &l) in levels.iter().enumerate() {
            expected = expected.bundle(&s.seed(l).permute(i)).unwrap();
        }
        assert_eq!(encode_levels(&s, &levels).unwrap(), expected);
    }

    #[test]
    fn elements_bounded_by_feature_count() {
        let s = SeedSet::generate(100, 5, &mut rng::master(5)).unwrap();
        let h = encode_levels(&s, &[1, 2, 3, 4, 5, 1, 2]).unwrap();
        assert!(h.elems().iter().all(|e| e.abs() <= 7));
    }

    #[test]
    fn bad_levels_rejected() {
        assert!(encode_levels(&tiny_seeds(), &[]).is_err());
        assert!(encode_levels(&tiny_seeds(), &[3]).is_err());
        assert!(encode_levels(&tiny_seeds(), &[0]).is_err());
    }

    #[test]
    fn train_sums_and_commutes() {
        let a = Hypervector::from_accumulator(vec![1, 2, -3]).unwrap();
        let b = Hypervector::from_accumulator(vec![-1, -2, 3]).unwrap();
        let c = Hypervector::from_accumulator(vec![4, 0, 1]).unwrap();
        assert_eq!(train(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(train(&[a.clone(), b.clone()]).unwrap().elems(), &[0, 0, 0]);
        assert_eq!(
            train(&[a.clone(), b.clone(), c.clone()]).unwrap(),
            train(&[c, a, b]).unwrap()
        );
        assert!(train(&[]).is_err());
    }
}
