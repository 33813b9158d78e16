use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Result};

/// Smallest power of two ≥ n.
pub fn padded_len(n: usize) -> usize {
    n.next_power_of_two()
}

/// Grows the training set to a power-of-two row count by appending copies of
/// distinct original rows, drawn without replacement. Power-of-two inputs
/// are returned unchanged.
pub fn pad_to_power_of_two<T: Clone, R: Rng + ?Sized>(rows: &[T], rng: &mut R) -> Result<Vec<T>> {
    let n = rows.len();
    if n == 0 {
        return Err(invalid("cannot pad an empty training set"));
    }
    let extra = padded_len(n) - n;
    let mut out = rows.to_vec();
    if extra > 0 {
        // extra < n for every n ≥ 2, so sampling without replacement is always possible.
        out.extend(index::sample(rng, n, extra).into_iter().map(|i| rows[i].clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use std::collections::HashMap;

    #[test]
    fn pads_378_to_512_with_distinct_duplicates() {
        let rows: Vec<usize> = (0..378).collect();
        let padded = pad_to_power_of_two(&rows, &mut rng::master(1)).unwrap();
        assert_eq!(padded.len(), 512);
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for r in &padded {
            *counts.entry(*r).or_default() += 1;
        }
        assert_eq!(counts.len(), 378);
        assert_eq!(counts.values().filter(|&&c| c == 2).count(), 134);
        assert!(counts.values().all(|&c| c <= 2));
    }

    #[test]
    fn power_of_two_is_unchanged() {
        let rows: Vec<u8> = (0..8).collect();
        assert_eq!(pad_to_power_of_two(&rows, &mut rng::master(2)).unwrap(), rows);
        assert_eq!(pad_to_power_of_two(&[5u8], &mut rng::master(2)).unwrap(), vec![5]);
    }

    #[test]
    fn empty_rejected() {
        assert!(pad_to_power_of_two::<u8, _>(&[], &mut rng::master(0)).is_err());
    }
}
