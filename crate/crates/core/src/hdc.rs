//! Hypervectors and the basic HDC algebra.
//!
//! A [`Hypervector`] stores exact signed integers. Seeds are bipolar
//! (every element is −1 or +1); bundles of seeds are accumulators and are never
//! saturated or binarized.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Bipolar,
    Accumulator,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypervector {
    elems: Vec<i64>,
    kind: Kind,
}

impl Hypervector {
    /// Wraps a ±1 sequence.
    pub fn from_bipolar(elems: Vec<i64>) -> Result<Self> {
        if elems.is_empty() {
            return Err(invalid("hypervector must have at least one dimension"));
        }
        if let Some(pos) = elems.iter().position(|&e| e != 1 && e != -1) {
            return Err(invalid(format!(
                "bipolar element {pos} is {}, expected -1 or +1",
                elems[pos]
            )));
        }
        Ok(Self { elems, kind: Kind::Bipolar })
    }

    pub fn from_accumulator(elems: Vec<i64>) -> Result<Self> {
        if elems.is_empty() {
            return Err(invalid("hypervector must have at least one dimension"));
        }
        Ok(Self { elems, kind: Kind::Accumulator })
    }

    pub fn zeros(dims: usize) -> Result<Self> {
        Self::from_accumulator(vec![0; dims])
    }

    /// Draws every element i.i.d. uniform over {−1, +1}.
    pub fn random_bipolar<R: Rng + ?Sized>(dims: usize, rng: &mut R) -> Result<Self> {
        if dims == 0 {
            return Err(invalid("dims must be >= 1"));
        }
        let elems = (0..dims)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        Ok(Self { elems, kind: Kind::Bipolar })
    }

    pub fn dims(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[i64] {
        &self.elems
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn into_elems(self) -> Vec<i64> {
        self.elems
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch { left: self.dims(), right: other.dims() });
        }
        Ok(())
    }

    /// Element-wise sum. The result is always an accumulator.
    pub fn bundle(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.bundle_assign(other)?;
        Ok(out)
    }

    /// In-place element-wise sum.
    pub fn bundle_assign(&mut self, other: &Self) -> Result<()> {
        self.check_dims(other)?;
        for (a, b) in self.elems.iter_mut().zip(&other.elems) {
            *a += *b;
        }
        self.kind = Kind::Accumulator;
        Ok(())
    }

    /// Element-wise product; bipolar × bipolar stays bipolar.
    pub fn bind(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let elems = self.elems.iter().zip(&other.elems).map(|(a, b)| a * b).collect();
        let kind = if self.kind == Kind::Bipolar && other.kind == Kind::Bipolar {
            Kind::Bipolar
        } else {
            Kind::Accumulator
        };
        Ok(Self { elems, kind })
    }

    /// Cyclic right rotation by `r` positions: ρ¹⟨h1..hd⟩ = ⟨hd, h1, .., h(d−1)⟩.
    pub fn permute(&self, r: usize) -> Self {
        let mut elems = self.elems.clone();
        elems.rotate_right(r % self.dims());
        Self { elems, kind: self.kind }
    }

    /// Σ aᵢ·bᵢ in exact integer arithmetic.
    pub fn dot_similarity(&self, other: &Self) -> Result<i128> {
        self.check_dims(other)?;
        Ok(dot(&self.elems, &other.elems))
    }

    pub fn norm_squared(&self) -> i128 {
        dot(&self.elems, &self.elems)
    }

    /// (a·b)/(‖a‖‖b‖), computed in f64 from the exact integer dot and norms.
    pub fn cosine_similarity(&self, other: &Self) -> Result<f64> {
        self.check_dims(other)?;
        let na = self.norm_squared();
        let nb = other.norm_squared();
        if na == 0 || nb == 0 {
            return Err(Error::Domain("cosine similarity of a zero-norm hypervector".into()));
        }
        let denom = (na as f64 * nb as f64).sqrt();
        let cos = dot(&self.elems, &other.elems) as f64 / denom;
        Ok(cos.clamp(-1.0, 1.0))
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        self.check_dims(other)?;
        Ok(self.elems.iter().zip(&other.elems).filter(|(a, b)| a != b).count())
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}
