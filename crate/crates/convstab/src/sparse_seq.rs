//! Finitely supported complex sequences on the integers and their convolution.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely supported complex sequence on ℤ.
///
/// The support is strictly increasing, values are aligned by position and
/// never exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSequence {
    support: Vec<i64>,
    values: Vec<Complex64>,
}

/// Ordered finite set of integers, used for convolution supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    elements: Vec<i64>,
}

impl SupportSet {
    /// Builds a set from arbitrary input; sorts and deduplicates.
    ///
    /// Inputs whose pairwise sums (needed by the convolution index
    /// arithmetic) would overflow the signed 64-bit range are rejected.
    pub fn new(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let (Some(&min), Some(&max)) = (elements.first(), elements.last()) {
            // Pairwise sums are monotone in both arguments, so the extremes
            // min+min and max+max cover the whole range.
            if min.checked_add(min).is_none() || max.checked_add(max).is_none() {
                return Err(Error::IndexOverflow(format!(
                    "support range [{min}, {max}] admits overflowing pairwise sums"
                )));
            }
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    /// max − min; 0 for empty or singleton sets.
    pub fn diameter(&self) -> i64 {
        match (self.elements.first(), self.elements.last()) {
            (Some(&min), Some(&max)) => max - min,
            _ => 0,
        }
    }

    /// Union of two sets.
    pub fn union(&self, other: &SupportSet) -> Result<SupportSet> {
        let mut all = self.elements.clone();
        all.extend_from_slice(&other.elements);
        SupportSet::new(all)
    }
}

/// Serialized form: `{"support":[i,...],"values":[[re,im],...]}`.
#[derive(Serialize, Deserialize)]
struct SeqJson {
    support: Vec<i64>,
    values: Vec<(f64, f64)>,
}

impl SparseSequence {
    /// Builds a sequence from (index, value) data.
    ///
    /// Unsorted input is sorted; duplicate indices are merged by addition;
    /// exact zeros are dropped. Non-finite values are rejected.
    pub fn new(support: Vec<i64>, values: Vec<Complex64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                got: values.len(),
            });
        }
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidInput("non-finite value".into()));
            }
        }
        let mut merged: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (i, v) in support.into_iter().zip(values) {
            *merged.entry(i).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let (support, values): (Vec<_>, Vec<_>) = merged
            .into_iter()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .unzip();
        // Overflow guard shared with SupportSet.
        SupportSet::new(support.clone())?;
        Ok(Self { support, values })
    }

    /// The Dirac delta at `index`.
    pub fn delta(index: i64, value: Complex64) -> Result<Self> {
        Self::new(vec![index], vec![value])
    }

    /// Reads a dense vector as a sequence on support {0..len−1}.
    pub fn from_dense(dense: &[Complex64]) -> Result<Self> {
        Self::new((0..dense.len() as i64).collect(), dense.to_vec())
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support_set(&self) -> SupportSet {
        SupportSet {
            elements: self.support.clone(),
        }
    }

    /// ℓ²-norm of the value list.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Pointwise scaling by a complex constant (zero scale empties the sequence).
    pub fn scale(&self, c: Complex64) -> Result<Self> {
        Self::new(
            self.support.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }

    /// Translates the support by `shift`.
    pub fn shift(&self, shift: i64) -> Result<Self> {
        let support = self
            .support
            .iter()
            .map(|&i| {
                i.checked_add(shift).ok_or_else(|| {
                    Error::IndexOverflow(format!("shift of {i} by {shift} overflows"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(support, self.values.clone())
    }

    /// Translates the support so its minimum is 0. Values are unchanged.
    pub fn canonicalize_shift(&self) -> Result<Self> {
        let &min = self.support.first().ok_or(Error::EmptySequence)?;
        self.shift(-min)
    }

    /// Places the values on a dense vector of length `len` at positions given
    /// by `positions` (aligned with the support).
    pub fn embed_dense(&self, positions: &[i64], len: usize) -> Result<Vec<Complex64>> {
        if positions.len() != self.support.len() {
            return Err(Error::LengthMismatch {
                expected: self.support.len(),
                got: positions.len(),
            });
        }
        let mut dense = vec![Complex64::new(0.0, 0.0); len];
        for (&p, &v) in positions.iter().zip(&self.values) {
            if p < 0 || p as usize >= len {
                return Err(Error::IndexOutOfRange { index: p, n: len });
            }
            dense[p as usize] += v;
        }
        Ok(dense)
    }

    pub fn to_json(&self) -> String {
        let repr = SeqJson {
            support: self.support.clone(),
            values: self.values.iter().map(|v| (v.re, v.im)).collect(),
        };
        serde_json::to_string(&repr).expect("sequence serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let repr: SeqJson = serde_json::from_str(s)?;
        Self::new(
            repr.support,
            repr.values
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

/// Convolution of two finitely supported sequences,
/// (x * y)_j = Σ_i x_i y_{j−i}.
///
/// The output support is contained in the sumset supp x + supp y; exact
/// zeros produced by cancellation are dropped.
pub fn convolve(x: &SparseSequence, y: &SparseSequence) -> Result<SparseSequence> {
    let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
    for (&i, &xv) in x.support.iter().zip(&x.values) {
        for (&j, &yv) in y.support.iter().zip(&y.values) {
            let k = i.checked_add(j).ok_or_else(|| {
                Error::IndexOverflow(format!("support sum {i} + {j} overflows"))
            })?;
            *acc.entry(k).or_insert(Complex64::new(0.0, 0.0)) += xv * yv;
        }
    }
    let (support, values): (Vec<_>, Vec<_>) = acc.into_iter().unzip();
    SparseSequence::new(support, values)
}

/// Circular convolution of two equal-length dense vectors, index arithmetic
/// modulo the common length.
pub fn circular_convolve(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptySequence);
    }
    let m = x.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for (i, &xv) in x.iter().enumerate() {
        for (j, &yv) in y.iter().enumerate() {
            out[(i + j) % m] += xv * yv;
        }
    }
    Ok(out)
}
