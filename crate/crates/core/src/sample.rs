//! Labeled sequences of frame descriptors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Pooling, Result};

/// One labeled variable-length sequence of `dim`-dimensional frames.
///
/// Frames are stored row-major: frame `f` occupies
/// `data[f * dim..(f + 1) * dim]`. Frame indices are 0-based.
///
/// In binary mode the label is `-1` or `+1`; in multiclass mode it is a class
/// index `>= 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SequenceSample {
    id: String,
    label: i64,
    group: Option<String>,
    dim: usize,
    data: Vec<f64>,
}

impl SequenceSample {
    pub fn new(
        id: impl Into<String>,
        label: i64,
        group: Option<String>,
        dim: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        let id = id.into();
        if dim == 0 {
            return Err(Error::InvalidSample(alloc::format!("{id}: dimension must be >= 1")));
        }
        if data.is_empty() {
            return Err(Error::InvalidSample(alloc::format!("{id}: empty sequence")));
        }
        if data.len() % dim != 0 {
            return Err(Error::InvalidSample(alloc::format!(
                "{id}: {} values is not a multiple of dimension {dim}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(alloc::format!(
                "{id}: non-finite value in frame {}",
                pos / dim
            )));
        }
        Ok(SequenceSample { id, label, group, dim, data })
    }

    /// Builds a sample from a list of frames, each of which must have the same
    /// length.
    pub fn from_frames(
        id: impl Into<String>,
        label: i64,
        group: Option<String>,
        frames: &[Vec<f64>],
    ) -> Result<Self> {
        let id = id.into();
        let dim = frames.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(dim * frames.len());
        for frame in frames {
            if frame.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: frame.len() });
            }
            data.extend_from_slice(frame);
        }
        Self::new(id, label, group, dim, data)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn label(&self) -> i64 {
        self.label
    }

    pub fn group(&self) -> Option<&str> {
        self.group.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frames `N`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn frame(&self, f: usize) -> &[f64] {
        &self.data[f * self.dim..(f + 1) * self.dim]
    }

    pub fn frames(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn with_label(&self, label: i64) -> Self {
        SequenceSample { label, ..self.clone() }
    }

    pub fn with_group(mut self, group: Option<String>) -> Self {
        self.group = group;
        self
    }

    /// Returns a copy with frames reordered so that new frame `i` is old frame
    /// `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::InvalidSample(alloc::format!(
                "{}: permutation of length {} for {} frames",
                self.id,
                order.len(),
                self.len()
            )));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for &f in order {
            data.extend_from_slice(self.frame(f));
        }
        Ok(SequenceSample { data, ..self.clone() })
    }
}

/// Coordinate-wise mean or max over all frames.
///
/// The mean sums each coordinate in ascending order of value, so the result
/// is bit-identical under any reordering of the frames.
pub fn pool(sample: &SequenceSample, mode: Pooling) -> Vec<f64> {
    let mut out = vec![0.0; sample.dim()];
    match mode {
        Pooling::Mean => {
            let n = sample.len() as f64;
            let mut column = Vec::with_capacity(sample.len());
            for (j, o) in out.iter_mut().enumerate() {
                column.clear();
                column.extend(sample.frames().map(|f| f[j]));
                column.sort_unstable_by(f64::total_cmp);
                *o = column.iter().fold(0.0, |acc, x| acc + x) / n;
            }
        }
        Pooling::Max => {
            out.copy_from_slice(sample.frame(0));
            for frame in sample.frames().skip(1) {
                for (o, x) in out.iter_mut().zip(frame) {
                    if x.total_cmp(o).is_gt() {
                        *o = *x;
                    }
                }
            }
        }
    }
    out
}
