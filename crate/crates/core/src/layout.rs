//! Tensor-product subsystem layouts.
//!
//! A [`SubsystemLayout`] records the ordered local dimensions and labels of a
//! composite Hilbert space. The crate uses one global index convention:
//! the FIRST subsystem is the most significant factor of a composite index
//! (big-endian), so for dims `[2, 3]` the flat index is `3 * i0 + i1`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemLayout {
    /// Build a layout from local dimensions and display labels.
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout("layout needs at least one subsystem".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidLayout(format!("local dimension {d} must be >= 1")));
        }
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != dims.len() {
            return Err(Error::InvalidLayout(format!(
                "{} labels for {} subsystems",
                labels.len(),
                dims.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidLayout(format!("duplicate label `{a}`")));
            }
        }
        Ok(Self { dims, labels })
    }

    /// Layout of `n` qubits labelled `q0..q{n-1}`.
    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n], (0..n).map(|i| format!("q{i}")).collect::<Vec<_>>())
            .expect("qubit layout is always valid")
    }

    /// Single subsystem of dimension `dim`.
    pub fn single(dim: usize, label: impl Into<String>) -> Result<Self> {
        Self::new(vec![dim], vec![label.into()])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of subsystems.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Product of the local dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Index of the subsystem with the given label, if present.
    pub fn position_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Stride of each subsystem in the flat index (big-endian).
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Flat index of a multi-index, one digit per subsystem.
    pub fn flat_index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        self.strides()
            .iter()
            .zip(digits)
            .map(|(s, d)| s * d)
            .sum()
    }

    /// Multi-index digits of a flat index.
    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        let mut out = Vec::with_capacity(self.dims.len());
        for s in strides {
            out.push(flat / s);
            flat %= s;
        }
        out
    }

    /// Concatenation with `other` (the left layout stays most significant).
    ///
    /// Colliding labels from `other` are suffixed with a prime.
    pub fn concat(&self, other: &SubsystemLayout) -> SubsystemLayout {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut candidate = l.clone();
            while labels.contains(&candidate) {
                candidate.push('\'');
            }
            labels.push(candidate);
        }
        SubsystemLayout { dims, labels }
    }

    /// Validate a set of subsystem indices: in range, strictly increasing order
    /// after sorting, no duplicates. Returns the sorted copy.
    pub fn check_indices(&self, indices: &[usize]) -> Result<Vec<usize>> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for &i in &sorted {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.len() });
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition("duplicate subsystem index".into()));
        }
        Ok(sorted)
    }

    /// Sub-layout of the given subsystems, kept in original order.
    pub fn keep(&self, indices: &[usize]) -> Result<SubsystemLayout> {
        let sorted = self.check_indices(indices)?;
        if sorted.is_empty() {
            return Err(Error::InvalidPartition("empty keep set".into()));
        }
        Ok(SubsystemLayout {
            dims: sorted.iter().map(|&i| self.dims[i]).collect(),
            labels: sorted.iter().map(|&i| self.labels[i].clone()).collect(),
        })
    }

    /// Complement of an index set, in original order.
    pub fn complement(&self, indices: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|i| !indices.contains(i)).collect()
    }

    /// Flat-index offsets contributed by the listed subsystems.
    ///
    /// Entry `m` is the flat offset of the `m`-th joint basis state of the
    /// listed subsystems (iterated big-endian among themselves), with every
    /// other subsystem's digit set to zero. Offsets for a subsystem group and
    /// its complement add up to full flat indices, which is what the partial
    /// trace and reduction kernels iterate over.
    pub fn group_offsets(&self, indices: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let group_dim: usize = indices.iter().map(|&i| self.dims[i]).product();
        let mut offsets = Vec::with_capacity(group_dim);
        for mut m in 0..group_dim {
            let mut offset = 0usize;
            // Decompose m into digits over the listed subsystems, last = least significant.
            for &i in indices.iter().rev() {
                let d = self.dims[i];
                offset += (m % d) * strides[i];
                m /= d;
            }
            offsets.push(offset);
        }
        offsets
    }

    /// True when both layouts have identical dimension lists (labels may differ).
    pub fn same_dims(&self, other: &SubsystemLayout) -> bool {
        self.dims == other.dims
    }
}

impl std::fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}:{d}"))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}
