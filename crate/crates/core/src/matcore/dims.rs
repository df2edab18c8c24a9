//! Tensor-factor bookkeeping: partial trace, partial transpose and
//! subsystem permutations.
//!
//! Subsystems are addressed by zero-based position in the factor list.
//! Basis indices are big-endian: the first factor is the most significant
//! digit, matching `ComplexMatrix::kron`.

use crate::error::{Error, Result};
use crate::matcore::matrix::{ComplexMatrix, C64, ZERO};

/// Ordered tensor-factor dimensions annotating a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemDims {
    factors: Vec<usize>,
}

impl SubsystemDims {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "factor list {factors:?} must be non-empty and positive"
            )));
        }
        Ok(Self { factors })
    }

    /// A single factor of dimension `d`.
    pub fn single(d: usize) -> Self {
        Self { factors: vec![d.max(1)] }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors }
    }

    /// Dimensions of the factors not listed in `removed`.
    pub fn without(&self, removed: &[usize]) -> Result<Self> {
        self.check_indices(removed)?;
        let kept: Vec<usize> = (0..self.len())
            .filter(|k| !removed.contains(k))
            .map(|k| self.factors[k])
            .collect();
        Ok(Self {
            factors: if kept.is_empty() { vec![1] } else { kept },
        })
    }

    /// Dimensions of the listed factors in the listed order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        self.check_indices(idx)?;
        if idx.is_empty() {
            return Ok(Self { factors: vec![1] });
        }
        Ok(Self {
            factors: idx.iter().map(|&k| self.factors[k]).collect(),
        })
    }

    pub fn check_indices(&self, idx: &[usize]) -> Result<()> {
        for &k in idx {
            if k >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    count: self.len(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn check_square(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} does not match factors {:?}",
                m.rows(),
                m.cols(),
                self.factors
            )));
        }
        Ok(())
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.len()];
        for k in (0..self.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.factors[k + 1];
        }
        s
    }

    /// Flat offsets of every multi-index over `idx` (big-endian over `idx`),
    /// embedded into the full index space.
    fn offsets(&self, idx: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &k in idx {
            let mut next = Vec::with_capacity(out.len() * self.factors[k]);
            for &base in &out {
                for v in 0..self.factors[k] {
                    next.push(base + v * strides[k]);
                }
            }
            out = next;
        }
        out
    }
}

/// Traces out the subsystems in `traced`; the remaining factors keep their
/// order.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &SubsystemDims,
    traced: &[usize],
) -> Result<ComplexMatrix> {
    dims.check_square(m)?;
    dims.check_indices(traced)?;
    let kept: Vec<usize> = (0..dims.len()).filter(|k| !traced.contains(k)).collect();
    let kept_off = dims.offsets(&kept);
    let tr_off = dims.offsets(&dedup(traced));
    let n = kept_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, &ra) in kept_off.iter().enumerate() {
        for (b, &rb) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &tr_off {
                acc += m[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Keeps only the listed subsystems (in their original relative order).
pub fn reduce_to(m: &ComplexMatrix, dims: &SubsystemDims, kept: &[usize]) -> Result<ComplexMatrix> {
    dims.check_indices(kept)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    partial_trace(m, dims, &traced)
}

/// Transposes the subsystems in `transposed`.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: &SubsystemDims,
    transposed: &[usize],
) -> Result<ComplexMatrix> {
    dims.check_square(m)?;
    dims.check_indices(transposed)?;
    let sel = dedup(transposed);
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !sel.contains(k)).collect();
    let t_off = dims.offsets(&sel);
    let r_off = dims.offsets(&rest);
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for &ri in &r_off {
        for &rj in &r_off {
            for &ti in &t_off {
                for &tj in &t_off {
                    out[(ri + ti, rj + tj)] = m[(ri + tj, rj + ti)];
                }
            }
        }
    }
    Ok(out)
}

/// Index map for reordering factors: position `k` of the result holds old
/// factor `perm[k]`. Entry `a` of the map is the old flat index of new flat
/// index `a`.
fn permutation_map(dims: &SubsystemDims, perm: &[usize]) -> Result<Vec<usize>> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} for {n} factors",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, count: n });
        }
        if seen[p] {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(dims.offsets(perm))
}

/// Dimensions after reordering with `perm`.
pub fn permuted_dims(dims: &SubsystemDims, perm: &[usize]) -> Result<SubsystemDims> {
    permutation_map(dims, perm)?;
    dims.select(perm)
}

/// Reorders tensor factors of an operator: factor `k` of the result is
/// factor `perm[k]` of the input.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &SubsystemDims,
    perm: &[usize],
) -> Result<ComplexMatrix> {
    dims.check_square(m)?;
    let map = permutation_map(dims, perm)?;
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |a, b| m[(map[a], map[b])]))
}

/// Reorders tensor factors of a state vector.
pub fn permute_vector(v: &[C64], dims: &SubsystemDims, perm: &[usize]) -> Result<Vec<C64>> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for factors {:?}",
            v.len(),
            dims.factors()
        )));
    }
    let map = permutation_map(dims, perm)?;
    Ok(map.iter().map(|&i| v[i]).collect())
}

/// The swap operator `F = Σ |ij><ji|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    f
}

fn dedup(idx: &[usize]) -> Vec<usize> {
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
