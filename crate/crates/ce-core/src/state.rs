//! Exact pure-state algebra: states, reduced purities, and the concentratable
//! entanglement in its equivalent exact forms.
//!
//! Index convention: qubit 1 is the most significant bit of the amplitude
//! index, and qubit labels are 1-based throughout.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::{Mat2, Mat4, ONE, ZERO};

/// Cap on the explicit two-copy projector route; it is a verification oracle,
/// not the production path.
pub const TWO_COPY_CAP: u32 = 7;

/// Normalized n-qubit pure state over 2^n computational-basis amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: u32,
    amps: Vec<C64>,
}

impl PureState {
    /// Builds a state from raw amplitudes, normalizing to unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr < 1e-300 {
            return Err(Error::Unnormalizable);
        }
        let scale = 1.0 / norm_sqr.sqrt();
        let amps: Vec<C64> = amps.into_iter().map(|a| a * scale).collect();
        let n = len.trailing_zeros();
        Ok(PureState { n, amps })
    }

    /// (|0…0⟩ + |1…1⟩)/√2 on n ≥ 2 qubits.
    pub fn ghz(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::QubitCountTooSmall { min: 2, got: n });
        }
        let dim = 1usize << n;
        let mut amps = vec![ZERO; dim];
        let x = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = x;
        amps[dim - 1] = x;
        Ok(PureState { n, amps })
    }

    /// Uniform superposition of all Hamming-weight-one basis states on n ≥ 1
    /// qubits.
    pub fn w(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::QubitCountTooSmall { min: 1, got: n });
        }
        let dim = 1usize << n;
        let mut amps = vec![ZERO; dim];
        let x = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        for q in 0..n {
            amps[1usize << q] = x;
        }
        Ok(PureState { n, amps })
    }

    /// |0…0⟩ on n ≥ 1 qubits.
    pub fn product_zero(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::QubitCountTooSmall { min: 1, got: n });
        }
        let mut amps = vec![ZERO; 1usize << n];
        amps[0] = ONE;
        Ok(PureState { n, amps })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Bit of `index` belonging to 1-based qubit `label`.
    #[inline]
    pub fn bit_position(&self, label: u32) -> u32 {
        self.n - label
    }

    /// Applies a single-qubit unitary to the given 1-based qubit, in place.
    pub fn apply_one_qubit(&mut self, u: &Mat2, label: u32) -> Result<()> {
        if label == 0 || label > self.n {
            return Err(Error::LabelOutOfRange { label, n: self.n });
        }
        let bit = self.bit_position(label);
        apply_one_qubit_raw(&mut self.amps, u, bit);
        Ok(())
    }

    /// Applies a two-qubit unitary to the ordered pair (`hi`, `lo`); `hi`
    /// supplies the more significant bit of the 2-bit local index.
    pub fn apply_two_qubit(&mut self, u: &Mat4, hi: u32, lo: u32) -> Result<()> {
        if hi == 0 || hi > self.n {
            return Err(Error::LabelOutOfRange { label: hi, n: self.n });
        }
        if lo == 0 || lo > self.n || lo == hi {
            return Err(Error::LabelOutOfRange { label: lo, n: self.n });
        }
        let ph = self.bit_position(hi);
        let pl = self.bit_position(lo);
        let dim = self.amps.len();
        let mask_h = 1usize << ph;
        let mask_l = 1usize << pl;
        for base in 0..dim {
            if base & mask_h != 0 || base & mask_l != 0 {
                continue;
            }
            let idx = [base, base | mask_l, base | mask_h, base | mask_h | mask_l];
            let v = [
                self.amps[idx[0]],
                self.amps[idx[1]],
                self.amps[idx[2]],
                self.amps[idx[3]],
            ];
            for (r, &i) in idx.iter().enumerate() {
                let mut acc = ZERO;
                for (c, &vc) in v.iter().enumerate() {
                    acc += u.0[r][c] * vc;
                }
                self.amps[i] = acc;
            }
        }
        Ok(())
    }
}

pub(crate) fn apply_one_qubit_raw(amps: &mut [C64], u: &Mat2, bit: u32) {
    let mask = 1usize << bit;
    let low = mask - 1;
    for pair in 0..amps.len() >> 1 {
        let base = ((pair & !low) << 1) | (pair & low);
        let a0 = amps[base];
        let a1 = amps[base | mask];
        amps[base] = u.0[0][0] * a0 + u.0[0][1] * a1;
        amps[base | mask] = u.0[1][0] * a0 + u.0[1][1] * a1;
    }
}

/// Non-empty subset S ⊆ [n] of 1-based qubit labels, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSpec {
    n: u32,
    labels: Vec<u32>,
}

impl SubsetSpec {
    pub fn new(n: u32, labels: Vec<u32>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySubset);
        }
        for w in labels.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::UnsortedSubset);
            }
        }
        for &label in &labels {
            if label == 0 || label > n {
                return Err(Error::LabelOutOfRange { label, n });
            }
        }
        Ok(SubsetSpec { n, labels })
    }

    /// The full set [n].
    pub fn full(n: u32) -> Result<Self> {
        Self::new(n, (1..=n).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn s(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn is_full(&self) -> bool {
        self.s() == self.n
    }
}

/// tr(ρ_α²) for α ⊆ [n] given by 1-based labels; α = ∅ gives exactly 1.
///
/// The purity is computed from the Gram matrix of the amplitude tensor
/// reshaped along α, using the smaller of α and its complement (their
/// purities agree for pure states), so memory stays O(2^n).
pub fn reduced_purity(state: &PureState, labels: &[u32]) -> Result<f64> {
    let n = state.n;
    let mut seen = 0u64;
    for &label in labels {
        if label == 0 || label > n {
            return Err(Error::LabelOutOfRange { label, n });
        }
        let bit = 1u64 << (label - 1);
        if seen & bit != 0 {
            return Err(Error::UnsortedSubset);
        }
        seen |= bit;
    }
    if labels.is_empty() || labels.len() == n as usize {
        return Ok(1.0);
    }

    // Row side = smaller of α and its complement.
    let complement: Vec<u32> = (1..=n).filter(|q| seen & (1u64 << (q - 1)) == 0).collect();
    let rows: &[u32] = if labels.len() <= complement.len() {
        labels
    } else {
        &complement
    };
    let cols: Vec<u32> = (1..=n)
        .filter(|q| !rows.contains(q))
        .collect();

    let k = rows.len();
    let row_positions: Vec<u32> = rows.iter().map(|&q| state.bit_position(q)).collect();
    let col_positions: Vec<u32> = cols.iter().map(|&q| state.bit_position(q)).collect();

    let nrows = 1usize << k;
    let ncols = 1usize << (n as usize - k);
    let spread = |bits: usize, positions: &[u32]| -> usize {
        let mut idx = 0usize;
        for (j, &p) in positions.iter().enumerate() {
            if bits & (1usize << (positions.len() - 1 - j)) != 0 {
                idx |= 1usize << p;
            }
        }
        idx
    };
    let row_base: Vec<usize> = (0..nrows).map(|r| spread(r, &row_positions)).collect();
    let col_base: Vec<usize> = (0..ncols).map(|c| spread(c, &col_positions)).collect();

    // G = M M†, purity = Σ |G_{r r'}|².
    let mut purity = 0.0;
    for r in 0..nrows {
        for rp in 0..nrows {
            let mut g = ZERO;
            for &cb in &col_base {
                g += state.amps[row_base[r] | cb] * state.amps[row_base[rp] | cb].conj();
            }
            purity += g.norm_sqr();
        }
    }
    Ok(purity)
}

/// All subset purities tr(ρ_α²) for α ∈ P(S), indexed by bitmask over the
/// subset's labels (bit j of the mask = j-th label of S).
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetPurities {
    labels: Vec<u32>,
    values: Vec<f64>,
}

impl SubsetPurities {
    pub fn compute(state: &PureState, subset: &SubsetSpec) -> Result<Self> {
        if subset.n() != state.n() {
            return Err(Error::DimensionMismatch);
        }
        let s = subset.s() as usize;
        let mut values = Vec::with_capacity(1usize << s);
        let mut scratch = Vec::with_capacity(s);
        for mask in 0..(1usize << s) {
            scratch.clear();
            for (j, &label) in subset.labels().iter().enumerate() {
                if mask & (1usize << j) != 0 {
                    scratch.push(label);
                }
            }
            let p = reduced_purity(state, &scratch)?;
            debug_assert!(p >= 0.5f64.powi(scratch.len() as i32) - 1e-10 && p <= 1.0 + 1e-10);
            values.push(p);
        }
        Ok(SubsetPurities {
            labels: subset.labels().to_vec(),
            values,
        })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Purity for the sub-subset selected by `mask` over this subset's labels.
    pub fn get(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Concentratable entanglement C(S) = 1 − 2^{−s} Σ_{α∈P(S)} tr(ρ_α²).
pub fn exact_ce(state: &PureState, subset: &SubsetSpec) -> Result<f64> {
    let purities = SubsetPurities::compute(state, subset)?;
    let s = subset.s();
    Ok(1.0 - purities.sum() / (1u64 << s) as f64)
}

/// C(S) via the two-copy symmetric-projector expectation
/// 1 − ⟨ψ⊗ψ| Π_{i∈S} Π₊^i |ψ⊗ψ⟩.
///
/// Dense two-copy verification oracle, capped at [`TWO_COPY_CAP`] qubits.
pub fn exact_ce_via_projectors(state: &PureState, subset: &SubsetSpec) -> Result<f64> {
    let n = state.n();
    if subset.n() != n {
        return Err(Error::DimensionMismatch);
    }
    if n > TWO_COPY_CAP {
        return Err(Error::TwoCopyOracleLimit { n, cap: TWO_COPY_CAP });
    }
    let dim = state.amps.len();
    let mut two_copy: Vec<C64> = Vec::with_capacity(dim * dim);
    for a in &state.amps {
        for b in &state.amps {
            two_copy.push(a * b);
        }
    }
    let original = two_copy.clone();

    // Π₊^i v = (v + F_i v)/2 where F_i swaps qubit i's bit across the copies.
    for &label in subset.labels() {
        let p1 = (n - label) + n; // qubit i of copy 1
        let p2 = n - label; // qubit i of copy 2
        let m1 = 1usize << p1;
        let m2 = 1usize << p2;
        let next: Vec<C64> = (0..two_copy.len())
            .map(|idx| {
                let b1 = idx & m1 != 0;
                let b2 = idx & m2 != 0;
                let swapped = if b1 != b2 { idx ^ m1 ^ m2 } else { idx };
                (two_copy[idx] + two_copy[swapped]) * 0.5
            })
            .collect();
        two_copy = next;
    }

    let mut expectation = ZERO;
    for (a, b) in original.iter().zip(two_copy.iter()) {
        expectation += a.conj() * b;
    }
    Ok(1.0 - expectation.re)
}

/// Multipartite concurrence value c_n ∈ [0, 2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue(pub f64);

/// c_n = 2√C([n]), inverting C([n]) = c_n²/4.
pub fn ce_to_concurrence(ce: f64) -> Result<ConcurrenceValue> {
    if !(0.0..=1.0).contains(&ce) {
        return Err(Error::InvalidParam("CE must lie in [0, 1]"));
    }
    Ok(ConcurrenceValue(2.0 * ce.sqrt()))
}

/// Mixed-state lower bound
/// C^ℓ([n]) = 2^{−n} + (1 − 2^{−n}) tr(ρ²) − 2^{−n} Σ_{α∈P([n])} tr(ρ_α²).
///
/// For pure inputs this equals the exact CE; the gap is
/// (1 − 2^{−n})(1 − tr ρ²).
pub fn mixed_lower_bound(purity_full: f64, subset_purity_sum: f64, n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::QubitCountTooSmall { min: 1, got: n });
    }
    let dim = (1u64 << n) as f64;
    let tol = 1e-10;
    if !(1.0 / dim - tol..=1.0 + tol).contains(&purity_full) {
        return Err(Error::InvalidParam("full-state purity outside [2^-n, 1]"));
    }
    if !(0.0..=dim + tol).contains(&subset_purity_sum) {
        return Err(Error::InvalidParam("subset purity sum outside [0, 2^n]"));
    }
    Ok(1.0 / dim + (1.0 - 1.0 / dim) * purity_full - subset_purity_sum / dim)
}

/// SWAP operator and symmetric/antisymmetric projectors for one qubit pair
/// across two copies.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCopyOperators {
    pub swap: Mat4,
    pub sym: Mat4,
    pub antisym: Mat4,
}

impl TwoCopyOperators {
    pub fn qubit_pair() -> Self {
        let mut swap = Mat4::zero();
        for i in 0..2usize {
            for j in 0..2usize {
                swap.0[2 * j + i][2 * i + j] = ONE;
            }
        }
        let half = C64::new(0.5, 0.0);
        let sym = Mat4::identity().add(&swap).scale(half);
        let antisym = Mat4::identity().add(&swap.scale(C64::new(-1.0, 0.0))).scale(half);
        TwoCopyOperators { swap, sym, antisym }
    }
}

/// Π₊/3 for a single qubit pair: the two-copy twirl target.
pub fn symmetric_projector_third() -> Mat4 {
    TwoCopyOperators::qubit_pair()
        .sym
        .scale(C64::new(1.0 / 3.0, 0.0))
}
