//! Simulation of the two local measurement primitives: local randomized
//! measurements and local SIC-POVMs. Records carry the same information an
//! experiment would produce: settings plus outcome strings.
//!
//! Sampling strategy: the exact outcome distribution is computed once per
//! setting, then outcomes are drawn categorically by inverse CDF. Substreams
//! are split from the master seed by a counter (the ChaCha stream id), so
//! records are reproducible independent of execution schedule.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha12Rng;

use crate::ensemble::{
    clifford_table, sample_haar_u2, EnsembleKind, LocalUnitary, SingleQubitUnitary,
};
use crate::error::{Error, Result};
use crate::sic::sic_constants;
use crate::state::{apply_one_qubit_raw, PureState, SubsetSpec};

/// Default cap on the SIC outcome-table size: 4^s doubles.
pub const SIC_S_CAP_DEFAULT: u32 = 13;

/// Outcomes per substream chunk when drawing SIC shots.
pub const SIC_STREAM_CHUNK: u64 = 4096;

/// Independent RNG substream `index` of a master seed.
pub fn substream(master_seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Per-setting unitary descriptors of an LRM record.
#[derive(Debug, Clone, PartialEq)]
pub enum LrmSettings {
    /// One Clifford table index per subset label, per setting.
    Clifford(Vec<Vec<u8>>),
    /// Explicit matrices per subset label, per setting.
    Haar(Vec<Vec<SingleQubitUnitary>>),
}

impl LrmSettings {
    pub fn len(&self) -> usize {
        match self {
            LrmSettings::Clifford(v) => v.len(),
            LrmSettings::Haar(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ensemble(&self) -> EnsembleKind {
        match self {
            LrmSettings::Clifford(_) => EnsembleKind::CliffordU2,
            LrmSettings::Haar(_) => EnsembleKind::HaarU2,
        }
    }
}

/// Local-randomized-measurement dataset: L settings × K outcome bitstrings.
///
/// Outcome bitstrings are encoded as integers with the first subset label as
/// the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct LrmRecord {
    pub subset: SubsetSpec,
    pub settings: LrmSettings,
    pub unitary_count: u64,
    pub shots_per_unitary: u64,
    pub outcomes: Vec<u64>,
    pub seed: Option<u64>,
}

impl LrmRecord {
    pub fn new(
        subset: SubsetSpec,
        settings: LrmSettings,
        shots_per_unitary: u64,
        outcomes: Vec<u64>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let unitary_count = settings.len() as u64;
        if unitary_count == 0 {
            return Err(Error::InvalidBudget("unitary count must be at least 1"));
        }
        if shots_per_unitary < 2 {
            return Err(Error::InvalidBudget("K must be >= 2"));
        }
        if outcomes.len() as u64 != unitary_count * shots_per_unitary {
            return Err(Error::InvalidBudget("outcome count must equal L*K"));
        }
        let s = subset.s();
        let shape_ok = match &settings {
            LrmSettings::Clifford(v) => v.iter().all(|idxs| idxs.len() == s as usize),
            LrmSettings::Haar(v) => v.iter().all(|fs| fs.len() == s as usize),
        };
        if !shape_ok {
            return Err(Error::DimensionMismatch);
        }
        if let LrmSettings::Clifford(v) = &settings {
            if v.iter().flatten().any(|&i| i >= 24) {
                return Err(Error::InvalidParam("Clifford table index out of range"));
            }
        }
        let limit = 1u64 << s;
        if outcomes.iter().any(|&z| z >= limit) {
            return Err(Error::InvalidParam("outcome exceeds s-bit range"));
        }
        Ok(LrmRecord {
            subset,
            settings,
            unitary_count,
            shots_per_unitary,
            outcomes,
            seed,
        })
    }

    pub fn ensemble(&self) -> EnsembleKind {
        self.settings.ensemble()
    }
}

/// SIC dataset: M outcome strings over {1..4}^s, encoded base-4 with the
/// first subset label as the most significant digit pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SicRecord {
    pub subset: SubsetSpec,
    pub shots: u64,
    pub outcomes: Vec<u64>,
    pub seed: Option<u64>,
}

impl SicRecord {
    pub fn new(
        subset: SubsetSpec,
        shots: u64,
        outcomes: Vec<u64>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if shots < 2 {
            return Err(Error::InvalidBudget("M must be >= 2"));
        }
        if outcomes.len() as u64 != shots {
            return Err(Error::InvalidBudget("outcome count must equal M"));
        }
        let limit = 1u64 << (2 * subset.s());
        if outcomes.iter().any(|&q| q >= limit) {
            return Err(Error::InvalidParam("outcome exceeds 4^s range"));
        }
        Ok(SicRecord {
            subset,
            shots,
            outcomes,
            seed,
        })
    }
}

fn check_state_subset(state: &PureState, subset: &SubsetSpec) -> Result<()> {
    if state.n() != subset.n() {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}

/// Born probabilities over the 2^s computational outcomes on the subset after
/// rotating it by the local unitary (identity elsewhere).
pub fn lrm_distribution(state: &PureState, unitary: &LocalUnitary) -> Result<Vec<f64>> {
    check_state_subset(state, unitary.subset())?;
    let mut sampler = RotationScratch::new(state, unitary.subset());
    let mats: Vec<crate::mat::Mat2> =
        unitary.factors().iter().map(|f| *f.matrix()).collect();
    sampler.distribution(state, &mats);
    Ok(sampler.probs.clone())
}

/// Reusable buffers for rotating a state and marginalizing onto the subset;
/// `zmap` gathers each full index to its s-bit outcome.
struct RotationScratch {
    bit_positions: Vec<u32>,
    zmap: Vec<u32>,
    amps: Vec<C64>,
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl RotationScratch {
    fn new(state: &PureState, subset: &SubsetSpec) -> Self {
        let s = subset.s() as usize;
        let bit_positions: Vec<u32> = subset
            .labels()
            .iter()
            .map(|&l| state.bit_position(l))
            .collect();
        let zmap: Vec<u32> = (0..state.amplitudes().len())
            .map(|idx| {
                let mut z = 0u32;
                for (j, &p) in bit_positions.iter().enumerate() {
                    z |= (((idx >> p) & 1) as u32) << (s - 1 - j);
                }
                z
            })
            .collect();
        RotationScratch {
            bit_positions,
            zmap,
            amps: vec![C64::new(0.0, 0.0); state.amplitudes().len()],
            probs: vec![0.0; 1 << s],
            cdf: Vec::with_capacity(1 << s),
        }
    }

    fn distribution(&mut self, state: &PureState, factors: &[crate::mat::Mat2]) {
        self.amps.copy_from_slice(state.amplitudes());
        for (mat, &bit) in factors.iter().zip(self.bit_positions.iter()) {
            apply_one_qubit_raw(&mut self.amps, mat, bit);
        }
        self.probs.iter_mut().for_each(|p| *p = 0.0);
        for (amp, &z) in self.amps.iter().zip(self.zmap.iter()) {
            self.probs[z as usize] += amp.norm_sqr();
        }
    }
}

fn cumulative(probs: &[f64], cdf: &mut Vec<f64>) {
    cdf.clear();
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
}

fn draw(cdf: &[f64], rng: &mut ChaCha12Rng) -> u64 {
    let u: f64 = rng.gen();
    let idx = cdf.partition_point(|&c| c <= u);
    idx.min(cdf.len() - 1) as u64
}

/// Simulates an LRM experiment: L independent settings drawn from the
/// ensemble, K categorical shots per setting. Deterministic given the seed;
/// setting l draws from substream l of the master seed.
pub fn simulate_lrm(
    state: &PureState,
    subset: &SubsetSpec,
    unitary_count: u64,
    shots_per_unitary: u64,
    ensemble: EnsembleKind,
    seed: u64,
) -> Result<LrmRecord> {
    check_state_subset(state, subset)?;
    if unitary_count < 1 {
        return Err(Error::InvalidBudget("unitary count must be at least 1"));
    }
    if shots_per_unitary < 2 {
        return Err(Error::InvalidBudget("K must be >= 2"));
    }
    let s = subset.s() as usize;
    let table = clifford_table();
    let table_mats: Vec<crate::mat::Mat2> =
        table.iter().map(|u| *u.matrix()).collect();
    let mut outcomes = Vec::with_capacity((unitary_count * shots_per_unitary) as usize);
    let mut clifford_settings: Vec<Vec<u8>> = Vec::new();
    let mut haar_settings: Vec<Vec<SingleQubitUnitary>> = Vec::new();

    let mut scratch = RotationScratch::new(state, subset);
    let mut factor_mats = Vec::with_capacity(s);

    for l in 0..unitary_count {
        let mut rng = substream(seed, l);
        factor_mats.clear();
        match ensemble {
            EnsembleKind::CliffordU2 => {
                let idxs: Vec<u8> = (0..s).map(|_| rng.gen_range(0..24u8)).collect();
                factor_mats.extend(idxs.iter().map(|&i| table_mats[i as usize]));
                clifford_settings.push(idxs);
            }
            EnsembleKind::HaarU2 => {
                let factors: Vec<SingleQubitUnitary> =
                    (0..s).map(|_| sample_haar_u2(&mut rng)).collect();
                factor_mats.extend(factors.iter().map(|f| *f.matrix()));
                haar_settings.push(factors);
            }
        }
        scratch.distribution(state, &factor_mats);
        cumulative(&scratch.probs, &mut scratch.cdf);
        for _ in 0..shots_per_unitary {
            outcomes.push(draw(&scratch.cdf, &mut rng));
        }
    }

    let settings = match ensemble {
        EnsembleKind::CliffordU2 => LrmSettings::Clifford(clifford_settings),
        EnsembleKind::HaarU2 => LrmSettings::Haar(haar_settings),
    };
    LrmRecord::new(subset.clone(), settings, shots_per_unitary, outcomes, Some(seed))
}

/// Exact SIC outcome distribution P(q) over {1..4}^s, as a 4^s table indexed
/// by the base-4 encoding of q − 1 per symbol.
pub fn sic_distribution(state: &PureState, subset: &SubsetSpec) -> Result<Vec<f64>> {
    sic_distribution_capped(state, subset, SIC_S_CAP_DEFAULT)
}

/// Same as [`sic_distribution`] with an explicit cap on s.
pub fn sic_distribution_capped(
    state: &PureState,
    subset: &SubsetSpec,
    cap: u32,
) -> Result<Vec<f64>> {
    check_state_subset(state, subset)?;
    let s = subset.s();
    if s > cap {
        return Err(Error::SicTableCap { s, cap });
    }
    let sic = sic_constants();
    let n = state.n();

    // Sequentially widen each subset axis from dimension 2 to 4 by the
    // analysis operator with rows ⟨φ̃_k|. Axis order: subset labels first
    // (4-ary, first label most significant), then the untouched qubits.
    let mut current: Vec<C64> = state.amplitudes().to_vec();
    let complement: Vec<u32> = (1..=n).filter(|q| !subset.labels().contains(q)).collect();

    // Reorder amplitudes so subset bits are the leading axes.
    let order: Vec<u32> = subset
        .labels()
        .iter()
        .chain(complement.iter())
        .map(|&q| state.bit_position(q))
        .collect();
    let dim = current.len();
    let mut reordered = vec![C64::new(0.0, 0.0); dim];
    for (idx, &amp) in current.iter().enumerate() {
        let mut new_idx = 0usize;
        for (j, &p) in order.iter().enumerate() {
            new_idx |= ((idx >> p) & 1) << (n as usize - 1 - j);
        }
        reordered[new_idx] = amp;
    }
    current = reordered;

    // current is a tensor of shape [2; s] ++ [2; n−s]; widen axis j to 4.
    let rest_dim = 1usize << (n - s);
    for j in 0..s as usize {
        let lead_dim = 4usize.pow(j as u32);
        let tail_dim = (1usize << (s as usize - 1 - j)) * rest_dim;
        let mut next = vec![C64::new(0.0, 0.0); lead_dim * 4 * tail_dim];
        for lead in 0..lead_dim {
            for tail in 0..tail_dim {
                let base = lead * 2 * tail_dim + tail;
                let a0 = current[base];
                let a1 = current[base + tail_dim];
                for k in 0..4 {
                    let row = &sic.povm[k];
                    next[lead * 4 * tail_dim + k * tail_dim + tail] =
                        row[0].conj() * a0 + row[1].conj() * a1;
                }
            }
        }
        current = next;
    }

    let mut probs = vec![0.0; 4usize.pow(s)];
    for (idx, amp) in current.iter().enumerate() {
        probs[idx / rest_dim] += amp.norm_sqr();
    }
    Ok(probs)
}

/// SIC outcome distribution realized through the Neumark dilation: one
/// ancilla per probed qubit, U_SIC† on each pair, computational-basis readout.
pub fn dilated_sic_distribution(state: &PureState, subset: &SubsetSpec) -> Result<Vec<f64>> {
    check_state_subset(state, subset)?;
    let n = state.n();
    let s = subset.s();
    if n + s > 26 {
        return Err(Error::SicTableCap { s, cap: 26 - n });
    }
    // Extended register: original qubits 1..n, ancilla for the j-th subset
    // label appended as qubit n+j (all |0⟩).
    let mut extended = PureState::new({
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << (n + s)];
        for (idx, &amp) in state.amplitudes().iter().enumerate() {
            amps[idx << s] = amp;
        }
        amps
    })?;
    let u_dagger = sic_constants().dilation.adjoint();
    for (j, &label) in subset.labels().iter().enumerate() {
        extended.apply_two_qubit(&u_dagger, label, n + 1 + j as u32)?;
    }

    // Read each pair (system bit, ancilla bit) as one base-4 symbol.
    let pair_positions: Vec<(u32, u32)> = subset
        .labels()
        .iter()
        .enumerate()
        .map(|(j, &label)| {
            (
                extended.bit_position(label),
                extended.bit_position(n + 1 + j as u32),
            )
        })
        .collect();
    let mut probs = vec![0.0; 4usize.pow(s)];
    for (idx, amp) in extended.amplitudes().iter().enumerate() {
        let mut q = 0usize;
        for (j, &(ps, pa)) in pair_positions.iter().enumerate() {
            let sym = (((idx >> ps) & 1) << 1) | ((idx >> pa) & 1);
            q |= sym << (2 * (s as usize - 1 - j));
        }
        probs[q] += amp.norm_sqr();
    }
    Ok(probs)
}

fn draw_sic_outcomes(dist: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(dist.len());
    cumulative(dist, &mut cdf);
    let mut outcomes = Vec::with_capacity(shots as usize);
    let chunks = shots.div_ceil(SIC_STREAM_CHUNK);
    for chunk in 0..chunks {
        let mut rng = substream(seed, chunk);
        let lo = chunk * SIC_STREAM_CHUNK;
        let hi = (lo + SIC_STREAM_CHUNK).min(shots);
        for _ in lo..hi {
            outcomes.push(draw(&cdf, &mut rng));
        }
    }
    outcomes
}

/// Simulates M i.i.d. local SIC measurements (a single measurement setting).
pub fn simulate_sic(
    state: &PureState,
    subset: &SubsetSpec,
    shots: u64,
    seed: u64,
) -> Result<SicRecord> {
    if shots < 2 {
        return Err(Error::InvalidBudget("M must be >= 2"));
    }
    let dist = sic_distribution(state, subset)?;
    let outcomes = draw_sic_outcomes(&dist, shots, seed);
    SicRecord::new(subset.clone(), shots, outcomes, Some(seed))
}

/// Same output distribution as [`simulate_sic`], realized through the
/// Neumark-dilated projective measurement. Cross-validation path.
pub fn simulate_sic_dilated(
    state: &PureState,
    subset: &SubsetSpec,
    shots: u64,
    seed: u64,
) -> Result<SicRecord> {
    if shots < 2 {
        return Err(Error::InvalidBudget("M must be >= 2"));
    }
    let dist = dilated_sic_distribution(state, subset)?;
    let outcomes = draw_sic_outcomes(&dist, shots, seed);
    SicRecord::new(subset.clone(), shots, outcomes, Some(seed))
}
