//! Single-qubit unitary ensembles and 2-design verification.
//!
//! Cliffords default for local randomized measurements since the 24-element
//! group admits exhaustive oracles; Haar sampling is available everywhere an
//! ensemble is chosen.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mat::{inner2, kron_vec2, outer4, Mat2, Mat4, ONE, ZERO};
use crate::state::{symmetric_projector_third, SubsetSpec};

/// A 2x2 unitary, validated to within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitUnitary(Mat2);

impl SingleQubitUnitary {
    pub fn new(mat: Mat2) -> Result<Self> {
        if mat.unitarity_distance() > 1e-12 {
            return Err(Error::InvalidParam("matrix is not unitary within 1e-12"));
        }
        Ok(SingleQubitUnitary(mat))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// Equality up to global phase: |tr(A†B)| = 2.
    pub fn phase_equal(&self, other: &Self) -> bool {
        (self.0.overlap_trace(&other.0).norm() - 2.0).abs() < 1e-9
    }
}

/// Tensor product of one single-qubit unitary per label of a subset.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    subset: SubsetSpec,
    factors: Vec<SingleQubitUnitary>,
}

impl LocalUnitary {
    pub fn new(subset: SubsetSpec, factors: Vec<SingleQubitUnitary>) -> Result<Self> {
        if factors.len() != subset.s() as usize {
            return Err(Error::DimensionMismatch);
        }
        Ok(LocalUnitary { subset, factors })
    }

    pub fn subset(&self) -> &SubsetSpec {
        &self.subset
    }

    pub fn factors(&self) -> &[SingleQubitUnitary] {
        &self.factors
    }
}

/// Which single-qubit ensemble supplies the local rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    HaarU2,
    CliffordU2,
}

impl EnsembleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnsembleKind::HaarU2 => "haar",
            EnsembleKind::CliffordU2 => "clifford",
        }
    }
}

/// One standard normal pair via Box-Muller.
fn gauss_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * core::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

fn gauss_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let (re, im) = gauss_pair(rng);
    C64::new(re, im)
}

/// Haar-random U(2): Gram-Schmidt of a complex Ginibre matrix with the
/// R-diagonal phase fixed real positive.
pub fn sample_haar_u2<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitUnitary {
    loop {
        let g1 = [gauss_c64(rng), gauss_c64(rng)];
        let g2 = [gauss_c64(rng), gauss_c64(rng)];
        let n1 = (g1[0].norm_sqr() + g1[1].norm_sqr()).sqrt();
        if n1 < 1e-12 {
            continue;
        }
        let q1 = [g1[0] / n1, g1[1] / n1];
        let proj = inner2(&q1, &g2);
        let v = [g2[0] - proj * q1[0], g2[1] - proj * q1[1]];
        let n2 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n2 < 1e-12 {
            continue;
        }
        let q2 = [v[0] / n2, v[1] / n2];
        let mat = Mat2([[q1[0], q2[0]], [q1[1], q2[1]]]);
        debug_assert!(mat.unitarity_distance() < 1e-12);
        return SingleQubitUnitary(mat);
    }
}

fn hadamard() -> Mat2 {
    let x = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    Mat2([[x, x], [x, -x]])
}

fn phase_gate() -> Mat2 {
    Mat2([[ONE, ZERO], [ZERO, C64::new(0.0, 1.0)]])
}

/// Global-phase normalization: first entry with nonzero magnitude (row-major)
/// is made real positive.
fn normalize_phase(mat: &Mat2) -> Mat2 {
    for i in 0..2 {
        for j in 0..2 {
            let e = mat.0[i][j];
            if e.norm() > 1e-9 {
                return mat.scale(e.conj() / e.norm());
            }
        }
    }
    *mat
}

/// The 24 single-qubit Cliffords in canonical order: breadth-first closure of
/// ⟨H, S⟩ starting from the identity, phase-normalized so the first nonzero
/// entry of each matrix is real positive.
pub fn clifford_table() -> Vec<SingleQubitUnitary> {
    let gens = [hadamard(), phase_gate()];
    let mut table: Vec<Mat2> = Vec::with_capacity(24);
    table.push(normalize_phase(&Mat2::identity()));
    let mut cursor = 0;
    while cursor < table.len() {
        let current = table[cursor];
        for g in &gens {
            let candidate = normalize_phase(&g.mul(&current));
            if !table.iter().any(|m| m.max_abs_diff(&candidate) < 1e-9) {
                table.push(candidate);
            }
        }
        cursor += 1;
    }
    debug_assert_eq!(table.len(), 24);
    table.into_iter().map(SingleQubitUnitary).collect()
}

/// How to average a twirl check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlMode {
    /// Exact average over the 24-element Clifford table.
    Exhaustive,
    /// Monte-Carlo average over `samples` draws from the ensemble.
    MonteCarlo { samples: u64, seed: u64 },
}

/// Max-entry distance between the ensemble average of
/// (U|z⟩⟨z|U†)^{⊗2} and Π₊/3.
pub fn twirl_check(ensemble: EnsembleKind, z: u8, mode: TwirlMode) -> Result<f64> {
    if z > 1 {
        return Err(Error::InvalidParam("basis label must be 0 or 1"));
    }
    let accumulate = |acc: &mut Mat4, u: &Mat2| {
        let col = u.column(z as usize);
        let two_copy = kron_vec2(&col, &col);
        *acc = acc.add(&outer4(&two_copy));
    };
    let mut acc = Mat4::zero();
    let count = match (ensemble, mode) {
        (EnsembleKind::CliffordU2, TwirlMode::Exhaustive) => {
            let table = clifford_table();
            for u in &table {
                accumulate(&mut acc, u.matrix());
            }
            table.len() as f64
        }
        (EnsembleKind::HaarU2, TwirlMode::Exhaustive) => {
            return Err(Error::InfeasibleEnumeration(
                "Haar ensemble has no exhaustive enumeration",
            ));
        }
        (kind, TwirlMode::MonteCarlo { samples, seed }) => {
            if samples == 0 {
                return Err(Error::InvalidParam("samples must be positive"));
            }
            let mut rng = crate::sim::substream(seed, 0);
            let table = clifford_table();
            for _ in 0..samples {
                let u = match kind {
                    EnsembleKind::HaarU2 => sample_haar_u2(&mut rng),
                    EnsembleKind::CliffordU2 => table[rng.gen_range(0..table.len())],
                };
                accumulate(&mut acc, u.matrix());
            }
            samples as f64
        }
    };
    let avg = acc.scale(C64::new(1.0 / count, 0.0));
    Ok(avg.max_abs_diff(&symmetric_projector_third()))
}

/// Whether a weighted family of single-qubit states forms a projective
/// 2-design: Σ p_i (|φ_i⟩⟨φ_i|)^{⊗2} = Π₊/3 within 1e-10.
///
/// Returns the verdict together with the max-entry distance.
pub fn design_check(states: &[(f64, [C64; 2])]) -> Result<(bool, f64)> {
    let mut total = 0.0;
    for &(w, _) in states {
        if w < 0.0 {
            return Err(Error::NonNormalizedWeights);
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::NonNormalizedWeights);
    }
    let mut acc = Mat4::zero();
    for &(w, phi) in states {
        let two_copy = kron_vec2(&phi, &phi);
        acc = acc.add(&outer4(&two_copy).scale(C64::new(w, 0.0)));
    }
    let dist = acc.max_abs_diff(&symmetric_projector_third());
    Ok((dist <= 1e-10, dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn haar_samples_are_unitary_and_deterministic() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let u = sample_haar_u2(&mut rng);
        assert!(u.matrix().unitarity_distance() < 1e-12);

        let mut rng2 = ChaCha12Rng::seed_from_u64(42);
        let v = sample_haar_u2(&mut rng2);
        assert_eq!(u.matrix(), v.matrix());
    }

    #[test]
    fn haar_first_moment() {
        // E[|⟨0|U|0⟩|²] = 1/2; |⟨0|U|0⟩|² is uniform on [0,1] for d = 2,
        // so 3 standard errors over 1e5 draws is 3·sqrt(1/12/1e5).
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let draws = 100_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            let u = sample_haar_u2(&mut rng);
            acc += u.matrix().0[0][0].norm_sqr();
        }
        let mean = acc / draws as f64;
        let three_se = 3.0 * (1.0 / 12.0 / draws as f64).sqrt();
        assert!(
            (mean - 0.5).abs() < three_se,
            "mean {mean} outside 0.5 ± {three_se}"
        );
    }

    #[test]
    fn clifford_table_has_24_distinct_elements() {
        let table = clifford_table();
        assert_eq!(table.len(), 24);
        for (i, a) in table.iter().enumerate() {
            for b in table.iter().skip(i + 1) {
                assert!(!a.phase_equal(b));
            }
        }
    }

    #[test]
    fn clifford_table_contains_generators() {
        let table = clifford_table();
        let i = SingleQubitUnitary(Mat2::identity());
        let h = SingleQubitUnitary(hadamard());
        let s = SingleQubitUnitary(phase_gate());
        for target in [i, h, s] {
            assert!(table.iter().any(|u| u.phase_equal(&target)));
        }
    }

    #[test]
    fn clifford_table_closed_under_products() {
        let table = clifford_table();
        for a in &table {
            for b in &table {
                let p = SingleQubitUnitary(a.matrix().mul(b.matrix()));
                assert!(table.iter().any(|u| u.phase_equal(&p)));
            }
        }
    }

    #[test]
    fn clifford_exhaustive_twirl_both_labels() {
        for z in [0u8, 1] {
            let d = twirl_check(EnsembleKind::CliffordU2, z, TwirlMode::Exhaustive).unwrap();
            assert!(d < 1e-12, "z = {z}: distance {d}");
        }
    }

    #[test]
    fn haar_monte_carlo_twirl() {
        // E[(U|0⟩⟨0|U†)^{⊗2}] = Π₊/3; 1e5 draws land within 2e-3 entrywise.
        let d = twirl_check(
            EnsembleKind::HaarU2,
            0,
            TwirlMode::MonteCarlo {
                samples: 100_000,
                seed: 11,
            },
        )
        .unwrap();
        assert!(d < 2e-3, "distance {d}");
    }

    #[test]
    fn design_check_examples() {
        // Six Pauli eigenstates with uniform weights form a 2-design.
        let x = core::f64::consts::FRAC_1_SQRT_2;
        let c = C64::new;
        let pauli: [[C64; 2]; 6] = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
            [c(x, 0.0), c(x, 0.0)],
            [c(x, 0.0), c(-x, 0.0)],
            [c(x, 0.0), c(0.0, x)],
            [c(x, 0.0), c(0.0, -x)],
        ];
        let weighted: Vec<(f64, [C64; 2])> =
            pauli.iter().map(|&v| (1.0 / 6.0, v)).collect();
        let (ok, dist) = design_check(&weighted).unwrap();
        assert!(ok, "distance {dist}");

        // {|0⟩, |1⟩} alone is not a 2-design.
        let zo: Vec<(f64, [C64; 2])> = pauli[..2].iter().map(|&v| (0.5, v)).collect();
        let (ok, dist) = design_check(&zo).unwrap();
        assert!(!ok && dist > 1e-3);

        let bad: Vec<(f64, [C64; 2])> = pauli[..2].iter().map(|&v| (0.4, v)).collect();
        assert!(matches!(
            design_check(&bad).unwrap_err(),
            Error::NonNormalizedWeights
        ));
    }
}
