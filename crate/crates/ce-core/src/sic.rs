//! The single-qubit SIC-POVM: tetrahedron states, POVM elements, and the 4x4
//! Neumark dilation unitary realizing the POVM as a projective measurement on
//! a system-ancilla qubit pair.

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::mat::{Mat4, ZERO};

/// All constants of the qubit SIC-POVM.
///
/// `dilation` columns are |u_i⟩ = |φ̃_i⟩|0⟩ + |φ̃_i^⊥⟩|1⟩ with the system
/// qubit as the more significant bit of the pair index, so that
/// tr(ρ|φ̃_i⟩⟨φ̃_i|) = tr((ρ⊗|0⟩⟨0|)|u_i⟩⟨u_i|).
#[derive(Debug, Clone, PartialEq)]
pub struct SicConstants {
    /// Unit tetrahedron states |φ_1..4⟩.
    pub states: [[C64; 2]; 4],
    /// POVM vectors |φ̃_i⟩ = |φ_i⟩/√2.
    pub povm: [[C64; 2]; 4],
    /// Orthogonal completions |φ̃_i^⊥⟩ of magnitude 1/√2.
    pub perp: [[C64; 2]; 4],
    /// Dilation unitary U_SIC with columns {|u_i⟩}.
    pub dilation: Mat4,
}

impl SicConstants {
    pub fn dilation_basis(&self, i: usize) -> [C64; 4] {
        self.dilation.column(i)
    }
}

/// Constructs every SIC constant exactly from its closed form.
pub fn sic_constants() -> SicConstants {
    let c = C64::new;
    let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
    let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
    let sqrt_2_3 = (2.0 / 3.0f64).sqrt();
    let inv_sqrt6 = 1.0 / 6.0f64.sqrt();
    let omega = C64::from_polar(1.0, 2.0 * core::f64::consts::PI / 3.0);
    let omega2 = C64::from_polar(1.0, 4.0 * core::f64::consts::PI / 3.0);

    let states: [[C64; 2]; 4] = [
        [c(1.0, 0.0), ZERO],
        [c(inv_sqrt3, 0.0), c(sqrt_2_3, 0.0)],
        [c(inv_sqrt3, 0.0), omega * sqrt_2_3],
        [c(inv_sqrt3, 0.0), omega2 * sqrt_2_3],
    ];

    let mut povm = states;
    for v in povm.iter_mut() {
        v[0] *= inv_sqrt2;
        v[1] *= inv_sqrt2;
    }

    let perp: [[C64; 2]; 4] = [
        [ZERO, c(inv_sqrt2, 0.0)],
        [c(inv_sqrt3, 0.0), c(-inv_sqrt6, 0.0)],
        [omega.conj() * inv_sqrt3, c(-inv_sqrt6, 0.0)],
        [omega2.conj() * inv_sqrt3, c(-inv_sqrt6, 0.0)],
    ];

    // Pair index (a, b) with a the system bit: amplitudes (φ̃[0], φ̃⊥[0],
    // φ̃[1], φ̃⊥[1]).
    let mut dilation = Mat4::zero();
    for i in 0..4 {
        dilation.0[0][i] = povm[i][0];
        dilation.0[1][i] = perp[i][0];
        dilation.0[2][i] = povm[i][1];
        dilation.0[3][i] = perp[i][1];
    }

    SicConstants {
        states,
        povm,
        perp,
        dilation,
    }
}
