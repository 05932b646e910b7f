//! State-vector gate kernels for the qubit scenario builders.

use crate::linalg::{c64, CMatrix, CVector};
use num_complex::Complex64;

/// Apply a 4x4 gate to qubits `(q1, q2)` of an `n_qubits` state vector.
///
/// Big-endian convention: qubit `q` carries bit weight `2^(n-1-q)`, and the
/// gate's basis order is `|q1 q2>` in {00, 01, 10, 11}.
pub(crate) fn apply_two_qubit_gate(
    state: &mut CVector,
    n_qubits: usize,
    q1: usize,
    q2: usize,
    gate: &CMatrix,
) {
    debug_assert!(q1 != q2 && q1 < n_qubits && q2 < n_qubits);
    debug_assert_eq!(gate.nrows(), 4);
    let b1 = 1usize << (n_qubits - 1 - q1);
    let b2 = 1usize << (n_qubits - 1 - q2);
    let dim = 1usize << n_qubits;
    for i in 0..dim {
        if i & b1 == 0 && i & b2 == 0 {
            let idx = [i, i | b2, i | b1, i | b1 | b2];
            let v: [Complex64; 4] = [state[idx[0]], state[idx[1]], state[idx[2]], state[idx[3]]];
            for (r, &target) in idx.iter().enumerate() {
                let mut acc = c64(0.0, 0.0);
                for (c, &vc) in v.iter().enumerate() {
                    acc += gate[(r, c)] * vc;
                }
                state[target] = acc;
            }
        }
    }
}

/// Real rotation taking `|0>` to `cos(phi)|0> + sin(phi)|1>`.
pub(crate) fn record_rotation(phi: f64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c64(phi.cos(), 0.0),
            c64(-phi.sin(), 0.0),
            c64(phi.sin(), 0.0),
            c64(phi.cos(), 0.0),
        ],
    )
}

/// Two-qubit gate applying `op` to the target when the control qubit equals
/// `control_value`, identity otherwise. Basis order `|control target>`.
pub(crate) fn controlled_on(control_value: usize, op: &CMatrix) -> CMatrix {
    debug_assert!(control_value < 2);
    let mut gate = CMatrix::identity(4, 4);
    let base = 2 * control_value;
    for r in 0..2 {
        for c in 0..2 {
            gate[(base + r, base + c)] = op[(r, c)];
        }
    }
    gate
}
