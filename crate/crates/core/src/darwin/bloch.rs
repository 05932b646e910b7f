//! Bloch-sphere grids and basis helpers for the qubit diagnostics.

use crate::channels::Povm;
use crate::error::Result;
use crate::layout::SubsystemLayout;
use crate::linalg::CVector;
use crate::state::Ket;
use num_complex::Complex64;

/// Near-uniform grid of `resolution` unit vectors on the sphere: a Fibonacci
/// lattice including both poles exactly (`i = 0` is `+z`, `i = resolution-1`
/// is `-z`), so the computational-basis directions are always on the grid.
pub fn fibonacci_sphere(resolution: usize) -> Vec<[f64; 3]> {
    assert!(resolution >= 2, "need at least the two poles");
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let steps = (resolution - 1) as f64;
    (0..resolution)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64) / steps;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Pure qubit state pointing along a Bloch direction.
pub fn bloch_ket(direction: [f64; 3], label: impl Into<String>) -> Ket {
    let [x, y, z] = direction;
    let theta = z.clamp(-1.0, 1.0).acos();
    let phi = y.atan2(x);
    Ket::qubit(theta, phi, label)
}

/// A Bloch direction and its exactly orthogonal partner state.
pub fn basis_pair(direction: [f64; 3], label: &str) -> (Ket, Ket) {
    let ket = bloch_ket(direction, label);
    let a = ket.amplitudes()[0];
    let b = ket.amplitudes()[1];
    let layout = SubsystemLayout::single(2, label).expect("qubit layout");
    let orthogonal = Ket::new(
        CVector::from_vec(vec![b.conj(), -a.conj()]),
        layout,
    )
    .expect("orthogonal partner is normalized");
    (ket, orthogonal)
}

/// Projective two-outcome measurement along a Bloch direction.
pub fn projective_povm(direction: [f64; 3], label: &str) -> Result<Povm> {
    let (up, down) = basis_pair(direction, label);
    Povm::projective(&[up, down])
}

/// The `{+, -}` measurement basis of a qubit.
pub fn plus_minus_povm(label: &str) -> Result<Povm> {
    projective_povm([1.0, 0.0, 0.0], label)
}

/// Bloch coordinates of a pure qubit state (unit vector).
pub fn bloch_coordinates(ket: &Ket) -> [f64; 3] {
    let a = ket.amplitudes()[0];
    let b = ket.amplitudes()[1];
    let cross: Complex64 = a.conj() * b;
    [2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_contains_exact_poles() {
        let grid = fibonacci_sphere(64);
        assert_eq!(grid.len(), 64);
        assert_eq!(grid[0], [0.0, 0.0, 1.0]);
        assert_eq!(grid[63], [0.0, 0.0, -1.0]);
        for p in &grid {
            let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn basis_pair_is_orthonormal_everywhere() {
        for dir in fibonacci_sphere(32) {
            let (up, down) = basis_pair(dir, "q");
            assert_abs_diff_eq!(up.inner(&down).unwrap().norm(), 0.0, epsilon = 1e-14);
            let povm = projective_povm(dir, "q").unwrap();
            assert_eq!(povm.len(), 2);
        }
    }

    #[test]
    fn bloch_coordinates_round_trip() {
        for dir in fibonacci_sphere(16) {
            let ket = bloch_ket(dir, "q");
            let back = bloch_coordinates(&ket);
            for (a, b) in dir.iter().zip(back) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
        }
    }
}
