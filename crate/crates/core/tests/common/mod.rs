#![allow(dead_code)]

use otto_core::quantum::{c, ComplexMatrix, DensityOperator, C64};
use proptest::prelude::*;
use rand::Rng;

/// Qubit state from a Bloch vector, shrunk into the unit ball if needed.
pub fn qubit_from_bloch(x: f64, y: f64, z: f64) -> DensityOperator {
    let norm = (x * x + y * y + z * z).sqrt().max(1.0);
    let (x, y, z) = (x / norm, y / norm, z / norm);
    let m = ComplexMatrix::from_rows2([
        [c((1.0 + z) / 2.0, 0.0), c(x / 2.0, -y / 2.0)],
        [c(x / 2.0, y / 2.0), c((1.0 - z) / 2.0, 0.0)],
    ]);
    DensityOperator::new(m).unwrap()
}

/// `A A† / tr(A A†)` for a complex matrix with the given entries.
pub fn state_from_entries(dim: usize, parts: &[(f64, f64)]) -> DensityOperator {
    let entries: Vec<C64> = parts.iter().map(|&(a, b)| c(a, b)).collect();
    let a = ComplexMatrix::from_row_slice(dim, &entries).unwrap();
    let aa = &a * &a.adjoint();
    let tr = aa.trace().re;
    let m = aa.scale(c(1.0 / tr, 0.0)).hermitian_part();
    DensityOperator::new(m).unwrap()
}

pub fn random_qubit<R: Rng>(rng: &mut R) -> DensityOperator {
    let parts: Vec<(f64, f64)> = (0..4)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    state_from_entries(2, &parts)
}

pub fn qubit_strategy() -> impl Strategy<Value = DensityOperator> {
    prop_oneof![
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| qubit_from_bloch(x, y, z)),
        // Pure states.
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(t, p)| {
            qubit_from_bloch(t.sin() * p.cos(), t.sin() * p.sin(), t.cos())
        }),
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4)
            .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
            .prop_map(|v| state_from_entries(2, &v)),
    ]
}

pub fn joint_strategy() -> impl Strategy<Value = DensityOperator> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| state_from_entries(4, &v))
}

/// `e^{-iaσ_z/2} e^{-ibσ_y/2} e^{-icσ_z/2}`.
pub fn su2(a: f64, b: f64, g: f64) -> ComplexMatrix {
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    let e = |phi: f64| c(phi.cos(), phi.sin());
    ComplexMatrix::from_rows2([
        [e(-(a + g) / 2.0) * cb, -e(-(a - g) / 2.0) * sb],
        [e((a - g) / 2.0) * sb, e((a + g) / 2.0) * cb],
    ])
}

pub fn rotation(alpha: f64) -> ComplexMatrix {
    ComplexMatrix::real2([[alpha.cos(), -alpha.sin()], [alpha.sin(), alpha.cos()]])
}

/// Pure-dephasing Kraus pair with coherence factor `cos 2θ`.
pub fn dephasing_oracle(rho: &DensityOperator, theta: f64) -> ComplexMatrix {
    let k0 = ComplexMatrix::real2([[1.0, 0.0], [0.0, (2.0 * theta).cos()]]);
    let k1 = ComplexMatrix::real2([[0.0, 0.0], [0.0, (2.0 * theta).sin()]]);
    let m = rho.matrix();
    &(&(&k0 * m) * &k0.adjoint()) + &(&(&k1 * m) * &k1.adjoint())
}

/// Stroke energetics of the ideal cycle, straight from the thermal-state
/// expectation values `⟨σ_y⟩ = −tanh x`.
pub fn energetics_oracle(theta_deg: f64, n: f64, x_c: f64) -> [f64; 4] {
    let kappa = (2.0 * theta_deg.to_radians()).cos();
    let t_c = x_c.tanh();
    let t_h = kappa * t_c;
    let e_a = -t_c;
    let e_b = -n * t_c;
    let e_c = -n * t_h;
    let e_d = -t_h;
    [e_b - e_a, e_c - e_b, e_d - e_c, e_a - e_d]
}
