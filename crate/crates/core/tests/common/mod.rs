#![allow(dead_code)]

use chainbath::{
    build_bath, build_coupled, build_uncoupled, diagonalize, initial_covariance, Attachment,
    CovarianceMatrix, InitialState, ModelParams, NormalModes, QuadraticModel,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// `[[0, I], [-I, 0]]` for positions-then-momenta ordering.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

pub fn attachment(half_size: usize) -> impl Strategy<Value = Attachment> {
    prop_oneof![
        Just(Attachment::EdgePair),
        Just(Attachment::SingleEdge),
        (1..=half_size).prop_map(|s| Attachment::SymmetricPair { s }),
    ]
}

/// Valid models with `2N <= 60`.
pub fn model_params() -> impl Strategy<Value = ModelParams> {
    (2usize..=30).prop_flat_map(|n| {
        (
            attachment(n),
            0.2f64..2.0,
            0.5f64..2.0,
            0.0f64..0.5,
            -0.5f64..0.5,
            0.5f64..2.0,
        )
            .prop_map(move |(attachment, m, kappa, gamma, epsilon, omega_b)| ModelParams {
                chain_mass: m,
                kappa,
                gamma,
                epsilon,
                omega_b,
                half_size: n,
                attachment,
                ..ModelParams::default()
            })
    })
}

pub struct Setup {
    pub coupled: QuadraticModel,
    pub modes: NormalModes,
    pub v0: CovarianceMatrix,
}

pub fn setup(params: &ModelParams, r: f64, temperature: f64) -> Setup {
    let coupled = build_coupled(params).unwrap();
    let modes = diagonalize(&coupled).unwrap();
    let bath = diagonalize(&build_bath(params).unwrap()).unwrap();
    let v0 = initial_covariance(
        &build_uncoupled(params).unwrap(),
        &InitialState::new(r, temperature).unwrap(),
        &bath,
    )
    .unwrap();
    Setup { coupled, modes, v0 }
}
