// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the criterion benchmarks in `benches/`.

use partcorr::correlations::TwoQubitState;
use partcorr::model::initial_state;
use partcorr::validation::random_two_qubit;
use partcorr::{seed, CVector, HubbardModel, HubbardParams, Lattice, ModelKind, StateLabel};

pub fn model(kind: ModelKind, v: f64) -> HubbardModel {
    HubbardModel::new(HubbardParams::relative(v, kind.lattice()).expect("valid v")).expect("model")
}

pub fn start_state(model: &HubbardModel) -> CVector {
    let label = match model.params().lattice() {
        Lattice::FermiDimer => StateLabel::PsiF,
        _ => StateLabel::PsiB,
    };
    initial_state(label, model.basis()).expect("state").into_amplitudes()
}

/// Deterministic mixed register states.
pub fn registers(count: usize) -> Vec<TwoQubitState> {
    let mut rng = seed::stream(&[0xbe_4c4d]);
    (0..count).map(|_| random_two_qubit(&mut rng)).collect()
}
