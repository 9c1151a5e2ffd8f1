//! Cross-module checks: labelled fast path against the full-space oracle,
//! and the wave packet transform against direct evaluation.

use symkron_core::hagedorn::{
    global_sign, plan_realignment, transform_bundle, AdaptedQuadrature, ParamPair, RealignMode, WavePacketBundle,
    DEFAULT_NODES,
};
use symkron_core::kron_oracle::{iterated_kron_apply, symmetric_kron_dense};
use symkron_core::matrix::relative_error;
use symkron_core::multiindex::level_size;
use symkron_core::random::SeededRng;
use symkron_core::symkron::{apply_kron_compressed, SymKronOperator};
use symkron_core::symspace::{compress, expand, full_from_labels, labels_from_full};
use symkron_core::{ComplexMatrix, Error, SymVec};

#[test]
fn labelled_fast_path_matches_full_space() {
    let mut rng = SeededRng::new(101);
    for (d, n) in [(2, 3), (3, 3), (2, 5), (4, 2)] {
        let m = rng.complex_matrix(d, d);
        let labels = rng.complex_vector(level_size(d, n).unwrap());
        let full = iterated_kron_apply(&m, n, &full_from_labels(d, n, &labels).unwrap()).unwrap();
        let fast = apply_kron_compressed(&m, n, &labels).unwrap();
        assert!(relative_error(&fast, &labels_from_full(&full)) <= 1e-12);
    }
}

#[test]
fn compressed_apply_matches_expand_kron_compress() {
    let mut rng = SeededRng::new(103);
    let m = rng.complex_matrix(3, 3);
    let y = SymVec::new(3, 4, rng.complex_vector(15)).unwrap();
    let via_full = compress(&iterated_kron_apply(&m, 4, &expand(&y).unwrap()).unwrap()).unwrap();
    let fast = SymKronOperator::new(&m, 4).unwrap().apply(&y).unwrap();
    assert!(relative_error(fast.data(), via_full.data()) <= 1e-12);
}

#[test]
fn oracle_refuses_where_fast_path_runs() {
    let m = SeededRng::new(107).unitary(3);
    assert!(matches!(symmetric_kron_dense(&m, 10), Err(Error::CapExceeded { .. })));
    let op = SymKronOperator::new(&m, 10).unwrap();
    let s = op.materialize().unwrap();
    assert!(s.unitarity_residual() < 1e-12);
}

#[test]
fn realign_then_transform_keeps_orthonormality() {
    let mut rng = SeededRng::new(109);
    let (a, b) = rng.valid_pair(2);
    let p = ParamPair::new(&a, &b, 0.5).unwrap();
    let plan = plan_realignment(&p, RealignMode::Polar).unwrap();
    let bundle = WavePacketBundle::new(p, 3);
    let t = transform_bundle(&bundle, &plan.u).unwrap();
    assert!(t.bundle.params().a().max_abs_imag() <= 1e-10);

    let quad = AdaptedQuadrature::new(t.bundle.params(), DEFAULT_NODES).unwrap();
    let old = bundle.eval_all(quad.points()).unwrap();
    let mapped = &t.matrix * &old;
    let gram = quad.gram(&mapped).unwrap();
    assert!(gram.distance(&ComplexMatrix::identity(4)) <= 1e-8);

    let direct = t.bundle.eval_all(quad.points()).unwrap();
    let (_, err) = global_sign(direct.data(), mapped.data());
    assert!(err <= 1e-10);
}
