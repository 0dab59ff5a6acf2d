import numpy as np
import pytest

from curvlab import (
    ComplexJacobiOracle,
    ComplexModel,
    DimensionNotMultipleOf4Error,
    InconsistentOracleError,
    JacobiOracle,
    build_A0,
    build_APhi,
    build_quaternion_triple,
    complex_jacobi,
    complex_line,
    counterexample_model,
    discrepancy_audit,
    jacobi,
    jacobi_equivalence_check,
    lemma23_battery,
    merged_spectrum,
    pullback,
    random_curvature_tensor,
    random_orthogonal,
    random_unit_vector,
    reconstruct_from_complex_jacobi,
    reconstruct_from_jacobi,
    spanning_lines,
    standard_complex_structure,
    subspace_tensor_basis,
    tensor_inner_product,
    twistor_point_model,
    validate_or_project,
)


@pytest.mark.parametrize("m", [4, 8])
def test_counterexample_properties(m):
    model = counterexample_model(m)
    assert tensor_inner_product(model.tensor, model.tensor) > 0
    trip = build_quaternion_triple(m)
    rng = np.random.default_rng(m)
    for _ in range(5):
        x = random_unit_vector(m, rng)
        y = rng.standard_normal(m)
        kx = trip.j2.apply(x)
        jkx = trip.j3.apply(x)
        predicted = 3.0 * (y @ kx) * kx - 3.0 * (y @ jkx) * jkx
        np.testing.assert_allclose(jacobi(model.tensor, x).matrix @ y, predicted, atol=1e-12)
    assert lemma23_battery(model).holds


def test_counterexample_dimension_gate():
    with pytest.raises(DimensionNotMultipleOf4Error):
        counterexample_model(6)


def test_counterexample_jacobi_k_eigenvalue():
    # J(x)Kx = 3 Kx at unit x; the nonzero eigenvalue certifies A != 0
    model = counterexample_model(4)
    trip = build_quaternion_triple(4)
    x = random_unit_vector(4, np.random.default_rng(0))
    kx = trip.j2.apply(x)
    np.testing.assert_allclose(jacobi(model.tensor, x).matrix @ kx, 3.0 * kx, atol=1e-12)


def test_twistor_model_pullback_and_line_data():
    model, theta = twistor_point_model(4)
    trip = build_quaternion_triple(4)
    pulled = pullback(theta, model.tensor)
    expected = build_A0(4) + build_APhi(trip.j3)
    np.testing.assert_allclose(pulled.entries, expected.entries, atol=1e-12)
    assert (pulled - model.tensor).norm() > 0.1
    for line in spanning_lines(model.structure):
        diff = (
            complex_jacobi(pulled, model.structure, line).matrix
            - complex_jacobi(model.tensor, model.structure, line).matrix
        )
        assert np.max(np.abs(diff)) < 1e-10


def test_twistor_jacobi_spectrum():
    model, _ = twistor_point_model(4)
    x = random_unit_vector(4, np.random.default_rng(3))
    spec = merged_spectrum(jacobi(model.tensor, x))
    assert spec == ((pytest.approx(0.0, abs=1e-9), 1), (pytest.approx(1.0), 2), (pytest.approx(4.0), 1))


def test_twistor_complex_jacobi_eigenvalues():
    # 1 on the line itself, 5 on the swapped quaternionic directions, 2 on the complement
    model, _ = twistor_point_model(8)
    trip = build_quaternion_triple(8)
    rng = np.random.default_rng(5)
    x = random_unit_vector(8, rng)
    op = complex_jacobi(model.tensor, model.structure, complex_line(x, model.structure)).matrix
    j1x, j2x, j3x = trip.j1.apply(x), trip.j2.apply(x), trip.j3.apply(x)
    assert x @ (op @ x) == pytest.approx(1.0)
    assert j2x @ (op @ j2x) == pytest.approx(1.0)
    assert j1x @ (op @ j1x) == pytest.approx(5.0)
    assert j3x @ (op @ j3x) == pytest.approx(5.0)
    v = rng.standard_normal(8)
    for b in (x, j1x, j2x, j3x):
        v -= (v @ b) * b
    v /= np.linalg.norm(v)
    assert v @ (op @ v) == pytest.approx(2.0)


def test_reconstruct_from_jacobi_roundtrips():
    a0 = build_A0(4)
    rec = reconstruct_from_jacobi(JacobiOracle.from_tensor(a0))
    assert (rec - a0).norm() < 1e-10
    for m in (4, 6):
        a = random_curvature_tensor(m, seed=m)
        rec = reconstruct_from_jacobi(JacobiOracle.from_tensor(a))
        assert (rec - a).norm() / (1.0 + a.norm()) < 1e-10


def test_reconstruct_rejects_inconsistent_oracle():
    oracle = JacobiOracle(4, lambda x: float(x @ x) * np.eye(4))
    with pytest.raises(InconsistentOracleError):
        reconstruct_from_jacobi(oracle)


def test_reconstruct_equivariance():
    a = random_curvature_tensor(4, seed=20)
    base = JacobiOracle.from_tensor(a)
    for seed in range(3):
        theta = random_orthogonal(4, np.random.default_rng(seed))
        composed = JacobiOracle(4, lambda x, t=theta: t.T @ base.evaluate(t @ x) @ t)
        lhs = reconstruct_from_jacobi(composed)
        rhs = pullback(theta, reconstruct_from_jacobi(base))
        assert (lhs - rhs).norm() < 1e-10


def test_reconstruct_from_complex_jacobi_roundtrips():
    j4 = standard_complex_structure(4)
    fs = build_A0(4) + build_APhi(j4)
    rec = reconstruct_from_complex_jacobi(ComplexJacobiOracle.from_model(ComplexModel(j4, fs)))
    assert (rec - fs).norm() < 1e-10
    rows = subspace_tensor_basis(["gray-yano"], 4, j4)
    rng = np.random.default_rng(1)
    for _ in range(3):
        g = validate_or_project((rows.T @ rng.standard_normal(rows.shape[0])).reshape(4, 4, 4, 4))
        rec = reconstruct_from_complex_jacobi(
            ComplexJacobiOracle.from_model(ComplexModel(j4, g))
        )
        assert (rec - g).norm() / (1.0 + g.norm()) < 1e-10


def test_complex_reconstruction_of_counterexample_fits_zero():
    # The counterexample sits outside the eight-term identity subspace, and its
    # complex Jacobi data vanish, so the constrained fit legitimately returns 0:
    # complex-line data match, plain Jacobi data do not.
    model = counterexample_model(4)
    rec = reconstruct_from_complex_jacobi(ComplexJacobiOracle.from_model(model))
    assert rec.norm() < 1e-12
    for line in spanning_lines(model.structure):
        assert np.max(np.abs(complex_jacobi(model.tensor, model.structure, line).matrix)) < 1e-12
    x = np.eye(4)[0]
    assert np.max(np.abs(jacobi(model.tensor, x).matrix)) > 1.0


def test_jacobi_equivalence_self():
    j4 = standard_complex_structure(4)
    model = ComplexModel(j4, build_A0(4) + build_APhi(j4))
    rep = jacobi_equivalence_check(model, model, np.eye(4))
    assert rep.holds
    assert rep.details["tensors_equal"]


def test_jacobi_equivalence_twistor_phenomenon():
    model, theta = twistor_point_model(4)
    rep = jacobi_equivalence_check(model, model, theta.matrix)
    assert rep.holds  # complex Jacobi data agree on every line
    assert not rep.details["tensors_equal"]
    assert not rep.details["gray_yano_a"]
    assert rep.details["difference_norm"] > 0.1


def test_jacobi_equivalence_detects_gray_difference():
    # two Kahler models differing by a nonzero eight-term-identity tensor
    j4 = standard_complex_structure(4)
    fs = build_A0(4) + build_APhi(j4)
    rep = jacobi_equivalence_check(
        ComplexModel(j4, fs), ComplexModel(j4, 2.0 * fs), np.eye(4)
    )
    assert not rep.holds
    assert not rep.details["tensors_equal"]
    assert rep.details["gray_yano_a"] and rep.details["gray_yano_b"]


def test_discrepancy_audit_values():
    audit = discrepancy_audit(4)
    coeff = audit["jacobi_K_coefficient"]
    assert coeff["computed"] == pytest.approx(3.0)
    assert not coeff["agrees"]
    plane = audit["twistor_plane_eigenvalue"]
    assert plane["computed"] == pytest.approx(1.0)
    assert plane["computed_at_Jx"] == pytest.approx(1.0)
    assert not plane["agrees"]
    swapped = audit["twistor_swapped_plane_eigenvalue"]
    assert swapped["computed"] == pytest.approx(5.0)
    assert swapped["agrees"]
    audit8 = discrepancy_audit(8)
    assert audit8["twistor_complement_eigenvalue"]["computed"] == pytest.approx(2.0)


def test_oracle_invariants_spot_checks():
    a = random_curvature_tensor(4, seed=30)
    oracle = JacobiOracle.from_tensor(a)
    rng = np.random.default_rng(7)
    x = random_unit_vector(4, rng)
    mat = oracle.evaluate(x)
    np.testing.assert_allclose(mat, mat.T, atol=1e-10)
    np.testing.assert_allclose(mat @ x, np.zeros(4), atol=1e-10)
    np.testing.assert_allclose(oracle.evaluate(2.0 * x), 4.0 * mat, atol=1e-9)
    j4 = standard_complex_structure(4)
    cj = ComplexJacobiOracle.from_model(ComplexModel(j4, a))
    line = complex_line(x, j4)
    rot = complex_line(0.6 * x + 0.8 * j4.apply(x), j4)
    np.testing.assert_allclose(cj.evaluate(line), cj.evaluate(rot), atol=1e-10)
