import itertools

import pytest

from innerscope.exactmath import GF, QQ, Matrix
from innerscope.tensoralg import (
    DimensionCap,
    EndoCandidate,
    TensorElement,
    ValidationFailure,
    field_algebra,
    induced_endomorphism,
    matrix_algebra,
    truncated_polynomial_algebra,
    upper_triangular_algebra,
)
from innerscope.embed import (
    ZeroInput,
    build_embedding,
    central_witness,
    centralizer_of_embedded_base,
    verify_injectivity_via_embedding,
)


def test_scalar_base_three_dimensional():
    tt = build_embedding(field_algebra(GF(2)))
    total = tt.total
    assert total.dim == 3
    t = tt.t_element
    t2 = total.mul_vec(t, t)
    assert t2 == total.basis_vector(2)
    assert total.mul_vec(t2, t) == (GF(2).zero,) * 3
    assert total.unit == total.basis_vector(0)


def test_dimension_counts():
    assert build_embedding(matrix_algebra(2, GF(2))).total.dim == 36
    assert build_embedding(truncated_polynomial_algebra(QQ)).total.dim == 10


def test_dimension_cap():
    with pytest.raises(DimensionCap):
        build_embedding(matrix_algebra(3, GF(2)))
    tt = build_embedding(matrix_algebra(3, GF(3)), dim_cap=9)
    assert tt.total.dim == 9 + 2 * 81


def test_twist_relation():
    # t * f(r) = (1 (x) r) t for every basis element of the base
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    total = tt.total
    field = m2.field
    for j in range(m2.dim):
        lhs = total.mul_vec(tt.t_element, tt.f(m2.basis_vector(j)))
        expected = [field.zero] * total.dim
        for i, ci in enumerate(m2.unit):
            if ci != field.zero:
                expected[tt.block1_index(i, j)] = ci
        assert lhs == tuple(expected)
        # and f(r) * t keeps r on the left
        rhs = total.mul_vec(tt.f(m2.basis_vector(j)), tt.t_element)
        expected = [field.zero] * total.dim
        for i, ci in enumerate(m2.unit):
            if ci != field.zero:
                expected[tt.block1_index(j, i)] = ci
        assert rhs == tuple(expected)


def test_embedding_is_a_monomorphism():
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    assert tt.embed_matrix.rank() == 4
    for i in range(m2.dim):
        for j in range(m2.dim):
            u, v = m2.basis_vector(i), m2.basis_vector(j)
            assert tt.f(m2.mul_vec(u, v)) == tt.total.mul_vec(tt.f(u), tt.f(v))


def test_central_witness_m2():
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    c, report = central_witness(tt, (0, 1, 0, 0))
    assert report["passed"]
    nonzero = [k for k, v in enumerate(c) if v != GF(2).zero]
    assert nonzero == [tt.block2_index(0, 1), tt.block2_index(3, 1)]


def test_central_witness_every_nonzero_element():
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    zero = GF(2).zero
    for vec in itertools.product(GF(2).elements(), repeat=4):
        if all(v == zero for v in vec):
            continue
        _, report = central_witness(tt, vec)
        assert report["passed"], vec


def test_central_witness_for_unit_is_t_squared():
    tt = build_embedding(truncated_polynomial_algebra(QQ))
    c, report = central_witness(tt, tt.base.unit)
    assert report["passed"]
    assert c == tt.total.mul_vec(tt.t_element, tt.t_element)


def test_central_witness_rejects_zero():
    tt = build_embedding(field_algebra(GF(2)))
    with pytest.raises(ZeroInput):
        central_witness(tt, (0,))
    with pytest.raises(ValidationFailure):
        central_witness(tt, (1, 0))


def test_centralizer_dimensions():
    assert len(centralizer_of_embedded_base(build_embedding(field_algebra(GF(2))))) == 3
    assert len(centralizer_of_embedded_base(build_embedding(truncated_polynomial_algebra(QQ)))) == 8
    assert len(centralizer_of_embedded_base(build_embedding(matrix_algebra(2, GF(2))))) == 9


def test_identity_candidate_induces_identity():
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    cand = EndoCandidate.from_unit(m2, m2.unit)
    induced = induced_endomorphism(cand, tt.embed)
    assert induced.matrix.rows == Matrix.identity(GF(2), 36).rows
    report = verify_injectivity_via_embedding(cand, tt)
    assert report["passed"]
    assert report["centralizer_dim"] == 9


def test_all_m2_inner_endos_injective_on_s():
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    units = [v for v in itertools.product(GF(2).elements(), repeat=4) if m2.is_unit(v)]
    assert len(units) == 6
    for u in units:
        report = verify_injectivity_via_embedding(EndoCandidate.from_unit(m2, u), tt)
        assert report["passed"], u
        assert report["kernel_rank"] == 0


def test_commutative_base_nontrivial_on_s():
    # conjugation by 1 + z is the identity on the base but not on S
    tp = truncated_polynomial_algebra(QQ)
    tt = build_embedding(tp)
    cand = EndoCandidate.from_unit(tp, (QQ.one, QQ.one))
    assert cand.action_matrix().rows == Matrix.identity(QQ, 2).rows
    induced = induced_endomorphism(cand, tt.embed)
    assert induced.matrix.rows != Matrix.identity(QQ, 10).rows
    report = verify_injectivity_via_embedding(cand, tt)
    assert report["passed"]
    assert report["centralizer_dim"] == 8


def test_rejects_failing_or_foreign_candidates():
    m2 = matrix_algebra(2, GF(2))
    tt = build_embedding(m2)
    field = GF(2)
    w = (TensorElement.product(field, m2.basis_vector(0), m2.basis_vector(0))
         + TensorElement.product(field, m2.basis_vector(3), m2.basis_vector(3)))
    failing = EndoCandidate.from_tensor(m2, w)
    with pytest.raises(ValidationFailure):
        verify_injectivity_via_embedding(failing, tt)
    ut2 = upper_triangular_algebra(2, GF(2))
    other = EndoCandidate.from_unit(ut2, ut2.unit)
    with pytest.raises(ValidationFailure):
        verify_injectivity_via_embedding(other, tt)
