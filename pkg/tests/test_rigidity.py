import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidweb.errors import (
    BudgetExceeded,
    DimensionMismatch,
    SemanticError,
    VariableOutOfRange,
)
from rigidweb.expr import Var, evaluate, parse, relabel
from rigidweb.linalg import Subspace, SubspaceSystem, random_system, subspace_sum
from rigidweb.rigidity import (
    Certificate,
    RigidityVerdict,
    build_certificate,
    cert_hyperplanes,
    cert_lines,
    find_splitting,
    n_bound,
    p_tilde,
    search_certificate,
    splitting_size,
    verify_certificate,
    verify_certificate_generic,
)

from conftest import FIXTURES, span

PLANE_LINES = SubspaceSystem(2, (span(2, (1, 0)), span(2, (1, 1)), span(2, (0, 1))))


def small_cert(P, Q, I, target=1, n=2, dims=(1, 1, 1)):
    return Certificate(n, dims, target, tuple(parse(p) for p in P), tuple(parse(q) for q in Q), I)


# --- p_tilde ---------------------------------------------------------------


def test_p_tilde_two_parts():
    P = (parse("X1"), parse("X2"))
    assert p_tilde(P, 1, PLANE_LINES) == PLANE_LINES[1]


def test_p_tilde_axes():
    axes = SubspaceSystem(3, (span(3, (1, 0, 0)), span(3, (0, 1, 0)), span(3, (0, 0, 1))))
    P = (Var(1), Var(2), Var(3))
    assert p_tilde(P, 2, axes) == span(3, (1, 0, 0), (0, 0, 1))
    with pytest.raises(IndexError):
        p_tilde(P, 4, axes)


@given(st.integers(0, 1000), st.integers(1, 3))
def test_p_tilde_identity(seed, k):
    sysm = random_system(4, (1, 1, 2), seed)
    P = (Var(1), Var(2), Var(3))
    assert p_tilde(P, k, sysm) + evaluate(P[k - 1], sysm) == subspace_sum(*sysm)


# --- verify_certificate ----------------------------------------------------


def test_hand_certificate_holds():
    cert = small_cert(["X3", "X1"], ["X2"], [(1,)])
    v = verify_certificate(cert, PLANE_LINES)
    assert v.holds and v.failed_condition is None


def test_repeated_member_is_not_general_position():
    sysm = SubspaceSystem(2, (span(2, (1, 0)), span(2, (0, 1)), span(2, (0, 1))))
    v = verify_certificate(small_cert(["X3", "X1"], ["X2"], [(1,)]), sysm)
    assert v.failed_condition == "not-general-position"


def test_condition_one_failure():
    v = verify_certificate(small_cert(["X1", "X2"], ["X3"], [(1,)]), PLANE_LINES)
    assert v.failed_condition == "cond1"


def test_condition_two_failure():
    cert = small_cert(["X2 + X3", "X1"], ["X3"], [(1,)])
    assert verify_certificate(cert, PLANE_LINES).failed_condition == "cond2"


def test_condition_three_failures():
    # Q = P_2 itself: meets P~_1 = P_2 nontrivially
    cert = small_cert(["X3", "X1"], ["X1"], [(1,)])
    assert verify_certificate(cert, PLANE_LINES).failed_condition == "cond3-sum"
    cert = small_cert(["X3", "X1"], ["X1 + X2"], [(1,)])
    assert verify_certificate(cert, PLANE_LINES).failed_condition == "cond3-meet"


def test_dims_mismatch():
    with pytest.raises(DimensionMismatch):
        verify_certificate(cert_lines(3, 4), PLANE_LINES)


def test_certificate_validation():
    with pytest.raises(SemanticError):
        small_cert(["X1"], ["X2"], [])
    with pytest.raises(SemanticError):
        small_cert(["X1", "X2"], ["X3"], [()])
    with pytest.raises(SemanticError):
        small_cert(["X1", "X2"], ["X3"], [(2,)])
    with pytest.raises(VariableOutOfRange):
        small_cert(["X1", "X4"], ["X3"], [(1,)])
    with pytest.raises(VariableOutOfRange):
        small_cert(["X1", "X2"], ["X3"], [(1,)], target=4)


def test_certificate_json_round_trip():
    cert = cert_hyperplanes(3, 4, 2)
    assert Certificate.from_json(json.loads(json.dumps(cert.to_json()))) == cert


def test_verdict_invariant():
    with pytest.raises(ValueError):
        RigidityVerdict(True, "cond1")
    with pytest.raises(ValueError):
        RigidityVerdict(False)
    with pytest.raises(ValueError):
        RigidityVerdict(False, "cond9")


@settings(max_examples=15)
@given(st.permutations(range(5)), st.integers(0, 500))
def test_permutation_equivariance(perm, seed):
    cert = cert_lines(3, 5, 2)
    sysm = random_system(3, cert.dims, seed)
    # member j of the permuted system is old member perm[j]; old X_i becomes X_{perm^-1(i)}
    inv = {p + 1: j + 1 for j, p in enumerate(perm)}
    moved = Certificate(
        cert.n, cert.dims, inv[cert.target],
        tuple(relabel(e, inv) for e in cert.P), tuple(relabel(e, inv) for e in cert.Q), cert.I,
    )
    assert verify_certificate(moved, sysm.permuted(perm)).holds == verify_certificate(cert, sysm).holds


# --- closed-form families --------------------------------------------------


def test_cert_lines_examples():
    c = cert_lines(2, 3, 1)
    assert c.to_json() == {"n": 2, "dims": [1, 1, 1], "target": 1, "P": ["X3", "X1"], "Q": ["X2"], "I": [[1]]}
    c = cert_lines(3, 4, 2)
    assert [str(e) for e in c.P] == ["X4", "X2", "X1"] and [str(e) for e in c.Q] == ["X3"]
    assert c.I == ((1,), (1,))
    with pytest.raises(SemanticError):
        cert_lines(2, 2)


def test_cert_hyperplanes_examples():
    c = cert_hyperplanes(3, 4, 1)
    assert [str(e) for e in c.P] == ["X2 & X3", "X1 & X3", "X1 & X2"]
    assert c.Q == (parse("(X2&X3 + X1&X3) & X4"), parse("(X1&X3 + X1&X2) & X4"))
    assert c.I == ((1,), (2,))
    assert cert_hyperplanes(2, 3, 1).dims == cert_lines(2, 3, 1).dims
    with pytest.raises(SemanticError):
        cert_hyperplanes(3, 3)


@pytest.mark.parametrize(
    "factory, n, s, target",
    [(cert_lines, 2, 3, 1), (cert_lines, 3, 4, 3), (cert_lines, 3, 6, 5), (cert_hyperplanes, 3, 4, 2),
     (cert_hyperplanes, 2, 4, 4), (cert_hyperplanes, 3, 5, 5)],
)
def test_families_verify_generically(factory, n, s, target):
    v = verify_certificate_generic(factory(n, s, target), trials=30, seed=7)
    assert v.holds and v.passed + v.skipped == 30 and v.failed == 0


def test_corrupted_certificates_fail_every_trial():
    h = cert_hyperplanes(3, 4, 1)
    dropped = Certificate(h.n, h.dims, h.target, h.P, h.Q[:1], ((1,), (1,)))
    v = verify_certificate_generic(dropped, trials=10)
    assert v.failed_condition.startswith("cond3") and v.failed == 10
    swapped = Certificate(h.n, h.dims, h.target, h.P, h.Q, ((2,), (1,)))
    v = verify_certificate_generic(swapped, trials=10)
    assert v.failed_condition.startswith("cond3") and v.failed == 10


def test_literal_indexing_fails_condition_one():
    # P_k := X_k with the target as P_1 never has E_1 inside P~_1
    cert = Certificate(3, (1, 1, 1, 1), 1, (Var(1), Var(2), Var(3)), (Var(4),), ((1,), (1,)))
    v = verify_certificate_generic(cert, trials=5)
    assert v.failed_condition == "cond1"


def test_shipped_certificates_verify():
    for path in sorted(FIXTURES.glob("cert-*.json")):
        cert = Certificate.from_json(json.loads(path.read_text()))
        assert verify_certificate_generic(cert, trials=5).holds, path.name


# --- splitting and the general bound ---------------------------------------


def test_n_bound():
    assert [n_bound(n) for n in (2, 3, 4)] == [6, 16, 35]
    with pytest.raises(SemanticError):
        n_bound(1)
    assert splitting_size(3) == 4


def check_split(sysm, pair):
    w, z = (evaluate(e, sysm) for e in pair)
    assert not w.is_zero() and not z.is_zero()
    assert w.dim + z.dim == sysm.n and (w + z).is_full()
    assert not (pair[0].var_set & pair[1].var_set)


def test_splitting_two_lines():
    sysm = random_system(2, (1, 1), 0)
    pair = find_splitting(sysm)
    assert [str(e) for e in pair] == ["X1", "X2"]


def test_splitting_planes_needs_recursion():
    sysm = random_system(3, (2, 2, 2, 2), 0)
    w, z = find_splitting(sysm)
    check_split(sysm, (w, z))
    assert evaluate(w, sysm).dim == 1 and str(z) == "X1"


def test_splitting_lines_consumes_three():
    sysm = random_system(3, (1, 1, 1, 1), 0)
    assert [str(e) for e in find_splitting(sysm)] == ["X1", "X2 + X3"]


@pytest.mark.parametrize("n, dims", [(3, (1, 2, 1, 2)), (3, (2, 1, 2, 2)), (4, (1, 2, 3, 1, 2, 3, 2)), (4, (3,) * 7)])
def test_splitting_postcondition(n, dims):
    sysm = random_system(n, dims, 5)
    check_split(sysm, find_splitting(sysm))


def test_splitting_preconditions():
    with pytest.raises(SemanticError):
        find_splitting(random_system(3, (1, 1, 1), 0))
    with pytest.raises(SemanticError):
        find_splitting(random_system(3, (1, 1, 3, 1), 0))
    sysm = SubspaceSystem(3, (span(3, (1, 0, 0)), span(3, (1, 0, 0)), span(3, (0, 1, 0)), span(3, (0, 0, 1))))
    with pytest.raises(SemanticError):
        find_splitting(sysm)


def test_build_certificate_small():
    cert = build_certificate(2, (1,) * 6, 1, trials=30)
    assert cert.K == 2 and cert.target == 1
    assert verify_certificate_generic(cert, trials=30, seed=99).holds


def test_build_certificate_other_target():
    cert = build_certificate(2, (1,) * 7, 5, trials=20)
    assert verify_certificate_generic(cert, trials=20, seed=3).holds


def test_build_certificate_bound():
    with pytest.raises(SemanticError):
        build_certificate(2, (1,) * 5, 1)
    with pytest.raises(SemanticError):
        build_certificate(2, (1, 1, 1, 1, 1, 2), 1)


# --- search -----------------------------------------------------------------


@pytest.mark.parametrize("n, dims", [(2, (1, 1)), (3, (1, 1, 1)), (3, (2, 2, 2))])
def test_search_refutes_at_s_equals_n(n, dims):
    assert search_certificate(n, dims, 1) is None


@pytest.mark.parametrize("n, dims", [(2, (1, 1, 1)), (3, (1, 1, 1, 1)), (3, (2, 2, 2, 2))])
def test_search_succeeds_at_s_n_plus_one(n, dims):
    cert = search_certificate(n, dims, 1)
    assert cert is not None
    assert verify_certificate_generic(cert, trials=20, seed=5).holds


def test_search_matches_lines_family():
    found = search_certificate(2, (1, 1, 1), 1)
    built = cert_lines(2, 3, 1)
    for seed in range(5):
        sysm = random_system(2, (1, 1, 1), seed)
        assert verify_certificate(found, sysm).holds == verify_certificate(built, sysm).holds


def test_search_budget():
    with pytest.raises(BudgetExceeded):
        search_certificate(2, (1,) * 6, 1)
    with pytest.raises(BudgetExceeded):
        search_certificate(3, (1, 1, 1, 1), 1, max_nodes=2)
