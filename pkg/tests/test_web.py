import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigidweb.errors import InputError, SemanticError, SingularPointError
from rigidweb.genpos import system_in_general_position
from rigidweb.linalg import Matrix
from rigidweb.scalar import GaussianRational as GR
from rigidweb.web import (
    Poly,
    PolyMap,
    Presentation,
    jacobian,
    jacobian_at,
    tangent_system,
    web_report,
)

from conftest import FIXTURES, span


def z(j, n=2):
    return Poly.var(n, j)


def monomial_map(n, *exps):
    """One scalar component per exponent vector, coefficient 1."""
    return PolyMap(n, tuple(Poly(n, {tuple(e): GR(1)}) for e in exps))


LINES_PRES = Presentation(2, (monomial_map(2, (1, 0)), monomial_map(2, (0, 1)), monomial_map(2, (1, 1))))


def test_poly_arithmetic_and_eval():
    p = z(0) * z(0) - Poly.const(2, 3) * z(1) + Poly.const(2, GR(0, 1))
    assert p([GR(2), GR(1)]) == GR(1, 1)
    assert p.derivative(0) == Poly.const(2, 2) * z(0)
    assert p.derivative(1) == Poly.const(2, -3)
    assert (p - p) == Poly(2)


def test_jacobian_symbolic():
    g = PolyMap(2, (z(0) * z(1), z(0) + z(1) * z(1)))
    jac = jacobian(g)
    assert jac[0] == [z(1), z(0)]
    assert jac[1] == [Poly.const(2, 1), Poly.const(2, 2) * z(1)]
    assert jacobian_at(g, [GR(3), GR(5)]) == Matrix([[GR(5), GR(3)], [GR(1), GR(10)]], 2)


terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.builds(GR, st.integers(-5, 5), st.integers(-5, 5)),
    max_size=5,
)


def shifted(p: Poly, j: int) -> Poly:
    """p(z + t e_j) as a polynomial in (z_1, z_2, t)."""
    out = Poly(3)
    for exps, c in p.terms.items():
        term = Poly.const(3, c)
        for i, e in enumerate(exps):
            base = Poly.var(3, i) + Poly.var(3, 2) if i == j else Poly.var(3, i)
            for _ in range(e):
                term = term * base
        out = out + term
    return out


@given(terms, st.integers(0, 1), st.integers(-9, 9), st.integers(-9, 9))
def test_derivative_is_directional(tm, j, a, b):
    p = Poly(2, tm)
    pt = [GR(a), GR(b)]
    assert shifted(p, j).derivative(2)(pt + [GR(0)]) == p.derivative(j)(pt)


@given(terms, terms)
def test_product_rule(t1, t2):
    p, q = Poly(2, t1), Poly(2, t2)
    assert (p * q).derivative(0) == p.derivative(0) * q + p * q.derivative(0)


def test_tangent_lines_example():
    tangents = tangent_system(LINES_PRES, ["1", "1"])
    assert tangents.members == (span(2, (0, 1)), span(2, (1, 0)), span(2, (1, -1)))


def test_singular_point():
    with pytest.raises(SingularPointError) as exc:
        tangent_system(LINES_PRES, [0, 0])
    assert exc.value.index == 3
    with pytest.raises(SemanticError):
        tangent_system(LINES_PRES, [1])


def test_coordinate_projections_give_coordinate_subspaces():
    pres = Presentation(3, (PolyMap.coordinates(3, [0]), PolyMap.coordinates(3, [1, 2])))
    t = tangent_system(pres, [5, 6, 7])
    assert t.members == (span(3, (0, 1, 0), (0, 0, 1)), span(3, (1, 0, 0)))


def test_report_lines_rigid():
    rep = web_report(LINES_PRES, [1, 1])
    assert rep.dims == (1, 1, 1) and rep.uniform and rep.meets_uniform_bound
    assert rep.general_position and rep.rigid
    assert rep.contained_pairs == ()


@pytest.mark.parametrize("pt", [[1, 2], [3, -1], ["1+i", "2"]])
def test_report_agrees_with_genpos(pt):
    rep = web_report(LINES_PRES, pt)
    assert bool(rep.general_position) == bool(system_in_general_position(tangent_system(LINES_PRES, pt)))


def test_report_not_general_position():
    # z1 and z1 + z2^2 share their tangent line where z2 = 0
    pres = Presentation(2, (monomial_map(2, (1, 0)), PolyMap(2, (z(0) + z(1) * z(1),)), monomial_map(2, (0, 1))))
    rep = web_report(pres, [1, 0])
    assert not rep.general_position and not rep.rigid
    assert web_report(pres, [1, 1]).rigid


def test_contained_pairs_flags_redundant_map():
    pres = Presentation(3, (PolyMap.coordinates(3, [0, 1]), PolyMap.coordinates(3, [0]), PolyMap.coordinates(3, [2])))
    rep = web_report(pres, [1, 2, 3])
    assert (1, 2) in rep.contained_pairs


def test_presentation_json():
    data = json.loads((FIXTURES / "presentation-z1-z2-z1z2.json").read_text())
    pres = Presentation.from_json(data)
    assert pres == LINES_PRES
    assert Presentation.from_json(json.loads(json.dumps(pres.to_json()))) == pres
    assert Presentation.from_json(data["defs"]) == pres
    with pytest.raises(InputError):
        Presentation.from_json({"defs": [{"n_in": 2, "components": [[{"coeff": "1", "exps": [1]}]]}]})
    with pytest.raises(InputError):
        Presentation.from_json([])


def test_report_json_stable():
    a = json.dumps(web_report(LINES_PRES, [2, 3], seed=4).to_json(), sort_keys=True)
    b = json.dumps(web_report(LINES_PRES, [2, 3], seed=4).to_json(), sort_keys=True)
    assert a == b and json.loads(a)["rigid"] is True
