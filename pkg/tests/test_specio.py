import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matred.errors import SpecError
from matred.measure import DiscreteAtoms, GammaSequence, GegenbauerMeasure, LebesgueInterval, MatrixWeight
from matred.specio import canonical_spec_dict, load_input, load_spec, parse_builtin, weight_from_dict


def spec(entries, dimension=2, base=None):
    return {"dimension": dimension, "base": base or {"kind": "lebesgue", "a": 0, "b": 1}, "entries": entries}


def test_parse_builtin():
    assert parse_builtin("tirao-variant") == {"name": "tirao-variant", "params": {}}
    assert parse_builtin("gegenbauer(1, 1.0)") == {"name": "gegenbauer", "params": {"ell": 1.0, "nu": 1.0}}
    assert parse_builtin(" q-gegenbauer-norms(1, 0.7, 5) ")["params"] == {"ell": 1.0, "q": 0.7, "count": 5}


@pytest.mark.parametrize("text", ["nope", "gegenbauer(1)", "gegenbauer(a, 1)", "q-gegenbauer-norms(1, 0.7, 2.5)",
                                  "gegenbauer(0.3, 1)", "q-gegenbauer-norms(1, 1.5, 4)", "(("])
def test_bad_builtins(text):
    with pytest.raises(SpecError):
        load_input(builtin=text)


def test_builtin_objects():
    assert isinstance(load_input(builtin="gegenbauer(1.5, 2.3)")[0], MatrixWeight)
    seq, desc = load_input(builtin="q-gegenbauer-norms(1, 0.7, 5)")
    assert isinstance(seq, GammaSequence) and len(seq) == 5
    assert weight_from_dict(desc).matrices[3].shape == (3, 3)


def test_hermitian_completion_and_complex_coefficients():
    w = weight_from_dict(spec({"0,0": [1, 1], "0,1": [[0, 0.5]], "1,1": [2]}))
    W = w(0.5)
    assert np.allclose(W, [[1.5, 0.5j], [-0.5j, 2]])
    assert isinstance(w.base, LebesgueInterval)


def test_bases():
    w = weight_from_dict(spec({"0,0": [1]}, 1, {"kind": "gegenbauer", "nu": 2}))
    assert isinstance(w.base, GegenbauerMeasure) and w.base.nu == 2
    w = weight_from_dict(spec({"0,0": [1]}, 1, {"kind": "atoms", "points": [1, 0], "masses": [1, 2]}))
    assert isinstance(w.base, DiscreteAtoms) and w.base.points == (0.0, 1.0)


@pytest.mark.parametrize("obj, where", [
    (spec({"0,0": [1], "0,1": [0, 1], "1,0": [0, 2], "1,1": [1]}), "entries['0,1'][1]"),
    (spec({"0,0": [[1, 0.5]], "1,1": [1]}), "entries['0,0'][0]"),
    (spec({"0,2": [1]}), "entries['0,2']"),
    (spec({"a": [1]}), "entries['a']"),
    (spec({"0,0": []}), "entries['0,0']"),
    (spec({"0,0": ["x"]}), "entries['0,0'][0]"),
    (spec({"0,0": [[1, 2, 3]]}), "entries['0,0'][0]"),
    (spec({"0,0": [1]}, base={"kind": "hermite"}), "base.kind"),
    (spec({"0,0": [1]}, base={"kind": "lebesgue", "a": 1, "b": 0}), "base"),
    (spec({"0,0": [1]}, base={"kind": "gegenbauer"}), "base.nu"),
    (spec({"0,0": [1]}, base={"kind": "atoms", "points": [0], "masses": [-1]}), "base"),
    ({"dimension": 0, "base": {"kind": "lebesgue"}, "entries": {"0,0": [1]}}, "dimension"),
    ({"dimension": 2, "entries": {"0,0": [1]}}, "base"),
    ({"builtin": {"name": "gegenbauer", "params": {"ell": 1}}}, "builtin.params"),
    ({"builtin": {"name": "other"}}, "builtin.name"),
    ([1, 2], "spec"),
])
def test_errors_carry_location(obj, where):
    with pytest.raises(SpecError, match=r"spec\." * (where != "spec") + where.replace("[", r"\[").replace("]", r"\]")):
        weight_from_dict(obj)


def test_indefinite_weight_is_rejected():
    with pytest.raises(SpecError, match="positive"):
        weight_from_dict(spec({"0,0": [1], "0,1": [2], "1,1": [1]}))


def test_file_errors(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"dimension": 2,\n "base": ')
    with pytest.raises(SpecError, match=r"broken.json:2:\d+"):
        load_spec(p)
    with pytest.raises(SpecError, match="cannot read"):
        load_spec(tmp_path / "missing.json")


@given(st.integers(0, 2**31 - 1), st.integers(1, 3), st.integers(0, 3))
def test_canonical_round_trip(seed, n, degree):
    rng = np.random.default_rng(seed)
    coeffs = []
    for _ in range(degree + 1):
        B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        coeffs.append(B @ B.conj().T)
    base = LebesgueInterval(0.0, 1.0)
    d = canonical_spec_dict(coeffs, base)
    w = weight_from_dict(json.loads(json.dumps(d)))
    assert np.allclose(np.array(w.monomial_coefficients()), np.array(coeffs)[: w.poly_degree + 1], atol=0)
    assert canonical_spec_dict(w.coefficients, base) == d
