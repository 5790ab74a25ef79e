import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pepscanon import tensorfile
from pepscanon.lattice import MpsSpec, PepsSpec
from pepscanon.states import aklt, toric_code


@given(arrays(np.complex128, st.sampled_from([(2, 3), (2, 2, 2), (2, 2, 2, 2, 2)]),
              elements=st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)))
def test_roundtrip_is_exact(arr):
    kind = {2: "matrix", 3: "mps", 5: "peps"}[arr.ndim]
    back, k, meta = tensorfile.loads(tensorfile.dumps(arr, kind, {"x": 1}))
    assert k == kind and meta == {"x": 1}
    assert np.array_equal(back, arr)


def test_spec_roundtrip(tmp_path):
    for spec in (aklt(), toric_code(2, 3, validate_on=())):
        path = tmp_path / "s.json"
        path.write_text(tensorfile.spec_to_text(spec, "x"))
        back = tensorfile.read_spec(path)
        assert type(back) is type(spec)
        assert np.array_equal(back.tensor, spec.tensor)
    assert isinstance(back, PepsSpec) and (back.rows, back.cols) == (2, 3)


def test_open_chain_not_serialized():
    spec = MpsSpec.open_chain([np.ones((2, 1, 1))])
    with pytest.raises(ValueError):
        tensorfile.spec_to_text(spec)


def _doc(**over):
    doc = {"format": "pepscanon-tensor", "version": 1, "kind": "matrix", "shape": [1, 2],
           "entries": [[1, 0], [0, 1]], "meta": {}}
    doc.update(over)
    return json.dumps(doc)


@pytest.mark.parametrize("text,fragment", [
    ('{"format": ', "line 1, column"),
    (_doc(format="other"), "field 'format'"),
    (_doc(version=7), "field 'version'"),
    (_doc(kind="cube"), "field 'kind'"),
    (_doc(shape=[0, 2]), "field 'shape'"),
    (_doc(entries=[[1, 0]]), "field 'entries'"),
    (_doc(entries=[[1, 0], [0, "x"]]), "entries[1]"),
    (_doc(entries=[[1, 0], [0, 1e999]]), "entries[1]"),
    (_doc(kind="mps"), "needs 3 axes"),
    (_doc(meta=[]), "field 'meta'"),
    ("[1, 2]", "top level"),
])
def test_parse_errors_name_the_position(text, fragment):
    with pytest.raises(tensorfile.TensorFileError) as info:
        tensorfile.loads(text)
    assert fragment in str(info.value)


def test_read_matrix_requires_matrix(tmp_path):
    path = tmp_path / "m.json"
    tensorfile.write(path, np.ones((2, 2, 2)), "mps")
    with pytest.raises(tensorfile.TensorFileError):
        tensorfile.read_matrix(path)
