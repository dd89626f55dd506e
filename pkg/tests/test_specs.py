import json

import numpy as np
import pytest

from ultraweight.specs import (
    default_k,
    load_document,
    matrix_from_spec,
    sequence_from_spec,
    series_from_spec,
    split_shorthand,
    weight_from_spec,
)
from ultraweight.seq_core import InputError

SEQUENCE_SHORTHANDS = [
    "gevrey:1.5",
    "example36:r=4",
    "example36:r=5,logbase=2",
    "logL",
    "omega_sequence:gevrey_root,1,rho=2",
    "omega_sequence:power_log,2,rho=1",
    "mu_table:1,2,3,4,5,6",
]


@pytest.mark.parametrize("text", SEQUENCE_SHORTHANDS)
def test_sequence_spec_round_trip(text):
    M = sequence_from_spec(text, 60)
    spec = M.spec()
    again = sequence_from_spec(spec)
    assert again.spec() == spec
    np.testing.assert_array_equal(again.logM, M.logM)
    assert sequence_from_spec(json.dumps(spec)).spec() == spec


@pytest.mark.parametrize("text", ["gevrey_root:1", "power_log:2.5", "linear_cutoff"])
def test_weight_spec_round_trip(text):
    w = weight_from_spec(text)
    assert weight_from_spec(w.spec()).spec() == w.spec()


@pytest.mark.parametrize("text", ["gevrey:0.5,1,2", "from_omega:linear_cutoff,rho=1/2/4"])
def test_matrix_spec_round_trip(text):
    X = matrix_from_spec(text, 60)
    Y = matrix_from_spec(X.spec)
    assert Y.spec == X.spec
    for a, b in zip(X.seqs, Y.seqs):
        np.testing.assert_array_equal(a.logM, b.logM)


def test_scaled_spec_round_trip():
    spec = {"kind": "scaled", "base": {"kind": "gevrey", "s": 1.0, "K": 30}, "rho": 3.0}
    M = sequence_from_spec(spec)
    assert sequence_from_spec(M.spec()).spec() == M.spec()


def test_shorthand_parsing():
    assert split_shorthand("example36:4,logbase=10") == ("example36", ["4"], {"logbase": "10"})
    assert load_document('{"kind": "gevrey", "s": 1}') == {"kind": "gevrey", "s": 1}
    assert weight_from_spec("gevrey_root:1/2").params == (0.5,)


def test_spec_files_are_loaded(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"kind": "gevrey", "s": 2, "K": 12}))
    assert sequence_from_spec(str(path)).kmax == 12


def test_series_specs():
    assert series_from_spec("poly:0,1,1/2", 4).to_strings() == ["0", "1", "1/2", "0", "0"]
    assert series_from_spec("exp", 3).to_strings() == ["1", "1", "1/2", "1/6"]
    with pytest.raises(InputError):
        series_from_spec("poly:1,2,3", 1)


@pytest.mark.parametrize("bad, field", [
    ("nope:1", "kind"),
    ('{"kind": "gevrey"}', "s"),
    ("{not json", "spec"),
    ("gevrey:abc", "spec"),
])
def test_bad_sequence_specs_name_the_field(bad, field):
    with pytest.raises(InputError) as info:
        sequence_from_spec(bad, 20)
    assert info.value.field == field


def test_default_k_from_environment(monkeypatch):
    assert default_k() == 100
    monkeypatch.setenv("ULTRAWEIGHT_DEFAULT_K", "37")
    assert default_k() == 37
    assert sequence_from_spec("gevrey:1").kmax == 37
    monkeypatch.setenv("ULTRAWEIGHT_DEFAULT_K", "x")
    with pytest.raises(InputError):
        default_k()
