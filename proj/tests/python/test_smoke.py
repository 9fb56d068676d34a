"""End-to-end smoke tests for the python layer against the bundled models."""

import os

import pytest

import vasco

MODELS = os.environ["VASCO_MODELS_DIR"]


def read(name):
    with open(os.path.join(MODELS, name)) as fh:
        return fh.read()


def test_analyze_symmetric_walk():
    r = vasco.analyze(read("rw1.vass"))
    assert r["model_hash"] == "6f0b07eae3918517"
    assert r["length"]["display"] == "Theta(n^2)"
    assert r["counters"][0] == {
        "name": "c",
        "kind": "TightPoly",
        "degree": 1,
        "display": "Theta(n)",
        "provenance": "rank certificate caps growth at degree 1",
    }
    assert all(t["degree"] == 2 for t in r["transitions"])
    assert not r["unresolved"] and not r["cap_reached"]


def test_analyze_doubling_model():
    r = vasco.analyze(read("expo1.vass"))
    assert r["length"]["kind"] == "ExponentialLower"
    assert all(c["kind"] == "ExponentialLower" for c in r["counters"])
    assert all(t["kind"] == "ExponentialLower" for t in r["transitions"])


def test_mc_classify_matches_analyze():
    r = vasco.mc_classify(read("rw1.vass"))
    comp = r["components"][0]
    assert comp["length"]["kind"] == "ThetaN2"
    assert comp["counters"][0]["kind"] == "ThetaN"


def test_trajectory_is_deterministic():
    text = read("loop-minus.vass")
    a = vasco.run_trajectory(text, "uniform", 5, 1000, 7)
    b = vasco.run_trajectory(text, "uniform", 5, 1000, 7)
    assert a == b
    assert a["terminated"] and a["steps"] == 6
    assert a["max_counter"] == {"c": 5}


def test_simulate_exact_drain():
    r = vasco.simulate(read("loop-minus.vass"), "length", "1/2", [8, 16], 30, 1000)
    values = {p["n"]: p["value"] for p in r["points"]}
    assert values == {8: 9, 16: 17}


def test_decompose_reconstructs():
    r = vasco.decompose(read("expo1.vass"), {"t1": "1", "t2": "1", "t3": "1", "t4": "1"})
    assert r["exact"] is True
    assert len(r["parts"]) == 3


def test_errors_are_typed():
    with pytest.raises(vasco.ModelParseError):
        vasco.analyze("counters: c\nstate p\n")
    with pytest.raises(vasco.PreconditionFailure):
        vasco.analyze(read("twocomponent-disconnected.vass"))
