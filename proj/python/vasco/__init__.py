"""Asymptotic complexity analysis of VASS MDPs.

Thin convenience layer over the native module: the *_json entry points
return report strings; the wrappers here hand back parsed dictionaries.
"""

import json

from ._vasco import (
    AnalysisLimit,
    ModelParseError,
    ModelValidationError,
    PreconditionFailure,
    __version__,
    analyze_json,
    canonical_form,
    decompose_json,
    mc_classify_json,
    mec_json,
    model_hash,
    run_trajectory,
    simulate_json,
)

__all__ = [
    "AnalysisLimit",
    "ModelParseError",
    "ModelValidationError",
    "PreconditionFailure",
    "__version__",
    "analyze",
    "analyze_json",
    "canonical_form",
    "decompose",
    "decompose_json",
    "mc_classify",
    "mc_classify_json",
    "mec",
    "mec_json",
    "model_hash",
    "run_trajectory",
    "simulate",
    "simulate_json",
]


def analyze(text, max_k=16, zb_mode="literal"):
    return json.loads(analyze_json(text, max_k, zb_mode))


def mc_classify(text):
    return json.loads(mc_classify_json(text))


def mec(text):
    return json.loads(mec_json(text))


def decompose(text, flow):
    return json.loads(decompose_json(text, flow))


def simulate(text, target, p, n_list, trials, max_steps, strategy="uniform", seed=1, start=""):
    return json.loads(
        simulate_json(text, target, p, list(n_list), trials, max_steps, strategy, seed, start)
    )
