#!/usr/bin/env python3
"""Writes fusion_case.json: inputs plus numpy reference outputs for the
projection / attention / gated-fusion pipeline.

    python3 tests/golden/make_fusion_golden.py
"""

import json
from pathlib import Path

import numpy as np


def tensor(a):
    a = np.atleast_2d(a)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": [float(v) for v in a.ravel()]}


def main():
    rng = np.random.default_rng(1234)
    m, ds, n, dl = 3, 6, 4, 5
    screen = rng.normal(size=(m, ds))
    language = rng.normal(size=(n, dl))
    W = rng.normal(scale=0.5, size=(dl, ds))
    Wl = rng.normal(scale=0.5, size=(dl, dl))
    Wv = rng.normal(scale=0.5, size=(dl, dl))

    projected = screen @ W.T
    scores = language @ projected.T / np.sqrt(dl)
    scores -= scores.max(axis=1, keepdims=True)
    weights = np.exp(scores)
    weights /= weights.sum(axis=1, keepdims=True)
    attended = weights @ projected
    gate = 1.0 / (1.0 + np.exp(-(language @ Wl.T + attended @ Wv.T)))
    fused = (1.0 - gate) * language + gate * attended

    out = {
        "bundle": {"screen": tensor(screen), "language": tensor(language)},
        "params": {"projection": tensor(W), "gate_language": tensor(Wl), "gate_vision": tensor(Wv)},
        "expected": {
            "projected": tensor(projected),
            "weights": tensor(weights),
            "attended": tensor(attended),
            "gate": tensor(gate),
            "fused": tensor(fused),
        },
    }
    path = Path(__file__).resolve().parent / "fusion_case.json"
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
