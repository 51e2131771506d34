"""Kernel backend selection.

The hot loop of the Monte Carlo checks (hundreds of thousands of
single-iteration trials) runs through one of two interchangeable backends:
a compiled Cython extension and a pure-Python fallback with identical,
bit-for-bit semantics.  The compiled one is preferred when it imported
cleanly; set SLEEPCOLOR_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os
from array import array

from ..graph import ColoringInstance
from . import pure

try:  # pragma: no cover - exercised only when the extension is built
    from . import _speed as speed
except ImportError:  # pragma: no cover
    speed = None

if os.environ.get("SLEEPCOLOR_PURE"):
    _active = pure
else:
    _active = speed if speed is not None else pure

BACKEND = _active.NAME


def backends() -> dict[str, object]:
    """Available backend modules keyed by name."""
    out = {pure.NAME: pure}
    if speed is not None:
        out[speed.NAME] = speed
    return out


def instance_arrays(instance: ColoringInstance):
    """Flatten an instance into the CSR-style arrays the backends consume."""
    g = instance.graph
    nodes = g.nodes
    index = {v: i for i, v in enumerate(nodes)}
    ids = array("q", nodes)
    indptr = array("q", [0])
    indices = array("q")
    list_indptr = array("q", [0])
    list_values = array("q")
    for v in nodes:
        indices.extend(index[u] for u in g.adjacency[v])
        indptr.append(len(indices))
        list_values.extend(instance.lists[v])
        list_indptr.append(len(list_values))
    return ids, indptr, indices, list_indptr, list_values


def phase1_trial_counts(
    instance: ColoringInstance,
    seed_base: int,
    trials: int,
    backend: str | None = None,
) -> dict[int, int]:
    """Adoption counts per node over `trials` single-iteration runs.

    Trial t is bit-identical to running the first phase-1 iteration through
    the round engine with run seed (seed_base + t).
    """
    impl = _active if backend is None else backends()[backend]
    ids, indptr, indices, list_indptr, list_values = instance_arrays(instance)
    counts = impl.trial_counts(
        ids, indptr, indices, list_indptr, list_values, seed_base, trials
    )
    return {v: counts[i] for i, v in enumerate(instance.graph.nodes)}
