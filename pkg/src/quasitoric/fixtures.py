"""The worked polytopes used throughout the tests and the ``example`` command.

Each builder returns spec text (so the same code path as user files is
exercised) and :func:`load` parses it.
"""

import json
import math
from importlib import resources

from .polytope import parse_spec

NAMES = ("interval", "triangle", "pentagon", "square", "octahedron")


def _fmt(x):
    return repr(float(x))


def interval_spec(s=1.0, t=math.sqrt(2)):
    """[0, 1] cut out by ``X_1 = s``, ``X_2 = -t``."""
    return json.dumps({
        "name": "interval",
        "n": 1,
        "params": {"s": _fmt(s), "t": _fmt(t)},
        "normals": [["s"], ["-t"]],
        "offsets": [0, "-t"],
    }, indent=2)


def triangle_spec(s=1.0, t=math.sqrt(2)):
    """Right triangle with vertices (0, 0), (s, 0), (0, t)."""
    return json.dumps({
        "name": "triangle",
        "n": 2,
        "params": {"s": _fmt(s), "t": _fmt(t)},
        "normals": [[1, 0], [0, 1], ["-t", "-s"]],
        "offsets": [0, 0, "-s*t"],
    }, indent=2)


def pentagon_spec():
    """Regular pentagon with vertices on the unit circle; its inward normals
    are the vertex directions themselves."""
    return json.dumps({
        "name": "pentagon",
        "n": 2,
        "params": {"a": "cos(2*pi/5)", "b": "sin(2*pi/5)",
                   "c": "cos(4*pi/5)", "d": "sin(4*pi/5)"},
        "normals": [[1, 0], ["a", "b"], ["c", "d"], ["c", "-d"], ["a", "-b"]],
        "offsets": ["c", "c", "c", "c", "c"],
    }, indent=2)


def square_spec():
    """Unit square with the standard lattice normals."""
    return json.dumps({
        "name": "square",
        "n": 2,
        "normals": [[1, 0], [0, 1], [-1, 0], [0, -1]],
        "offsets": [0, 0, -1, -1],
    }, indent=2)


def octahedron_spec():
    """``|x| + |y| + |z| <= 1``: every vertex lies on four facets."""
    normals = [[-a, -b, -c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    return json.dumps({
        "name": "octahedron",
        "n": 3,
        "normals": normals,
        "offsets": [-1] * 8,
    }, indent=2)


_BUILDERS = {
    "interval": interval_spec,
    "triangle": triangle_spec,
    "pentagon": pentagon_spec,
    "square": square_spec,
    "octahedron": octahedron_spec,
}


def spec_text(name, **params):
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}") \
            from None
    return builder(**params)


def load(name, **params):
    return parse_spec(spec_text(name, **params))


def packaged_path(name):
    """Path of the shipped ``<name>.poly`` file."""
    return resources.files("quasitoric") / "data" / f"{name}.poly"
