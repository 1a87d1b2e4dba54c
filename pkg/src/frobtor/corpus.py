"""Bundled ring files and helpers for resolving named modules.

Each ``.ring`` file carries a ring presentation plus a few declared
modules (``k`` and one or two fixed cokernels).  CLI commands and the
test suite load rings either from an explicit path or by bundled name.
"""

from importlib import resources
from pathlib import Path

from .errors import RingSyntaxError
from .resolve import ModulePresentation
from .ringkit import build_algebra, parse_presentation

# Rings whose maximal ideal satisfies m^p = 0, so every twist r >= 1
# annihilates the differentials outright.
ZERO_TWIST = ("r1", "x2", "x3_p3", "x5_p5", "x7_p7", "m3_p3")

# All finite-length (Artinian) rings in the corpus.
ARTINIAN = ZERO_TWIST + ("artin_mixed", "ex33", "field")

# Infinite-dimensional rings, handled through degree caps.
CAPPED = ("ex31", "ex32", "depth1")

ALL_RINGS = ARTINIAN + CAPPED


def ring_source(name):
    """Source text of a bundled ring file (name without the .ring suffix)."""
    base = resources.files("frobtor") / "rings" / f"{name}.ring"
    if not base.is_file():
        raise RingSyntaxError(f"no bundled ring named {name!r}")
    return base.read_text()


def load_source(spec):
    """Resolve a path-or-bundled-name to (source text, display label)."""
    path = Path(spec)
    if path.is_file():
        return path.read_text(), path.name
    name = spec[:-5] if spec.endswith(".ring") else spec
    return ring_source(name), name


def load_ring(spec):
    """Build (algebra, presentation) from a path or bundled name."""
    source, _ = load_source(spec)
    pres = parse_presentation(source)
    return build_algebra(pres), pres


def thaw_matrix(algebra, frozen_rows):
    """Rebuild a matrix of ring elements from frozen polynomial rows."""
    return [[algebra.nf(dict(e)) for e in row] for row in frozen_rows]


def module_named(algebra, pres, name):
    """Look up a module by declared name; "k" is always available."""
    declared = dict(pres.modules)
    if name in declared:
        value = declared[name]
        if value == "k":
            mod = ModulePresentation.k_module(algebra)
        else:
            mod = ModulePresentation(algebra, thaw_matrix(algebra, value))
    elif name == "k":
        mod = ModulePresentation.k_module(algebra)
    else:
        known = ", ".join(sorted(set(declared) | {"k"}))
        raise KeyError(f"no module named {name!r} (declared: {known})")
    mod.name = name
    return mod


def declared_modules(algebra, pres):
    """All modules declared in the file, in declaration order."""
    out = []
    for name, _ in pres.modules:
        out.append(module_named(algebra, pres, name))
    return out
