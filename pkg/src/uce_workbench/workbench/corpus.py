"""Built-in algebra corpus, shipped as .alg files next to this module.

Rank-one ground rings Z, Q, GF(2), GF(3), Z/4 plus rank-two algebras:
even dual numbers, odd square-zero (Grassmann) over GF(2) and over Q, the
group algebra of the order-two group, and an odd square-one (Clifford)
algebra over Z.
"""

from __future__ import annotations

from importlib import resources

from ..superalg import SuperAlgebra
from .parser import parse_algebra

CORPUS_NAMES = (
    "z", "q", "gf2", "gf3", "z4",
    "dual", "grassmann", "grassmann-q", "group2", "clifford",
)


def corpus_text(name: str) -> str:
    ref = resources.files(__package__) / "algebras" / f"{name}.alg"
    return ref.read_text(encoding="utf-8")


def load_corpus_algebra(name: str) -> SuperAlgebra:
    if name not in CORPUS_NAMES:
        raise KeyError(f"no corpus algebra named {name!r}; "
                       f"known: {', '.join(CORPUS_NAMES)}")
    return parse_algebra(corpus_text(name), label=name)


def load_corpus() -> dict[str, SuperAlgebra]:
    """All corpus algebras, parsed and validated, in declaration order."""
    return {name: load_corpus_algebra(name) for name in CORPUS_NAMES}
