"""Circle/arc configurations and the hub-circle applicability test.

A configuration is a set of labeled circles c0..cn with colored arcs between
them; each arc records one crossing of the source diagram and its color says
which way that crossing was resolved.  The metric-family construction applies
exactly when some circle meets every arc in exactly one endpoint, so the
checker is a pure incidence predicate on a multigraph: colors never enter,
and a loop disqualifies its own circle.

File format, one record per line::

    circles <n+1>
    arc <i> <j> <0|1>

with '#' starting a comment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class ConfigFormatError(ValueError):
    """Malformed configuration text (bad header, label or color)."""


class Color(enum.IntEnum):
    ZERO_RES = 0
    ONE_RES = 1


@dataclass(frozen=True)
class Arc:
    i: int
    j: int
    color: Color


@dataclass(frozen=True)
class LinkConfig:
    n_circles: int
    arcs: tuple

    def relabeled(self, perm) -> "LinkConfig":
        """Apply a circle permutation; perm[i] is the new label of circle i."""
        if sorted(perm) != list(range(self.n_circles)):
            raise ValueError("perm must be a permutation of the circle labels")
        arcs = tuple(Arc(perm[a.i], perm[a.j], a.color) for a in self.arcs)
        return LinkConfig(self.n_circles, arcs)

    def color_flipped(self) -> "LinkConfig":
        arcs = tuple(Arc(a.i, a.j, Color(1 - a.color)) for a in self.arcs)
        return LinkConfig(self.n_circles, arcs)


@dataclass(frozen=True)
class BlackGraph:
    """Multigraph with a vertex per black region and an edge per crossing."""

    n_vertices: int
    edges: tuple


@dataclass(frozen=True)
class ApplicabilityVerdict:
    applicable: bool
    witness: int | None
    counterexamples: dict

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "witness": self.witness,
            "counterexamples": {str(k): v for k, v in sorted(self.counterexamples.items())},
        }


def parse_config(text: str) -> LinkConfig:
    """Parse the plain-text record format; rejects dangling labels."""
    n_circles = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "circles":
            if n_circles is not None:
                raise ConfigFormatError(f"line {lineno}: duplicate circles header")
            if len(fields) != 2:
                raise ConfigFormatError(f"line {lineno}: expected 'circles <count>'")
            try:
                n_circles = int(fields[1])
            except ValueError:
                raise ConfigFormatError(f"line {lineno}: bad circle count {fields[1]!r}")
            if n_circles < 1:
                raise ConfigFormatError(f"line {lineno}: need at least one circle")
        elif fields[0] == "arc":
            if n_circles is None:
                raise ConfigFormatError(f"line {lineno}: arc before circles header")
            if len(fields) != 4:
                raise ConfigFormatError(f"line {lineno}: expected 'arc <i> <j> <0|1>'")
            try:
                i, j = int(fields[1]), int(fields[2])
            except ValueError:
                raise ConfigFormatError(f"line {lineno}: bad circle label")
            if not (0 <= i < n_circles and 0 <= j < n_circles):
                raise ConfigFormatError(
                    f"line {lineno}: circle label out of range for {n_circles} circles")
            if fields[3] not in ("0", "1"):
                raise ConfigFormatError(f"line {lineno}: malformed color {fields[3]!r}")
            arcs.append(Arc(i, j, Color(int(fields[3]))))
        else:
            raise ConfigFormatError(f"line {lineno}: unknown record {fields[0]!r}")
    if n_circles is None:
        raise ConfigFormatError("missing circles header")
    return LinkConfig(n_circles=n_circles, arcs=tuple(arcs))


def format_config(cfg: LinkConfig) -> str:
    lines = [f"circles {cfg.n_circles}"]
    lines += [f"arc {a.i} {a.j} {int(a.color)}" for a in cfg.arcs]
    return "\n".join(lines) + "\n"


def _witness_search(n: int, endpoints) -> ApplicabilityVerdict:
    """Shared predicate: find v such that every pair meets v exactly once."""
    counterexamples = {}
    for v in range(n):
        offending = None
        for idx, (i, j) in enumerate(endpoints):
            if (i == v) == (j == v):
                offending = idx
                break
        if offending is None:
            return ApplicabilityVerdict(True, v, {})
        counterexamples[v] = offending
    return ApplicabilityVerdict(False, None, counterexamples)


def theorem_applicable(cfg: LinkConfig) -> ApplicabilityVerdict:
    """Hub-circle test: some circle meets every arc in exactly one endpoint.

    An empty arc list is vacuously applicable with the first circle as
    witness; on failure every candidate carries its first offending arc index.
    """
    return _witness_search(cfg.n_circles, [(a.i, a.j) for a in cfg.arcs])


def black_graph_check(g: BlackGraph) -> ApplicabilityVerdict:
    """Same predicate on the black-region multigraph."""
    return _witness_search(g.n_vertices, list(g.edges))


def config_to_graph(cfg: LinkConfig) -> BlackGraph:
    """Forget colors: circles become vertices, arcs become edges."""
    return BlackGraph(n_vertices=cfg.n_circles,
                      edges=tuple((a.i, a.j) for a in cfg.arcs))


# ---------------------------------------------------------------------------
# worked-example fixtures


def _cfg(n: int, pairs, colors=None) -> LinkConfig:
    if colors is None:
        colors = [0] * len(pairs)
    arcs = tuple(Arc(i, j, Color(c)) for (i, j), c in zip(pairs, colors))
    return LinkConfig(n_circles=n, arcs=arcs)


def trefoil_coloring_a() -> LinkConfig:
    """Two circles joined by three parallel arcs; the hub test succeeds."""
    return _cfg(2, [(0, 1), (0, 1), (0, 1)])


def trefoil_coloring_b() -> LinkConfig:
    """Three circles joined in a triangle; no circle can be a hub."""
    return _cfg(3, [(0, 1), (1, 2), (2, 0)])


def torus_two_strand(n: int) -> LinkConfig:
    """Two circles with n parallel arcs (two-strand torus diagram)."""
    return _cfg(2, [(0, 1)] * n)


def connected_sum(ns) -> LinkConfig:
    """Outer circle hub with one inner circle per summand, arcs fanned out."""
    pairs = []
    for k, n in enumerate(ns, start=1):
        pairs += [(0, k)] * n
    return _cfg(1 + len(ns), pairs)


def two_crossing_configs() -> dict:
    """The four two-crossing configurations, each with a hub resolution.

    The first three come straight from their drawn resolutions; the fourth
    (two figure-eights) is taken through the partial resolution of the
    four-arc two-strand diagram, which leaves two parallel arcs.
    """
    return {
        "parallel_pair": _cfg(2, [(0, 1), (0, 1)]),
        "outer_star": _cfg(3, [(0, 1), (0, 2)]),
        "middle_hub": _cfg(3, [(0, 1), (1, 2)]),
        "figure_eights_via_t24": _cfg(2, [(0, 1), (0, 1)]),
    }


def l8n1_configuration() -> LinkConfig:
    """Six-circle, eight-arc parse fixture shaped like the L8N1 resolution.

    Incidence only; no applicability claim is attached to this example.
    """
    return _cfg(6, [(0, 1), (0, 1), (0, 2), (2, 3), (2, 3), (3, 4), (4, 5), (1, 5)],
                colors=[0, 1, 0, 0, 1, 0, 1, 0])


def l8n1_black_graph() -> BlackGraph:
    """Five-vertex, eight-edge multigraph matching the checkerboard count."""
    return BlackGraph(5, ((0, 1), (0, 1), (1, 2), (1, 2), (2, 3), (2, 3), (3, 4), (0, 4)))
