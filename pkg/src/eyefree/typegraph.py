"""Types: igraphs whose vertices are also coloured red or blue."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import kernels
from .igraph import BLUE, GREEN, RED, PairColor


class TypeGraph:
    """A type on vertices 0..k-1.

    ``codes`` is the k*k colour matrix with the vertex colour (1 red, 2 blue)
    on the diagonal and a pair colour in {1, 2, 3} elsewhere.
    """

    __slots__ = ("k", "codes", "_canon")

    def __init__(self, k: int, codes: bytes):
        if len(codes) != k * k:
            raise ValueError("colour matrix has the wrong size")
        for u in range(k):
            if codes[u * k + u] not in (RED, BLUE):
                raise ValueError("type vertices are red or blue")
            for v in range(u + 1, k):
                c = codes[u * k + v]
                if c != codes[v * k + u] or c not in (RED, BLUE, GREEN):
                    raise ValueError(f"bad type edge colour at {(u, v)}")
        self.k = k
        self.codes = bytes(codes)
        self._canon = None

    @classmethod
    def build(cls, vcolors: Sequence[int], ecolors: Sequence[int] | None = None) -> "TypeGraph":
        """From vertex colours and row-major upper-triangular edge colours (default green)."""
        k = len(vcolors)
        codes = bytearray(k * k)
        for v, c in enumerate(vcolors):
            codes[v * k + v] = int(c)
        it = iter(ecolors) if ecolors is not None else None
        for u in range(k):
            for v in range(u + 1, k):
                c = GREEN if it is None else int(next(it))
                codes[u * k + v] = codes[v * k + u] = c
        return cls(k, bytes(codes))

    @classmethod
    def tau(cls, x: int, y: int) -> "TypeGraph":
        """x red and y blue vertices, every edge green."""
        return cls.build([RED] * x + [BLUE] * y)

    def vcolor(self, u: int) -> PairColor:
        return PairColor(self.codes[u * self.k + u])

    def ecolor(self, u: int, v: int) -> PairColor:
        return PairColor(self.codes[u * self.k + v])

    def delete(self, v: int) -> "TypeGraph":
        keep = [u for u in range(self.k) if u != v]
        return self.sub(keep)

    def sub(self, vertices: Sequence[int]) -> "TypeGraph":
        k = len(vertices)
        codes = bytearray(k * k)
        for a, u in enumerate(vertices):
            for b, w in enumerate(vertices):
                codes[a * k + b] = self.codes[u * self.k + w]
        return TypeGraph(k, bytes(codes))

    def with_edge(self, u: int, v: int, colour: int) -> "TypeGraph":
        codes = bytearray(self.codes)
        codes[u * self.k + v] = codes[v * self.k + u] = int(colour)
        return TypeGraph(self.k, bytes(codes))

    def weight_matrix(self, p: Fraction) -> list[list[Fraction]]:
        """W_p: p for red, 1-p for blue, 1 for green; the diagonal uses vertex colours."""
        w = {RED: p, BLUE: 1 - p, GREEN: Fraction(1)}
        k = self.k
        return [[w[self.codes[u * k + v]] for v in range(k)] for u in range(k)]

    def canonical(self) -> bytes:
        if self._canon is None:
            self._canon = kernels.canonical_code(self.k, self.codes)
        return self._canon

    def green_degree(self, u: int) -> int:
        return sum(1 for v in range(self.k) if v != u and self.codes[u * self.k + v] == GREEN)

    def to_text(self) -> str:
        k = self.k
        vc = "".join("rb"[self.codes[v * k + v] - 1] for v in range(k))
        ec = "".join(PairColor(self.codes[u * k + v]).char for u, v in combinations(range(k), 2))
        return f"k={k}; vcolors={vc}; ecolors={ec}"

    @classmethod
    def from_text(cls, text: str) -> "TypeGraph":
        fields = {}
        for part in text.replace("\n", ";").split(";"):
            if part.strip():
                key, val = part.split("=", 1)
                fields[key.strip()] = val.strip()
        k = int(fields["k"])
        vc = fields.get("vcolors", "")
        ec = fields.get("ecolors", "")
        if len(vc) != k or len(ec) != k * (k - 1) // 2:
            raise ValueError("type text has inconsistent lengths")
        return cls.build([{"r": RED, "b": BLUE}[ch] for ch in vc], [PairColor.from_char(ch) for ch in ec])

    def __eq__(self, other) -> bool:
        return isinstance(other, TypeGraph) and self.k == other.k and self.codes == other.codes

    def __hash__(self) -> int:
        return hash((self.k, self.codes))

    def __repr__(self) -> str:
        return f"TypeGraph({self.to_text()!r})"
