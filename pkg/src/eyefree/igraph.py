"""Igraphs: complete graphs whose pairs are red, blue, green or white.

Colour codes double as bit masks: bit 0 set means the pair is red in the
two-coloured viewpoint (red or green), bit 1 means blue (blue or green). White
is 0, so a white pair belongs to neither colour class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from . import kernels

Rat = Fraction


class PairColor(IntEnum):
    WHITE = 0
    RED = 1
    BLUE = 2
    GREEN = 3

    @property
    def char(self) -> str:
        return "wrbg"[self]

    @classmethod
    def from_char(cls, ch: str) -> "PairColor":
        try:
            return cls("wrbg".index(ch))
        except ValueError:
            raise ValueError(f"unknown colour character {ch!r}") from None


WHITE, RED, BLUE, GREEN = PairColor.WHITE, PairColor.RED, PairColor.BLUE, PairColor.GREEN


def as_rat(value, *, allow_float: bool = False) -> Fraction:
    """Parse ``p`` as an exact rational ("num/den", int or Fraction).

    Decimal strings and floats are refused unless ``allow_float`` is set, in
    which case they are converted through ``Fraction(str(x))``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a probability")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not allow_float:
            raise ValueError(f"inexact value {value!r}; use a fraction such as 1/3")
        return Fraction(str(value))
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            if not allow_float:
                raise ValueError(f"inexact value {value!r}; use a fraction such as 1/3")
        return Fraction(text)
    raise TypeError(f"cannot read {value!r} as a rational")


def check_probability(p: Fraction, *, open_interval: bool = False) -> None:
    if open_interval and not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")


class IGraph:
    """Immutable whitened igraph on vertices 0..n-1."""

    __slots__ = ("n", "codes", "red", "blue", "_hash")

    def __init__(self, n: int, codes: bytes):
        if len(codes) != n * n:
            raise ValueError("colour matrix has the wrong size")
        red = [0] * n
        blue = [0] * n
        for u in range(n):
            if codes[u * n + u] != 0:
                raise ValueError("igraphs have no self-pairs")
            for v in range(u + 1, n):
                c = codes[u * n + v]
                if c != codes[v * n + u]:
                    raise ValueError(f"colour matrix not symmetric at {(u, v)}")
                if c > 3:
                    raise ValueError(f"bad colour code {c}")
                if c & 1:
                    red[u] |= 1 << v
                    red[v] |= 1 << u
                if c & 2:
                    blue[u] |= 1 << v
                    blue[v] |= 1 << u
        self.n = n
        self.codes = bytes(codes)
        self.red = tuple(red)
        self.blue = tuple(blue)
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, n: int, colour: PairColor) -> "IGraph":
        codes = bytearray([int(colour)] * (n * n))
        for v in range(n):
            codes[v * n + v] = 0
        return cls(n, bytes(codes))

    @classmethod
    def from_upper(cls, n: int, colours: Iterable[int]) -> "IGraph":
        """Build from colours of pairs (0,1),(0,2),...,(n-2,n-1) (row-major)."""
        codes = bytearray(n * n)
        it = iter(colours)
        for u in range(n):
            for v in range(u + 1, n):
                c = int(next(it))
                codes[u * n + v] = c
                codes[v * n + u] = c
        if next(it, None) is not None:
            raise ValueError("too many pair colours")
        return cls(n, bytes(codes))

    @classmethod
    def from_pairs(cls, n: int, colours: Mapping[tuple[int, int], int], default: int = WHITE) -> "IGraph":
        codes = bytearray(n * n)
        for u in range(n):
            for v in range(u + 1, n):
                c = colours.get((u, v), colours.get((v, u), default))
                codes[u * n + v] = codes[v * n + u] = int(c)
        return cls(n, bytes(codes))

    @classmethod
    def from_colex(cls, n: int, colours: Iterable[int]) -> "IGraph":
        """Build from colours of pairs (0,1),(0,2),(1,2),(0,3),... (column-major)."""
        codes = bytearray(n * n)
        it = iter(colours)
        for v in range(n):
            for u in range(v):
                c = int(next(it))
                codes[u * n + v] = codes[v * n + u] = c
        return cls(n, bytes(codes))

    # access -------------------------------------------------------------

    def color(self, u: int, v: int) -> PairColor:
        if u == v:
            raise ValueError("no self-pairs")
        return PairColor(self.codes[u * self.n + v])

    def pairs(self) -> Iterator[tuple[int, int, PairColor]]:
        n = self.n
        for u in range(n):
            for v in range(u + 1, n):
                yield u, v, PairColor(self.codes[u * n + v])

    def upper(self) -> list[int]:
        n = self.n
        return [self.codes[u * n + v] for u in range(n) for v in range(u + 1, n)]

    def counts(self) -> dict[PairColor, int]:
        out = {c: 0 for c in PairColor}
        for _, _, c in self.pairs():
            out[c] += 1
        return out

    def recolor(self, changes: Mapping[tuple[int, int], int]) -> "IGraph":
        codes = bytearray(self.codes)
        n = self.n
        for (u, v), c in changes.items():
            if u == v:
                raise ValueError("no self-pairs")
            codes[u * n + v] = codes[v * n + u] = int(c)
        return IGraph(n, bytes(codes))

    def induced(self, vertices: Iterable[int]) -> "IGraph":
        vs = list(vertices)
        k = len(vs)
        n = self.n
        codes = bytearray(k * k)
        for a, u in enumerate(vs):
            for b, v in enumerate(vs):
                if a != b:
                    codes[a * k + b] = self.codes[u * n + v]
        return IGraph(k, bytes(codes))

    def without(self, removed: Iterable[int]) -> "IGraph":
        gone = set(removed)
        return self.induced(v for v in range(self.n) if v not in gone)

    def canonical(self) -> bytes:
        return kernels.canonical_code(self.n, self.codes)

    def is_isomorphic(self, other: "IGraph") -> bool:
        return self.n == other.n and self.canonical() == other.canonical()

    def __eq__(self, other) -> bool:
        return isinstance(other, IGraph) and self.n == other.n and self.codes == other.codes

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.codes))
        return self._hash

    def __repr__(self) -> str:
        return f"IGraph(n={self.n}, {''.join(PairColor(c).char for c in self.upper())!r})"


@dataclass(frozen=True)
class DegreeVector:
    d_r: int
    d_b: int
    d_g: int
    d_w: int
    d_p: Fraction


def weight(G: IGraph, p) -> Fraction:
    """p|C_r| + (1-p)|C_b|, exact."""
    p = as_rat(p)
    check_probability(p)
    cnt = G.counts()
    return p * (cnt[RED] + cnt[GREEN]) + (1 - p) * (cnt[BLUE] + cnt[GREEN])


def entropy_weight(G: IGraph, p) -> float:
    """-log2 of the probability that G(n,p) fits G: -|red|log2 p - |blue|log2(1-p)."""
    p = as_rat(p, allow_float=True)
    check_probability(p, open_interval=True)
    cnt = G.counts()
    if cnt[WHITE]:
        raise ValueError("entropy weight is undefined with white pairs")
    return -cnt[RED] * math.log2(p) - cnt[BLUE] * math.log2(1 - p)


def entropy_dual_p(p) -> float:
    """The p' with H_p(G) = -(log2 p + log2(1-p)) (C(n,2) - w_{p'}(G))."""
    p = float(p)
    lp, lq = math.log2(p), math.log2(1 - p)
    return lq / (lp + lq)


def degrees(G: IGraph, x: int, p, S: Iterable[int] | None = None) -> DegreeVector:
    """Colour degrees of x into S (default all vertices), green counted as both."""
    p = as_rat(p)
    n = G.n
    if not 0 <= x < n:
        raise ValueError(f"vertex {x} not in graph")
    mask = ((1 << n) - 1) if S is None else sum(1 << v for v in set(S))
    mask &= ~(1 << x)
    row = G.codes[x * n:(x + 1) * n]
    counts = [0, 0, 0, 0]
    for v in range(n):
        if mask >> v & 1:
            counts[row[v]] += 1
    d_r = counts[RED] + counts[GREEN]
    d_b = counts[BLUE] + counts[GREEN]
    return DegreeVector(d_r, d_b, counts[GREEN], counts[WHITE], p * d_r + (1 - p) * d_b)


def p_degrees(G: IGraph, p) -> list[Fraction]:
    p = as_rat(p)
    return [degrees(G, x, p).d_p for x in range(G.n)]


def min_p_degree(G: IGraph, p) -> Fraction:
    if G.n == 0:
        raise ValueError("minimum p-degree of the empty igraph is undefined")
    return min(p_degrees(G, p))


_SWAP = bytes([0, 2, 1, 3]) + bytes(range(4, 256))


def color_swap(G: IGraph) -> IGraph:
    """Exchange red and blue; green and white are fixed."""
    return IGraph(G.n, G.codes.translate(_SWAP))


# text format ---------------------------------------------------------------

def dumps(G: IGraph, p=None) -> str:
    head = f"n={G.n}"
    if p is not None:
        p = as_rat(p)
        head += f" p={p.numerator}/{p.denominator}"
    return head + "\n" + "".join(PairColor(c).char for c in G.upper()) + "\n"


def loads(text: str) -> tuple[IGraph, Fraction | None]:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty igraph text")
    fields = dict(tok.split("=", 1) for tok in lines[0].split())
    n = int(fields["n"])
    p = Fraction(fields["p"]) if "p" in fields else None
    body = "".join(line.strip() for line in lines[1:])
    if len(body) != n * (n - 1) // 2:
        raise ValueError(f"expected {n * (n - 1) // 2} colour characters, got {len(body)}")
    return IGraph.from_upper(n, (PairColor.from_char(ch) for ch in body)), p


# plain graphs --------------------------------------------------------------

class Graph:
    """Simple graph on 0..n-1 held as adjacency bitmasks."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: Iterable[int]):
        self.n = n
        self.adj = tuple(int(a) for a in adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.adj[u] >> v & 1]

    def edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~a & ~(1 << v) for v, a in enumerate(self.adj)])

    def to_igraph(self) -> IGraph:
        """The two-coloured complete graph c(G): edges red, non-edges blue."""
        n = self.n
        codes = bytearray(n * n)
        for u in range(n):
            for v in range(n):
                if u != v:
                    codes[u * n + v] = RED if self.adj[u] >> v & 1 else BLUE
        return IGraph(n, bytes(codes))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"
