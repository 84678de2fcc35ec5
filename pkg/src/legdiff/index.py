"""Information domains: which coefficient indices (k, j) an approximation reads.

Two parametric shapes are provided.  The hyperbolic cross

    Cross(r, n) = {(k, j) : k*j <= r*n - 1,  r <= k, j <= n - 1}

holds O(n log n) pairs, against O(n^2) for the full square

    Box(r, n) = {(k, j) : r <= k, j <= n}.

Explicit sets cover externally supplied index lists.  Members are always
enumerated in lexicographic (k, j) order so downstream runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

__all__ = ["IndexDomain"]


@dataclass(frozen=True)
class IndexDomain:
    """A finite set of index pairs, all with k >= r and j >= r."""

    shape: str  # "cross" | "box" | "explicit"
    r: int
    n: int | None = None
    pairs: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.shape not in ("cross", "box", "explicit"):
            raise ValueError(f"unknown domain shape {self.shape!r}")
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if self.shape in ("cross", "box"):
            if self.n is None or self.n <= self.r:
                raise ValueError(
                    f"size parameter n must exceed r, got n={self.n}, r={self.r}"
                )
        else:
            if self.pairs is None:
                raise ValueError("explicit domain requires pairs")
            cleaned = sorted(set((int(k), int(j)) for k, j in self.pairs))
            for k, j in cleaned:
                if k < self.r or j < self.r:
                    raise ValueError(
                        f"index pair {(k, j)} violates k, j >= r = {self.r}"
                    )
            object.__setattr__(self, "pairs", tuple(cleaned))

    @classmethod
    def cross(cls, r: int, n: int) -> "IndexDomain":
        """Hyperbolic cross {(k, j): k*j <= r*n - 1, r <= k, j <= n - 1}."""
        return cls(shape="cross", r=r, n=n)

    @classmethod
    def box(cls, r: int, n: int) -> "IndexDomain":
        """Full square {(k, j): r <= k, j <= n}."""
        return cls(shape="box", r=r, n=n)

    @classmethod
    def explicit(cls, pairs, r: int = 0) -> "IndexDomain":
        """Explicit set of index pairs, deduplicated and sorted."""
        return cls(shape="explicit", r=r, pairs=tuple(tuple(p) for p in pairs))

    @classmethod
    def from_csv(cls, path: str | Path, r: int = 0) -> "IndexDomain":
        """Explicit domain from newline-delimited "k,j" lines."""
        pairs = []
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                try:
                    pairs.append((int(parts[0]), int(parts[1])))
                except (ValueError, IndexError) as exc:
                    raise ValueError(f"parse error at line {lineno}: {line!r}") from exc
        return cls.explicit(pairs, r=r)

    def members(self) -> list[tuple[int, int]]:
        """All index pairs in lexicographic (k, j) order."""
        if self.shape == "cross":
            budget = self.r * self.n - 1
            out = []
            for k in range(self.r, self.n):
                if k > 0:
                    j_top = min(self.n - 1, budget // k)
                else:
                    j_top = self.n - 1 if budget >= 0 else self.r - 1
                out.extend((k, j) for j in range(self.r, j_top + 1))
            return out
        if self.shape == "box":
            rng = range(self.r, self.n + 1)
            return [(k, j) for k in rng for j in rng]
        return list(self.pairs)

    def cardinality(self) -> int:
        """Number of pairs, computed without materializing when possible."""
        if self.shape == "cross":
            budget = self.r * self.n - 1
            total = 0
            for k in range(self.r, self.n):
                if k > 0:
                    j_top = min(self.n - 1, budget // k)
                else:
                    j_top = self.n - 1 if budget >= 0 else self.r - 1
                total += max(0, j_top - self.r + 1)
            return total
        if self.shape == "box":
            side = self.n - self.r + 1
            return side * side
        return len(self.pairs)

    def max_degree(self) -> tuple[int, int]:
        """Largest (k, j) degrees the domain can contain, per axis."""
        if self.shape == "cross":
            return self.n - 1, self.n - 1
        if self.shape == "box":
            return self.n, self.n
        if not self.pairs:
            return 0, 0
        return max(k for k, _ in self.pairs), max(j for _, j in self.pairs)
