"""Sparse Laurent polynomials over Z in a bounded box of exponents.

Monomials are integer points of a box ``lo <= x <= hi``; each point is packed
into one int64 key so products reduce to array shifts plus a sort.  The
first coordinate is the most significant digit, which makes truncation in
that coordinate (used for the ``q`` degree) a single comparison.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError

_LIMIT = 2**62


class BoxPoly:
    def __init__(self, lo: Sequence[int], hi: Sequence[int], cap0: int | None = None):
        self.lo = np.array(lo, dtype=np.int64)
        self.hi = np.array(hi, dtype=np.int64)
        if np.any(self.hi < self.lo):
            raise ValueError("empty exponent box")
        widths = [int(h - l + 1) for l, h in zip(self.lo, self.hi)]
        total = 1
        for w in widths:
            total *= w
        if total >= _LIMIT:
            raise CapacityError("exponent box too large for int64 keys", required=total)
        strides = []
        acc = 1
        for w in reversed(widths):
            strides.append(acc)
            acc *= w
        self.strides = np.array(list(reversed(strides)), dtype=np.int64)
        self.cap0 = cap0
        self.keys = np.zeros(0, dtype=np.int64)
        self.coeffs = np.zeros(0, dtype=np.int64)

    # -- encoding ---------------------------------------------------------------
    def encode(self, x: Sequence[int]) -> int:
        x = np.asarray(x, dtype=np.int64)
        if np.any(x < self.lo) or np.any(x > self.hi):
            raise ValueError(f"exponent {tuple(x.tolist())} outside the box")
        return int(np.dot(x - self.lo, self.strides))

    def offset(self, v: Sequence[int]) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64), self.strides))

    def decode(self, keys: np.ndarray) -> np.ndarray:
        out = np.empty((len(keys), len(self.lo)), dtype=np.int64)
        rem = keys.copy()
        for i, s in enumerate(self.strides):
            out[:, i] = rem // s
            rem = rem % s
        return out + self.lo

    # -- construction -------------------------------------------------------------
    def set_terms(self, terms: Iterable[tuple[Sequence[int], int]]) -> "BoxPoly":
        ks, cs = [], []
        for x, c in terms:
            ks.append(self.encode(x))
            cs.append(int(c))
        self.keys = np.array(ks, dtype=np.int64)
        self.coeffs = np.array(cs, dtype=np.int64)
        self._canonical()
        return self

    def _canonical(self) -> None:
        if len(self.keys) == 0:
            return
        if self.cap0 is not None:
            limit = (self.cap0 - int(self.lo[0]) + 1) * int(self.strides[0])
            keep = self.keys < limit
            self.keys, self.coeffs = self.keys[keep], self.coeffs[keep]
            if len(self.keys) == 0:
                return
        order = np.argsort(self.keys, kind="stable")
        k = self.keys[order]
        c = self.coeffs[order]
        starts = np.flatnonzero(np.concatenate(([True], k[1:] != k[:-1])))
        c = np.add.reduceat(c, starts)
        k = k[starts]
        nz = c != 0
        self.keys, self.coeffs = k[nz], c[nz]

    def multiply(self, factor: Sequence[tuple[Sequence[int], int]]) -> "BoxPoly":
        """In-place product with a small polynomial given as ``[(shift, coeff), ...]``."""
        if len(self.keys) == 0:
            return self
        bound = sum(abs(int(c)) for _, c in factor)
        big = int(np.max(np.abs(self.coeffs))) if self.coeffs.dtype != object else 0
        if self.coeffs.dtype != object and big * bound >= _LIMIT:
            self.coeffs = self.coeffs.astype(object)
        parts_k, parts_c = [], []
        for v, c in factor:
            parts_k.append(self.keys + self.offset(v))
            parts_c.append(self.coeffs * int(c))
        self.keys = np.concatenate(parts_k)
        self.coeffs = np.concatenate(parts_c)
        self._canonical()
        return self

    def __len__(self) -> int:
        return len(self.keys)

    def to_dict(self) -> dict[tuple[int, ...], int]:
        pts = self.decode(self.keys)
        return {tuple(int(v) for v in p): int(c) for p, c in zip(pts, self.coeffs)}
