"""Product and ratio sets: exact cardinalities plus hypothesis evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelopes import product_set_branch
from .errors import DomainError, check_budget
from .modfield import PrimeContext, batch_inverse
from .sets import Interval, ResidueSet

_CHUNK = 1 << 22
_MISSING_LIST_CAP = 1 << 16


@dataclass(frozen=True)
class ProductSetReport:
    """Cardinality of a product/ratio set and which sufficient condition held."""

    p: int
    H: int
    M: int
    size: int
    missing: int
    hypothesis_branch: str    # "A" | "B" | "none"
    epsilon: float
    missing_residues: tuple[int, ...] | None = None

    def __post_init__(self):
        if not 0 <= self.size <= self.p or self.missing != self.p - self.size:
            raise DomainError("inconsistent product-set report")


def _occupancy(factors: np.ndarray, mset: ResidueSet, p: int) -> np.ndarray:
    """Mark every product f*m mod p in a dense boolean table."""
    occ = np.zeros(p, dtype=bool)
    a, b = factors, mset.elems
    if a.size > b.size:
        a, b = b, a
    rows = max(1, _CHUNK // b.size)
    for i in range(0, a.size, rows):
        block = (a[i:i + rows, None] * b[None, :]) % p
        occ[block.ravel()] = True
    return occ


def _report(occ: np.ndarray, interval: Interval, mset: ResidueSet,
            epsilon: float, list_missing: bool) -> ProductSetReport:
    p = interval.p
    size = int(occ.sum())
    missing = None
    if list_missing:
        if p > _MISSING_LIST_CAP:
            raise DomainError(f"missing-residue listing capped at p <= {_MISSING_LIST_CAP}")
        missing = tuple(int(v) for v in np.nonzero(~occ)[0])
    return ProductSetReport(
        p=p, H=interval.H, M=mset.M, size=size, missing=p - size,
        hypothesis_branch=product_set_branch(interval.H, mset.M, p, epsilon),
        epsilon=epsilon, missing_residues=missing)


def product_set(interval: Interval, mset: ResidueSet, ctx: PrimeContext,
                epsilon: float = 0.05, budget: int | None = None,
                list_missing: bool = False) -> ProductSetReport:
    """Exact size of {h*m mod p} via a dense occupancy table; O(H*M) work."""
    if interval.p != ctx.p or mset.p != ctx.p:
        raise DomainError("interval/set modulus does not match context")
    check_budget(interval.H * mset.M, budget, "product-set occupancy")
    occ = _occupancy(interval.elements(), mset, ctx.p)
    return _report(occ, interval, mset, epsilon, list_missing)


def ratio_set(interval: Interval, mset: ResidueSet, ctx: PrimeContext,
              epsilon: float = 0.05, budget: int | None = None,
              list_missing: bool = False) -> ProductSetReport:
    """Exact size of {m/h mod p}: the product set of the inverted interval."""
    if interval.p != ctx.p or mset.p != ctx.p:
        raise DomainError("interval/set modulus does not match context")
    if interval.contains_zero:
        raise DomainError("ratio set needs a denominator-safe interval (0 not in H)")
    check_budget(interval.H * mset.M, budget, "ratio-set occupancy")
    inv = np.asarray(batch_inverse(interval.elements(), ctx), dtype=np.int64)
    occ = _occupancy(inv, mset, ctx.p)
    return _report(occ, interval, mset, epsilon, list_missing)
