"""Pair-coincidence counts: multiplicative energies and reciprocal-power
additive energies.

Every quantity here is an exact integer, computed as a sum of squared
entries of a count vector (O(H*M + p)) instead of enumerating pairs of
pairs (O((H*M)^2)).
"""

from __future__ import annotations

import numpy as np

from . import convolve
from .countvec import CountVector
from .errors import DomainError, check_budget
from .modfield import PrimeContext, recip_power_values
from .sets import Interval, ResidueSet, shifted_interval

_CHUNK = 1 << 22  # elements per temporary block in pairwise kernels


def _pairwise_product_counts(a: np.ndarray, b: np.ndarray, p: int,
                             out: np.ndarray | None = None) -> np.ndarray:
    """counts[lam] += #{(i,j): a[i]*b[j] = lam mod p}, blockwise."""
    if out is None:
        out = np.zeros(p, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return out
    if p >= 1 << 26:
        # p^2 would overflow int64 products; pure-Python fallback
        counts: dict[int, int] = {}
        for x in a.tolist():
            for y in b.tolist():
                lam = x * y % p
                counts[lam] = counts.get(lam, 0) + 1
        for lam, c in counts.items():
            out[lam] += c
        return out
    if a.size > b.size:
        a, b = b, a
    rows = max(1, _CHUNK // b.size)
    for i in range(0, a.size, rows):
        block = (a[i:i + rows, None] * b[None, :]) % p
        out += np.bincount(block.ravel(), minlength=p)
    return out


def count_vector_product(interval: Interval, mset: ResidueSet, s: int,
                         ctx: PrimeContext, budget: int | None = None) -> CountVector:
    """counts[lam] = #{(m, x) in M x X : m * x^(-s) = lam mod p}."""
    if interval.contains_zero:
        raise DomainError("interval covers 0 mod p: x^(-s) undefined")
    if mset.p != ctx.p or interval.p != ctx.p:
        raise DomainError("interval/set modulus does not match context")
    pairs = interval.H * mset.M
    check_budget(pairs, budget, "product count vector")
    vals = recip_power_values(interval.elements(), s, ctx)
    counts = _pairwise_product_counts(mset.elems, vals, ctx.p)
    return CountVector(counts, expected_total=pairs)


def energy_J(interval: Interval, mset: ResidueSet, ctx: PrimeContext,
             budget: int | None = None) -> int:
    """Coincidences h1*m1 = h2*m2 mod p over an initial interval and a set."""
    if interval.L != 0:
        raise DomainError("initial-interval energy requires L = 0 (use energy_Js for shifts)")
    c = count_vector_product(interval, mset, -1, ctx, budget)
    return c.sum_of_squares()


def energy_Js(L: int, interval: Interval, mset: ResidueSet, s: int,
              ctx: PrimeContext, budget: int | None = None) -> int:
    """Coincidences m1*x1^(-s) = m2*x2^(-s) over the shifted interval L + {1..H}."""
    if interval.L != 0:
        raise DomainError("pass the base interval {1..H}; the shift goes in L")
    x = shifted_interval(L, interval.H, ctx, require_denominator_safe=True)
    c = count_vector_product(x, mset, s, ctx, budget)
    return c.sum_of_squares()


def triple_count_vector(j_len: int, k_len: int, mset: ResidueSet,
                        ctx: PrimeContext, budget: int | None = None) -> CountVector:
    """counts[lam] = #{(j,k,m): j*k*m = lam mod p} over initial intervals and a set."""
    p = ctx.p
    work = j_len * k_len * mset.M
    check_budget(work, budget, "triple product count")
    if not (1 <= j_len <= p - 1 and 1 <= k_len <= p - 1):
        raise DomainError("interval lengths must lie in 1..p-1")
    j_arr = np.arange(1, j_len + 1, dtype=np.int64)
    k_arr = np.arange(1, k_len + 1, dtype=np.int64)
    jk = _pairwise_product_counts(j_arr, k_arr, p)
    nz = np.nonzero(jk)[0]
    reps = jk[nz].astype(np.float64)
    # weighted bincount over m-blocks; the weights are integers < 2^53, so
    # float64 accumulation is exact, and the mass check below re-verifies
    acc = np.zeros(p, dtype=np.float64)
    rows = max(1, _CHUNK // max(1, nz.size))
    elems = mset.elems
    for i in range(0, elems.size, rows):
        idx = (elems[i:i + rows, None] * nz[None, :]) % p
        w = np.broadcast_to(reps, idx.shape)
        acc += np.bincount(idx.ravel(), weights=w.ravel(), minlength=p)
    counts = np.rint(acc).astype(np.int64)
    return CountVector(counts, expected_total=work)


def triple_R(j_len: int, k_len: int, mset: ResidueSet, ctx: PrimeContext,
             budget: int | None = None) -> int:
    """Coincidences j1*k1*m1 = j2*k2*m2 mod p (two initial intervals, one set)."""
    return triple_count_vector(j_len, k_len, mset, ctx, budget).sum_of_squares()


def recip_power_counts(interval: Interval, s: int, ctx: PrimeContext) -> CountVector:
    """u[lam] = #{x in X : x^(-s) = lam mod p} (fiber sizes of the power map)."""
    if interval.contains_zero:
        raise DomainError("interval covers 0 mod p: x^(-s) undefined")
    vals = recip_power_values(interval.elements(), s, ctx)
    counts = np.bincount(vals, minlength=ctx.p).astype(np.int64)
    return CountVector(counts, expected_total=interval.H)


def additive_energy_recip(interval_x: Interval, s: int, ell: int,
                          ctx: PrimeContext, budget: int | None = None) -> int:
    """Solutions of x1^(-s)+...+xl^(-s) = x(l+1)^(-s)+...+x(2l)^(-s) over X^(2l)."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    u = recip_power_counts(interval_x, s, ctx)
    if ell == 1:
        return u.sum_of_squares()
    w = convolve.k_fold_count([u] * ell, budget=budget)
    return w.sum_of_squares()
