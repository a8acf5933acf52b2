"""Exact modular arithmetic for a fixed odd prime p.

Provides deterministic primality testing, primitive roots, dense
discrete-log tables, modular exponentiation and batched inversion.
Everything here is exact integer arithmetic; PrimeContext is immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, DomainError

# Witness set proving primality for all n < 3.3 * 10^24 (covers 2^64).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_PRIME = 1 << 40
# Dense dlog tables only below this; above, the 4-byte-per-entry table
# no longer fits desk-scale memory and no spectra kernel needs it.
MAX_DLOG_PRIME = 1 << 26

_DLOG_UNSET = np.uint32(0xFFFFFFFF)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 2^64."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n < 2^40 keeps this instant)."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def find_primitive_root(p: int) -> int:
    """Smallest g >= 2 generating the full multiplicative group mod p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ConsistencyError(f"no primitive root found for p={p}")  # unreachable for prime p


def build_dlog_table(p: int, g: int) -> np.ndarray:
    """Dense discrete-log table: table[u] = k with g^k = u (mod p), u in 1..p-1.

    Built in O(p) by iterating powers of g; slot 0 is a sentinel.
    Raises ConsistencyError when g is not primitive (table would not be
    a bijection onto 0..p-2).
    """
    if p > MAX_DLOG_PRIME:
        raise DomainError(f"dense dlog table capped at p <= 2^26, got p={p}")
    n = p - 1
    pows = np.empty(n, dtype=np.uint64)
    pows[0] = 1
    size = 1
    while size < n:
        step = min(size, n - size)
        gp = pow(g, size, p)
        pows[size:size + step] = (pows[:step] * np.uint64(gp)) % np.uint64(p)
        size += step
    table = np.full(p, _DLOG_UNSET, dtype=np.uint32)
    table[pows] = np.arange(n, dtype=np.uint32)
    if bool((table[1:] == _DLOG_UNSET).any()):
        raise ConsistencyError(f"g={g} is not a primitive root mod {p}: dlog table not bijective")
    return table


class PrimeContext:
    """The ambient prime field: p, its smallest primitive root, and lazy tables.

    Immutable after construction; the lazy tables are built once on first
    use (idempotent, so concurrent first access is harmless).
    """

    __slots__ = ("p", "g", "_dlog", "_phases")

    def __init__(self, p: int):
        if not is_prime(p):
            raise DomainError(f"p={p} is not prime")
        if p < 3 or p % 2 == 0:
            raise DomainError(f"p={p} must be an odd prime >= 3")
        if p >= MAX_PRIME:
            raise DomainError(f"p={p} exceeds the supported range (< 2^40)")
        self.p = p
        self.g = find_primitive_root(p)
        self._dlog = None
        self._phases = None

    @property
    def dlog(self) -> np.ndarray:
        """table[u] = k with g^k = u (mod p); built on first use."""
        if self._dlog is None:
            self._dlog = build_dlog_table(self.p, self.g)
        return self._dlog

    @property
    def phases(self) -> np.ndarray:
        """Additive-character table exp(2*pi*i*k/p) for k = 0..p-1."""
        if self._phases is None:
            self._phases = np.exp(2j * np.pi * np.arange(self.p) / self.p)
        return self._phases

    def __repr__(self):
        return f"PrimeContext(p={self.p}, g={self.g})"


def mod_pow(base: int, exp: int, ctx: PrimeContext) -> int:
    """base^exp mod p; negative exp means the inverse of the positive power."""
    p = ctx.p
    if not 0 <= base < p:
        raise DomainError(f"base {base} not reduced mod {p}")
    if exp < 0 and base == 0:
        raise DomainError("zero base with negative exponent has no inverse")
    return pow(base, exp, p)


def batch_inverse(values: Sequence[int] | np.ndarray, ctx: PrimeContext) -> list[int]:
    """Inverses of all values mod p with a single modular exponentiation.

    Prefix-product trick: one pow() on the running product, then a
    backward sweep of multiplications.
    """
    p = ctx.p
    vals = [int(v) for v in values]
    prefix = []
    acc = 1
    for i, v in enumerate(vals):
        if v % p == 0:
            raise DomainError(f"value at index {i} is zero mod {p}: no inverse")
        acc = acc * v % p
        prefix.append(acc)
    if not vals:
        return []
    inv_acc = pow(prefix[-1], p - 2, p)
    out = [0] * len(vals)
    for i in range(len(vals) - 1, 0, -1):
        out[i] = inv_acc * prefix[i - 1] % p
        inv_acc = inv_acc * vals[i] % p
    out[0] = inv_acc
    return out


def recip_power_values(elements: Iterable[int], s: int, ctx: PrimeContext) -> np.ndarray:
    """x^(-s) mod p for each element, as an int64 array.

    The shared kernel behind every m * x^(-s) map: one batched inversion,
    then a small-exponent pow per element.
    """
    p = ctx.p
    elems = [int(x) % p for x in elements]
    if s == 0:
        raise DomainError("exponent s must be nonzero")
    # x^(-s) = (x^(-1))^s for s > 0, and (x)^(-s) = x^|s| for s < 0.
    if s > 0:
        base = batch_inverse(elems, ctx)
        e = s
    else:
        if any(x == 0 for x in elems):
            idx = elems.index(0)
            raise DomainError(f"value at index {idx} is zero mod {p}: no inverse")
        base = elems
        e = -s
    if e == 1:
        return np.asarray(base, dtype=np.int64)
    return np.asarray([pow(b, e, p) for b in base], dtype=np.int64)
