"""Exact cyclic convolution over the index group Z_p, and prime-length DFTs.

Three convolution strategies, selected by a proven bound on the output
coefficients so that every returned count is an exact integer:

  direct  O(p^2) schoolbook in Python integers; always exact; tiny p only.
  float   power-of-two real FFTs of the zero-padded factors, one inverse,
          fold mod p, round. The worst-case rounding error for a
          coefficient bound B and transform length N is ~ B * eps * c*log2(N)
          with eps = 2^-53, so rounding is certified for B < 2^40 at any
          desk-scale length (error << 0.5).
  ntt     number-theoretic transforms modulo several ~31-bit primes with
          power-of-two-friendly multiplicative groups, recombined by the
          Chinese remainder theorem. No rounding at all; used whenever the
          bound exceeds the float route's certified capacity.

The prime-length Fourier transform (for complete exponential-sum tables)
uses the chirp factorization c*l = (c^2 + l^2 - (c-l)^2)/2 to reduce a
length-p transform to one power-of-two circular convolution of length
>= 2p-1, or a direct O(p^2) table-lookup product below a small threshold.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Sequence

import numpy as np

from .countvec import CountVector
from .errors import BudgetError, ConsistencyError, check_budget
from .modfield import find_primitive_root

log = logging.getLogger(__name__)

DIRECT_THRESHOLD = 64          # p at or below: schoolbook convolution
DIRECT_DFT_THRESHOLD = 128     # transform length at or below: O(n^2) table product
FLOAT_EXACT_BOUND = 1 << 40    # float route certified below this coefficient bound

# 31-bit primes q with large power-of-two factors of q-1; products of any
# four exceed 2^120, which covers every desk-scale coefficient bound.
_NTT_POOL = (2013265921, 1811939329, 469762049, 2113929217, 167772161, 754974721)


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


@dataclass(frozen=True)
class ConvolutionPlan:
    """How a convolution will run: strategy, certified bound, moduli."""

    p: int
    strategy: str                  # "direct" | "float" | "ntt"
    bound: int                     # proven upper bound on any output coefficient
    lin_length: int                # linear-convolution length k*(p-1)+1
    fft_length: int                # power-of-two length used by float/ntt
    moduli: tuple[int, ...] = ()   # ntt primes (empty otherwise)


@lru_cache(maxsize=None)
def _ntt_prime_info(q: int) -> tuple[int, int]:
    """(two-adicity of q-1, primitive root of q)."""
    m = q - 1
    adicity = (m & -m).bit_length() - 1
    return adicity, find_primitive_root(q)


def plan_convolution(p: int, masses: Sequence[int], budget: int | None = None) -> ConvolutionPlan:
    """Select a strategy for a k-fold length-p convolution with the given factor masses.

    The coefficient bound is the product of all masses (safe: every output
    entry is at most the total number of tuples); it drives strategy
    selection only. The work budget meters transform operations, roughly
    k * N * log2(N) per modulus.
    """
    k = len(masses)
    if k < 1:
        raise BudgetError("no factors to convolve", required=0)
    bound = 1
    for m in masses:
        bound *= int(m)
    lin_length = k * (p - 1) + 1
    n = _next_pow2(lin_length)
    if p <= DIRECT_THRESHOLD:
        plan = ConvolutionPlan(p, "direct", bound, lin_length, 0)
        check_budget((k - 1) * p * p, budget, "schoolbook convolution")
        return plan
    if bound < FLOAT_EXACT_BOUND:
        check_budget((k + 1) * n * n.bit_length(), budget, "float transform convolution")
        return ConvolutionPlan(p, "float", bound, lin_length, n)
    moduli = _select_ntt_moduli(bound, n)
    check_budget((k + 1) * n * n.bit_length() * len(moduli), budget,
                 "multi-modulus exact convolution")
    log.info("convolution bound %d >= 2^40: escalating to exact ntt route "
             "(%d moduli, length %d)", bound, len(moduli), n)
    return ConvolutionPlan(p, "ntt", bound, lin_length, n, moduli)


def _select_ntt_moduli(bound: int, n: int) -> tuple[int, ...]:
    usable = [q for q in _NTT_POOL if (1 << _ntt_prime_info(q)[0]) >= n]
    chosen = []
    capacity = 1
    for q in usable:
        chosen.append(q)
        capacity *= q
        if capacity > bound:
            return tuple(chosen)
    raise BudgetError(
        f"coefficient bound {bound} exceeds exact-route capacity {capacity} "
        f"at transform length {n}", required=bound)


def _check_plan(plan: ConvolutionPlan, p: int, masses: Sequence[int]) -> None:
    if plan.p != p:
        raise BudgetError(f"plan is for length {plan.p}, vectors have length {p}",
                          required=0)
    bound = 1
    for m in masses:
        bound *= int(m)
    if bound > plan.bound:
        required = "ntt" if plan.strategy != "ntt" else "larger modulus pool"
        raise BudgetError(
            f"coefficient bound {bound} exceeds plan bound {plan.bound}; "
            f"required strategy: {required}", required=bound)
    if plan.strategy != "direct" and len(masses) * (p - 1) + 1 > max(plan.lin_length, 1):
        raise BudgetError("plan sized for fewer factors than supplied",
                          required=len(masses) * (p - 1) + 1)


# ---------------------------------------------------------------------------
# number-theoretic transform over a 31-bit prime, power-of-two length


@lru_cache(maxsize=16)
def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.uint32)
    rev = np.zeros(n, dtype=np.uint32)
    for b in range(bits):
        rev = (rev << 1) | ((idx >> b) & 1)
    return rev


@lru_cache(maxsize=16)
def _ntt_tables(q: int, n: int) -> tuple[np.ndarray, np.ndarray, int]:
    """(forward root powers, inverse root powers, n^-1 mod q) for length n."""
    adicity, g = _ntt_prime_info(q)
    if (1 << adicity) < n:
        raise ConsistencyError(f"modulus {q} cannot host a length-{n} transform")
    w = pow(g, (q - 1) // n, q)
    pows = np.empty(n, dtype=np.uint64)
    pows[0] = 1
    size = 1
    while size < n:
        step = min(size, n - size)
        wp = pow(w, size, q)
        pows[size:size + step] = (pows[:step] * np.uint64(wp)) % np.uint64(q)
        size += step
    inv_pows = np.roll(pows[::-1], 1).copy()   # inv_pows[k] = w^(-k)
    return pows, inv_pows, pow(n, q - 2, q)


def _ntt(vec: np.ndarray, q: int, pows: np.ndarray) -> np.ndarray:
    """Iterative radix-2 transform; vec is uint64 with entries < q."""
    n = vec.size
    a = vec[_bit_reverse_indices(n)].astype(np.uint64)
    qq = np.uint64(q)
    length = 2
    while length <= n:
        half = length >> 1
        step = n // length
        tw = pows[0:step * half:step]
        b = a.reshape(-1, length)
        u = b[:, :half]
        v = (b[:, half:] * tw) % qq
        b[:, half:] = (u + (qq - v)) % qq
        b[:, :half] = (u + v) % qq
        length <<= 1
    return a


def _ntt_forward(vec: np.ndarray, q: int, n: int) -> np.ndarray:
    pows, _, _ = _ntt_tables(q, n)
    return _ntt(vec, q, pows)


def _ntt_inverse(vec: np.ndarray, q: int, n: int) -> np.ndarray:
    _, inv_pows, n_inv = _ntt_tables(q, n)
    out = _ntt(vec, q, inv_pows)
    return (out * np.uint64(n_inv)) % np.uint64(q)


def _crt_combine(residues: list[np.ndarray], moduli: tuple[int, ...]) -> list[int]:
    """Exact reconstruction of each entry from its residues (result < prod(moduli))."""
    big_q = prod(moduli)
    coeffs = []
    for q in moduli:
        m = big_q // q
        coeffs.append(m * pow(m % q, q - 2, q))
    cols = [r.tolist() for r in residues]
    return [sum(c * r for c, r in zip(coeffs, row)) % big_q for row in zip(*cols)]


# ---------------------------------------------------------------------------
# the three convolution routes


def _fold(linear: np.ndarray, p: int) -> np.ndarray:
    """Wrap a linear-convolution result onto Z_p indices."""
    n = linear.size
    pad = (-n) % p
    if pad:
        linear = np.concatenate([linear, np.zeros(pad, dtype=linear.dtype)])
    return linear.reshape(-1, p).sum(axis=0)


def _direct_kfold(vectors: list[list[int]], p: int) -> list[int]:
    out = vectors[0]
    for vec in vectors[1:]:
        nxt = [0] * p
        for i, ui in enumerate(out):
            if ui:
                for j, vj in enumerate(vec):
                    if vj:
                        nxt[(i + j) % p] += ui * vj
        out = nxt
    return out


def _float_kfold(vectors: list[np.ndarray], p: int, plan: ConvolutionPlan) -> np.ndarray:
    n = plan.fft_length
    spectrum = None
    for vec in vectors:
        f = np.fft.rfft(vec.astype(np.float64), n)
        spectrum = f if spectrum is None else spectrum * f
    linear = np.fft.irfft(spectrum, n)[:plan.lin_length]
    folded = _fold(linear, p)
    return np.rint(folded).astype(np.int64)


def _ntt_kfold(vectors: list[np.ndarray], p: int, plan: ConvolutionPlan) -> list[int]:
    n = plan.fft_length
    residues = []
    for q in plan.moduli:
        qq = np.uint64(q)
        spectrum = None
        for vec in vectors:
            padded = np.zeros(n, dtype=np.uint64)
            padded[:p] = (vec.astype(np.uint64)) % qq
            f = _ntt_forward(padded, q, n)
            spectrum = f if spectrum is None else (spectrum * f) % qq
        linear = _ntt_inverse(spectrum, q, n)[:plan.lin_length]
        residues.append(_fold(linear, p) % qq)
    return _crt_combine(residues, plan.moduli)


def k_fold_count(vectors: Sequence[CountVector], plan: ConvolutionPlan | None = None,
                 budget: int | None = None) -> CountVector:
    """The k-fold cyclic convolution of count vectors, exactly.

    Pointwise products in the transform domain, one inverse transform,
    fold onto Z_p; strategy per plan (auto-planned when omitted).
    Total mass is verified against the product of input masses on every
    call.
    """
    if len(vectors) < 2:
        raise BudgetError("k-fold convolution needs at least two factors", required=2)
    p = vectors[0].p
    if any(v.p != p for v in vectors):
        raise ConsistencyError("count vectors have mismatched lengths")
    masses = [v.total for v in vectors]
    if plan is None:
        plan = plan_convolution(p, masses, budget)
    else:
        _check_plan(plan, p, masses)
    expected = prod(masses)

    if plan.strategy == "direct":
        out = _direct_kfold([v.as_list() for v in vectors], p)
        return CountVector(out, expected_total=expected)
    arrays = []
    for v in vectors:
        if not isinstance(v.counts, np.ndarray):
            raise ConsistencyError("input count vectors must be 64-bit backed")
        arrays.append(v.counts)
    if plan.strategy == "float":
        return CountVector(_float_kfold(arrays, p, plan), expected_total=expected)
    out = _ntt_kfold(arrays, p, plan)
    if plan.bound < 1 << 62:
        return CountVector(np.asarray(out, dtype=np.int64), expected_total=expected)
    return CountVector(out, expected_total=expected)


def cyclic_convolve(u: CountVector, v: CountVector,
                    plan: ConvolutionPlan | None = None,
                    budget: int | None = None) -> CountVector:
    """w[lam] = sum_mu u[mu] * v[(lam - mu) mod p], exact integers."""
    return k_fold_count([u, v], plan, budget)


# ---------------------------------------------------------------------------
# prime-length discrete Fourier transform (positive-sign convention)


@lru_cache(maxsize=4)
def _chirp_tables(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    """(chirp, transformed filter, fft length) for a length-n transform."""
    t = np.arange(n, dtype=np.int64)
    # reduce t^2 mod 2n before forming the angle: keeps sin/cos arguments small
    sq = (t * t) % (2 * n)
    chirp = np.exp(1j * np.pi * sq / n)
    m = _next_pow2(2 * n - 1)
    filt = np.zeros(m, dtype=np.complex128)
    filt[:n] = np.conj(chirp)
    filt[m - n + 1:] = np.conj(chirp[1:][::-1])
    return chirp, np.fft.fft(filt), m


def length_p_transform(u: np.ndarray) -> np.ndarray:
    """hat_u[c] = sum_lam u[lam] * exp(2*pi*i*c*lam/n) for n = len(u).

    Chirp reduction to a power-of-two circular convolution; direct
    table-lookup product below DIRECT_DFT_THRESHOLD.
    """
    u = np.asarray(u, dtype=np.complex128)
    n = u.size
    if n == 1:
        return u.copy()
    if n <= DIRECT_DFT_THRESHOLD:
        idx = np.arange(n, dtype=np.int64)
        table = np.exp(2j * np.pi * np.arange(n) / n)
        return table[np.outer(idx, idx) % n] @ u
    chirp, filt_hat, m = _chirp_tables(n)
    a = np.zeros(m, dtype=np.complex128)
    a[:n] = u * chirp
    conv = np.fft.ifft(np.fft.fft(a) * filt_hat)[:n]
    return chirp * conv
