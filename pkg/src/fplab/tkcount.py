"""k-fold congruence counts T_k(lam) and their deviation from the main term.

T_k(lam) counts tuples (m_1, x_1, ..., m_k, x_k) with
sum_i m_i * x_i^(-s) = lam mod p; it is the k-fold cyclic convolution of
the per-factor count vectors. Deviations are measured against the exact
rational main term (prod of masses)/p, so no double rounding occurs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import convolve
from .countvec import CountVector
from .energy import count_vector_product
from .envelopes import tk_hypotheses, tk_main_term
from .errors import DomainError
from .modfield import PrimeContext
from .sets import ResidueSet, shifted_interval


@dataclass(frozen=True, eq=False)
class TkReport:
    """Everything one k-fold experiment produced."""

    k: int
    p: int
    H: int
    s: int
    set_sizes: tuple[int, ...]
    shifts: tuple[int, ...]
    epsilon: float
    main_term: Fraction
    counts: CountVector
    max_abs_dev: float
    mean_abs_dev: float
    dev_at: dict[int, float]
    hyp_flags: tuple[bool, bool, bool]
    hyp_margins: tuple[float, float, float]

    @property
    def total(self) -> int:
        return self.counts.total


def _dev_stats(counts: CountVector, mass: int, p: int,
               sample_lambdas) -> tuple[float, float, dict[int, float]]:
    """max/mean of |T(lam)*p/mass - 1| from exact integer numerators."""
    if isinstance(counts.counts, np.ndarray) and mass * p < 1 << 62:
        nums = counts.counts * p - mass
        abs_nums = np.abs(nums)
        max_num = int(abs_nums.max())
        sum_num = int(abs_nums.sum())
    else:
        vals = counts.counts if isinstance(counts.counts, list) else counts.as_list()
        max_num = 0
        sum_num = 0
        for t in vals:
            d = abs(t * p - mass)
            sum_num += d
            if d > max_num:
                max_num = d
        max_num = int(max_num)
    max_dev = float(Fraction(max_num, mass))
    mean_dev = float(Fraction(sum_num, mass * p))
    dev_at = {int(lam): float(Fraction(counts[lam] * p - mass, mass))
              for lam in sample_lambdas}
    return max_dev, mean_dev, dev_at


def tk_experiment(k: int, factors: list[tuple[ResidueSet, int]], H: int, s: int,
                  ctx: PrimeContext, epsilon: float = 0.05,
                  budget: int | None = None, sample_lambdas=(),
                  allow_unequal: bool = False) -> TkReport:
    """T_k over the given (set, shift) factors, all sharing interval length H."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if len(factors) != k:
        raise DomainError(f"expected {k} factors, got {len(factors)}")
    sizes = [mset.M for mset, _ in factors]
    if not allow_unequal and len(set(sizes)) > 1:
        raise DomainError(
            f"factor sets have unequal sizes {sizes}; pass allow_unequal to override")
    vectors = []
    for mset, shift in factors:
        x = shifted_interval(shift, H, ctx, require_denominator_safe=True)
        vectors.append(count_vector_product(x, mset, s, ctx, budget))
    counts = convolve.k_fold_count(vectors, budget=budget)
    mass = 1
    for v in vectors:
        mass *= v.total
    max_dev, mean_dev, dev_at = _dev_stats(counts, mass, ctx.p, sample_lambdas)
    flags, margins = tk_hypotheses(H, min(sizes), ctx.p, epsilon)
    return TkReport(
        k=k, p=ctx.p, H=H, s=s, set_sizes=tuple(sizes),
        shifts=tuple(shift for _, shift in factors), epsilon=epsilon,
        main_term=tk_main_term([v.total for v in vectors], ctx.p),
        counts=counts, max_abs_dev=max_dev, mean_abs_dev=mean_dev,
        dev_at=dev_at, hyp_flags=flags, hyp_margins=margins)


def tk_spectral_check(k: int, factors: list[tuple[ResidueSet, int]], H: int, s: int,
                      ctx: PrimeContext, sample_lambdas,
                      budget: int | None = None) -> list[float]:
    """|spectral - exact| at each sampled lam.

    The spectral route re-derives T_k(lam) as
    (1/p) * sum_a prod_i F_i(a) * e_p(-a*lam), with F_i the transform of
    factor i's count vector; the exact route is the convolution.
    """
    p = ctx.p
    vectors = []
    for mset, shift in factors:
        x = shifted_interval(shift, H, ctx, require_denominator_safe=True)
        vectors.append(count_vector_product(x, mset, s, ctx, budget))
    if len(vectors) != k or k < 2:
        raise DomainError("factor list does not match k")
    exact = convolve.k_fold_count(vectors, budget=budget)
    product = np.ones(p, dtype=np.complex128)
    for v in vectors:
        product *= convolve.length_p_transform(v.counts)
    a = np.arange(p, dtype=np.int64)
    residuals = []
    for lam in sample_lambdas:
        phase = np.conj(ctx.phases[(a * int(lam)) % p])
        spectral = float(np.dot(product, phase).real) / p
        residuals.append(abs(spectral - exact[lam]))
    return residuals
