"""Betti numbers of fold-product ideals.

All ideals here have linear graded free resolutions, so the full homological
story is the vector (b_1, ..., b_k).  This module implements the closed
forms (maximal power, Cohen-Macaulay generic, a = n-1, a = n-2 arrangement,
rank-2, Tutte-based first Betti number with Herzog-Kuhl closure), the
deletion-contraction recursion that reduces everything to rank 2, a k = 3
block-elimination variant, and the method dispatcher.

Tables are reported with respect to the effective rank: inert variables
change nothing, so collections are essentialized before computing.  The
recursion memo is keyed by (canonical collection, fold); concurrent callers
may duplicate work but always read complete immutable tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .forms import (
    FormCollection,
    contract,
    delete,
    drop_group,
    essentialize,
    normalize,
    reduction_data,
)
from .matroid import (
    hamming_weights,
    height_of_fold_ideal,
    rank2_flats,
    subset_rank,
    tutte_polynomial,
    tutte_shifted_coeffs,
)

METHODS = ("auto", "recursion", "tutte_hk", "oracle")

_recursion_cache = {}
_generic_cache = {}


@dataclass(frozen=True)
class BettiTable:
    """Fold a plus the vector (b_1, ..., b_k); the zero ideal is all zeros."""

    a: int
    k: int
    b: tuple

    def __post_init__(self):
        if len(self.b) != self.k:
            raise ValueError("expected %d Betti numbers, got %d" % (self.k, len(self.b)))
        seen_zero = False
        for v in self.b:
            if v < 0:
                raise ValueError("negative Betti number in %r" % (self.b,))
            if seen_zero and v != 0:
                raise ValueError("zero followed by nonzero in %r" % (self.b,))
            seen_zero = seen_zero or v == 0

    @property
    def pdim(self) -> int:
        """Index of the last nonzero entry (0 for the zero ideal)."""
        last = 0
        for i, v in enumerate(self.b, start=1):
            if v != 0:
                last = i
        return last

    def to_json_dict(self):
        return {"a": self.a, "k": self.k, "b": list(self.b)}


def _comb0(n, r):
    if n < 0 or r < 0:
        return 0
    return comb(n, r)


def _entry(table, i):
    if table is None or i < 1 or i > table.k:
        return 0
    return table.b[i - 1]


def _zero_table(a, k):
    return BettiTable(a, k, (0,) * k)


def _unit_table(a, k):
    return BettiTable(a, k, (1,) + (0,) * (k - 1))


def b1_tutte(sigma: FormCollection, a: int) -> int:
    """First Betti number as a coefficient sum of T(x+1, y)."""
    if not 1 <= a <= sigma.n:
        raise ValueError("fold %d out of range 1..%d" % (a, sigma.n))
    ess = essentialize(sigma)
    k, n = ess.k, ess.n
    shifted = tutte_shifted_coeffs(tutte_polynomial(ess))
    return sum(shifted.get((k - u, n - a - u), 0) for u in range(min(k, n - a) + 1))


def betti_maximal_power(k: int, a: int) -> BettiTable:
    """Betti numbers of the a-th power of the maximal ideal in k variables."""
    if k < 1 or a < 1:
        raise ValueError("need k >= 1 and a >= 1")
    b = tuple(comb(k + a - 1, a + i - 1) * comb(a + i - 2, a - 1) for i in range(1, k + 1))
    return BettiTable(a, k, b)


def betti_from_b1_height_km1(k: int, a: int, b1: int) -> BettiTable:
    """Fill b_2..b_k from b_1 in the height-(k-1) window (Herzog-Kuhl solve)."""
    b = [b1]
    for i in range(2, k + 1):
        b.append(sum(comb(j, i - 2) * (b1 - comb(a + j, j)) for j in range(k - 1)))
    return BettiTable(a, k, tuple(b))


def betti_rank2(sigma: FormCollection, a: int) -> BettiTable:
    """The rank <= 2 closed form: (e+1, e); principal collections give (1,)."""
    ess = essentialize(sigma)
    if ess.k > 2:
        raise ValueError("effective rank %d exceeds 2" % ess.k)
    if not 1 <= a <= ess.n:
        raise ValueError("fold %d out of range 1..%d" % (a, ess.n))
    if ess.k == 1:
        return BettiTable(a, 1, (1,))
    e = reduction_data(ess, a).e
    return BettiTable(a, 2, (e + 1, e))


def betti_height1_reduce(sigma: FormCollection, a: int):
    """Strip the forced linear factors in the height-1 regime.

    Returns the collection with multiplicities m_i - e_i and the new fold e;
    the reduced instance has height 2, so the caller recurses on it.
    """
    ess = essentialize(sigma)
    if a >= ess.n:
        raise ValueError("a = n is the principal case, not a height-1 reduction")
    if height_of_fold_ideal(ess, a) != 1:
        raise ValueError("fold %d does not sit in the height-1 window" % a)
    rd = reduction_data(ess, a)
    raw = []
    for (form, mult), e_i in zip(ess.groups, rd.e_list):
        raw.append((form.coeffs, mult - e_i))
    return normalize(raw, ess.k), rd.e


def betti_nminus1(sigma: FormCollection) -> BettiTable:
    """At fold n-1 the table is (t, t-1, 0, ...) with t the group count."""
    ess = essentialize(sigma)
    n, k, t = ess.n, ess.k, ess.t
    if n < 2:
        raise ValueError("fold n-1 needs n >= 2")
    b = tuple((t, t - 1) + (0,) * k)[:k]
    return BettiTable(n - 1, k, b)


def is_generic(sigma: FormCollection, h: int) -> bool:
    """True when every h expanded columns are linearly independent."""
    key = (sigma, h)
    hit = _generic_cache.get(key)
    if hit is not None:
        return hit
    n = sigma.n
    result = True
    if h > sigma.k or h > n:
        result = False
    elif h >= 2 and any(m > 1 for m in sigma.multiplicities):
        result = False
    else:
        for subset in combinations(range(n), h):
            if subset_rank(sigma, subset) < h:
                result = False
                break
    _generic_cache[key] = result
    return result


def betti_cm_generic(sigma: FormCollection, a: int) -> BettiTable:
    """The Cohen-Macaulay binomial table for (n-a)-generic collections."""
    ess = essentialize(sigma)
    n, k = ess.n, ess.k
    if not n - k + 1 <= a <= n:
        raise ValueError("fold %d outside the Cohen-Macaulay window %d..%d" % (a, n - k + 1, n))
    h = min(n - a + 1, k)
    if not is_generic(ess, h):
        raise ValueError("not (n-a)-generic")
    p = n - a + 1
    b = tuple(
        comb(n, i + a - 1) * comb(i + a - 2, a - 1) if i <= p else 0
        for i in range(1, k + 1)
    )
    return BettiTable(a, k, b)


def betti_nminus2_arrangement(sigma: FormCollection) -> BettiTable:
    """Fold n-2 of a simple rank >= 3 arrangement, via rank-2 flats."""
    ess = essentialize(sigma)
    if any(m != 1 for m in ess.multiplicities):
        raise ValueError("arrangement must be simple (all multiplicities 1)")
    if ess.k < 3:
        raise ValueError("effective rank %d is below 3" % ess.k)
    n, k = ess.n, ess.k
    alpha = comb(n, 2)
    beta = sum(comb(size - 1, 2) for _, size in rank2_flats(ess))
    b = [alpha - beta, 2 * alpha - n - 2 * beta, alpha - n - beta + 1]
    b += [0] * (k - 3)
    return BettiTable(n - 2, k, tuple(b))


def b1_veronese(m, k: int, a: int, allow_any_fold: bool = False) -> int:
    """Generator count for coordinate collections (x_1 x m_1, ..., x_k x m_k).

    Inclusion-exclusion count of the degree-a monomials with per-variable
    caps m_i.  The closed form is usually quoted for a >= max(m); pass
    ``allow_any_fold`` to use it as a cross-check outside that range.
    """
    m = tuple(m)
    if len(m) != k or any(v < 1 for v in m):
        raise ValueError("need k positive caps")
    if not 1 <= a <= sum(m):
        raise ValueError("fold %d out of range 1..%d" % (a, sum(m)))
    if a < max(m) and not allow_any_fold:
        raise ValueError("fold %d below the largest cap %d" % (a, max(m)))
    total = 0
    for r in range(k + 1):
        for subset in combinations(range(k), r):
            shift = sum(m[i] + 1 for i in subset)
            total += (-1) ** r * _comb0(a + k - 1 - shift, k - 1)
    return total


def b1_k3_veronese(m1: int, m2: int, m3: int, a: int) -> int:
    """First Betti number of (x1 x m1, x2 x m2, x3 x m3) in the middle window."""
    if not (m1 >= m2 >= m3 >= 1):
        raise ValueError("caps must satisfy m1 >= m2 >= m3 >= 1")
    if m1 < m3 + 2:
        raise ValueError("need m1 >= m3 + 2")
    if not (m3 + 1 <= a <= m2 + m3 and a <= m1 - 1):
        raise ValueError("fold %d outside the window" % a)
    n = m1 + m2 + m3
    if a <= m2:
        return (m3 + 1) * (a + 1) - comb(m3 + 1, 2)
    return (
        (a + 1) * (n - m1 - a + 1)
        + (a - m2) * (m2 + 1)
        + comb(a - m2, 2)
        - comb(m3 + 1, 2)
    )


def b1_singular_line_arrangement(sigma: FormCollection) -> int:
    """b_1 at fold n-m+1 for a line arrangement whose m-fold points are collinear.

    m is the maximal number of concurrent lines and t counts the points
    achieving it; the hypothesis is that those points all lie on one line of
    the arrangement, checked via the rank-2 flats.
    """
    ess = essentialize(sigma)
    if any(m != 1 for m in ess.multiplicities):
        raise ValueError("arrangement must be simple (all multiplicities 1)")
    if ess.k != 3:
        raise ValueError("line arrangements live in effective rank 3")
    flats = rank2_flats(ess)
    m = flats[0][1]
    max_flats = [set(flat) for flat, size in flats if size == m]
    common = set.intersection(*max_flats)
    if not common:
        raise ValueError("modular points not collinear")
    t = len(max_flats)
    n = ess.n
    return comb(n - m + 3, 2) - t


def herzog_kuhl_residuals(table: BettiTable, a: int, height: int):
    """The height-many Herzog-Kuhl left-hand sides; all zero for a true table."""
    k = table.k
    residuals = [sum((-1) ** i * table.b[i - 1] for i in range(1, k + 1)) + 1]
    for j in range(1, height):
        total = 0
        for i in range(1, k + 1):
            factor = 1
            for u in range(1, j + 1):
                factor *= a + i - u
            total += (-1) ** i * factor * table.b[i - 1]
        residuals.append(total)
    return tuple(residuals)


def betti_recursion(sigma: FormCollection, a: int, tutte_threshold: int = 16) -> BettiTable:
    """Full Betti table by deletion-contraction with closed-form base cases.

    Dispatch order: trivial fold, essentialize, rank <= 2, maximal power,
    height-1 reduction, a = n, a = n-1, Cohen-Macaulay generic, Herzog-Kuhl
    window (when the Tutte computation is within the threshold), and only
    then one deletion-contraction step at the group of largest multiplicity.
    """
    if a < 1:
        raise ValueError("fold must be at least 1")
    ess = essentialize(sigma)
    key = (ess, a)
    hit = _recursion_cache.get(key)
    if hit is not None:
        return hit
    table = _recursion_dispatch(ess, a, tutte_threshold)
    _recursion_cache[key] = table
    return table


def _recursion_dispatch(ess, a, tutte_threshold):
    k, n = ess.k, ess.n
    if a > n:
        return _zero_table(a, k)
    if k <= 2:
        return betti_rank2(ess, a)
    d = hamming_weights(ess).d
    if a <= d[0]:
        return betti_maximal_power(k, a)
    if a > d[k - 2] and a < n:
        reduced, e = betti_height1_reduce(ess, a)
        inner = betti_recursion(reduced, e, tutte_threshold)
        return BettiTable(a, inner.k, inner.b)
    if a == n:
        return _unit_table(a, k)
    if a == n - 1:
        return betti_nminus1(ess)
    if a >= n - k + 1 and is_generic(ess, min(n - a + 1, k)):
        return betti_cm_generic(ess, a)
    if d[0] < a <= d[1] and n <= tutte_threshold:
        return betti_from_b1_height_km1(k, a, b1_tutte(ess, a))
    deleted = delete(ess, 0)
    contracted, _ = contract(ess, 0)
    t_del = betti_recursion(deleted, a - 1, tutte_threshold) if deleted is not None else None
    t_con = None
    if contracted is not None and a <= contracted.n:
        t_con = betti_recursion(contracted, a, tutte_threshold)
    b = tuple(
        _entry(t_del, i) + _entry(t_con, i) + _entry(t_con, i - 1)
        for i in range(1, k + 1)
    )
    return BettiTable(a, k, b)


def betti_k3_block(sigma: FormCollection, a: int) -> BettiTable:
    """Rank-3 block elimination: peel the pivot group with all its copies.

    Every contraction lands in rank 2 where the closed form applies, so one
    recursion on the pivot-free collection plus a sum of rank-2 tables gives
    the whole answer.  Folds that reach 0 contribute the unit ideal's (1,).
    """
    ess = essentialize(sigma)
    k, n = ess.k, ess.n
    if k > 3:
        raise ValueError("block elimination expects effective rank <= 3")
    if a > n:
        return _zero_table(a, k)
    if k <= 2:
        return betti_rank2(ess, a)
    m1 = ess.groups[0][1]
    contracted, _ = contract(ess, 0)
    acc = [0, 0, 0]
    for j in range(min(m1, a)):
        fold = a - j
        if contracted is not None and fold <= contracted.n:
            tb = betti_rank2(contracted, fold)
            for i in range(1, 4):
                acc[i - 1] += _entry(tb, i) + _entry(tb, i - 1)
    if m1 >= a:
        acc[0] += 1
    else:
        rest = drop_group(ess, 0)
        tail = betti_k3_block(rest, a - m1)
        for i in range(1, 4):
            acc[i - 1] += _entry(tail, i)
    return BettiTable(a, 3, tuple(acc))


def compute_betti(sigma: FormCollection, a: int, method: str = "auto", tutte_threshold: int = 16) -> BettiTable:
    """Betti table by the requested method.

    ``auto`` dispatches the recursion and accepts a > n (zero table);
    ``recursion`` is the same engine with 1 <= a <= n enforced;
    ``tutte_hk`` closes the table from the Tutte b_1 where the height
    window allows; ``oracle`` delegates to the Hilbert-function engine.
    """
    if method not in METHODS:
        raise ValueError("unknown method %r" % (method,))
    if a < 1:
        raise ValueError("fold must be at least 1")
    if method == "auto":
        return betti_recursion(sigma, a, tutte_threshold)
    if a > sigma.n:
        raise ValueError("fold %d exceeds n = %d" % (a, sigma.n))
    if method == "recursion":
        return betti_recursion(sigma, a, tutte_threshold)
    if method == "oracle":
        from .oracle import betti_from_hilbert

        return betti_from_hilbert(sigma, a)
    return _tutte_hk_table(sigma, a)


def _tutte_hk_table(sigma, a):
    ess = essentialize(sigma)
    k = ess.k
    if k == 1:
        return BettiTable(a, 1, (1,))
    d = hamming_weights(ess).d
    if a <= d[0]:
        return betti_maximal_power(k, a)
    if a <= d[1]:
        return betti_from_b1_height_km1(k, a, b1_tutte(ess, a))
    if k == 3:
        e = reduction_data(ess, a).e
        b1 = b1_tutte(ess, a)
        return BettiTable(a, 3, (b1, 2 * b1 - e - 2, b1 - e - 1))
    raise ValueError("height window unsupported")
