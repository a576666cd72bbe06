"""The matroid of a form collection's coefficient matrix.

Column indices are 0-based and multiplicity-expanded (copy i of a group is
its own ground-set element).  Provides subset ranks, circuits, rank-2
flats, generalized Hamming weights, fold-ideal heights, and the Tutte
polynomial computed by memoized deletion-contraction with the subset-sum
definition kept around as an independent cross-check.

The memo tables behave as single logical maps: concurrent callers may
duplicate work but dict reads/writes of immutable values are atomic, so no
torn entry can be observed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .exactlin import Fp, bareiss_rank, gauss_rank
from .forms import FormCollection, contract, drop_group, essentialize, int_columns

_int_cols_cache = {}
_hamming_cache = {}
_tutte_cache = {}


def _columns(sigma):
    cols = _int_cols_cache.get(sigma)
    if cols is None:
        cols = int_columns(sigma)
        _int_cols_cache[sigma] = cols
    return cols


def _cols_rank(cols):
    if not cols:
        return 0
    if isinstance(cols[0][0], Fp):
        return gauss_rank(cols)
    return bareiss_rank([list(c) for c in cols])


_full_rank_cache = {}


def full_rank(sigma: FormCollection) -> int:
    """Rank of the whole coefficient matrix (the effective rank)."""
    r = _full_rank_cache.get(sigma)
    if r is None:
        r = _cols_rank(_columns(sigma))
        _full_rank_cache[sigma] = r
    return r


def subset_rank(sigma: FormCollection, subset) -> int:
    """Rank of the selected expanded columns."""
    cols = _columns(sigma)
    subset = sorted(set(subset))
    if subset and not (0 <= subset[0] and subset[-1] < len(cols)):
        raise ValueError("column index out of range 0..%d" % (len(cols) - 1))
    return _cols_rank([cols[i] for i in subset])


def circuits_up_to(sigma: FormCollection, max_len: int):
    """All circuits (minimal dependent column sets) of size <= max_len.

    Candidates containing a smaller circuit are skipped, so a surviving
    dependent set is automatically minimal.
    """
    n = sigma.n
    if not 1 <= max_len <= n:
        raise ValueError("max_len %d out of range 1..%d" % (max_len, n))
    cols = _columns(sigma)
    circuits = []
    for size in range(1, max_len + 1):
        for cand in combinations(range(n), size):
            cset = set(cand)
            if any(c <= cset for c in circuits):
                continue
            if _cols_rank([cols[i] for i in cand]) < size:
                circuits.append(frozenset(cand))
    return [tuple(sorted(c)) for c in circuits]


def rank2_flats(sigma: FormCollection):
    """Closed rank-2 sets of groups, with their size counted by multiplicity.

    Each flat is the full set of groups lying in the 2-dimensional span of
    some pair; returned as (sorted group-index tuple, size) ordered by
    decreasing size then index.
    """
    if full_rank(sigma) < 2:
        raise ValueError("effective rank must be at least 2")
    t = sigma.t
    # one representative column per group
    gcols = []
    pos = 0
    for _, mult in sigma.groups:
        gcols.append(_columns(sigma)[pos])
        pos += mult
    flats = set()
    for i, j in combinations(range(t), 2):
        members = [g for g in range(t) if _cols_rank([gcols[i], gcols[j], gcols[g]]) == 2]
        flats.add(tuple(members))
    mults = sigma.multiplicities
    sized = [(flat, sum(mults[g] for g in flat)) for flat in flats]
    sized.sort(key=lambda fs: (-fs[1], fs[0]))
    return sized


@dataclass(frozen=True)
class HammingWeights:
    """d[r-1] is the r-th generalized Hamming weight, r = 1..k."""

    d: tuple


def _max_columns_with_rank_at_most(sigma, q: int) -> int:
    """Largest number of columns (with multiplicity) spanning <= q dimensions.

    The optimum is a flat, and every flat of rank <= q is the closure of an
    independent set of at most q groups, so closures of small group subsets
    are enough.
    """
    if q <= 0:
        return 0
    t = sigma.t
    gcols = []
    pos = 0
    for _, mult in sigma.groups:
        gcols.append(_columns(sigma)[pos])
        pos += mult
    mults = sigma.multiplicities
    best = 0
    for r in range(1, q + 1):
        for subset in combinations(range(t), r):
            chosen = [gcols[g] for g in subset]
            if _cols_rank(chosen) < r:
                continue
            size = 0
            for g in range(t):
                if g in subset or _cols_rank(chosen + [gcols[g]]) == r:
                    size += mults[g]
            best = max(best, size)
    return best


def hamming_weights(sigma: FormCollection) -> HammingWeights:
    """Generalized Hamming weights d_1 < ... < d_k = n (full-rank input)."""
    cached = _hamming_cache.get(sigma)
    if cached is not None:
        return cached
    k = sigma.k
    if full_rank(sigma) != k:
        raise ValueError("collection must have full effective rank")
    n = sigma.n
    weights = tuple(n - _max_columns_with_rank_at_most(sigma, k - r) for r in range(1, k + 1))
    result = HammingWeights(weights)
    _hamming_cache[sigma] = result
    return result


def height_of_fold_ideal(sigma: FormCollection, a: int) -> int:
    """Height of the fold ideal: k - r on the window d_r < a <= d_{r+1}."""
    if not 1 <= a <= sigma.n:
        raise ValueError("fold %d out of range 1..%d" % (a, sigma.n))
    ess = essentialize(sigma)
    d = hamming_weights(ess).d
    k = ess.k
    if a <= d[0]:
        return k
    for r in range(1, k):
        if d[r - 1] < a <= d[r]:
            return k - r
    raise AssertionError("unreachable: d_k = n bounds every fold")


class TuttePoly:
    """Bivariate polynomial with integer coefficients, sparse on (i, j)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = {ij: c for ij, c in coeffs.items() if c != 0}

    def evaluate(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self.coeffs.items())

    def __eq__(self, other):
        return isinstance(other, TuttePoly) and self.coeffs == other.coeffs

    def __repr__(self):
        terms = ["%d*x^%d*y^%d" % (c, i, j) for (i, j), c in sorted(self.coeffs.items())]
        return "TuttePoly(%s)" % " + ".join(terms)

    def to_json_dict(self):
        return {
            "terms": [
                {"x": i, "y": j, "c": str(c)}
                for (i, j), c in sorted(self.coeffs.items())
            ]
        }


def _poly_add(p, q):
    out = dict(p)
    for ij, c in q.items():
        v = out.get(ij, 0) + c
        if v:
            out[ij] = v
        elif ij in out:
            del out[ij]
    return out


def _poly_mul(p, q):
    out = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            ij = (i1 + i2, j1 + j2)
            v = out.get(ij, 0) + c1 * c2
            if v:
                out[ij] = v
            elif ij in out:
                del out[ij]
    return out


def tutte_polynomial(sigma: FormCollection) -> TuttePoly:
    """Tutte polynomial by deletion-contraction, memoized per collection.

    Parallel copies of a form are eliminated as one block: deleting and
    contracting copy by copy telescopes into a single geometric factor in
    y, with an x instead of the constant term when the block is a coloop.
    Loops never occur in stored collections (zero forms are stripped), but
    contraction accounts for the copies that collapse.
    """
    cached = _tutte_cache.get(sigma)
    if cached is not None:
        return cached
    m = sigma.groups[0][1]
    deleted = drop_group(sigma, 0)
    contracted, _ = contract(sigma, 0)
    t_con = tutte_polynomial(contracted).coeffs if contracted is not None else {(0, 0): 1}
    if deleted is None or _cols_rank(_columns(deleted)) < _cols_rank(_columns(sigma)):
        factor = {(1, 0): 1}
        for j in range(1, m):
            factor[(0, j)] = 1
        result = _poly_mul(factor, t_con)
    else:
        factor = {(0, j): 1 for j in range(m)}
        result = _poly_add(tutte_polynomial(deleted).coeffs, _poly_mul(factor, t_con))
    poly = TuttePoly(result)
    if poly.evaluate(1, 1) <= 0:
        raise AssertionError("Tutte polynomial lost its bases count")
    _tutte_cache[sigma] = poly
    return poly


def tutte_polynomial_subset_sum(sigma: FormCollection) -> TuttePoly:
    """The subset-sum definition, as an independent cross-check (n <= 16)."""
    n = sigma.n
    if n > 16:
        raise ValueError("subset-sum Tutte is limited to n <= 16")
    cols = _columns(sigma)
    full = _cols_rank(cols)
    counts = {}
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            r = _cols_rank([cols[i] for i in subset])
            key = (full - r, size - r)
            counts[key] = counts.get(key, 0) + 1
    out = {}
    for (ex, ey), mult in counts.items():
        # expand (x-1)^ex * (y-1)^ey
        for i in range(ex + 1):
            ci = comb(ex, i) * (-1) ** (ex - i)
            for j in range(ey + 1):
                ij = (i, j)
                v = out.get(ij, 0) + mult * ci * comb(ey, j) * (-1) ** (ey - j)
                if v:
                    out[ij] = v
                elif ij in out:
                    del out[ij]
    return TuttePoly(out)


def tutte_shifted_coeffs(tp: TuttePoly):
    """Coefficients of T(x+1, y), re-expanded binomially in x."""
    out = {}
    for (i, j), c in tp.coeffs.items():
        for i2 in range(i + 1):
            ij = (i2, j)
            v = out.get(ij, 0) + comb(i, i2) * c
            if v:
                out[ij] = v
            elif ij in out:
                del out[ij]
    return out
