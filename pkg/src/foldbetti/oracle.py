"""Ground-truth engines, independent of every closed-form formula.

Two oracles: exact Hilbert functions of the fold ideal by monomial linear
algebra (which determine the whole Betti table degree by degree), and the
first Betti number via the rank of the circuit-relation space.  Both reduce
to integer matrix ranks, so they share the elimination engines but none of
the combinatorial shortcuts they are meant to verify.

These are verifiers, not production paths: desk-scale guardrails refuse
instances whose matrices would not fit a quick exact computation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd

from .betti import BettiTable
from .exactlin import (
    Fp,
    IntEchelon,
    Matrix,
    SparseIntEchelon,
    gauss_rank,
    kernel_basis,
    sparse_gauss_rank,
)
from .forms import FormCollection, essentialize
from .matroid import circuits_up_to

DEFAULT_CELL_LIMIT = 5_000_000
RELATION_AMBIENT_LIMIT = 200_000


class OracleLimitError(Exception):
    """The instance exceeds the oracle's desk-scale guardrails."""


def _cell_limit():
    return int(os.environ.get("FOLDBETTI_ORACLE_CELL_LIMIT", DEFAULT_CELL_LIMIT))


@lru_cache(maxsize=None)
def monomial_basis(k: int, d: int):
    """Exponent tuples of total degree d, descending lexicographic."""
    if k == 1:
        return ((d,),)
    out = []
    for e0 in range(d, -1, -1):
        for rest in monomial_basis(k - 1, d - e0):
            out.append((e0,) + rest)
    return tuple(out)


def _poly_mul_linear(poly, form):
    out = {}
    for exp, c in poly.items():
        for i, fi in enumerate(form):
            if fi == 0:
                continue
            e2 = exp[:i] + (exp[i] + 1,) + exp[i + 1 :]
            v = out.get(e2, 0) + c * fi
            if v != 0:
                out[e2] = v
            elif e2 in out:
                del out[e2]
    return out


def fold_generators(sigma: FormCollection, a: int):
    """All C(n, a) fold products, expanded in the degree-a monomial basis.

    Repeated forms give repeated polynomials; callers that only need ranks
    deduplicate afterwards.
    """
    if not 1 <= a <= sigma.n:
        raise ValueError("fold %d out of range 1..%d" % (a, sigma.n))
    cols = sigma.expanded_columns()
    k = sigma.k
    one = Fraction(1)
    for x in cols[0]:
        if isinstance(x, Fp):
            one = Fp(1, x.p)
            break
    out = []
    for subset in combinations(range(sigma.n), a):
        poly = {(0,) * k: one}
        for j in subset:
            poly = _poly_mul_linear(poly, cols[j])
        out.append(poly)
    return out


def _dedup_polys(polys):
    seen = set()
    unique = []
    for poly in polys:
        key = tuple(sorted(poly.items()))
        if key not in seen:
            seen.add(key)
            unique.append(poly)
    return unique


def _poly_to_int_coeffs(poly):
    """Clear denominators; the scaling is per row so ranks are unchanged."""
    lcm = 1
    for c in poly.values():
        d = c.denominator
        lcm = lcm // gcd(lcm, d) * d
    out = {e: int(c * lcm) for e, c in poly.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {e: v // g for e, v in out.items()}
    return out


def hilbert_function(sigma: FormCollection, a: int, d: int) -> int:
    """dim of the degree-d piece of the fold ideal, by explicit row ranks.

    Rows are generator-times-monomial products expressed in the fixed
    graded-lex basis of degree d; the answer is their rank.
    """
    if d < a:
        raise ValueError("degree %d below generation degree %d" % (d, a))
    if not 1 <= a <= sigma.n:
        raise ValueError("fold %d out of range 1..%d" % (a, sigma.n))
    k = sigma.k
    basis = monomial_basis(k, d)
    mults = monomial_basis(k, d - a)
    est_rows = comb(sigma.n, a) * len(mults)
    if est_rows * len(basis) > _cell_limit():
        raise OracleLimitError(
            "Hilbert matrix would have %d x %d cells; limit is %d"
            % (est_rows, len(basis), _cell_limit())
        )
    gens = _dedup_polys(fold_generators(sigma, a))
    index = {e: i for i, e in enumerate(basis)}
    width = len(basis)
    rational = not any(isinstance(c, Fp) for c in gens[0].values())
    if rational:
        int_gens = [_poly_to_int_coeffs(g) for g in gens]
        ech = IntEchelon(width)
        for g in int_gens:
            for mu in mults:
                row = [0] * width
                for e, c in g.items():
                    row[index[tuple(x + y for x, y in zip(e, mu))]] = c
                ech.add(row)
            if ech.is_full():
                break
        return ech.rank
    rows = []
    for g in gens:
        for mu in mults:
            row = [0] * width
            for e, c in g.items():
                row[index[tuple(x + y for x, y in zip(e, mu))]] = c
            rows.append(row)
    return gauss_rank(rows)


def betti_from_hilbert(sigma: FormCollection, a: int) -> BettiTable:
    """Betti table recovered degree by degree from exact Hilbert values.

    b_1 is HF at the generation degree; each later b_i is an alternating
    binomial combination of earlier ones plus the next HF value.  A negative
    intermediate would contradict the linearity of the resolution, so it is
    reported as an error rather than clamped.
    """
    if not 1 <= a <= sigma.n:
        raise ValueError("fold %d out of range 1..%d" % (a, sigma.n))
    ess = essentialize(sigma)
    k = ess.k
    b = []
    for i in range(1, k + 1):
        v = (-1) ** (i - 1) * hilbert_function(ess, a, a + i - 1)
        for j in range(1, i):
            v += (-1) ** (j - 1) * comb(k + j - 1, j) * b[i - j - 1]
        if v < 0:
            raise ValueError("linear-resolution assumption violated: b_%d = %d" % (i, v))
        b.append(v)
    return BettiTable(a, k, tuple(b))


@dataclass
class HFReport:
    """Exact Hilbert-function values of the fold ideal, degree -> dimension."""

    a: int
    values: dict

    def to_json_dict(self):
        return {"a": self.a, "hf": {str(d): v for d, v in sorted(self.values.items())}}


def hf_report(sigma: FormCollection, a: int, degrees) -> HFReport:
    return HFReport(a, {d: hilbert_function(sigma, a, d) for d in degrees})


@dataclass
class RelationSpace:
    """Constant-coefficient relations among fold generators, from circuits.

    Generators are sparse vectors indexed by the (n-a)-subsets in
    lexicographic order; their span has dimension C(n, n-a) - b_1.
    """

    a: int
    ambient_dim: int
    generators: list
    rank: int


def relation_space(sigma: FormCollection, a: int) -> RelationSpace:
    """Enumerate circuit-derived relation vectors and compute their rank.

    Each circuit of length s carries one dependency (normalized so the entry
    at its smallest index is 1); every choice of n-s+1-a leftover columns to
    divide out produces one sparse vector.
    """
    n = sigma.n
    if not 1 <= a <= n - 1:
        raise ValueError("fold %d out of range 1..%d" % (a, n - 1))
    ambient = comb(n, n - a)
    if ambient > RELATION_AMBIENT_LIMIT:
        raise OracleLimitError(
            "relation space has ambient dimension %d; limit is %d"
            % (ambient, RELATION_AMBIENT_LIMIT)
        )
    cols = sigma.expanded_columns()
    position = {c: i for i, c in enumerate(combinations(range(n), n - a))}
    generators = []
    for circuit in circuits_up_to(sigma, n - a + 1):
        s = len(circuit)
        basis = kernel_basis(Matrix.from_columns([cols[j] for j in circuit]))
        if len(basis) != 1:
            raise AssertionError("circuit %r has nullity %d" % (circuit, len(basis)))
        dep = basis[0]
        others = [u for u in range(n) if u not in circuit]
        cset = set(circuit)
        for divisor in combinations(others, n - s + 1 - a):
            dset = set(divisor)
            vec = {}
            for idx, j in enumerate(circuit):
                key = tuple(sorted(dset | (cset - {j})))
                vec[position[key]] = dep[idx]
            generators.append(vec)
    if generators and any(isinstance(v, Fp) for v in generators[0].values()):
        rank = sparse_gauss_rank(generators)
    else:
        ech = SparseIntEchelon()
        for vec in generators:
            ech.add(_sparse_to_ints(vec))
        rank = ech.rank
    return RelationSpace(a, ambient, generators, rank)


def _sparse_to_ints(vec):
    lcm = 1
    for c in vec.values():
        d = c.denominator
        lcm = lcm // gcd(lcm, d) * d
    return {j: int(c * lcm) for j, c in vec.items()}


def b1_via_circuits(sigma: FormCollection, a: int) -> int:
    """First Betti number as C(n, n-a) minus the relation-space rank."""
    space = relation_space(sigma, a)
    return space.ambient_dim - space.rank
