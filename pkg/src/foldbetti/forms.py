"""Collections of linear forms with multiplicities.

A collection keeps pairwise non-proportional forms in a canonical scale
(first nonzero coefficient 1), each with a positive multiplicity, sorted by
multiplicity descending then coefficients.  Equal inputs therefore always
build the identical object, which is what the memoized recursions key on.

Deletion removes one copy of a form.  Contraction reduces every other form
modulo a chosen form and drops one ambient variable; copies that collapse
to zero are only counted, never stored, because the one consumer of that
number (the Betti recursion) just needs how many nonzero forms survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactlin import Fp, Matrix, primitive_int_vector, rref


def _coerce_coeffs(coeffs):
    """Promote plain ints to the field the other entries live in."""
    coeffs = tuple(coeffs)
    p = None
    for x in coeffs:
        if isinstance(x, Fp):
            p = x.p
            break
    if p is None:
        return tuple(Fraction(x) if isinstance(x, int) else x for x in coeffs)
    out = []
    for x in coeffs:
        if isinstance(x, Fp):
            out.append(x)
        elif isinstance(x, int):
            out.append(Fp(x, p))
        else:
            raise TypeError("cannot mix %r into a GF(%d) form" % (x, p))
    return tuple(out)


def _canonical_coeffs(coeffs):
    """Scale so the first nonzero coefficient is 1; None for the zero form."""
    coeffs = _coerce_coeffs(coeffs)
    for x in coeffs:
        if x != 0:
            return tuple(y / x for y in coeffs)
    return None


@dataclass(frozen=True)
class LinearForm:
    """A nonzero linear form in canonical scale."""

    coeffs: tuple

    def __post_init__(self):
        lead = None
        for x in self.coeffs:
            if x != 0:
                lead = x
                break
        if lead is None:
            raise ValueError("zero form cannot live in a collection")
        if lead != 1:
            raise ValueError("form is not canonically scaled: %r" % (self.coeffs,))

    @classmethod
    def make(cls, coeffs):
        canon = _canonical_coeffs(coeffs)
        if canon is None:
            raise ValueError("zero form cannot live in a collection")
        return cls(canon)

    @property
    def k(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class FormCollection:
    """The multiset of linear forms: groups of (form, multiplicity)."""

    k: int
    groups: tuple

    def __post_init__(self):
        if not self.groups:
            raise ValueError("empty collection")
        for form, mult in self.groups:
            if form.k != self.k:
                raise ValueError("form %r has %d coefficients, ambient is %d" % (form.coeffs, form.k, self.k))
            if mult < 1:
                raise ValueError("multiplicity must be positive")
        keys = [_sort_key(form, mult) for form, mult in self.groups]
        if keys != sorted(keys):
            raise ValueError("groups are not in canonical order")
        if len({form for form, _ in self.groups}) != len(self.groups):
            raise ValueError("proportional groups were not merged")

    @property
    def n(self) -> int:
        return sum(m for _, m in self.groups)

    @property
    def t(self) -> int:
        return len(self.groups)

    @property
    def multiplicities(self):
        return tuple(m for _, m in self.groups)

    def expanded_columns(self):
        """Coefficient tuples, one per copy, in group order."""
        cols = []
        for form, mult in self.groups:
            cols.extend([form.coeffs] * mult)
        return cols


@dataclass(frozen=True)
class ReductionData:
    """Per-group exponents e_i = max(m_i + a - n, 0) and e = max(a - sum e_i, 0)."""

    e_list: tuple
    e: int


def _sort_key(form, mult):
    return (-mult, form.coeffs)


def normalize(raw_forms, k: int) -> FormCollection:
    """Canonicalize raw (coeff-vector, multiplicity) pairs.

    Zero vectors are dropped, proportional forms are merged by summing
    multiplicities, and the result is sorted.  Raises if nothing survives.
    """
    merged = {}
    for coeffs, mult in raw_forms:
        if len(coeffs) != k:
            raise ValueError("form %r has %d coefficients, expected %d" % (coeffs, len(coeffs), k))
        if mult < 1:
            raise ValueError("multiplicity must be positive")
        canon = _canonical_coeffs(coeffs)
        if canon is None:
            continue
        merged[canon] = merged.get(canon, 0) + mult
    if not merged:
        raise ValueError("empty collection")
    groups = sorted(((LinearForm(c), m) for c, m in merged.items()), key=lambda g: _sort_key(*g))
    return FormCollection(k, tuple(groups))


def delete(sigma: FormCollection, group_index: int):
    """Remove one copy of the chosen group; None once nothing is left."""
    raw = []
    for i, (form, mult) in enumerate(sigma.groups):
        if i == group_index:
            mult -= 1
        if mult > 0:
            raw.append((form.coeffs, mult))
    if not raw:
        return None
    return normalize(raw, sigma.k)


def drop_group(sigma: FormCollection, group_index: int):
    """Remove a whole group (every copy); None once nothing is left."""
    groups = [g for i, g in enumerate(sigma.groups) if i != group_index]
    if not groups:
        return None
    return FormCollection(sigma.k, tuple(groups))


def contract(sigma: FormCollection, group_index: int):
    """Reduce the other forms modulo the chosen form, in one fewer variable.

    Returns (surviving collection or None, zero_count).  The contracted
    form itself is not counted; its remaining copies and anything
    proportional to it are.
    """
    ell = sigma.groups[group_index][0].coeffs
    j = next(i for i, x in enumerate(ell) if x != 0)
    survivors = []
    zero_count = 0
    for gi, (form, mult) in enumerate(sigma.groups):
        if gi == group_index:
            zero_count += mult - 1
            continue
        f = form.coeffs
        factor = f[j] / ell[j]
        image = tuple(f[i] - factor * ell[i] for i in range(len(f)) if i != j)
        if any(x != 0 for x in image):
            survivors.append((image, mult))
        else:
            zero_count += mult
    if not survivors:
        return None, zero_count
    return normalize(survivors, sigma.k - 1), zero_count


def coefficient_matrix(sigma: FormCollection) -> Matrix:
    """The k x n matrix with one column per form copy, in group order."""
    return Matrix.from_columns(sigma.expanded_columns())


def essentialize(sigma: FormCollection) -> FormCollection:
    """Rewrite the collection in coordinates for the span of its forms.

    The ambient count drops to the rank r of the coefficient matrix.  The
    change of coordinates is invertible on the span, so every subset rank
    (hence every Betti number) is unchanged.
    """
    rows = [form.coeffs for form, _ in sigma.groups]
    _, pivots = rref(rows)
    r = len(pivots)
    if r == sigma.k:
        return sigma
    raw = [(tuple(form.coeffs[p] for p in pivots), mult) for form, mult in sigma.groups]
    return normalize(raw, r)


def reduction_data(sigma: FormCollection, a: int) -> ReductionData:
    """The exponent vector e_i and leftover fold e at fold ``a``."""
    n = sigma.n
    if not 1 <= a <= n:
        raise ValueError("fold %d out of range 1..%d" % (a, n))
    e_list = tuple(max(m + a - n, 0) for m in sigma.multiplicities)
    e = max(a - sum(e_list), 0)
    return ReductionData(e_list, e)


def int_columns(sigma: FormCollection):
    """Expanded columns scaled to primitive integer vectors (rational case).

    Per-column scaling changes no subset rank and no dependency support,
    so the matroid machinery can run on integers.  Prime-field collections
    are returned as-is.
    """
    cols = sigma.expanded_columns()
    if cols and any(isinstance(x, Fp) for x in cols[0]):
        return [tuple(col) for col in cols]
    return [primitive_int_vector(col) for col in cols]
