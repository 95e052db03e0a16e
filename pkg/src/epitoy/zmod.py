"""Exact linear algebra over the residue ring Z_d, d >= 2 and not necessarily prime.

Submodules of Z_d^m are stored in Howell normal form, the unique canonical
generator matrix for a span over a ring with zero divisors (row echelon /
Hermite forms are not unique there).  Two submodules are equal as sets iff
their Howell matrices are identical, so equality, hashing and caching are
structural.

All arithmetic is exact integer arithmetic; nothing in this module touches
floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import MixedModulus, TooLarge

ENUMERATION_GUARD = 10**6


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def modinv(a: int, n: int) -> int:
    g, s, _ = _egcd(a % n, n)
    if g != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    return s % n


def _unit(a: int, n: int) -> int:
    """A unit u of Z_n with u*a = gcd(a, n) mod n (Howell pivot normalisation)."""
    a %= n
    if a == 0:
        return 1
    g = math.gcd(a, n)
    b = a // g
    step = n // g
    # b + c*step is coprime to n for some c < number of prime factors of n.
    c = 0
    while math.gcd(b + c * step, n) != 1:
        c += 1
    return modinv(b + c * step, n)


def _gcd_ext(a: int, b: int, n: int) -> tuple[int, int, int, int, int]:
    """Return (g, s, t, u, v) with s*a+t*b = g = gcd(a,b), u*a+v*b = 0 mod n,
    and [[s,t],[u,v]] invertible mod n (its determinant is 1)."""
    a %= n
    b %= n
    g, s, t = _egcd(a, b)
    if g == 0:
        return 0, 1, 0, 0, 1
    u, v = -(b // g), a // g
    return g % n, s % n, t % n, u % n, v % n


def _vec_mod(vec, d: int) -> tuple[int, ...]:
    return tuple(x % d for x in vec)


def _vec_add(a, b, d: int) -> tuple[int, ...]:
    return tuple((x + y) % d for x, y in zip(a, b))


def _vec_sub(a, b, d: int) -> tuple[int, ...]:
    return tuple((x - y) % d for x, y in zip(a, b))


def _vec_scale(c: int, a, d: int) -> tuple[int, ...]:
    return tuple((c * x) % d for x in a)


def _vec_dot(a, b, d: int) -> int:
    return sum(x * y for x, y in zip(a, b)) % d


@dataclass(frozen=True, slots=True)
class ModVector:
    """A fixed-length vector with entries reduced modulo d."""

    entries: tuple[int, ...]
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise MixedModulus(f"modulus must be >= 2, got {self.d}")
        object.__setattr__(self, "entries", _vec_mod(self.entries, self.d))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "ModVector") -> "ModVector":
        self._check(other)
        return ModVector(_vec_add(self.entries, other.entries, self.d), self.d)

    def __sub__(self, other: "ModVector") -> "ModVector":
        self._check(other)
        return ModVector(_vec_sub(self.entries, other.entries, self.d), self.d)

    def __rmul__(self, c: int) -> "ModVector":
        return ModVector(_vec_scale(c, self.entries, self.d), self.d)

    def __neg__(self) -> "ModVector":
        return ModVector(_vec_scale(-1, self.entries, self.d), self.d)

    def dot(self, other: "ModVector") -> int:
        self._check(other)
        return _vec_dot(self.entries, other.entries, self.d)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _check(self, other: "ModVector") -> None:
        if self.d != other.d or len(self.entries) != len(other.entries):
            raise MixedModulus(
                f"incompatible vectors: len {len(self.entries)} mod {self.d} "
                f"vs len {len(other.entries)} mod {other.d}"
            )


def _howell_rows(rows: list[tuple[int, ...]], d: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Howell normal form of the span of `rows` in Z_d^m (raw tuple arithmetic)."""
    work = [_vec_mod(r, d) for r in rows if any(x % d for x in r)]
    r = 0
    for c in range(m):
        pivot_idx = None
        for i in range(r, len(work)):
            if work[i][c]:
                pivot_idx = i
                break
        if pivot_idx is None:
            continue
        work[r], work[pivot_idx] = work[pivot_idx], work[r]
        # Scale by a unit so the pivot becomes gcd(entry, d), a divisor of d.
        u = _unit(work[r][c], d)
        if u != 1:
            work[r] = _vec_scale(u, work[r], d)
        h = work[r][c]
        # Eliminate below.
        for i in range(r + 1, len(work)):
            if work[i][c]:
                _, s, t, u2, v2 = _gcd_ext(h, work[i][c], d)
                new_r = _vec_add(_vec_scale(s, work[r], d), _vec_scale(t, work[i], d), d)
                new_i = _vec_add(_vec_scale(u2, work[r], d), _vec_scale(v2, work[i], d), d)
                work[r], work[i] = new_r, new_i
                h = work[r][c]
        # Reduce above so entries over the pivot are < pivot.
        for i in range(r):
            q = work[i][c] // h
            if q:
                work[i] = _vec_sub(work[i], _vec_scale(q, work[r], d), d)
        # Howell step: the annihilator multiple of the pivot row stays in the
        # working set so elements with leading zeros remain representable.
        ann = d // math.gcd(h, d)
        if ann % d:
            extra = _vec_scale(ann, work[r], d)
            if any(extra):
                work.append(extra)
        r += 1
    return tuple(row for row in work[:r] if any(row))


def _pivot(row: tuple[int, ...]) -> tuple[int, int]:
    for c, x in enumerate(row):
        if x:
            return c, x
    raise ValueError("zero row has no pivot")


@dataclass(frozen=True, slots=True)
class Submodule:
    """A submodule of Z_d^m, canonically presented by its Howell-form rows.

    Instances are immutable and hashable; equality of instances is equality
    of spans.  Construct through `span` / `howell_form`, not directly.
    """

    d: int
    m: int
    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def span(vectors, d: int | None = None, m: int | None = None) -> "Submodule":
        vecs = list(vectors)
        raw = []
        for v in vecs:
            if isinstance(v, ModVector):
                if d is None:
                    d = v.d
                if m is None:
                    m = len(v)
                if v.d != d or len(v) != m:
                    raise MixedModulus("generators disagree on modulus or length")
                raw.append(v.entries)
            else:
                raw.append(tuple(v))
        if d is None or m is None:
            raise MixedModulus("empty generator list needs explicit d and m")
        if any(len(r) != m for r in raw):
            raise MixedModulus("generators disagree on length")
        return Submodule(d, m, _howell_rows(raw, d, m))

    @staticmethod
    def zero(d: int, m: int) -> "Submodule":
        return Submodule(d, m, ())

    @staticmethod
    def full(d: int, m: int) -> "Submodule":
        eye = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
        return Submodule(d, m, tuple(eye))

    def size(self) -> int:
        """Number of elements; for Howell rows this is the product of d/pivot."""
        total = 1
        for row in self.rows:
            _, h = _pivot(row)
            total *= self.d // h
        return total

    def reduce(self, vec) -> tuple[int, ...]:
        """Canonical (lexicographically least) representative of vec + self.

        Greedy digit-wise reduction is exact because the Howell property
        guarantees that span elements vanishing on the first columns lie in
        the span of the later rows.
        """
        v = _vec_mod(vec.entries if isinstance(vec, ModVector) else vec, self.d)
        for row in self.rows:
            c, h = _pivot(row)
            q = v[c] // h
            if q:
                v = _vec_sub(v, _vec_scale(q, row, self.d), self.d)
        return v

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def __contains__(self, vec) -> bool:
        return self.contains(vec)

    def elements(self, guard: int = ENUMERATION_GUARD) -> frozenset[tuple[int, ...]]:
        return _elements_cached(self, guard)

    def coset(self, shift, guard: int = ENUMERATION_GUARD) -> frozenset[tuple[int, ...]]:
        s = _vec_mod(shift.entries if isinstance(shift, ModVector) else shift, self.d)
        return frozenset(_vec_add(e, s, self.d) for e in self.elements(guard))


@lru_cache(maxsize=4096)
def _elements_cached(sub: Submodule, guard: int) -> frozenset[tuple[int, ...]]:
    if sub.size() > guard:
        raise TooLarge(f"submodule has {sub.size()} elements, guard is {guard}")
    elems = {(0,) * sub.m}
    for row in sub.rows:
        order = sub.d // math.gcd(*row, sub.d)
        multiples = [_vec_scale(c, row, sub.d) for c in range(order)]
        elems = {_vec_add(e, mult, sub.d) for e in elems for mult in multiples}
    return frozenset(elems)


def howell_form(rows: list[ModVector], d: int | None = None, m: int | None = None) -> Submodule:
    """Canonical submodule spanned by `rows`; idempotent, span-preserving."""
    return Submodule.span(rows, d=d, m=m)


def solve_linear(
    matrix: list[ModVector] | list[tuple[int, ...]],
    rhs: ModVector | tuple[int, ...],
    d: int | None = None,
    unknowns: int | None = None,
) -> tuple[ModVector, Submodule] | None:
    """Solve A x = b over Z_d for the row list A; returns (particular, kernel).

    Returns None when the system has no solution.  The kernel is the full
    solution submodule {x : A x = 0}, so particular + kernel enumerates the
    complete solution set.  `unknowns` is only needed for an empty matrix.
    """
    rows = []
    for r in matrix:
        if isinstance(r, ModVector):
            if d is None:
                d = r.d
            rows.append(r.entries)
        else:
            rows.append(tuple(r))
    b = rhs.entries if isinstance(rhs, ModVector) else tuple(rhs)
    if d is None:
        raise MixedModulus("solve_linear needs a modulus")
    if len(b) != len(rows):
        raise MixedModulus(f"rhs length {len(b)} != number of equations {len(rows)}")
    if not rows:
        if unknowns is None:
            raise MixedModulus("empty system needs an explicit number of unknowns")
        return ModVector((0,) * unknowns, d), Submodule.full(d, unknowns)
    m = len(rows[0])
    if any(len(r) != m for r in rows):
        raise MixedModulus("equation rows disagree on length")

    n_eq = len(rows)
    # Work on the transpose: rows of A^T are the columns of A, living in Z_d^n_eq.
    # Howell-reduce them while tracking how each reduced row combines the
    # original columns: membership of b in the span yields a particular
    # solution, and tracked combinations that vanish span the kernel of A.
    work: list[tuple[tuple[int, ...], tuple[int, ...]]] = [
        (
            tuple(rows[i][j] % d for i in range(n_eq)),
            tuple(1 if k == j else 0 for k in range(m)),
        )
        for j in range(m)
    ]

    r = 0
    for c in range(n_eq):
        pivot_idx = None
        for i in range(r, len(work)):
            if work[i][0][c]:
                pivot_idx = i
                break
        if pivot_idx is None:
            continue
        work[r], work[pivot_idx] = work[pivot_idx], work[r]
        u = _unit(work[r][0][c], d)
        if u != 1:
            work[r] = (_vec_scale(u, work[r][0], d), _vec_scale(u, work[r][1], d))
        h = work[r][0][c]
        for i in range(r + 1, len(work)):
            if work[i][0][c]:
                _, s, t, u2, v2 = _gcd_ext(h, work[i][0][c], d)
                new_r = (
                    _vec_add(_vec_scale(s, work[r][0], d), _vec_scale(t, work[i][0], d), d),
                    _vec_add(_vec_scale(s, work[r][1], d), _vec_scale(t, work[i][1], d), d),
                )
                new_i = (
                    _vec_add(_vec_scale(u2, work[r][0], d), _vec_scale(v2, work[i][0], d), d),
                    _vec_add(_vec_scale(u2, work[r][1], d), _vec_scale(v2, work[i][1], d), d),
                )
                work[r], work[i] = new_r, new_i
                h = work[r][0][c]
        ann = d // math.gcd(h, d)
        if ann % d:
            work.append((_vec_scale(ann, work[r][0], d), _vec_scale(ann, work[r][1], d)))
        r += 1

    kernel_rows = [t for v, t in work if not any(v) and any(t)]

    # Express b in terms of the reduced rows (greedy pivot elimination).
    target = _vec_mod(b, d)
    combo = (0,) * m
    for v, t in work[:r]:
        c, h = _pivot(v)
        if target[c]:
            g = math.gcd(h, d)
            if target[c] % g:
                return None
            q = (target[c] // g) * modinv(h // g, d // g) % (d // g)
            target = _vec_sub(target, _vec_scale(q, v, d), d)
            combo = _vec_add(combo, _vec_scale(q, t, d), d)
    if any(target):
        return None

    kernel = Submodule.span(kernel_rows, d=d, m=m)
    return ModVector(combo, d), kernel


def complement(sub: Submodule, form: str = "euclidean") -> Submodule:
    """Annihilator of `sub`: euclidean {a : a.b = 0} or symplectic {a : <a,b> = 0}.

    Z_d is quasi-Frobenius, so complement(complement(S)) == S in both forms.
    """
    if form == "euclidean":
        rows = sub.rows
    elif form == "symplectic":
        rows = tuple(_apply_j_row(r, sub.d) for r in sub.rows)
    else:
        raise ValueError(f"unknown complement form: {form}")
    if not rows:
        return Submodule.full(sub.d, sub.m)
    sol = solve_linear(list(rows), (0,) * len(rows), d=sub.d)
    assert sol is not None  # homogeneous systems are always consistent
    _, kernel = sol
    return kernel


def _apply_j_row(row: tuple[int, ...], d: int) -> tuple[int, ...]:
    """Row vector b -> b^T J, so that (b^T J) a = <b, a> for the standard J."""
    out = []
    for i in range(0, len(row), 2):
        x, p = row[i], row[i + 1]
        out.extend(((-p) % d, x % d))
    return tuple(out)


def intersect(a: Submodule, b: Submodule) -> Submodule:
    """A ∩ B via double-annihilator duality: (A⊥ ⊕ B⊥)⊥."""
    if (a.d, a.m) != (b.d, b.m):
        raise MixedModulus("intersect needs a common ambient module")
    return complement(direct_sum(complement(a), complement(b)))


def direct_sum(a: Submodule, b: Submodule) -> Submodule:
    if (a.d, a.m) != (b.d, b.m):
        raise MixedModulus("direct_sum needs a common ambient module")
    return Submodule(a.d, a.m, _howell_rows(list(a.rows + b.rows), a.d, a.m))


def enumerate_elements(sub: Submodule, guard: int = ENUMERATION_GUARD) -> set[ModVector]:
    return {ModVector(e, sub.d) for e in sub.elements(guard)}


def all_vectors(d: int, m: int, guard: int = ENUMERATION_GUARD):
    """All of Z_d^m in lexicographic order (guarded)."""
    if d**m > guard:
        raise TooLarge(f"Z_{d}^{m} has {d**m} elements, guard is {guard}")
    return itertools.product(range(d), repeat=m)


def transversal(big: Submodule, small: Submodule) -> list[tuple[int, ...]]:
    """Canonical coset representatives of `small` inside `big` (small ⊆ big)."""
    reps = {small.reduce(e) for e in big.elements()}
    return sorted(reps)
