"""Phase space over Z_d, observables, and epistemic states.

An ontic state is a point of Omega = Z_d^{2n} with coordinate layout
(x_0, p_0, ..., x_{n-1}, p_{n-1}).  An observable is a dual vector with the
same layout; its measured value on an ontic state is the inner product
mod d.  An epistemic state is a pair (V, w): an isotropic submodule of
jointly known observables plus a representative ontic vector fixing their
values.  The states an observer can hold are exactly those whose V is
isotropic under the symplectic product (classical complementarity).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, MixedModulus
from .zmod import (
    ENUMERATION_GUARD,
    ModVector,
    Submodule,
    complement,
    solve_linear,
)


@dataclass(frozen=True, slots=True)
class PhaseSpace:
    """n systems of dimension d; the phase space is Z_d^{2n}."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise DimensionMismatch(f"dimension must be >= 2, got {self.d}")
        if self.n < 1:
            raise DimensionMismatch(f"system count must be >= 1, got {self.n}")

    @property
    def m(self) -> int:
        return 2 * self.n

    def point(self, entries) -> ModVector:
        v = ModVector(tuple(entries), self.d)
        if len(v) != self.m:
            raise DimensionMismatch(
                f"expected length {self.m} for d={self.d}, n={self.n}, got {len(v)}"
            )
        return v

    def zero(self) -> ModVector:
        return ModVector((0,) * self.m, self.d)

    def size(self) -> int:
        return self.d**self.m


@dataclass(frozen=True, slots=True)
class Observable:
    """Coefficient vector (a_0, b_0, ..., a_{n-1}, b_{n-1}) of a linear
    functional sum_m (a_m X_m + b_m P_m)."""

    sigma: ModVector

    @property
    def d(self) -> int:
        return self.sigma.d

    def __iter__(self):
        return iter(self.sigma.entries)

    @property
    def entries(self) -> tuple[int, ...]:
        return self.sigma.entries


def observable(entries, d: int) -> Observable:
    return Observable(ModVector(tuple(entries), d))


def evaluate(obs: Observable | ModVector, point: ModVector) -> int:
    """Outcome of measuring obs on the ontic state `point`: sigma^T lambda mod d."""
    sigma = obs.sigma if isinstance(obs, Observable) else obs
    if sigma.d != point.d or len(sigma) != len(point):
        raise DimensionMismatch("observable and point live in different spaces")
    return sigma.dot(point)


def symplectic_product(a: Observable | ModVector, b: Observable | ModVector) -> int:
    """a^T J b with J = blockdiag([[0,1],[-1,0]]); zero iff a and b commute."""
    av = a.sigma if isinstance(a, Observable) else a
    bv = b.sigma if isinstance(b, Observable) else b
    if av.d != bv.d or len(av) != len(bv):
        raise DimensionMismatch("symplectic product needs a common space")
    total = 0
    ae, be = av.entries, bv.entries
    for i in range(0, len(ae), 2):
        total += ae[i] * be[i + 1] - ae[i + 1] * be[i]
    return total % av.d


def commutes(a: Observable | ModVector, b: Observable | ModVector) -> bool:
    return symplectic_product(a, b) == 0


def apply_j(v: ModVector) -> ModVector:
    """J v: (x, p) -> (p, -x) per system."""
    out = []
    for i in range(0, len(v), 2):
        out.extend((v.entries[i + 1], -v.entries[i]))
    return ModVector(tuple(out), v.d)


def apply_j_inverse(v: ModVector) -> ModVector:
    """J^{-1} v = -J v: (x, p) -> (-p, x) per system."""
    out = []
    for i in range(0, len(v), 2):
        out.extend((-v.entries[i + 1], v.entries[i]))
    return ModVector(tuple(out), v.d)


def is_isotropic(sub: Submodule) -> bool:
    """All pairwise symplectic products of generators vanish (the form is
    alternating, so generators suffice)."""
    d = sub.d
    rows = [ModVector(r, d) for r in sub.rows]
    for i, a in enumerate(rows):
        for b in rows[i:]:
            if symplectic_product(a, b) != 0:
                return False
    return True


@dataclass(frozen=True, slots=True)
class EpistemicState:
    """Knowledge state (V, w): support is the coset V_perp + w.

    w is canonicalised to the lexicographically least element of its coset,
    so states with the same support compare equal.  known_outcomes mirrors
    the generator values sigma_j = Sigma_j^T w; it is stored redundantly and
    revalidated rather than trusted.
    """

    space: PhaseSpace
    V: Submodule
    w: ModVector
    known_outcomes: tuple[tuple[tuple[int, ...], int], ...] = field(default=())

    @staticmethod
    def create(space: PhaseSpace, V: Submodule, w) -> "EpistemicState":
        if (V.d, V.m) != (space.d, space.m):
            raise MixedModulus("submodule does not live in the given phase space")
        wv = space.point(w)
        support_sub = complement(V)
        canonical = ModVector(support_sub.reduce(wv), space.d)
        outcomes = tuple(
            (g, ModVector(g, space.d).dot(canonical)) for g in V.rows
        )
        return EpistemicState(space, V, canonical, outcomes)

    @staticmethod
    def nothing_known(space: PhaseSpace) -> "EpistemicState":
        return EpistemicState.create(space, Submodule.zero(space.d, space.m), space.zero())

    def support_submodule(self) -> Submodule:
        return complement(self.V)

    def support_size(self) -> int:
        return self.support_submodule().size()


@dataclass(frozen=True, slots=True)
class ValidationReport:
    ok: bool
    violation: str | None = None


def validate(state: EpistemicState) -> ValidationReport:
    """Check isotropy of V, canonical form of V and w, and outcome consistency.

    Reports the first violated invariant instead of raising.
    """
    space, V, w = state.space, state.V, state.w
    if (V.d, V.m) != (space.d, space.m):
        return ValidationReport(False, "submodule ambient does not match the phase space")
    if len(w) != space.m or w.d != space.d:
        return ValidationReport(False, "shift vector does not match the phase space")
    canonical_V = Submodule.span(V.rows, d=V.d, m=V.m)
    if canonical_V != V:
        return ValidationReport(False, "generator matrix is not in canonical form")
    rows = [ModVector(r, space.d) for r in V.rows]
    for i, a in enumerate(rows):
        for b in rows[i:]:
            s = symplectic_product(a, b)
            if s != 0:
                return ValidationReport(
                    False,
                    f"known variables are not jointly knowable: "
                    f"<{a.entries}, {b.entries}> = {s} != 0",
                )
    support_sub = complement(V)
    if tuple(support_sub.reduce(w)) != w.entries:
        return ValidationReport(False, "shift vector is not the canonical coset representative")
    for gen, sigma in state.known_outcomes:
        if ModVector(gen, space.d).dot(w) != sigma:
            return ValidationReport(
                False, f"stored outcome for generator {gen} disagrees with the shift vector"
            )
    return ValidationReport(True)


def ontic_support(
    state: EpistemicState, guard: int = ENUMERATION_GUARD
) -> frozenset[tuple[int, ...]]:
    """The exact set of ontic states consistent with the epistemic state:
    V_perp + w."""
    return state.support_submodule().coset(state.w, guard)


@dataclass(frozen=True, slots=True)
class EpistemicDistribution:
    """Uniform distribution over the support; weights are exact rationals."""

    space: PhaseSpace
    prob: tuple[tuple[tuple[int, ...], Fraction], ...]

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.prob)

    def total(self) -> Fraction:
        return sum((p for _, p in self.prob), Fraction(0))


def distribution(
    state: EpistemicState, guard: int = ENUMERATION_GUARD
) -> EpistemicDistribution:
    """Uniform weight 1/|V_perp| on each supported point.  For maximal
    isotropic V this reduces to the 1/d^n textbook weight; the general form
    is what makes smaller V (e.g. the nothing-known state) normalise."""
    support = sorted(ontic_support(state, guard))
    weight = Fraction(1, len(support))
    return EpistemicDistribution(state.space, tuple((pt, weight) for pt in support))


UNKNOWN = None


def known_value(state: EpistemicState, obs: Observable) -> int | None:
    """sigma^T w when obs is a known variable (obs in V); None otherwise."""
    if obs.sigma.d != state.space.d or len(obs.sigma) != state.space.m:
        raise DimensionMismatch("observable lives in a different phase space")
    if obs.sigma.entries in state.V:
        return evaluate(obs, state.w)
    return UNKNOWN


def state_to_dict(state: EpistemicState) -> dict:
    """JSON document (schema v1) for an epistemic state."""
    return {
        "version": "v1",
        "d": state.space.d,
        "n": state.space.n,
        "V": [list(r) for r in state.V.rows],
        "w": list(state.w.entries),
    }


def state_from_dict(doc: dict) -> EpistemicState:
    """Parse the v1 JSON schema; generators are Howell-reduced and w is
    canonicalised on load, so hand-written documents are accepted."""
    version = doc.get("version", "v1")
    if version != "v1":
        raise MixedModulus(f"unsupported state schema version: {version}")
    try:
        d, n = int(doc["d"]), int(doc["n"])
        rows = [tuple(int(x) for x in row) for row in doc.get("V", [])]
        w = tuple(int(x) for x in doc["w"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MixedModulus(f"malformed state document: {exc}") from exc
    space = PhaseSpace(d, n)
    if any(len(r) != space.m for r in rows):
        raise MixedModulus("generator rows must have length 2n")
    V = Submodule.span(rows, d=d, m=space.m)
    return EpistemicState.create(space, V, w)


def gamma_vector(obs: Observable) -> ModVector | None:
    """A vector gamma with sigma^T gamma = 1; exists iff obs is fine-graining.

    This is the removal/shift helper the update rules build on; computed by
    the linear solver so prime and non-prime d share one code path.
    """
    sol = solve_linear([obs.sigma], ModVector((1,), obs.d))
    if sol is None:
        return None
    return sol[0]
