"""Fine-/coarse-graining classification of observables and the decomposition
of a coarse observable into its fine-graining branches.

An observable is fine-graining (full spectrum) iff the gcd of its
coefficients with d is 1; otherwise that gcd is the degeneracy D, the image
of the value map is D*Z_d, and the observable factors as D times a fine
observable.  The anti-degeneracy C = d/D labels the spacing of the fine
branch outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidOutcome, NotCoarse, ZeroObservable
from .states import Observable, evaluate, observable
from .zmod import ModVector, modinv, solve_linear


class Kind(Enum):
    FINE = "fine"
    COARSE = "coarse"


@dataclass(frozen=True, slots=True)
class GrainingInfo:
    kind: Kind
    D: int
    Dbar: int
    C: int
    sigma_fg: Observable
    v: ModVector | None  # generator of the degeneracy subspace, None when fine

    @property
    def is_fine(self) -> bool:
        return self.kind is Kind.FINE


def _radical(n: int) -> int:
    out = 1
    k = 2
    while k * k <= n:
        if n % k == 0:
            out *= k
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out *= n
    return out


def _fine_division(entries: tuple[int, ...], D: int, d: int) -> tuple[int, ...]:
    """A full-spectrum vector t with D*t == entries componentwise mod d.

    Componentwise integer division can leave a common factor (e.g. (4,4)
    mod 6 gives (2,2)); the quotient is only determined mod C = d/D, and a
    valid fine representative always exists: primes dividing C are already
    handled (otherwise D would not be the full gcd), and for the remaining
    primes the first component can be moved freely by multiples of C.
    """
    t = tuple(e // D for e in entries)
    if math.gcd(*t, d) == 1:
        return t
    C = d // D
    for k in range(1, d):
        cand = ((t[0] + C * k) % d,) + t[1:]
        if math.gcd(*cand, d) == 1:
            return cand
    raise AssertionError(f"no fine division of {entries} mod {d}")  # unreachable


def classify(obs: Observable) -> GrainingInfo:
    """Fine iff gcd(coefficients, d) = 1; otherwise D = that gcd, C = d/D,
    sigma = D * sigma_fg, and v generates the degeneracy subspace with
    evaluate(sigma_fg, v) = C."""
    d = obs.d
    entries = obs.entries
    if not any(entries):
        raise ZeroObservable("cannot classify the zero observable")
    D = math.gcd(*entries, d)
    if D == 1:
        return GrainingInfo(Kind.FINE, 1, 1, 0, obs, None)
    C = d // D
    sigma_fg = observable(_fine_division(entries, D, d), d)
    # Prefer the closed-form v = C*sigma_fg; it evaluates to C*(sigma_fg.sigma_fg),
    # which can miss C when the self-product shares factors with d, in which
    # case any solution of sigma_fg^T v = C works.
    v = C * sigma_fg.sigma
    if evaluate(sigma_fg, v) != C:
        sol = solve_linear([sigma_fg.sigma], ModVector((C,), d))
        assert sol is not None  # sigma_fg is fine, so its value map is onto
        v = sol[0]
    return GrainingInfo(Kind.COARSE, D, _radical(D), C, sigma_fg, v)


def valid_outcomes(obs: Observable) -> list[int]:
    """The spectrum of obs: all of Z_d when fine, the multiples of D when coarse."""
    info = classify(obs)
    if info.is_fine:
        return list(range(obs.d))
    return [(info.D * k) % obs.d for k in range(obs.d // info.D)]


def fine_decomposition(
    obs: Observable, outcome_cg: int
) -> list[tuple[Observable, int, ModVector]]:
    """Branches (sigma_fg, sigma_j, r_j) whose supports partition the coarse
    level set {λ : sigma^T λ = outcome_cg}.

    The fine outcomes step by the anti-degeneracy C and the shifts step by
    the degeneracy vector v; D branches are needed (the radical-of-D count
    only matches for squarefree D).
    """
    info = classify(obs)
    if info.is_fine:
        raise NotCoarse(f"{obs.entries} mod {obs.d} is fine-graining")
    d = obs.d
    outcome_cg %= d
    if outcome_cg % info.D:
        raise InvalidOutcome(
            f"outcome {outcome_cg} is not a multiple of the degeneracy {info.D}"
        )
    sigma_0 = (outcome_cg // info.D) % d
    base = solve_linear([info.sigma_fg.sigma], ModVector((sigma_0,), d))
    assert base is not None  # fine value maps are onto
    r_0 = base[0]
    branches = []
    for j in range(info.D):
        r_j = r_0 + j * info.v
        sigma_j = (sigma_0 + j * info.C) % d
        branches.append((info.sigma_fg, sigma_j, r_j))
    return branches
