"""Sharp measurements and the posterior update rules.

A sharp measurement is itself an epistemic object (V_pi, r): an isotropic
submodule of measured observables and a representative ontic vector
encoding the outcomes.  Updating a state (V, w):

  * commuting measurement: learn the measured generators; the posterior
    support is (V_perp + w) ∩ (V_pi_perp + r);
  * general measurement: first discard the part of V that fails to commute
    with the measurement, then learn: support
    (V_commute_perp + w) ∩ (V_pi_perp + r);
  * coarse observable: same shape with the coarse level set on the right,
    which splits into the union of fine-graining branches.

All three posteriors are computed exactly by solving the stacked linear
constraint system "retained generators keep their values, measured
generators take theirs": its solution set *is* the right-hand-side coset,
the particular solution is a valid shift vector w', and the kernel is the
posterior V'_perp.  Solving jointly rather than generator-by-generator with
individual gamma vectors sidesteps the cross-talk a bad gamma choice causes
when generators are not euclidean-orthogonal, and serves prime and
non-prime d with one code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CoarseGenerator,
    DimensionMismatch,
    ImpossibleOutcome,
    MixedModulus,
    NotCommuting,
)
from .graining import classify, fine_decomposition
from .states import (
    EpistemicState,
    Observable,
    PhaseSpace,
    observable,
    symplectic_product,
)
from .zmod import (
    ModVector,
    Submodule,
    all_vectors,
    complement,
    direct_sum,
    intersect,
    solve_linear,
    transversal,
)


@dataclass(frozen=True, slots=True)
class SharpMeasurement:
    """Measurement element (V_pi, r); sibling elements share V_pi and differ
    by the shift r (equivalently by the outcome assignment)."""

    space: PhaseSpace
    V_pi: Submodule
    r: ModVector

    @staticmethod
    def create(space: PhaseSpace, generators, r) -> "SharpMeasurement":
        V_pi = Submodule.span(generators, d=space.d, m=space.m)
        if (V_pi.d, V_pi.m) != (space.d, space.m):
            raise MixedModulus("measurement generators do not match the phase space")
        rv = space.point(r)
        return SharpMeasurement(space, V_pi, rv)

    def outcomes(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Outcome sigma'_i = Sigma'_i^T r per canonical generator."""
        return tuple(
            (g, ModVector(g, self.space.d).dot(self.r)) for g in self.V_pi.rows
        )

    def support(self) -> frozenset[tuple[int, ...]]:
        return complement(self.V_pi).coset(self.r)

    def generator_observables(self) -> list[Observable]:
        return [observable(g, self.space.d) for g in self.V_pi.rows]

    def has_coarse_generator(self) -> bool:
        return any(not classify(o).is_fine for o in self.generator_observables())


def measurement_from_observable(
    space: PhaseSpace, obs: Observable, outcome: int
) -> SharpMeasurement:
    """The element of the single-observable measurement with the given
    outcome; raises ImpossibleOutcome when the outcome is outside the
    spectrum (the element does not exist)."""
    sol = solve_linear([obs.sigma], ModVector((outcome,), space.d))
    if sol is None:
        raise ImpossibleOutcome(
            f"observable {obs.entries} mod {space.d} never takes the value {outcome}"
        )
    return SharpMeasurement.create(space, [obs.sigma], sol[0])


def measurement_elements(meas: SharpMeasurement) -> list[SharpMeasurement]:
    """One element per attainable joint outcome (coset of V_pi_perp in Omega).

    Fine measurements partition Omega into |V_pi| elements; coarse
    generators only reach outcomes divisible by their degeneracy, which is
    exactly what the attainable cosets produce.
    """
    space = meas.space
    perp = complement(meas.V_pi)
    reps: dict[tuple[int, ...], tuple[int, ...]] = {}
    gens = [ModVector(g, space.d) for g in meas.V_pi.rows]
    for pt in all_vectors(space.d, space.m):
        v = ModVector(pt, space.d)
        sig = tuple(g.dot(v) for g in gens)
        if sig not in reps:
            reps[sig] = perp.reduce(v)
    return [
        SharpMeasurement(space, meas.V_pi, ModVector(reps[sig], space.d))
        for sig in sorted(reps)
    ]


def split_commuting(
    state: EpistemicState, meas: SharpMeasurement
) -> tuple[Submodule, Submodule, list[tuple[int, ...]]]:
    """Decompose the state's known variables against the measurement.

    Returns (V_commute, V_other, coset_reps) with
      V_commute = {v in V : <Sigma', v> = 0 for every measurement generator},
      V_commute_perp = V_perp ⊕ V_other as sets, and
      coset_reps a transversal of V_perp inside V_commute_perp (these drive
      the randomisation sum of the Wigner-side update).
    """
    _check_same_space(state.space, meas.space)
    v_commute = intersect(state.V, complement(meas.V_pi, form="symplectic"))
    commute_perp = complement(v_commute)
    reps = transversal(commute_perp, complement(state.V))
    v_other = Submodule.span(reps, d=state.space.d, m=state.space.m)
    return v_commute, v_other, reps


def _solve_posterior(
    state: EpistemicState,
    retained: Submodule,
    meas_rows: tuple[tuple[int, ...], ...],
    r: ModVector,
) -> EpistemicState:
    """Posterior for "retained generators keep their values on w, measured
    generators take their values on r"; the solution coset is exactly
    (retained_perp + w) ∩ (V_pi_perp + r)."""
    space = state.space
    rows = list(retained.rows) + list(meas_rows)
    rhs = [ModVector(g, space.d).dot(state.w) for g in retained.rows] + [
        ModVector(g, space.d).dot(r) for g in meas_rows
    ]
    sol = solve_linear(rows, tuple(rhs), d=space.d, unknowns=space.m)
    if sol is None:
        raise ImpossibleOutcome(
            "the outcome has empty overlap with the state's support"
        )
    w_new, _kernel = sol
    v_new = direct_sum(retained, Submodule.span(meas_rows, d=space.d, m=space.m))
    return EpistemicState.create(space, v_new, w_new)


def update_commuting(state: EpistemicState, element: SharpMeasurement) -> EpistemicState:
    """Posterior after a commuting, fine measurement element: V' = V ⊕ V_pi
    and support (V_perp + w) ∩ (V_pi_perp + r)."""
    _check_same_space(state.space, element.space)
    _require_fine(element)
    for g in state.V.rows:
        for h in element.V_pi.rows:
            s = symplectic_product(
                ModVector(g, state.space.d), ModVector(h, state.space.d)
            )
            if s != 0:
                raise NotCommuting(
                    f"generators {g} and {h} have symplectic product {s}"
                )
    return _solve_posterior(state, state.V, element.V_pi.rows, element.r)


def update_general(state: EpistemicState, element: SharpMeasurement) -> EpistemicState:
    """Posterior after any fine measurement element: V' = V_commute ⊕ V_pi
    and support (V_commute_perp + w) ∩ (V_pi_perp + r).  Reduces to
    update_commuting when everything commutes."""
    _check_same_space(state.space, element.space)
    _require_fine(element)
    v_commute, _, _ = split_commuting(state, element)
    return _solve_posterior(state, v_commute, element.V_pi.rows, element.r)


def update_coarse(
    state: EpistemicState, meas: SharpMeasurement, outcome_cg: int | None = None
) -> EpistemicState:
    """Posterior after measuring a single coarse observable.

    The support is the union over fine-graining branches j of
    (V_commute_perp + w) ∩ (V_fg_perp + r_j), which collapses to the single
    coset (V_commute_perp + w) ∩ {λ : Sigma_cg^T λ = outcome}; the posterior
    is solved from that constraint system directly, and any branch's shift
    vector lands in the same coset.
    """
    _check_same_space(state.space, meas.space)
    if len(meas.V_pi.rows) != 1:
        raise CoarseGenerator(
            "coarse updates are defined for single-observable measurements"
        )
    sigma_cg = observable(meas.V_pi.rows[0], state.space.d)
    if outcome_cg is None:
        outcome_cg = sigma_cg.sigma.dot(meas.r)
    # fine_decomposition validates coarseness and divisibility of the outcome.
    fine_decomposition(sigma_cg, outcome_cg)
    v_commute, _, _ = split_commuting(state, meas)
    # Anchor the representative on the requested outcome rather than meas.r
    # so callers may pass any element of the same observable.
    sol = solve_linear([sigma_cg.sigma], ModVector((outcome_cg,), state.space.d))
    assert sol is not None  # divisibility was just validated
    return _solve_posterior(state, v_commute, (sigma_cg.entries,), sol[0])


def update(state: EpistemicState, element: SharpMeasurement) -> EpistemicState:
    """Dispatch on graining: fine elements use the general rule, a single
    coarse observable uses the coarse rule."""
    if element.has_coarse_generator():
        return update_coarse(state, element)
    return update_general(state, element)


def outcome_probabilities(
    state: EpistemicState, meas: SharpMeasurement
) -> list[tuple[SharpMeasurement, Fraction]]:
    """Exact outcome distribution: |support ∩ element support| / |support|.

    The overlap size is computed from the stacked constraint system's kernel
    rather than by enumeration, so the probabilities stay exact at any d.
    """
    _check_same_space(state.space, meas.space)
    space = state.space
    support_size = state.support_size()
    out = []
    for element in measurement_elements(meas):
        rows = list(state.V.rows) + list(element.V_pi.rows)
        rhs = [ModVector(g, space.d).dot(state.w) for g in state.V.rows] + [
            ModVector(g, space.d).dot(element.r) for g in element.V_pi.rows
        ]
        sol = solve_linear(rows, tuple(rhs), d=space.d, unknowns=space.m)
        overlap = 0 if sol is None else sol[1].size()
        out.append((element, Fraction(overlap, support_size)))
    return out


def probability_of(state: EpistemicState, element: SharpMeasurement) -> Fraction:
    space = state.space
    rows = list(state.V.rows) + list(element.V_pi.rows)
    rhs = [ModVector(g, space.d).dot(state.w) for g in state.V.rows] + [
        ModVector(g, space.d).dot(element.r) for g in element.V_pi.rows
    ]
    sol = solve_linear(rows, tuple(rhs), d=space.d, unknowns=space.m)
    if sol is None:
        return Fraction(0)
    return Fraction(sol[1].size(), state.support_size())


def _require_fine(element: SharpMeasurement) -> None:
    for obs in element.generator_observables():
        if not classify(obs).is_fine:
            raise CoarseGenerator(
                f"generator {obs.entries} mod {obs.d} is coarse; use update_coarse"
            )


def _check_same_space(a: PhaseSpace, b: PhaseSpace) -> None:
    if a != b:
        raise DimensionMismatch(f"phase spaces differ: {a} vs {b}")
