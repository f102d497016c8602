"""The four limit functors (torsion, completion, ideal transform and its
dual) with exact stabilization verdicts, plus the reduced/coreduced
predicates and torsion/complete classification.

Stabilization policy: over finite rings the ideal-power chain stabilizes and
verdicts are exact.  Over the infinite covers a value is only reported when
a provable certificate applies: for the monotone chains behind the torsion
and completion functors, equality of two consecutive stages forces equality
of all later ones, so the first repeat is final on any ring.  The transform
towers carry no such certificate over an infinite cover and report
NonStabilizing at the bound instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .modules import (
    FpModule,
    Morphism,
    Submodule,
    cokernel,
    colon_submodule,
    cyclic_module,
    free_module,
    ideal_multiple,
    identity_morphism,
    image,
    is_isomorphic,
    kernel,
    quotient_module,
    scalar_morphism,
    subquotient_map,
)
from .rings import Ideal, RingError, ideal_power, power_stabilization_index

DEFAULT_KMAX = 20


@dataclass(frozen=True)
class LimitResult:
    """Value of a limit functor plus stabilization evidence.

    stabilized_at is the first stage index from which every connecting map
    is an isomorphism; None means the search hit `bound` without a
    certificate and no value is asserted.
    """

    value: FpModule | None
    stabilized_at: int | None
    bound: int | None = None
    system_trace: tuple = field(default_factory=tuple)
    mittag_leffler: bool | None = None

    @property
    def stabilized(self):
        return self.stabilized_at is not None

    def verdict(self):
        if self.stabilized:
            return f"stabilized at {self.stabilized_at}"
        return f"NonStabilizing({self.bound})"


def is_morphism_iso(f: Morphism) -> bool:
    return kernel(f).module.is_zero and cokernel(f).is_zero


def _check(M: FpModule, I: Ideal):
    if M.ring != I.ring:
        raise RingError("ring mismatch")


def _closed_form(value: FpModule) -> LimitResult:
    return LimitResult(value=value, stabilized_at=1, system_trace=())


def torsion_gamma(M: FpModule, I: Ideal, k_max: int = DEFAULT_KMAX) -> LimitResult:
    """Direct limit of the chain (0 :_M I^k)."""
    _check(M, I)
    if I.is_zero:
        return _closed_form(M)
    if I.is_unit:
        return _closed_form(free_module(M.ring, 0))
    s = power_stabilization_index(I)
    horizon = s + 1 if s is not None else k_max + 1
    stages: list[Submodule] = []
    trace = []
    for k in range(1, horizon + 1):
        stage = colon_submodule(M, ideal_power(I, k))
        if stages:
            prev = stages[-1]
            conn = subquotient_map(
                prev.sq, stage.sq, _identity_rows(M.ring.cover, M.gens)
            )
            trace[-1] = (trace[-1][0], conn)
            if prev == stage:
                return LimitResult(
                    value=prev.module,
                    stabilized_at=k - 1,
                    system_trace=tuple(trace) + ((stage.module, None),),
                )
        stages.append(stage)
        trace.append((stage.module, None))
    return LimitResult(
        value=None, stabilized_at=None, bound=k_max, system_trace=tuple(trace)
    )


def completion_lambda(M: FpModule, I: Ideal, k_max: int = DEFAULT_KMAX) -> LimitResult:
    """Inverse limit of the surjective tower M/I^k M."""
    _check(M, I)
    if I.is_zero:
        return LimitResult(value=M, stabilized_at=1, mittag_leffler=True)
    if I.is_unit:
        return LimitResult(
            value=free_module(M.ring, 0), stabilized_at=1, mittag_leffler=True
        )
    s = power_stabilization_index(I)
    horizon = s + 1 if s is not None else k_max + 1
    subs: list[Submodule] = []
    quots: list[FpModule] = []
    trace = []
    for k in range(1, horizon + 1):
        sub = ideal_multiple(ideal_power(I, k), M)
        quot, _ = quotient_module(M, sub)
        if subs:
            conn = Morphism(quot, quots[-1], _identity_rows(M.ring.cover, M.gens))
            trace[-1] = (trace[-1][0], conn)
            if subs[-1] == sub:
                return LimitResult(
                    value=quots[-1],
                    stabilized_at=k - 1,
                    system_trace=tuple(trace) + ((quot, None),),
                    mittag_leffler=True,
                )
        subs.append(sub)
        quots.append(quot)
        trace.append((quot, None))
    return LimitResult(
        value=None,
        stabilized_at=None,
        bound=k_max,
        system_trace=tuple(trace),
        mittag_leffler=True,
    )


def _identity_rows(cover, n):
    z, o = cover.zero, cover.one
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def _scalar_rows(cover, n, c):
    z = cover.zero
    return [[c if i == j else z for j in range(n)] for i in range(n)]


def _connecting_scalar(ring, a_k, a_k1):
    """c with c * a_k = a_(k+1); exists since (a_(k+1)) is inside (a_k)."""
    c = ring.divide(a_k1.rep, a_k.rep)
    if c is None:
        raise RingError("ideal power chain is not descending")
    return c


def transform_D(M: FpModule, I: Ideal, k_max: int = DEFAULT_KMAX) -> LimitResult:
    """Direct limit of Hom(I^k, M), realized on the chain of submodules
    (0 :_M ann(a_k)) with multiplication connecting maps."""
    _check(M, I)
    ring = M.ring
    if I.is_zero:
        return _closed_form(free_module(ring, 0))
    if I.is_unit:
        return _closed_form(M)
    from .rings import annihilator

    s = power_stabilization_index(I)
    horizon = (s + 1) if s is not None else k_max
    stages = []
    maps = []
    gens = []
    for k in range(1, horizon + 1):
        a_k = ideal_power(I, k).gen
        gens.append(a_k)
        stages.append(colon_submodule(M, annihilator(ring, a_k)))
        if k >= 2:
            c = _connecting_scalar(ring, gens[-2], gens[-1])
            maps.append(
                subquotient_map(
                    stages[-2].sq, stages[-1].sq, _scalar_rows(ring.cover, M.gens, c)
                )
            )
    trace = tuple(
        (st.module, maps[i] if i < len(maps) else None) for i, st in enumerate(stages)
    )
    if s is None:
        return LimitResult(value=None, stabilized_at=None, bound=k_max, system_trace=trace)
    iso_flags = [is_morphism_iso(f) for f in maps]
    stab = len(stages)
    while stab >= 2 and iso_flags[stab - 2]:
        stab -= 1
    return LimitResult(value=stages[-1].module, stabilized_at=stab, system_trace=trace)


def cotransform_F(M: FpModule, I: Ideal, k_max: int = DEFAULT_KMAX) -> LimitResult:
    """Inverse limit of I^k (x) M, realized on the quotients M / ann(a_k) M
    with multiplication connecting maps."""
    _check(M, I)
    ring = M.ring
    if I.is_zero:
        return LimitResult(value=free_module(ring, 0), stabilized_at=1)
    if I.is_unit:
        return LimitResult(value=M, stabilized_at=1)
    from .rings import annihilator, ideal_of

    s = power_stabilization_index(I)
    horizon = (s + 1) if s is not None else k_max
    stages = []
    maps = []  # maps[k-1]: stage k+1 -> stage k
    gens = []
    for k in range(1, horizon + 1):
        a_k = ideal_power(I, k).gen
        gens.append(a_k)
        ann_k = annihilator(ring, a_k)
        quot, _ = quotient_module(M, ideal_multiple(ann_k, M))
        stages.append(quot)
        if k >= 2:
            c = _connecting_scalar(ring, gens[-2], gens[-1])
            maps.append(
                Morphism(stages[-1], stages[-2], _scalar_rows(ring.cover, M.gens, c))
            )
    trace = tuple(
        (st, maps[i] if i < len(maps) else None) for i, st in enumerate(stages)
    )
    ml = _images_stabilize(stages, maps)
    if s is None:
        return LimitResult(
            value=None, stabilized_at=None, bound=k_max, system_trace=trace,
            mittag_leffler=None,
        )
    iso_flags = [is_morphism_iso(f) for f in maps]
    stab = len(stages)
    while stab >= 2 and iso_flags[stab - 2]:
        stab -= 1
    return LimitResult(
        value=stages[-1], stabilized_at=stab, system_trace=trace, mittag_leffler=ml
    )


def _images_stabilize(stages, maps):
    """Mittag-Leffler check on the computed window: for each stage, images
    of the composite maps from later stages become constant."""
    for i in range(len(stages)):
        comp = None
        prev_img = None
        stable = True
        for j in range(i, len(maps)):
            comp = maps[j] if comp is None else comp.compose(maps[j])
            img = image(comp)
            if prev_img is not None:
                stable = prev_img == img
            prev_img = img
        if prev_img is not None and not stable:
            return False
    return True


def is_reduced(M: FpModule, I: Ideal) -> bool:
    """I^2 m = 0 forces I m = 0, i.e. (0:_M I^2) = (0:_M I)."""
    _check(M, I)
    return colon_submodule(M, ideal_power(I, 2)) == colon_submodule(M, I)


def is_coreduced(M: FpModule, I: Ideal) -> bool:
    """I^2 M = I M."""
    _check(M, I)
    return ideal_multiple(ideal_power(I, 2), M) == ideal_multiple(I, M)


def functor_class(M: FpModule, I: Ideal, k_max: int = DEFAULT_KMAX) -> dict:
    """torsion / torsionfree / complete flags (None when indeterminate)."""
    _check(M, I)
    gamma = torsion_gamma(M, I, k_max)
    lam = completion_lambda(M, I, k_max)
    out = {}
    if gamma.stabilized:
        out["torsion"] = is_isomorphic(gamma.value, M)
        out["torsionfree"] = gamma.value.is_zero
    else:
        out["torsion"] = None
        out["torsionfree"] = None
    out["complete"] = is_isomorphic(lam.value, M) if lam.stabilized else None
    return out
