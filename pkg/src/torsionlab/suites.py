"""Executable audits: each suite samples instances, tests the hypotheses of
one batch of statements, tests the conclusions exactly when the hypotheses
hold, and emits confirmations or counterexample payloads.

Every verdict is reproducible from (seed, config) alone, and every
confirmed isomorphism compares values produced by distinct code paths
(tower vs direct formula, quotient vs tensor presentation, ...).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .covers import parse_poly
from .functors import (
    completion_lambda,
    cotransform_F,
    functor_class,
    is_coreduced,
    is_morphism_iso,
    is_reduced,
    torsion_gamma,
)
from .homology import (
    DEFAULT_DEGREE,
    dimension_bounds,
    ext,
    local_cohomology,
    local_homology,
    tor,
)
from .modules import (
    FpModule,
    Morphism,
    classify,
    cokernel,
    colon_submodule,
    cyclic_module,
    direct_sum,
    free_module,
    hom_module,
    ideal_multiple,
    identity_morphism,
    image,
    invariant_factors,
    is_isomorphic,
    kernel,
    module_from_presentation,
    quotient_module,
    restrict_scalars,
    subquotient_map,
    tensor_module,
)
from .rings import (
    Ideal,
    Ring,
    RingElement,
    annihilator,
    exact_zero_divisor_pairs,
    ideal_of,
    ideal_power,
    is_idempotent,
    make_ring,
    power_stabilization_index,
    quotient_ring,
)

DEFAULT_KMAX = 20


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class InstanceRecord:
    suite: str
    proposition: str
    ring: str
    ideal: str
    modules: tuple
    hypotheses: tuple  # sorted (name, bool) pairs
    conclusion: str  # pass | fail | skip | indeterminate
    witness: tuple = field(default_factory=tuple)  # sorted (key, value) pairs

    def sort_key(self):
        return (self.proposition, self.ring, self.ideal, self.modules, self.witness)

    def to_dict(self):
        return {
            "suite": self.suite,
            "proposition": self.proposition,
            "ring": self.ring,
            "ideal": self.ideal,
            "modules": list(self.modules),
            "hypotheses": {k: v for k, v in self.hypotheses},
            "conclusion": self.conclusion,
            "witness": {k: v for k, v in self.witness},
        }


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    config: tuple
    records: tuple

    @property
    def counts(self):
        out = {}
        for r in self.records:
            c = out.setdefault(
                r.proposition, {"pass": 0, "fail": 0, "skip": 0, "indeterminate": 0}
            )
            c[r.conclusion] += 1
        return out

    @property
    def failures(self):
        return [r for r in self.records if r.conclusion == "fail"]

    @property
    def indeterminates(self):
        return [r for r in self.records if r.conclusion == "indeterminate"]

    def to_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "config": {k: v for k, v in self.config},
            "instances": len(self.records),
            "counts": self.counts,
            "records": [r.to_dict() for r in self.records],
        }


def _record(suite, prop, ring, ideal, modules, hyps, conclusion, witness=()):
    return InstanceRecord(
        suite=suite,
        proposition=prop,
        ring=str(ring),
        ideal=str(ideal),
        modules=tuple(modules),
        hypotheses=tuple(sorted(hyps.items())),
        conclusion=conclusion,
        witness=tuple(sorted(witness.items() if isinstance(witness, dict) else witness)),
    )


def _finish(suite, seed, config, records):
    return SuiteReport(
        suite=suite,
        seed=seed,
        config=tuple(sorted(config.items())),
        records=tuple(sorted(records, key=lambda r: r.sort_key())),
    )


# ---------------------------------------------------------------------------
# instance grids and samplers


def default_rings(max_n: int = 60, poly_degrees=(1, 2, 3, 4)):
    rings = [make_ring(f"Z/{n}") for n in range(2, max_n + 1)]
    for e in poly_degrees:
        rings.append(make_ring(f"GF(2)[x]/(x^{e})" if e > 1 else "GF(2)[x]/(x)"))
    return rings


def ring_ideals(ring: Ring):
    return [
        ideal_of(ring, [RingElement(ring, d)]) for d in ring.canonical_ideal_gens()
    ]


def _random_element(ring: Ring, rng: random.Random):
    cover = ring.cover
    if ring.cover_kind == "Z":
        return rng.randrange(ring.modulus)
    d = cover.deg(ring.modulus)
    return cover.poly([rng.randrange(cover.p) for _ in range(max(d, 1))])


def sample_modules(ring: Ring, count: int, rng: random.Random):
    """Deterministic module sampler: one free module, one random cyclic,
    then random small presentations."""
    mods = [free_module(ring, 1)]
    divisors = ring.canonical_ideal_gens()
    if count > 1:
        mods.append(cyclic_module(ring, RingElement(ring, rng.choice(divisors))))
    while len(mods) < count:
        g = rng.choice((1, 2, 2))
        r = rng.randrange(0, 3)
        rows = [[_random_element(ring, rng) for _ in range(r)] for _ in range(g)]
        mods.append(module_from_presentation(ring, rows))
    return mods[:count]


def serialize_module(M: FpModule):
    cover = M.ring.cover
    return (
        "coker["
        + ";".join(",".join(cover.format(x) for x in row) for row in M.rel)
        + f"]g{M.gens}"
    )


@dataclass
class SuiteConfig:
    max_n: int = 60
    poly_degrees: tuple = (1, 2, 3, 4)
    rings: tuple | None = None  # explicit ring spec strings override the grid
    modules_per_instance: int = 3
    degree: int = 3
    kmax: int = DEFAULT_KMAX
    seed: int = 0

    def ring_list(self):
        if self.rings is not None:
            return [make_ring(s) for s in self.rings]
        return default_rings(self.max_n, self.poly_degrees)

    def as_dict(self):
        return {
            "max_n": self.max_n,
            "poly_degrees": list(self.poly_degrees),
            "rings": list(self.rings) if self.rings is not None else None,
            "modules_per_instance": self.modules_per_instance,
            "degree": self.degree,
            "kmax": self.kmax,
            "seed": self.seed,
        }


_CLASSIFY_CACHE: dict = {}


def _classify(M: FpModule):
    hit = _CLASSIFY_CACHE.get(M)
    if hit is None:
        hit = classify(M)
        _CLASSIFY_CACHE[M] = hit
    return hit


def ideal_as_module(I: Ideal) -> FpModule:
    """The ideal I viewed as a module (isomorphic to R/ann(gen))."""
    return ideal_multiple(I, free_module(I.ring, 1)).module


# ---------------------------------------------------------------------------
# representability suite


def representability_instance(ring, I, M, kmax=DEFAULT_KMAX, suite="representability"):
    recs = []
    mser = (serialize_module(M),)
    red = is_reduced(M, I)
    cor = is_coreduced(M, I)
    cls = _classify(M)
    inj = bool(cls["injective"])
    flat = cls["flat"]

    gamma = torsion_gamma(M, I, kmax)
    lam = completion_lambda(M, I, kmax)

    hyp = {"reduced": red}
    if red:
        hom_side = hom_module(cyclic_module(ring, I), M)[0]
        ok = gamma.stabilized and is_isomorphic(gamma.value, hom_side)
        recs.append(
            _record(
                suite, "torsion_representable", ring, I, mser, hyp,
                "pass" if ok else "fail",
                {"gamma": str(gamma.value), "hom": str(hom_side)},
            )
        )
    else:
        recs.append(_record(suite, "torsion_representable", ring, I, mser, hyp, "skip"))

    hyp = {"coreduced": cor}
    if cor:
        tens_side = tensor_module(cyclic_module(ring, I), M)
        ok = lam.stabilized and is_isomorphic(lam.value, tens_side)
        recs.append(
            _record(
                suite, "completion_corepresentable", ring, I, mser, hyp,
                "pass" if ok else "fail",
                {"lambda": str(lam.value), "tensor": str(tens_side)},
            )
        )
    else:
        recs.append(
            _record(suite, "completion_corepresentable", ring, I, mser, hyp, "skip")
        )

    hyp = {"injective": inj, "reduced": red}
    if inj and red:
        from .functors import transform_D

        d_res = transform_D(M, I, kmax)
        hom_side = hom_module(ideal_as_module(I), M)[0]
        ok = d_res.stabilized and is_isomorphic(d_res.value, hom_side)
        recs.append(
            _record(
                suite, "transform_representable", ring, I, mser, hyp,
                "pass" if ok else "fail",
                {"transform": str(d_res.value), "hom": str(hom_side)},
            )
        )
    else:
        recs.append(
            _record(suite, "transform_representable", ring, I, mser, hyp, "skip")
        )

    hyp = {"flat": flat, "coreduced": cor}
    if flat and cor:
        f_res = cotransform_F(M, I, kmax)
        tens_side = tensor_module(ideal_as_module(I), M)
        ok = f_res.stabilized and is_isomorphic(f_res.value, tens_side)
        recs.append(
            _record(
                suite, "cotransform_corepresentable", ring, I, mser, hyp,
                "pass" if ok else "fail",
                {"cotransform": str(f_res.value), "tensor": str(tens_side)},
            )
        )
        lam_of_f = completion_lambda(f_res.value, I, kmax)
        ok2 = lam_of_f.stabilized and lam_of_f.value.is_zero
        recs.append(
            _record(
                suite, "completion_of_cotransform_vanishes", ring, I, mser, hyp,
                "pass" if ok2 else "fail", {"lambda_of_F": str(lam_of_f.value)},
            )
        )
    else:
        recs.append(
            _record(suite, "cotransform_corepresentable", ring, I, mser, hyp, "skip")
        )
        recs.append(
            _record(
                suite, "completion_of_cotransform_vanishes", ring, I, mser, hyp, "skip"
            )
        )

    # the torsion functor is a radical on this ring class: no hypothesis
    if gamma.stabilized:
        sub = colon_submodule(M, ideal_power(I, gamma.stabilized_at))
        quot, _ = quotient_module(M, sub)
        again = torsion_gamma(quot, I, kmax)
        ok = again.stabilized and again.value.is_zero
        recs.append(
            _record(
                suite, "torsion_is_radical", ring, I, mser, {},
                "pass" if ok else "fail", {"second_torsion": str(again.value)},
            )
        )
    else:
        recs.append(
            _record(suite, "torsion_is_radical", ring, I, mser, {}, "indeterminate")
        )
    return recs


def suite_representability(config: SuiteConfig | None = None) -> SuiteReport:
    cfg = config or SuiteConfig()
    records = []
    for ring in cfg.ring_list():
        rng = random.Random(f"{cfg.seed}:rep:{ring}")
        mods = sample_modules(ring, cfg.modules_per_instance, rng)
        for I in ring_ideals(ring):
            for M in mods:
                records.extend(representability_instance(ring, I, M, cfg.kmax))
    return _finish("representability", cfg.seed, cfg.as_dict(), records)


# ---------------------------------------------------------------------------
# exact sequence suite


def _transform_stage(M, I):
    """(a_star, submodule (0:_M ann(a_star))) at the stabilized power."""
    ring = M.ring
    s = power_stabilization_index(I)
    a = ideal_power(I, s).gen
    return a, colon_submodule(M, annihilator(ring, a))


def exact_sequences_instance(ring, I, M, kmax=DEFAULT_KMAX, suite="exact_sequences"):
    from .functors import transform_D

    recs = []
    mser = (serialize_module(M),)
    cls = _classify(M)
    inj = bool(cls["injective"])
    flat = cls["flat"]

    hyp = {"injective": inj}
    if inj:
        s = power_stabilization_index(I)
        gamma_sub = colon_submodule(M, ideal_power(I, s))
        a_star, stage = _transform_stage(M, I)
        cover = ring.cover
        cols = []
        ok = True
        for j in range(M.gens):
            col = [cover.zero] * M.gens
            col[j] = a_star.rep
            y = stage.sq.coords(col)
            if y is None:
                ok = False
                break
            cols.append(y)
        if ok:
            rows = tuple(
                tuple(cols[j][i] for j in range(M.gens))
                for i in range(stage.module.gens)
            )
            unit = Morphism(M, stage.module, rows)
            d_value = transform_D(M, I, kmax).value
            quot, _ = quotient_module(M, gamma_sub)
            ok = (
                kernel(unit) == gamma_sub
                and cokernel(unit).is_zero
                and is_isomorphic(d_value, quot)
            )
        recs.append(
            _record(
                suite, "transform_exact_sequence", ring, I, mser, hyp,
                "pass" if ok else "fail",
                {"gamma": str(gamma_sub.module), "transform": str(stage.module)},
            )
        )

        fc = functor_class(M, I, kmax)
        d_value = transform_D(M, I, kmax).value
        ok2 = (fc["torsion"] == d_value.is_zero) and (
            fc["torsionfree"] == is_isomorphic(d_value, M)
        )
        recs.append(
            _record(
                suite, "transform_detects_torsion", ring, I, mser, hyp,
                "pass" if ok2 else "fail", {"class": str(fc)},
            )
        )

        h1 = local_cohomology(1, I, d_value, kmax)
        ok3 = h1.stabilized and h1.value.is_zero
        recs.append(
            _record(
                suite, "transform_first_cohomology_vanishes", ring, I, mser,
                {"injective": inj, "noetherian": True},
                "pass" if ok3 else ("indeterminate" if not h1.stabilized else "fail"),
                {"h1": str(h1.value) if h1.stabilized else h1.verdict()},
            )
        )
    else:
        recs.append(
            _record(suite, "transform_exact_sequence", ring, I, mser, hyp, "skip")
        )
        recs.append(
            _record(suite, "transform_detects_torsion", ring, I, mser, hyp, "skip")
        )
        recs.append(
            _record(
                suite, "transform_first_cohomology_vanishes", ring, I, mser, hyp,
                "skip",
            )
        )

    f_res = cotransform_F(M, I, kmax)
    ml = bool(f_res.mittag_leffler)
    hyp = {"flat": flat, "mittag_leffler": ml}
    if flat and ml:
        s = power_stabilization_index(I)
        a_star = ideal_power(I, s).gen
        w = f_res.value
        counit = Morphism(
            w, M,
            tuple(
                tuple(a_star.rep if i == j else ring.cover.zero for j in range(M.gens))
                for i in range(M.gens)
            ),
        )
        img = image(counit)
        lam = completion_lambda(M, I, kmax)
        quot, _ = quotient_module(M, img)
        ok = (
            kernel(counit).module.is_zero
            and img == ideal_multiple(ideal_power(I, s), M)
            and is_isomorphic(lam.value, quot)
        )
        recs.append(
            _record(
                suite, "completion_exact_sequence", ring, I, mser, hyp,
                "pass" if ok else "fail",
                {"cotransform": str(w), "completion": str(lam.value)},
            )
        )
        complete = is_isomorphic(lam.value, M)
        ok2 = (complete == f_res.value.is_zero) and (
            lam.value.is_zero == is_morphism_iso(counit)
        )
        recs.append(
            _record(
                suite, "complete_iff_cotransform_vanishes", ring, I, mser, hyp,
                "pass" if ok2 else "fail",
                {"complete": complete, "F_zero": f_res.value.is_zero},
            )
        )
    else:
        recs.append(
            _record(suite, "completion_exact_sequence", ring, I, mser, hyp, "skip")
        )
        recs.append(
            _record(
                suite, "complete_iff_cotransform_vanishes", ring, I, mser, hyp, "skip"
            )
        )
    return recs


def suite_exact_sequences(config: SuiteConfig | None = None) -> SuiteReport:
    cfg = config or SuiteConfig()
    records = []
    for ring in cfg.ring_list():
        rng = random.Random(f"{cfg.seed}:exseq:{ring}")
        mods = sample_modules(ring, cfg.modules_per_instance, rng)
        for I in ring_ideals(ring):
            for M in mods:
                records.extend(exact_sequences_instance(ring, I, M, cfg.kmax))
    return _finish("exact_sequences", cfg.seed, cfg.as_dict(), records)


# ---------------------------------------------------------------------------
# main theorem suite


def idempotence_witness_instance(ring, I, suite="main_theorems"):
    """is_idempotent(I) iff the deterministic witnesses are reduced/coreduced."""
    idem = is_idempotent(I)
    gen_sq = I.gen * I.gen
    w1 = cyclic_module(ring, gen_sq)
    reduced_w = is_reduced(w1, I)
    w2 = direct_sum(w1, free_module(ring, 1))
    coreduced_w = is_coreduced(w2, I)
    ok = idem == reduced_w == coreduced_w
    return _record(
        suite, "idempotent_iff_witness_reduced", ring, I,
        (serialize_module(w1), serialize_module(w2)), {},
        "pass" if ok else "fail",
        {"idempotent": idem, "witness_reduced": reduced_w,
         "witness_coreduced": coreduced_w},
    )


def main_theorems_instance(ring, I, mods, degree, kmax=DEFAULT_KMAX, suite="main_theorems"):
    recs = [idempotence_witness_instance(ring, I, suite)]
    idem = is_idempotent(I)
    quot = cyclic_module(ring, I)
    hyp = {"idempotent": idem}
    if idem:
        for M in mods:
            mser = (serialize_module(M),)
            degs_ok = []
            for i in range(degree + 1):
                lc = local_cohomology(i, I, M, kmax)
                degs_ok.append(
                    lc.stabilized
                    and lc.stabilized_at == 1
                    and is_isomorphic(lc.value, ext(i, quot, M))
                )
            recs.append(
                _record(
                    suite, "cohomology_matches_ext", ring, I, mser, hyp,
                    "pass" if all(degs_ok) else "fail",
                    {"degrees": degree, "per_degree": degs_ok},
                )
            )
            degs_ok = []
            for i in range(degree + 1):
                lh = local_homology(i, I, M, kmax)
                degs_ok.append(
                    lh.stabilized
                    and lh.stabilized_at == 1
                    and is_isomorphic(lh.value, tor(i, quot, M))
                )
            recs.append(
                _record(
                    suite, "homology_matches_tor", ring, I, mser, hyp,
                    "pass" if all(degs_ok) else "fail",
                    {"degrees": degree, "per_degree": degs_ok},
                )
            )

        rep = dimension_bounds(ring, I, mods, degree, kmax)
        pd, fd = rep.pd_bound, rep.fd_bound
        cd, hd = rep.cd_family["value"], rep.hd_family["value"]
        if I.is_unit:
            ok = pd["value"] is None and fd["value"] is None and cd is None and hd is None
        else:
            # cd/hd are family lower bounds: None is consistent when the
            # sampled family happens not to witness degree 0
            ok = (
                pd == {"exact": True, "value": 0}
                and fd == {"exact": True, "value": 0}
                and cd in (0, None)
                and hd in (0, None)
            )
        recs.append(
            _record(
                suite, "dimensions_agree", ring, I,
                tuple(serialize_module(M) for M in mods), hyp,
                "pass" if ok else "fail",
                {"pd": str(pd), "fd": str(fd), "cd": str(cd), "hd": str(hd)},
            )
        )

        proj = _classify(quot)["projective"]
        vanish_c = all(
            local_cohomology(i, I, M, kmax).value.is_zero
            for M in mods
            for i in range(1, degree + 1)
        )
        vanish_h = all(
            local_homology(i, I, M, kmax).value.is_zero
            for M in mods
            for i in range(1, degree + 1)
        )
        recs.append(
            _record(
                suite, "projective_iff_cohomology_vanishes", ring, I,
                tuple(serialize_module(M) for M in mods), hyp,
                "pass" if (proj == vanish_c) else "fail",
                {"projective": proj, "vanishing": vanish_c},
            )
        )
        recs.append(
            _record(
                suite, "flat_iff_homology_vanishes", ring, I,
                tuple(serialize_module(M) for M in mods), hyp,
                "pass" if (_classify(quot)["flat"] == vanish_h) else "fail",
                {"flat": _classify(quot)["flat"], "vanishing": vanish_h},
            )
        )
    else:
        recs.append(
            _record(suite, "cohomology_matches_ext", ring, I, (), hyp, "skip")
        )
        recs.append(_record(suite, "homology_matches_tor", ring, I, (), hyp, "skip"))

    # projective cyclics + reduced ring force every module coreduced
    quot2 = cyclic_module(ring, ideal_power(I, 2))
    hyp2 = {
        "quotient_projective": _classify(quot)["projective"],
        "quotient_sq_projective": _classify(quot2)["projective"],
        "ring_reduced": is_reduced(free_module(ring, 1), I),
    }
    if all(hyp2.values()):
        ok = all(is_coreduced(M, I) for M in mods)
        recs.append(
            _record(
                suite, "projective_cyclics_force_coreduced", ring, I,
                tuple(serialize_module(M) for M in mods), hyp2,
                "pass" if ok else "fail",
            )
        )
    else:
        recs.append(
            _record(
                suite, "projective_cyclics_force_coreduced", ring, I, (), hyp2, "skip"
            )
        )
    return recs


def suite_main_theorems(config: SuiteConfig | None = None) -> SuiteReport:
    cfg = config or SuiteConfig()
    records = []
    for ring in cfg.ring_list():
        rng = random.Random(f"{cfg.seed}:main:{ring}")
        mods = sample_modules(ring, cfg.modules_per_instance, rng)
        for I in ring_ideals(ring):
            records.extend(
                main_theorems_instance(ring, I, mods, cfg.degree, cfg.kmax)
            )
    return _finish("main_theorems", cfg.seed, cfg.as_dict(), records)


# ---------------------------------------------------------------------------
# coherence suite


COHERENCE_RINGS = (
    "Z/4", "Z/6", "Z/8", "Z/9", "Z/12", "Z/18", "Z/24", "Z/30",
    "GF(2)[x]/(x)", "GF(2)[x]/(x^2)", "GF(2)[x]/(x^3)",
)


def coherence_instance(ring, I, mods, rng, kmax=DEFAULT_KMAX, suite="coherence"):
    recs = []
    cyc = cyclic_module(ring, I)
    imod = ideal_as_module(I)
    s = power_stabilization_index(I)
    a_star = ideal_power(I, s).gen
    a1 = I.gen
    cover = ring.cover

    classes = {
        "torsion_on_reduced": [M for M in mods if is_reduced(M, I)],
        "completion_on_coreduced": [M for M in mods if is_coreduced(M, I)],
        "transform_on_injective_reduced": [
            M for M in mods if bool(_classify(M)["injective"]) and is_reduced(M, I)
        ],
        "cotransform_on_flat_coreduced": [
            M for M in mods if _classify(M)["flat"] and is_coreduced(M, I)
        ],
    }

    def eta_torsion(M):
        """Hom(R/I, M) -> Gamma(M): evaluation at the cyclic generator."""
        H, dec, _ = hom_module(cyc, M)
        sub = colon_submodule(M, ideal_power(I, torsion_gamma(M, I, kmax).stabilized_at))
        cols = []
        for k in range(H.gens):
            vec = [cover.one if t == k else cover.zero for t in range(H.gens)]
            phi = dec(vec)
            v = [phi.mat[i][0] for i in range(M.gens)]
            y = sub.sq.coords(v)
            if y is None:
                return None, None, None
            cols.append(y)
        rows = tuple(
            tuple(cols[j][i] for j in range(H.gens)) for i in range(sub.module.gens)
        )
        return H, sub, Morphism(H, sub.module, rows)

    for M in classes["torsion_on_reduced"]:
        H, sub, eta = eta_torsion(M)
        ok = eta is not None and is_morphism_iso(eta)
        recs.append(
            _record(
                suite, "torsion_natural_iso", ring, I, (serialize_module(M),),
                {"reduced": True},
                "pass" if ok else "fail",
                {"hom": str(H), "gamma": str(sub.module if sub else None)},
            )
        )
        # closure: the value embeds in M
        embeds = sub is not None and kernel(sub.embedding).module.is_zero
        recs.append(
            _record(
                suite, "torsion_value_finitely_generated", ring, I,
                (serialize_module(M),), {"reduced": True},
                "pass" if embeds else "fail",
            )
        )

    pairs = [
        (M, N)
        for M in classes["torsion_on_reduced"]
        for N in classes["torsion_on_reduced"]
    ]
    for M, N in pairs[:6]:
        H_M, dec_M, _ = hom_module(cyc, M)
        _, _, enc_N = hom_module(cyc, N)
        if H_M.is_zero:
            continue
        Hmn, dec_mn, _ = hom_module(M, N)
        if Hmn.is_zero:
            continue
        f = dec_mn([_random_element(ring, rng) for _ in range(Hmn.gens)])
        _, sub_M, eta_M = eta_torsion(M)
        H_N2, sub_N, eta_N = eta_torsion(N)
        gamma_f = subquotient_map(sub_M.sq, sub_N.sq, [list(r) for r in f.mat])
        hom_f_cols = []
        for k in range(H_M.gens):
            vec = [cover.one if t == k else cover.zero for t in range(H_M.gens)]
            hom_f_cols.append(enc_N(f.compose(dec_M(vec))))
        hom_f = Morphism(
            H_M, H_N2,
            tuple(
                tuple(hom_f_cols[j][i] for j in range(H_M.gens))
                for i in range(H_N2.gens)
            ),
        )
        square_ok = gamma_f.compose(eta_M).same_map(eta_N.compose(hom_f))
        recs.append(
            _record(
                suite, "torsion_naturality_square", ring, I,
                (serialize_module(M), serialize_module(N)), {"reduced": True},
                "pass" if square_ok else "fail",
            )
        )

    for M in classes["completion_on_coreduced"]:
        lam = completion_lambda(M, I, kmax)
        t_side = tensor_module(cyc, M)
        eta = Morphism(t_side, lam.value, identity_morphism(M).mat)
        ok = is_morphism_iso(eta)
        recs.append(
            _record(
                suite, "completion_natural_iso", ring, I, (serialize_module(M),),
                {"coreduced": True}, "pass" if ok else "fail",
                {"tensor": str(t_side), "completion": str(lam.value)},
            )
        )
        sub = ideal_multiple(ideal_power(I, s), M)
        _, proj = quotient_module(M, sub)
        recs.append(
            _record(
                suite, "completion_value_finitely_generated", ring, I,
                (serialize_module(M),), {"coreduced": True},
                "pass" if cokernel(proj).is_zero else "fail",
            )
        )

    pairs = [
        (M, N)
        for M in classes["completion_on_coreduced"]
        for N in classes["completion_on_coreduced"]
    ]
    for M, N in pairs[:6]:
        Hmn, dec_mn, _ = hom_module(M, N)
        if Hmn.is_zero:
            continue
        f = dec_mn([_random_element(ring, rng) for _ in range(Hmn.gens)])
        lam_M = completion_lambda(M, I, kmax).value
        lam_N = completion_lambda(N, I, kmax).value
        lam_f = Morphism(lam_M, lam_N, f.mat)
        t_M = tensor_module(cyc, M)
        t_N = tensor_module(cyc, N)
        tf = Morphism(t_M, t_N, f.mat)
        eta_M = Morphism(t_M, lam_M, identity_morphism(M).mat)
        eta_N = Morphism(t_N, lam_N, identity_morphism(N).mat)
        ok = lam_f.compose(eta_M).same_map(eta_N.compose(tf))
        recs.append(
            _record(
                suite, "completion_naturality_square", ring, I,
                (serialize_module(M), serialize_module(N)), {"coreduced": True},
                "pass" if ok else "fail",
            )
        )

    def eta_transform(M):
        H, dec, _ = hom_module(imod, M)
        _, stage = _transform_stage(M, I)
        c = ring.divide(a_star.rep, a1.rep)
        cols = []
        for k in range(H.gens):
            vec = [cover.one if t == k else cover.zero for t in range(H.gens)]
            phi = dec(vec)
            v = [ring.mul(c, phi.mat[i][0]) for i in range(M.gens)]
            y = stage.sq.coords(v)
            if y is None:
                return None, None, None
            cols.append(y)
        rows = tuple(
            tuple(cols[j][i] for j in range(H.gens)) for i in range(stage.module.gens)
        )
        return H, stage, Morphism(H, stage.module, rows)

    for M in classes["transform_on_injective_reduced"]:
        H, stage, eta = eta_transform(M)
        ok = eta is not None and is_morphism_iso(eta)
        recs.append(
            _record(
                suite, "transform_natural_iso", ring, I, (serialize_module(M),),
                {"injective": True, "reduced": True}, "pass" if ok else "fail",
                {"hom": str(H), "transform": str(stage.module if stage else None)},
            )
        )

    for M in classes["cotransform_on_flat_coreduced"]:
        f_res = cotransform_F(M, I, kmax)
        t_side = tensor_module(imod, M)
        # W_star -> I (x) M: both are quotients of M^g by ann-multiples
        ann1 = annihilator(ring, a1)
        w1_sub = ideal_multiple(ann1, M)
        w1, _ = quotient_module(M, w1_sub)
        c = ring.divide(a_star.rep, a1.rep)
        comp = Morphism(
            f_res.value, w1,
            tuple(
                tuple(c if i == j else cover.zero for j in range(M.gens))
                for i in range(M.gens)
            ),
        )
        iso_t = Morphism(w1, t_side, identity_morphism(M).mat)
        eta = iso_t.compose(comp)
        ok = is_morphism_iso(eta)
        recs.append(
            _record(
                suite, "cotransform_natural_iso", ring, I, (serialize_module(M),),
                {"flat": True, "coreduced": True}, "pass" if ok else "fail",
                {"cotransform": str(f_res.value), "tensor": str(t_side)},
            )
        )
    return recs


def suite_coherence(config: SuiteConfig | None = None) -> SuiteReport:
    cfg = config or SuiteConfig(modules_per_instance=4)
    rings = (
        [make_ring(s) for s in cfg.rings]
        if cfg.rings is not None
        else [make_ring(s) for s in COHERENCE_RINGS]
    )
    records = []
    for ring in rings:
        rng = random.Random(f"{cfg.seed}:coh:{ring}")
        mods = sample_modules(ring, cfg.modules_per_instance, rng)
        for I in ring_ideals(ring):
            records.extend(coherence_instance(ring, I, mods, rng, cfg.kmax))
    return _finish("coherence", cfg.seed, cfg.as_dict(), records)


# ---------------------------------------------------------------------------
# descent suite


def regular_descent_instance(S, x_text, M, N, degree, suite="descent"):
    """Vanishing descent along a regular element: Ext/Tor over R = S/(x)
    vanish in degrees >= 1, so over S they vanish in degrees >= 2."""
    x = S.reduce(int(x_text) if S.cover_kind == "Z" else parse_poly(S.cover, x_text))
    R = quotient_ring(S, x)
    hyp_ext = all(ext(i, M, N).is_zero for i in range(1, degree + 1))
    hyp_tor = all(tor(i, M, N).is_zero for i in range(1, degree + 1))
    M_S = restrict_scalars(M, S, x)
    N_S = restrict_scalars(N, S, x)
    recs = []
    mser = (serialize_module(M), serialize_module(N))
    if hyp_ext:
        ok = all(ext(i, M_S, N_S).is_zero for i in range(2, degree + 1))
        recs.append(
            _record(
                suite, "ext_vanishing_descends", S, f"({x_text})", mser,
                {"ext_vanishes_over_quotient": True, "regular": True},
                "pass" if ok else "fail",
                {"quotient_ring": str(R), "ext1": str(ext(1, M_S, N_S))},
            )
        )
    else:
        recs.append(
            _record(
                suite, "ext_vanishing_descends", S, f"({x_text})", mser,
                {"ext_vanishes_over_quotient": False, "regular": True}, "skip",
            )
        )
    if hyp_tor:
        ok = all(tor(i, M_S, N_S).is_zero for i in range(2, degree + 1))
        recs.append(
            _record(
                suite, "tor_vanishing_descends", S, f"({x_text})", mser,
                {"tor_vanishes_over_quotient": True, "regular": True},
                "pass" if ok else "fail",
                {"quotient_ring": str(R), "tor1": str(tor(1, M_S, N_S))},
            )
        )
    else:
        recs.append(
            _record(
                suite, "tor_vanishing_descends", S, f"({x_text})", mser,
                {"tor_vanishes_over_quotient": False, "regular": True}, "skip",
            )
        )
    return recs


def ezd_descent_instance(S, pair, I, M, degree, kmax=DEFAULT_KMAX, suite="descent"):
    """Exact-zero-divisor instances: hypotheses over R = S/(x), Ext/Tor-level
    conclusions over S, plus the audit of both readings of the ideal."""
    ring_R = quotient_ring(S, pair.x)
    y_in_R = ring_R.element(pair.y.rep)
    recs = []
    mser = (serialize_module(M),)
    y_kills = ideal_multiple(ideal_of(ring_R, [y_in_R]), M).module.is_zero
    idem = is_idempotent(I)
    hyp_h = all(
        local_cohomology(i, I, M, kmax).value.is_zero for i in range(1, degree + 1)
    )
    hyps = {
        "yM_zero": y_kills,
        "ideal_idempotent": idem,
        "cohomology_vanishes_over_quotient": hyp_h,
    }
    if not (y_kills and idem and hyp_h):
        recs.append(
            _record(suite, "ezd_ext_level_conclusion", S, str(I), mser, hyps, "skip")
        )
    else:
        RI = cyclic_module(ring_R, I)
        RI_S = restrict_scalars(RI, S, pair.x)
        M_S = restrict_scalars(M, S, pair.x)
        hom_side = hom_module(RI_S, M_S)[0]
        ok = all(
            is_isomorphic(ext(i, RI_S, M_S), hom_side)
            for i in range(1, degree)
        )
        readings = _ideal_reading_audit(S, pair, I, M_S, RI_S, degree, kmax)
        recs.append(
            _record(
                suite, "ezd_ext_level_conclusion", S, str(I), mser, hyps,
                "pass" if ok else "fail",
                {"hom": str(hom_side), "readings": readings},
            )
        )
    hyp_hm = all(
        local_homology(i, I, M, kmax).value.is_zero for i in range(1, degree + 1)
    )
    hyps_t = {
        "yM_zero": y_kills,
        "ideal_idempotent": idem,
        "homology_vanishes_over_quotient": hyp_hm,
    }
    if not (y_kills and idem and hyp_hm):
        recs.append(
            _record(suite, "ezd_tor_level_conclusion", S, str(I), mser, hyps_t, "skip")
        )
    else:
        RI = cyclic_module(ring_R, I)
        RI_S = restrict_scalars(RI, S, pair.x)
        M_S = restrict_scalars(M, S, pair.x)
        tensor_side = tensor_module(RI_S, M_S)
        ok = all(
            is_isomorphic(tor(i, RI_S, M_S), tensor_side) for i in range(1, degree)
        )
        recs.append(
            _record(
                suite, "ezd_tor_level_conclusion", S, str(I), mser, hyps_t,
                "pass" if ok else "fail", {"tensor": str(tensor_side)},
            )
        )
    return recs


def _ideal_reading_audit(S, pair, I, M_S, RI_S, degree, kmax):
    """Which reading of the ideal (verbatim generator vs preimage) makes the
    tower-level conclusion hold over S; pure audit data."""
    hom_side = hom_module(RI_S, M_S)[0]
    out = []
    gen_lift = I.gen.rep
    for label, gens in (
        ("verbatim", [gen_lift]),
        ("preimage", [gen_lift, pair.x.rep]),
    ):
        I_S = ideal_of(S, [S.element(g) for g in gens])
        verdicts = []
        for i in range(1, degree):
            h = local_cohomology(i, I_S, M_S, kmax)
            if not h.stabilized:
                verdicts.append("indeterminate")
            else:
                verdicts.append(bool(is_isomorphic(h.value, hom_side)))
        if all(v is True for v in verdicts):
            holds = "holds"
        elif any(v == "indeterminate" for v in verdicts):
            holds = "indeterminate"
        else:
            holds = "fails"
        out.append(f"{label}:{holds}")
    return ",".join(out)


def suite_descent(config: SuiteConfig | None = None) -> SuiteReport:
    cfg = config or SuiteConfig(degree=5)
    records = []
    regular_grid = (("Z", ("2", "3")), ("GF(2)[x]", ("x", "x+1")))
    for s_text, xs in regular_grid:
        S = make_ring(s_text)
        for x_text in xs:
            x = int(x_text) if S.cover_kind == "Z" else parse_poly(S.cover, x_text)
            R = quotient_ring(S, x)
            rng = random.Random(f"{cfg.seed}:descent:{S}:{x_text}")
            pair_count = 20
            for _ in range(pair_count):
                M, N = sample_modules(R, 2, rng)
                records.extend(
                    regular_descent_instance(S, x_text, M, N, min(cfg.degree, 5))
                )
    ezd_grid = ("Z/9", "Z/25", "GF(2)[x]/(x^3)")
    for s_text in ezd_grid:
        S = make_ring(s_text)
        for pair in exact_zero_divisor_pairs(S):
            ring_R = quotient_ring(S, pair.x)
            ring_mod_y = quotient_ring(ring_R, pair.y.rep)
            rng = random.Random(f"{cfg.seed}:ezd:{S}:{pair.x}")
            mods = []
            for Mq in sample_modules(ring_mod_y, 10, rng):
                mods.append(
                    restrict_scalars(Mq, ring_R, ring_R.reduce(pair.y.rep))
                    if ring_mod_y != ring_R
                    else Mq
                )
            idems = [
                I for I in ring_ideals(ring_R) if is_idempotent(I)
            ]
            for I in idems:
                for M in mods:
                    records.extend(
                        ezd_descent_instance(S, pair, I, M, 4, cfg.kmax)
                    )
    return _finish("descent", cfg.seed, cfg.as_dict(), records)


# ---------------------------------------------------------------------------
# fuzz campaign and the full battery


def fuzz_campaign(seed: int, budget: int) -> SuiteReport:
    if budget < 0:
        raise ValueError("budget must be >= 0")
    rng = random.Random(f"fuzz:{seed}")
    records = []
    kinds = ("representability", "exact_sequences", "main_theorems")
    for _ in range(budget):
        kind = rng.choice(kinds)
        if rng.random() < 0.85:
            n = rng.randrange(2, 61)
            ring = make_ring(f"Z/{n}")
        else:
            e = rng.randrange(1, 5)
            ring = make_ring(f"GF(2)[x]/(x^{e})" if e > 1 else "GF(2)[x]/(x)")
        gens = ring.canonical_ideal_gens()
        I = ideal_of(ring, [RingElement(ring, rng.choice(gens))])
        M = sample_modules(ring, 3, rng)[rng.randrange(3)]
        if kind == "representability":
            records.extend(representability_instance(ring, I, M, suite="fuzz"))
        elif kind == "exact_sequences":
            records.extend(exact_sequences_instance(ring, I, M, suite="fuzz"))
        else:
            records.extend(
                main_theorems_instance(ring, I, [M], 2, suite="fuzz")
            )
    return _finish("fuzz", seed, {"budget": budget}, records)


SUITE_RUNNERS = {
    "representability": suite_representability,
    "exact_sequences": suite_exact_sequences,
    "main_theorems": suite_main_theorems,
    "coherence": suite_coherence,
    "descent": suite_descent,
}


def run_suite(name: str, config: SuiteConfig | None = None):
    """Run one named suite, or all of them in order for name == 'all'."""
    if name == "all":
        return [fn(config) for fn in SUITE_RUNNERS.values()]
    if name not in SUITE_RUNNERS:
        raise ValueError(f"unknown suite {name!r}")
    return [SUITE_RUNNERS[name](config)]
