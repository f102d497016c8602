"""Session files: a line-oriented grammar for declaring rings, ideals and
modules and running computations and audit suites over them, with
deterministic text/json report emission.

Exit status contract: 0 all pass, 1 usage/parse error, 2 some
NonStabilizing/indeterminate verdict, 3 suite counterexample found.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field

from . import __version__
from .functors import (
    DEFAULT_KMAX,
    completion_lambda,
    cotransform_F,
    is_coreduced,
    is_reduced,
    torsion_gamma,
    transform_D,
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
    cyclic_module,
    free_module,
    module_from_presentation,
)
from .rings import Ring, RingError, make_ring, parse_element, parse_ideal
from .suites import SUITE_RUNNERS, SuiteConfig, fuzz_campaign, run_suite

SUITE_NAMES = tuple(SUITE_RUNNERS) + ("fuzz", "all")

COMPUTE_LIMITS = {
    "gamma": torsion_gamma,
    "lambda": completion_lambda,
    "D": transform_D,
    "F": cotransform_F,
}


class SessionError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = f" (line {line}" + (f", col {col})" if col is not None else ")") if line else ""
        super().__init__(f"{message}{loc}")


@dataclass(frozen=True)
class Session:
    rings: tuple  # (name, Ring) in declaration order
    ideals: tuple  # (name, ideal, ring_name)
    modules: tuple  # (name, FpModule, ring_name)
    commands: tuple  # canonicalized command tuples

    def ring(self, name):
        for n, r in self.rings:
            if n == name:
                return r
        raise SessionError(f"undeclared ring {name!r}")

    def ideal(self, name):
        for n, i, _ in self.ideals:
            if n == name:
                return i
        raise SessionError(f"undeclared ideal {name!r}")

    def module(self, name):
        for n, m, _ in self.modules:
            if n == name:
                return m
        raise SessionError(f"undeclared module {name!r}")


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"


def _split_opts(tokens, line_no, allowed):
    """Separate trailing --key value options from positional tokens."""
    pos, opts = [], {}
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.startswith("--"):
            key = t[2:]
            if key not in allowed:
                raise SessionError(f"unknown option --{key}", line_no)
            if i + 1 >= len(tokens):
                raise SessionError(f"option --{key} needs a value", line_no)
            try:
                opts[key] = int(tokens[i + 1])
            except ValueError as exc:
                raise SessionError(f"option --{key} needs an integer", line_no) from exc
            i += 2
        else:
            pos.append(t)
            i += 1
    return pos, opts


def _parse_module_literal(ring, text, line_no, ring_lookup):
    text = text.strip()
    m = re.fullmatch(r"free\s+(\d+)", text)
    if m:
        return free_module(ring, int(m.group(1)))
    m = re.fullmatch(rf"quotient\s+({_NAME})\s*(\(.*\))", text)
    if m:
        qring = ring_lookup(m.group(1), line_no)
        ideal = parse_ideal(qring, m.group(2))
        return cyclic_module(qring, ideal)
    m = re.fullmatch(r"coker\s*\[(.*)\]", text)
    if m:
        body = m.group(1).strip()
        if not body:
            return free_module(ring, 0)
        if not (body.startswith("[") and body.endswith("]")):
            raise SessionError("coker literal needs [[...],[...]] rows", line_no)
        rows = []
        for row_text in body[1:-1].split("],["):
            row_text = row_text.strip()
            if not row_text:
                rows.append([])
                continue
            rows.append(
                [parse_element(ring, e).rep for e in row_text.split(",") if e.strip()]
            )
        width = max((len(r) for r in rows), default=0)
        if any(len(r) not in (0, width) for r in rows):
            raise SessionError("ragged coker rows", line_no)
        rows = [r + [ring.cover.zero] * (width - len(r)) for r in rows]
        return module_from_presentation(ring, rows)
    raise SessionError(f"bad module literal {text!r}", line_no)


def parse_session(text: str) -> Session:
    rings, ideals, modules, commands = [], [], [], []
    names = set()
    last_ring = None

    def ring_lookup(name, line_no):
        for n, r in rings:
            if n == name:
                return r
        raise SessionError(f"undeclared ring {name!r}", line_no)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        try:
            if head == "ring":
                m = re.fullmatch(rf"ring\s+({_NAME})\s*=\s*(\S+)", line)
                if not m:
                    raise SessionError("expected: ring <name> = <ring>", line_no)
                name = m.group(1)
                if name in names:
                    raise SessionError(f"duplicate name {name!r}", line_no)
                ring = make_ring(m.group(2))
                rings.append((name, ring))
                names.add(name)
                last_ring = ring
            elif head == "ideal":
                m = re.fullmatch(
                    rf"ideal\s+({_NAME})\s*=\s*(\(.*\))(?:\s+in\s+({_NAME}))?", line
                )
                if not m:
                    raise SessionError("expected: ideal <name> = (<gens>) [in <ring>]", line_no)
                name = m.group(1)
                if name in names:
                    raise SessionError(f"duplicate name {name!r}", line_no)
                if m.group(3):
                    ring = ring_lookup(m.group(3), line_no)
                    rname = m.group(3)
                elif last_ring is not None:
                    ring = last_ring
                    rname = rings[-1][0]
                else:
                    raise SessionError("ideal declared before any ring", line_no)
                ideals.append((name, parse_ideal(ring, m.group(2)), rname))
                names.add(name)
            elif head == "module":
                m = re.fullmatch(
                    rf"module\s+({_NAME})\s*=\s*(.+?)(?:\s+over\s+({_NAME}))?", line
                )
                if not m:
                    raise SessionError("expected: module <name> = <literal> [over <ring>]", line_no)
                name = m.group(1)
                if name in names:
                    raise SessionError(f"duplicate name {name!r}", line_no)
                if m.group(3):
                    ring = ring_lookup(m.group(3), line_no)
                    rname = m.group(3)
                elif last_ring is not None:
                    ring = last_ring
                    rname = rings[-1][0]
                else:
                    raise SessionError("module declared before any ring", line_no)
                modules.append(
                    (name, _parse_module_literal(ring, m.group(2), line_no, ring_lookup), rname)
                )
                names.add(name)
            elif head == "compute":
                if len(tokens) < 2:
                    raise SessionError("empty compute command", line_no)
                what = tokens[1]
                if what in COMPUTE_LIMITS:
                    pos, opts = _split_opts(tokens[2:], line_no, ("kmax",))
                    if len(pos) != 2:
                        raise SessionError(f"expected: compute {what} <ideal> <module>", line_no)
                    commands.append(("limit", what, pos[0], pos[1], opts.get("kmax")))
                elif what in ("ext", "tor"):
                    pos, opts = _split_opts(tokens[2:], line_no, ())
                    if len(pos) != 3:
                        raise SessionError(f"expected: compute {what} <i> <module> <module>", line_no)
                    commands.append((what, int(pos[0]), pos[1], pos[2]))
                elif what in ("Hloc", "hloc"):
                    pos, opts = _split_opts(tokens[2:], line_no, ("kmax",))
                    if len(pos) != 3:
                        raise SessionError(f"expected: compute {what} <i> <ideal> <module>", line_no)
                    commands.append((what, int(pos[0]), pos[1], pos[2], opts.get("kmax")))
                elif what == "dims":
                    pos, opts = _split_opts(tokens[2:], line_no, ("degree", "kmax"))
                    if len(pos) != 2 or not (pos[1].startswith("[") and pos[1].endswith("]")):
                        raise SessionError("expected: compute dims <ideal> [<m1>,<m2>,...]", line_no)
                    mods = tuple(x for x in pos[1][1:-1].split(",") if x)
                    commands.append(("dims", pos[0], mods, opts.get("degree"), opts.get("kmax")))
                else:
                    raise SessionError(f"unknown compute target {what!r}", line_no)
            elif head == "check":
                if len(tokens) != 4 or tokens[1] not in ("reduced", "coreduced"):
                    raise SessionError("expected: check reduced|coreduced <ideal> <module>", line_no)
                commands.append(("check", tokens[1], tokens[2], tokens[3]))
            elif head == "suite":
                if len(tokens) < 2:
                    raise SessionError("suite needs a name", line_no)
                name = tokens[1]
                if name not in SUITE_NAMES:
                    raise SessionError(
                        f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}", line_no
                    )
                pos, opts = _split_opts(
                    tokens[2:], line_no, ("seed", "budget", "degree", "kmax")
                )
                if pos:
                    raise SessionError("suite takes only options", line_no)
                commands.append(
                    ("suite", name, opts.get("seed"), opts.get("budget"),
                     opts.get("degree"), opts.get("kmax"))
                )
            else:
                raise SessionError(f"unknown command {head!r}", line_no)
        except RingError as exc:
            raise SessionError(str(exc), line_no) from exc

    session = Session(tuple(rings), tuple(ideals), tuple(modules), tuple(commands))
    _validate_names(session)
    return session


def _validate_names(session: Session):
    ring_names = {n for n, _ in session.rings}
    ideal_names = {n for n, _, _ in session.ideals}
    module_names = {n for n, _, _ in session.modules}
    for cmd in session.commands:
        kind = cmd[0]
        if kind == "limit":
            _, _, iname, mname, _ = cmd
            _require(iname, ideal_names, "ideal")
            _require(mname, module_names, "module")
        elif kind in ("ext", "tor"):
            _require(cmd[2], module_names, "module")
            _require(cmd[3], module_names, "module")
        elif kind in ("Hloc", "hloc"):
            _require(cmd[2], ideal_names, "ideal")
            _require(cmd[3], module_names, "module")
        elif kind == "check":
            _require(cmd[2], ideal_names, "ideal")
            _require(cmd[3], module_names, "module")
        elif kind == "dims":
            _require(cmd[1], ideal_names, "ideal")
            for m in cmd[2]:
                _require(m, module_names, "module")


def _require(name, pool, what):
    if name not in pool:
        raise SessionError(f"undeclared {what} {name!r}")


# ---------------------------------------------------------------------------
# canonical echo


def session_text(session: Session) -> str:
    lines = []
    for name, ring in session.rings:
        lines.append(f"ring {name} = {ring}")
    for name, ideal, rname in session.ideals:
        lines.append(f"ideal {name} = {ideal} in {rname}")
    for name, mod, rname in session.modules:
        lines.append(f"module {name} = {_module_literal(mod)} over {rname}")
    for cmd in session.commands:
        lines.append(_command_text(cmd))
    return "\n".join(lines)


def _module_literal(M: FpModule) -> str:
    cover = M.ring.cover
    rows = ",".join(
        "[" + ",".join(cover.format(x) for x in row) + "]" for row in M.rel
    )
    return f"coker [{rows}]"


def _command_text(cmd) -> str:
    kind = cmd[0]
    if kind == "limit":
        _, what, iname, mname, kmax = cmd
        tail = f" --kmax {kmax}" if kmax is not None else ""
        return f"compute {what} {iname} {mname}{tail}"
    if kind in ("ext", "tor"):
        return f"compute {kind} {cmd[1]} {cmd[2]} {cmd[3]}"
    if kind in ("Hloc", "hloc"):
        tail = f" --kmax {cmd[4]}" if cmd[4] is not None else ""
        return f"compute {kind} {cmd[1]} {cmd[2]} {cmd[3]}{tail}"
    if kind == "check":
        return f"check {cmd[1]} {cmd[2]} {cmd[3]}"
    if kind == "dims":
        _, iname, mods, degree, kmax = cmd
        tail = "" if degree is None else f" --degree {degree}"
        tail += "" if kmax is None else f" --kmax {kmax}"
        return f"compute dims {iname} [{','.join(mods)}]{tail}"
    if kind == "suite":
        _, name, seed, budget, degree, kmax = cmd
        tail = ""
        for label, v in (("seed", seed), ("budget", budget), ("degree", degree), ("kmax", kmax)):
            if v is not None:
                tail += f" --{label} {v}"
        return f"suite {name}{tail}"
    raise SessionError(f"unprintable command {cmd!r}")


# ---------------------------------------------------------------------------
# execution


@dataclass(frozen=True)
class Report:
    version: str
    session: str  # canonical echo
    options: tuple
    results: tuple
    status: int

    def to_dict(self):
        return {
            "version": self.version,
            "session": self.session,
            "options": {k: v for k, v in self.options},
            "results": list(self.results),
            "status": self.status,
        }


def _module_payload(M: FpModule) -> dict:
    cover = M.ring.cover
    invs, free = M.structure
    return {
        "ring": str(M.ring),
        "invariant_factors": [cover.format(d) for d in invs],
        "free_rank": free,
        "presentation": [[cover.format(x) for x in row] for row in M.rel],
        "is_zero": M.is_zero,
    }


def _limit_payload(res) -> dict:
    out = {
        "stabilized": res.stabilized,
        "stabilized_at": res.stabilized_at,
        "bound": res.bound,
        "mittag_leffler": res.mittag_leffler,
        "stages": [ _module_payload(m) for m, _ in res.system_trace ],
    }
    out["value"] = _module_payload(res.value) if res.value is not None else None
    return out


def run_session(source: str, *, kmax: int | None = None, degree: int | None = None,
                seed: int = 0) -> Report:
    """Execute a session (text, or a path to a session file).

    Mathematical failures never abort the session; they land in the report
    and drive the exit status.
    """
    if "\n" not in source and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    session = parse_session(text)

    kmax_source = "flag"
    if kmax is None:
        env = os.environ.get("WORKBENCH_KMAX")
        if env is not None:
            try:
                kmax = int(env)
                kmax_source = "env:WORKBENCH_KMAX"
            except ValueError:
                raise SessionError("WORKBENCH_KMAX must be an integer")
        else:
            kmax = DEFAULT_KMAX
            kmax_source = "default"
    degree_eff = degree if degree is not None else DEFAULT_DEGREE

    results = []
    status = 0

    def bump(level):
        nonlocal status
        status = max(status, level)

    for idx, cmd in enumerate(session.commands):
        kind = cmd[0]
        entry = {"index": idx, "command": _command_text(cmd)}
        if kind == "limit":
            _, what, iname, mname, k_over = cmd
            res = COMPUTE_LIMITS[what](
                session.module(mname), session.ideal(iname), k_over or kmax
            )
            entry["kind"] = "limit"
            entry["result"] = _limit_payload(res)
            if not res.stabilized:
                bump(2)
        elif kind in ("ext", "tor"):
            fn = ext if kind == "ext" else tor
            value = fn(cmd[1], session.module(cmd[2]), session.module(cmd[3]))
            entry["kind"] = kind
            entry["result"] = _module_payload(value)
        elif kind in ("Hloc", "hloc"):
            fn = local_cohomology if kind == "Hloc" else local_homology
            res = fn(cmd[1], session.ideal(cmd[2]), session.module(cmd[3]), cmd[4] or kmax)
            entry["kind"] = "limit"
            entry["result"] = _limit_payload(res)
            if not res.stabilized:
                bump(2)
        elif kind == "check":
            fn = is_reduced if cmd[1] == "reduced" else is_coreduced
            entry["kind"] = "check"
            entry["result"] = {"holds": fn(session.module(cmd[3]), session.ideal(cmd[2]))}
        elif kind == "dims":
            _, iname, mods, deg_over, k_over = cmd
            ideal = session.ideal(iname)
            family = [session.module(m) for m in mods]
            rep = dimension_bounds(
                ideal.ring, ideal, family, deg_over or degree_eff, k_over or kmax
            )
            entry["kind"] = "dims"
            entry["result"] = {
                "pd": rep.pd_bound,
                "fd": rep.fd_bound,
                "cd_family": rep.cd_family,
                "hd_family": rep.hd_family,
                "cd_profiles": [list(p) for p in rep.cd_profiles],
                "hd_profiles": [list(p) for p in rep.hd_profiles],
            }
            if rep.cd_family["value"] == "indeterminate" or rep.hd_family["value"] == "indeterminate":
                bump(2)
        elif kind == "suite":
            _, name, s_seed, budget, s_degree, s_kmax = cmd
            cfg = SuiteConfig(
                seed=s_seed if s_seed is not None else seed,
                degree=s_degree if s_degree is not None else degree_eff,
                kmax=s_kmax if s_kmax is not None else kmax,
            )
            if name == "fuzz":
                reports = [fuzz_campaign(cfg.seed, budget if budget is not None else 100)]
            else:
                reports = run_suite(name, cfg)
            entry["kind"] = "suite"
            entry["result"] = [r.to_dict() for r in reports]
            if any(r.failures for r in reports):
                bump(3)
            elif any(r.indeterminates for r in reports):
                bump(2)
        results.append(entry)

    options = {
        "kmax": kmax,
        "kmax_source": kmax_source,
        "degree": degree_eff,
        "seed": seed,
    }
    return Report(
        version=__version__,
        session=session_text(session),
        options=tuple(sorted(options.items())),
        results=tuple(results),
        status=status,
    )


def emit(report: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (
            json.dumps(report.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
        ).encode("utf-8")
    if fmt != "text":
        raise SessionError(f"unknown format {fmt!r}")
    lines = [f"workbench report (version {report.version}, status {report.status})"]
    lines.append("options: " + ", ".join(f"{k}={v}" for k, v in report.options))
    for entry in report.results:
        head = f"[{entry['index']}] {entry['command']}:"
        kind = entry["kind"]
        if kind == "limit":
            r = entry["result"]
            if r["stabilized"]:
                v = r["value"]
                desc = _module_desc(v)
                ml = "" if r["mittag_leffler"] is None else f", ML={r['mittag_leffler']}"
                lines.append(f"{head} {desc} (stabilized at {r['stabilized_at']}{ml})")
            else:
                lines.append(f"{head} NonStabilizing({r['bound']})")
        elif kind in ("ext", "tor"):
            lines.append(f"{head} {_module_desc(entry['result'])}")
        elif kind == "check":
            lines.append(f"{head} {entry['result']['holds']}")
        elif kind == "dims":
            r = entry["result"]
            lines.append(
                f"{head} pd={_bound_desc(r['pd'])} fd={_bound_desc(r['fd'])} "
                f"cd>={r['cd_family']['value']} hd>={r['hd_family']['value']}"
            )
        elif kind == "suite":
            for rep in entry["result"]:
                fails = sum(c["fail"] for c in rep["counts"].values())
                indet = sum(c["indeterminate"] for c in rep["counts"].values())
                skips = sum(c["skip"] for c in rep["counts"].values())
                lines.append(
                    f"{head} suite {rep['suite']}: {rep['instances']} records, "
                    f"{fails} failures, {indet} indeterminate, {skips} skips"
                )
                for prop, c in sorted(rep["counts"].items()):
                    lines.append(
                        f"    {prop}: pass={c['pass']} fail={c['fail']} "
                        f"skip={c['skip']} indet={c['indeterminate']}"
                    )
                for rec in rep["records"]:
                    if rec["conclusion"] == "fail":
                        lines.append(f"    COUNTEREXAMPLE {json.dumps(rec, sort_keys=True)}")
    lines.append(f"status: {report.status}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _module_desc(payload) -> str:
    if payload is None:
        return "<no value>"
    if payload["is_zero"]:
        return "0"
    parts = [f"{payload['ring']}/({d})" for d in payload["invariant_factors"]]
    if payload["free_rank"]:
        parts.append(f"{payload['ring']}^{payload['free_rank']}")
    return " + ".join(parts)


def _bound_desc(bound) -> str:
    if bound["value"] is None:
        return "-inf"
    return str(bound["value"]) if bound["exact"] else f">={bound['value']}(possibly inf)"
