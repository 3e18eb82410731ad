"""Reports for the command-line runs: building them and rendering them as text or JSON."""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field
from typing import Callable

from . import __version__
from .checks import Check, NonConfluentError, StabilizationError
from .free import (
    Alphabet,
    NCPoly,
    TruncationWarning,
    apply_letter_map,
    degree_one_projection,
    letter_inclusion,
    lyndon_primitive_oracle,
    primitive_polys,
    primitives,
    restricted_witt_dimension,
)
from .lie import (
    LieData,
    b1_from_lie,
    build_enveloping,
    check_lie_axioms,
    compare_L1_with_enveloping,
    corrupt_bracket,
    corrupt_mu0,
    enveloping_primitives_check,
    extract_lie,
)
from .linalg import Basis, Field, LinearMap
from .tower import (
    B1Object,
    build_L1,
    check_b1_axioms,
    check_b2,
    coequalizer_check,
    eta1,
    idempotency_check,
    quotient_algebra_check,
    quotient_coproduct_check,
    s_span_check,
)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class UsageError(ValueError):
    """Arguments that do not describe a runnable configuration."""


@dataclass
class Entry:
    name: str
    status: str
    window: int
    details: str = ""
    witness: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "window": f"degrees <= {self.window}",
            "details": self.details,
            "witness": self.witness,
        }


@dataclass
class Report:
    command: str
    config: dict
    entries: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, check: Check) -> Entry:
        entry = Entry(check.name, PASS if check.ok else FAIL, check.window, check.details, check.witness)
        self.entries.append(entry)
        return entry

    def skip(self, name: str, window: int, reason: str) -> Entry:
        entry = Entry(name, SKIPPED, window, reason)
        self.entries.append(entry)
        return entry

    @property
    def ok(self) -> bool:
        return all(e.status != FAIL for e in self.entries)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def status(self, name: str) -> str:
        for e in self.entries:
            if e.name == name:
                return e.status
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "tool": "primtower",
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "checks": [e.to_dict() for e in self.entries],
            "data": self.data,
            "status": PASS if self.ok else FAIL,
        }


def emit(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "text":
        raise UsageError(f"unknown format {fmt!r}")
    lines = [f"primtower {__version__} {report.command}"]
    if report.config:
        lines.append("config: " + ", ".join(f"{k}={report.config[k]}" for k in sorted(report.config)))
    for e in report.entries:
        line = f"{e.status.upper():7} {e.name} [degrees <= {e.window}]"
        if e.details:
            line += f" {e.details}"
        lines.append(line)
        if e.witness:
            lines.append(f"        witness: {e.witness}")
    if report.entries:
        lines.append(f"overall: {PASS if report.ok else FAIL}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# primitives


def primitives_report(k: int, characteristic: int, degree: int) -> Report:
    if k < 1:
        raise UsageError("--generators must be >= 1")
    if degree < 1:
        raise UsageError("--degree must be >= 1")
    _field(characteristic)
    config = {"generators": k, "char": characteristic, "degree": degree}
    report = Report("primitives", config)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        alphabet = Alphabet.standard(k, characteristic, degree)
    dims, bases = [], {}
    for n in range(1, degree + 1):
        space = primitives(alphabet, n)
        oracle = lyndon_primitive_oracle(alphabet, n)
        expected = restricted_witt_dimension(k, n, characteristic)
        dims.append(space.dim)
        bases[str(n)] = [str(z) for z in primitive_polys(alphabet, n)]
        ok = space == oracle and space.dim == expected
        witness = None
        if not ok:
            witness = f"kernel dim {space.dim}, Lyndon oracle dim {oracle.dim}, formula {expected}"
        report.add(Check(f"P_{n}", ok, n, f"dim {space.dim}; Lyndon oracle and dimension formula ({expected}) agree", witness))
    report.data = {"dims": dims, "bases": bases}
    return report


# ----------------------------------------------------------------------------
# separability of the tensor algebra over vector spaces


def _random_scalar(f: Field, rng: random.Random):
    p = f.characteristic
    return f(rng.randrange(p)) if p else f(rng.randint(-3, 3))


def _random_map(f: Field, src: Alphabet, dst: Alphabet, rng: random.Random) -> LinearMap:
    rows = [[_random_scalar(f, rng) for _ in src.names] for _ in dst.names]
    return LinearMap.from_dense(f, Basis(src.names), Basis(dst.names), rows)


def _random_poly(alphabet: Alphabet, rng: random.Random, terms: int = 6) -> NCPoly:
    f = alphabet.field
    out = {}
    for _ in range(terms):
        n = rng.randint(0, alphabet.cap)
        w = tuple(rng.randrange(len(alphabet)) for _ in range(n))
        c = _random_scalar(f, rng)
        if c:
            out[w] = f.add(out.get(w, f.zero), c)
    return NCPoly(alphabet, out)


def _pi(a: NCPoly) -> dict:
    return {i: c for i, c in enumerate(degree_one_projection(a)) if c}


def _fmt(alphabet: Alphabet, vec: dict) -> str:
    return str(NCPoly(alphabet, {(i,): c for i, c in vec.items()}))


def _skewed_pi(a: NCPoly) -> dict:
    """Degree-one part plus the constant term on the first letter: a retraction that is not natural."""
    f = a.field
    out = _pi(a)
    c = a.coefficient(())
    if c and len(a.alphabet):
        out[0] = f.add(out.get(0, f.zero), c)
    return {i: v for i, v in out.items() if v}


def separability_report(k: int, characteristic: int, degree: int, trials: int, seed: int) -> Report:
    if k < 1:
        raise UsageError("--generators must be >= 1")
    if degree < 1:
        raise UsageError("--degree must be >= 1")
    if trials < 1:
        raise UsageError("--trials must be >= 1")
    f = _field(characteristic)
    config = {"generators": k, "char": characteristic, "degree": degree, "trials": trials, "seed": seed}
    report = Report("separability", config)
    rng = random.Random(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        src = Alphabet.standard(k, characteristic, degree)
        targets = {m: Alphabet(f, tuple(f"{n}'" for n in ("u", "v", "w")[:m]), degree) for m in (1, 2, 3)}

    retract_witness = None
    for i in range(k):
        v = {i: f.one}
        if _pi(letter_inclusion(src, [v.get(j, f.zero) for j in range(k)])) != v:
            retract_witness = f"pi(i({src.names[i]})) != {src.names[i]}"
            break
    natural_witness = None
    control_hits = 0
    cases = [(src, LinearMap.identity(f, Basis(src.names)))]
    cases.append((targets[1], LinearMap.zero(f, Basis(src.names), Basis(targets[1].names))))
    for _ in range(trials):
        dst = targets[rng.randint(1, 3)]
        cases.append((dst, _random_map(f, src, dst, rng)))
    for t, (dst, fmap) in enumerate(cases):
        a = _random_poly(src, rng)
        if rng.random() < 0.5:
            a = a + src.one()
        image = apply_letter_map(fmap, a, dst)
        lhs, rhs = _pi(image), fmap.apply(_pi(a))
        if lhs != rhs and natural_witness is None:
            natural_witness = f"case {t}: a = {a}; pi(Tf a) = {_fmt(dst, lhs)}, f(pi a) = {_fmt(dst, rhs)}"
        vec = [_random_scalar(f, rng) for _ in range(k)]
        back = _pi(letter_inclusion(src, vec))
        if back != {i: c for i, c in enumerate(vec) if c} and retract_witness is None:
            retract_witness = f"case {t}: pi(i(v)) != v for v = {letter_inclusion(src, vec)}"
        for b in (a, src.one()):
            if _skewed_pi(apply_letter_map(fmap, b, dst)) != fmap.apply(_skewed_pi(b)):
                control_hits += 1
                break
    n = len(cases)
    report.add(Check("retraction", retract_witness is None, 1, f"pi(i(v)) = v on letters and {n} random vectors", retract_witness))
    report.add(
        Check("naturality", natural_witness is None, degree, f"pi(Tf a) = f(pi a) for {n} letter maps", natural_witness)
    )
    detected = control_hits > 0
    report.add(
        Check(
            "negative_control",
            detected,
            degree,
            f"skewed projection caught on {control_hits} of {n} maps",
            None if detected else "the non-natural projection passed every trial",
        )
    )
    return report


# ----------------------------------------------------------------------------
# the tower pipeline


class _Pipeline:
    """Runs named steps; a step whose dependencies did not pass is skipped."""

    def __init__(self, report: Report, window: int):
        self.report = report
        self.window = window
        self.passed: set[str] = set()
        self.values: dict = {}

    def run(self, name: str, deps: tuple, fn: Callable[[], Check], window: int | None = None):
        window = self.window if window is None else window
        missing = [d for d in deps if d not in self.passed]
        if missing:
            self.report.skip(name, window, f"needs {', '.join(missing)}")
            return
        try:
            check = fn()
        except (StabilizationError, NonConfluentError, ValueError, RuntimeError) as exc:
            witness = getattr(exc, "witness", None) or str(exc)
            check = Check(name, False, window, type(exc).__name__, witness)
        self.report.add(check)
        if check.ok:
            self.passed.add(name)


def verify_tower_report(
    lie: LieData | None = None,
    b1: B1Object | None = None,
    degree: int | None = None,
    slack: int = 2,
    corrupt_bracket_: bool = False,
    corrupt_mu0_: bool = False,
    seed: int = 0,
    source: str = "",
) -> Report:
    if (lie is None) == (b1 is None):
        raise UsageError("give exactly one of a Lie data file or a B1 object file")
    if slack < 1:
        raise UsageError("--slack must be >= 1")
    if b1 is not None:
        degree = b1.cap if degree is None else degree
        if degree > b1.cap:
            raise UsageError(f"--degree {degree} exceeds the cap {b1.cap} of the B1 file")
    degree = 4 if degree is None else degree
    if degree < 2:
        raise UsageError("--degree must be >= 2")
    if corrupt_bracket_ and lie is None:
        raise UsageError("--corrupt-bracket needs Lie data input")
    rng = random.Random(seed)
    config = {"input": source, "degree": degree, "slack": slack, "seed": seed}
    notes = {}
    if corrupt_bracket_:
        try:
            lie, notes["corrupt_bracket"] = corrupt_bracket(lie, rng)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    field_ = (lie or b1).field
    config["char"] = field_.characteristic
    report = Report("verify-tower", config)
    pipe = _Pipeline(report, degree)
    v = pipe.values

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        if lie is not None:

            def from_lie():
                v["b1"] = b1_from_lie(lie, degree)
                return Check("b1_from_lie", True, degree, f"mu0 on {len(v['b1'].basis)} echelon primitives")

            pipe.run("b1_from_lie", (), from_lie)
            if "b1_from_lie" in pipe.passed and corrupt_mu0_:
                v["b1"], notes["corrupt_mu0"] = _corrupt(v["b1"], rng)
            b1_dep = ("b1_from_lie",)
        else:
            obj = b1.restrict(degree) if degree < b1.cap else b1
            if corrupt_mu0_:
                obj, notes["corrupt_mu0"] = _corrupt(obj, rng)
            v["b1"] = obj
            b1_dep = ()
        config.update(notes)
        _tower_steps(pipe, b1_dep, lie, slack, degree)
    return report


def _corrupt(obj: B1Object, rng: random.Random):
    try:
        return corrupt_mu0(obj, rng)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _tower_steps(pipe: _Pipeline, b1_dep: tuple, lie: LieData | None, slack: int, degree: int) -> None:
    v = pipe.values
    run = pipe.run
    run("check_b1_axioms", b1_dep, lambda: check_b1_axioms(v["b1"]))
    run("s_generators", b1_dep, lambda: s_span_check(v["b1"]))

    def L1():
        q = v["q"] = build_L1(v["b1"], slack=slack, check=False)
        by = ", ".join(f"slack {s}: {list(d)}" for s, d in sorted(q.dims_by_slack.items()) if s >= slack)
        flag = "; truncation flagged" if q.truncated else ""
        return Check("build_L1", True, degree, f"cumulative dims {list(q.dims)} ({by}){flag}")

    run("build_L1", ("check_b1_axioms",), L1)
    run("quotient_algebra", ("build_L1",), lambda: quotient_algebra_check(v["q"]))
    run("quotient_coproduct_check", ("build_L1",), lambda: quotient_coproduct_check(v["q"]))
    run("coequalizer_check", ("build_L1",), lambda: coequalizer_check(v["b1"], v["q"]))

    def unit1():
        e = eta1(v["b1"], v["q"])
        return e.check

    run("eta1", ("build_L1",), unit1, degree - 1)

    def b2():
        cert = v["cert"] = check_b2(v["b1"], q=v["q"])
        witness = None if cert.iso else cert.check.witness
        return Check("check_b2", cert.iso, cert.window, "mu1 = eta1^-1 stored" if cert.iso else "", witness)

    run("check_b2", ("eta1",), b2, degree - 1)
    run("idempotency", ("check_b2",), lambda: idempotency_check(v["cert"]), degree - 1)

    def lie_step():
        L = v["lie"] = extract_lie(v["b1"])
        kind = "restricted Lie data" if L.restricted else "Lie data"
        return Check("extract_lie", True, 2 if not L.restricted else L.field.characteristic, f"{kind} of dimension {L.dim}")

    run("extract_lie", b1_dep, lie_step)
    run("check_lie_axioms", ("extract_lie",), lambda: check_lie_axioms(v["lie"]))
    if lie is not None:

        def round_trip():
            ok = v["lie"] == lie
            return Check(
                "round_trip",
                ok,
                2,
                "recovered structure constants equal the input",
                None if ok else "recovered structure constants differ from the input",
            )

        run("round_trip", ("extract_lie",), round_trip)

    def env_step():
        L = v["lie"]
        env = v["env"] = build_enveloping(L, degree, restricted=L.restricted)
        kind = "restricted enveloping" if env.restricted else "enveloping"
        return Check(
            "build_enveloping",
            True,
            degree,
            f"{kind} algebra, basis order {list(L.names)}, cumulative dims {list(env.dims)}, "
            f"overlaps resolved: {env.overlaps_checked}",
        )

    run("build_enveloping", ("check_lie_axioms",), env_step)
    run(
        "compare_L1_with_enveloping",
        ("build_enveloping", "build_L1"),
        lambda: compare_L1_with_enveloping(v["b1"], v["env"], v["q"]),
    )
    run("primitives_of_enveloping", ("build_enveloping",), lambda: enveloping_primitives_check(v["env"]), degree - 1)


def _field(characteristic: int) -> Field:
    try:
        return Field(characteristic)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
