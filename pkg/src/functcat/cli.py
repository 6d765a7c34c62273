"""Command line front end: `functcat <command> <instance> [options]`."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .endo import (
    endomorphism_algebra,
    gl_dim_inequality_check,
    i1_eq_iinf,
    ideal_projectivity_report,
    pd_transfer_check,
    recollement_check,
)
from .funmod import ModuleError, NotNatural
from .homology import (
    CriteriaMismatch,
    DEFAULT_SEED,
    ext,
    ext_via_injectives,
    global_dimension,
    idempotency_level,
    injective_coresolution,
    module_battery,
    projective_resolution,
)
from .ideals import (
    IdealError,
    ideal_as_module,
    is_idempotent,
    property_A_witness,
    quotient_category,
    quotient_representable,
    trace_ideal,
)
from .instance import (
    Instance,
    InstanceSemanticError,
    InstanceSyntaxError,
    fixture_names,
    load_instance,
)
from .pathcat import NonAdmissible, NotComposable, UnknownArrow, UnknownVertex

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_SEMANTIC = 0, 1, 2, 3

SEMANTIC_ERRORS = (UnknownVertex, UnknownArrow, NotComposable, NonAdmissible, InstanceSemanticError,
                   ModuleError, NotNatural, IdealError, KeyError)


@dataclass
class Outcome:
    instance: str
    command: str
    params: dict
    verdicts: list[dict] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    table_only: bool = False

    def add(self, name: str, passed: bool, value: Any = None) -> None:
        self.verdicts.append({"name": name, "passed": bool(passed), "value": value})

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def to_json(self, timings: bool) -> str:
        doc = {
            "instance": self.instance,
            "command": self.command,
            "params": self.params,
            "verdicts": self.verdicts,
            "timings": self.timings if timings else {},
        }
        return json.dumps(doc, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        out = [f"instance: {self.instance}", f"command: {self.command}"]
        out += self.lines
        for v in [] if self.table_only else self.verdicts:
            mark = "PASS" if v["passed"] else "FAIL"
            val = "" if v["value"] is None else f": {_short(v['value'])}"
            out.append(f"[{mark}] {v['name']}{val}")
        return "\n".join(out)


def _short(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def _seed(inst: Instance) -> int:
    env = os.environ.get("FUNCTCAT_SEED")
    if env is not None and env.strip():
        return int(env)
    return inst.spec.seed if inst.spec.seed is not None else DEFAULT_SEED


def _dim_or_bound(x: Optional[int]) -> Any:
    return "exceeds bound" if x is None else x


# commands

def cmd_describe(inst: Instance, out: Outcome, bound: int = 8) -> None:
    C = inst.category
    out.lines.append(f"field {C.field}; {len(C.vertices)} vertices, {len(C.arrows)} arrows, "
                     f"{len(inst.spec.relations)} relations")
    dims = {f"{x}->{y}": C.hom_dim(x, y) for x in C.vertices for y in C.vertices if C.hom_dim(x, y)}
    out.add("vertices", True, list(C.vertices))
    out.add("arrows", True, len(C.arrows))
    out.add("relations", True, len(inst.spec.relations))
    out.add("hom dimensions", True, dims)
    out.add("associativity", C.check_associativity())
    out.add("identities", C.check_identities())
    out.add("global dimension", True, _dim_or_bound(global_dimension(C, bound)))


def cmd_trace_ideal(inst: Instance, out: Outcome, bundle: str) -> None:
    C = inst.category
    P = inst.bundle(bundle)
    I = trace_ideal(C, P)
    Q = quotient_category(C, I)
    out.add("ideal dimensions", I.is_closed(), {f"{x}->{y}": d for (x, y), d in I.dims().items() if d})
    out.add("idempotent", is_idempotent(I))
    out.add("property A", property_A_witness(C, I).all_surjective())
    out.add("I(c,-) dimension vectors", True,
            {c: list(ideal_as_module(I, c).dim_vector()) for c in C.vertices})
    out.add("quotient representables", True,
            {c: list(quotient_representable(I, c).dim_vector()) for c in C.vertices})
    out.add("zero objects of C/I", True, [v for v in Q.vertices if Q.is_zero_object(v)])


def cmd_idempotency(inst: Instance, out: Outcome, bundle: str, max_k: int) -> None:
    C = inst.category
    P = inst.bundle(bundle)
    Q = quotient_category(C, trace_ideal(C, P))
    try:
        rep = idempotency_level(Q, max_k, bundle=P, seed=_seed(inst))
    except CriteriaMismatch as e:
        out.add("criteria concordance", False, str(e))
        return
    out.lines.append(rep.summary())
    out.add("level", True, rep.level)
    out.add("criteria concordance", not rep.mismatches,
            {k: [int(b) for b in v] for k, v in rep.verdicts.items()})
    out.add("global dimension", True, _dim_or_bound(rep.global_dimension))
    out.add("strongly idempotent", True, rep.strongly_idempotent)


def cmd_resolve(inst: Instance, out: Outcome, module: str, length: int, injective: bool = False) -> None:
    M = inst.module(module)
    R = injective_coresolution(M, length) if injective else projective_resolution(M, length)
    out.add("terms", True, [list(R.bundle(i)) for i in range(len(R.modules))])
    out.add("length", True, "beyond bound" if R.length is None else R.length)
    out.add("exact", R.check())
    out.add("minimal", R.is_minimal())


def cmd_ext(inst: Instance, out: Outcome, src: str, dst: str, max_i: int) -> None:
    M, N = inst.module(src), inst.module(dst)
    a = ext(M, N, max_i).dims
    b = ext_via_injectives(M, N, max_i).dims
    out.lines.append(f"Ext^i({src}, {dst}) for i = 0..{max_i}: {a}")
    out.add("ext", True, a)
    out.add("agrees with injective coresolution of target", a == b, b)


def cmd_recollement(inst: Instance, out: Outcome, bundle: str) -> None:
    rep = recollement_check(inst.category, inst.bundle(bundle), seed=_seed(inst))
    out.add("battery sizes", True, rep.data["battery_sizes"])
    for v in rep.verdicts:
        out.add(v.name, v.passed, v.detail or None)


def cmd_endo_report(inst: Instance, out: Outcome, bundle: str, max_k: int = 6, bound: int = 8) -> None:
    C = inst.category
    P = inst.bundle(bundle)
    R = endomorphism_algebra(P)
    rep = ideal_projectivity_report(C, P, kmax=max_k, bound=bound)
    out.add("dim R_P", True, R.dim)
    for v in rep.verdicts:
        out.add(v.name, True, v.passed if not v.detail else f"{v.passed} ({v.detail})")
    out.add("criteria agree", rep.verdicts[2].passed)
    out.add("quasi-hereditary flag", True, rep.data["quasi_hereditary"])
    out.add("strongly idempotent", True, rep.data["strongly_idempotent"])
    ev = i1_eq_iinf(C, P)
    out.add("I_1 = I_inf", True, ev.holds)
    gl = gl_dim_inequality_check(C, P, bound)
    out.add("P_1 = P_inf", True, gl.data["P1_eq_Pinf"])
    for v in gl.verdicts:
        out.add(v.name, v.passed, v.detail)
    Q = quotient_category(C, trace_ideal(C, P))
    bad = []
    for i, X in enumerate(module_battery(C, _seed(inst), Q=Q)):
        ok = pd_transfer_check(P, X, bound, R)
        if ok is False:
            bad.append(i)
    out.add("pd transfer on P_inf battery modules", not bad, bad or None)


# fixture expectations for `examples`

def _verdict(inst: Instance, fn: Callable[[Instance, Outcome], None]) -> Outcome:
    o = Outcome(inst.name, "", {})
    fn(inst, o)
    return o


def _value(o: Outcome, name: str) -> Any:
    for v in o.verdicts:
        if v["name"] == name:
            return v["value"]
    raise KeyError(name)


def _level(inst: Instance, b: str) -> Outcome:
    return _verdict(inst, lambda i, o: cmd_idempotency(i, o, b, 6))


def _expect_level(b: str, expected: int):
    def check(inst: Instance):
        o = _level(inst, b)
        lv = _value(o, "level") if o.passed else None
        return lv, o.passed and lv == expected
    return f"idempotency level of {b} = {expected}", check


def _expect_concordance(b: str):
    def check(inst: Instance):
        o = _level(inst, b)
        return _value(o, "level") if o.passed else "mismatch", o.passed
    return f"criteria concordance for {b}", check


def _expect_gldim(expected: int):
    def check(inst: Instance):
        g = global_dimension(inst.category, 8)
        return _dim_or_bound(g), g == expected
    return f"global dimension = {expected}", check


def _expect_ext(a: str, b: str, expected: list[int]):
    def check(inst: Instance):
        o = _verdict(inst, lambda i, o: cmd_ext(i, o, a, b, len(expected) - 1))
        return _value(o, "ext"), o.passed and _value(o, "ext") == expected
    return f"Ext({a}, {b}) = {expected}", check


def _expect_recollement(b: str):
    def check(inst: Instance):
        o = _verdict(inst, lambda i, o: cmd_recollement(i, o, b))
        return "all axioms" if o.passed else [v["name"] for v in o.verdicts if not v["passed"]], o.passed
    return f"recollement axioms for {b}", check


def _expect_endo(b: str, dim_r: int, i1: bool, qh: Optional[bool] = None, proj: Optional[bool] = None):
    def check(inst: Instance):
        o = _verdict(inst, lambda i, o: cmd_endo_report(i, o, b))
        got = {"dim R_P": _value(o, "dim R_P"), "I_1 = I_inf": _value(o, "I_1 = I_inf"),
               "quasi-hereditary": _value(o, "quasi-hereditary flag")}
        ok = o.passed and got["dim R_P"] == dim_r and got["I_1 = I_inf"] == i1
        if qh is not None:
            ok = ok and got["quasi-hereditary"] == qh
        if proj is not None:
            v = _value(o, "I(c,-) projective for all c")
            ok = ok and str(v).startswith(str(proj))
        return got, ok
    return f"endo report for {b}", check


def _expect_shape(nv: int, na: int, nr: int):
    def check(inst: Instance):
        s = inst.spec
        got = [len(s.vertices), len(s.arrows), len(s.relations)]
        return got, got == [nv, na, nr]
    return f"vertices/arrows/relations = {nv}/{na}/{nr}", check


EXPECTATIONS: dict[str, list] = {
    "a2.cat": [
        _expect_shape(2, 1, 0),
        _expect_gldim(1),
        _expect_level("P2", 6),
        _expect_concordance("P12"),
        _expect_recollement("P2"),
        _expect_recollement("P12"),
        _expect_endo("P12", 3, True),
    ],
    "a3h.cat": [
        _expect_shape(3, 2, 0),
        _expect_gldim(1),
        _expect_level("P2", 6),
        _expect_concordance("P1"),
        _expect_recollement("P2"),
        _expect_endo("P2", 1, True, qh=True, proj=True),
    ],
    "aus_a2.cat": [
        _expect_shape(3, 2, 1),
        _expect_gldim(2),
        _expect_concordance("P12"),
        _expect_concordance("P23"),
        _expect_concordance("P2"),
        _expect_recollement("P12"),
        _expect_recollement("P23"),
        _expect_recollement("P2"),
    ],
    "z6.cat": [
        _expect_shape(6, 5, 4),
        _expect_gldim(5),
        _expect_level("P23", 2),
        _expect_ext("S1", "S4", [0, 0, 0, 1]),
        _expect_level("P123", 6),
        _expect_recollement("P23"),
        _expect_recollement("P123"),
        _expect_endo("P23", 3, False, proj=False),
    ],
}


def cmd_examples(out: Outcome) -> None:
    width = max(len(label) for exps in EXPECTATIONS.values() for label, _ in exps)
    for name in fixture_names():
        inst = load_instance(name)
        for label, check in EXPECTATIONS.get(name, []):
            value, ok = check(inst)
            out.add(f"{name}: {label}", ok, value)
            out.lines.append(f"{name:<11} {label:<{width}}  {'PASS' if ok else 'FAIL'}  {_short(value)}")
    out.lines.append(f"{sum(v['passed'] for v in out.verdicts)}/{len(out.verdicts)} expectations hold")


# argument handling

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p = argparse.ArgumentParser(prog="functcat", description="Exact homological checks for path categories and trace ideals.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("describe", parents=[common], help="hom dimensions and global dimension")
    d.add_argument("instance")
    d.add_argument("--bound", type=int, default=8)

    t = sub.add_parser("trace-ideal", parents=[common], help="the trace ideal of a bundle")
    t.add_argument("instance")
    t.add_argument("--bundle", required=True)

    i = sub.add_parser("idempotency", parents=[common], help="k-idempotency level of a trace ideal")
    i.add_argument("instance")
    i.add_argument("--bundle", required=True)
    i.add_argument("--max-k", type=int, default=6)

    r = sub.add_parser("resolve", parents=[common], help="minimal projective resolution of a module")
    r.add_argument("instance")
    r.add_argument("--module", required=True)
    r.add_argument("--length", type=int, default=6)
    r.add_argument("--injective", action="store_true", help="injective coresolution instead")

    e = sub.add_parser("ext", parents=[common], help="dimensions of Ext^i")
    e.add_argument("instance")
    e.add_argument("--from", dest="src", required=True)
    e.add_argument("--to", dest="dst", required=True)
    e.add_argument("--max-i", type=int, default=3)

    rc = sub.add_parser("recollement-check", parents=[common], help="verify the recollement axioms")
    rc.add_argument("instance")
    rc.add_argument("--bundle", required=True)

    er = sub.add_parser("endo-report", parents=[common], help="R_P, ideal projectivity and quasi-heredity")
    er.add_argument("instance")
    er.add_argument("--bundle", required=True)
    er.add_argument("--max-k", type=int, default=6)
    er.add_argument("--bound", type=int, default=8)

    sub.add_parser("examples", parents=[common], help="run the shipped fixture expectations")
    return p


def _dispatch(args: argparse.Namespace) -> Outcome:
    if args.command == "examples":
        out = Outcome("fixtures", "examples", {}, table_only=True)
        cmd_examples(out)
        return out
    inst = load_instance(args.instance)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "instance", "json", "timings")}
    out = Outcome(inst.name, args.command, params)
    if args.command == "describe":
        cmd_describe(inst, out, args.bound)
    elif args.command == "trace-ideal":
        cmd_trace_ideal(inst, out, args.bundle)
    elif args.command == "idempotency":
        if args.max_k < 1:
            raise argparse.ArgumentTypeError("--max-k must be at least 1")
        cmd_idempotency(inst, out, args.bundle, args.max_k)
    elif args.command == "resolve":
        cmd_resolve(inst, out, args.module, args.length, args.injective)
    elif args.command == "ext":
        cmd_ext(inst, out, args.src, args.dst, args.max_i)
    elif args.command == "recollement-check":
        cmd_recollement(inst, out, args.bundle)
    elif args.command == "endo-report":
        cmd_endo_report(inst, out, args.bundle, args.max_k, args.bound)
    return out


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    start = time.perf_counter()
    try:
        out = _dispatch(args)
    except InstanceSyntaxError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SEMANTIC_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"semantic error: {msg}", file=sys.stderr)
        return EXIT_SEMANTIC
    except CriteriaMismatch as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    out.timings = {"total_seconds": round(time.perf_counter() - start, 3)}
    print(out.to_json(args.timings) if args.json else out.to_text())
    if args.timings and not args.json:
        print(f"time: {out.timings['total_seconds']} s")
    return EXIT_OK if out.passed else EXIT_CHECK


if __name__ == "__main__":
    raise SystemExit(main())
