"""Evaluation of parsed ``.tws`` scripts."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import dsl
from .bundles import FormalBundle, dual, end_bundle, euler_characteristic, twist
from .dsl import DslError
from .instanton import (FormalDataError, InstantonData, fraction_text, framed_dimension,
                        json_number, pullback_bundle, sweep, verify_identities)
from .ring import CohomologyClass, PresentationMismatch, integrate, render
from .twistor import TwistorPresentation, build_presentation, canonical_class_check


class UnboundError(DslError):
    code = "unbound"


class DegreeError(DslError):
    code = "degree"


class EvalError(DslError):
    code = "runtime"


class AssertionFailed(DslError):
    code = "assert"


@dataclass
class Output:
    statement: int
    kind: str
    text: str
    value: object = None
    passed: bool | None = None

    def to_json(self) -> dict:
        out = {"statement": self.statement, "kind": self.kind, "text": self.text}
        if self.value is not None:
            out["value"] = self.value
        if self.passed is not None:
            out["pass"] = self.passed
        return out


_GEN = re.compile(r"e(\d+)$")
SWEEP_KEYS = {"n", "r", "k", "kmin", "route", "mode", "b", "samples"}


class Interpreter:
    def __init__(self) -> None:
        self.space: TwistorPresentation | None = None
        self.classes: dict[str, CohomologyClass] = {}
        self.bundles: dict[str, FormalBundle] = {}
        self.index = 0
        self.pos = (0, 0)
        self.outputs: list[Output] = []

    def fail(self, cls, message: str, pos=None) -> DslError:
        line, col = pos or self.pos
        return cls(message, line or None, col or None, self.index)

    # -- names
    def require_space(self) -> TwistorPresentation:
        if self.space is None:
            raise self.fail(EvalError, "no space defined; start the script with 'space n=...'")
        return self.space

    def lookup(self, node: dsl.Name) -> CohomologyClass:
        name = node.name
        if name in self.classes:
            return self.classes[name]
        p = self.require_space()
        m = _GEN.match(name)
        if m:
            i = int(m.group(1))
            if not 1 <= i <= p.n:
                raise self.fail(UnboundError, f"generator {name} does not exist when n={p.n}", node.pos)
            return p.etas[i - 1]
        builtin = {"w": p.omega, "pt": CohomologyClass.point(p.ring), "F": p.F, "S": p.S,
                   "Sbar": p.Sbar, "eta": p.eta, "sigma": p.sigma, "sigmabar": p.sigma_bar,
                   "c1P": p.c1P, "c2P": p.c2P}
        if name in builtin:
            return builtin[name]
        if name in self.bundles:
            raise self.fail(EvalError, f"{name} is a bundle, not a class", node.pos)
        raise self.fail(UnboundError, f"unbound identifier {name!r}", node.pos)

    # -- expressions
    def eval(self, e: dsl.Expr) -> CohomologyClass:
        p = self.require_space()
        if isinstance(e, dsl.Num):
            return CohomologyClass.scalar(p.ring, e.value)
        if isinstance(e, dsl.Name):
            return self.lookup(e)
        if isinstance(e, dsl.Neg):
            return -self.eval(e.operand)
        if isinstance(e, dsl.Pow):
            return self.eval(e.base) ** e.exponent
        if isinstance(e, dsl.BinOp):
            a, b = self.eval(e.left), self.eval(e.right)
            return a + b if e.op == "+" else a - b if e.op == "-" else a * b
        if isinstance(e, dsl.Call):
            value = self.call(e)
            if isinstance(value, CohomologyClass):
                return value
            return CohomologyClass.scalar(p.ring, value)
        raise TypeError(e)

    def call(self, e: dsl.Call) -> Fraction | CohomologyClass:
        if e.func == "integrate":
            return integrate(self.eval(e.arg))
        V = self.bundle(e.arg)
        if e.func == "chi":
            return euler_characteristic(V, self.require_space())
        if e.func == "dim":
            return Fraction(self.dimension(V, e.pos))
        return getattr(V, e.func)  # c1, c2, c3

    def homogeneous(self, e: dsl.Expr, degree: int, what: str) -> CohomologyClass:
        c = self.eval(e)
        if not c.is_homogeneous(degree):
            raise self.fail(DegreeError, f"{what} must have degree {2 * degree}, got {render(c)}",
                            getattr(e, "pos", None))
        if not c.is_integral:
            raise self.fail(DegreeError, f"{what} must have integer coefficients", getattr(e, "pos", None))
        return c

    # -- bundles
    def bundle(self, b: dsl.BundleExpr) -> FormalBundle:
        p = self.require_space()
        if isinstance(b, dsl.BundleRef):
            if b.name not in self.bundles:
                raise self.fail(UnboundError, f"unbound bundle {b.name!r}", b.pos)
            return self.bundles[b.name]
        if isinstance(b, dsl.LineBundle):
            return FormalBundle.line(self.homogeneous(b.c1, 1, "line bundle class"))
        if isinstance(b, dsl.EndOf):
            return end_bundle(self.bundle(b.bundle))
        if isinstance(b, dsl.DualOf):
            return dual(self.bundle(b.bundle))
        if isinstance(b, dsl.Twist):
            return twist(self.bundle(b.bundle), self.homogeneous(b.by, 1, "twisting class"))
        if isinstance(b, dsl.PullbackLiteral):
            if len(b.b) != p.n:
                raise self.fail(DegreeError, f"c1 list has {len(b.b)} entries, space has n={p.n}", b.pos)
            if b.rank < 1:
                raise self.fail(EvalError, "rank must be positive", b.pos)
            return pullback_bundle(InstantonData(b.rank, b.b, b.k, p))
        raise TypeError(b)

    def dimension(self, V: FormalBundle, pos) -> int:
        try:
            return framed_dimension(V, self.require_space()).dimension
        except FormalDataError as exc:
            raise self.fail(EvalError, str(exc), pos) from exc

    # -- statements
    def run(self, script: dsl.Script) -> list[Output]:
        """Execute every statement; ``self.outputs`` keeps the results produced
        before a failing statement."""
        self.outputs = outputs = []
        for self.index, stmt in enumerate(script.statements):
            self.pos = stmt.pos
            try:
                out = self.statement(stmt)
            except DslError:
                raise
            except (ValueError, PresentationMismatch) as exc:
                raise self.fail(EvalError, str(exc)) from exc
            if out is not None:
                outputs.append(out)
        return outputs

    def statement(self, s) -> Output | None:
        i = self.index
        if isinstance(s, dsl.SpaceDef):
            a = s.a if s.a is not None else (1,) * s.n
            self.space = build_presentation(s.n, a, s.c2 or "paper")
            self.classes.clear()
            self.bundles.clear()
            return None
        if isinstance(s, dsl.LetDef):
            self.classes[s.name] = self.eval(s.expr)
            return None
        if isinstance(s, dsl.BundleDef):
            if s.rank < 1:
                raise self.fail(EvalError, "rank must be positive")
            c1 = self.homogeneous(s.c1, 1, "c1")
            c2 = self.homogeneous(s.c2, 2, "c2")
            c3 = (self.homogeneous(s.c3, 3, "c3") if s.c3 is not None
                  else CohomologyClass.zero(c1.ring))
            self.bundles[s.name] = FormalBundle(s.rank, c1, c2, c3)
            return None
        if isinstance(s, dsl.BundleAlias):
            self.bundles[s.name] = self.bundle(s.value)
            return None
        if isinstance(s, dsl.Assertion):
            lhs, rhs = self.eval(s.lhs), self.eval(s.rhs)
            text = f"{dsl.print_expr(s.lhs)} == {dsl.print_expr(s.rhs)}"
            if lhs != rhs:
                raise self.fail(AssertionFailed,
                                f"{text}: left is {render(lhs)}, right is {render(rhs)}")
            return Output(i, "assert", f"assert {text}: pass", passed=True)
        return self.query(s)

    def query(self, q: dsl.Query) -> Output:
        i = self.index
        if q.kind == "print":
            c = self.eval(q.arg)
            return Output(i, "print", render(c), render(c))
        if q.kind == "chi":
            chi = euler_characteristic(self.bundle(q.arg), self.require_space())
            return Output(i, "chi", f"chi({dsl.print_bundle(q.arg)}) = {fraction_text(chi)}",
                          json_number(chi))
        if q.kind == "dim":
            d = self.dimension(self.bundle(q.arg), q.pos)
            return Output(i, "dim", f"dim {dsl.print_bundle(q.arg)} = {d}", d)
        if q.kind == "verify":
            return self.verify(q.arg)
        if q.kind == "sweep":
            return self.sweep(q)
        raise TypeError(q.kind)

    def verify(self, target: str) -> Output:
        i = self.index
        p = self.require_space()
        if target == "canonical":
            ok = canonical_class_check(p)
        elif target == "identities":
            ok = verify_identities(p).passed
        elif target in ("lemma2.5", "lemma25"):
            report = sweep([p.n], range(1, 4), range(0, 7), a_vectors=[p.a],
                           modes=[p.c2_mode], identities=False)
            ok = report.passed
        elif target in self.bundles:
            d = self.standard_difference(self.bundles[target])
            ok = d == 0
        else:
            raise self.fail(UnboundError, f"unknown verification target {target!r}")
        return Output(i, "verify", f"verify {target}: {'pass' if ok else 'FAIL'}", passed=ok)

    def standard_difference(self, V: FormalBundle) -> Fraction:
        p = self.require_space()
        E = end_bundle(V)
        return (euler_characteristic(twist(E, -p.S), p)
                - euler_characteristic(twist(E, -p.Sbar), p))

    def sweep(self, q: dsl.Query) -> Output:
        opts: dict[str, str] = {}
        for key, op, value in q.options:
            if key not in SWEEP_KEYS:
                raise self.fail(EvalError, f"unknown sweep option {key!r}")
            opts[key] = value
        target = q.arg or "lemma2.5"
        if target not in ("lemma2.5", "lemma25"):
            raise self.fail(UnboundError, f"sweep can only verify lemma2.5, got {target!r}")
        try:
            n_max, r_max, k_max = (int(opts.get(k, d)) for k, d in (("n", 4), ("r", 3), ("k", 6)))
            k_min = int(opts.get("kmin", 0))
            samples = int(opts["samples"]) if "samples" in opts else None
        except ValueError as exc:
            raise self.fail(EvalError, f"sweep bounds must be integers: {exc}") from exc
        route = opts.get("route", "both")
        routes = ["standard", "paper"] if route == "both" else [route]
        mode = opts.get("mode", "paper")
        modes = ["paper", "normalized"] if mode == "both" else [mode]
        b_values = (-1, 0, 1) if opts.get("b", "0") == "all" else (0,)
        report = sweep(range(0, n_max + 1), range(1, r_max + 1), range(k_min, k_max + 1),
                       b_values=b_values, b_samples=samples, routes=routes, modes=modes)
        text = (f"sweep: {'pass' if report.passed else 'FAIL'} "
                f"({len(report.cases)} cases, {len(report.counterexamples)} counterexamples)")
        return Output(self.index, "sweep", text, report.to_json(), passed=report.passed)


def execute(script: dsl.Script) -> list[Output]:
    """Run a parsed script; raises :class:`DslError` subclasses on failure."""
    return Interpreter().run(script)


def run_text(text: str) -> list[Output]:
    return execute(dsl.parse(text))
