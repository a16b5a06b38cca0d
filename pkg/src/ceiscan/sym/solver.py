"""Satisfiability backends for path-constraint queries.

A query is a conjunction of word terms, each asserted nonzero. The
default backend is in-process: word-level quick models first, then
bit-blasting with model-based refinement of relaxed operators. An
SMT-LIB2 subprocess backend speaks the standard solver text format for
deployments that have a real solver binary configured.

Satisfiable answers always carry a concrete assignment for every free
variable; unsat is reported only when the propositional core proves it.
"""

import re
import subprocess
import time
from dataclasses import dataclass, field

from . import terms as T
from .bitblast import BitBlaster
from .sat import SatSolver

SAT = "satisfiable"
UNSAT = "unsatisfiable"
UNKNOWN = "unknown"


@dataclass
class SolveResult:
    status: str
    model: dict = field(default_factory=dict)

    @property
    def is_sat(self):
        return self.status == SAT


def _verifies(conjuncts, env):
    return all(T.evaluate(c, env) != 0 for c in conjuncts)


def _complete(env, conjuncts):
    for c in conjuncts:
        for name in T.free_vars(c):
            env.setdefault(name, 0)
    return env


def _quick_candidates(conjuncts):
    """Cheap word-level guesses: zeros plus pattern-harvested bindings."""
    yield {}
    env = {}
    for c in conjuncts:
        if c.kind == "op" and c.op == "EQ":
            a, b = c.args
            if b.is_const and a.kind == "var":
                env[a.name] = b.value
            elif a.is_const and b.kind == "var":
                env[b.name] = a.value
            elif b.is_const and a.kind == "op" and a.op == "SHR" \
                    and a.args[0].is_const and a.args[1].kind == "var":
                env[a.args[1].name] = b.value << a.args[0].value
            elif b.is_const and a.kind == "op" and a.op in ("DIV", "MUL") \
                    and a.args[1].is_const and a.args[0].kind == "var":
                if a.op == "DIV":
                    env[a.args[0].name] = b.value * a.args[1].value
                elif a.args[1].value:
                    env[a.args[0].name] = b.value // a.args[1].value
        if c.kind == "var":
            env.setdefault(c.name, 1)
    yield dict(env)
    bumped = dict(env)
    for c in conjuncts:
        for name in T.free_vars(c):
            bumped.setdefault(name, 1)
    yield bumped


class BuiltinSolver:
    """Bit-blasting backend over the internal CDCL core."""

    def __init__(self, max_refinements: int = 12):
        self.max_refinements = max_refinements

    def check(self, conjuncts, timeout: float = 10.0) -> SolveResult:
        deadline = time.monotonic() + timeout
        live = []
        for c in conjuncts:
            if c.is_const:
                if c.value == 0:
                    return SolveResult(UNSAT)
                continue
            live.append(c)
        if not live:
            return SolveResult(SAT, _complete({}, conjuncts))

        for env in _quick_candidates(live):
            if _verifies(live, env):
                return SolveResult(SAT, _complete(env, live))

        lemmas = []  # (term, env, real_value)
        for _ in range(self.max_refinements):
            sat = SatSolver()
            blaster = BitBlaster(sat)
            for c in live:
                blaster.assert_nonzero(c)
            for term, env, real in lemmas:
                if id(term) in blaster.relaxed or id(term) in blaster.term_bits:
                    blaster.add_refinement(term, env, real)
            status = sat.solve(deadline=deadline)
            if status == "unsat":
                return SolveResult(UNSAT)
            if status == "unknown":
                return SolveResult(UNKNOWN)
            model = sat.model()
            env = _complete(blaster.decode_env(model), live)
            if _verifies(live, env):
                return SolveResult(SAT, env)
            progressed = False
            for term in blaster.relaxed.values():
                assigned = blaster.decode_bits(blaster.term_bits[id(term)], model)
                real = T.evaluate(term, env)
                if assigned != real:
                    lemmas.append((term, dict(env), real))
                    progressed = True
            if not progressed:
                # Encoding gap; never report a model that does not verify.
                return SolveResult(UNKNOWN)
            if time.monotonic() > deadline:
                return SolveResult(UNKNOWN)
        return SolveResult(UNKNOWN)


def to_smtlib(conjuncts) -> str:
    """Render a query in SMT-LIB2 (QF_UFBV, 256-bit words)."""
    decls = []
    seen = set()
    sha3_arities = set()
    uses_exp = []

    def walk(t):
        if id(t) in seen:
            return
        seen.add(id(t))
        if t.kind == "var":
            decls.append(f"(declare-const {t.name} (_ BitVec 256))")
        elif t.kind == "op" and t.op == "SHA3":
            sha3_arities.add(len(t.args) - 1)
        elif t.kind == "op" and t.op == "EXP":
            uses_exp.append(t)
        for a in t.args:
            walk(a)

    OPS = {"ADD": "bvadd", "SUB": "bvsub", "MUL": "bvmul", "DIV": "bvudiv",
           "SDIV": "bvsdiv", "MOD": "bvurem", "SMOD": "bvsrem",
           "AND": "bvand", "OR": "bvor", "XOR": "bvxor", "SHL": "bvshl",
           "SHR": "bvlshr", "SAR": "bvashr"}
    CMPS = {"LT": "bvult", "GT": "bvugt", "SLT": "bvslt", "SGT": "bvsgt"}

    def render(t):
        if t.is_const:
            return f"(_ bv{t.value} 256)"
        if t.kind == "var":
            return t.name
        name = t.op
        if name in OPS:
            a, b = (render(x) for x in t.args)
            if name in ("SHL", "SHR", "SAR"):
                a, b = b, a  # smtlib shifts take (value, amount)
            return f"({OPS[name]} {a} {b})"
        if name in CMPS:
            return (f"(ite ({CMPS[name]} {render(t.args[0])} {render(t.args[1])}) "
                    f"(_ bv1 256) (_ bv0 256))")
        if name == "EQ":
            return (f"(ite (= {render(t.args[0])} {render(t.args[1])}) "
                    f"(_ bv1 256) (_ bv0 256))")
        if name == "ISZERO":
            return (f"(ite (= {render(t.args[0])} (_ bv0 256)) "
                    f"(_ bv1 256) (_ bv0 256))")
        if name == "NOT":
            return f"(bvnot {render(t.args[0])})"
        if name == "SHA3":
            arity = len(t.args) - 1
            inner = " ".join(render(a) for a in t.args)
            return f"(sha3_{arity} {inner})"
        if name == "EXP":
            return f"(exp_uf {render(t.args[0])} {render(t.args[1])})"
        raise ValueError(f"no smtlib rendering for {name}")

    for c in conjuncts:
        walk(c)
    lines = ["(set-logic QF_UFBV)"]
    lines += sorted(set(decls))
    for arity in sorted(sha3_arities):
        argdecl = " ".join(["(_ BitVec 256)"] * (arity + 1))
        lines.append(f"(declare-fun sha3_{arity} ({argdecl}) (_ BitVec 256))")
    if uses_exp:
        lines.append("(declare-fun exp_uf ((_ BitVec 256) (_ BitVec 256)) "
                     "(_ BitVec 256))")
    for c in conjuncts:
        lines.append(f"(assert (distinct {render(c)} (_ bv0 256)))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines)


class SmtLibSolver:
    """Subprocess backend speaking the standard solver text format."""

    def __init__(self, command: list[str]):
        self.command = command

    def check(self, conjuncts, timeout: float = 10.0) -> SolveResult:
        script = to_smtlib(conjuncts)
        try:
            proc = subprocess.run(self.command, input=script, text=True,
                                  capture_output=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return SolveResult(UNKNOWN)
        out = proc.stdout
        if out.startswith("unsat"):
            return SolveResult(UNSAT)
        if not out.startswith("sat"):
            return SolveResult(UNKNOWN)
        model = {}
        for name, hexval in re.findall(
                r"\(define-fun\s+(\S+)\s+\(\)\s+\(_ BitVec \d+\)\s+#x([0-9a-fA-F]+)\)",
                out):
            model[name] = int(hexval, 16)
        for name, binval in re.findall(
                r"\(define-fun\s+(\S+)\s+\(\)\s+\(_ BitVec \d+\)\s+#b([01]+)\)",
                out):
            model[name] = int(binval, 2)
        env = {k: v for k, v in model.items() if not k.startswith("sha3_")}
        for c in conjuncts:
            for v in T.free_vars(c):
                env.setdefault(v, 0)
        return SolveResult(SAT, env)


def solve(constraints, timeout: float = 10.0, backend=None) -> SolveResult:
    """Backend-agnostic entry point used by the executor."""
    backend = backend or BuiltinSolver()
    return backend.check(list(constraints), timeout)
