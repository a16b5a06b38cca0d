"""Tseitin bit-blasting of word terms onto the SAT core.

Cheap operators (bitwise logic, add/sub, constant shifts, comparisons,
multiplication by constants) are encoded structurally. Expensive ones
(div/mod/exp, variable shifts, var*var products, sha3) are relaxed to
fresh variables and repaired by model-based refinement in the solver
layer; relaxation only adds models, so unsat answers stay sound.

``width`` is parameterizable so tests can exhaustively check the
encodings at small widths.
"""

from . import terms as T
from .sat import SatSolver

RELAXED_OPS = {"DIV", "SDIV", "MOD", "SMOD", "EXP", "ADDMOD", "MULMOD",
               "SHA3", "SIGNEXTEND", "SAR"}


class BitBlaster:
    def __init__(self, sat: SatSolver, width: int = 256):
        self.sat = sat
        self.width = width
        t = sat.new_var()
        sat.add_clause([t])
        self.TRUE = t
        self.FALSE = -t
        self.var_bits: dict[str, list[int]] = {}
        self.term_bits: dict[int, list[int]] = {}
        self.relaxed: dict[int, T.Term] = {}   # id(term) -> term
        self._gates: dict = {}

    # -- gates ---------------------------------------------------------

    def _and(self, a, b):
        if a == self.FALSE or b == self.FALSE:
            return self.FALSE
        if a == self.TRUE:
            return b
        if b == self.TRUE:
            return a
        if a == b:
            return a
        if a == -b:
            return self.FALSE
        key = ("and",) + tuple(sorted((a, b)))
        g = self._gates.get(key)
        if g is None:
            g = self.sat.new_var()
            self.sat.add_clause([-g, a])
            self.sat.add_clause([-g, b])
            self.sat.add_clause([g, -a, -b])
            self._gates[key] = g
        return g

    def _or(self, a, b):
        return -self._and(-a, -b)

    def _xor(self, a, b):
        if a == self.FALSE:
            return b
        if b == self.FALSE:
            return a
        if a == self.TRUE:
            return -b
        if b == self.TRUE:
            return -a
        if a == b:
            return self.FALSE
        if a == -b:
            return self.TRUE
        key = ("xor",) + tuple(sorted((abs(a), abs(b))))
        sign = (a < 0) != (b < 0)
        g = self._gates.get(key)
        if g is None:
            x, y = abs(a), abs(b)
            g = self.sat.new_var()
            self.sat.add_clause([-g, x, y])
            self.sat.add_clause([-g, -x, -y])
            self.sat.add_clause([g, -x, y])
            self.sat.add_clause([g, x, -y])
            self._gates[key] = g
        return -g if sign else g

    # -- word encodings (bit lists are LSB first) ----------------------

    def _const_bits(self, value):
        value &= (1 << self.width) - 1
        return [self.TRUE if (value >> i) & 1 else self.FALSE
                for i in range(self.width)]

    def _fresh_bits(self):
        return [self.sat.new_var() for _ in range(self.width)]

    def _add(self, a, b, carry):
        out = []
        for i in range(self.width):
            axb = self._xor(a[i], b[i])
            out.append(self._xor(axb, carry))
            carry = self._or(self._and(a[i], b[i]), self._and(axb, carry))
        return out

    def _lt(self, a, b):
        # Unsigned a < b via the borrow of a - b.
        borrow = self.FALSE
        for i in range(self.width):
            na = -a[i]
            t1 = self._and(na, b[i])
            t2 = self._or(na, b[i])
            borrow = self._or(t1, self._and(t2, borrow))
        return borrow

    def _eq(self, a, b):
        acc = self.TRUE
        for i in range(self.width):
            acc = self._and(acc, -self._xor(a[i], b[i]))
        return acc

    def _bool_word(self, lit):
        return [lit] + [self.FALSE] * (self.width - 1)

    def _relax(self, term):
        bits = self._fresh_bits()
        self.relaxed[id(term)] = term
        return bits

    def blast(self, term: T.Term) -> list[int]:
        cached = self.term_bits.get(id(term))
        if cached is not None:
            return cached
        bits = self._blast(term)
        self.term_bits[id(term)] = bits
        return bits

    def _blast(self, term):
        w = self.width
        if term.is_const:
            return self._const_bits(term.value)
        if term.kind == "var":
            if term.name not in self.var_bits:
                self.var_bits[term.name] = self._fresh_bits()
            return self.var_bits[term.name]

        name = term.op
        if name in RELAXED_OPS:
            return self._relax(term)
        args = term.args

        if name == "ADD":
            return self._add(self.blast(args[0]), self.blast(args[1]), self.FALSE)
        if name == "SUB":
            b = [-x for x in self.blast(args[1])]
            return self._add(self.blast(args[0]), b, self.TRUE)
        if name == "NOT":
            return [-x for x in self.blast(args[0])]
        if name in ("AND", "OR", "XOR"):
            a, b = self.blast(args[0]), self.blast(args[1])
            gate = {"AND": self._and, "OR": self._or, "XOR": self._xor}[name]
            return [gate(a[i], b[i]) for i in range(w)]
        if name in ("SHL", "SHR"):
            if not args[0].is_const:
                return self._relax(term)
            shift = args[0].value
            v = self.blast(args[1])
            if shift >= w:
                return [self.FALSE] * w
            if name == "SHL":
                return [self.FALSE] * shift + v[:w - shift]
            return v[shift:] + [self.FALSE] * shift
        if name == "MUL":
            ca, cb = args[0], args[1]
            if cb.is_const and not ca.is_const:
                ca, cb = cb, ca
            if not ca.is_const or bin(ca.value).count("1") > 48:
                return self._relax(term)
            acc = self._const_bits(0)
            v = self.blast(cb)
            for i in range(min(w, ca.value.bit_length())):
                if (ca.value >> i) & 1:
                    shifted = [self.FALSE] * i + v[:w - i]
                    acc = self._add(acc, shifted, self.FALSE)
            return acc
        if name == "LT":
            return self._bool_word(self._lt(self.blast(args[0]), self.blast(args[1])))
        if name == "GT":
            return self._bool_word(self._lt(self.blast(args[1]), self.blast(args[0])))
        if name in ("SLT", "SGT"):
            a = list(self.blast(args[0]))
            b = list(self.blast(args[1]))
            a[w - 1] = -a[w - 1]
            b[w - 1] = -b[w - 1]
            if name == "SLT":
                return self._bool_word(self._lt(a, b))
            return self._bool_word(self._lt(b, a))
        if name == "EQ":
            return self._bool_word(self._eq(self.blast(args[0]), self.blast(args[1])))
        if name == "ISZERO":
            bits = self.blast(args[0])
            nonzero = self.FALSE
            for x in bits:
                nonzero = self._or(nonzero, x)
            return self._bool_word(-nonzero)
        if name == "BYTE":
            if not args[0].is_const:
                return self._relax(term)
            i = args[0].value
            if i >= w // 8:
                return self._const_bits(0)
            v = self.blast(args[1])
            lo = 8 * (w // 8 - 1 - i)
            return v[lo:lo + 8] + [self.FALSE] * (w - 8)
        return self._relax(term)

    # -- assertions ----------------------------------------------------

    def assert_nonzero(self, term):
        bits = self.blast(term)
        if any(x == self.TRUE for x in bits):
            return
        self.sat.add_clause([x for x in bits if x != self.FALSE] or [self.FALSE])

    def assert_zero(self, term):
        for x in self.blast(term):
            if x != self.FALSE:
                self.sat.add_clause([-x])

    # -- model decoding ------------------------------------------------

    def decode_bits(self, bits, model):
        value = 0
        for i, lit in enumerate(bits):
            if lit == self.TRUE:
                value |= 1 << i
            elif lit == self.FALSE:
                continue
            else:
                if model.get(abs(lit), False) == (lit > 0):
                    value |= 1 << i
        return value

    def decode_env(self, model):
        return {name: self.decode_bits(bits, model)
                for name, bits in self.var_bits.items()}

    def add_refinement(self, term, env, real_value):
        """Clause set: args at their current values force the real result."""
        mismatch = []
        for arg in term.args:
            arg_bits = self.blast(arg)
            arg_val = T.evaluate(arg, env)
            for i, lit in enumerate(arg_bits):
                want = (arg_val >> i) & 1
                if lit == self.TRUE or lit == self.FALSE:
                    continue
                mismatch.append(-lit if want else lit)
        out_bits = self.term_bits[id(term)]
        for i, lit in enumerate(out_bits):
            want = (real_value >> i) & 1
            if lit == self.TRUE or lit == self.FALSE:
                continue
            self.sat.add_clause(mismatch + ([lit] if want else [-lit]))
