"""Hash-consed 256-bit terms with construction-time simplification.

Argument order follows EVM pop order everywhere (first argument = top
of stack): sub(a, b) is a - b, shl(shift, value), lt(a, b) is a < b.
Boolean facts are plain words asserted nonzero by the solver layer.

sha3 terms keep their preimage structure (byte length followed by the
32-byte words covering it); storage-slot provenance is recovered from
that structure and concrete evaluation hashes for real.
"""

from ..evm.keccak import keccak256

U256 = (1 << 256) - 1
_SIGN = 1 << 255


def _sgn(x):
    return x - (1 << 256) if x & _SIGN else x


class Term:
    __slots__ = ("kind", "op", "value", "name", "args", "_hash")

    def __init__(self, kind, op=None, value=None, name=None, args=()):
        self.kind = kind      # "const" | "var" | "op"
        self.op = op
        self.value = value
        self.name = name
        self.args = args
        self._hash = hash((kind, op, value, name, tuple(id(a) for a in args)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.kind == "const":
            return f"0x{self.value:x}"
        if self.kind == "var":
            return self.name
        return f"{self.op}({', '.join(map(repr, self.args))})"

    @property
    def is_const(self):
        return self.kind == "const"


_interned: dict = {}


def _mk(kind, op=None, value=None, name=None, args=()):
    key = (kind, op, value, name, tuple(id(a) for a in args))
    t = _interned.get(key)
    if t is None:
        t = Term(kind, op, value, name, args)
        _interned[key] = t
    return t


def const(value: int) -> Term:
    return _mk("const", value=value & U256)


def var(name: str) -> Term:
    return _mk("var", name=name)


ZERO = const(0)
ONE = const(1)

_FOLDS = {
    "ADD": lambda a, b: a + b,
    "SUB": lambda a, b: a - b,
    "MUL": lambda a, b: a * b,
    "DIV": lambda a, b: 0 if b == 0 else a // b,
    "SDIV": lambda a, b: 0 if b == 0 else (
        abs(_sgn(a)) // abs(_sgn(b)) * (-1 if (_sgn(a) < 0) != (_sgn(b) < 0) else 1)),
    "MOD": lambda a, b: 0 if b == 0 else a % b,
    "SMOD": lambda a, b: 0 if b == 0 else (
        abs(_sgn(a)) % abs(_sgn(b)) * (-1 if _sgn(a) < 0 else 1)),
    "EXP": lambda a, b: pow(a, b, 1 << 256),
    "AND": lambda a, b: a & b,
    "OR": lambda a, b: a | b,
    "XOR": lambda a, b: a ^ b,
    "NOT": lambda a: a ^ U256,
    "SHL": lambda s, v: (v << s) if s < 256 else 0,
    "SHR": lambda s, v: v >> s if s < 256 else 0,
    "SAR": lambda s, v: (_sgn(v) >> s) if s < 256 else (0 if not v & _SIGN else U256),
    "LT": lambda a, b: int(a < b),
    "GT": lambda a, b: int(a > b),
    "SLT": lambda a, b: int(_sgn(a) < _sgn(b)),
    "SGT": lambda a, b: int(_sgn(a) > _sgn(b)),
    "EQ": lambda a, b: int(a == b),
    "ISZERO": lambda a: int(a == 0),
    "BYTE": lambda i, x: (x >> (8 * (31 - i))) & 0xFF if i < 32 else 0,
    "SIGNEXTEND": lambda k, v: _signextend(k, v),
    "ADDMOD": lambda a, b, n: 0 if n == 0 else (a + b) % n,
    "MULMOD": lambda a, b, n: 0 if n == 0 else (a * b) % n,
}


def _signextend(k, v):
    if k >= 31:
        return v
    bit = 8 * (k + 1) - 1
    if v & (1 << bit):
        return v | (U256 ^ ((1 << (bit + 1)) - 1))
    return v & ((1 << (bit + 1)) - 1)


def op(name: str, *args: Term) -> Term:
    """Build an operator term, folding and simplifying where safe."""
    fold = _FOLDS.get(name)
    if fold is not None and all(a.is_const for a in args):
        return const(fold(*(a.value for a in args)))

    a = args[0] if args else None
    b = args[1] if len(args) > 1 else None

    if name == "ADD":
        if a.is_const and a.value == 0:
            return b
        if b.is_const and b.value == 0:
            return a
    elif name == "SUB":
        if b.is_const and b.value == 0:
            return a
        if a is b:
            return ZERO
    elif name == "MUL":
        for x, y in ((a, b), (b, a)):
            if x.is_const:
                if x.value == 0:
                    return ZERO
                if x.value == 1:
                    return y
    elif name == "AND":
        for x, y in ((a, b), (b, a)):
            if x.is_const:
                if x.value == 0:
                    return ZERO
                if x.value == U256:
                    return y
        if a is b:
            return a
    elif name == "OR":
        for x, y in ((a, b), (b, a)):
            if x.is_const:
                if x.value == 0:
                    return y
                if x.value == U256:
                    return const(U256)
        if a is b:
            return a
    elif name == "XOR":
        if a is b:
            return ZERO
        for x, y in ((a, b), (b, a)):
            if x.is_const and x.value == 0:
                return y
    elif name == "EQ":
        if a is b:
            return ONE
    elif name in ("LT", "GT"):
        if a is b:
            return ZERO
    elif name == "ISZERO":
        # ISZERO(ISZERO(x)) normalizes truthiness; a third collapses.
        if a.kind == "op" and a.op == "ISZERO":
            inner = a.args[0]
            if inner.kind == "op" and inner.op in ("LT", "GT", "SLT", "SGT",
                                                   "EQ", "ISZERO"):
                return inner
    elif name == "SHR" and a is not None and a.is_const:
        shift = a.value
        if shift == 0:
            return b
        if shift >= 256:
            return ZERO
        if b.kind == "op" and b.op == "OR":
            return op("OR", op("SHR", a, b.args[0]), op("SHR", a, b.args[1]))
        if b.kind == "op" and b.op == "SHR" and b.args[0].is_const:
            return op("SHR", const(shift + b.args[0].value), b.args[1])
        if b.kind == "op" and b.op == "SHL" and b.args[0].is_const \
                and b.args[0].value == shift:
            # SHL then SHR by the same amount clears the top bits.
            return op("AND", b.args[1], const(U256 >> shift))
    elif name == "SHL" and a is not None and a.is_const:
        if a.value == 0:
            return b
        if a.value >= 256:
            return ZERO

    return _mk("op", op=name, args=tuple(args))


def sha3(length: int, *words: Term) -> Term:
    return op("SHA3", const(length), *words)


def evaluate(term: Term, env: dict) -> int:
    """Concrete evaluation; free variables default to 0, sha3 is real."""
    memo = {}

    def go(t):
        r = memo.get(id(t))
        if r is not None:
            return r
        if t.kind == "const":
            r = t.value
        elif t.kind == "var":
            r = env.get(t.name, 0) & U256
        elif t.op == "SHA3":
            length = go(t.args[0])
            blob = b"".join(go(w).to_bytes(32, "big") for w in t.args[1:])
            r = int.from_bytes(keccak256(blob[:length]), "big")
        else:
            r = _FOLDS[t.op](*(go(a) for a in t.args)) & U256
        memo[id(t)] = r
        return r

    return go(term)


def free_vars(term: Term) -> set:
    seen = set()
    out = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if id(t) in seen:
            continue
        seen.add(id(t))
        if t.kind == "var":
            out.add(t.name)
        stack.extend(t.args)
    return out


def substitute(term: Term, mapping: dict) -> Term:
    """Replace var terms by name; rebuilds (and re-simplifies) the tree."""
    memo = {}

    def go(t):
        r = memo.get(id(t))
        if r is not None:
            return r
        if t.kind == "var":
            r = mapping.get(t.name, t)
        elif t.kind == "const":
            r = t
        else:
            new_args = tuple(go(a) for a in t.args)
            r = t if all(n is o for n, o in zip(new_args, t.args)) \
                else op(t.op, *new_args)
        memo[id(t)] = r
        return r

    return go(term)
