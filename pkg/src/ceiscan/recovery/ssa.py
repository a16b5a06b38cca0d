"""Single-assignment view of a basic block's stack effects.

Each value is defined exactly once; constant propagation folds
arithmetic over constant operands so that jump targets materialize as
constants even when the PUSH sits blocks away from the JUMP.
"""

from dataclasses import dataclass, field
from typing import Optional

from ..evm import opcodes
from ..evm.blocks import BasicBlock

U256 = (1 << 256) - 1

# Opcodes folded during constant propagation; everything else yields an
# opaque computed value. All arithmetic is modulo 2**256.
_FOLDS = {
    "ADD": lambda a, b: (a + b) & U256,
    "SUB": lambda a, b: (a - b) & U256,
    "MUL": lambda a, b: (a * b) & U256,
    "DIV": lambda a, b: 0 if b == 0 else a // b,
    "EXP": lambda a, b: pow(a, b, 1 << 256),
    "AND": lambda a, b: a & b,
    "OR": lambda a, b: a | b,
    "XOR": lambda a, b: a ^ b,
    "SHL": lambda a, b: (b << a) & U256 if a < 256 else 0,
    "SHR": lambda a, b: b >> a if a < 256 else 0,
    "NOT": lambda a: a ^ U256,
}


@dataclass
class Const:
    value: int


@dataclass
class StackInput:
    depth: int  # 0 = top of the entry stack


@dataclass
class Computed:
    op: str
    args: tuple  # value indexes; ("copy", (v,)) models DUP


@dataclass
class SsaValue:
    id: int
    def_block: int
    origin: object
    used: bool = False


@dataclass
class SsaBlock:
    block_id: int
    values: list[SsaValue] = field(default_factory=list)
    exit_stack: list[int] = field(default_factory=list)  # value ids, last = top
    inputs_created: int = 0
    jump_operand: Optional[int] = None  # value id consumed by JUMP/JUMPI

    def constant_value(self, vid: int) -> Optional[int]:
        """Resolve a value to a constant through copy chains, if possible."""
        origin = self.values[vid].origin
        while isinstance(origin, Computed) and origin.op == "copy":
            origin = self.values[origin.args[0]].origin
        if isinstance(origin, Const):
            return origin.value
        return None


def to_ssa(block: BasicBlock) -> SsaBlock:
    sb = SsaBlock(block.id)
    stack: list[int] = []

    def define(origin) -> int:
        sb.values.append(SsaValue(len(sb.values), block.id, origin))
        return len(sb.values) - 1

    def ensure(n):
        # Underflow materializes entry-stack slots; the i-th created input
        # is the entry slot at depth i.
        while len(stack) < n:
            stack.insert(0, define(StackInput(sb.inputs_created)))
            sb.inputs_created += 1

    def pop() -> int:
        ensure(1)
        vid = stack.pop()
        sb.values[vid].used = True
        return vid

    for ins in block.instructions:
        name = ins.opcode
        if opcodes.is_push(name):
            stack.append(define(Const(ins.push_value or 0)))
            continue
        if name.startswith("DUP"):
            n = int(name[3:])
            ensure(n)
            src = stack[-n]
            sb.values[src].used = True
            stack.append(define(Computed("copy", (src,))))
            continue
        if name.startswith("SWAP"):
            n = int(name[4:])
            ensure(n + 1)
            stack[-1], stack[-n - 1] = stack[-n - 1], stack[-1]
            continue
        info = opcodes.TABLE.get(ins.raw)
        if info is None:
            continue  # INVALID byte: no stack effect worth modeling
        args = tuple(pop() for _ in range(info.pops))
        if name in ("JUMP", "JUMPI"):
            sb.jump_operand = args[0]
        if info.pushes:
            fold = _FOLDS.get(name)
            if fold is not None:
                consts = [sb.constant_value(a) for a in args]
                if all(c is not None for c in consts):
                    stack.append(define(Const(fold(*consts))))
                    continue
            stack.append(define(Computed(name, args)))

    sb.exit_stack = stack
    return sb
