"""Basic-block splitting over a disassembly.

Boundaries fall after JUMP/JUMPI/halting opcodes and before every
JUMPDEST; block ids are sequential in offset order.
"""

from dataclasses import dataclass

from . import opcodes
from .disasm import Instruction

PUSH_JUMP = "push-jump"
ORPHAN_JUMP = "orphan-jump"
CONDITIONAL_JUMP = "conditional-jump"
FALLTHROUGH = "fallthrough"
HALT = "halt"


@dataclass(frozen=True)
class BasicBlock:
    id: int
    start_offset: int
    instructions: tuple[Instruction, ...]
    terminator_kind: str

    @property
    def last(self) -> Instruction:
        return self.instructions[-1]

    @property
    def end_offset(self) -> int:
        return self.last.offset + self.last.size

    def starts_with_jumpdest(self) -> bool:
        return self.instructions[0].opcode == "JUMPDEST"

    def pushed_jump_target(self):
        """Immediate of the PUSH directly before a terminating JUMP/JUMPI.

        None for orphan jumps and non-jump terminators.
        """
        if self.last.opcode not in ("JUMP", "JUMPI") or len(self.instructions) < 2:
            return None
        prev = self.instructions[-2]
        if opcodes.is_push(prev.opcode):
            return prev.push_value
        return None


def _terminator_kind(instructions) -> str:
    last = instructions[-1]
    if last.opcode in opcodes.HALTING:
        return HALT
    if last.opcode == "JUMPI":
        return CONDITIONAL_JUMP
    if last.opcode == "JUMP":
        prev = instructions[-2] if len(instructions) > 1 else None
        if prev is not None and opcodes.is_push(prev.opcode):
            return PUSH_JUMP
        return ORPHAN_JUMP
    return FALLTHROUGH


def split_blocks(instructions: list[Instruction]) -> list[BasicBlock]:
    """Partition a disassembly into basic blocks covering it exactly once."""
    if not instructions:
        return []
    groups = []
    current = []
    for ins in instructions:
        if ins.opcode == "JUMPDEST" and current:
            groups.append(current)
            current = []
        current.append(ins)
        if ins.opcode in opcodes.TERMINATORS:
            groups.append(current)
            current = []
    if current:
        groups.append(current)
    return [
        BasicBlock(i, g[0].offset, tuple(g), _terminator_kind(g))
        for i, g in enumerate(groups)
    ]
