"""Linear-sweep disassembler for EVM runtime bytecode.

Disassembly is total: unknown opcode bytes become INVALID instructions
and a PUSH whose immediate runs past end-of-code keeps the truncated
bytes but is marked INVALID. Every input byte is consumed exactly once,
so re-serializing reproduces the input.
"""

from dataclasses import dataclass
from typing import Optional

from . import opcodes


@dataclass(frozen=True)
class Instruction:
    offset: int
    opcode: str            # mnemonic; "INVALID" for unknown or truncated-PUSH bytes
    raw: int               # original opcode byte
    immediate: Optional[bytes] = None

    @property
    def size(self) -> int:
        return 1 + (len(self.immediate) if self.immediate is not None else 0)

    @property
    def push_value(self) -> Optional[int]:
        if self.immediate is None:
            return None
        return int.from_bytes(self.immediate, "big")

    def __str__(self):
        if self.immediate is not None:
            return f"0x{self.offset:x} {self.opcode} 0x{self.immediate.hex()}"
        return f"0x{self.offset:x} {self.opcode}"


def disassemble(code: bytes) -> list[Instruction]:
    """Decode ``code`` into instructions covering every byte once."""
    out = []
    pc = 0
    end = len(code)
    while pc < end:
        byte = code[pc]
        info = opcodes.TABLE.get(byte)
        if info is None:
            out.append(Instruction(pc, "INVALID", byte))
            pc += 1
            continue
        if info.immediate:
            imm = code[pc + 1:pc + 1 + info.immediate]
            if len(imm) < info.immediate:
                # Truncated PUSH at end of code (usually metadata).
                out.append(Instruction(pc, "INVALID", byte, bytes(imm)))
                pc = end
                continue
            out.append(Instruction(pc, info.name, byte, bytes(imm)))
            pc += 1 + info.immediate
            continue
        if info.name == "PUSH0":
            out.append(Instruction(pc, "PUSH0", byte, b""))
        else:
            out.append(Instruction(pc, info.name, byte))
        pc += 1
    return out


def reserialize(instructions: list[Instruction]) -> bytes:
    out = bytearray()
    for ins in instructions:
        out.append(ins.raw)
        if ins.immediate:
            out += ins.immediate
    return bytes(out)
