from hypothesis import given, strategies as st

from ceiscan.evm import blocks as B
from ceiscan.evm.disasm import disassemble


def split(hexcode):
    return B.split_blocks(disassemble(bytes.fromhex(hexcode)))


def test_jump_then_jumpdest():
    out = split("600456" + "5b00")  # PUSH1 4; JUMP | JUMPDEST; STOP
    assert len(out) == 2
    assert [i.opcode for i in out[0].instructions] == ["PUSH1", "JUMP"]
    assert [i.opcode for i in out[1].instructions] == ["JUMPDEST", "STOP"]
    assert out[0].terminator_kind == B.PUSH_JUMP
    assert out[1].terminator_kind == B.HALT


def test_single_stop():
    out = split("00")
    assert len(out) == 1 and out[0].terminator_kind == B.HALT


def test_block_ids_sequential_and_jumpdest_alignment():
    # Two jump-connected regions with an intermediate block; the block
    # holding the bare JUMP is distinct from the constant-defining one.
    out = split("600d600756" + "5b56" + "5b00" + "5b600101")
    assert [b.id for b in out] == list(range(len(out)))
    for b in out:
        if b.starts_with_jumpdest():
            assert b.instructions[0].offset == b.start_offset


def test_orphan_vs_push_classification():
    out = split("60045690")  # PUSH1 4; JUMP | SWAP1...
    assert out[0].terminator_kind == B.PUSH_JUMP
    out = split("9056")  # SWAP1; JUMP -> target not from an immediate PUSH
    assert out[0].terminator_kind == B.ORPHAN_JUMP
    out = split("80600457")  # DUP1; PUSH1 4; JUMPI
    assert out[0].terminator_kind == B.CONDITIONAL_JUMP


def test_dup_then_jump_is_orphan():
    out = split("60048056")  # PUSH1 4; DUP1; JUMP
    assert out[0].terminator_kind == B.ORPHAN_JUMP


@given(st.binary(max_size=300))
def test_partition(code):
    instructions = disassemble(code)
    out = B.split_blocks(instructions)
    flattened = [i for b in out for i in b.instructions]
    assert flattened == instructions


@given(st.binary(max_size=300))
def test_only_last_instruction_transfers_control(code):
    for b in B.split_blocks(disassemble(code)):
        for ins in b.instructions[:-1]:
            assert ins.opcode not in ("JUMP", "JUMPI", "STOP", "RETURN",
                                      "REVERT", "SELFDESTRUCT", "INVALID")
