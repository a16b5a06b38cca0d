from hypothesis import given, strategies as st

from ceiscan.evm.disasm import disassemble, reserialize


def ops(instructions):
    return [(i.offset, i.opcode, i.push_value) for i in instructions]


def test_empty():
    assert disassemble(b"") == []


def test_push_jump_jumpdest():
    out = ops(disassemble(bytes.fromhex("6001565b")))
    assert out == [(0, "PUSH1", 1), (2, "JUMP", None), (3, "JUMPDEST", None)]


def test_solidity_prologue():
    # Cross-checked against the reference opcode table: 60=PUSH1,
    # 52=MSTORE, 34=CALLVALUE.
    out = ops(disassemble(bytes.fromhex("608060405234")))
    assert out == [
        (0, "PUSH1", 0x80),
        (2, "PUSH1", 0x40),
        (4, "MSTORE", None),
        (5, "CALLVALUE", None),
    ]


def test_unknown_opcode_is_invalid():
    ins = disassemble(b"\x0c")[0]
    assert ins.opcode == "INVALID" and ins.raw == 0x0C


def test_truncated_push_marked_invalid():
    out = disassemble(bytes.fromhex("61aa"))  # PUSH2 with one byte left
    assert len(out) == 1
    assert out[0].opcode == "INVALID"
    assert out[0].immediate == b"\xaa"


def test_push0():
    ins = disassemble(b"\x5f")[0]
    assert ins.opcode == "PUSH0" and ins.push_value == 0


def test_offsets_strictly_increase():
    out = disassemble(bytes.fromhex("7f" + "11" * 32 + "6001015b00"))
    for prev, cur in zip(out, out[1:]):
        assert cur.offset == prev.offset + prev.size


@given(st.binary(max_size=400))
def test_roundtrip(code):
    assert reserialize(disassemble(code)) == code


@given(st.binary(max_size=400))
def test_every_byte_consumed_once(code):
    total = sum(i.size for i in disassemble(code))
    assert total == len(code)
