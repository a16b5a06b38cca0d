from ceiscan.evm import cfg as C
from ceiscan.evm.blocks import split_blocks
from ceiscan.evm.concrete import Account, Chain, Interpreter
from ceiscan.evm.disasm import disassemble


def build(hexcode):
    return C.static_stack_emulate(split_blocks(disassemble(bytes.fromhex(hexcode))))


def test_push_jump_edge():
    g = build("600356" + "5b00")  # PUSH1 3; JUMP | JUMPDEST; STOP
    dest = g.block_at_offset(3)
    assert (0, dest.id, C.JUMP) in g.edges
    assert g.unresolved == frozenset()


def test_orphan_jump_unresolved():
    g = build("9056" + "5b00")  # SWAP1; JUMP | JUMPDEST; STOP
    assert 0 in g.unresolved
    assert not g.jump_edges()


def test_jumpi_both_arms():
    g = build("6001600657" + "00" + "5b00")
    taken = g.block_at_offset(6)
    fall = g.block_at_offset(5)
    assert (0, taken.id, C.BRANCH_TAKEN) in g.edges
    assert (0, fall.id, C.BRANCH_FALLTHROUGH) in g.edges


def test_sequential_fallthrough():
    g = build("6001" + "5b00")  # PUSH1 1 | JUMPDEST; STOP
    assert (0, 1, C.SEQUENTIAL) in g.edges


def test_push_target_not_jumpdest_is_diagnosed():
    g = build("600356" + "00")  # jump to offset 3 which is STOP
    assert 0 in g.unresolved
    assert g.diagnostics


def test_unresolved_is_exactly_jump_blocks_without_jump_edges():
    g = build("600456" + "5b9056" + "5b00")
    jump_blocks = {b.id for b in g.blocks.values()
                   if b.last.opcode in ("JUMP", "JUMPI")}
    with_edges = {s for s, _, k in g.edges if k in (C.JUMP, C.BRANCH_TAKEN)}
    assert g.unresolved == frozenset(jump_blocks - with_edges)


def test_edge_targets_start_with_jumpdest():
    g = build("6001600857" + "600456" + "5b00" + "5b00")
    for src, dst, kind in g.edges:
        if kind in (C.JUMP, C.BRANCH_TAKEN):
            assert g.blocks[dst].starts_with_jumpdest()


def test_jump_edges_match_concrete_execution():
    # Edge soundness: running the code concretely lands exactly on the
    # statically recovered jump targets.
    code = bytes.fromhex("6001600857" + "600456" + "5b00" + "5b6001600c57" + "5b00")
    g = C.static_stack_emulate(split_blocks(disassemble(code)))
    chain = Chain({0xA: Account(code=code)})
    outcome = Interpreter(chain).run(0xA, b"")
    by_start = {b.start_offset: b.id for b in g.blocks.values()}
    recovered = {(s, d) for s, d, k in g.jump_edges()}
    for _, jump_pc, to_off in outcome.trace.jumps:
        src_id = max(bid for off, bid in by_start.items() if off <= jump_pc)
        assert (src_id, by_start[to_off]) in recovered


def test_dot_export_mentions_blocks_and_kinds():
    g = build("600356" + "5b00")
    dot = g.to_dot()
    assert "0@0x0" in dot and "jump" in dot
