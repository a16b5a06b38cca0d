import pytest

from ceiscan.evm import cfg as C
from ceiscan.evm.blocks import split_blocks
from ceiscan.evm.concrete import Account, Chain, Interpreter
from ceiscan.evm.disasm import disassemble
from ceiscan.recovery.recover import (find_unused_var, recover_cfg,
                                      recovered_edges, ssa_map)

from asmkit import dispatcher_fixture

# Orphan-jump fixture mirroring the shape recovery has to solve: the
# block with id 6 ends in a bare JUMP; the constant 0x0D that reaches
# its stack position is defined (and left unused) in block id 3, two
# blocks upstream; the block at offset 0x0D is a JUMPDEST block.
ORPHAN_FIXTURE = (
    "60aa5060bb5060cc5061000f56"  # b0 @0: filler, push-jump to 0x0f
    "5b00"                        # b1 @0x0d: JUMPDEST; STOP   <- target
    "5b600050"                    # b2 @0x0f: falls through
    "5b600d61001c56"              # b3 @0x13: PUSH1 0x0d (unused), jump to b5
    "5b00"                        # b4: unreachable filler
    "5b61002156"                  # b5 @0x1c: intermediate, jump to b6
    "5b56"                        # b6 @0x21: JUMPDEST; JUMP  <- orphan
)


def build(hexcode):
    return C.static_stack_emulate(split_blocks(disassemble(bytes.fromhex(hexcode))))


def test_orphan_fixture_block_layout():
    g = build(ORPHAN_FIXTURE)
    assert g.blocks[3].last.opcode == "JUMP"
    assert g.blocks[6].last.opcode == "JUMP"
    assert g.blocks[6].terminator_kind == "orphan-jump"
    assert 6 in g.unresolved
    assert g.blocks[1].start_offset == 0x0D


def test_find_unused_var_walks_predecessors():
    g = build(ORPHAN_FIXTURE)
    assert find_unused_var(6, g, ssa_map(g)) == frozenset({0x0D})


def test_find_unused_var_local_constant():
    g = build("600856" + "00" * 5 + "5b00")
    assert find_unused_var(0, g, ssa_map(g)) == frozenset({8})


def test_find_unused_var_nonconstant_target():
    g = build("60003556")  # jump target from CALLDATALOAD
    assert find_unused_var(0, g, ssa_map(g)) == frozenset()


def test_find_unused_var_cycle_returns_nothing():
    # c1 <-> c2 static cycle feeding the orphan block x.
    code = "61000456" + "5b61000956" + "5b8061000457" + "5b56"
    g = build(code)
    orphan = next(b.id for b in g.blocks.values()
                  if b.terminator_kind == "orphan-jump")
    assert find_unused_var(orphan, g, ssa_map(g)) == frozenset()


def test_recover_adds_edge_and_clears_unresolved():
    g = build(ORPHAN_FIXTURE)
    out = recover_cfg(g)
    assert (6, 1, C.JUMP) in out.edges
    assert 6 not in out.unresolved
    assert recovered_edges(g, out) == frozenset({(6, 1, C.JUMP)})


def test_recover_fixpoint_on_resolved_cfg():
    g = build("600356" + "5b00")
    out = recover_cfg(g)
    assert out.edges == g.edges and out.unresolved == g.unresolved


def test_recover_monotonic():
    g = build(ORPHAN_FIXTURE)
    out = recover_cfg(g)
    assert out.edges >= g.edges
    assert out.unresolved <= g.unresolved


def test_recovered_target_must_be_jumpdest():
    # Unused constant 0x05 points at a STOP, not a JUMPDEST.
    code = "600561000956" + "00" * 3 + "5b56"
    g = build(code)
    orphan = next(b.id for b in g.blocks.values()
                  if b.terminator_kind == "orphan-jump")
    out = recover_cfg(g)
    assert orphan in out.unresolved
    assert any("not a JUMPDEST" in d for d in out.diagnostics)


def test_shared_return_block_gets_edge_per_caller():
    # Two wrappers push different return addresses into one body whose
    # exit jump is an orphan: both edges must appear.
    code = (
        "61000956"          # b0: jump wrap0 @9
        + "00" * 5
        + "5b601061001b56"  # wrap0 @0x09: ret0=0x10, jump body @0x1b
        + "5b00"            # ret0 @0x10
        + "5b601961001b56"  # wrap1 @0x12: ret1=0x19, jump body
        + "5b00"            # ret1 @0x19
        + "5b56"            # body @0x1b: JUMPDEST; JUMP (orphan)
    )
    g = build(code)
    out = recover_cfg(g)
    body = g.block_at_offset(0x1B).id
    ret0 = g.block_at_offset(0x10).id
    ret1 = g.block_at_offset(0x19).id
    assert (body, ret0, C.JUMP) in out.edges
    assert (body, ret1, C.JUMP) in out.edges


def oracle_jump_edges(code, inputs, cfg):
    """Jump edges observed by concretely executing every input."""
    by_start = {b.start_offset: b.id for b in cfg.blocks.values()}
    chain = Chain({0xA: Account(code=code)})
    observed = set()
    for data in inputs:
        out = Interpreter(chain).run(0xA, data)
        assert out.status in ("return", "revert")
        for _, jump_pc, to_off in out.trace.jumps:
            src_id = max(bid for off, bid in by_start.items() if off <= jump_pc)
            observed.add((src_id, by_start[to_off]))
    return observed


@pytest.mark.parametrize("seed", range(6))
def test_dispatcher_recovery_matches_concrete_oracle(seed):
    code, inputs = dispatcher_fixture(seed)
    g = build(code.hex())
    out = recover_cfg(g)
    recovered = {(s, d) for s, d, _ in out.jump_edges()}
    assert recovered == oracle_jump_edges(code, inputs, out)
    assert not out.unresolved
