"""Orphan-jump resolution by value propagation along predecessor paths.

The jump operand's entry-stack position is traced through each
predecessor's symbolic exit stack; a constant that reaches the operand
position is an edge target. All acyclic predecessor paths are walked
(bounded), so shared return blocks resolve to one edge per caller:
return-address dispatch.
"""

from dataclasses import dataclass

from ..evm import cfg as cfgmod
from ..evm.blocks import BasicBlock
from ..evm.cfg import Cfg
from .ssa import Computed, Const, SsaBlock, StackInput, to_ssa

DEFAULT_WALK_DEPTH = 64


def ssa_map(cfg: Cfg) -> dict[int, SsaBlock]:
    return {bid: to_ssa(b) for bid, b in cfg.blocks.items()}


def find_unused_var(block_id: int, cfg: Cfg, ssa: dict[int, SsaBlock],
                    *, max_depth: int = DEFAULT_WALK_DEPTH) -> frozenset[int]:
    """Constants reaching the jump operand of ``block_id``.

    Empty set = not found (non-constant target, unresolved cycle, or
    depth bound exceeded): genuinely dynamic dispatch left for the
    symbolic stage.
    """
    preds: dict[int, list[int]] = {}
    for src, dst, _ in cfg.edges:
        preds.setdefault(dst, []).append(src)

    results: set[int] = set()

    def resolve_value(bid: int, vid: int, path: frozenset, depth: int):
        origin = ssa[bid].values[vid].origin
        while isinstance(origin, Computed) and origin.op == "copy":
            origin = ssa[bid].values[origin.args[0]].origin
        if isinstance(origin, Const):
            results.add(origin.value)
        elif isinstance(origin, StackInput):
            walk_position(bid, origin.depth, path, depth)
        # other computed values: non-constant, contributes nothing

    def walk_position(bid: int, position: int, path: frozenset, depth: int):
        if depth >= max_depth:
            return
        for p in sorted(preds.get(bid, [])):
            if p in path:
                continue  # cycle without resolution
            pb = ssa[p]
            if position < len(pb.exit_stack):
                resolve_value(p, pb.exit_stack[-1 - position],
                              path | {p}, depth + 1)
            else:
                deeper = pb.inputs_created + (position - len(pb.exit_stack))
                walk_position(p, deeper, path | {p}, depth + 1)

    sb = ssa[block_id]
    if sb.jump_operand is not None:
        resolve_value(block_id, sb.jump_operand, frozenset({block_id}), 0)
    return frozenset(results)


def recover_cfg(cfg: Cfg, *, max_depth: int = DEFAULT_WALK_DEPTH) -> Cfg:
    """Fixed-point orphan resolution; the edge set only ever grows."""
    ssa = ssa_map(cfg)
    by_offset = {b.start_offset: b for b in cfg.blocks.values()}
    edges = set(cfg.edges)
    unresolved = set(cfg.unresolved)
    diagnostics = list(cfg.diagnostics)

    max_rounds = max(1, len(cfg.blocks)) ** 2
    for _ in range(max_rounds):
        view = Cfg(cfg.blocks, frozenset(edges), frozenset(unresolved))
        added = False
        for bid in sorted(unresolved):
            block = cfg.blocks[bid]
            kind = (cfgmod.BRANCH_TAKEN if block.last.opcode == "JUMPI"
                    else cfgmod.JUMP)
            for target in sorted(find_unused_var(bid, view, ssa,
                                                 max_depth=max_depth)):
                dest = by_offset.get(target)
                if dest is None or not dest.starts_with_jumpdest():
                    msg = (f"block {bid}: recovered target 0x{target:x} "
                           f"is not a JUMPDEST")
                    if msg not in diagnostics:
                        diagnostics.append(msg)
                    continue
                edge = (bid, dest.id, kind)
                if edge not in edges:
                    edges.add(edge)
                    added = True
        unresolved = {
            bid for bid in unresolved
            if not any(s == bid and k in (cfgmod.JUMP, cfgmod.BRANCH_TAKEN)
                       for s, _, k in edges)
        }
        if not added:
            break

    return Cfg(cfg.blocks, frozenset(edges), frozenset(unresolved),
               tuple(diagnostics))


def recovered_edges(before: Cfg, after: Cfg) -> frozenset:
    """Edges added by recovery, for DOT styling."""
    return after.edges - before.edges
