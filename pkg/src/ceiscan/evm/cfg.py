"""Partial CFG construction by static stack emulation.

Push-jumps (JUMP/JUMPI directly preceded by a PUSH) get their edges
here; orphan jumps land in ``unresolved`` for the SSA-based recovery
pass. JUMPI contributes both arms; feasibility is a later concern.
"""

from dataclasses import dataclass, field

from .blocks import (BasicBlock, CONDITIONAL_JUMP, FALLTHROUGH, ORPHAN_JUMP,
                     PUSH_JUMP)

SEQUENTIAL = "sequential"
JUMP = "jump"
BRANCH_TAKEN = "branch-taken"
BRANCH_FALLTHROUGH = "branch-fallthrough"


@dataclass
class Cfg:
    blocks: dict[int, BasicBlock]
    edges: frozenset[tuple[int, int, str]]
    unresolved: frozenset[int]
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    def block_at_offset(self, offset: int):
        for b in self.blocks.values():
            if b.start_offset == offset:
                return b
        return None

    def successors(self, block_id: int):
        return sorted(dst for src, dst, _ in self.edges if src == block_id)

    def predecessors(self, block_id: int):
        return sorted(src for src, dst, _ in self.edges if dst == block_id)

    def jump_edges(self):
        """Edges produced by jumps (excludes sequential fallthrough)."""
        return frozenset((s, d, k) for s, d, k in self.edges
                         if k in (JUMP, BRANCH_TAKEN))

    def to_dot(self, recovered: frozenset = frozenset()) -> str:
        lines = ["digraph cfg {", "  node [shape=box fontname=monospace];"]
        for b in sorted(self.blocks.values(), key=lambda b: b.id):
            style = ' color="red"' if b.id in self.unresolved else ""
            lines.append(f'  n{b.id} [label="{b.id}@0x{b.start_offset:x}"{style}];')
        for src, dst, kind in sorted(self.edges):
            style = ' color="blue" style=dashed' if (src, dst, kind) in recovered else ""
            lines.append(f'  n{src} -> n{dst} [label="{kind}"{style}];')
        lines.append("}")
        return "\n".join(lines)


def static_stack_emulate(blocks: list[BasicBlock]) -> Cfg:
    """Build the partial CFG recoverable without value propagation."""
    by_offset = {b.start_offset: b for b in blocks}
    ordered = sorted(blocks, key=lambda b: b.start_offset)
    next_block = {}
    for i, b in enumerate(ordered[:-1]):
        next_block[b.id] = ordered[i + 1].id

    edges = set()
    unresolved = set()
    diagnostics = []

    def add_jump_edge(block, target, kind):
        dest = by_offset.get(target)
        if dest is None or not dest.starts_with_jumpdest():
            diagnostics.append(
                f"block {block.id}: push-jump target 0x{target:x} is not a JUMPDEST")
            unresolved.add(block.id)
            return False
        edges.add((block.id, dest.id, kind))
        return True

    for b in blocks:
        kind = b.terminator_kind
        if kind == PUSH_JUMP:
            add_jump_edge(b, b.pushed_jump_target(), JUMP)
        elif kind == ORPHAN_JUMP:
            unresolved.add(b.id)
        elif kind == CONDITIONAL_JUMP:
            target = b.pushed_jump_target()
            if target is None:
                unresolved.add(b.id)
            else:
                add_jump_edge(b, target, BRANCH_TAKEN)
            if b.id in next_block:
                edges.add((b.id, next_block[b.id], BRANCH_FALLTHROUGH))
        elif kind == FALLTHROUGH:
            if b.id in next_block:
                edges.add((b.id, next_block[b.id], SEQUENTIAL))
        # halt: no outgoing edges

    return Cfg(
        blocks={b.id: b for b in blocks},
        edges=frozenset(edges),
        unresolved=frozenset(unresolved),
        diagnostics=tuple(diagnostics),
    )
