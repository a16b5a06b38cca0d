"""Tiny two-pass assembler and a dispatcher-style bytecode generator.

The generator builds contracts the way compilers lay them out: a
selector dispatcher, per-function wrappers that push a return address
(orphan return jumps), bodies with data-dependent branches, and a
shared epilogue. Used for differential testing of CFG recovery against
concrete execution.
"""

import random

from ceiscan.evm.opcodes import BY_NAME


class Label(str):
    pass


def asm(items):
    """Assemble a list of mnemonics / ints / (PUSHn, value) / Label refs."""
    # First pass: widths. Label references always assemble to PUSH2.
    offsets = {}
    pc = 0
    for item in items:
        if isinstance(item, Label):
            offsets[str(item)] = pc
            pc += 1  # JUMPDEST
        elif isinstance(item, tuple):
            name, _ = item
            pc += 1 + BY_NAME[name].immediate
        elif isinstance(item, str) and item.startswith("@"):
            pc += 3  # PUSH2 ref
        else:
            pc += 1
    out = bytearray()
    for item in items:
        if isinstance(item, Label):
            out.append(BY_NAME["JUMPDEST"].byte)
        elif isinstance(item, tuple):
            name, value = item
            info = BY_NAME[name]
            out.append(info.byte)
            out += value.to_bytes(info.immediate, "big")
        elif isinstance(item, str) and item.startswith("@"):
            out.append(BY_NAME["PUSH2"].byte)
            out += offsets[item[1:]].to_bytes(2, "big")
        else:
            out.append(BY_NAME[item].byte)
    return bytes(out)


def push1(v):
    return ("PUSH1", v)


def dispatcher_fixture(seed):
    """Random dispatcher contract plus calldata inputs that cover it.

    Returns (code, inputs). The inputs drive every selector (plus one
    junk selector) with argument values hitting both arms of every
    branch, so a concrete-execution oracle observes every feasible jump
    edge.
    """
    rng = random.Random(seed)
    nfun = rng.randint(2, 4)
    selectors = rng.sample(range(0x10000000, 0x7FFFFFFF), nfun)
    # Two wrappers may share one body: the shared epilogue's orphan jump
    # then resolves to several return addresses (one edge per caller).
    share = rng.random() < 0.7
    body_of = {i: i for i in range(nfun)}
    if share:
        body_of[1] = 0
    bodies = sorted(set(body_of.values()))
    cmp_consts = {i: rng.randint(1, 200) for i in bodies}

    items = [push1(0), "CALLDATALOAD", push1(0xE0), "SHR"]
    for i, sel in enumerate(selectors):
        items += ["DUP1", ("PUSH4", sel), "EQ", f"@wrap{i}", "JUMPI"]
    items += [push1(0), push1(0), "REVERT"]

    for i in range(nfun):
        # Wrapper: push return address, then push-jump into the body.
        items += [Label(f"wrap{i}"), f"@ret{i}", f"@body{body_of[i]}", "JUMP"]
        items += [Label(f"ret{i}"), push1(0), "MSTORE",
                  push1(32), push1(0), "RETURN"]

    for i in bodies:
        # Body: branch on an argument, both arms converge on an
        # orphan-jump return through the caller-pushed address.
        items += [Label(f"body{i}"),
                  push1(4), "CALLDATALOAD",
                  push1(cmp_consts[i]), "LT",      # const < arg
                  f"@alt{i}", "JUMPI",
                  push1(rng.randint(0, 255)), "SWAP1", "JUMP",
                  Label(f"alt{i}"),
                  push1(rng.randint(0, 255)), push1(1), "ADD",
                  "SWAP1", "JUMP"]

    code = asm(items)

    args = sorted({0, 2 ** 255} |
                  {c for c in cmp_consts.values()} |
                  {c + 1 for c in cmp_consts.values()})
    inputs = []
    for sel in selectors:
        for arg in args:
            inputs.append(sel.to_bytes(4, "big") + arg.to_bytes(32, "big"))
    inputs.append(b"\xde\xad\xbe\xef" + (0).to_bytes(32, "big"))
    return code, inputs
