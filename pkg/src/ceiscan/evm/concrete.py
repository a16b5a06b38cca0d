"""Small concrete EVM interpreter.

Used as the differential oracle for CFG recovery, for replaying solver
models behind `confirmed` verdicts, and for input-grid searches behind
`unreachable` verdicts. Gas is not modeled (GAS pushes a large
constant); balances are plain integers that never limit transfers.
"""

from dataclasses import dataclass, field

from .keccak import keccak256

U256 = (1 << 256) - 1
SIGN_BIT = 1 << 255


def _signed(x):
    return x - (1 << 256) if x & SIGN_BIT else x


@dataclass
class Account:
    code: bytes = b""
    storage: dict = field(default_factory=dict)
    balance: int = 0


@dataclass
class Chain:
    accounts: dict[int, Account] = field(default_factory=dict)

    def account(self, address: int) -> Account:
        return self.accounts.setdefault(address, Account())


@dataclass
class Trace:
    """What an execution touched, for oracle comparisons."""
    block_offsets: list = field(default_factory=list)   # (address, offset)
    jumps: list = field(default_factory=list)           # (address, jump_pc, to_offset)
    sstores: list = field(default_factory=list)         # (address, key, value, position)
    calls: list = field(default_factory=list)           # (caller, target, value)

    def position(self):
        return len(self.block_offsets)


@dataclass
class Outcome:
    status: str  # "return" | "revert" | "invalid" | "out-of-steps" | "bad-jump" | "stack"
    returndata: bytes = b""
    trace: Trace = field(default_factory=Trace)


class _Halt(Exception):
    def __init__(self, status, data=b""):
        self.status = status
        self.data = data


def _valid_jumpdests(code: bytes):
    dests = set()
    pc = 0
    while pc < len(code):
        byte = code[pc]
        if byte == 0x5B:
            dests.add(pc)
        if 0x60 <= byte <= 0x7F:
            pc += byte - 0x5F
        pc += 1
    return dests


class Interpreter:
    """Executes one transaction against a Chain.

    ``unknown_call_handler(target, value, data) -> (success, returndata)``
    scripts calls to addresses with no code on the chain; the default
    accepts and returns empty data. ``call_router`` may remap a call
    target to another address before dispatch (used by replay to honor
    source-level bindings).
    """

    def __init__(self, chain: Chain, *, unknown_call_handler=None,
                 call_router=None, max_steps=200_000, max_depth=8):
        self.chain = chain
        self.unknown_call_handler = unknown_call_handler or (lambda t, v, d: (1, b""))
        self.call_router = call_router or (lambda pc_addr, pc, target: target)
        self.max_steps = max_steps
        self.max_depth = max_depth

    def run(self, address: int, calldata: bytes, caller: int = 0xCA11E4,
            callvalue: int = 0) -> Outcome:
        trace = Trace()
        self._steps = 0
        before = {a: dict(acct.storage) for a, acct in self.chain.accounts.items()}
        try:
            success, data = self._call(address, caller, callvalue, calldata,
                                       trace, depth=0, static=False)
        except _Halt as halt:
            # Exceptional halts abort the whole transaction.
            for a, acct in self.chain.accounts.items():
                acct.storage.clear()
                acct.storage.update(before.get(a, {}))
            return Outcome(halt.status, b"", trace)
        return Outcome("return" if success else "revert", data, trace)

    def _call(self, address, caller, value, calldata, trace, depth, static):
        account = self.chain.account(address)
        code = account.code
        if not code:
            return self.unknown_call_handler(address, value, calldata)
        if depth > self.max_depth:
            return (0, b"")

        jumpdests = _valid_jumpdests(code)
        stack = []
        memory = bytearray()
        storage = account.storage
        # Reverts undo the whole sub-call tree, so snapshot every account.
        snapshot = {a: dict(acct.storage) for a, acct in self.chain.accounts.items()}
        returndata = b""
        pc = 0
        block_start = 0
        trace.block_offsets.append((address, 0))

        def restore():
            for a, acct in self.chain.accounts.items():
                acct.storage.clear()
                acct.storage.update(snapshot.get(a, {}))

        def mem_ensure(offset, size):
            need = offset + size
            if need > 2_000_000:
                raise _Halt("invalid")
            if len(memory) < need:
                memory.extend(b"\x00" * (need - len(memory)))

        def mem_read(offset, size):
            if size == 0:
                return b""
            mem_ensure(offset, size)
            return bytes(memory[offset:offset + size])

        def mem_write(offset, data):
            if data:
                mem_ensure(offset, len(data))
                memory[offset:offset + len(data)] = data

        def push(v):
            if len(stack) >= 1024:
                raise _Halt("stack")
            stack.append(v & U256)

        def pop():
            if not stack:
                raise _Halt("stack")
            return stack.pop()

        while pc < len(code):
            self._steps += 1
            if self._steps > self.max_steps:
                raise _Halt("out-of-steps")
            byte = code[pc]
            name, width = _decode(byte)

            if name == "PUSH":
                push(int.from_bytes(code[pc + 1:pc + 1 + width], "big"))
                pc += 1 + width
                continue
            if name.startswith("DUP"):
                n = int(name[3:])
                if len(stack) < n:
                    raise _Halt("stack")
                push(stack[-n])
                pc += 1
                continue
            if name.startswith("SWAP"):
                n = int(name[4:])
                if len(stack) < n + 1:
                    raise _Halt("stack")
                stack[-1], stack[-n - 1] = stack[-n - 1], stack[-1]
                pc += 1
                continue
            if name.startswith("LOG"):
                n = int(name[3:])
                for _ in range(n + 2):
                    pop()
                pc += 1
                continue

            if name == "STOP":
                return (1, b"")
            elif name == "ADD":
                push(pop() + pop())
            elif name == "MUL":
                push(pop() * pop())
            elif name == "SUB":
                a, b = pop(), pop()
                push(a - b)
            elif name == "DIV":
                a, b = pop(), pop()
                push(0 if b == 0 else a // b)
            elif name == "SDIV":
                a, b = _signed(pop()), _signed(pop())
                if b == 0:
                    push(0)
                else:
                    q = abs(a) // abs(b)
                    push(-q if (a < 0) != (b < 0) else q)
            elif name == "MOD":
                a, b = pop(), pop()
                push(0 if b == 0 else a % b)
            elif name == "SMOD":
                a, b = _signed(pop()), _signed(pop())
                if b == 0:
                    push(0)
                else:
                    r = abs(a) % abs(b)
                    push(-r if a < 0 else r)
            elif name == "ADDMOD":
                a, b, n = pop(), pop(), pop()
                push(0 if n == 0 else (a + b) % n)
            elif name == "MULMOD":
                a, b, n = pop(), pop(), pop()
                push(0 if n == 0 else (a * b) % n)
            elif name == "EXP":
                a, b = pop(), pop()
                push(pow(a, b, 1 << 256))
            elif name == "SIGNEXTEND":
                k, v = pop(), pop()
                if k < 31:
                    bit = 8 * (k + 1) - 1
                    if v & (1 << bit):
                        v |= U256 ^ ((1 << (bit + 1)) - 1)
                    else:
                        v &= (1 << (bit + 1)) - 1
                push(v)
            elif name == "LT":
                a, b = pop(), pop()
                push(1 if a < b else 0)
            elif name == "GT":
                a, b = pop(), pop()
                push(1 if a > b else 0)
            elif name == "SLT":
                a, b = _signed(pop()), _signed(pop())
                push(1 if a < b else 0)
            elif name == "SGT":
                a, b = _signed(pop()), _signed(pop())
                push(1 if a > b else 0)
            elif name == "EQ":
                push(1 if pop() == pop() else 0)
            elif name == "ISZERO":
                push(1 if pop() == 0 else 0)
            elif name == "AND":
                push(pop() & pop())
            elif name == "OR":
                push(pop() | pop())
            elif name == "XOR":
                push(pop() ^ pop())
            elif name == "NOT":
                push(~pop())
            elif name == "BYTE":
                i, v = pop(), pop()
                push((v >> (8 * (31 - i))) & 0xFF if i < 32 else 0)
            elif name == "SHL":
                s, v = pop(), pop()
                push(v << s if s < 256 else 0)
            elif name == "SHR":
                s, v = pop(), pop()
                push(v >> s if s < 256 else 0)
            elif name == "SAR":
                s, v = pop(), _signed(pop())
                push((v >> s) if s < 256 else (0 if v >= 0 else U256))
            elif name == "SHA3":
                offset, size = pop(), pop()
                push(int.from_bytes(keccak256(mem_read(offset, size)), "big"))
            elif name == "ADDRESS":
                push(address)
            elif name == "BALANCE":
                push(self.chain.account(pop()).balance)
            elif name == "ORIGIN":
                push(caller)
            elif name == "CALLER":
                push(caller)
            elif name == "CALLVALUE":
                push(value)
            elif name == "CALLDATALOAD":
                off = pop()
                word = calldata[off:off + 32]
                push(int.from_bytes(word.ljust(32, b"\x00"), "big"))
            elif name == "CALLDATASIZE":
                push(len(calldata))
            elif name == "CALLDATACOPY":
                dest, off, size = pop(), pop(), pop()
                chunk = calldata[off:off + size].ljust(size, b"\x00")
                mem_write(dest, chunk)
            elif name == "CODESIZE":
                push(len(code))
            elif name == "CODECOPY":
                dest, off, size = pop(), pop(), pop()
                chunk = code[off:off + size].ljust(size, b"\x00")
                mem_write(dest, chunk)
            elif name in ("GASPRICE", "BLOCKHASH", "COINBASE", "TIMESTAMP",
                          "NUMBER", "PREVRANDAO", "GASLIMIT", "CHAINID",
                          "BASEFEE"):
                if name == "BLOCKHASH":
                    pop()
                push(1)
            elif name == "SELFBALANCE":
                push(account.balance)
            elif name == "EXTCODESIZE":
                push(len(self.chain.account(pop()).code))
            elif name == "EXTCODEHASH":
                push(int.from_bytes(keccak256(self.chain.account(pop()).code), "big"))
            elif name == "EXTCODECOPY":
                addr, dest, off, size = pop(), pop(), pop(), pop()
                other = self.chain.account(addr).code
                mem_write(dest, other[off:off + size].ljust(size, b"\x00"))
            elif name == "RETURNDATASIZE":
                push(len(returndata))
            elif name == "RETURNDATACOPY":
                dest, off, size = pop(), pop(), pop()
                if off + size > len(returndata):
                    restore()
                    return (0, b"")
                mem_write(dest, returndata[off:off + size])
            elif name == "POP":
                pop()
            elif name == "MLOAD":
                push(int.from_bytes(mem_read(pop(), 32), "big"))
            elif name == "MSTORE":
                off, v = pop(), pop()
                mem_write(off, v.to_bytes(32, "big"))
            elif name == "MSTORE8":
                off, v = pop(), pop()
                mem_write(off, bytes([v & 0xFF]))
            elif name == "SLOAD":
                push(storage.get(pop(), 0))
            elif name == "SSTORE":
                if static:
                    restore()
                    return (0, b"")
                key, v = pop(), pop()
                storage[key] = v
                trace.sstores.append((address, key, v, trace.position()))
            elif name == "JUMP":
                dest = pop()
                if dest not in jumpdests:
                    raise _Halt("bad-jump")
                trace.jumps.append((address, pc, dest))
                pc = dest
                block_start = dest
                trace.block_offsets.append((address, dest))
                continue
            elif name == "JUMPI":
                dest, cond = pop(), pop()
                if cond:
                    if dest not in jumpdests:
                        raise _Halt("bad-jump")
                    trace.jumps.append((address, pc, dest))
                    pc = dest
                    block_start = dest
                    trace.block_offsets.append((address, dest))
                    continue
                pc += 1
                block_start = pc
                trace.block_offsets.append((address, pc))
                continue
            elif name == "PC":
                push(pc)
            elif name == "MSIZE":
                push((len(memory) + 31) // 32 * 32)
            elif name == "GAS":
                push(0xFFFFFFFFFFFF)
            elif name == "JUMPDEST":
                pass
            elif name in ("CALL", "CALLCODE", "STATICCALL", "DELEGATECALL"):
                pop()  # gas
                target = pop()
                call_value = 0
                if name in ("CALL", "CALLCODE"):
                    call_value = pop()
                in_off, in_size, out_off, out_size = pop(), pop(), pop(), pop()
                data = mem_read(in_off, in_size)
                trace.calls.append((address, target, call_value))
                routed = self.call_router(address, pc, target)
                callee = self.chain.account(routed)
                if callee.code:
                    success, ret = self._call(
                        routed, address, call_value, data, trace, depth + 1,
                        static or name == "STATICCALL")
                else:
                    success, ret = self.unknown_call_handler(routed, call_value, data)
                returndata = ret
                mem_write(out_off, ret[:out_size])
                push(1 if success else 0)
            elif name in ("CREATE", "CREATE2"):
                raise _Halt("invalid")
            elif name == "RETURN":
                off, size = pop(), pop()
                return (1, mem_read(off, size))
            elif name == "REVERT":
                off, size = pop(), pop()
                data = mem_read(off, size)
                restore()
                return (0, data)
            elif name == "INVALID":
                restore()
                return (0, b"")
            elif name == "SELFDESTRUCT":
                pop()
                return (1, b"")
            else:
                restore()
                return (0, b"")
            pc += 1

        return (1, b"")  # ran off the end of code: treated as STOP


def _decode(byte):
    if 0x60 <= byte <= 0x7F:
        return "PUSH", byte - 0x5F
    if byte == 0x5F:
        return "PUSH", 0
    if 0x80 <= byte <= 0x8F:
        return f"DUP{byte - 0x7F}", 0
    if 0x90 <= byte <= 0x9F:
        return f"SWAP{byte - 0x8F}", 0
    if 0xA0 <= byte <= 0xA4:
        return f"LOG{byte - 0xA0}", 0
    from . import opcodes
    info = opcodes.TABLE.get(byte)
    return (info.name if info else "INVALID"), 0
