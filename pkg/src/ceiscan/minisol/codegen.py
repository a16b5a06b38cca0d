"""EVM code generation for the supported subset.

Layout choices keep the emitted code easy to analyze honestly rather
than fast: locals and call buffers live at static memory offsets (one
frame per function, so recursion is rejected), internal calls push a
return address and jump (the classic orphan-jump pattern), and every
instruction carries the span of the statement it implements in the
source map.

Runtime (deployed) code only; constructors contribute to the source
model but not to the emitted bytecode.
"""

from dataclasses import dataclass, field

from ..evm.keccak import selector as keccak_selector
from . import nodes as N
from .parser import ParseError

SCRATCH_KEY = 0x00
SCRATCH_SLOT = 0x20
FRAME_BASE = 0x80


class CodegenError(Exception):
    pass


@dataclass
class Instr:
    op: str
    imm: bytes = b""
    label_ref: str = None
    span: tuple = (0, 0)
    jump_kind: str = "-"


@dataclass
class Asm:
    items: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)
    file_index: int = 0

    def emit(self, op, span, jump_kind="-"):
        self.items.append(Instr(op, span=span, jump_kind=jump_kind))

    def push_value(self, value, span):
        if value == 0:
            self.items.append(Instr("PUSH1", b"\x00", span=span))
            return
        raw = value.to_bytes((value.bit_length() + 7) // 8, "big")
        self.items.append(Instr(f"PUSH{len(raw)}", raw, span=span))

    def push_label(self, label, span):
        self.items.append(Instr("PUSH2", label_ref=label, span=span))

    def mark(self, label, span):
        self.items.append(Instr("JUMPDEST", span=span, jump_kind="-"))
        self.labels[label] = len(self.items) - 1

    def assemble(self):
        from ..evm.opcodes import BY_NAME
        offsets = []
        pc = 0
        for ins in self.items:
            offsets.append(pc)
            if ins.label_ref is not None:
                pc += 3
            else:
                pc += 1 + len(ins.imm)
        label_offsets = {lbl: offsets[idx] for lbl, idx in self.labels.items()}
        code = bytearray()
        srcmap = []
        for ins in self.items:
            if ins.label_ref is not None:
                target = label_offsets[ins.label_ref]
                code.append(BY_NAME["PUSH2"].byte)
                code += target.to_bytes(2, "big")
            else:
                code.append(BY_NAME[ins.op].byte)
                code += ins.imm
            srcmap.append(f"{ins.span[0]}:{ins.span[1]}:{self.file_index}:"
                          f"{ins.jump_kind}")
        return bytes(code), ";".join(srcmap)


def canonical_type(typ: N.TypeName, contracts) -> str:
    if typ.name in ("uint256", "bool", "address"):
        return typ.name
    if typ.name in contracts:
        return "address"  # contract types canonicalize to address
    if typ.is_mapping:
        raise CodegenError("mapping parameters are not supported")
    return typ.name


def signature(fn: N.FunctionDef, contracts) -> str:
    args = ",".join(canonical_type(p.typ, contracts) for p in fn.params)
    return f"{fn.name}({args})"


@dataclass
class FnFrame:
    base: int
    slots: dict = field(default_factory=dict)   # name -> offset
    call_bufs: dict = field(default_factory=dict)  # id(call node) -> (in, insize, out)
    size: int = 0

    def alloc(self, name):
        off = self.base + self.size
        self.slots[name] = off
        self.size += 32
        return off

    def alloc_call(self, node_id, nargs):
        in_off = self.base + self.size
        in_size = 4 + 32 * nargs
        self.size += ((in_size + 31) // 32) * 32
        out_off = self.base + self.size
        self.size += 32
        self.call_bufs[node_id] = (in_off, in_size, out_off)
        return in_off, in_size, out_off


class ContractCompiler:
    def __init__(self, contract: N.ContractDef, unit: N.SourceUnit,
                 file_index: int = 0):
        self.contract = contract
        self.unit = unit
        self.contracts = {c.name: c for c in unit.contracts}
        self.asm = Asm(file_index=file_index)
        self.state_slots = {}
        self.state_types = {}
        self._assign_storage()
        self.functions = self._flatten_functions()
        self.modifiers = {m.name: m for m in self._all_modifiers()}
        self.frames = {}
        self.next_frame = FRAME_BASE
        self._label_counter = 0

    # -- layout ----------------------------------------------------------

    def _bases_first(self):
        chain = []
        c = self.contract
        seen = set()
        while True:
            chain.insert(0, c)
            if not c.bases:
                break
            base_name = c.bases[0]
            if base_name in seen or base_name not in self.contracts:
                break
            seen.add(base_name)
            c = self.contracts[base_name]
        return chain

    def _assign_storage(self):
        slot = 0
        for c in self._bases_first():
            for sv in c.state_vars:
                if sv.name not in self.state_slots:
                    self.state_slots[sv.name] = slot
                    self.state_types[sv.name] = sv.typ
                    slot += 1

    def _flatten_functions(self):
        out = {}
        for c in self._bases_first():
            for fn in c.functions:
                out[fn.name] = fn  # derived overrides base
        return out

    def _all_modifiers(self):
        mods = []
        for c in self._bases_first():
            mods.extend(c.modifiers)
        return mods

    def _label(self, stem):
        self._label_counter += 1
        return f"{stem}_{self._label_counter}"

    # -- inlining and frame allocation ------------------------------------

    def inlined_body(self, fn: N.FunctionDef) -> list:
        body = list(fn.body or [])
        for mod_name in reversed(fn.modifiers):
            mod = self.modifiers.get(mod_name)
            if mod is None:
                raise CodegenError(f"unknown modifier {mod_name}")
            wrapped = []
            for stmt in mod.body:
                if isinstance(stmt, N.PlaceholderStmt):
                    wrapped.extend(body)
                else:
                    wrapped.append(stmt)
            body = wrapped
        return body

    def frame_for(self, fn: N.FunctionDef) -> FnFrame:
        if fn.name in self.frames:
            return self.frames[fn.name]
        frame = FnFrame(base=self.next_frame)
        for p in fn.params:
            frame.alloc(p.name)
        body = self.inlined_body(fn)

        def walk_stmts(stmts):
            for s in stmts:
                if isinstance(s, N.VarDeclStmt):
                    frame.alloc(s.name)
                    if s.init is not None:
                        walk_expr(s.init)
                elif isinstance(s, N.ExprStmt):
                    walk_expr(s.expr)
                elif isinstance(s, N.RequireStmt):
                    walk_expr(s.cond)
                elif isinstance(s, N.IfStmt):
                    walk_expr(s.cond)
                    walk_stmts(s.then)
                    if s.otherwise:
                        walk_stmts(s.otherwise)
                elif isinstance(s, N.WhileStmt):
                    walk_expr(s.cond)
                    walk_stmts(s.body)
                elif isinstance(s, N.ReturnStmt) and s.value is not None:
                    walk_expr(s.value)

        def walk_expr(e):
            if isinstance(e, N.Call):
                for a in e.args:
                    walk_expr(a)
                if e.value_option is not None:
                    walk_expr(e.value_option)
                walk_expr(e.target)
                if self._call_kind(e) == "external":
                    frame.alloc_call(id(e), len(e.args))
            elif isinstance(e, N.Binary):
                walk_expr(e.left)
                walk_expr(e.right)
            elif isinstance(e, N.Unary):
                walk_expr(e.operand)
            elif isinstance(e, N.Assign):
                walk_expr(e.target)
                walk_expr(e.value)
            elif isinstance(e, N.Member):
                walk_expr(e.obj)
            elif isinstance(e, N.Index):
                walk_expr(e.base)
                walk_expr(e.key)

        walk_stmts(body)
        self.next_frame = frame.base + max(frame.size, 32)
        self.frames[fn.name] = frame
        return frame

    def _call_kind(self, call: N.Call) -> str:
        """internal | external | lowlevel | transfer | send | cast | builtin"""
        t = call.target
        if isinstance(t, N.Ident):
            if t.name in ("address", "uint", "uint256", "payable", "bool"):
                return "cast"
            if t.name in self.contracts:
                return "cast"  # ContractType(addr)
            if t.name in self.functions:
                return "internal"
            raise CodegenError(f"unknown call target {t.name!r}")
        if isinstance(t, N.Member):
            if t.name in ("call",):
                return "lowlevel"
            if t.name == "transfer":
                return "transfer"
            if t.name == "send":
                return "send"
            if isinstance(t.obj, N.Ident) and t.obj.name == "this":
                return "internal"
            return "external"
        raise CodegenError("unsupported call form")

    # -- contract-level emission ------------------------------------------

    def compile(self):
        public = [fn for fn in self.functions.values()
                  if fn.visibility in ("public", "external") and fn.body is not None]
        cspan = self.contract.span
        a = self.asm
        a.push_value(0, cspan)
        a.emit("CALLDATALOAD", cspan)
        a.push_value(0xE0, cspan)
        a.emit("SHR", cspan)
        selectors = {}
        for fn in public:
            sig = signature(fn, self.contracts)
            sel = int.from_bytes(keccak_selector(sig), "big")
            selectors[sig] = sel
            a.emit("DUP1", fn.head_span)
            a.items.append(Instr("PUSH4", sel.to_bytes(4, "big"),
                                 span=fn.head_span))
            a.emit("EQ", fn.head_span)
            a.push_label(f"pub_{fn.name}", fn.head_span)
            a.emit("JUMPI", fn.head_span)
        a.push_value(0, cspan)
        a.emit("DUP1", cspan)
        a.emit("REVERT", cspan)

        a.mark("revert", cspan)
        a.push_value(0, cspan)
        a.emit("DUP1", cspan)
        a.emit("REVERT", cspan)
        a.mark("panic", cspan)
        a.emit("INVALID", cspan)

        for fn in public:
            self.emit_wrapper(fn)
        for fn in self.functions.values():
            if fn.body is not None:
                self.emit_body(fn)

        code, srcmap = a.assemble()
        method_ids = {sig: f"{sel:08x}" for sig, sel in selectors.items()}
        return code, srcmap, method_ids

    def emit_wrapper(self, fn: N.FunctionDef):
        a = self.asm
        span = fn.head_span
        a.mark(f"pub_{fn.name}", span)
        if fn.mutability != "payable":
            ok = self._label("cvok")
            a.emit("CALLVALUE", span)
            a.emit("ISZERO", span)
            a.push_label(ok, span)
            a.emit("JUMPI", span)
            a.push_value(0, span)
            a.emit("DUP1", span)
            a.emit("REVERT", span)
            a.mark(ok, span)
        a.push_label(f"ret_{fn.name}", span)
        for i, _ in enumerate(fn.params):
            a.push_value(4 + 32 * i, span)
            a.emit("CALLDATALOAD", span)
        a.push_label(f"body_{fn.name}", span)
        a.emit("JUMP", span, jump_kind="i")
        a.mark(f"ret_{fn.name}", span)
        if fn.returns is not None:
            a.push_value(0, span)
            a.emit("MSTORE", span)
            a.push_value(0x20, span)
            a.push_value(0, span)
            a.emit("RETURN", span)
        else:
            a.emit("POP", span)
            a.emit("STOP", span)

    def emit_body(self, fn: N.FunctionDef):
        a = self.asm
        frame = self.frame_for(fn)
        body = self.inlined_body(fn)
        a.mark(f"body_{fn.name}", fn.head_span)
        for p in reversed(fn.params):
            a.push_value(frame.slots[p.name], fn.head_span)
            a.emit("MSTORE", fn.head_span)
        ctx = _FnCtx(self, fn, frame)
        for stmt in body:
            ctx.statement(stmt)
        if not (body and isinstance(body[-1], N.ReturnStmt)):
            a.push_value(0, fn.head_span)
            a.emit("SWAP1", fn.head_span)
            a.emit("JUMP", fn.head_span, jump_kind="o")


class _FnCtx:
    """Statement/expression emission within one function frame."""

    def __init__(self, cc: ContractCompiler, fn, frame):
        self.cc = cc
        self.fn = fn
        self.frame = frame
        self.asm = cc.asm

    # -- statements -------------------------------------------------------

    def statement(self, s: N.Stmt):
        a = self.asm
        span = s.span
        if isinstance(s, N.VarDeclStmt):
            if s.init is not None:
                produced = self.expr(s.init, span)
                if not produced:
                    raise CodegenError("initializer yields no value")
            else:
                a.push_value(0, span)
            a.push_value(self.frame.slots[s.name], span)
            a.emit("MSTORE", span)
        elif isinstance(s, N.ExprStmt):
            produced = self.expr(s.expr, span)
            if produced:
                a.emit("POP", span)
        elif isinstance(s, N.RequireStmt):
            self.expr(s.cond, span)
            a.emit("ISZERO", span)
            a.push_label("panic" if s.is_assert else "revert", span)
            a.emit("JUMPI", span)
        elif isinstance(s, N.IfStmt):
            els = self.cc._label("else")
            end = self.cc._label("endif")
            self.expr(s.cond, span)
            a.emit("ISZERO", span)
            a.push_label(els, span)
            a.emit("JUMPI", span)
            for st in s.then:
                self.statement(st)
            a.push_label(end, span)
            a.emit("JUMP", span)
            a.mark(els, span)
            for st in s.otherwise or []:
                self.statement(st)
            a.mark(end, span)
        elif isinstance(s, N.WhileStmt):
            loop = self.cc._label("loop")
            end = self.cc._label("endloop")
            a.mark(loop, span)
            self.expr(s.cond, span)
            a.emit("ISZERO", span)
            a.push_label(end, span)
            a.emit("JUMPI", span)
            for st in s.body:
                self.statement(st)
            a.push_label(loop, span)
            a.emit("JUMP", span)
            a.mark(end, span)
        elif isinstance(s, N.ReturnStmt):
            if s.value is not None:
                self.expr(s.value, span)
            else:
                a.push_value(0, span)
            a.emit("SWAP1", span)
            a.emit("JUMP", span, jump_kind="o")
        elif isinstance(s, N.PlaceholderStmt):
            raise CodegenError("placeholder outside modifier")
        else:
            raise CodegenError(f"unsupported statement {s!r}")

    # -- expressions --------------------------------------------------------

    def expr(self, e: N.Expr, span=None) -> bool:
        """Emit code leaving the expression value on the stack.

        Returns False for void expressions (transfer, typed void call
        used as a statement still produces a dummy value and returns
        True; only transfer produces nothing).
        """
        a = self.asm
        span = e.span if e.span != (0, 0) else span
        if isinstance(e, N.Literal):
            if e.kind == "number":
                a.push_value(e.value, span)
            elif e.kind == "bool":
                a.push_value(1 if e.value else 0, span)
            else:
                raise CodegenError("string literals only in require/call data")
            return True
        if isinstance(e, N.Ident):
            return self.ident(e, span)
        if isinstance(e, N.Member):
            return self.member(e, span)
        if isinstance(e, N.Index):
            self.mapping_key(e, span)
            a.emit("SLOAD", span)
            return True
        if isinstance(e, N.Binary):
            return self.binary(e, span)
        if isinstance(e, N.Unary):
            if e.op == "!":
                self.expr(e.operand, span)
                a.emit("ISZERO", span)
                return True
            self.expr(e.operand, span)
            a.push_value(0, span)
            a.emit("SUB", span)
            return True
        if isinstance(e, N.Assign):
            self.assign(e, span)
            return False
        if isinstance(e, N.Call):
            return self.call(e, span)
        raise CodegenError(f"unsupported expression {e!r}")

    def ident(self, e: N.Ident, span) -> bool:
        a = self.asm
        name = e.name
        if name in self.frame.slots:
            a.push_value(self.frame.slots[name], span)
            a.emit("MLOAD", span)
            return True
        if name in self.cc.state_slots:
            typ = self.cc.state_types[name]
            if typ.is_mapping:
                raise CodegenError("bare mapping reference")
            a.push_value(self.cc.state_slots[name], span)
            a.emit("SLOAD", span)
            return True
        if name == "this":
            a.emit("ADDRESS", span)
            return True
        raise CodegenError(f"unknown identifier {name!r}")

    def member(self, e: N.Member, span) -> bool:
        a = self.asm
        if isinstance(e.obj, N.Ident) and e.obj.name == "msg":
            if e.name == "sender":
                a.emit("CALLER", span)
                return True
            if e.name == "value":
                a.emit("CALLVALUE", span)
                return True
            raise CodegenError(f"unsupported msg.{e.name}")
        if e.name == "balance":
            if self._is_self_address(e.obj):
                a.emit("SELFBALANCE", span)
                return True
            self.expr(e.obj, span)
            a.emit("BALANCE", span)
            return True
        raise CodegenError(f"unsupported member {e.name!r}")

    def _is_self_address(self, obj) -> bool:
        if isinstance(obj, N.Ident) and obj.name == "this":
            return True
        if isinstance(obj, N.Call) and isinstance(obj.target, N.Ident) \
                and obj.target.name == "address" and obj.args \
                and isinstance(obj.args[0], N.Ident) \
                and obj.args[0].name == "this":
            return True
        return False

    def binary(self, e: N.Binary, span) -> bool:
        a = self.asm
        op = e.op
        plain = {"+": "ADD", "-": "SUB", "*": "MUL", "/": "DIV", "%": "MOD",
                 "<": "LT", ">": "GT", "==": "EQ"}
        if op in plain:
            self.expr(e.right, span)
            self.expr(e.left, span)
            a.emit(plain[op], span)
            return True
        if op == "!=":
            self.expr(e.right, span)
            self.expr(e.left, span)
            a.emit("EQ", span)
            a.emit("ISZERO", span)
            return True
        if op == "<=":
            self.expr(e.right, span)
            self.expr(e.left, span)
            a.emit("GT", span)
            a.emit("ISZERO", span)
            return True
        if op == ">=":
            self.expr(e.right, span)
            self.expr(e.left, span)
            a.emit("LT", span)
            a.emit("ISZERO", span)
            return True
        if op in ("&&", "||"):
            self.expr(e.left, span)
            a.emit("ISZERO", span)
            a.emit("ISZERO", span)
            self.expr(e.right, span)
            a.emit("ISZERO", span)
            a.emit("ISZERO", span)
            a.emit("AND" if op == "&&" else "OR", span)
            return True
        raise CodegenError(f"unsupported operator {op!r}")

    def mapping_key(self, e: N.Index, span):
        """Leaves keccak(key ++ slot) on the stack."""
        a = self.asm
        if not isinstance(e.base, N.Ident) or \
                e.base.name not in self.cc.state_slots:
            raise CodegenError("index into non-state mapping")
        slot = self.cc.state_slots[e.base.name]
        self.expr(e.key, span)
        a.push_value(SCRATCH_KEY, span)
        a.emit("MSTORE", span)
        a.push_value(slot, span)
        a.push_value(SCRATCH_SLOT, span)
        a.emit("MSTORE", span)
        a.push_value(0x40, span)
        a.push_value(0, span)
        a.emit("SHA3", span)

    def assign(self, e: N.Assign, span):
        a = self.asm
        target = e.target
        compound = {"+=": "ADD", "-=": "SUB", "*=": "MUL", "/=": "DIV"}
        if e.op == "=":
            self.expr(e.value, span)
        else:
            self.expr(e.value, span)
            self.expr(target, span)
            a.emit(compound[e.op], span)
        # Value on stack; route to the target location.
        if isinstance(target, N.Ident):
            if target.name in self.frame.slots:
                a.push_value(self.frame.slots[target.name], span)
                a.emit("MSTORE", span)
                return
            if target.name in self.cc.state_slots:
                a.push_value(self.cc.state_slots[target.name], span)
                a.emit("SSTORE", span)
                return
            raise CodegenError(f"assignment to unknown name {target.name!r}")
        if isinstance(target, N.Index):
            self.mapping_key(target, span)
            a.emit("SSTORE", span)
            return
        raise CodegenError("unsupported assignment target")

    # -- calls ---------------------------------------------------------------

    def call(self, e: N.Call, span) -> bool:
        a = self.asm
        kind = self.cc._call_kind(e)
        if kind == "cast":
            self.expr(e.args[0], span)
            return True
        if kind == "internal":
            name = (e.target.name if isinstance(e.target, N.Ident)
                    else e.target.name)
            callee = self.cc.functions[name]
            ret = self.cc._label(f"ret_{name}")
            a.push_label(ret, span)
            for arg in e.args:
                self.expr(arg, span)
            a.push_label(f"body_{name}", span)
            a.emit("JUMP", span, jump_kind="i")
            a.mark(ret, span)
            return True
        if kind in ("lowlevel", "transfer", "send"):
            member = e.target
            value_expr = e.value_option
            # retSize, retOffset, argsSize, argsOffset
            for _ in range(4):
                a.push_value(0, span)
            if kind == "lowlevel" and value_expr is not None:
                self.expr(value_expr, span)
            elif kind in ("transfer", "send"):
                self.expr(e.args[0], span)
            else:
                a.push_value(0, span)
            self.expr(member.obj, span)
            if kind == "lowlevel":
                a.emit("GAS", span)
            else:
                a.push_value(0x08FC, span)  # 2300-gas stipend
            a.emit("CALL", span)
            if kind == "transfer":
                ok = self.cc._label("xferok")
                a.push_label(ok, span)
                a.emit("JUMPI", span)
                a.push_value(0, span)
                a.emit("DUP1", span)
                a.emit("REVERT", span)
                a.mark(ok, span)
                return False
            return True
        # typed external call
        member = e.target
        callee_sig = self._external_signature(member.name, e)
        sel = int.from_bytes(keccak_selector(callee_sig), "big")
        in_off, in_size, out_off = self.frame.call_bufs[id(e)]
        a.items.append(Instr("PUSH4", sel.to_bytes(4, "big"), span=span))
        a.push_value(224, span)
        a.emit("SHL", span)
        a.push_value(in_off, span)
        a.emit("MSTORE", span)
        for i, arg in enumerate(e.args):
            self.expr(arg, span)
            a.push_value(in_off + 4 + 32 * i, span)
            a.emit("MSTORE", span)
        a.push_value(0x20, span)        # retSize
        a.push_value(out_off, span)     # retOffset
        a.push_value(in_size, span)     # argsSize
        a.push_value(in_off, span)      # argsOffset
        a.push_value(0, span)           # value
        self.expr(member.obj, span)     # address
        a.emit("GAS", span)
        a.emit("CALL", span)
        ok = self.cc._label("callok")
        a.push_label(ok, span)
        a.emit("JUMPI", span)
        a.push_value(0, span)
        a.emit("DUP1", span)
        a.emit("REVERT", span)
        a.mark(ok, span)
        a.push_value(out_off, span)
        a.emit("MLOAD", span)
        return True

    def _external_signature(self, name: str, call: N.Call) -> str:
        """Resolve the callee signature from the static type if known."""
        typ = self._static_type(call.target.obj)
        if typ is not None and typ in self.cc.contracts:
            target = self.cc.contracts[typ]
            for fn in target.functions:
                if fn.name == name:
                    return signature(fn, self.cc.contracts)
        # Unknown interface: canonicalize arguments as uint256 words.
        args = ",".join("uint256" for _ in call.args)
        return f"{name}({args})"

    def _static_type(self, obj) -> str:
        if isinstance(obj, N.Ident):
            name = obj.name
            for p in self.fn.params:
                if p.name == name:
                    return p.typ.name
            if name in self.cc.state_types:
                return self.cc.state_types[name].name
            return None
        if isinstance(obj, N.Call) and isinstance(obj.target, N.Ident):
            # Cast: ContractType(expr)
            if obj.target.name in self.cc.contracts:
                return obj.target.name
        return None


def compile_contract(contract: N.ContractDef, unit: N.SourceUnit,
                     file_index: int = 0):
    cc = ContractCompiler(contract, unit, file_index)
    code, srcmap, method_ids = cc.compile()
    storage = [{"label": name, "slot": str(slot), "offset": 0,
                "type": ("t_mapping" if cc.state_types[name].is_mapping
                         else f"t_{cc.state_types[name].name}")}
               for name, slot in sorted(cc.state_slots.items(),
                                        key=lambda kv: kv[1])]
    return {
        "code": code,
        "source_map": srcmap,
        "method_identifiers": method_ids,
        "storage_layout": {"storage": storage, "types": {}},
    }
