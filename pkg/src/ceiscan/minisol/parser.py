"""Recursive-descent parser for the supported Solidity subset.

Unsupported constructs fail loudly with offsets; the surface is what
the analyzer's fixture corpus needs (contracts, interfaces, single
inheritance, modifiers, mappings, require/assert, if/while, typed and
low-level external calls), not the whole language.
"""

from .lexer import Token, tokenize
from . import nodes as N

ELEMENTARY = {"uint", "uint256", "address", "bool", "bytes", "string"}


class ParseError(Exception):
    pass


class Parser:
    def __init__(self, source: str):
        self.src = source
        self.tokens = tokenize(source)
        self.pos = 0

    # -- token helpers --------------------------------------------------

    def peek(self, ahead=0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, text) -> bool:
        if self.peek().text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, got {tok.text!r} "
                             f"at offset {tok.offset}")
        return tok

    def expect_ident(self) -> Token:
        tok = self.next()
        if tok.kind not in ("ident", "keyword"):
            raise ParseError(f"expected identifier at offset {tok.offset}")
        return tok

    def span_from(self, start_tok: Token) -> tuple:
        end = self.tokens[self.pos - 1]
        return (start_tok.offset, end.offset + len(end.text) - start_tok.offset)

    # -- grammar ---------------------------------------------------------

    def parse(self) -> N.SourceUnit:
        unit = N.SourceUnit(span=(0, len(self.src)))
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "pragma":
                while self.next().text != ";":
                    pass
            elif tok.text in ("contract", "interface"):
                unit.contracts.append(self.contract())
            else:
                raise ParseError(f"unexpected {tok.text!r} at top level "
                                 f"(offset {tok.offset})")
        return unit

    def contract(self) -> N.ContractDef:
        start = self.next()  # contract | interface
        name = self.expect_ident().text
        out = N.ContractDef(name=name, kind=start.text)
        if self.accept("is"):
            out.bases.append(self.expect_ident().text)
            while self.accept(","):
                out.bases.append(self.expect_ident().text)
        self.expect("{")
        while not self.accept("}"):
            self.contract_part(out)
        out.span = self.span_from(start)
        return out

    def contract_part(self, contract: N.ContractDef):
        tok = self.peek()
        if tok.text == "function":
            fn = self.function_def()
            contract.functions.append(fn)
        elif tok.text == "constructor":
            fn = self.function_def(constructor=True)
            contract.constructor = fn
        elif tok.text == "modifier":
            contract.modifiers.append(self.modifier_def())
        elif tok.text == "event":
            while self.next().text != ";":
                pass
        else:
            contract.state_vars.append(self.state_var())

    def type_name(self) -> N.TypeName:
        tok = self.next()
        if tok.text == "mapping":
            self.expect("(")
            key = self.next().text
            self.expect("=>")
            value = self.type_name()
            self.expect(")")
            return N.TypeName(span=self.span_from(tok), name="mapping",
                              mapping_key=key, mapping_value=value)
        if tok.text in ELEMENTARY or tok.kind == "ident":
            name = "uint256" if tok.text == "uint" else tok.text
            return N.TypeName(span=(tok.offset, len(tok.text)), name=name)
        raise ParseError(f"expected type at offset {tok.offset}")

    def state_var(self) -> N.StateVarDecl:
        start = self.peek()
        typ = self.type_name()
        decl = N.StateVarDecl(typ=typ)
        while self.peek().text in ("public", "private", "internal",
                                   "immutable", "constant"):
            word = self.next().text
            if word in ("immutable", "constant"):
                decl.mutability = word
            else:
                decl.visibility = word
        decl.name = self.expect_ident().text
        if self.accept("="):
            decl.init = self.expression()
        self.expect(";")
        decl.span = self.span_from(start)
        return decl

    def function_def(self, constructor=False) -> N.FunctionDef:
        start = self.next()  # function | constructor
        fn = N.FunctionDef(is_constructor=constructor)
        if not constructor:
            fn.name = self.expect_ident().text
        self.expect("(")
        fn.params = self.param_list()
        head_end = None
        while True:
            tok = self.peek()
            if tok.text in ("public", "private", "internal", "external"):
                fn.visibility = self.next().text
            elif tok.text in ("view", "pure", "payable"):
                fn.mutability = self.next().text
            elif tok.text == "returns":
                self.next()
                self.expect("(")
                fn.returns = self.type_name()
                # An optional name for the return value is ignored.
                if self.peek().kind == "ident":
                    self.next()
                self.expect(")")
            elif tok.kind == "ident":
                fn.modifiers.append(self.next().text)
                if self.accept("("):
                    self.expect(")")
            else:
                break
        head_end = self.tokens[self.pos - 1]
        fn.head_span = (start.offset,
                        head_end.offset + len(head_end.text) - start.offset)
        if self.accept(";"):
            fn.body = None
        else:
            self.expect("{")
            fn.body = self.block_statements()
        fn.span = self.span_from(start)
        return fn

    def modifier_def(self) -> N.ModifierDef:
        start = self.expect("modifier")
        name = self.expect_ident().text
        if self.accept("("):
            self.expect(")")
        head_end = self.tokens[self.pos - 1]
        self.expect("{")
        body = self.block_statements()
        md = N.ModifierDef(name=name, body=body, span=self.span_from(start))
        md.head_span = (start.offset,
                        head_end.offset + len(head_end.text) - start.offset)
        return md

    def param_list(self) -> list:
        params = []
        if self.accept(")"):
            return params
        while True:
            typ = self.type_name()
            while self.peek().text in ("memory", "calldata", "storage", "payable"):
                self.next()
            name_tok = self.expect_ident()
            params.append(N.Param(span=(typ.span[0],
                                        name_tok.offset + len(name_tok.text)
                                        - typ.span[0]),
                                  typ=typ, name=name_tok.text))
            if self.accept(")"):
                return params
            self.expect(",")

    # -- statements -------------------------------------------------------

    def block_statements(self) -> list:
        out = []
        while not self.accept("}"):
            out.append(self.statement())
        return out

    def statement(self) -> N.Stmt:
        tok = self.peek()
        if tok.text in ("require", "assert"):
            self.next()
            self.expect("(")
            cond = self.expression()
            message = None
            if self.accept(","):
                msg_tok = self.next()
                message = msg_tok.text.strip('"')
            self.expect(")")
            self.expect(";")
            return N.RequireStmt(span=self.span_from(tok), cond=cond,
                                 message=message,
                                 is_assert=tok.text == "assert")
        if tok.text == "if":
            self.next()
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            then = self.branch_body()
            otherwise = None
            if self.accept("else"):
                otherwise = self.branch_body()
            return N.IfStmt(span=self.span_from(tok), cond=cond, then=then,
                            otherwise=otherwise)
        if tok.text == "while":
            self.next()
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            body = self.branch_body()
            return N.WhileStmt(span=self.span_from(tok), cond=cond, body=body)
        if tok.text == "return":
            self.next()
            value = None if self.peek().text == ";" else self.expression()
            self.expect(";")
            return N.ReturnStmt(span=self.span_from(tok), value=value)
        if tok.text == "_":
            self.next()
            self.expect(";")
            return N.PlaceholderStmt(span=self.span_from(tok))
        if tok.text == "emit":
            while self.next().text != ";":
                pass
            return N.ExprStmt(span=self.span_from(tok),
                              expr=N.Literal(kind="number", value=0))
        if self.is_declaration():
            typ = self.type_name()
            while self.peek().text in ("memory", "calldata", "storage"):
                self.next()
            name = self.expect_ident().text
            init = None
            if self.accept("="):
                init = self.expression()
            self.expect(";")
            return N.VarDeclStmt(span=self.span_from(tok), typ=typ,
                                 name=name, init=init)
        expr = self.expression()
        self.expect(";")
        return N.ExprStmt(span=self.span_from(tok), expr=expr)

    def branch_body(self) -> list:
        if self.accept("{"):
            return self.block_statements()
        return [self.statement()]

    def is_declaration(self) -> bool:
        tok = self.peek()
        if tok.text in ELEMENTARY or tok.text == "mapping":
            return True
        # "Ident ident" where the second token is a plain identifier is a
        # local declaration with a user-defined type.
        if tok.kind == "ident":
            nxt = self.peek(1)
            if nxt.kind == "ident":
                return True
            if nxt.text in ("memory", "calldata", "storage"):
                return True
        return False

    # -- expressions ------------------------------------------------------

    def expression(self) -> N.Expr:
        return self.assignment()

    def assignment(self) -> N.Expr:
        left = self.logical_or()
        tok = self.peek()
        if tok.text in ("=", "+=", "-=", "*=", "/="):
            self.next()
            value = self.assignment()
            return N.Assign(span=(left.span[0],
                                  value.span[0] + value.span[1] - left.span[0]),
                            op=tok.text, target=left, value=value)
        return left

    def _binary_level(self, ops, next_level):
        left = next_level()
        while self.peek().text in ops:
            op = self.next().text
            right = next_level()
            left = N.Binary(span=(left.span[0],
                                  right.span[0] + right.span[1] - left.span[0]),
                            op=op, left=left, right=right)
        return left

    def logical_or(self):
        return self._binary_level(("||",), self.logical_and)

    def logical_and(self):
        return self._binary_level(("&&",), self.equality)

    def equality(self):
        return self._binary_level(("==", "!="), self.comparison)

    def comparison(self):
        return self._binary_level(("<", ">", "<=", ">="), self.additive)

    def additive(self):
        return self._binary_level(("+", "-"), self.multiplicative)

    def multiplicative(self):
        return self._binary_level(("*", "/", "%"), self.unary)

    def unary(self):
        tok = self.peek()
        if tok.text in ("!", "-"):
            self.next()
            operand = self.unary()
            return N.Unary(span=self.span_from(tok), op=tok.text,
                           operand=operand)
        return self.postfix()

    def postfix(self):
        expr = self.primary()
        while True:
            tok = self.peek()
            if tok.text == ".":
                self.next()
                name = self.expect_ident().text
                expr = N.Member(span=self.span_from_node(expr), obj=expr,
                                name=name)
            elif tok.text == "[":
                self.next()
                key = self.expression()
                self.expect("]")
                expr = N.Index(span=self.span_from_node(expr), base=expr,
                               key=key)
            elif tok.text == "{":
                # call options: {value: expr}
                self.next()
                self.expect("value")
                self.expect(":")
                value = self.expression()
                self.expect("}")
                expr = N.Call(span=self.span_from_node(expr), target=expr,
                              args=[], value_option=value)
            elif tok.text == "(":
                self.next()
                args = []
                if not self.accept(")"):
                    args.append(self.expression())
                    while self.accept(","):
                        args.append(self.expression())
                    self.expect(")")
                if isinstance(expr, N.Call) and expr.value_option is not None \
                        and not expr.args:
                    expr.args = args
                    expr.span = self.span_from_node(expr)
                else:
                    expr = N.Call(span=self.span_from_node(expr), target=expr,
                                  args=args)
            else:
                return expr

    def span_from_node(self, node: N.Node) -> tuple:
        end = self.tokens[self.pos - 1]
        return (node.span[0], end.offset + len(end.text) - node.span[0])

    def primary(self):
        tok = self.next()
        if tok.kind == "number":
            value = int(tok.text, 16) if tok.text.startswith("0x") else int(tok.text)
            return N.Literal(span=(tok.offset, len(tok.text)), kind="number",
                             value=value)
        if tok.text in ("true", "false"):
            return N.Literal(span=(tok.offset, len(tok.text)), kind="bool",
                             value=tok.text == "true")
        if tok.kind == "string":
            return N.Literal(span=(tok.offset, len(tok.text)), kind="string",
                             value=tok.text.strip('"'))
        if tok.text == "(":
            expr = self.expression()
            self.expect(")")
            return expr
        if tok.kind in ("ident", "keyword") and tok.text not in ("{", "}"):
            return N.Ident(span=(tok.offset, len(tok.text)), name=tok.text)
        raise ParseError(f"unexpected token {tok.text!r} at offset {tok.offset}")


def parse(source: str) -> N.SourceUnit:
    return Parser(source).parse()
