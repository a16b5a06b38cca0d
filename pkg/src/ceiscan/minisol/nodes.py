"""Parse-tree nodes. Spans are (start, length) into the source text."""

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Node:
    span: tuple = (0, 0)


@dataclass
class TypeName(Node):
    name: str = ""                      # uint256 | address | bool | bytes | <Contract>
    mapping_key: Optional[str] = None   # set for mapping(key => value)
    mapping_value: Optional["TypeName"] = None

    @property
    def is_mapping(self):
        return self.mapping_key is not None


@dataclass
class Expr(Node):
    pass


@dataclass
class Literal(Expr):
    kind: str = "number"  # number | bool | string
    value: object = 0


@dataclass
class Ident(Expr):
    name: str = ""


@dataclass
class Member(Expr):
    obj: Expr = None
    name: str = ""


@dataclass
class Index(Expr):
    base: Expr = None
    key: Expr = None


@dataclass
class Call(Expr):
    target: Expr = None
    args: list = field(default_factory=list)
    value_option: Optional[Expr] = None  # {value: ...}


@dataclass
class Binary(Expr):
    op: str = ""
    left: Expr = None
    right: Expr = None


@dataclass
class Unary(Expr):
    op: str = ""
    operand: Expr = None


@dataclass
class Assign(Expr):
    op: str = "="  # = += -= *= /=
    target: Expr = None
    value: Expr = None


@dataclass
class Stmt(Node):
    pass


@dataclass
class VarDeclStmt(Stmt):
    typ: TypeName = None
    name: str = ""
    init: Optional[Expr] = None


@dataclass
class ExprStmt(Stmt):
    expr: Expr = None


@dataclass
class RequireStmt(Stmt):
    cond: Expr = None
    message: Optional[str] = None
    is_assert: bool = False


@dataclass
class IfStmt(Stmt):
    cond: Expr = None
    then: list = field(default_factory=list)
    otherwise: Optional[list] = None


@dataclass
class WhileStmt(Stmt):
    cond: Expr = None
    body: list = field(default_factory=list)


@dataclass
class ReturnStmt(Stmt):
    value: Optional[Expr] = None


@dataclass
class PlaceholderStmt(Stmt):
    pass


@dataclass
class Param(Node):
    typ: TypeName = None
    name: str = ""


@dataclass
class FunctionDef(Node):
    name: str = ""
    params: list = field(default_factory=list)
    visibility: str = "public"
    mutability: str = ""              # "" | view | pure | payable
    modifiers: list = field(default_factory=list)
    returns: Optional[TypeName] = None
    body: Optional[list] = None       # None for interface declarations
    is_constructor: bool = False
    head_span: tuple = (0, 0)         # signature span (decl line)


@dataclass
class ModifierDef(Node):
    name: str = ""
    body: list = field(default_factory=list)
    head_span: tuple = (0, 0)


@dataclass
class StateVarDecl(Node):
    typ: TypeName = None
    name: str = ""
    visibility: str = "internal"
    mutability: str = "mutable"       # mutable | immutable | constant
    init: Optional[Expr] = None


@dataclass
class ContractDef(Node):
    name: str = ""
    kind: str = "contract"            # contract | interface
    bases: list = field(default_factory=list)
    state_vars: list = field(default_factory=list)
    functions: list = field(default_factory=list)
    modifiers: list = field(default_factory=list)
    constructor: Optional[FunctionDef] = None


@dataclass
class SourceUnit(Node):
    contracts: list = field(default_factory=list)
