"""Render the parse tree as a solc-style AST document (modern schema)."""

from . import nodes as N

_ids = [0]


def _nid():
    _ids[0] += 1
    return _ids[0]


def _src(span, file_index=0):
    return f"{span[0]}:{span[1]}:{file_index}"


def type_name_json(t: N.TypeName, file_index):
    if t.is_mapping:
        return {
            "id": _nid(), "nodeType": "Mapping", "src": _src(t.span, file_index),
            "keyType": {"id": _nid(), "nodeType": "ElementaryTypeName",
                        "name": t.mapping_key, "src": _src(t.span, file_index)},
            "valueType": type_name_json(t.mapping_value, file_index),
        }
    if t.name in ("uint256", "address", "bool", "bytes", "string"):
        return {"id": _nid(), "nodeType": "ElementaryTypeName", "name": t.name,
                "src": _src(t.span, file_index)}
    return {"id": _nid(), "nodeType": "UserDefinedTypeName", "name": t.name,
            "src": _src(t.span, file_index)}


def expr_json(e: N.Expr, fi):
    src = _src(e.span, fi)
    if isinstance(e, N.Literal):
        kind = e.kind
        value = e.value
        if kind == "bool":
            value = "true" if value else "false"
        elif kind == "number":
            value = str(value)
        return {"id": _nid(), "nodeType": "Literal", "kind": kind,
                "value": value, "src": src}
    if isinstance(e, N.Ident):
        return {"id": _nid(), "nodeType": "Identifier", "name": e.name,
                "src": src}
    if isinstance(e, N.Member):
        return {"id": _nid(), "nodeType": "MemberAccess", "memberName": e.name,
                "expression": expr_json(e.obj, fi), "src": src}
    if isinstance(e, N.Index):
        return {"id": _nid(), "nodeType": "IndexAccess",
                "baseExpression": expr_json(e.base, fi),
                "indexExpression": expr_json(e.key, fi), "src": src}
    if isinstance(e, N.Call):
        target = expr_json(e.target, fi)
        if e.value_option is not None:
            target = {"id": _nid(), "nodeType": "FunctionCallOptions",
                      "expression": target, "names": ["value"],
                      "options": [expr_json(e.value_option, fi)], "src": src}
        kind = "functionCall"
        if isinstance(e.target, N.Ident) and e.target.name in (
                "address", "uint", "uint256", "payable", "bool"):
            kind = "typeConversion"
            target = {"id": _nid(), "nodeType": "ElementaryTypeNameExpression",
                      "typeName": {"name": "address"
                                   if e.target.name == "payable"
                                   else e.target.name},
                      "src": _src(e.target.span, fi)}
        return {"id": _nid(), "nodeType": "FunctionCall", "kind": kind,
                "expression": target,
                "arguments": [expr_json(a, fi) for a in e.args], "src": src}
    if isinstance(e, N.Binary):
        return {"id": _nid(), "nodeType": "BinaryOperation", "operator": e.op,
                "leftExpression": expr_json(e.left, fi),
                "rightExpression": expr_json(e.right, fi), "src": src}
    if isinstance(e, N.Unary):
        return {"id": _nid(), "nodeType": "UnaryOperation", "operator": e.op,
                "prefix": True, "subExpression": expr_json(e.operand, fi),
                "src": src}
    if isinstance(e, N.Assign):
        return {"id": _nid(), "nodeType": "Assignment", "operator": e.op,
                "leftHandSide": expr_json(e.target, fi),
                "rightHandSide": expr_json(e.value, fi), "src": src}
    raise TypeError(f"unhandled expression node {e!r}")


def stmt_json(s: N.Stmt, fi):
    src = _src(s.span, fi)
    if isinstance(s, N.VarDeclStmt):
        decl = {"id": _nid(), "nodeType": "VariableDeclaration", "name": s.name,
                "stateVariable": False, "storageLocation": "default",
                "typeName": type_name_json(s.typ, fi), "src": src}
        return {"id": _nid(), "nodeType": "VariableDeclarationStatement",
                "declarations": [decl],
                "initialValue": expr_json(s.init, fi) if s.init else None,
                "src": src}
    if isinstance(s, N.ExprStmt):
        return {"id": _nid(), "nodeType": "ExpressionStatement",
                "expression": expr_json(s.expr, fi), "src": src}
    if isinstance(s, N.RequireStmt):
        name = "assert" if s.is_assert else "require"
        args = [expr_json(s.cond, fi)]
        if s.message is not None:
            args.append({"id": _nid(), "nodeType": "Literal", "kind": "string",
                         "value": s.message, "src": src})
        call = {"id": _nid(), "nodeType": "FunctionCall", "kind": "functionCall",
                "expression": {"id": _nid(), "nodeType": "Identifier",
                               "name": name, "src": src},
                "arguments": args, "src": src}
        return {"id": _nid(), "nodeType": "ExpressionStatement",
                "expression": call, "src": src}
    if isinstance(s, N.IfStmt):
        return {"id": _nid(), "nodeType": "IfStatement",
                "condition": expr_json(s.cond, fi),
                "trueBody": block_json(s.then, s.span, fi),
                "falseBody": block_json(s.otherwise, s.span, fi)
                if s.otherwise is not None else None,
                "src": src}
    if isinstance(s, N.WhileStmt):
        return {"id": _nid(), "nodeType": "WhileStatement",
                "condition": expr_json(s.cond, fi),
                "body": block_json(s.body, s.span, fi), "src": src}
    if isinstance(s, N.ReturnStmt):
        return {"id": _nid(), "nodeType": "Return",
                "expression": expr_json(s.value, fi) if s.value else None,
                "src": src}
    if isinstance(s, N.PlaceholderStmt):
        return {"id": _nid(), "nodeType": "PlaceholderStatement", "src": src}
    raise TypeError(f"unhandled statement node {s!r}")


def block_json(statements, span, fi):
    return {"id": _nid(), "nodeType": "Block",
            "statements": [stmt_json(s, fi) for s in statements],
            "src": _src(span, fi)}


def param_list_json(params, span, fi):
    return {"id": _nid(), "nodeType": "ParameterList",
            "parameters": [
                {"id": _nid(), "nodeType": "VariableDeclaration",
                 "name": p.name, "stateVariable": False,
                 "storageLocation": "default",
                 "typeName": type_name_json(p.typ, fi), "src": _src(p.span, fi)}
                for p in params],
            "src": _src(span, fi)}


def function_json(fn: N.FunctionDef, fi):
    returns = []
    if fn.returns is not None:
        returns = [N.Param(span=fn.returns.span, typ=fn.returns, name="")]
    return {
        "id": _nid(), "nodeType": "FunctionDefinition",
        "kind": "constructor" if fn.is_constructor else "function",
        "name": fn.name, "visibility": fn.visibility,
        "stateMutability": fn.mutability or "nonpayable",
        "modifiers": [
            {"id": _nid(), "nodeType": "ModifierInvocation",
             "modifierName": {"name": m}, "src": _src(fn.head_span, fi)}
            for m in fn.modifiers],
        "parameters": param_list_json(fn.params, fn.head_span, fi),
        "returnParameters": param_list_json(returns, fn.head_span, fi),
        "body": block_json(fn.body, fn.span, fi) if fn.body is not None else None,
        "src": _src(fn.span, fi),
        "nameSrc": _src(fn.head_span, fi),
    }


def contract_json(c: N.ContractDef, fi):
    nodes = []
    for sv in c.state_vars:
        nodes.append({
            "id": _nid(), "nodeType": "VariableDeclaration", "name": sv.name,
            "stateVariable": True, "visibility": sv.visibility,
            "mutability": sv.mutability,
            "typeName": type_name_json(sv.typ, fi),
            "value": expr_json(sv.init, fi) if sv.init else None,
            "src": _src(sv.span, fi)})
    for md in c.modifiers:
        nodes.append({
            "id": _nid(), "nodeType": "ModifierDefinition", "name": md.name,
            "body": block_json(md.body, md.span, fi),
            "src": _src(md.span, fi),
            "nameSrc": _src(md.head_span, fi)})
    if c.constructor is not None:
        nodes.append(function_json(c.constructor, fi))
    for fn in c.functions:
        nodes.append(function_json(fn, fi))
    return {
        "id": _nid(), "nodeType": "ContractDefinition", "name": c.name,
        "contractKind": c.kind, "abstract": False,
        "baseContracts": [
            {"id": _nid(), "nodeType": "InheritanceSpecifier",
             "baseName": {"name": b}, "src": _src(c.span, fi)}
            for b in c.bases],
        "nodes": nodes, "src": _src(c.span, fi)}


def source_unit_json(unit: N.SourceUnit, file_index=0):
    return {"id": _nid(), "nodeType": "SourceUnit",
            "nodes": [contract_json(c, file_index) for c in unit.contracts],
            "src": _src(unit.span, file_index)}
