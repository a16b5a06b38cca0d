"""solc-compatible standard-JSON compilation interface."""

import json

from . import astjson
from .codegen import CodegenError, compile_contract
from .lexer import LexError
from .parser import ParseError, parse

VERSION = "0.8.19-minisol"


def _error(message, source=""):
    return {
        "severity": "error",
        "type": "CompilerError",
        "component": "minisol",
        "message": message,
        "formattedMessage": f"{source}: {message}" if source else message,
    }


def compile_standard(input_doc: dict) -> dict:
    out_sources = {}
    out_contracts = {}
    errors = []
    sources = input_doc.get("sources", {})
    for index, (path, entry) in enumerate(sorted(sources.items())):
        content = entry.get("content")
        if content is None:
            errors.append(_error("missing source content", path))
            continue
        try:
            unit = parse(content)
        except (ParseError, LexError) as exc:
            errors.append(_error(str(exc), path))
            continue
        out_sources[path] = {"id": index,
                             "ast": astjson.source_unit_json(unit, index)}
        per_file = {}
        for contract in unit.contracts:
            if contract.kind == "interface":
                continue
            try:
                built = compile_contract(contract, unit, index)
            except CodegenError as exc:
                errors.append(_error(f"{contract.name}: {exc}", path))
                continue
            per_file[contract.name] = {
                "abi": [],
                "evm": {
                    "methodIdentifiers": built["method_identifiers"],
                    "deployedBytecode": {
                        "object": built["code"].hex(),
                        "sourceMap": built["source_map"],
                    },
                },
                "storageLayout": built["storage_layout"],
            }
        out_contracts[path] = per_file
    result = {"sources": out_sources, "contracts": out_contracts}
    if errors:
        result["errors"] = errors
    return result
