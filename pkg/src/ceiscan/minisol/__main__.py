"""Compiler entry point: ``python -m ceiscan.minisol --standard-json``."""

import json
import sys

from .standard_json import VERSION, compile_standard


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if "--version" in argv:
        print(f"minisol, the fallback subset compiler\nVersion: {VERSION}")
        return 0
    if "--standard-json" in argv:
        try:
            input_doc = json.load(sys.stdin)
        except json.JSONDecodeError as exc:
            json.dump({"errors": [{"severity": "error",
                                   "message": f"bad input JSON: {exc}"}]},
                      sys.stdout)
            return 0
        json.dump(compile_standard(input_doc), sys.stdout)
        return 0
    sys.stderr.write("usage: python -m ceiscan.minisol --standard-json|--version\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
