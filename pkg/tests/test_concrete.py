"""Vector tests for the concrete interpreter (the differential oracle)."""

from ceiscan.evm.concrete import Account, Chain, Interpreter, U256


def run(hexcode, calldata=b"", storage=None, caller=0xCA11E4, callvalue=0,
        chain=None):
    chain = chain or Chain()
    acct = chain.account(0xAAAA)
    acct.code = bytes.fromhex(hexcode)
    if storage:
        acct.storage.update(storage)
    interp = Interpreter(chain)
    return interp.run(0xAAAA, calldata, caller=caller, callvalue=callvalue), acct


def returned_word(outcome):
    return int.from_bytes(outcome.returndata, "big")


def test_arithmetic_and_return():
    # PUSH1 2; PUSH1 3; ADD; MSTORE(0); RETURN(0, 32)
    out, _ = run("600260030160005260206000f3")
    assert out.status == "return"
    assert returned_word(out) == 5


def test_sub_underflow_wraps():
    # PUSH1 3; PUSH1 0; SUB -> 0 - 3
    out, _ = run("600360000360005260206000f3")
    assert returned_word(out) == U256 - 2


def test_div_by_zero_is_zero():
    # PUSH1 0; PUSH1 5; DIV -> 5 // 0
    out, _ = run("600060050460005260206000f3")
    assert returned_word(out) == 0


def test_storage_roundtrip():
    out, acct = run("600760015560015460005260206000f3")
    assert acct.storage[1] == 7
    assert returned_word(out) == 7
    assert out.trace.sstores[0][:3] == (0xAAAA, 1, 7)


def test_revert_restores_storage():
    out, acct = run("600760015560006000fd", storage={1: 42})
    assert out.status == "revert"
    assert acct.storage[1] == 42


def test_calldataload_pads_right():
    out, _ = run("60003560005260206000f3", calldata=b"\x01\x02")
    assert out.returndata[:2] == b"\x01\x02"
    assert set(out.returndata[2:]) == {0}


def test_caller_and_callvalue():
    out, _ = run("3360005260206000f3", caller=0xBEEF)
    assert returned_word(out) == 0xBEEF
    out, _ = run("3460005260206000f3", callvalue=99)
    assert returned_word(out) == 99


def test_sha3_matches_keccak():
    from ceiscan.evm.keccak import keccak256
    # MSTORE(0, 1); SHA3(0, 32); MSTORE(0); RETURN(0, 32)
    out, _ = run("6001600052602060002060005260206000f3")
    assert out.returndata == keccak256((1).to_bytes(32, "big"))


def test_jump_and_jumpi():
    out, _ = run("6001600657005b600160005260206000f3")
    assert returned_word(out) == 1
    out, _ = run("6000600657005b600160005260206000f3")
    assert out.status == "return" and out.returndata == b""


def test_bad_jump_aborts():
    out, _ = run("600556")
    assert out.status == "bad-jump"


def test_trace_records_blocks_and_jumps():
    out, _ = run("6001600657005b600160005260206000f3")
    assert (0xAAAA, 0) in out.trace.block_offsets
    assert (0xAAAA, 4, 6) in out.trace.jumps


def test_cross_contract_call_and_returndata():
    chain = Chain()
    chain.account(0xB).code = bytes.fromhex("602a60005260206000f3")
    # CALL(gas, 0xb, 0, in=0/0, out=0/32); then return memory word 0.
    chain.account(0xAAAA).code = bytes.fromhex(
        "60206000600060006000600b5af15060206000f3")
    out = Interpreter(chain).run(0xAAAA, b"")
    assert returned_word(out) == 0x2A
    assert (0xAAAA, 0xB, 0) in out.trace.calls


def test_unknown_callee_scripted():
    chain = Chain()
    chain.account(0xAAAA).code = bytes.fromhex(
        "60206000600060006000600b5af15060206000f3")
    interp = Interpreter(chain, unknown_call_handler=lambda t, v, d: (1, b"\x09" * 32))
    out = interp.run(0xAAAA, b"")
    assert out.returndata == b"\x09" * 32


def test_callee_revert_rolls_back_callee_storage():
    chain = Chain()
    chain.account(0xB).code = bytes.fromhex("600560015560006000fd")
    chain.account(0xB).storage[1] = 77
    # Store the CALL success flag and return it.
    chain.account(0xAAAA).code = bytes.fromhex(
        "60006000600060006000600b5af160005260206000f3")
    out = Interpreter(chain).run(0xAAAA, b"")
    assert returned_word(out) == 0
    assert chain.account(0xB).storage[1] == 77


def test_call_router_redirects():
    chain = Chain()
    chain.account(0xB).code = bytes.fromhex("602a60005260206000f3")
    chain.account(0xAAAA).code = bytes.fromhex(
        "6020600060006000600060995af15060206000f3")
    interp = Interpreter(chain, call_router=lambda a, pc, t: 0xB)
    out = interp.run(0xAAAA, b"")
    assert returned_word(out) == 0x2A
