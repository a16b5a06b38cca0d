from hypothesis import given, settings, strategies as st

from ceiscan.sym import terms as T

# Reference semantics written against plain ints; the production
# simplifier must never change the meaning of a term.


def ref_eval(plan, env):
    M = (1 << 256) - 1

    def sgn(x):
        return x - (1 << 256) if x >> 255 else x

    if isinstance(plan, int):
        return plan & M
    if isinstance(plan, str):
        return env[plan] & M
    name, *args = plan
    v = [ref_eval(a, env) for a in args]
    if name == "ADD":
        return (v[0] + v[1]) & M
    if name == "SUB":
        return (v[0] - v[1]) & M
    if name == "MUL":
        return (v[0] * v[1]) & M
    if name == "DIV":
        return 0 if v[1] == 0 else v[0] // v[1]
    if name == "AND":
        return v[0] & v[1]
    if name == "OR":
        return v[0] | v[1]
    if name == "XOR":
        return v[0] ^ v[1]
    if name == "NOT":
        return v[0] ^ M
    if name == "SHL":
        return (v[1] << v[0]) & M if v[0] < 256 else 0
    if name == "SHR":
        return v[1] >> v[0] if v[0] < 256 else 0
    if name == "LT":
        return int(v[0] < v[1])
    if name == "GT":
        return int(v[0] > v[1])
    if name == "SLT":
        return int(sgn(v[0]) < sgn(v[1]))
    if name == "EQ":
        return int(v[0] == v[1])
    if name == "ISZERO":
        return int(v[0] == 0)
    raise AssertionError(name)


def build(plan):
    if isinstance(plan, int):
        return T.const(plan)
    if isinstance(plan, str):
        return T.var(plan)
    name, *args = plan
    return T.op(name, *(build(a) for a in args))


_BIN = ["ADD", "SUB", "MUL", "DIV", "AND", "OR", "XOR", "SHL", "SHR",
        "LT", "GT", "SLT", "EQ"]

leaves = st.one_of(
    st.integers(0, 2**256 - 1),
    st.sampled_from(["x", "y", "z"]),
    st.sampled_from([0, 1, 224, 2**256 - 1]),
)
plans = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.tuples(st.sampled_from(_BIN), inner, inner),
        st.tuples(st.sampled_from(["NOT", "ISZERO"]), inner),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(plans, st.integers(0, 2**256 - 1), st.integers(0, 2**256 - 1),
       st.integers(0, 2**256 - 1))
def test_simplifier_preserves_semantics(plan, x, y, z):
    env = {"x": x, "y": y, "z": z}
    assert T.evaluate(build(plan), env) == ref_eval(plan, env)


def test_hash_consing_gives_identity():
    a = T.op("ADD", T.var("x"), T.const(1))
    b = T.op("ADD", T.var("x"), T.const(1))
    assert a is b


def test_constant_folding():
    assert T.op("ADD", T.const(2), T.const(3)).value == 5
    assert T.op("SUB", T.const(0), T.const(1)).value == (1 << 256) - 1


def test_selector_extraction_folds():
    # SHR(224, OR(SHL(224, sel), SHR(32, arg))) -> sel
    sel = T.const(0xA9059CBB)
    arg = T.var("arg0")
    word = T.op("OR", T.op("SHL", T.const(224), sel), T.op("SHR", T.const(32), arg))
    out = T.op("SHR", T.const(224), word)
    assert out.is_const and out.value == 0xA9059CBB


def test_eq_same_term_is_one():
    x = T.op("ADD", T.var("v"), T.const(7))
    assert T.op("EQ", x, x) is T.ONE


def test_sha3_concrete_matches_keccak():
    from ceiscan.evm.keccak import keccak256
    t = T.sha3(64, T.const(5), T.const(0))
    expected = keccak256((5).to_bytes(32, "big") + (0).to_bytes(32, "big"))
    assert T.evaluate(t, {}) == int.from_bytes(expected, "big")


def test_substitute_rewrites_and_resimplifies():
    t = T.op("ADD", T.var("a"), T.const(0))
    assert t is T.var("a")
    t2 = T.substitute(T.op("LT", T.var("a"), T.var("b")), {"a": T.const(1),
                                                           "b": T.const(2)})
    assert t2 is T.ONE


def test_free_vars():
    t = T.op("ADD", T.var("p"), T.op("MUL", T.var("q"), T.const(3)))
    assert T.free_vars(t) == {"p", "q"}
