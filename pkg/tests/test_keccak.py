from ceiscan.evm.keccak import keccak256, selector

# Standard keccak-256 vectors (pre-NIST padding).
VECTORS = [
    (b"", "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470"),
    (b"abc", "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45"),
    (b"testing", "5f16f4c7f149ac4f9510d9cf8cf384038ad348b3bcdc01915f95de12df9d1b02"),
    (b"The quick brown fox jumps over the lazy dog",
     "4d741b6f1eb29cb2a9b9911c82f56fa8d73b04959d3d9d222895df6c0b28aa15"),
    # The canonical Ethereum mapping slot hash: keccak(pad32(0) ++ pad32(0)).
    (b"\x00" * 64, "ad3228b676f7d3cd4284a5443f17f1962b36e491b30a40b2405849e597ba5fb5"),
    # Multi-block absorb (> 136-byte rate); value cross-checked against an
    # independently written permutation.
    (b"a" * 200, "96ea54061def936c4be90b518992fdc6f12f535068a256229aca54267b4d084d"),
]


def test_vectors():
    for data, digest in VECTORS:
        assert keccak256(data).hex() == digest


def test_selector_known_values():
    # Canonical ERC-20 selectors.
    assert selector("transfer(address,uint256)").hex() == "a9059cbb"
    assert selector("balanceOf(address)").hex() == "70a08231"


def test_differs_from_sha3():
    import hashlib
    assert keccak256(b"abc") != hashlib.sha3_256(b"abc").digest()
