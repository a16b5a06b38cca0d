"""Keccak-256 (the pre-NIST padding variant used by the EVM).

hashlib's sha3_256 applies SHA-3 domain padding (0x06) and produces
different digests, so the permutation is implemented here directly.
"""

_MASK = (1 << 64) - 1

_ROUND_CONSTANTS = (
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A,
    0x8000000080008000, 0x000000000000808B, 0x0000000080000001,
    0x8000000080008081, 0x8000000000008009, 0x000000000000008A,
    0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089,
    0x8000000000008003, 0x8000000000008002, 0x8000000000000080,
    0x000000000000800A, 0x800000008000000A, 0x8000000080008081,
    0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
)

# Rotation offsets indexed [x][y].
_ROTATIONS = (
    (0, 36, 3, 41, 18),
    (1, 44, 10, 45, 2),
    (62, 6, 43, 15, 61),
    (28, 55, 25, 21, 56),
    (27, 20, 39, 8, 14),
)


def _rotl(value, shift):
    return ((value << shift) | (value >> (64 - shift))) & _MASK


def _keccak_f(lanes):
    for rc in _ROUND_CONSTANTS:
        # theta
        c = [lanes[x][0] ^ lanes[x][1] ^ lanes[x][2] ^ lanes[x][3] ^ lanes[x][4]
             for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rotl(c[(x + 1) % 5], 1) for x in range(5)]
        for x in range(5):
            for y in range(5):
                lanes[x][y] ^= d[x]
        # rho + pi
        b = [[0] * 5 for _ in range(5)]
        for x in range(5):
            for y in range(5):
                b[y][(2 * x + 3 * y) % 5] = _rotl(lanes[x][y], _ROTATIONS[x][y])
        # chi
        for x in range(5):
            for y in range(5):
                lanes[x][y] = b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y])
        # iota
        lanes[0][0] ^= rc
    return lanes


def keccak256(data: bytes) -> bytes:
    """Return the 32-byte keccak-256 digest of ``data``."""
    rate = 136  # 1088-bit rate for the 256-bit variant
    padded = bytearray(data)
    pad_len = rate - (len(padded) % rate)
    padded += b"\x00" * pad_len
    padded[len(data)] ^= 0x01
    padded[-1] ^= 0x80

    lanes = [[0] * 5 for _ in range(5)]
    for block_start in range(0, len(padded), rate):
        for i in range(rate // 8):
            lane = int.from_bytes(padded[block_start + 8 * i:block_start + 8 * i + 8],
                                  "little")
            lanes[i % 5][i // 5] ^= lane
        _keccak_f(lanes)

    out = bytearray()
    for i in range(4):  # 32 bytes = 4 lanes
        out += lanes[i % 5][i // 5].to_bytes(8, "little")
    return bytes(out)


def selector(signature: str) -> bytes:
    """First four digest bytes of a canonical function signature."""
    return keccak256(signature.encode("ascii"))[:4]
