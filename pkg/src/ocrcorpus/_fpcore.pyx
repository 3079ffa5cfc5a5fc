# cython: language_level=3
"""Compiled 128-bit fingerprint kernel (MurmurHash3 x64/128, seed 0).

Byte-compatible with the pure-Python fallback in ``ocrcorpus._fp_py``.
"""

from libc.stdint cimport uint64_t, uint8_t
from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_GET_SIZE

cdef uint64_t C1 = 0x87C37B91114253D5ULL
cdef uint64_t C2 = 0x4CF5AD432745937FULL


cdef inline uint64_t rotl64(uint64_t x, int r) nogil:
    return (x << r) | (x >> (64 - r))


cdef inline uint64_t fmix64(uint64_t k) nogil:
    k ^= k >> 33
    k *= 0xFF51AFD7ED558CCDULL
    k ^= k >> 33
    k *= 0xC4CEB9FE1A85EC53ULL
    k ^= k >> 33
    return k


cdef inline uint64_t load64(const uint8_t *p) nogil:
    # little-endian, alignment-safe
    return (<uint64_t>p[0]) | (<uint64_t>p[1]) << 8 | (<uint64_t>p[2]) << 16 \
        | (<uint64_t>p[3]) << 24 | (<uint64_t>p[4]) << 32 | (<uint64_t>p[5]) << 40 \
        | (<uint64_t>p[6]) << 48 | (<uint64_t>p[7]) << 56


cdef void mm3_x64_128(const uint8_t *data, Py_ssize_t length, uint64_t *out) nogil:
    cdef uint64_t h1 = 0, h2 = 0, k1, k2
    cdef Py_ssize_t nblocks = length // 16
    cdef Py_ssize_t i
    cdef const uint8_t *tail

    for i in range(nblocks):
        k1 = load64(data + i * 16)
        k2 = load64(data + i * 16 + 8)

        k1 *= C1
        k1 = rotl64(k1, 31)
        k1 *= C2
        h1 ^= k1
        h1 = rotl64(h1, 27)
        h1 += h2
        h1 = h1 * 5 + 0x52DCE729ULL

        k2 *= C2
        k2 = rotl64(k2, 33)
        k2 *= C1
        h2 ^= k2
        h2 = rotl64(h2, 31)
        h2 += h1
        h2 = h2 * 5 + 0x38495AB5ULL

    tail = data + nblocks * 16
    k1 = 0
    k2 = 0
    cdef int ntail = <int>(length & 15)
    if ntail == 15: k2 ^= (<uint64_t>tail[14]) << 48
    if ntail >= 14: k2 ^= (<uint64_t>tail[13]) << 40
    if ntail >= 13: k2 ^= (<uint64_t>tail[12]) << 32
    if ntail >= 12: k2 ^= (<uint64_t>tail[11]) << 24
    if ntail >= 11: k2 ^= (<uint64_t>tail[10]) << 16
    if ntail >= 10: k2 ^= (<uint64_t>tail[9]) << 8
    if ntail >= 9:
        k2 ^= <uint64_t>tail[8]
        k2 *= C2
        k2 = rotl64(k2, 33)
        k2 *= C1
        h2 ^= k2
    if ntail >= 8: k1 ^= (<uint64_t>tail[7]) << 56
    if ntail >= 7: k1 ^= (<uint64_t>tail[6]) << 48
    if ntail >= 6: k1 ^= (<uint64_t>tail[5]) << 40
    if ntail >= 5: k1 ^= (<uint64_t>tail[4]) << 32
    if ntail >= 4: k1 ^= (<uint64_t>tail[3]) << 24
    if ntail >= 3: k1 ^= (<uint64_t>tail[2]) << 16
    if ntail >= 2: k1 ^= (<uint64_t>tail[1]) << 8
    if ntail >= 1:
        k1 ^= <uint64_t>tail[0]
        k1 *= C1
        k1 = rotl64(k1, 31)
        k1 *= C2
        h1 ^= k1

    h1 ^= <uint64_t>length
    h2 ^= <uint64_t>length
    h1 += h2
    h2 += h1
    h1 = fmix64(h1)
    h2 = fmix64(h2)
    h1 += h2
    h2 += h1
    out[0] = h1
    out[1] = h2


cdef bytes _pack(uint64_t h1, uint64_t h2):
    cdef uint8_t buf[16]
    cdef int i
    for i in range(8):
        buf[i] = <uint8_t>(h1 >> (8 * i))
        buf[8 + i] = <uint8_t>(h2 >> (8 * i))
    return bytes(buf[:16])


def digest128(bytes data):
    """16-byte digest of ``data``."""
    cdef uint64_t out[2]
    mm3_x64_128(<const uint8_t *>PyBytes_AS_STRING(data), PyBytes_GET_SIZE(data), out)
    return _pack(out[0], out[1])


def digest128_many(list texts):
    """Digest a batch of strings (UTF-8 encoded)."""
    cdef list result = []
    cdef bytes encoded
    cdef uint64_t out[2]
    for t in texts:
        encoded = (<str>t).encode("utf-8")
        mm3_x64_128(<const uint8_t *>PyBytes_AS_STRING(encoded), PyBytes_GET_SIZE(encoded), out)
        result.append(_pack(out[0], out[1]))
    return result
