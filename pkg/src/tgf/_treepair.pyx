# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of tgf.treepair: composition of reduced tree pairs on
packed canonical keys.  Semantics match the pure module exactly; the test
suite cross-checks the two implementations on random words."""

from cpython.bytes cimport PyBytes_FromStringAndSize, PyBytes_AS_STRING, PyBytes_GET_SIZE
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

IMPLEMENTATION = "c"

cdef int CARET = 1
cdef int LEAF = 0

IDENTITY_KEY = b"\x46\x00\x01\x00"


cdef inline int _skip(unsigned char* t, int i) nogil:
    cdef int need = 1
    while need:
        if t[i] == CARET:
            need += 1
        else:
            need -= 1
        i += 1
    return i


cdef int _unpack(const unsigned char* key, Py_ssize_t keylen,
                 unsigned char** dom, unsigned char** rng) nogil:
    """Decode a packed key into two freshly malloc'd token arrays.
    Returns the token count per tree, or -1 on structural error."""
    cdef int nl, ntok, total, byte_idx, bit_idx, k
    if keylen < 3 or key[0] != 0x46:
        return -1
    nl = (key[1] << 8) | key[2]
    if nl < 1:
        return -1
    ntok = 2 * nl - 1
    total = 2 * ntok
    if keylen < 3 + (total + 7) // 8:
        return -1
    dom[0] = <unsigned char*> malloc(ntok)
    rng[0] = <unsigned char*> malloc(ntok)
    if dom[0] == NULL or rng[0] == NULL:
        return -1
    for k in range(total):
        byte_idx = 3 + (k >> 3)
        bit_idx = 7 - (k & 7)
        if k < ntok:
            dom[0][k] = (key[byte_idx] >> bit_idx) & 1
        else:
            rng[0][k - ntok] = (key[byte_idx] >> bit_idx) & 1
    return ntok


cdef bytes _pack(unsigned char* dom, unsigned char* rng, int ntok):
    cdef int nl = (ntok + 1) // 2
    cdef int total = 2 * ntok
    cdef int nbytes = 3 + (total + 7) // 8
    cdef bytes out = PyBytes_FromStringAndSize(NULL, nbytes)
    cdef unsigned char* buf = <unsigned char*> PyBytes_AS_STRING(out)
    cdef int k, byte_idx, bit_idx
    buf[0] = 0x46
    buf[1] = (nl >> 8) & 0xFF
    buf[2] = nl & 0xFF
    for k in range(3, nbytes):
        buf[k] = 0
    for k in range(total):
        byte_idx = 3 + (k >> 3)
        bit_idx = 7 - (k & 7)
        if k < ntok:
            if dom[k]:
                buf[byte_idx] |= 1 << bit_idx
        else:
            if rng[k - ntok]:
                buf[byte_idx] |= 1 << bit_idx
    return out


cdef int _reduce(unsigned char* dom, unsigned char* rng, int ntok) nogil:
    """Cancel common carets in place; returns the new token count."""
    cdef int nl = (ntok + 1) // 2
    cdef unsigned char* sib_d = <unsigned char*> malloc(nl)
    cdef unsigned char* sib_r = <unsigned char*> malloc(nl)
    cdef unsigned char* chosen = <unsigned char*> malloc(nl)
    cdef int p, li, i, changed, out_p, out_li, last
    if sib_d == NULL or sib_r == NULL or chosen == NULL:
        free(sib_d); free(sib_r); free(chosen)
        return -1
    while True:
        for i in range(nl):
            sib_d[i] = 0
            sib_r[i] = 0
        li = 0
        for p in range(ntok):
            if dom[p] == LEAF:
                li += 1
            elif p + 2 < ntok and dom[p + 1] == LEAF and dom[p + 2] == LEAF:
                sib_d[li] = 1
        li = 0
        for p in range(ntok):
            if rng[p] == LEAF:
                li += 1
            elif p + 2 < ntok and rng[p + 1] == LEAF and rng[p + 2] == LEAF:
                sib_r[li] = 1
        changed = 0
        last = -2
        for i in range(nl):
            if sib_d[i] and sib_r[i] and i > last + 1:
                chosen[i] = 1
                last = i
                changed = 1
            else:
                chosen[i] = 0
        if not changed:
            break
        # rewrite both trees, merging each chosen leaf pair
        out_p = 0
        out_li = 0
        p = 0
        while p < ntok:
            if (dom[p] == CARET and p + 2 < ntok and dom[p + 1] == LEAF
                    and dom[p + 2] == LEAF and chosen[out_li]):
                dom[out_p] = LEAF
                out_p += 1
                out_li += 2
                p += 3
            else:
                dom[out_p] = dom[p]
                if dom[p] == LEAF:
                    out_li += 1
                out_p += 1
                p += 1
        out_p = 0
        out_li = 0
        p = 0
        while p < ntok:
            if (rng[p] == CARET and p + 2 < ntok and rng[p + 1] == LEAF
                    and rng[p + 2] == LEAF and chosen[out_li]):
                rng[out_p] = LEAF
                out_p += 1
                out_li += 2
                p += 3
            else:
                rng[out_p] = rng[p]
                if rng[p] == LEAF:
                    out_li += 1
                out_p += 1
                p += 1
        ntok = out_p
        nl = (ntok + 1) // 2
    free(sib_d); free(sib_r); free(chosen)
    return ntok


def compose_keys(bytes a, bytes b):
    """Canonical key of the product a*b (right factor acts first)."""
    if a == IDENTITY_KEY:
        return b
    if b == IDENTITY_KEY:
        return a

    cdef unsigned char* da = NULL
    cdef unsigned char* ra = NULL
    cdef unsigned char* db = NULL
    cdef unsigned char* rb = NULL
    cdef int ntok_a = _unpack(<const unsigned char*> PyBytes_AS_STRING(a),
                              PyBytes_GET_SIZE(a), &da, &ra)
    cdef int ntok_b = _unpack(<const unsigned char*> PyBytes_AS_STRING(b),
                              PyBytes_GET_SIZE(b), &db, &rb)
    if ntok_a < 0 or ntok_b < 0:
        free(da); free(ra); free(db); free(rb)
        raise ValueError("not a tree-pair key")

    cdef int nl_a = (ntok_a + 1) // 2
    cdef int nl_b = (ntok_b + 1) // 2
    # expansion slices: for each leaf of rb, a slice of da (offset,len) or a
    # plain leaf (offset -1); symmetrically for da's leaves into rb
    cdef int* erb_off = <int*> malloc(nl_b * sizeof(int))
    cdef int* erb_len = <int*> malloc(nl_b * sizeof(int))
    cdef int* eda_off = <int*> malloc(nl_a * sizeof(int))
    cdef int* eda_len = <int*> malloc(nl_a * sizeof(int))
    cdef int cap = 2 * (nl_a + nl_b)
    cdef unsigned char* out_d = <unsigned char*> malloc(cap)
    cdef unsigned char* out_r = <unsigned char*> malloc(cap)
    cdef bytes result
    if (erb_off == NULL or erb_len == NULL or eda_off == NULL
            or eda_len == NULL or out_d == NULL or out_r == NULL):
        free(da); free(ra); free(db); free(rb)
        free(erb_off); free(erb_len); free(eda_off); free(eda_len)
        free(out_d); free(out_r)
        raise MemoryError()

    cdef int i1 = 0, i2 = 0, n1 = 0, n2 = 0, j, k, cnt
    # lockstep preorder walk of rb and da as subdivisions of one interval
    while i1 < ntok_b:
        if rb[i1] == CARET and da[i2] == CARET:
            i1 += 1
            i2 += 1
        elif rb[i1] == LEAF and da[i2] == LEAF:
            erb_off[n1] = -1; erb_len[n1] = 1; n1 += 1
            eda_off[n2] = -1; eda_len[n2] = 1; n2 += 1
            i1 += 1
            i2 += 1
        elif rb[i1] == LEAF:
            j = _skip(da, i2)
            erb_off[n1] = i2; erb_len[n1] = j - i2; n1 += 1
            cnt = (j - i2 + 1) // 2
            for k in range(cnt):
                eda_off[n2] = -1; eda_len[n2] = 1; n2 += 1
            i1 += 1
            i2 = j
        else:
            j = _skip(rb, i1)
            eda_off[n2] = i1; eda_len[n2] = j - i1; n2 += 1
            cnt = (j - i1 + 1) // 2
            for k in range(cnt):
                erb_off[n1] = -1; erb_len[n1] = 1; n1 += 1
            i1 = j
            i2 += 1

    # attach: expand db by erb (domain side), ra by eda (range side)
    cdef int out_n = 0, li = 0
    for j in range(ntok_b):
        if db[j] == CARET:
            out_d[out_n] = CARET
            out_n += 1
        else:
            if erb_off[li] < 0:
                out_d[out_n] = LEAF
                out_n += 1
            else:
                memcpy(out_d + out_n, da + erb_off[li], erb_len[li])
                out_n += erb_len[li]
            li += 1
    cdef int out_n2 = 0
    li = 0
    for j in range(ntok_a):
        if ra[j] == CARET:
            out_r[out_n2] = CARET
            out_n2 += 1
        else:
            if eda_off[li] < 0:
                out_r[out_n2] = LEAF
                out_n2 += 1
            else:
                memcpy(out_r + out_n2, rb + eda_off[li], eda_len[li])
                out_n2 += eda_len[li]
            li += 1
    # out_n == out_n2 by construction

    cdef int reduced = _reduce(out_d, out_r, out_n)
    free(da); free(ra); free(db); free(rb)
    free(erb_off); free(erb_len); free(eda_off); free(eda_len)
    if reduced < 0:
        free(out_d); free(out_r)
        raise MemoryError()
    result = _pack(out_d, out_r, reduced)
    free(out_d); free(out_r)
    return result


def invert_key(bytes a):
    cdef unsigned char* da = NULL
    cdef unsigned char* ra = NULL
    cdef int ntok = _unpack(<const unsigned char*> PyBytes_AS_STRING(a),
                            PyBytes_GET_SIZE(a), &da, &ra)
    if ntok < 0:
        free(da); free(ra)
        raise ValueError("not a tree-pair key")
    cdef bytes result = _pack(ra, da, ntok)
    free(da); free(ra)
    return result
