"""Reduced tree-pair arithmetic for Thompson's group F (pure-Python kernel).

An element of F is stored as a pair of finite rooted binary trees with the
same number of leaves: the domain tree cuts [0,1] into dyadic intervals, the
range tree does the same, and the element is the PL homeomorphism carrying
the i-th domain interval affinely onto the i-th range interval.  A tree is a
token string in preorder, one byte per node: 1 = caret (internal node),
0 = leaf.  A tree with L leaves has 2L-1 tokens.

A pair is *reduced* when no index i exists such that leaves i, i+1 are
siblings in both trees at once; reduced pairs are in bijection with group
elements, which makes the packed byte key (see pack_key) a canonical form.

Multiplication convention: compose(a, b) is the element whose underlying map
is x -> a(b(x)), i.e. the right factor acts first.  Under this convention
A = x0 and B = x1 (the standard generators) satisfy the two defining
relations of F; see tests/test_groups.py.

This module is the reference implementation.  tgf._treepair is a Cython
twin with identical semantics, selected at import by tgf.kernel.
"""
from __future__ import annotations

import struct

LEAF = 0
CARET = 1

KEY_TAG = 0x46  # ASCII 'F'

IDENTITY_TREE = bytes([LEAF])


class TreePairError(ValueError):
    """Structurally invalid tree pair (bad tokens or mismatched leaf counts)."""


def leaf_count(tree: bytes) -> int:
    return (len(tree) + 1) // 2


def validate_tree(tree: bytes) -> None:
    """Check that `tree` is a complete preorder token string."""
    need = 1
    for i, tok in enumerate(tree):
        if need == 0:
            raise TreePairError("trailing tokens after complete tree")
        if tok == CARET:
            need += 1
        elif tok == LEAF:
            need -= 1
        else:
            raise TreePairError(f"bad token {tok} at {i}")
    if need != 0:
        raise TreePairError("truncated tree")


def subtree_end(tree: bytes, i: int) -> int:
    """Index one past the subtree whose root is at token index i."""
    need = 1
    while need:
        if tree[i] == CARET:
            need += 1
        else:
            need -= 1
        i += 1
    return i


def _leaf_expansions(t1: bytes, t2: bytes) -> tuple[list[bytes], list[bytes]]:
    """Common-refinement bookkeeping for two trees.

    Walks t1 and t2 in lockstep as subdivisions of the same interval and
    returns, for each leaf of t1 (resp. t2), the subtree of the common
    refinement hanging below it.  A leaf that survives unchanged gets the
    single-leaf tree.
    """
    ext1: list[bytes] = []
    ext2: list[bytes] = []
    leaf = IDENTITY_TREE

    def walk(i1: int, i2: int) -> tuple[int, int]:
        tok1, tok2 = t1[i1], t2[i2]
        if tok1 == LEAF and tok2 == LEAF:
            ext1.append(leaf)
            ext2.append(leaf)
            return i1 + 1, i2 + 1
        if tok1 == LEAF:
            j2 = subtree_end(t2, i2)
            sub = t2[i2:j2]
            ext1.append(sub)
            ext2.extend([leaf] * leaf_count(sub))
            return i1 + 1, j2
        if tok2 == LEAF:
            j1 = subtree_end(t1, i1)
            sub = t1[i1:j1]
            ext1.extend([leaf] * leaf_count(sub))
            ext2.append(sub)
            return j1, i2 + 1
        i1, i2 = walk(i1 + 1, i2 + 1)
        return walk(i1, i2)

    walk(0, 0)
    return ext1, ext2


def _attach(tree: bytes, exts: list[bytes]) -> bytes:
    """Replace leaf i of `tree` by the subtree exts[i]."""
    out = bytearray()
    li = 0
    for tok in tree:
        if tok == CARET:
            out.append(CARET)
        else:
            out += exts[li]
            li += 1
    return bytes(out)


def _sibling_leaf_pairs(tree: bytes) -> set[int]:
    """Indices i such that leaves i and i+1 are children of one caret."""
    pairs = set()
    li = 0
    for p in range(len(tree)):
        if tree[p] == LEAF:
            li += 1
        elif p + 2 < len(tree) and tree[p + 1] == LEAF and tree[p + 2] == LEAF:
            pairs.add(li)
    return pairs


def _remove_carets(tree: bytes, chosen: set[int]) -> bytes:
    out = bytearray()
    li = 0
    p = 0
    n = len(tree)
    while p < n:
        tok = tree[p]
        if (
            tok == CARET
            and p + 2 < n
            and tree[p + 1] == LEAF
            and tree[p + 2] == LEAF
            and li in chosen
        ):
            out.append(LEAF)
            li += 2
            p += 3
        else:
            out.append(tok)
            if tok == LEAF:
                li += 1
            p += 1
    return bytes(out)


def reduce_pair(domain: bytes, range_: bytes) -> tuple[bytes, bytes]:
    """Cancel carets common to both trees until the pair is reduced."""
    if leaf_count(domain) != leaf_count(range_):
        raise TreePairError("leaf counts differ")
    while True:
        common = sorted(_sibling_leaf_pairs(domain) & _sibling_leaf_pairs(range_))
        if not common:
            return domain, range_
        chosen = set()
        last = -2
        for i in common:
            if i > last + 1:
                chosen.add(i)
                last = i
        domain = _remove_carets(domain, chosen)
        range_ = _remove_carets(range_, chosen)


def compose_trees(
    da: bytes, ra: bytes, db: bytes, rb: bytes
) -> tuple[bytes, bytes]:
    """Reduced tree pair of a*b where b acts first; inputs need not be reduced."""
    ext_rb, ext_da = _leaf_expansions(rb, da)
    domain = _attach(db, ext_rb)
    range_ = _attach(ra, ext_da)
    return reduce_pair(domain, range_)


# -- canonical byte keys ----------------------------------------------------
#
# key = 0x46, leaf count L (u16 big endian), then the 2*(2L-1) tokens of the
# domain tree followed by the range tree, packed MSB-first into bytes.

def pack_key(domain: bytes, range_: bytes) -> bytes:
    nl = leaf_count(domain)
    if nl > 0xFFFF:
        raise TreePairError("tree too large for key format")
    bits = domain + range_
    packed = bytearray(struct.pack(">BH", KEY_TAG, nl))
    acc = 0
    fill = 0
    for tok in bits:
        acc = (acc << 1) | tok
        fill += 1
        if fill == 8:
            packed.append(acc)
            acc = fill = 0
    if fill:
        packed.append(acc << (8 - fill))
    return bytes(packed)


def unpack_key(key: bytes) -> tuple[bytes, bytes]:
    if len(key) < 3 or key[0] != KEY_TAG:
        raise TreePairError("not a tree-pair key")
    nl = struct.unpack(">H", key[1:3])[0]
    ntok = 2 * nl - 1
    bits = bytearray()
    for byte in key[3:]:
        for shift in range(7, -1, -1):
            bits.append((byte >> shift) & 1)
    if len(bits) < 2 * ntok:
        raise TreePairError("truncated key")
    return bytes(bits[:ntok]), bytes(bits[ntok : 2 * ntok])


IDENTITY_KEY = pack_key(IDENTITY_TREE, IDENTITY_TREE)


def compose_keys(a: bytes, b: bytes) -> bytes:
    """Canonical key of the product a*b (right factor acts first)."""
    if a == IDENTITY_KEY:
        return b
    if b == IDENTITY_KEY:
        return a
    da, ra = unpack_key(a)
    db, rb = unpack_key(b)
    return pack_key(*compose_trees(da, ra, db, rb))


def invert_key(a: bytes) -> bytes:
    da, ra = unpack_key(a)
    return pack_key(ra, da)
