"""Group backends with exact arithmetic and canonical byte keys.

Three backends are provided: Thompson's group F (reduced tree pairs),
free groups F_k (reduced words), and the lattices Z^d (coordinate vectors).
Every element has a canonical byte key, injective on group elements within
a backend, so key equality is group equality and keys can be used directly
as hash-map keys and in on-disk checkpoints.

Key format (version 1, stable): one backend tag byte followed by the payload.

  0x46 'F'  leaf count (u16 BE), then domain-tree and range-tree tokens
            (preorder, 1=caret 0=leaf), packed MSB-first into bytes.
  0x57 'W'  one byte per reduced-word letter: (generator index << 1) | inv.
  0x5A 'Z'  dimension (u8), then each coordinate as a zigzag LEB128 varint.
"""
from __future__ import annotations

import abc
from dataclasses import dataclass

from . import kernel, treepair
from .errors import UsageError

_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class GeneratorLetter:
    """One letter of a word: generator `index`, possibly inverted."""

    index: int
    inverted: bool = False

    def inverse(self) -> "GeneratorLetter":
        return GeneratorLetter(self.index, not self.inverted)


@dataclass(frozen=True)
class Word:
    """A finite (possibly empty) string of generator letters."""

    letters: tuple[GeneratorLetter, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse e.g. "ABa" -- uppercase is a generator, lowercase its inverse."""
        letters = []
        for ch in text:
            if ch in " \t":
                continue
            up = ch.upper()
            if up not in _UPPER:
                raise UsageError(f"cannot parse generator letter {ch!r}")
            letters.append(GeneratorLetter(_UPPER.index(up), ch.islower()))
        return cls(tuple(letters))

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __str__(self) -> str:
        return "".join(
            _UPPER[l.index].lower() if l.inverted else _UPPER[l.index]
            for l in self.letters
        )


@dataclass(frozen=True)
class CanonicalElement:
    """A group element in backend-specific canonical form.

    Only the canonical key is stored; the payload (tree pair, reduced word,
    coordinate vector) is decoded on demand.
    """

    backend: "GroupBackend"
    key: bytes

    @property
    def tag(self) -> int:
        return self.key[0]

    @property
    def payload(self):
        return self.backend.decode_payload(self.key)

    def is_identity(self) -> bool:
        return self.key == self.backend.identity_key()

    def __mul__(self, other: "CanonicalElement") -> "CanonicalElement":
        return self.backend.multiply(self, other)

    def inverse(self) -> "CanonicalElement":
        return self.backend.invert(self)

    def __repr__(self):
        return f"<{self.backend.name} element {self.key.hex()}>"


class GroupBackend(abc.ABC):
    """Exact group arithmetic on canonical byte keys."""

    name: str
    alphabet_size: int
    is_torsion_free: bool = True

    @abc.abstractmethod
    def identity_key(self) -> bytes: ...

    @abc.abstractmethod
    def generator_key(self, letter: GeneratorLetter) -> bytes: ...

    @abc.abstractmethod
    def multiply_keys(self, a: bytes, b: bytes) -> bytes: ...

    @abc.abstractmethod
    def invert_key(self, a: bytes) -> bytes: ...

    @abc.abstractmethod
    def decode_payload(self, key: bytes): ...

    # element-level wrappers

    def identity(self) -> CanonicalElement:
        return CanonicalElement(self, self.identity_key())

    def multiply(self, a: CanonicalElement, b: CanonicalElement) -> CanonicalElement:
        if a.backend is not self or b.backend is not self:
            raise UsageError("elements belong to a different backend")
        return CanonicalElement(self, self.multiply_keys(a.key, b.key))

    def invert(self, a: CanonicalElement) -> CanonicalElement:
        return CanonicalElement(self, self.invert_key(a.key))

    def element_from_word(self, word: Word) -> CanonicalElement:
        key = self.identity_key()
        for letter in word.letters:
            if not 0 <= letter.index < self.alphabet_size:
                raise UsageError(
                    f"letter index {letter.index} out of range for {self.name}"
                )
            g = self.generator_key(letter)
            key = self.multiply_keys(key, g)
        return CanonicalElement(self, key)

    def element_from_key(self, key: bytes) -> CanonicalElement:
        return CanonicalElement(self, key)


# -- Thompson's group F ------------------------------------------------------

@dataclass(frozen=True)
class TreePair:
    """Tree pair (domain, range) as preorder token strings."""

    domain: bytes
    range_: bytes

    def __post_init__(self):
        treepair.validate_tree(self.domain)
        treepair.validate_tree(self.range_)
        if treepair.leaf_count(self.domain) != treepair.leaf_count(self.range_):
            raise treepair.TreePairError("leaf counts differ")

    @property
    def leaves(self) -> int:
        return treepair.leaf_count(self.domain)


def reduce_tree_pair(pair: TreePair) -> TreePair:
    """Fully reduced pair representing the same element; idempotent."""
    d, r = treepair.reduce_pair(pair.domain, pair.range_)
    return TreePair(d, r)


# Generator A maps [0,1/2]->[0,1/4], [1/2,3/4]->[1/4,1/2], [3/4,1]->[1/2,1];
# B is the identity on [0,1/2] and a half-scale copy of A on [1/2,1].
_A_KEY = treepair.pack_key(bytes([1, 0, 1, 0, 0]), bytes([1, 1, 0, 0, 0]))
_B_KEY = treepair.pack_key(
    bytes([1, 0, 1, 0, 1, 0, 0]), bytes([1, 0, 1, 1, 0, 0, 0])
)


class ThompsonF(GroupBackend):
    """Thompson's group F with standard generators A, B.

    Products compose maps with the right factor acting first; under this
    convention both defining relations [AB^-1, A^-1BA] and [AB^-1, A^-2BA^2]
    hold (exercised in the test suite against an interval-map oracle).
    """

    name = "thompson_f"
    alphabet_size = 2

    def identity_key(self) -> bytes:
        return kernel.IDENTITY_KEY

    def generator_key(self, letter: GeneratorLetter) -> bytes:
        key = _A_KEY if letter.index == 0 else _B_KEY
        return kernel.invert_key(key) if letter.inverted else key

    def multiply_keys(self, a: bytes, b: bytes) -> bytes:
        return kernel.compose_keys(a, b)

    def invert_key(self, a: bytes) -> bytes:
        return kernel.invert_key(a)

    def decode_payload(self, key: bytes) -> TreePair:
        d, r = treepair.unpack_key(key)
        return TreePair(d, r)


# -- free groups -------------------------------------------------------------

_FREE_TAG = 0x57


class FreeGroup(GroupBackend):
    """Free group on `rank` generators; canonical form is the reduced word."""

    name = "free"

    def __init__(self, rank: int):
        if not 1 <= rank <= 100:
            raise UsageError("free-group rank must be in 1..100")
        self.rank = rank
        self.alphabet_size = rank
        self.name = f"free_{rank}"

    def identity_key(self) -> bytes:
        return bytes([_FREE_TAG])

    def generator_key(self, letter: GeneratorLetter) -> bytes:
        return bytes([_FREE_TAG, letter.index << 1 | letter.inverted])

    def multiply_keys(self, a: bytes, b: bytes) -> bytes:
        word = bytearray(a[1:])
        for letter in b[1:]:
            if word and word[-1] == letter ^ 1:
                word.pop()
            else:
                word.append(letter)
        return bytes([_FREE_TAG]) + bytes(word)

    def invert_key(self, a: bytes) -> bytes:
        return bytes([_FREE_TAG]) + bytes(letter ^ 1 for letter in reversed(a[1:]))

    def decode_payload(self, key: bytes) -> tuple[GeneratorLetter, ...]:
        return tuple(
            GeneratorLetter(letter >> 1, bool(letter & 1)) for letter in key[1:]
        )


# -- lattices Z^d ------------------------------------------------------------

_LATTICE_TAG = 0x5A


def _zigzag(n: int) -> int:
    return (n << 1) if n >= 0 else ((-n) << 1) - 1


def _unzigzag(z: int) -> int:
    return (z >> 1) if z % 2 == 0 else -((z + 1) >> 1)


def _varint(z: int) -> bytes:
    out = bytearray()
    while True:
        byte = z & 0x7F
        z >>= 7
        if z:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


class Lattice(GroupBackend):
    """The free abelian group Z^d with the standard basis as generators."""

    name = "lattice"

    def __init__(self, dim: int):
        if not 1 <= dim <= 255:
            raise UsageError("lattice dimension must be in 1..255")
        self.dim = dim
        self.alphabet_size = dim
        self.name = f"lattice_{dim}"

    def _encode(self, coords) -> bytes:
        out = bytearray([_LATTICE_TAG, self.dim])
        for c in coords:
            out += _varint(_zigzag(c))
        return bytes(out)

    def decode_payload(self, key: bytes) -> tuple[int, ...]:
        coords = []
        i = 2
        for _ in range(key[1]):
            z = shift = 0
            while True:
                byte = key[i]
                i += 1
                z |= (byte & 0x7F) << shift
                shift += 7
                if not byte & 0x80:
                    break
            coords.append(_unzigzag(z))
        return tuple(coords)

    def identity_key(self) -> bytes:
        return self._encode([0] * self.dim)

    def generator_key(self, letter: GeneratorLetter) -> bytes:
        coords = [0] * self.dim
        coords[letter.index] = -1 if letter.inverted else 1
        return self._encode(coords)

    def multiply_keys(self, a: bytes, b: bytes) -> bytes:
        va, vb = self.decode_payload(a), self.decode_payload(b)
        return self._encode([x + y for x, y in zip(va, vb)])

    def invert_key(self, a: bytes) -> bytes:
        return self._encode([-x for x in self.decode_payload(a)])
