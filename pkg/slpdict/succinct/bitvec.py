"""
Битовые строки с поддержкой access / rank / select.

Каталог rank двухуровневый: абсолютное число единиц перед каждым суперблоком
(RANK_BLOCK_BITS бит) и подсчёт единиц внутри блока через bitarray.count,
который работает побайтно. select ищет блок бинарным поиском по каталогу.

Позиции в API 1-базные: rank(c, i) считает вхождения c в B[1..i].
"""

import struct
from bisect import bisect_left
from collections.abc import Iterable, Iterator

from bitarray import bitarray
from bitarray.util import count_n

from slpdict.config import settings
from slpdict.exceptions import (
    NoSuchOccurrenceError,
    QueryRangeError,
    TruncatedContainerError,
)


BitsLike = str | bytes | bitarray | Iterable[int] | Iterable[bool]

# Разрядность одного счётчика каталога при подсчёте размера
DIRECTORY_WORD_BITS = 64

_LENGTH = struct.Struct("<Q")


def _to_bitarray(bits: BitsLike) -> bitarray:
    if isinstance(bits, bitarray):
        return bitarray(bits)
    if isinstance(bits, str):
        return bitarray(bits)
    return bitarray([1 if b else 0 for b in bits])


class BitVector:
    """Неизменяемая битовая строка с каталогом rank."""

    __slots__ = ("_bits", "_block", "_superblocks", "_ones")

    def __init__(self, bits: BitsLike = "", block_bits: int | None = None):
        self._bits = _to_bitarray(bits)
        self._block = block_bits or settings.RANK_BLOCK_BITS
        self._superblocks: list[int] = []
        self._ones = 0
        self._build_directory()

    def _build_directory(self) -> None:
        bits, block = self._bits, self._block
        superblocks = self._superblocks
        ones = 0
        for start in range(0, len(bits), block):
            superblocks.append(ones)
            ones += bits.count(1, start, start + block)
        self._ones = ones

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._bits == other._bits

    def __repr__(self) -> str:
        preview = self._bits[:64].to01()
        suffix = "..." if len(self._bits) > 64 else ""
        return f"{self.__class__.__name__}({preview}{suffix}, length={len(self)})"

    @property
    def bits(self) -> bitarray:
        return self._bits

    @property
    def ones(self) -> int:
        return self._ones

    @property
    def zeros(self) -> int:
        return len(self._bits) - self._ones

    def count(self, c: int) -> int:
        return self._ones if c else len(self._bits) - self._ones

    def to01(self) -> str:
        return self._bits.to01()

    def unary_values(self) -> list[int]:
        """Число нулей перед каждой единицей: значения из 0^{v1} 1 0^{v2-v1} 1 ..."""
        return [pos - j for j, pos in enumerate(self._bits.search(1))]

    def access(self, i: int) -> int:
        if not 1 <= i <= len(self._bits):
            raise QueryRangeError(f"access: позиция {i} вне [1, {len(self._bits)}]")
        return self._bits[i - 1]

    def rank1(self, i: int) -> int:
        m = len(self._bits)
        if not 0 <= i <= m:
            raise QueryRangeError(f"rank: позиция {i} вне [0, {m}]")
        if i == m:
            return self._ones
        b = i // self._block
        return self._superblocks[b] + self._bits.count(1, b * self._block, i)

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, c: int, i: int) -> int:
        return self.rank1(i) if c else self.rank0(i)

    def select(self, c: int, j: int) -> int:
        """Позиция j-го вхождения бита c (1-базная)."""
        c = 1 if c else 0
        total = self.count(c)
        if not 1 <= j <= total:
            raise NoSuchOccurrenceError(
                f"select_{c}: вхождение {j} вне [1, {total}]"
            )
        block = self._block
        superblocks = self._superblocks
        if c:
            b = bisect_left(superblocks, j) - 1
            before = superblocks[b]
        else:
            b = (
                bisect_left(
                    range(len(superblocks)),
                    j,
                    key=lambda k: k * block - superblocks[k],
                )
                - 1
            )
            before = b * block - superblocks[b]
        start = b * block
        chunk = self._bits[start : start + block]
        return start + count_n(chunk, j - before, c)

    def select1(self, j: int) -> int:
        return self.select(1, j)

    def select0(self, j: int) -> int:
        return self.select(0, j)

    def size_in_bits(self) -> int:
        return len(self._bits)

    def directory_bits(self) -> int:
        # Счётчик первого суперблока всегда 0
        return max(len(self._superblocks) - 1, 0) * DIRECTORY_WORD_BITS

    def dump(self) -> bytes:
        """Длина (8 байт little-endian) и упакованные биты."""
        return _LENGTH.pack(len(self._bits)) + self._bits.tobytes()

    @classmethod
    def load(
        cls, buffer: bytes, offset: int = 0, block_bits: int | None = None
    ) -> tuple["BitVector", int]:
        """
        Восстановление из dump(); каталог строится заново.

        Returns:
            Вектор и смещение сразу после прочитанных данных
        """
        if len(buffer) - offset < _LENGTH.size:
            raise TruncatedContainerError("Недостаточно данных для длины битовой строки")
        (length,) = _LENGTH.unpack_from(buffer, offset)
        offset += _LENGTH.size
        nbytes = (length + 7) // 8
        if len(buffer) - offset < nbytes:
            raise TruncatedContainerError("Недостаточно данных для битовой строки")
        bits = bitarray()
        bits.frombytes(bytes(buffer[offset : offset + nbytes]))
        del bits[length:]
        return cls(bits, block_bits=block_bits), offset + nbytes


def build_bitvector(bits: BitsLike, block_bits: int | None = None) -> BitVector:
    return BitVector(bits, block_bits=block_bits)


class AppendableBitVector(BitVector):
    """
    BitVector с добавлением в конец.

    Каталог растёт вместе со строкой: новая запись суперблока появляется,
    когда длина пересекает границу блока, поэтому ответы на префиксе не
    меняются после последующих push.
    """

    __slots__ = ()

    def push(self, b: int) -> None:
        bits = self._bits
        if len(bits) % self._block == 0:
            self._superblocks.append(self._ones)
        bits.append(1 if b else 0)
        if b:
            self._ones += 1

    def extend(self, bits: BitsLike) -> None:
        """Пачка бит; записи каталога появляются на тех же границах, что и при push."""
        target = self._bits
        block = self._block
        position = len(target)
        ones = self._ones
        target.extend(_to_bitarray(bits))
        boundary = -(-position // block) * block
        for start in range(boundary, len(target), block):
            ones += target.count(1, position, start)
            self._superblocks.append(ones)
            position = start
        self._ones = ones + target.count(1, position, len(target))

    def freeze(self) -> BitVector:
        return BitVector(self._bits, block_bits=self._block)
