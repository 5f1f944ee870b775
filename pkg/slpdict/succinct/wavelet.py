"""
Статическое вейвлет-дерево над последовательностью в алфавите [1, sigma].

Форма сбалансированная: узел с диапазоном [a, b] делится в точке
(a + b) // 2, бит 1 означает переход в правую половину. Узлы лежат в
словаре по номеру в порядке обхода в ширину, дети узла i имеют номера
2i + 1 и 2i + 2. Листья (a == b) и узлы без элементов не хранятся, поэтому
дерево над большим алфавитом занимает память только на занятых путях.
"""

import struct
from collections import deque
from collections.abc import Iterator, Sequence

from bitarray import bitarray
from loguru import logger

from slpdict.exceptions import (
    AlphabetRangeError,
    LengthMismatchError,
    NoSuchOccurrenceError,
    QueryRangeError,
    TruncatedContainerError,
)
from slpdict.succinct.bitvec import BitVector


_HEADER = struct.Struct("<QQQ")


def tree_height(sigma: int) -> int:
    """Высота сбалансированного дерева над [1, sigma]: ceil(log2 sigma)."""
    return (sigma - 1).bit_length()


class WaveletTree:
    __slots__ = ("_sigma", "_length", "_nodes", "_height")

    def __init__(
        self,
        sigma: int,
        length: int,
        nodes: dict[int, BitVector],
    ):
        self._sigma = sigma
        self._length = length
        self._nodes = nodes
        self._height = tree_height(sigma)

    @classmethod
    def build(cls, seq: Sequence[int], sigma: int) -> "WaveletTree":
        if sigma < 1:
            raise AlphabetRangeError(f"Размер алфавита должен быть >= 1, получено {sigma}")
        for value in seq:
            if not 1 <= value <= sigma:
                raise AlphabetRangeError(f"Символ {value} вне [1, {sigma}]")

        height = tree_height(sigma)
        nodes: dict[int, BitVector] = {}
        stack: list[tuple[int, int, int, Sequence[int]]] = [(0, 1, sigma, seq)]
        while stack:
            index, a, b, values = stack.pop()
            if a == b or not values:
                continue
            mid = (a + b) // 2
            nodes[index] = BitVector([v > mid for v in values])
            stack.append((2 * index + 1, a, mid, [v for v in values if v <= mid]))
            stack.append((2 * index + 2, mid + 1, b, [v for v in values if v > mid]))

        logger.debug(f"Вейвлет-дерево: n={len(seq)}, sigma={sigma}, высота={height}")
        return cls(sigma, len(seq), nodes)

    def __len__(self) -> int:
        return self._length

    def __iter__(self) -> Iterator[int]:
        return iter(self.values())

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(sigma={self._sigma}, length={self._length})"

    @property
    def sigma(self) -> int:
        return self._sigma

    @property
    def height(self) -> int:
        return self._height

    def root_bits(self) -> BitVector | None:
        return self._nodes.get(0)

    def values(self) -> list[int]:
        """
        Вся последовательность за один проход: последовательности детей
        сливаются по битам узла снизу вверх.
        """
        return self._merge(0, 1, self._sigma, self._length)

    def _merge(self, index: int, a: int, b: int, size: int) -> list[int]:
        if a == b:
            return [a] * size
        if not size:
            return []
        node = self._nodes[index]
        mid = (a + b) // 2
        low = iter(self._merge(2 * index + 1, a, mid, node.zeros))
        high = iter(self._merge(2 * index + 2, mid + 1, b, node.ones))
        return [next(high) if bit else next(low) for bit in node.bits]

    def _check_symbol(self, c: int) -> None:
        if not 1 <= c <= self._sigma:
            raise QueryRangeError(f"Символ {c} вне [1, {self._sigma}]")

    def access(self, i: int) -> int:
        if not 1 <= i <= self._length:
            raise QueryRangeError(f"access: позиция {i} вне [1, {self._length}]")
        nodes = self._nodes
        index, a, b = 0, 1, self._sigma
        while a < b:
            node = nodes[index]
            mid = (a + b) // 2
            if node.access(i):
                i = node.rank1(i)
                index, a = 2 * index + 2, mid + 1
            else:
                i = node.rank0(i)
                index, b = 2 * index + 1, mid
        return a

    def rank(self, c: int, i: int) -> int:
        self._check_symbol(c)
        if not 0 <= i <= self._length:
            raise QueryRangeError(f"rank: позиция {i} вне [0, {self._length}]")
        nodes = self._nodes
        index, a, b = 0, 1, self._sigma
        while a < b and i:
            node = nodes[index]
            mid = (a + b) // 2
            if c > mid:
                i = node.rank1(i)
                index, a = 2 * index + 2, mid + 1
            else:
                i = node.rank0(i)
                index, b = 2 * index + 1, mid
        return i

    def select(self, c: int, j: int) -> int:
        self._check_symbol(c)
        total = self.rank(c, self._length)
        if not 1 <= j <= total:
            raise NoSuchOccurrenceError(f"select_{c}: вхождение {j} вне [1, {total}]")
        path: list[tuple[int, int]] = []
        index, a, b = 0, 1, self._sigma
        while a < b:
            mid = (a + b) // 2
            if c > mid:
                path.append((index, 1))
                index, a = 2 * index + 2, mid + 1
            else:
                path.append((index, 0))
                index, b = 2 * index + 1, mid
        for index, bit in reversed(path):
            j = self._nodes[index].select(bit, j)
        return j

    def size_in_bits(self) -> int:
        return sum(len(node) for node in self._nodes.values())

    def directory_bits(self) -> int:
        return sum(node.directory_bits() for node in self._nodes.values())

    def node_bits(self) -> bitarray:
        """Биты всех узлов подряд в порядке обхода в ширину."""
        payload = bitarray()
        for index in sorted(self._nodes):
            payload.extend(self._nodes[index].bits)
        return payload

    @classmethod
    def from_node_bits(cls, sigma: int, length: int, payload: bitarray) -> "WaveletTree":
        """
        Обратная операция к node_bits: размеры узлов восстанавливаются
        по числу нулей и единиц родителя.

        Raises:
            LengthMismatchError: битов меньше или больше, чем требует форма дерева
        """
        if sigma < 1:
            raise LengthMismatchError(f"Размер алфавита {sigma} в данных вейвлет-дерева")
        total = len(payload)
        nodes: dict[int, BitVector] = {}
        cursor = 0
        queue: deque[tuple[int, int, int, int]] = deque([(0, 1, sigma, length)])
        while queue:
            index, a, b, size = queue.popleft()
            if a == b or not size:
                continue
            if cursor + size > total:
                raise LengthMismatchError("Биты узлов вейвлет-дерева обрезаны")
            node = BitVector(payload[cursor : cursor + size])
            cursor += size
            nodes[index] = node
            mid = (a + b) // 2
            queue.append((2 * index + 1, a, mid, node.zeros))
            queue.append((2 * index + 2, mid + 1, b, node.ones))
        if cursor != total:
            raise LengthMismatchError("Лишние биты в узлах вейвлет-дерева")
        return cls(sigma, length, nodes)

    def dump(self) -> bytes:
        """sigma, n, число бит узлов (по 8 байт) и сами биты."""
        payload = self.node_bits()
        return _HEADER.pack(self._sigma, self._length, len(payload)) + payload.tobytes()

    @classmethod
    def load(cls, buffer: bytes, offset: int = 0) -> tuple["WaveletTree", int]:
        if len(buffer) - offset < _HEADER.size:
            raise TruncatedContainerError("Недостаточно данных для заголовка вейвлет-дерева")
        sigma, length, total = _HEADER.unpack_from(buffer, offset)
        offset += _HEADER.size
        nbytes = (total + 7) // 8
        if len(buffer) - offset < nbytes:
            raise TruncatedContainerError("Недостаточно данных для узлов вейвлет-дерева")
        payload = bitarray()
        payload.frombytes(bytes(buffer[offset : offset + nbytes]))
        del payload[total:]
        return cls.from_node_bits(sigma, length, payload), offset + nbytes


def build_wt(seq: Sequence[int], sigma: int) -> WaveletTree:
    return WaveletTree.build(seq, sigma)
