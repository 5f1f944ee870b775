"""
Обратный словарь: диграмма -> переменная.

Последовательность S кодов диграмм хранится динамическим вейвлет-деревом
над [1, N^2]: правило с номером sigma + t имеет код S[t]. Узел создаётся,
когда через него проходит второй код; поддерево с единственным кодом
хранит сам код (хвост), а его биты по уровням подразумеваются. Поиск -
спуск по rank до листа или хвоста и подъём по select от первого вхождения;
вставка - по одному push в каждый узел пути, хвост при этом разбирается
до места расхождения двух кодов.
"""

from collections.abc import Sequence

from loguru import logger

from slpdict.config import settings
from slpdict.exceptions import (
    CapacityExceededError,
    DuplicateDigramError,
    QueryRangeError,
)
from slpdict.grammar.slp import Rule
from slpdict.succinct.bitvec import AppendableBitVector
from slpdict.succinct.wavelet import WaveletTree, tree_height


def digram_code(x: int, y: int, capacity: int) -> int:
    """Лексикографический номер диграммы xy в [1, N^2]."""
    if not (1 <= x <= capacity and 1 <= y <= capacity):
        raise CapacityExceededError(
            f"Диграмма ({x}, {y}) вне ёмкости N={capacity}"
        )
    return (x - 1) * capacity + y


def decode_digram(code: int, capacity: int) -> Rule:
    return (code - 1) // capacity + 1, (code - 1) % capacity + 1


class NamingIndex:
    __slots__ = (
        "sigma",
        "capacity",
        "growable",
        "last_visits",
        "max_visits",
        "_length",
        "_nodes",
        "_tails",
        "_block",
    )

    def __init__(
        self,
        sigma: int,
        capacity: int | None = None,
        growable: bool = True,
        block_bits: int | None = None,
    ):
        if sigma < 1:
            raise QueryRangeError("Нужен хотя бы один терминал")
        self.sigma = sigma
        self.capacity = capacity or settings.NAMING_INITIAL_CAPACITY or 2 * sigma
        self.growable = growable
        self.last_visits = 0
        self.max_visits = 0
        self._length = 0
        self._nodes: dict[int, AppendableBitVector] = {}
        # Поддерево ровно с одним кодом: путь ниже хранится самим кодом
        self._tails: dict[int, int] = {}
        self._block = block_bits

    def __len__(self) -> int:
        return self._length

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(sigma={self.sigma}, "
            f"capacity={self.capacity}, length={self._length})"
        )

    @property
    def symbol_count(self) -> int:
        return self.sigma + self._length

    @property
    def height(self) -> int:
        return tree_height(self.capacity * self.capacity)

    def _check_symbols(self, x: int, y: int) -> None:
        top = self.symbol_count
        if not (1 <= x <= top and 1 <= y <= top):
            raise QueryRangeError(f"Диграмма ({x}, {y}) ссылается вне [1, {top}]")

    def _record(self, visits: int) -> None:
        self.last_visits = visits
        if visits > self.max_visits:
            self.max_visits = visits

    def _new_node(self) -> AppendableBitVector:
        return AppendableBitVector(block_bits=self._block)

    def _find(self, code: int) -> int | None:
        """Позиция t кода в S или None."""
        nodes, tails = self._nodes, self._tails
        i = self._length
        path: list[tuple[int, int]] = []
        index, a, b = 0, 1, self.capacity * self.capacity
        found = i > 0
        visits = 0
        while found and a < b:
            tail = tails.get(index)
            if tail is not None:
                visits += 1
                found = tail == code
                break
            node = nodes.get(index)
            if node is None:
                found = False
                break
            mid = (a + b) // 2
            bit = 1 if code > mid else 0
            path.append((index, bit))
            visits += 1
            i = node.rank(bit, i)
            if not i:
                found = False
                break
            if bit:
                index, a = 2 * index + 2, mid + 1
            else:
                index, b = 2 * index + 1, mid
        self._record(visits)
        if not found:
            return None

        j = 1
        for index, bit in reversed(path):
            j = nodes[index].select(bit, j)
        return j

    def _append(self, code: int) -> int:
        nodes, tails = self._nodes, self._tails
        index, a, b = 0, 1, self.capacity * self.capacity
        visits = 0
        # Код из разбираемого хвоста: в S он раньше code
        pending: int | None = None
        while a < b:
            if pending is None and index not in nodes:
                pending = tails.pop(index, None)
                if pending is None:
                    tails[index] = code
                    visits += 1
                    break
            node = nodes.get(index)
            if node is None:
                node = nodes[index] = self._new_node()
            mid = (a + b) // 2
            bit = 1 if code > mid else 0
            if pending is not None:
                pending_bit = 1 if pending > mid else 0
                node.push(pending_bit)
                if pending_bit != bit:
                    if pending_bit and mid + 1 < b:
                        tails[2 * index + 2] = pending
                    elif not pending_bit and a < mid:
                        tails[2 * index + 1] = pending
                    pending = None
            node.push(bit)
            visits += 1
            if bit:
                index, a = 2 * index + 2, mid + 1
            else:
                index, b = 2 * index + 1, mid
        self._record(visits)
        self._length += 1
        return self.sigma + self._length

    def _extend(self, codes: list[int]) -> None:
        """Дописывание пачки новых кодов: по одному extend на узел."""
        nodes, tails = self._nodes, self._tails
        deepest = 0
        stack: list[tuple[int, int, int, list[int]]] = [
            (0, 1, self.capacity * self.capacity, codes)
        ]
        while stack:
            index, a, b, values = stack.pop()
            if a == b or not values:
                continue
            deepest = max(deepest, (index + 1).bit_length())
            node = nodes.get(index)
            if node is None:
                tail = tails.pop(index, None)
                if tail is not None:
                    values = [tail, *values]
                elif len(values) == 1:
                    tails[index] = values[0]
                    continue
                node = nodes[index] = self._new_node()
            mid = (a + b) // 2
            node.extend([v > mid for v in values])
            stack.append((2 * index + 1, a, mid, [v for v in values if v <= mid]))
            stack.append((2 * index + 2, mid + 1, b, [v for v in values if v > mid]))
        self._length += len(codes)
        self._record(deepest)

    def _ensure_capacity(self, x: int, y: int) -> None:
        required = max(x, y)
        if required <= self.capacity:
            return
        if not self.growable:
            raise CapacityExceededError(
                f"Символ {required} не помещается в ёмкость N={self.capacity}"
            )
        capacity = self.capacity
        while capacity < required:
            capacity *= 2
        digrams = self.digrams()
        logger.debug(
            f"Перестройка обратного словаря: N {self.capacity} -> {capacity}, "
            f"диграмм {len(digrams)}"
        )
        self.capacity = capacity
        self._nodes = {}
        self._tails = {}
        self._length = 0
        self._extend([digram_code(left, right, capacity) for left, right in digrams])

    def lookup(self, x: int, y: int) -> int | None:
        """Переменная с правой частью xy или None."""
        self._check_symbols(x, y)
        if x > self.capacity or y > self.capacity:
            self._record(0)
            return None
        t = self._find(digram_code(x, y, self.capacity))
        return None if t is None else self.sigma + t

    def insert(self, x: int, y: int) -> int:
        """
        Новая переменная для диграммы xy.

        Raises:
            DuplicateDigramError: диграмма уже есть
            CapacityExceededError: символ больше N и рост запрещён
        """
        self._check_symbols(x, y)
        self._ensure_capacity(x, y)
        code = digram_code(x, y, self.capacity)
        if self._find(code) is not None:
            raise DuplicateDigramError(f"Диграмма ({x}, {y}) уже имеет имя")
        return self._append(code)

    def lookup_or_insert(self, x: int, y: int) -> tuple[int, bool]:
        self._check_symbols(x, y)
        self._ensure_capacity(x, y)
        code = digram_code(x, y, self.capacity)
        t = self._find(code)
        if t is not None:
            return self.sigma + t, False
        descent = self.last_visits
        variable = self._append(code)
        self._record(max(descent, self.last_visits))
        return variable, True

    def extend_chain(self, head: int, symbols: Sequence[int]) -> int:
        """
        Цепочка head s1 -> R1, R1 s2 -> R2, ... без поиска.

        head должен быть последней созданной переменной: на неё ещё не
        ссылается ни одно правило, значит все диграммы цепочки новые.

        Returns:
            Последняя переменная цепочки (head при пустом symbols)

        Raises:
            QueryRangeError: head не последняя переменная или символ вне словаря
            CapacityExceededError: цепочка не помещается в N и рост запрещён
        """
        top = self.symbol_count
        if head != top or head <= self.sigma:
            raise QueryRangeError(
                f"Цепочка начинается с последней переменной {top}, получено {head}"
            )
        if not symbols:
            return head
        if min(symbols) < 1 or max(symbols) > top:
            raise QueryRangeError(f"Символ цепочки вне [1, {top}]")
        self._ensure_capacity(top + len(symbols) - 1, 1)
        capacity = self.capacity
        self._extend(
            [digram_code(head + i, s, capacity) for i, s in enumerate(symbols)]
        )
        return self.symbol_count

    def code_at(self, t: int) -> int:
        if not 1 <= t <= self._length:
            raise QueryRangeError(f"Позиция {t} вне [1, {self._length}]")
        nodes, tails = self._nodes, self._tails
        index, a, b = 0, 1, self.capacity * self.capacity
        while a < b:
            tail = tails.get(index)
            if tail is not None:
                return tail
            node = nodes[index]
            mid = (a + b) // 2
            if node.access(t):
                t = node.rank1(t)
                index, a = 2 * index + 2, mid + 1
            else:
                t = node.rank0(t)
                index, b = 2 * index + 1, mid
        return a

    def digram_at(self, t: int) -> Rule:
        """Правая часть переменной sigma + t."""
        return decode_digram(self.code_at(t), self.capacity)

    def codes(self) -> list[int]:
        """Вся последовательность S слиянием узлов снизу вверх."""
        return self._merge(0, 1, self.capacity * self.capacity, self._length)

    def _merge(self, index: int, a: int, b: int, size: int) -> list[int]:
        if not size:
            return []
        if a == b:
            return [a] * size
        tail = self._tails.get(index)
        if tail is not None:
            return [tail]
        node = self._nodes[index]
        mid = (a + b) // 2
        low = iter(self._merge(2 * index + 1, a, mid, node.zeros))
        high = iter(self._merge(2 * index + 2, mid + 1, b, node.ones))
        return [next(high) if bit else next(low) for bit in node.bits]

    def digrams(self) -> list[Rule]:
        capacity = self.capacity
        return [decode_digram(code, capacity) for code in self.codes()]

    def to_static(self) -> WaveletTree:
        """Статическое вейвлет-дерево над тем же S."""
        return WaveletTree.build(self.codes(), self.capacity * self.capacity)

    def _tail_bits(self, index: int, code: int) -> int:
        # Внутренние узлы пути кода, начиная с глубины index
        depth = (index + 1).bit_length() - 1
        a, b = 1, self.capacity * self.capacity
        levels = 0
        while a < b:
            mid = (a + b) // 2
            if code > mid:
                a = mid + 1
            else:
                b = mid
            levels += 1
        return levels - depth

    def stored_bits(self) -> int:
        """Биты S по уровням; хвосты считаются по биту на каждый узел пути."""
        explicit = sum(len(node) for node in self._nodes.values())
        return explicit + sum(
            self._tail_bits(index, code) for index, code in self._tails.items()
        )

    def directory_bits(self) -> int:
        return sum(node.directory_bits() for node in self._nodes.values())
