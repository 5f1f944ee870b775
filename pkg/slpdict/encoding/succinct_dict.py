"""
Закодированный словарь фраз с прямым доступом к любому правилу.

Левые дети канонизированной грамматики образуют неубывающую
последовательность и хранятся унарными разностями в left_bits. Правые
дети D хранятся четвёркой (D_rho, D_pi, B, b) по монотонному разложению D:

    D_rho[p] = k      - номер подпоследовательности позиции p
    D_pi              - D_rho, переставленная по устойчивой сортировке D
    B = 0^{D[l1]} 1 0^{D[l2]-D[l1]} 1 ...  - отсортированные значения
    b[k]              - 0 для неубывающей s_k, 1 для невозрастающей

Терминальный префикс массива D (нули) не хранится, номера сдвинуты на sigma.
"""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

from bitarray import bitarray
from loguru import logger

from slpdict.exceptions import (
    LengthMismatchError,
    NotCanonicalError,
    QueryRangeError,
    TerminalRuleError,
)
from slpdict.grammar.canonical import lefts_are_monotone
from slpdict.grammar.monotone import DECREASING, MonotoneDecomposition, decompose
from slpdict.grammar.slp import PlainDictionary, Rule, Slp, validate
from slpdict.schemas import SizeReport
from slpdict.succinct.bitvec import BitVector
from slpdict.succinct.wavelet import WaveletTree


def _zero_run(length: int) -> bitarray:
    run = bitarray(length)
    run.setall(0)
    return run


def unary_gaps(values: Sequence[int]) -> bitarray:
    """0^{v1} 1 0^{v2-v1} 1 ... для неубывающей последовательности."""
    if values and (values[0] < 0 or not lefts_are_monotone(values)):
        raise ValueError("Унарные разности требуют неубывающей последовательности")
    bits = _zero_run(len(values) + (values[-1] if values else 0))
    for i, v in enumerate(values):
        bits[v + i] = 1
    return bits


@dataclass(frozen=True, slots=True)
class RightSideEncoding:
    d_rho: WaveletTree
    d_pi: WaveletTree
    big_b: BitVector
    dirs: bitarray
    rho: int

    @classmethod
    def build(
        cls, values: Sequence[int], decomposition: MonotoneDecomposition | None = None
    ) -> "RightSideEncoding":
        if decomposition is None:
            decomposition = decompose(values)
        if decomposition.m != len(values):
            raise LengthMismatchError("Разложение не соответствует длине D")

        rho = decomposition.rho
        assignment = decomposition.assignment
        order = sorted(range(len(values)), key=values.__getitem__)

        big_b = unary_gaps([values[p] for p in order])

        alphabet = max(rho, 1)
        return cls(
            d_rho=WaveletTree.build(assignment, alphabet),
            d_pi=WaveletTree.build([assignment[p] for p in order], alphabet),
            big_b=BitVector(big_b),
            dirs=bitarray(list(decomposition.dirs)),
            rho=rho,
        )

    def value(self, p: int) -> int:
        """D[p] для 1-базной позиции p."""
        d_rho, d_pi, big_b = self.d_rho, self.d_pi, self.big_b
        k = d_rho.access(p)
        t = d_rho.rank(k, p)
        if self.dirs[k - 1] == DECREASING:
            t = d_rho.rank(k, len(d_rho)) + 1 - t
        ell = d_pi.select(k, t)
        return big_b.rank0(big_b.select1(ell))

    def values(self) -> list[int]:
        """
        Все D[1..m] одним проходом: отсортированные значения из B
        раскладываются по меткам D_pi, затем раздаются позициям D_rho.

        Raises:
            LengthMismatchError: D_rho и D_pi описывают разные подпоследовательности
        """
        labels = self.d_rho.values()
        if labels and not self.rho:
            raise LengthMismatchError("Правила есть, а подпоследовательностей нет")
        if self.d_pi.sigma != self.d_rho.sigma:
            raise LengthMismatchError("Алфавиты D_rho и D_pi различаются")
        if len(self.d_pi) != len(labels) or self.big_b.ones != len(labels):
            raise LengthMismatchError("Длины D_rho, D_pi и B не совпадают")
        sorted_values = self.big_b.unary_values()
        buckets: list[list[int]] = [[] for _ in range(self.d_pi.sigma + 1)]
        for k, value in zip(self.d_pi.values(), sorted_values, strict=True):
            buckets[k].append(value)
        sizes = Counter(labels)
        for k, bucket in enumerate(buckets):
            if len(bucket) != sizes.get(k, 0):
                raise LengthMismatchError(
                    f"Подпоследовательность {k}: {sizes.get(k, 0)} позиций в D_rho, "
                    f"{len(bucket)} в D_pi"
                )
        for k in range(1, self.rho + 1):
            if self.dirs[k - 1] == DECREASING:
                buckets[k].reverse()
        cursors = [iter(bucket) for bucket in buckets]
        return [next(cursors[k]) for k in labels]


class EncodedDictionary:
    __slots__ = ("sigma", "n", "start", "terminals", "left_bits", "right", "_decoded")

    def __init__(
        self,
        sigma: int,
        start: int,
        terminals: bytes,
        left_bits: BitVector,
        right: RightSideEncoding,
    ):
        self.sigma = sigma
        self.start = start
        self.terminals = terminals
        self.left_bits = left_bits
        self.right = right
        self.n = sigma + left_bits.ones
        self._decoded: tuple[Rule, ...] | None = None

    @classmethod
    def encode(
        cls, g: Slp, decomposition: MonotoneDecomposition | None = None
    ) -> "EncodedDictionary":
        """
        Кодирование канонизированной грамматики.

        Raises:
            GrammarError: ребёнок вне [1, n], цикл или неверная таблица терминалов
            NotCanonicalError: левые дети не образуют неубывающую последовательность
        """
        validate(g)
        lefts = g.lefts()
        if not lefts_are_monotone(lefts):
            raise NotCanonicalError()
        right = RightSideEncoding.build(g.rights(), decomposition)
        encoded = cls(g.sigma, g.start, g.terminals, BitVector(unary_gaps(lefts)), right)
        logger.debug(
            f"Словарь закодирован: n={encoded.n}, m={encoded.m}, rho={right.rho}"
        )
        return encoded

    @property
    def m(self) -> int:
        return self.n - self.sigma

    @property
    def rho(self) -> int:
        return self.right.rho

    @property
    def d_rho(self) -> WaveletTree:
        return self.right.d_rho

    @property
    def d_pi(self) -> WaveletTree:
        return self.right.d_pi

    @property
    def big_b(self) -> BitVector:
        return self.right.big_b

    @property
    def dirs(self) -> bitarray:
        return self.right.dirs

    def _position(self, k: int) -> int:
        if 1 <= k <= self.sigma:
            raise TerminalRuleError(f"Символ {k} - терминал, правила нет")
        if not self.sigma < k <= self.n:
            raise QueryRangeError(f"Символ {k} вне [1, {self.n}]")
        return k - self.sigma

    def left_access(self, k: int) -> int:
        p = self._position(k)
        return self.left_bits.rank0(self.left_bits.select1(p))

    def right_access(self, k: int) -> int:
        return self.right.value(self._position(k))

    def access_rule(self, k: int) -> Rule:
        return self.left_access(k), self.right_access(k)

    def rules(self) -> list[Rule]:
        """Все правила разом; декодируются один раз и запоминаются."""
        return list(self._decoded_rules())

    def _decoded_rules(self) -> tuple[Rule, ...]:
        if self._decoded is None:
            lefts = self.left_bits.unary_values()
            self._decoded = tuple(zip(lefts, self.right.values(), strict=True))
        return self._decoded

    def to_slp(self) -> Slp:
        return Slp(self.terminals, tuple(self.rules()), self.start)

    def plain(self) -> PlainDictionary:
        return PlainDictionary.from_slp(self.to_slp())

    def expand(self, x: int | None = None) -> bytes:
        """
        Раскрытие символа, по умолчанию стартового.

        Для стартового символа все правила декодируются разом, для
        остальных (пока общий декод не сделан) - по одному через
        access_rule, каждое не более одного раза.
        """
        if x is None:
            x = self.start
        if not 1 <= x <= self.n:
            raise QueryRangeError(f"Символ {x} вне [1, {self.n}]")
        sigma, terminals = self.sigma, self.terminals
        decoded: Sequence[Rule] | None = None
        if self._decoded is not None or x == self.start:
            decoded = self._decoded_rules()
        cache: dict[int, Rule] = {}
        out = bytearray()
        stack = [x]
        while stack:
            symbol = stack.pop()
            if symbol <= sigma:
                out.append(terminals[symbol - 1])
                continue
            if decoded is not None:
                left, right = decoded[symbol - sigma - 1]
            else:
                rule = cache.get(symbol)
                if rule is None:
                    rule = cache[symbol] = self.access_rule(symbol)
                left, right = rule
            stack.append(right)
            stack.append(left)
        return bytes(out)

    def measured_bits(self) -> SizeReport:
        right = self.right
        return SizeReport(
            sigma=self.sigma,
            n=self.n,
            m=self.m,
            rho=right.rho,
            left_bits=self.left_bits.size_in_bits(),
            left_directory_bits=self.left_bits.directory_bits(),
            big_b_bits=right.big_b.size_in_bits(),
            big_b_directory_bits=right.big_b.directory_bits(),
            d_rho_bits=right.d_rho.size_in_bits(),
            d_rho_directory_bits=right.d_rho.directory_bits(),
            d_pi_bits=right.d_pi.size_in_bits(),
            d_pi_directory_bits=right.d_pi.directory_bits(),
            dirs_bits=len(right.dirs),
            terminal_bits=8 * self.sigma,
        )


def encode(
    g: Slp, decomposition: MonotoneDecomposition | None = None
) -> EncodedDictionary:
    return EncodedDictionary.encode(g, decomposition)
