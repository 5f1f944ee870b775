"""
Построение SLP по входным байтам в стиле Re-Pair.

Рабочая последовательность - двусвязный список на массивах, дырки после
замены помечены символом 0. Для каждой диграммы хранятся позиции её
левых элементов, очередь - куча с ленивым удалением устаревших записей.
Из равных по частоте первой заменяется диграмма с меньшим кодом. У
диграмм вида xx вхождения считаются жадно слева направо без перекрытий.
"""

import heapq
from collections import defaultdict
from collections.abc import Sequence

from loguru import logger

from slpdict.config import settings
from slpdict.exceptions import EmptyInputError
from slpdict.grammar.naming import NamingIndex
from slpdict.grammar.slp import Rule, Slp


# Пустая ячейка рабочей последовательности
HOLE = 0


def finalize_chain(seq: Sequence[int], naming: NamingIndex) -> tuple[list[Rule], int]:
    """
    Свёртка остатка влево: R1 -> s1 s2, R2 -> R1 s3, ...

    Пока диграммы находятся в словаре, берутся готовые имена. После первой
    новой переменной остаток цепочки заведомо новый и дописывается пачкой.

    Returns:
        Новые правила (в порядке номеров) и стартовый символ
    """
    if not seq:
        raise EmptyInputError("Пустая последовательность нечего сворачивать")
    new_rules: list[Rule] = []
    acc = seq[0]
    for offset in range(1, len(seq)):
        symbol = seq[offset]
        variable, fresh = naming.lookup_or_insert(acc, symbol)
        if fresh:
            new_rules.append((acc, symbol))
            rest = seq[offset + 1 :]
            last = naming.extend_chain(variable, rest)
            new_rules.extend(zip(range(variable, last), rest, strict=True))
            return new_rules, last
        acc = variable
    return new_rules, acc


class RePairCompressor:
    __slots__ = (
        "text",
        "terminals",
        "naming",
        "rules",
        "min_frequency",
        "replacements",
        "_sym",
        "_nxt",
        "_prv",
        "_occ",
        "_heap",
    )

    def __init__(
        self,
        text: bytes,
        min_frequency: int | None = None,
        capacity: int | None = None,
    ):
        if not text:
            raise EmptyInputError()
        self.text = text
        self.terminals = bytes(sorted(set(text)))
        sigma = len(self.terminals)
        if capacity is None:
            capacity = settings.NAMING_INITIAL_CAPACITY or sigma + max(len(text) - 1, 1)
        self.naming = NamingIndex(sigma, capacity=capacity)
        self.min_frequency = min_frequency or settings.MIN_DIGRAM_FREQUENCY
        self.rules: list[Rule] = []
        self.replacements = 0

        ids = {byte: i for i, byte in enumerate(self.terminals, start=1)}
        length = len(text)
        self._sym = [ids[byte] for byte in text]
        self._nxt = list(range(1, length)) + [-1]
        self._prv = list(range(-1, length - 1))
        self._occ: defaultdict[Rule, set[int]] = defaultdict(set)
        self._heap: list[tuple[int, int, int]] = []

    def _count(self, pair: Rule) -> int:
        positions = self._occ.get(pair)
        if not positions:
            return 0
        if pair[0] != pair[1]:
            return len(positions)
        nxt = self._nxt
        count = 0
        blocked = -1
        for i in sorted(positions):
            if i == blocked:
                continue
            count += 1
            blocked = nxt[i]
        return count

    def _push(self, pair: Rule) -> None:
        # Для xx кладётся верхняя оценка, точное значение уточняется при извлечении
        count = len(self._occ.get(pair, ()))
        if count >= self.min_frequency:
            heapq.heappush(self._heap, (-count, pair[0], pair[1]))

    def _replace(self, pair: Rule, z: int) -> None:
        x, y = pair
        sym, nxt, prv, occ = self._sym, self._nxt, self._prv, self._occ
        changed: set[Rule] = set()

        for i in sorted(occ[pair]):
            j = nxt[i]
            if sym[i] != x or j < 0 or sym[j] != y:
                continue
            p, q = prv[i], nxt[j]
            if p >= 0:
                left = (sym[p], x)
                occ[left].discard(p)
                changed.add(left)
            if q >= 0:
                right = (y, sym[q])
                occ[right].discard(j)
                changed.add(right)

            sym[i] = z
            sym[j] = HOLE
            nxt[i] = q
            if q >= 0:
                prv[q] = i

            if p >= 0:
                left = (sym[p], z)
                occ[left].add(p)
                changed.add(left)
            if q >= 0:
                right = (z, sym[q])
                occ[right].add(i)
                changed.add(right)

        del occ[pair]
        changed.discard(pair)
        for other in changed:
            if not occ.get(other):
                occ.pop(other, None)
            else:
                self._push(other)

    def _residual(self) -> list[int]:
        sym, nxt = self._sym, self._nxt
        seq = []
        i = 0
        while i >= 0:
            seq.append(sym[i])
            i = nxt[i]
        return seq

    def run(self) -> Slp:
        sym, occ = self._sym, self._occ
        for i in range(len(sym) - 1):
            occ[(sym[i], sym[i + 1])].add(i)
        for pair in list(occ):
            self._push(pair)

        heap = self._heap
        while heap:
            negative, x, y = heapq.heappop(heap)
            pair = (x, y)
            if pair not in occ:
                continue
            count = self._count(pair)
            if count != -negative:
                if x == y and count < -negative:
                    if count >= self.min_frequency:
                        heapq.heappush(heap, (-count, x, y))
                continue
            if count < self.min_frequency:
                continue
            z, _ = self.naming.lookup_or_insert(x, y)
            self.rules.append(pair)
            self._replace(pair, z)
            self.replacements += 1

        chain, start = finalize_chain(self._residual(), self.naming)
        self.rules.extend(chain)
        logger.debug(
            f"Re-Pair: вход {len(self.text)} байт, sigma={len(self.terminals)}, "
            f"замен {self.replacements}, правил {len(self.rules)}, "
            f"N={self.naming.capacity}"
        )
        return Slp(self.terminals, tuple(self.rules), start)


def build_slp(
    text: bytes, min_frequency: int | None = None, capacity: int | None = None
) -> Slp:
    return RePairCompressor(text, min_frequency, capacity).run()
