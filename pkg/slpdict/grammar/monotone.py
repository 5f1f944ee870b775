"""
Разложение последовательности на не более 2*ceil(sqrt(m)) слабо монотонных
подпоследовательностей.

Каждый раунд выделяет из оставшихся позиций самую длинную неубывающую или
невозрастающую подпоследовательность (patience sorting) и удаляет более
длинную. По Эрдёшу-Секерешу её длина не меньше sqrt(r), так что раундов
не больше 2*sqrt(m). Если остаток уже покрывается стопками patience sorting
в пределах этой границы, стопки выдаются сразу.
"""

import math
from bisect import bisect_left, bisect_right
from collections.abc import Sequence
from dataclasses import dataclass

from loguru import logger

from slpdict.exceptions import QueryRangeError


INCREASING = 0
DECREASING = 1


@dataclass(frozen=True, slots=True)
class MonotoneDecomposition:
    """assignment[p] in [1, rho] для позиции p (0-базный список), dirs[k-1]."""

    assignment: tuple[int, ...]
    dirs: tuple[int, ...]

    @property
    def rho(self) -> int:
        return len(self.dirs)

    @property
    def m(self) -> int:
        return len(self.assignment)

    def subsequence(self, k: int) -> list[int]:
        """0-базные позиции подпоследовательности s_k."""
        if not 1 <= k <= self.rho:
            raise QueryRangeError(f"Подпоследовательность {k} вне [1, {self.rho}]")
        return [p for p, owner in enumerate(self.assignment) if owner == k]

    def verify(self, values: Sequence[int]) -> bool:
        """Повторная проверка: покрытие, монотонность и граница на rho."""
        if len(values) != len(self.assignment):
            return False
        last: list[int | None] = [None] * (self.rho + 1)
        for p, k in enumerate(self.assignment):
            if not 1 <= k <= self.rho:
                return False
            prev = last[k]
            if prev is not None:
                if self.dirs[k - 1] == INCREASING and values[p] < prev:
                    return False
                if self.dirs[k - 1] == DECREASING and values[p] > prev:
                    return False
            last[k] = values[p]
        if any(last[k] is None for k in range(1, self.rho + 1)):
            return False
        return self.rho <= rho_bound(len(values))


def rho_bound(m: int) -> int:
    return 2 * math.isqrt(m - 1) + 2 if m > 0 else 0


def _longest_non_decreasing(values: Sequence[int]) -> list[int]:
    """Индексы самой длинной неубывающей подпоследовательности."""
    tails: list[int] = []
    tail_index: list[int] = []
    back = [-1] * len(values)
    for i, v in enumerate(values):
        pos = bisect_right(tails, v)
        if pos:
            back[i] = tail_index[pos - 1]
        if pos == len(tails):
            tails.append(v)
            tail_index.append(i)
        else:
            tails[pos] = v
            tail_index[pos] = i
    chain = []
    i = tail_index[-1] if tail_index else -1
    while i >= 0:
        chain.append(i)
        i = back[i]
    chain.reverse()
    return chain


def _non_decreasing_piles(values: Sequence[int]) -> list[list[int]]:
    """
    Жадное покрытие неубывающими стопками.

    Элемент кладётся на стопку с наибольшей вершиной <= v. Вершины стопок
    строго убывают, число стопок равно длине самой длинной строго
    убывающей подпоследовательности, то есть минимально.
    """
    neg_tops: list[int] = []
    piles: list[list[int]] = []
    for i, v in enumerate(values):
        pos = bisect_left(neg_tops, -v)
        if pos == len(piles):
            neg_tops.append(-v)
            piles.append([i])
        else:
            neg_tops[pos] = -v
            piles[pos].append(i)
    return piles


def decompose(values: Sequence[int]) -> MonotoneDecomposition:
    m = len(values)
    budget = rho_bound(m)
    assignment = [0] * m
    dirs: list[int] = []
    remaining = list(range(m))
    rounds = 0

    while remaining:
        rounds += 1
        current = [values[p] for p in remaining]
        negated = [-v for v in current]

        rising_piles = _non_decreasing_piles(current)
        falling_piles = _non_decreasing_piles(negated)
        if len(rising_piles) <= len(falling_piles):
            piles, direction = rising_piles, INCREASING
        else:
            piles, direction = falling_piles, DECREASING
        if len(dirs) + len(piles) <= budget:
            for pile in piles:
                dirs.append(direction)
                for i in pile:
                    assignment[remaining[i]] = len(dirs)
            break

        rising = _longest_non_decreasing(current)
        falling = _longest_non_decreasing(negated)
        if len(rising) >= len(falling):
            chain, direction = rising, INCREASING
        else:
            chain, direction = falling, DECREASING
        dirs.append(direction)
        taken = set(chain)
        for i in chain:
            assignment[remaining[i]] = len(dirs)
        remaining = [p for i, p in enumerate(remaining) if i not in taken]

    logger.debug(f"Монотонное разложение: m={m}, rho={len(dirs)}, раундов={rounds}")
    return MonotoneDecomposition(tuple(assignment), tuple(dirs))
