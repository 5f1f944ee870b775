"""
Разложение DAG грамматики на левое и правое остовные деревья и
переименование переменных обходом левого дерева в ширину.

После переименования последовательность левых детей неубывающая, что
позволяет хранить левые части унарными разностями.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from loguru import logger

from slpdict.grammar.slp import Slp, validate


# Номер фиктивного стока
SINK = 0


@dataclass(frozen=True, slots=True)
class SlpDag:
    """
    Вершины 0..n, где 0 - сток. left[x], right[x] - концы левого и
    правого ребра из x; у терминалов оба ребра ведут в сток, у стока
    рёбер нет (значение -1).
    """

    sigma: int
    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.left) - 1

    def out_degree(self, x: int) -> int:
        return 0 if x == SINK else 2

    def edges(self, side: Literal["left", "right"]) -> list[tuple[int, int]]:
        targets = self.left if side == "left" else self.right
        return [(x, targets[x]) for x in range(1, len(targets))]

    def is_spanning_tree(self, side: Literal["left", "right"]) -> bool:
        """n рёбер без циклов на n + 1 вершинах: проверка через union-find."""
        parent = list(range(self.n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        edges = self.edges(side)
        if len(edges) != self.n:
            return False
        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


def to_dag(g: Slp) -> SlpDag:
    validate(g)
    sigma = g.sigma
    left = [-1] + [SINK] * sigma + [r[0] for r in g.rules]
    right = [-1] + [SINK] * sigma + [r[1] for r in g.rules]
    return SlpDag(sigma, tuple(left), tuple(right))


@dataclass(frozen=True, slots=True)
class Renaming:
    """forward[old] = new; индекс 0 не используется."""

    sigma: int
    forward: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.forward[x]

    def __len__(self) -> int:
        return len(self.forward) - 1

    @property
    def inverse(self) -> tuple[int, ...]:
        back = [0] * len(self.forward)
        for old, new in enumerate(self.forward):
            back[new] = old
        return tuple(back)

    def is_identity(self) -> bool:
        return all(old == new for old, new in enumerate(self.forward))


def bfs_order(dag: SlpDag) -> list[int]:
    """
    Порядок обхода левого дерева в ширину от стока.

    Первый уровень - терминалы по возрастанию номера, далее дети
    группируются по родителю (родители в порядке обхода), внутри
    родителя - по старому номеру.
    """
    n = dag.n
    children: list[list[int]] = [[] for _ in range(n + 1)]
    for x in range(dag.sigma + 1, n + 1):
        children[dag.left[x]].append(x)

    order = list(range(1, dag.sigma + 1))
    head = 0
    while head < len(order):
        order.extend(children[order[head]])
        head += 1
    return order


def bfs_rename(g: Slp) -> tuple[Slp, Renaming]:
    dag = to_dag(g)
    order = bfs_order(dag)
    forward = [0] * (g.n + 1)
    for new, old in enumerate(order, start=1):
        forward[old] = new
    renaming = Renaming(g.sigma, tuple(forward))
    canonical = g.renamed(forward)
    logger.debug(
        f"BFS-переименование: n={g.n}, старт {g.start} -> {canonical.start}"
    )
    return canonical, renaming


def lefts_are_monotone(lefts: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(lefts, lefts[1:], strict=False))
