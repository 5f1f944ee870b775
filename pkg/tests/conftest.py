"""
Общие фикстуры тестов.
"""

import random

import pytest
from typer.testing import CliRunner

from slpdict.encoding.succinct_dict import (
    EncodedDictionary,
    RightSideEncoding,
    unary_gaps,
)
from slpdict.grammar.canonical import bfs_rename
from slpdict.grammar.monotone import MonotoneDecomposition
from slpdict.grammar.slp import Slp
from slpdict.main import create_app
from slpdict.succinct.bitvec import BitVector


# Битовая строка из примера rank/select
SAMPLE_BITS = "10110100111"

# Последовательность для вейвлет-дерева над {1, 2, 3, 4}
SAMPLE_SEQUENCE = [3, 4, 2, 1, 1, 2, 2, 4, 3]

# Правые части и разложение из примера кодирования
SAMPLE_RIGHTS = [0, 1, 1, 0, 4]
SAMPLE_ASSIGNMENT = (1, 2, 1, 2, 1)
SAMPLE_DIRS = (0, 1)


def random_slp(
    rng: random.Random, sigma: int, m: int, local: int | None = None
) -> Slp:
    """
    Случайная SLP с упорядоченными номерами: у правила k оба ребёнка < k.

    local ограничивает расстояние до детей, чтобы раскрытие не росло
    экспоненциально.
    """
    terminals = bytes(rng.sample(range(256), sigma))
    rules = []
    for k in range(sigma + 1, sigma + m + 1):
        low = 1 if local is None else max(1, k - local)
        rules.append((rng.randint(low, k - 1), rng.randint(low, k - 1)))
    start = sigma + m if m else 1
    return Slp(terminals, tuple(rules), start)


def random_canonical_slp(
    rng: random.Random, sigma: int, m: int, local: int | None = None
) -> Slp:
    canonical, _ = bfs_rename(random_slp(rng, sigma, m, local))
    return canonical


def raw_dictionary(
    terminals: bytes, lefts: list[int], rights: list[int], start: int
) -> EncodedDictionary:
    """Словарь, собранный из компонент напрямую, без проверки грамматики."""
    return EncodedDictionary(
        len(terminals),
        start,
        terminals,
        BitVector(unary_gaps(lefts)),
        RightSideEncoding.build(rights),
    )


def oracle_rank(seq, c, i):
    return sum(1 for v in seq[:i] if v == c)


def oracle_select(seq, c, j):
    seen = 0
    for position, v in enumerate(seq, start=1):
        if v == c:
            seen += 1
            if seen == j:
                return position
    raise AssertionError("нет такого вхождения")


@pytest.fixture
def rng():
    """Детерминированный генератор для воспроизводимых тестов."""
    return random.Random(20241018)


@pytest.fixture
def sample_decomposition():
    return MonotoneDecomposition(SAMPLE_ASSIGNMENT, SAMPLE_DIRS)


@pytest.fixture
def aaaa_grammar():
    """a=1, X2 -> aa, X3 -> X2 X2."""
    return Slp(b"a", ((1, 1), (2, 2)), 3)


@pytest.fixture
def abab_grammar():
    return Slp(b"ab", ((1, 2), (3, 3)), 4)


@pytest.fixture
def runner():
    """CLI раннер Typer."""
    return CliRunner()


@pytest.fixture
def cli_app():
    return create_app()


@pytest.fixture
def metrics_file(tmp_path, monkeypatch):
    """Метрики пишутся во временный файл, а не в рабочий каталог."""
    from slpdict.config import settings

    target = tmp_path / "metrics.prom"
    monkeypatch.setattr(settings, "METRICS_FILE", str(target))
    return target
