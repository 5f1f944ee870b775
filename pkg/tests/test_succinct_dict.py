"""
Тесты закодированного словаря фраз.
"""

import math
import random

import pytest

from slpdict.encoding.succinct_dict import (
    EncodedDictionary,
    RightSideEncoding,
    encode,
    unary_gaps,
)
from slpdict.exceptions import (
    CycleError,
    DanglingReferenceError,
    LengthMismatchError,
    NotCanonicalError,
    QueryRangeError,
    TerminalRuleError,
)
from slpdict.grammar.canonical import bfs_rename
from slpdict.grammar.monotone import MonotoneDecomposition
from slpdict.grammar.slp import PlainDictionary, Slp, expand
from tests.conftest import SAMPLE_RIGHTS, random_canonical_slp


class TestRightSideEncoding:
    """Тесты четвёрки (D_rho, D_pi, B, b)."""

    def test_sample_bits(self, sample_decomposition):
        """Тест D_pi = 12211, B = 110110001, b = 01."""
        right = RightSideEncoding.build(SAMPLE_RIGHTS, sample_decomposition)

        assert list(right.d_rho) == [1, 2, 1, 2, 1]
        assert list(right.d_pi) == [1, 2, 2, 1, 1]
        assert right.big_b.to01() == "110110001"
        assert right.dirs.to01() == "01"
        assert right.rho == 2

    @pytest.mark.parametrize("seed", range(5))
    def test_values_match_single_lookups(self, seed):
        """Тест общего декода D против value(p) по каждой позиции."""
        rng = random.Random(seed)
        values = [rng.randint(0, 300) for _ in range(rng.randint(1, 400))]

        right = RightSideEncoding.build(values)

        assert right.values() == values
        assert right.values() == [right.value(p) for p in range(1, len(values) + 1)]

    def test_values_of_sample(self, sample_decomposition):
        right = RightSideEncoding.build(SAMPLE_RIGHTS, sample_decomposition)

        assert right.values() == SAMPLE_RIGHTS

    def test_sample_values(self, sample_decomposition):
        """Тест восстановления D[p] для всех p."""
        right = RightSideEncoding.build(SAMPLE_RIGHTS, sample_decomposition)

        assert [right.value(p) for p in range(1, 6)] == SAMPLE_RIGHTS

    def test_sample_steps(self, sample_decomposition):
        """Тест промежуточных шагов для p = 3 и p = 2."""
        right = RightSideEncoding.build(SAMPLE_RIGHTS, sample_decomposition)

        # p = 3 лежит в возрастающей s_1
        assert right.d_rho.access(3) == 1
        assert right.d_rho.rank(1, 3) == 2
        assert right.d_pi.select(1, 2) == 4
        assert right.big_b.select1(4) == 5
        assert right.big_b.rank0(5) == 1

        # p = 2 лежит в убывающей s_2
        assert right.d_rho.access(2) == 2
        assert right.d_pi.select(2, 2) == 3
        assert right.big_b.rank0(right.big_b.select1(3)) == 1

    def test_single_value(self):
        """Тест одного правого ребёнка, равного 1."""
        right = RightSideEncoding.build([1])

        assert right.big_b.to01() == "01"
        assert list(right.d_pi) == [1]
        assert right.rho == 1

    def test_decomposition_length_mismatch(self, sample_decomposition):
        with pytest.raises(LengthMismatchError):
            RightSideEncoding.build([1, 2], sample_decomposition)

    def test_d_pi_is_permutation_of_d_rho(self):
        """Тест что D_pi - перестановка D_rho."""
        rng = random.Random(4)
        values = [rng.randint(1, 100) for _ in range(400)]

        right = RightSideEncoding.build(values)

        assert sorted(right.d_rho) == sorted(right.d_pi)
        assert right.big_b.ones == len(values)
        assert right.big_b.zeros == max(values)


class TestEncodedDictionary:
    """Тесты прямого доступа к правилам."""

    def test_left_gaps(self):
        """Тест левых частей [1, 1, 2]."""
        g = Slp(b"ab", ((1, 1), (1, 2), (2, 3)), 5)

        ed = encode(g)

        assert ed.left_bits.to01() == "01101"
        assert ed.left_access(4) == 1
        assert ed.left_access(5) == 2

    def test_single_rule(self):
        """Тест одной переменной."""
        ed = encode(Slp(b"a", ((1, 1),), 2))

        assert ed.left_access(2) == 1
        assert ed.access_rule(2) == (1, 1)
        assert ed.expand() == b"aa"

    def test_terminal_has_no_rule(self, aaaa_grammar):
        """Тест запроса правила терминала."""
        ed = encode(aaaa_grammar)

        with pytest.raises(TerminalRuleError):
            ed.access_rule(1)

    def test_out_of_range(self, aaaa_grammar):
        ed = encode(aaaa_grammar)

        with pytest.raises(QueryRangeError):
            ed.access_rule(4)
        with pytest.raises(QueryRangeError):
            ed.expand(0)

    def test_rejects_non_canonical(self):
        """Тест отказа на немонотонных левых частях."""
        with pytest.raises(NotCanonicalError):
            encode(Slp(b"a", ((1, 1), (2, 1), (1, 2)), 4))

    @pytest.mark.parametrize(
        "g",
        [Slp(b"ab", ((0, 1),), 3), Slp(b"ab", ((1, 0),), 3), Slp(b"ab", ((1, 4),), 3)],
    )
    def test_rejects_dangling_child(self, g):
        """Тест отказа на ребёнке вне [1, n] при монотонных левых частях."""
        with pytest.raises(DanglingReferenceError):
            encode(g)

    def test_rejects_cycle(self):
        with pytest.raises(CycleError):
            encode(Slp(b"a", ((2, 2),), 2))

    def test_bulk_rules_match_access_rule(self, rng):
        """Тест что общий декод правил совпадает с поштучным access_rule."""
        g = random_canonical_slp(rng, 6, 2000)
        ed = encode(g)

        single = [ed.access_rule(k) for k in range(g.sigma + 1, g.n + 1)]

        assert ed.rules() == single == list(g.rules)
        assert ed.rules() is not ed.rules()

    def test_expand_inner_symbol_before_bulk_decode(self):
        """Тест раскрытия нестартового символа на свежем словаре."""
        g = random_canonical_slp(random.Random(4), 3, 200, local=8)
        ed = encode(g)
        inner = g.sigma + 1 + g.m // 2

        assert ed.expand(inner) == expand(g, inner)
        assert ed.expand() == expand(g, g.start)
        assert ed.expand(inner) == expand(g, inner)

    def test_last_rule_of_sample_shape(self):
        """Тест правила sigma + 5 с правым ребёнком 4."""
        g = Slp(b"a", ((1, 1), (2, 2), (2, 3), (3, 1), (3, 4)), 6)

        ed = EncodedDictionary.encode(g)

        assert ed.access_rule(6) == (3, 4)
        assert ed.to_slp() == g

    @pytest.mark.parametrize("seed", range(8))
    def test_random_grammars_match_plain(self, seed):
        """Тест совпадения с массивом D на случайных грамматиках."""
        rng = random.Random(seed)
        g = random_canonical_slp(rng, rng.randint(1, 10), 500)

        ed = encode(g)

        assert ed.plain().entries == PlainDictionary.from_slp(g).entries
        assert ed.n == g.n
        assert ed.rho <= 2 * math.ceil(math.sqrt(g.m))

    def test_expand_matches_grammar(self):
        """Тест раскрытия через access_rule."""
        rng = random.Random(9)
        g = random_canonical_slp(rng, 3, 150, local=10)

        ed = encode(g)

        assert ed.expand() == expand(g, g.start)
        assert ed.expand(g.n) == expand(g, g.n)

    def test_expand_after_renaming(self):
        """Тест что строка сохраняется после канонизации и кодирования."""
        g = Slp(b"ab", ((4, 1), (1, 2), (3, 3)), 5)
        canonical, _ = bfs_rename(g)

        assert encode(canonical).expand() == expand(g, 5) == b"abaaba"

    def test_explicit_decomposition(self):
        """Тест кодирования с заданным разложением."""
        g = Slp(b"ab", ((1, 2), (1, 1), (2, 1)), 5)
        decomposition = MonotoneDecomposition((1, 1, 2), (1, 0))

        ed = encode(g, decomposition)

        assert ed.rho == 2
        assert ed.rules() == list(g.rules)


class TestMeasuredBits:
    """Тесты подсчёта размера."""

    def test_components_sum(self, abab_grammar):
        """Тест суммы компонент."""
        report = encode(abab_grammar).measured_bits()

        assert report.core_bits == (
            report.left_bits
            + report.big_b_bits
            + report.d_rho_bits
            + report.d_pi_bits
            + report.dirs_bits
        )
        assert report.total_bits == (
            report.core_bits + report.directory_bits + report.terminal_bits
        )

    def test_unary_rho_has_no_wavelet_bits(self, aaaa_grammar):
        """Тест что при rho = 1 вейвлет-деревья пусты."""
        report = encode(aaaa_grammar).measured_bits()

        assert report.rho == 1
        assert report.d_rho_bits == 0
        assert report.d_pi_bits == 0
        assert report.rho_bound_bits == 0

    def test_unary_bounds(self):
        """Тест |B| <= m + n и |left_bits| <= m + n."""
        g = random_canonical_slp(random.Random(6), 5, 800)

        report = encode(g).measured_bits()

        assert report.big_b_bits <= report.m + report.n
        assert report.left_bits <= report.m + report.n
        assert report.d_rho_bits + report.d_pi_bits <= report.rho_bound_bits

    def test_baselines(self, abab_grammar):
        """Тест базовых оценок: массив D и нижняя граница."""
        report = encode(abab_grammar).measured_bits()

        assert report.plain_bits == 2 * 4 * 2
        assert report.lower_bound_bits == pytest.approx(8 + math.log2(24))


def test_unary_gaps():
    assert unary_gaps([]).to01() == ""
    assert unary_gaps([0, 0, 3]).to01() == "110001"


@pytest.mark.parametrize("values", [[2, 1], [-1, 0]])
def test_unary_gaps_rejects_unsorted(values):
    with pytest.raises(ValueError):
        unary_gaps(values)
