"""
Тесты двоичного контейнера.
"""

import random

import pytest

from slpdict.encoding.container import (
    deserialize,
    read_header,
    read_varint,
    serialize,
    write_varint,
)
from slpdict.encoding.succinct_dict import RightSideEncoding, encode
from slpdict.exceptions import (
    BadMagicError,
    ContainerError,
    CorruptGrammarError,
    GrammarError,
    LengthMismatchError,
    TruncatedContainerError,
    VersionMismatchError,
)
from slpdict.grammar.slp import Slp
from slpdict.schemas import COMPONENT_NAMES, CONTAINER_MAGIC
from slpdict.succinct.wavelet import WaveletTree
from tests.conftest import random_canonical_slp, raw_dictionary


@pytest.fixture
def sample_dictionary():
    """Словарь с rho = 2 и пятью правилами."""
    return encode(Slp(b"ab", ((1, 2), (1, 1), (2, 1), (3, 4), (5, 5)), 7))


class TestVarint:
    """Тесты целых переменной длины."""

    @pytest.mark.parametrize(
        "value, encoded",
        [(0, b"\x00"), (127, b"\x7f"), (128, b"\x80\x01"), (300, b"\xac\x02")],
    )
    def test_known_values(self, value, encoded):
        out = bytearray()
        write_varint(out, value)

        assert bytes(out) == encoded
        assert read_varint(encoded, 0) == (value, len(encoded))

    def test_truncated(self):
        with pytest.raises(TruncatedContainerError):
            read_varint(b"\x80", 0)

    def test_negative(self):
        with pytest.raises(ValueError):
            write_varint(bytearray(), -1)


class TestSerialize:
    """Тесты записи и чтения."""

    def test_round_trip(self, sample_dictionary):
        """Тест что после чтения все правила совпадают."""
        restored = deserialize(serialize(sample_dictionary))

        assert restored.rules() == sample_dictionary.rules()
        assert restored.start == sample_dictionary.start
        assert restored.terminals == b"ab"
        assert restored.rho == sample_dictionary.rho
        assert restored.expand() == sample_dictionary.expand()

    def test_deterministic(self, sample_dictionary):
        """Тест побайтной детерминированности."""
        assert serialize(sample_dictionary) == serialize(sample_dictionary)

    def test_header(self, sample_dictionary):
        """Тест полей заголовка и суммы длин компонент."""
        data = serialize(sample_dictionary)

        header, offset = read_header(data)

        assert data.startswith(CONTAINER_MAGIC)
        assert (header.sigma, header.n, header.m) == (2, 7, 5)
        assert header.rho == sample_dictionary.rho
        assert tuple(header.component_lengths) == COMPONENT_NAMES
        assert header.payload_size == len(data) - offset

    def test_payload_matches_measured_bits(self):
        """Тест что биты компонент совпадают с measured_bits."""
        g = random_canonical_slp(random.Random(21), 6, 2000)
        ed = encode(g)
        report = ed.measured_bits()
        header, _ = read_header(serialize(ed))
        lengths = header.component_lengths

        # Каждая компонента - заголовок из varint и биты, дополненные до байта
        assert lengths["left_bits"] * 8 >= report.left_bits
        assert lengths["big_b"] * 8 >= report.big_b_bits
        assert lengths["d_rho"] * 8 >= report.d_rho_bits
        assert lengths["d_pi"] * 8 >= report.d_pi_bits
        assert lengths["dirs"] * 8 >= report.dirs_bits
        assert header.payload_size * 8 - report.core_bits < 5 * 8 * 12

    @pytest.mark.parametrize("seed", range(5))
    def test_random_round_trip(self, seed):
        """Тест совпадения ответов на случайных грамматиках."""
        rng = random.Random(seed)
        ed = encode(random_canonical_slp(rng, rng.randint(1, 20), rng.randint(0, 400)))

        restored = deserialize(serialize(ed))

        assert restored.rules() == ed.rules()
        assert restored.measured_bits() == ed.measured_bits()

    def test_grammar_without_rules(self):
        """Тест грамматики из одного терминала."""
        ed = encode(Slp(b"z", (), 1))

        restored = deserialize(serialize(ed))

        assert restored.m == 0
        assert restored.expand() == b"z"


class TestCorruption:
    """Тесты повреждённых контейнеров."""

    def test_empty(self):
        """Тест пустых данных: ошибка, а не падение."""
        with pytest.raises(TruncatedContainerError):
            deserialize(b"")

    def test_bad_magic(self, sample_dictionary):
        data = bytearray(serialize(sample_dictionary))
        data[0] ^= 0xFF

        with pytest.raises(BadMagicError):
            deserialize(bytes(data))

    def test_version_mismatch(self, sample_dictionary):
        data = bytearray(serialize(sample_dictionary))
        data[len(CONTAINER_MAGIC)] = 2

        with pytest.raises(VersionMismatchError):
            deserialize(bytes(data))

    def test_header_only(self, sample_dictionary):
        """Тест файла только с заголовком."""
        data = serialize(sample_dictionary)
        _, offset = read_header(data)

        with pytest.raises(TruncatedContainerError):
            deserialize(data[:offset])

    def test_truncated_inside_header(self, sample_dictionary):
        data = serialize(sample_dictionary)

        with pytest.raises(TruncatedContainerError):
            deserialize(data[: len(CONTAINER_MAGIC) + 2])

    def test_trailing_bytes(self, sample_dictionary):
        with pytest.raises(LengthMismatchError):
            deserialize(serialize(sample_dictionary) + b"\x00")

    def test_inconsistent_counts(self, sample_dictionary):
        """Тест несогласованного n в заголовке."""
        data = bytearray(serialize(sample_dictionary))
        # version, sigma, n идут сразу после сигнатуры
        data[len(CONTAINER_MAGIC) + 2] += 1

        with pytest.raises(LengthMismatchError):
            deserialize(bytes(data))

    def test_all_errors_are_container_errors(self, sample_dictionary):
        """Тест что любая порча даёт ContainerError."""
        data = serialize(sample_dictionary)
        for cut in range(len(data)):
            with pytest.raises(ContainerError):
                deserialize(data[:cut])


class TestInvalidGrammar:
    """Тесты контейнеров, компоненты которых читаются, но описывают не SLP."""

    @pytest.mark.parametrize(
        "terminals, lefts, rights, start",
        [
            (b"ab", [0], [1], 3),
            (b"ab", [1], [0], 3),
            (b"a", [2], [2], 2),
            (b"a", [1, 2], [3, 1], 3),
        ],
        ids=["left-zero", "right-zero", "self-loop", "two-rule-cycle"],
    )
    def test_rejected_on_load(self, terminals, lefts, rights, start):
        data = serialize(raw_dictionary(terminals, lefts, rights, start))

        with pytest.raises(CorruptGrammarError) as exc_info:
            deserialize(data)

        assert isinstance(exc_info.value, ContainerError)
        assert isinstance(exc_info.value.__cause__, GrammarError)

    def test_repeated_terminal_bytes(self):
        data = serialize(raw_dictionary(b"aa", [1], [2], 3))

        with pytest.raises(CorruptGrammarError):
            deserialize(data)

    def test_subsequence_sizes_disagree(self, sample_dictionary):
        """Тест D_pi с другим числом позиций в подпоследовательностях."""
        right = sample_dictionary.right
        broken = RightSideEncoding(
            d_rho=right.d_rho,
            d_pi=WaveletTree.build([1] * sample_dictionary.m, right.d_pi.sigma),
            big_b=right.big_b,
            dirs=right.dirs,
            rho=right.rho,
        )
        sample_dictionary.right = broken

        with pytest.raises(LengthMismatchError):
            deserialize(serialize(sample_dictionary))
