"""
Двоичный контейнер закодированного словаря.

    magic "SLPSUCC1"
    varint: version, sigma, n, m, rho, start
    varint: длина terminal_map, затем её байты
    varint: число компонент, затем длина каждой в байтах
    компоненты: left_bits, big_b, d_rho, d_pi, dirs

Битовая строка - varint длины в битах и биты, дополненные нулями до байта.
Вейвлет-дерево - varint sigma, длины последовательности и числа бит узлов,
затем биты узлов в порядке обхода в ширину. Целые - беззнаковые
little-endian по 7 бит с битом продолжения. Подробно см.
docs/CONTAINER_FORMAT.md.
"""

from bitarray import bitarray
from loguru import logger
from pydantic import ValidationError

from slpdict.encoding.succinct_dict import EncodedDictionary, RightSideEncoding
from slpdict.exceptions import (
    BadMagicError,
    CorruptGrammarError,
    GrammarError,
    LengthMismatchError,
    TruncatedContainerError,
    VersionMismatchError,
)
from slpdict.grammar.slp import validate
from slpdict.schemas import (
    COMPONENT_NAMES,
    CONTAINER_MAGIC,
    CONTAINER_VERSION,
    ContainerHeader,
)
from slpdict.succinct.bitvec import BitVector
from slpdict.succinct.wavelet import WaveletTree


def write_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError(f"varint не кодирует отрицательные числа: {value}")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def read_varint(buffer: bytes, offset: int) -> tuple[int, int]:
    value = 0
    shift = 0
    while True:
        if offset >= len(buffer):
            raise TruncatedContainerError("Обрыв внутри целого числа")
        byte = buffer[offset]
        offset += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, offset
        shift += 7


def _pack_bits(bits: bitarray) -> bytes:
    out = bytearray()
    write_varint(out, len(bits))
    out += bits.tobytes()
    return bytes(out)


def _pack_wavelet(tree: WaveletTree) -> bytes:
    payload = tree.node_bits()
    out = bytearray()
    write_varint(out, tree.sigma)
    write_varint(out, len(tree))
    write_varint(out, len(payload))
    out += payload.tobytes()
    return bytes(out)


def _read_bits(blob: bytes, offset: int, length: int, what: str) -> bitarray:
    nbytes = (length + 7) // 8
    if offset + nbytes != len(blob):
        raise LengthMismatchError(
            f"Компонента {what}: {length} бит не соответствуют {len(blob)} байтам"
        )
    bits = bitarray()
    bits.frombytes(blob[offset:])
    del bits[length:]
    return bits


def _unpack_bits(blob: bytes, what: str) -> bitarray:
    length, offset = read_varint(blob, 0)
    return _read_bits(blob, offset, length, what)


def _unpack_wavelet(blob: bytes, what: str) -> WaveletTree:
    sigma, offset = read_varint(blob, 0)
    length, offset = read_varint(blob, offset)
    total, offset = read_varint(blob, offset)
    return WaveletTree.from_node_bits(
        sigma, length, _read_bits(blob, offset, total, what)
    )


def serialize(ed: EncodedDictionary) -> bytes:
    right = ed.right
    components = {
        "left_bits": _pack_bits(ed.left_bits.bits),
        "big_b": _pack_bits(right.big_b.bits),
        "d_rho": _pack_wavelet(right.d_rho),
        "d_pi": _pack_wavelet(right.d_pi),
        "dirs": _pack_bits(right.dirs),
    }

    out = bytearray(CONTAINER_MAGIC)
    for value in (CONTAINER_VERSION, ed.sigma, ed.n, ed.m, right.rho, ed.start):
        write_varint(out, value)
    write_varint(out, len(ed.terminals))
    out += ed.terminals
    write_varint(out, len(components))
    for name in COMPONENT_NAMES:
        write_varint(out, len(components[name]))
    for name in COMPONENT_NAMES:
        out += components[name]

    logger.debug(f"Контейнер: {len(out)} байт, n={ed.n}, rho={right.rho}")
    return bytes(out)


def read_header(data: bytes) -> tuple[ContainerHeader, int]:
    """
    Разбор заголовка.

    Returns:
        Заголовок и смещение начала компонент

    Raises:
        TruncatedContainerError, BadMagicError, VersionMismatchError,
        LengthMismatchError
    """
    data = bytes(data)
    magic = data[: len(CONTAINER_MAGIC)]
    if magic != CONTAINER_MAGIC:
        if CONTAINER_MAGIC.startswith(magic):
            raise TruncatedContainerError("Контейнер короче сигнатуры")
        raise BadMagicError(f"Сигнатура {magic!r} вместо {CONTAINER_MAGIC!r}")
    offset = len(CONTAINER_MAGIC)

    version, offset = read_varint(data, offset)
    if version != CONTAINER_VERSION:
        raise VersionMismatchError(
            f"Версия {version}, поддерживается только {CONTAINER_VERSION}"
        )
    fields = {}
    for name in ("sigma", "n", "m", "rho", "start"):
        fields[name], offset = read_varint(data, offset)

    map_length, offset = read_varint(data, offset)
    if offset + map_length > len(data):
        raise TruncatedContainerError("Обрыв внутри terminal_map")
    terminal_map = data[offset : offset + map_length]
    offset += map_length

    count, offset = read_varint(data, offset)
    if count != len(COMPONENT_NAMES):
        raise LengthMismatchError(
            f"Компонент {count}, ожидается {len(COMPONENT_NAMES)}"
        )
    lengths = {}
    for name in COMPONENT_NAMES:
        lengths[name], offset = read_varint(data, offset)

    try:
        header = ContainerHeader(
            magic=magic,
            version=version,
            terminal_map=terminal_map,
            component_lengths=lengths,
            **fields,
        )
    except ValidationError as e:
        raise LengthMismatchError(f"Несогласованный заголовок: {e.errors()[0]['msg']}")
    return header, offset


def deserialize(data: bytes) -> EncodedDictionary:
    data = bytes(data)
    header, offset = read_header(data)

    available = len(data) - offset
    if available < header.payload_size:
        raise TruncatedContainerError(
            f"Данных {available} байт, заявлено {header.payload_size}"
        )
    if available > header.payload_size:
        raise LengthMismatchError(
            f"Лишние {available - header.payload_size} байт после компонент"
        )

    blobs = {}
    for name, size in header.component_lengths.items():
        blobs[name] = data[offset : offset + size]
        offset += size

    left_bits = BitVector(_unpack_bits(blobs["left_bits"], "left_bits"))
    big_b = BitVector(_unpack_bits(blobs["big_b"], "big_b"))
    d_rho = _unpack_wavelet(blobs["d_rho"], "d_rho")
    d_pi = _unpack_wavelet(blobs["d_pi"], "d_pi")
    dirs = _unpack_bits(blobs["dirs"], "dirs")

    m, rho = header.m, header.rho
    if left_bits.ones != m or big_b.ones != m or len(d_rho) != m or len(d_pi) != m:
        raise LengthMismatchError(f"Компоненты не описывают {m} правил")
    if len(dirs) != rho or d_rho.sigma != max(rho, 1) or d_pi.sigma != d_rho.sigma:
        raise LengthMismatchError(f"Компоненты не описывают {rho} подпоследовательностей")
    if (m > 0) != (rho > 0):
        raise LengthMismatchError(f"{m} правил при {rho} подпоследовательностях")
    if left_bits.zeros > header.n or big_b.zeros > header.n:
        raise LengthMismatchError("Значения детей выходят за [1, n]")

    right = RightSideEncoding(d_rho=d_rho, d_pi=d_pi, big_b=big_b, dirs=dirs, rho=rho)
    ed = EncodedDictionary(
        header.sigma, header.start, header.terminal_map, left_bits, right
    )
    try:
        validate(ed.to_slp())
    except GrammarError as e:
        raise CorruptGrammarError(f"{CorruptGrammarError.detail}: {e.detail}") from e
    logger.debug(f"Контейнер прочитан: n={ed.n}, m={m}, rho={rho}")
    return ed
