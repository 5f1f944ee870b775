import math
import os
import sys
from typing import Literal


if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_validator,
    model_validator,
)


CONTAINER_MAGIC = b"SLPSUCC1"
CONTAINER_VERSION = 1

COMPONENT_NAMES = ("left_bits", "big_b", "d_rho", "d_pi", "dirs")


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


class SizeReport(BaseModel):
    """Точный размер компонент закодированного словаря в битах."""

    model_config = ConfigDict(frozen=True)

    sigma: int = Field(description="Число терминалов")
    n: int = Field(description="Число символов sigma + m")
    m: int = Field(description="Число правил-пар")
    rho: int = Field(description="Число монотонных подпоследовательностей")

    left_bits: int = Field(description="Унарные разности левых детей")
    left_directory_bits: int
    big_b_bits: int = Field(description="Битовая строка B")
    big_b_directory_bits: int
    d_rho_bits: int = Field(description="Узлы вейвлет-дерева D_rho")
    d_rho_directory_bits: int
    d_pi_bits: int = Field(description="Узлы вейвлет-дерева D_pi")
    d_pi_directory_bits: int
    dirs_bits: int = Field(description="Направления подпоследовательностей b")
    terminal_bits: int = Field(description="Отображение терминалов в байты")

    @computed_field
    def core_bits(self) -> int:
        return (
            self.left_bits
            + self.big_b_bits
            + self.d_rho_bits
            + self.d_pi_bits
            + self.dirs_bits
        )

    @computed_field
    def directory_bits(self) -> int:
        return (
            self.left_directory_bits
            + self.big_b_directory_bits
            + self.d_rho_directory_bits
            + self.d_pi_directory_bits
        )

    @computed_field
    def total_bits(self) -> int:
        return self.core_bits + self.directory_bits + self.terminal_bits

    @computed_field
    def plain_bits(self) -> int:
        """Массив D[1, 2n] по ceil(log2 n) бит на элемент."""
        return 2 * self.n * ceil_log2(self.n)

    @computed_field
    def lower_bound_bits(self) -> float:
        """Информационная нижняя граница 2n + log2 n!."""
        return 2 * self.n + math.lgamma(self.n + 1) / math.log(2)

    @computed_field
    def monotone_left_plain_right_bits(self) -> int:
        """Монотонные левые части и правые части без сжатия."""
        return self.left_bits + self.m * ceil_log2(self.n)

    @computed_field
    def rho_bound_bits(self) -> int:
        return 2 * self.m * ceil_log2(self.rho)

    @computed_field
    def wavelet_overhead(self) -> float:
        """Доля каталога rank в вейвлет-деревьях."""
        payload = self.d_rho_bits + self.d_pi_bits
        if not payload:
            return 0.0
        return (self.d_rho_directory_bits + self.d_pi_directory_bits) / payload

    @computed_field
    def ratio_to_plain(self) -> float:
        return self.core_bits / self.plain_bits if self.plain_bits else 0.0

    @computed_field
    def ratio_to_lower_bound(self) -> float:
        return self.core_bits / self.lower_bound_bits if self.lower_bound_bits else 0.0


class ContainerHeader(BaseModel):
    magic: bytes = Field(default=CONTAINER_MAGIC, description="Сигнатура контейнера")
    version: int = Field(default=CONTAINER_VERSION, description="Версия формата")
    sigma: int = Field(ge=1, le=256)
    n: int = Field(ge=1)
    m: int = Field(ge=0)
    rho: int = Field(ge=0)
    start: int = Field(ge=1)
    terminal_map: bytes
    component_lengths: dict[str, int] = Field(
        description="Длины компонент в байтах в порядке записи"
    )

    @field_validator("magic")
    @classmethod
    def validate_magic(cls, value: bytes) -> bytes:
        if value != CONTAINER_MAGIC:
            raise ValueError(f"Неверная сигнатура {value!r}")
        return value

    @field_validator("version")
    @classmethod
    def validate_version(cls, value: int) -> int:
        if value != CONTAINER_VERSION:
            raise ValueError(f"Версия {value} не поддерживается")
        return value

    @model_validator(mode="after")
    def check_counts(self) -> Self:
        if self.n != self.sigma + self.m:
            raise ValueError("n должно равняться sigma + m")
        if len(self.terminal_map) != self.sigma:
            raise ValueError("Длина terminal_map не равна sigma")
        if not self.start <= self.n:
            raise ValueError("Стартовый символ вне [1, n]")
        if tuple(self.component_lengths) != COMPONENT_NAMES:
            raise ValueError("Неожиданный набор компонент")
        return self

    @computed_field
    def payload_size(self) -> int:
        return sum(self.component_lengths.values())


class CliConfig(BaseModel):
    subcommand: Literal["compress", "decompress", "access", "stats", "verify", "dump"]
    input: str = Field(default="-", description="Путь к входу или '-' для stdin")
    output: str = Field(default="-", description="Путь к выходу или '-' для stdout")
    rule: int | None = Field(default=None, description="Номер правила для access")
    original: str | None = Field(default=None, description="Оригинал для verify")

    @field_validator("input", "original")
    @classmethod
    def validate_readable(cls, value: str | None) -> str | None:
        if value is None or value == "-":
            return value
        if not os.path.isfile(value) or not os.access(value, os.R_OK):
            raise ValueError(f"Файл {value} недоступен для чтения")
        return value

    @model_validator(mode="after")
    def check_subcommand_flags(self) -> Self:
        if self.subcommand == "access" and self.rule is None:
            raise ValueError("Для access нужен --rule")
        if self.subcommand == "verify" and self.original is None:
            raise ValueError("Для verify нужен --original")
        return self
