import os
import sys

from loguru import logger
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    FORMAT_LOG: str = (
        "{time:YYYY-MM-DD at HH:mm:ss} | {level} | {name}:{function}:{line} - {message}"
    )
    LOG_ROTATION: str = "10 MB"
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: str | None = None

    # Размер суперблока каталога rank (в битах)
    RANK_BLOCK_BITS: int = 512

    # Порог частоты диграммы для замены в Re-Pair
    MIN_DIGRAM_FREQUENCY: int = 2

    # Ёмкость N обратного словаря; 0 - вычислить по длине входа
    NAMING_INITIAL_CAPACITY: int = 0

    METRICS_FILE: str | None = None

    model_config = SettingsConfigDict(
        env_file=os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", ".env"),
        extra="ignore",
    )

    @field_validator("RANK_BLOCK_BITS")
    @classmethod
    def validate_block_bits(cls, value: int) -> int:
        if value <= 0 or value % 8:
            raise ValueError("RANK_BLOCK_BITS должен быть положительным и кратным 8")
        return value

    @field_validator("MIN_DIGRAM_FREQUENCY")
    @classmethod
    def validate_min_frequency(cls, value: int) -> int:
        if value < 2:
            raise ValueError("MIN_DIGRAM_FREQUENCY не может быть меньше 2")
        return value

    @field_validator("NAMING_INITIAL_CAPACITY")
    @classmethod
    def validate_capacity(cls, value: int) -> int:
        if value < 0:
            raise ValueError("NAMING_INITIAL_CAPACITY не может быть отрицательной")
        return value

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        return value.upper()


# Получаем параметры для загрузки переменных среды
settings = Settings()


def configure_logging(level: str | None = None) -> None:
    """
    Настройка синков loguru для CLI.

    Args:
        level: Уровень логирования, перекрывающий LOG_LEVEL
    """
    logger.remove()
    logger.add(sys.stderr, level=(level or settings.LOG_LEVEL).upper())

    if settings.LOG_FILE:
        logger.add(
            settings.LOG_FILE,
            format=settings.FORMAT_LOG,
            level="INFO",
            rotation=settings.LOG_ROTATION,
        )
