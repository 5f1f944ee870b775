"""
Prometheus метрики для заданий CLI.
"""

from loguru import logger
from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram
from prometheus_client import write_to_textfile

from slpdict.config import settings


registry = CollectorRegistry()

jobs_counter = Counter(
    "slpdict_jobs_total",
    "Total number of CLI jobs",
    ["command", "status"],
    registry=registry,
)

job_duration = Histogram(
    "slpdict_job_duration_seconds",
    "Time spent on a CLI job",
    ["command"],
    registry=registry,
)

grammar_rules_gauge = Gauge(
    "slpdict_grammar_rules",
    "Number of pair rules in the last processed grammar",
    registry=registry,
)

decomposition_rho_gauge = Gauge(
    "slpdict_decomposition_rho",
    "Number of monotone subsequences in the last encoded dictionary",
    registry=registry,
)

payload_bits_gauge = Gauge(
    "slpdict_encoded_payload_bits",
    "Payload bits of the last encoded dictionary",
    registry=registry,
)

naming_visits_gauge = Gauge(
    "slpdict_naming_node_visits_max",
    "Max wavelet nodes touched by one naming operation in the last compression",
    registry=registry,
)


def export_metrics(path: str | None = None) -> bool:
    """
    Запись метрик в текстовый файл для textfile-коллектора.

    Returns:
        True, если файл был записан
    """
    target = path or settings.METRICS_FILE
    if not target:
        return False
    try:
        write_to_textfile(target, registry)
    except OSError as e:
        logger.error(f"Не удалось записать метрики в {target}: {e}")
        return False
    logger.debug(f"Метрики записаны в {target}")
    return True
