"""
Тесты Prometheus метрик.
"""

from prometheus_client import generate_latest

from slpdict.metrics import (
    export_metrics,
    jobs_counter,
    registry,
)


class TestMetrics:
    """Тесты коллекторов и выгрузки."""

    def test_counter_in_registry(self):
        """Тест что счётчик заданий попадает в выдачу."""
        jobs_counter.labels(command="stats", status="success").inc()

        text = generate_latest(registry).decode()

        assert "slpdict_jobs_total" in text
        assert "slpdict_decomposition_rho" in text

    def test_export_without_target(self, monkeypatch):
        """Тест что без METRICS_FILE файл не пишется."""
        from slpdict.config import settings

        monkeypatch.setattr(settings, "METRICS_FILE", None)

        assert export_metrics() is False

    def test_export_to_file(self, tmp_path):
        target = tmp_path / "metrics.prom"

        assert export_metrics(str(target)) is True
        assert "slpdict_job_duration_seconds" in target.read_text()

    def test_export_error_is_logged(self, tmp_path):
        """Тест ошибки записи: False вместо исключения."""
        target = tmp_path / "missing" / "metrics.prom"

        assert export_metrics(str(target)) is False
