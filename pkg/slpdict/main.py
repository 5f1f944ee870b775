import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Annotated

import typer
from loguru import logger
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from slpdict.config import configure_logging
from slpdict.encoding.container import deserialize, serialize
from slpdict.encoding.succinct_dict import EncodedDictionary, encode
from slpdict.exceptions import SlpError, VerificationMismatchError
from slpdict.grammar.canonical import bfs_rename
from slpdict.grammar.compress import RePairCompressor
from slpdict.grammar.monotone import decompose
from slpdict.grammar.slp import dumps_text
from slpdict.metrics import (
    decomposition_rho_gauge,
    export_metrics,
    grammar_rules_gauge,
    job_duration,
    jobs_counter,
    naming_visits_gauge,
    payload_bits_gauge,
)
from slpdict.schemas import CliConfig, SizeReport


# Коды завершения
EXIT_IO = 1
EXIT_USAGE = 2

InputArg = Annotated[str, typer.Argument(help="Входной файл или '-' для stdin")]
OutputOpt = Annotated[
    str, typer.Option("--output", "-o", help="Выходной файл или '-' для stdout")
]


@contextmanager
def run_job(command: str) -> Iterator[None]:
    """
    Обёртка задания: метрики, логирование ошибок и коды завершения.
    """
    started = time.perf_counter()
    status = "success"
    try:
        yield
    except ValidationError as e:
        status = "error"
        message = e.errors()[0]["msg"]
        logger.error(f"{command}: {message}")
        typer.echo(f"Ошибка: {message}", err=True)
        raise typer.Exit(EXIT_USAGE)
    except SlpError as e:
        status = "mismatch" if isinstance(e, VerificationMismatchError) else "error"
        logger.error(f"{command}: {e.detail}")
        typer.echo(f"Ошибка: {e.detail}", err=True)
        raise typer.Exit(e.exit_code)
    except OSError as e:
        status = "error"
        logger.error(f"{command}: ошибка ввода-вывода: {e}")
        typer.echo(f"Ошибка ввода-вывода: {e}", err=True)
        raise typer.Exit(EXIT_IO)
    finally:
        jobs_counter.labels(command=command, status=status).inc()
        job_duration.labels(command=command).observe(time.perf_counter() - started)
        export_metrics()


def read_input(path: str) -> bytes:
    if path == "-":
        return typer.get_binary_stream("stdin").read()
    with open(path, "rb") as f:
        return f.read()


def write_output(path: str, data: bytes) -> None:
    if path == "-":
        stream = typer.get_binary_stream("stdout")
        stream.write(data)
        stream.flush()
        return
    with open(path, "wb") as f:
        f.write(data)


def load_dictionary(path: str) -> EncodedDictionary:
    ed = deserialize(read_input(path))
    grammar_rules_gauge.set(ed.m)
    decomposition_rho_gauge.set(ed.rho)
    return ed


def first_difference(left: bytes, right: bytes) -> int | None:
    for offset, (a, b) in enumerate(zip(left, right, strict=False)):
        if a != b:
            return offset
    if len(left) != len(right):
        return min(len(left), len(right))
    return None


def size_table(report: SizeReport) -> Table:
    table = Table(title="Размер закодированного словаря")
    table.add_column("Параметр")
    table.add_column("Значение", justify="right")

    rows: list[tuple[str, object]] = [
        ("sigma", report.sigma),
        ("n", report.n),
        ("m", report.m),
        ("rho", report.rho),
        ("left_bits", report.left_bits),
        ("B", report.big_b_bits),
        ("D_rho", report.d_rho_bits),
        ("D_pi", report.d_pi_bits),
        ("b", report.dirs_bits),
        ("каталоги rank", report.directory_bits),
        ("терминалы", report.terminal_bits),
        ("итого, бит", report.total_bits),
        ("массив D, 2n*ceil(log n)", report.plain_bits),
        ("нижняя граница 2n + log n!", f"{report.lower_bound_bits:.1f}"),
        ("левые монотонно, правые явно", report.monotone_left_plain_right_bits),
        ("2m*ceil(log rho)", report.rho_bound_bits),
        ("доля каталога в D_rho, D_pi", f"{report.wavelet_overhead:.3f}"),
        ("ядро / массив D", f"{report.ratio_to_plain:.3f}"),
        ("ядро / нижняя граница", f"{report.ratio_to_lower_bound:.3f}"),
    ]
    for name, value in rows:
        table.add_row(name, str(value))
    return table


def register_commands(app: typer.Typer) -> None:
    """Регистрация подкоманд."""

    @app.command("compress")
    def cmd_compress(input: InputArg = "-", output: OutputOpt = "-") -> None:
        """Сжатие входа в контейнер."""
        with run_job("compress"):
            config = CliConfig(subcommand="compress", input=input, output=output)
            compressor = RePairCompressor(read_input(config.input))
            grammar = compressor.run()
            canonical, _ = bfs_rename(grammar)
            ed = encode(canonical, decompose(canonical.rights()))
            blob = serialize(ed)
            write_output(config.output, blob)

            report = ed.measured_bits()
            grammar_rules_gauge.set(ed.m)
            decomposition_rho_gauge.set(ed.rho)
            payload_bits_gauge.set(report.core_bits)
            naming_visits_gauge.set(compressor.naming.max_visits)
            logger.info(
                f"Сжато {len(compressor.text)} байт в {len(blob)}: "
                f"n={ed.n}, m={ed.m}, rho={ed.rho}"
            )
            Console(file=sys.stderr).print(
                f"n={ed.n} m={ed.m} rho={ed.rho} "
                f"core_bits={report.core_bits} total_bits={report.total_bits} "
                f"container_bytes={len(blob)}"
            )

    @app.command("decompress")
    def cmd_decompress(input: InputArg = "-", output: OutputOpt = "-") -> None:
        """Восстановление исходных байтов."""
        with run_job("decompress"):
            config = CliConfig(subcommand="decompress", input=input, output=output)
            ed = load_dictionary(config.input)
            data = ed.expand()
            write_output(config.output, data)
            logger.info(f"Распаковано {len(data)} байт")

    @app.command("access")
    def cmd_access(
        rule: Annotated[int, typer.Option("--rule", "-k", help="Номер символа")],
        input: InputArg = "-",
    ) -> None:
        """Правая часть правила без распаковки."""
        with run_job("access"):
            config = CliConfig(subcommand="access", input=input, rule=rule)
            ed = load_dictionary(config.input)
            left, right = ed.access_rule(rule)
            typer.echo(f"{rule} -> {left} {right}")

    @app.command("stats")
    def cmd_stats(input: InputArg = "-") -> None:
        """Таблица размеров компонент и базовых оценок."""
        with run_job("stats"):
            config = CliConfig(subcommand="stats", input=input)
            ed = load_dictionary(config.input)
            report = ed.measured_bits()
            payload_bits_gauge.set(report.core_bits)
            Console().print(size_table(report))

    @app.command("verify")
    def cmd_verify(
        original: Annotated[str, typer.Option("--original", help="Файл для сравнения")],
        input: InputArg = "-",
    ) -> None:
        """Сравнение распакованных данных с оригиналом."""
        with run_job("verify"):
            config = CliConfig(subcommand="verify", input=input, original=original)
            ed = load_dictionary(config.input)
            offset = first_difference(ed.expand(), read_input(original))
            if offset is not None:
                raise VerificationMismatchError(offset)
            typer.echo("OK")

    @app.command("dump")
    def cmd_dump(input: InputArg = "-", output: OutputOpt = "-") -> None:
        """Грамматика в текстовом отладочном формате."""
        with run_job("dump"):
            config = CliConfig(subcommand="dump", input=input, output=output)
            ed = load_dictionary(config.input)
            write_output(config.output, dumps_text(ed.to_slp()).encode())


def create_app() -> typer.Typer:
    """
    Создание CLI приложения.

    Returns:
        Сконфигурированное приложение Typer
    """
    app = typer.Typer(
        name="slpdict",
        help="Сжатие грамматиками (SLP) с компактным словарём фраз",
        no_args_is_help=True,
        add_completion=False,
    )

    @app.callback()
    def main(
        log_level: Annotated[
            str | None,
            typer.Option("--log-level", help="Уровень логирования, перекрывает LOG_LEVEL"),
        ] = None,
    ) -> None:
        configure_logging(log_level)

    register_commands(app)
    return app


app = create_app()
