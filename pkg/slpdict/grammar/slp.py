"""
Явное представление SLP (straight-line program).

Символы 1..sigma - терминалы (байты из terminal_map), sigma+1..n -
переменные с правилами X_k -> X_i X_j. Требуется только ацикличность:
после BFS-переименования правый ребёнок может иметь номер больше k.
"""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from loguru import logger

from slpdict.exceptions import (
    CycleError,
    DanglingReferenceError,
    EmptyAlphabetError,
    ExpansionOverflowError,
    GrammarError,
    QueryRangeError,
    TerminalMapError,
)


MAX_EXPANSION_LENGTH = (1 << 63) - 1

Rule = tuple[int, int]


@dataclass(frozen=True, slots=True)
class Slp:
    terminals: bytes
    rules: tuple[Rule, ...]
    start: int

    def __post_init__(self) -> None:
        if not isinstance(self.rules, tuple):
            object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        if not isinstance(self.terminals, bytes):
            object.__setattr__(self, "terminals", bytes(self.terminals))

    @property
    def sigma(self) -> int:
        return len(self.terminals)

    @property
    def n(self) -> int:
        return len(self.terminals) + len(self.rules)

    @property
    def m(self) -> int:
        return len(self.rules)

    def is_terminal(self, x: int) -> bool:
        return 1 <= x <= len(self.terminals)

    def rule(self, k: int) -> Rule:
        sigma = len(self.terminals)
        if not sigma < k <= self.n:
            raise QueryRangeError(f"Нет правила для символа {k}")
        return self.rules[k - sigma - 1]

    def lefts(self) -> list[int]:
        return [left for left, _ in self.rules]

    def rights(self) -> list[int]:
        return [right for _, right in self.rules]

    def renamed(self, mapping: Sequence[int] | Mapping[int, int]) -> "Slp":
        """
        Грамматика после переименования переменных.

        mapping[old] = new для всех символов 1..n; на терминалах должно
        быть тождественным.
        """
        sigma = self.sigma
        new_rules: list[Rule | None] = [None] * self.m
        for offset, (left, right) in enumerate(self.rules):
            k = sigma + 1 + offset
            new_rules[mapping[k] - sigma - 1] = (mapping[left], mapping[right])
        return Slp(self.terminals, tuple(new_rules), mapping[self.start])  # type: ignore[arg-type]


@dataclass(slots=True)
class ValidationResult:
    order: list[int]
    unreachable: list[int] = field(default_factory=list)
    duplicates: list[Rule] = field(default_factory=list)

    @property
    def warnings(self) -> list[str]:
        messages = []
        if self.unreachable:
            messages.append(f"Недостижимые символы: {len(self.unreachable)}")
        if self.duplicates:
            messages.append(f"Повторяющиеся диграммы: {len(self.duplicates)}")
        return messages


def validate(g: Slp) -> ValidationResult:
    """
    Проверка инвариантов SLP.

    Returns:
        Топологический порядок переменных (дети раньше родителей) и
        предупреждения о недостижимых символах и повторных диграммах

    Raises:
        EmptyAlphabetError, TerminalMapError, DanglingReferenceError, CycleError
    """
    sigma, n = g.sigma, g.n
    if sigma == 0:
        raise EmptyAlphabetError()
    if sigma > 256:
        raise TerminalMapError(f"Терминалов {sigma}, допускается не более 256")
    if len(set(g.terminals)) != sigma:
        raise TerminalMapError("Повторяющиеся байты в terminal_map")
    if not 1 <= g.start <= n:
        raise DanglingReferenceError(f"Стартовый символ {g.start} вне [1, {n}]")

    # Число ещё не обработанных детей-переменных и обратные рёбра
    pending = [0] * (n + 1)
    parents: list[list[int]] = [[] for _ in range(n + 1)]
    for offset, (left, right) in enumerate(g.rules):
        k = sigma + 1 + offset
        for child in (left, right):
            if not 1 <= child <= n:
                raise DanglingReferenceError(
                    f"Правило {k} ссылается на символ {child} вне [1, {n}]"
                )
            if child > sigma:
                pending[k] += 1
                parents[child].append(k)

    order = [k for k in range(sigma + 1, n + 1) if pending[k] == 0]
    head = 0
    while head < len(order):
        child = order[head]
        head += 1
        for parent in parents[child]:
            pending[parent] -= 1
            if pending[parent] == 0:
                order.append(parent)
    if len(order) != g.m:
        stuck = next(k for k in range(sigma + 1, n + 1) if pending[k] > 0)
        raise CycleError(f"Цикл в грамматике через символ {stuck}")

    result = ValidationResult(order=order)

    reachable = bytearray(n + 1)
    reachable[g.start] = 1
    for k in reversed(order):
        if reachable[k]:
            left, right = g.rules[k - sigma - 1]
            reachable[left] = reachable[right] = 1
    result.unreachable = [x for x in range(1, n + 1) if not reachable[x]]

    seen: set[Rule] = set()
    for rule in g.rules:
        if rule in seen:
            result.duplicates.append(rule)
        seen.add(rule)

    for message in result.warnings:
        logger.warning(message)
    return result


def is_index_ordered(g: Slp) -> bool:
    """Порядок из определения SLP: у правила k оба ребёнка меньше k."""
    sigma = g.sigma
    return all(
        left < k and right < k
        for k, (left, right) in enumerate(g.rules, start=sigma + 1)
    )


def expand(g: Slp, x: int) -> bytes:
    """Раскрытие символа x без рекурсии."""
    sigma, terminals, rules = g.sigma, g.terminals, g.rules
    if not 1 <= x <= g.n:
        raise QueryRangeError(f"Символ {x} вне [1, {g.n}]")
    out = bytearray()
    stack = [x]
    while stack:
        symbol = stack.pop()
        if symbol <= sigma:
            out.append(terminals[symbol - 1])
        else:
            left, right = rules[symbol - sigma - 1]
            stack.append(right)
            stack.append(left)
    return bytes(out)


def expansion_lengths(g: Slp, order: Iterable[int] | None = None) -> list[int]:
    """Длины раскрытий всех символов одним проходом снизу вверх."""
    sigma = g.sigma
    if order is None:
        order = validate(g).order
    lengths = [0] * (g.n + 1)
    for x in range(1, sigma + 1):
        lengths[x] = 1
    rules = g.rules
    for k in order:
        left, right = rules[k - sigma - 1]
        total = lengths[left] + lengths[right]
        if total > MAX_EXPANSION_LENGTH:
            raise ExpansionOverflowError(f"Длина раскрытия символа {k} больше 2^63-1")
        lengths[k] = total
    return lengths


def expansion_length(g: Slp, x: int) -> int:
    if not 1 <= x <= g.n:
        raise QueryRangeError(f"Символ {x} вне [1, {g.n}]")
    return expansion_lengths(g)[x]


class PlainDictionary:
    """
    Массив D[1, 2n]: D[2k-1], D[2k] - дети символа k, нули у терминалов.
    """

    __slots__ = ("sigma", "entries")

    def __init__(self, sigma: int, entries: list[int]):
        self.sigma = sigma
        self.entries = entries

    @classmethod
    def from_slp(cls, g: Slp) -> "PlainDictionary":
        entries = [0] * (2 * g.sigma)
        for left, right in g.rules:
            entries.append(left)
            entries.append(right)
        return cls(g.sigma, entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries) // 2

    def entry(self, i: int) -> int:
        if not 1 <= i <= len(self.entries):
            raise QueryRangeError(f"D[{i}] вне [1, {len(self.entries)}]")
        return self.entries[i - 1]

    def rule(self, k: int) -> Rule:
        if not 1 <= k <= self.n:
            raise QueryRangeError(f"Символ {k} вне [1, {self.n}]")
        return self.entries[2 * k - 2], self.entries[2 * k - 1]


def dumps_text(g: Slp) -> str:
    """Отладочный текстовый формат: заголовок и строки 'k -> i j'."""
    lines = [
        f"sigma: {g.sigma}",
        "terminals: " + " ".join(f"{b:02x}" for b in g.terminals),
        f"start: {g.start}",
    ]
    lines.extend(
        f"{k} -> {left} {right}"
        for k, (left, right) in enumerate(g.rules, start=g.sigma + 1)
    )
    return "\n".join(lines) + "\n"


def loads_text(text: str) -> Slp:
    header: dict[str, str] = {}
    rules: dict[int, Rule] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if "->" in line:
                head, body = line.split("->", 1)
                left, right = body.split()
                rules[int(head)] = (int(left), int(right))
            else:
                key, value = line.split(":", 1)
                header[key.strip()] = value.strip()
        except ValueError:
            raise GrammarError(f"Строка {lineno} не разобрана: {raw!r}")

    missing = {"sigma", "terminals", "start"} - header.keys()
    if missing:
        raise GrammarError(f"Нет полей заголовка: {sorted(missing)}")
    try:
        terminals = bytes.fromhex(header["terminals"])
        sigma = int(header["sigma"])
        start = int(header["start"])
    except ValueError:
        raise GrammarError(f"Некорректные поля заголовка: {header}")
    if sigma != len(terminals):
        raise TerminalMapError("sigma не совпадает с числом терминалов")
    expected = list(range(sigma + 1, sigma + 1 + len(rules)))
    if sorted(rules) != expected:
        raise DanglingReferenceError("Номера правил должны идти подряд с sigma+1")
    return Slp(terminals, tuple(rules[k] for k in expected), start)
