class SlpError(Exception):
    """Базовая ошибка пакета; exit_code используется CLI напрямую."""

    detail: str = "Ошибка обработки грамматики"
    exit_code: int = 2

    def __init__(self, detail: str | None = None):
        if detail is not None:
            self.detail = detail
        super().__init__(self.detail)


# Позиция, символ или номер правила вне допустимого диапазона
class QueryRangeError(SlpError, IndexError):
    detail = "Аргумент запроса вне допустимого диапазона"


# select: запрошенного вхождения не существует
class NoSuchOccurrenceError(QueryRangeError):
    detail = "Нет такого вхождения"


# У терминала нет правила
class TerminalRuleError(QueryRangeError):
    detail = "У терминала нет правила"


# Некорректная грамматика
class GrammarError(SlpError, ValueError):
    detail = "Некорректная грамматика"


# Пустой алфавит терминалов
class EmptyAlphabetError(GrammarError):
    detail = "Пустой алфавит терминалов"


# terminal_map длиннее 256 байт или с повторами
class TerminalMapError(GrammarError):
    detail = "Некорректная таблица терминалов"


# Правило ссылается на несуществующий символ
class DanglingReferenceError(GrammarError):
    detail = "Ссылка на несуществующий символ"


# Граф правил содержит цикл
class CycleError(GrammarError):
    detail = "В грамматике обнаружен цикл"


# Длина раскрытия не помещается в 63 бита
class ExpansionOverflowError(SlpError, OverflowError):
    detail = "Длина раскрытия превышает 2^63-1"


# Левые части не образуют неубывающую последовательность
class NotCanonicalError(SlpError, ValueError):
    detail = "Грамматика не канонизирована: левые дети не монотонны"


# Символ последовательности вне алфавита [1, sigma]
class AlphabetRangeError(SlpError, ValueError):
    detail = "Символ вне алфавита"


# Диграмма уже есть в обратном словаре
class DuplicateDigramError(SlpError, ValueError):
    detail = "Диграмма уже существует"


# Ёмкость обратного словаря исчерпана
class CapacityExceededError(SlpError):
    detail = "Ёмкость обратного словаря исчерпана"


# Пустой вход для сжатия
class EmptyInputError(SlpError, ValueError):
    detail = "Пустой вход: сжимать нечего"


# Повреждённый контейнер
class ContainerError(SlpError):
    detail = "Некорректный контейнер"


class TruncatedContainerError(ContainerError):
    detail = "Контейнер обрезан"


class BadMagicError(ContainerError):
    detail = "Неверная сигнатура контейнера"


class VersionMismatchError(ContainerError):
    detail = "Неподдерживаемая версия контейнера"


class LengthMismatchError(ContainerError):
    detail = "Длины компонент не согласуются с содержимым"


# Компоненты читаются, но описывают не SLP
class CorruptGrammarError(ContainerError):
    detail = "Контейнер описывает некорректную грамматику"


# Распакованные данные не совпали с оригиналом
class VerificationMismatchError(SlpError):
    detail = "Данные не совпадают с оригиналом"
    exit_code = 3

    def __init__(self, offset: int):
        self.offset = offset
        super().__init__(f"{self.detail}: первое различие на смещении {offset}")
