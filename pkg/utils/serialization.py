"""
Канонический вывод JSON и CSV.

JSON пишется с отсортированными ключами и фиксированным отступом, поэтому
чтение отчета и повторная запись дают побайтно тот же текст.
"""

import json
import math
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO

from utils.exceptions import DataFormatError


def _normalize(value: Any) -> Any:
    """Приводит numpy-скаляры и массивы к встроенным типам."""
    if hasattr(value, "tolist"):
        return _normalize(value.tolist())
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        raise DataFormatError(f"Нечисловое значение {value!r} не может быть записано в JSON")
    return value


def dumps_canonical(payload: Any) -> str:
    """Сериализует объект в канонический JSON с завершающим переводом строки."""
    text = json.dumps(
        _normalize(payload),
        sort_keys=True,
        indent=2,
        ensure_ascii=False,
        allow_nan=False,
    )
    return text + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


def format_float(value: float) -> str:
    """17 значащих цифр: при обратном чтении получается то же число."""
    return "%.17g" % float(value)


def write_csv(
    stream: TextIO,
    header: Sequence[str],
    columns: Iterable[Sequence[float]],
) -> None:
    """Пишет столбцы одинаковой длины в CSV с разделителем ',' и концом строки '\\n'."""
    columns = [list(col) for col in columns]
    stream.write(",".join(header) + "\n")
    for row in zip(*columns):
        stream.write(",".join(format_float(v) for v in row) + "\n")


def write_text(text: str, out: Optional[str], stdout: TextIO) -> None:
    """Пишет текст в файл (UTF-8) или в stdout, если путь не задан или равен '-'."""
    if out is None or out == "-":
        stdout.write(text)
        stdout.flush()
        return
    Path(out).write_text(text, encoding="utf-8")
