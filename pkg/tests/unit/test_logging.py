"""Unit tests for structured logging."""

from __future__ import annotations

import json
import logging
import sys
from collections.abc import Iterator
from datetime import date

import numpy as np
import pytest

from lv_buddying.logging import JsonFormatter, configure_logging


def _record(msg: str, *, exc_info=None, **extra: object) -> logging.LogRecord:
    record = logging.LogRecord(
        name="lv_buddying.test",
        level=logging.WARNING,
        pathname=__file__,
        lineno=1,
        msg=msg,
        args=(),
        exc_info=exc_info,
    )
    for key, value in extra.items():
        setattr(record, key, value)
    return record


def test_formatter_emits_one_json_object() -> None:
    line = JsonFormatter().format(_record("Cell skipped"))

    payload = json.loads(line)
    assert payload["level"] == "WARNING"
    assert payload["logger"] == "lv_buddying.test"
    assert payload["message"] == "Cell skipped"
    assert "extra" not in payload
    assert "\n" not in line


def test_formatter_serialises_numpy_and_dates() -> None:
    line = JsonFormatter().format(
        _record("Fit", b=np.float64(0.5), n=np.int64(3), season=date(2014, 9, 29))
    )

    extra = json.loads(line)["extra"]
    assert extra == {"b": 0.5, "n": 3, "season": "2014-09-29"}


def test_formatter_includes_exception() -> None:
    try:
        raise ValueError("bad window")
    except ValueError:
        record = _record("Failed", exc_info=sys.exc_info())

    payload = json.loads(JsonFormatter().format(record))
    assert "ValueError: bad window" in payload["exception"]


@pytest.fixture
def restore_root() -> Iterator[logging.Logger]:
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    genetic = logging.getLogger("lv_buddying.methods.genetic")
    genetic_level = genetic.level
    yield root
    for handler in list(root.handlers):
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)
    genetic.setLevel(genetic_level)


def test_configure_logging(restore_root: logging.Logger) -> None:
    configure_logging("debug")

    (handler,) = restore_root.handlers
    assert isinstance(handler, logging.StreamHandler)
    assert handler.stream is sys.stderr
    assert isinstance(handler.formatter, JsonFormatter)
    assert restore_root.level == logging.DEBUG
    assert logging.getLogger("lv_buddying.methods.genetic").level == logging.INFO


def test_configure_logging_keeps_quieter_levels(restore_root: logging.Logger) -> None:
    configure_logging("WARNING")

    assert restore_root.level == logging.WARNING
    assert logging.getLogger("lv_buddying.methods.genetic").level == logging.WARNING
