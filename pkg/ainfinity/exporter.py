# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import json
import logging
import sys
from pathlib import Path
from typing import IO, Any, List, Literal, Optional

from .const import Color

OutputFormat = Literal["text", "json"]


class ReportExporter:
    """Writes command results to stdout (or a file) as text lines or one JSON document.

    In text mode every saved record is written immediately; in json mode records
    are collected and written as a single array when the exporter closes,
    unless exactly one document was saved with `save_document`.
    """

    def __init__(self, name: str, fmt: OutputFormat = "text",
                 target: Optional[Path] = None, stream: Optional[IO[str]] = None) -> None:
        self.logger = logging.getLogger(f"Exporter.{name}")
        self.fmt = fmt
        self.target = target

        if target is not None:
            self.logger.debug(f"Opening {target}")
            self.fileobj: IO[str] = open(target, "w", encoding="utf-8", newline="\n")
            self.owns_file = True
        else:
            self.fileobj = stream if stream is not None else sys.stdout
            self.owns_file = False

        self.records: List[Any] = []
        self.document: Optional[Any] = None
        self.count = 0

    def __enter__(self) -> "ReportExporter":
        return self

    def __exit__(self, exc_type: Any, exc_value: Any, traceback: Any) -> None:
        self.close(flush=exc_type is None)

    def save(self, text: str, record: Any = None) -> None:
        """Saves one result: `text` in text mode, `record` (defaulting to text) in json mode."""
        self.count += 1
        if self.fmt == "json":
            self.records.append(text if record is None else record)
        else:
            self.fileobj.write(text)
            self.fileobj.write("\n")

    def save_document(self, text: str, document: Any) -> None:
        """Saves a whole result, which in json mode becomes the output object itself."""
        self.count += 1
        if self.fmt == "json":
            self.document = document
        else:
            self.fileobj.write(text)
            self.fileobj.write("\n")

    def close(self, flush: bool = True) -> None:
        if flush and self.fmt == "json":
            payload = self.document if self.document is not None else self.records
            self.fileobj.write(json.dumps(payload, ensure_ascii=False, indent=2))
            self.fileobj.write("\n")

        self.fileobj.flush()
        if self.owns_file:
            self.fileobj.close()
        self.logger.debug(f"Closing output - wrote {Color.BOLD}{self.count}{Color.RESET} records")
