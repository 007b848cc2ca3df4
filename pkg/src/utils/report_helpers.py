"""
Report persistence: deterministic JSON and CSV beside it
"""

import json
import os
from dataclasses import dataclass, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from config import config

from .error_handler import AppError, logger


class ReportError(AppError):
    """Custom exception for report writing"""

    def __init__(self, message: str):
        super().__init__(message, "ReportError")


@dataclass
class CommandResult:
    """Result section of a report and the optional sequence table written as CSV"""
    report: Dict[str, Any]
    frame: Optional[pd.DataFrame] = None


def to_jsonable(value: Any) -> Any:
    """
    Konverter analyseobjekter til JSON-kompatible verdier

    Coefficients are already decimal strings in the to_dict forms; complex
    numbers become [re, im].
    """
    if hasattr(value, "to_dict") and callable(value.to_dict):
        return to_jsonable(value.to_dict())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if is_dataclass(value):
        return to_jsonable(value.__dict__)
    return str(value)


class ReportWriter:
    """Helper class for report files"""

    def __init__(self, output_path: Optional[str] = None, command: str = "report"):
        self.json_path = output_path or os.path.join(config.report_dir, f"{command}.json")
        stem, _ = os.path.splitext(self.json_path)
        self.csv_path = f"{stem}.csv"

    # ============= JSON =============

    def render_json(self, report: Dict[str, Any]) -> str:
        """Report as text with sorted keys; identical input gives identical bytes"""
        return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def write_json(self, report: Dict[str, Any]) -> str:
        """
        Skriv JSON-rapport

        Args:
            report: Rapportdata (ferdig bygd med to_dict der det finnes)

        Returns:
            Stien som ble skrevet

        Raises:
            ReportError: Hvis filen ikke kan skrives
        """
        try:
            self._ensure_directory(self.json_path)
            with open(self.json_path, "w", encoding="utf-8") as handle:
                handle.write(self.render_json(report))
            logger.info(f"Rapport skrevet: {self.json_path}")
            return self.json_path
        except OSError as e:
            raise ReportError(f"Feil ved skriving av rapport: {e}")

    # ============= CSV =============

    def write_csv(self, frame: Optional[pd.DataFrame]) -> Optional[str]:
        """Skriv sekvensdata som CSV med samme filstamme som JSON-rapporten"""
        if frame is None:
            return None
        try:
            self._ensure_directory(self.csv_path)
            frame.to_csv(self.csv_path, index=False)
            logger.info(f"CSV skrevet: {self.csv_path}")
            return self.csv_path
        except OSError as e:
            raise ReportError(f"Feil ved skriving av CSV: {e}")

    @staticmethod
    def _ensure_directory(path: str) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)


def get_report_writer(output_path: Optional[str] = None, command: str = "report") -> ReportWriter:
    """Get a report writer for one command run"""
    return ReportWriter(output_path, command)
