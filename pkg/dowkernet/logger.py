"""
Logging system for Dowkernet.
Application and error logs with rotation, plus structured run statistics.
"""
import json
import logging
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Optional

from dowkernet.config import settings


class DowkerLogger:
    """Centralized logging for analysis runs, errors, and statistics."""

    def __init__(self, log_dir: str = "logs", level: str = "INFO"):
        self.log_dir = Path(log_dir)
        self.level = getattr(logging, level.upper(), logging.INFO)

        self.log_files = {
            "app": self.log_dir / "dowkernet.log",
            "errors": self.log_dir / "errors.log",
        }
        self.stats_file = self.log_dir / "statistics.jsonl"
        self.file_logging = True

        self.app = self._create_logger("app", self.log_files["app"], self.level)
        self.errors = self._create_logger("errors", self.log_files["errors"], logging.ERROR)

    def _get_formatter(self) -> logging.Formatter:
        return logging.Formatter(
            '[%(asctime)s] %(levelname)s [%(name)s] %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    def _create_logger(self, name: str, log_file: Path, level: int) -> logging.Logger:
        """Create a logger with rotating file handler and console output."""
        logger = logging.getLogger(f"dowkernet.{name}")
        logger.setLevel(level)

        # Prevent duplicate handlers on re-import
        if logger.handlers:
            logger.handlers.clear()

        file_error = None
        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            fh = RotatingFileHandler(
                str(log_file),
                maxBytes=10 * 1024 * 1024,
                backupCount=5,
                encoding='utf-8'
            )
            fh.setLevel(level)
            fh.setFormatter(self._get_formatter())
            logger.addHandler(fh)
        except OSError as e:
            file_error = e

        # Console handler goes to stderr so stdout stays clean for results
        ch = logging.StreamHandler()
        ch.setLevel(logging.WARNING)
        ch.setFormatter(self._get_formatter())
        logger.addHandler(ch)

        if file_error is not None and self.file_logging:
            self.file_logging = False
            logger.warning(f"File logging disabled, console only: {file_error}")

        return logger

    # ---- Pipeline Events ----

    def log_ingest(self, source: str, fmt: str, nodes: int, edges: int):
        self.app.info(f"Loaded {fmt} network from {source}: {nodes} nodes, {edges} edges")

    def log_transform(self, nodes: int, sentinel: float, normalization: str):
        self.app.info(
            f"Effective distance over {nodes} nodes "
            f"(sentinel {sentinel:.6g}, normalization {normalization})"
        )

    def log_warning(self, message: str):
        self.app.warning(message)

    def log_convergence_failure(self, measure: str, iterations: int, residual: float):
        self.app.error(f"{measure} did not converge after {iterations} iterations (residual {residual:.3e})")
        self.errors.error(f"{measure} convergence failure: residual {residual:.3e}")

    def log_command_error(self, command: str, error: Exception):
        self.app.error(f"{command} failed: {error}")
        self.errors.error(f"{command} failed: {type(error).__name__}: {error}")

    def log_run_complete(self, command: str, nodes: int, duration_seconds: float,
                         outputs: Optional[list] = None):
        self.app.info(f"{command} complete: {nodes} nodes ({duration_seconds:.2f}s)")
        self._write_stat({
            "event": "run_complete",
            "command": command,
            "nodes": nodes,
            "duration_seconds": round(duration_seconds, 3),
            "outputs": outputs or [],
        })

    # ---- Statistics ----

    def _write_stat(self, data: Dict):
        """Write a structured JSON stat line."""
        if not settings.stats_enabled:
            return
        data["timestamp"] = datetime.now().isoformat()
        try:
            with open(self.stats_file, "a", encoding="utf-8", errors="replace") as f:
                f.write(json.dumps(data) + "\n")
        except Exception:
            pass  # Don't let stats logging break a run


# Global logger instance
dowker_logger = DowkerLogger(log_dir=settings.log_dir, level=settings.log_level)
