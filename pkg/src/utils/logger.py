"""
Logging Utility

Provides structured logging for experiment runs and engine events.
"""

import logging
import json
from datetime import datetime
from pathlib import Path
from typing import Dict, Any, Optional
import sys

# Add parent path for imports
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from config import LOGGING_CONFIG


class ExperimentLogger:
    """
    Logger for tracking experiment runs and engine events.

    Provides:
    - Structured JSON logging
    - Run audit trail for CLI commands
    - Timing of distillation and graph construction
    """

    def __init__(self, log_file: Optional[Path] = None):
        """
        Initialize the logger.

        Args:
            log_file: Path to log file (uses default from config if None)
        """
        self.log_file = Path(log_file or LOGGING_CONFIG["log_file"])
        self.log_file.parent.mkdir(parents=True, exist_ok=True)

        self.logger = logging.getLogger("qudit_msd")
        self.logger.setLevel(getattr(logging, LOGGING_CONFIG["level"].upper(), logging.INFO))

        # Console handler goes to stderr so command output stays clean
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(logging.WARNING)
        formatter = logging.Formatter(LOGGING_CONFIG["format"])
        console_handler.setFormatter(formatter)

        file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)

        if not self.logger.handlers:
            self.logger.addHandler(console_handler)
            self.logger.addHandler(file_handler)

    def log_run(self,
                command: str,
                parameters: Dict[str, Any],
                duration: float,
                exit_code: int) -> None:
        """
        Log a CLI command invocation.

        Args:
            command: Subcommand name
            parameters: Parsed parameters (stringified for the log)
            duration: Wall time in seconds
            exit_code: Process exit code
        """
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "event": "run",
            "command": command,
            "parameters": {k: str(v) for k, v in parameters.items()},
            "duration_ms": round(duration * 1000, 2),
            "exit_code": exit_code
        }

        self.logger.info(f"Run: {command} -> exit {exit_code} ({duration:.3f}s)")
        self._write_json_log(log_entry)

    def log_distillation(self,
                         engine: str,
                         d: int,
                         n_qudits: int,
                         acceptance: float,
                         duration: float) -> None:
        """
        Log a distillation engine call.

        Args:
            engine: 'exact', 'bruteforce', 'mc' or 'dense'
            d: Local dimension
            n_qudits: Code length N
            acceptance: Acceptance probability of the projection
            duration: Time taken in seconds
        """
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "event": "distillation",
            "engine": engine,
            "d": d,
            "N": n_qudits,
            "acceptance_probability": acceptance,
            "duration_ms": round(duration * 1000, 2)
        }

        self.logger.debug(f"Distillation[{engine}] d={d} N={n_qudits} p={acceptance:.6g} in {duration:.3f}s")
        self._write_json_log(log_entry)

    def log_graph(self, d: int, face: tuple, vertices: int, edges: int, duration: float) -> None:
        """Log construction of an exclusivity graph."""
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "event": "graph",
            "d": d,
            "face": list(face),
            "vertices": vertices,
            "edges": edges,
            "duration_ms": round(duration * 1000, 2)
        }

        self.logger.info(f"Graph d={d} face={face}: {vertices} vertices, {edges} edges ({duration:.2f}s)")
        self._write_json_log(log_entry)

    def log_error(self, error: Exception, context: Dict[str, Any] = None) -> None:
        """
        Log an error event.

        Args:
            error: Exception that occurred
            context: Additional context information
        """
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "event": "error",
            "error_type": type(error).__name__,
            "error_message": str(error),
            "context": {k: str(v) for k, v in (context or {}).items()}
        }

        self.logger.error(f"Error: {type(error).__name__}: {error}")
        self._write_json_log(log_entry)

    def _write_json_log(self, entry: Dict[str, Any]) -> None:
        """Write a JSON log entry to the log file."""
        try:
            with open(self.log_file, 'a', encoding='utf-8') as f:
                f.write(json.dumps(entry) + '\n')
        except OSError as e:
            self.logger.warning(f"Failed to write JSON log: {e}")

    def info(self, message: str) -> None:
        """Log info message."""
        self.logger.info(message)

    def warning(self, message: str) -> None:
        """Log warning message."""
        self.logger.warning(message)

    def debug(self, message: str) -> None:
        """Log debug message."""
        self.logger.debug(message)


# Global logger instance
_logger = None

def get_logger() -> ExperimentLogger:
    """Get or create the global logger instance."""
    global _logger
    if _logger is None:
        _logger = ExperimentLogger()
    return _logger
