"""
Configuration settings for the Qudit Magic State Distillation toolkit
"""
import os
from pathlib import Path

VERSION = "0.3.0"

# Base paths
BASE_DIR = Path(__file__).parent
OUTPUT_DIR = BASE_DIR / "outputs"
LOGS_DIR = BASE_DIR / "logs"

# Ensure directories exist
LOGS_DIR.mkdir(exist_ok=True)

# Modular arithmetic settings
ALGEBRA_CONFIG = {
    "max_prime": 97,
    "min_prime": 3
}

# Phase-space settings
WIGNER_CONFIG = {
    "normalization_tol": 1e-12,
    "construction_tol": 1e-9,
    "membership_tol": 1e-9,
    "hermitian_tol": 1e-12
}

# Distillation engine settings
DISTILLATION_CONFIG = {
    "zero_acceptance_tol": 1e-12,
    "negative_input_tol": 1e-12,
    "exact_block_size": 1 << 14,
    "mc_block_samples": 1 << 16,
    "prng": "PCG64",
    "margin_floor": -1.0 / 3.0,  # most negative Wigner entry of a qutrit state
    "margin_tol": 1e-10,
    "default_threads": int(os.getenv("QUDIT_MSD_THREADS", min(8, os.cpu_count() or 1)))
}

# Dense density-matrix oracle settings
ORACLE_CONFIG = {
    "max_dimension": 243,
    "hermitian_tol": 1e-12,
    "trace_tol": 1e-12,
    "psd_tol": -1e-10,
    "zero_acceptance_tol": 1e-12
}

# Contextuality witness settings
WITNESS_CONFIG = {
    "orthogonality_tol": 1e-10,
    "contextual_margin": 1e-9,
    "mis_budget_seconds": 600.0,
    "max_d": 5,
    "gram_block_rows": 512
}

# Command-line settings
CLI_CONFIG = {
    "exit_ok": 0,
    "exit_input_error": 2,
    "exit_zero_acceptance": 3,
    "exit_contract_violation": 4,
    "default_mc_samples": 1_000_000,
    "default_seed": 0
}

# Logging settings
LOGGING_CONFIG = {
    "level": os.getenv("QUDIT_MSD_LOG_LEVEL", "INFO"),
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "log_file": LOGS_DIR / "experiments.log"
}
