#!/usr/bin/env python3
"""
Configuration settings for the MBS Checker application.

This module contains all configuration settings, default values,
and application constants.
"""

from pathlib import Path

# Application Information
APP_NAME = "MBS Checker"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = "Exact model checker for Minkowskian branching structures"

# Directory Paths
BASE_DIR = Path(__file__).parent.parent
CONFIG_DIR = BASE_DIR / "config"
LOG_DIR = BASE_DIR / "logs"

# Logging Configuration
LOG_LEVEL = "INFO"
LOG_FILE = LOG_DIR / "mbs_checker.log"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
MAX_LOG_SIZE = 10 * 1024 * 1024  # 10MB

# Model Files
MODEL_FORMAT = "mbs-model/1"
MODEL_ENCODING = "utf-8"
DEFAULT_CATALOG_CONFIG_FILE = CONFIG_DIR / "catalog_config.json"

# Geometry
UP_PRECISION_BITS = 32

# Search and Sampling
SAMPLE_LIMIT = 12
DEFAULT_JOBS = 1
DEFAULT_DELTAS = ("1", "1/2", "1/4")
CHAIN_STEPS = 12
CENTREDNESS_SAMPLES = 8
EXHAUSTIVE_EVENT_LIMIT = 12
MAX_PRODUCT_FUNCTIONS = 4096
MAX_FINFB_POINTS = 20

# Catalog Surrogates
WRAPPED_MAX_INDEX = 64
WRAPPED_DENOMINATOR_LIMIT = 1000
WRAPPED_FLOAT_INDEX_LIMIT = 50

# Certificate Output
CERTIFICATE_BEGIN = "--- certificate ---"
CERTIFICATE_END = "--- summary ---"
CERTIFICATE_INDENT = 2

# SVG Plot Settings
SVG_WIDTH = 480
SVG_HEIGHT = 480
SVG_MARGIN = 40
SVG_MARK_RADIUS = 3
SVG_PRECISION = 3
SVG_CHAIN_SAMPLES = 4
SVG_EMPTY_EXTENT = 1
SVG_COLORS = {
    "axis": "#757575",
    "cone": "#BDBDBD",
    "split": "#366092",
    "limit": "#F44336",
    "chain": "#4CAF50",
    "text": "#212121"
}

# Verdict Table Formatting
REPORT_HEADER_FORMATTING = {
    "bold": True,
    "background_color": "366092",
    "font_color": "FFFFFF",
    "alignment": "center"
}
REPORT_HEADER_ALIGNMENTS = ("left", "center", "right")
REPORT_FAILED_FONT_COLOR = "C00000"
REPORT_MIN_COLUMN_WIDTH = 10
REPORT_MAX_COLUMN_WIDTH = 60

# Exit Codes
EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_UNSUPPORTED = 2

# Error Messages
ERROR_MESSAGES = {
    "no_model": "Give a model file or --catalog NAME.",
    "file_not_found": "Model file does not exist.",
    "parse_error": "Model file could not be parsed.",
    "unknown_catalog": "Unknown catalog entry.",
    "unknown_transitions": "Unknown transition set or rule.",
    "unknown_chain": "Unknown chain.",
    "unsupported": "Construct outside the decided fragment.",
    "generation_failed": "Catalog generator could not build an exact surrogate.",
    "invalid_input": "Invalid input."
}

# Success Messages
SUCCESS_MESSAGES = {
    "model_saved": "Model written successfully!",
    "plot_saved": "Plot written successfully!",
    "table_saved": "Verdict table written successfully!"
}
