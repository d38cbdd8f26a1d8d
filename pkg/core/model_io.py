#!/usr/bin/env python3
"""
Model file manager for the MBS Checker.

This module handles loading, saving, and validating model documents and
the catalog configuration file.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from config.settings import (
    DEFAULT_CATALOG_CONFIG_FILE, MODEL_ENCODING, MODEL_FORMAT, REPORT_HEADER_ALIGNMENTS,
    REPORT_HEADER_FORMATTING, SAMPLE_LIMIT
)
from core.descriptors import sequence_from_dict
from core.errors import DomainError, ModelParseError
from core.families import family_from_dict
from core.geometry import Point4
from core.histories import chain_from_dict
from core.mbs_model import (
    ExplicitSplitting, IndexedSplitting, LimitDeclaration, MbsModel, Splitting
)


def _point(text: Any, path: str) -> Point4:
    try:
        return Point4.parse(text)
    except (TypeError, ValueError) as e:
        raise ModelParseError(f"Bad point: {e}", path=path)


def _declaration(data: Dict[str, Any], path: str) -> LimitDeclaration:
    if not isinstance(data, dict) or "limit" not in data or "sequence" not in data:
        raise ModelParseError("A limit needs 'limit' and 'sequence'", path=path)
    return LimitDeclaration(_point(data["limit"], f"{path}.limit"),
                            sequence_from_dict(data["sequence"]))


class ModelFileManager:
    """Manages model documents and the catalog configuration."""

    def __init__(self):
        """Initialize the model file manager."""
        self.logger = logging.getLogger(__name__)

    def load_model(self, model_path: Path) -> MbsModel:
        """
        Load a model from a JSON document.

        Args:
            model_path: Path to the model file

        Returns:
            Parsed MbsModel

        Raises:
            FileNotFoundError: If the model file doesn't exist
            ModelParseError: If the document is not valid JSON or not a valid model
        """
        try:
            self.logger.info(f"Loading model from: {model_path}")

            if not model_path.exists():
                raise FileNotFoundError(f"Model file not found: {model_path}")

            text = model_path.read_text(encoding=MODEL_ENCODING)
            model = self.parse_model(text, str(model_path))

            self.logger.info(f"Model '{model.name}' loaded successfully")
            return model

        except Exception as e:
            self.logger.error(f"Error loading model: {str(e)}")
            raise

    def parse_model(self, text: str, source: str = "") -> MbsModel:
        """
        Parse a model document from text.

        Raises:
            ModelParseError: With the line and column of a JSON syntax error
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ModelParseError(f"Invalid JSON: {e.msg}", e.lineno, e.colno, source)
        return self.model_from_dict(data)

    def save_model(self, model: MbsModel, model_path: Path):
        """
        Save a model to a JSON document.

        Args:
            model: Model to save
            model_path: Path where to save the model

        Raises:
            OSError: If the file cannot be written
        """
        try:
            self.logger.info(f"Saving model to: {model_path}")

            model_path.parent.mkdir(parents=True, exist_ok=True)
            model_path.write_text(self.dump_model(model), encoding=MODEL_ENCODING)

            self.logger.info("Model saved successfully")

        except Exception as e:
            self.logger.error(f"Error saving model: {str(e)}")
            raise

    def dump_model(self, model: MbsModel) -> str:
        return json.dumps(self.model_to_dict(model), indent=4, sort_keys=True, ensure_ascii=False) + "\n"

    def model_to_dict(self, model: MbsModel) -> Dict[str, Any]:
        transitions = {
            name: [{"at": x.to_text(), "scenario": str(sigma), "outcome": str(outcome)}
                   for x, sigma, outcome in entries]
            for name, entries in model.transitions.items()
        }
        return {
            "format": MODEL_FORMAT,
            "name": model.name,
            "scenarios": model.family.to_dict(),
            "splitting": model.splitting.to_dict(),
            "chains": {name: chain.to_dict() for name, chain in model.chains.items()},
            "transitions": transitions,
            "annotations": model.annotations,
        }

    def model_from_dict(self, data: Any) -> MbsModel:
        """
        Build a model from a parsed document.

        Raises:
            ModelParseError: If a section is missing or malformed
        """
        if not isinstance(data, dict):
            raise ModelParseError("A model document must be a JSON object")
        if data.get("format", MODEL_FORMAT) != MODEL_FORMAT:
            raise ModelParseError(f"Unsupported format {data.get('format')!r}, expected {MODEL_FORMAT}",
                                  path="format")
        for key in ("name", "scenarios", "splitting"):
            if key not in data:
                raise ModelParseError(f"Missing required '{key}' field", path=key)
        try:
            family = family_from_dict(data["scenarios"])
            splitting = self._splitting(data["splitting"])
            chains = {name: chain_from_dict(chain, name)
                      for name, chain in data.get("chains", {}).items()}
            transitions = {name: self._transitions(entries, f"transitions.{name}")
                           for name, entries in data.get("transitions", {}).items()}
        except DomainError as e:
            raise ModelParseError(str(e))
        annotations = data.get("annotations", {})
        if not isinstance(annotations, dict):
            raise ModelParseError("'annotations' must be an object", path="annotations")
        return MbsModel(str(data["name"]), family, splitting, annotations, chains, transitions)

    def _splitting(self, data: Any) -> Splitting:
        if not isinstance(data, dict):
            raise ModelParseError("'splitting' must be an object", path="splitting")
        if "indexed" in data:
            limits = [_declaration(d, f"splitting.limits[{i}]")
                      for i, d in enumerate(data.get("limits", []))]
            return IndexedSplitting(sequence_from_dict(data["indexed"]), limits,
                                    int(data.get("samples", SAMPLE_LIMIT)))
        if "pairs" not in data:
            raise ModelParseError("'splitting' needs 'pairs' or 'indexed'", path="splitting")
        pairs = {}
        for i, entry in enumerate(data["pairs"]):
            path = f"splitting.pairs[{i}]"
            key = self._pair(entry, path)
            pairs[key] = [_point(p, f"{path}.points") for p in entry.get("points", [])]
        limits: Dict[frozenset, List[LimitDeclaration]] = {}
        for i, entry in enumerate(data.get("limits", [])):
            path = f"splitting.limits[{i}]"
            key = self._pair(entry, path)
            limits[key] = [_declaration(d, f"{path}.declarations")
                           for d in entry.get("declarations", [])]
        return ExplicitSplitting(pairs, limits)

    def _pair(self, entry: Any, path: str) -> frozenset:
        if not isinstance(entry, dict) or not isinstance(entry.get("scenarios"), list):
            raise ModelParseError("Each pair needs a 'scenarios' list", path=path)
        # a one-element key is kept so that validation can report it
        return frozenset(str(s) for s in entry["scenarios"])

    def _transitions(self, entries: Any, path: str) -> list:
        if not isinstance(entries, list):
            raise ModelParseError("A transition set must be a list", path=path)
        out = []
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict) or not {"at", "scenario", "outcome"} <= set(entry):
                raise ModelParseError("A transition needs 'at', 'scenario' and 'outcome'",
                                      path=f"{path}[{i}]")
            out.append((_point(entry["at"], f"{path}[{i}].at"), str(entry["scenario"]),
                        str(entry["outcome"])))
        return out

    # --- catalog configuration ---------------------------------------------

    def get_default_catalog_config(self) -> Dict[str, Any]:
        """
        Get default catalog configuration.

        Returns:
            Default generator parameters and report header formatting
        """
        from core.catalog import CATALOG
        return {
            "catalog": {name: dict(entry.defaults) for name, entry in CATALOG.items()},
            "header_formatting": dict(REPORT_HEADER_FORMATTING),
        }

    def load_catalog_config(self, config_path: Optional[Path] = None) -> Dict[str, Any]:
        """
        Load the catalog configuration from file or return built-in defaults.

        Returns:
            Catalog configuration dictionary
        """
        config_path = config_path or DEFAULT_CATALOG_CONFIG_FILE
        try:
            if config_path.exists():
                self.logger.info(f"Loading catalog configuration from: {config_path}")
                config = json.loads(config_path.read_text(encoding=MODEL_ENCODING))
                self.validate_catalog_config(config)
                return config
            else:
                self.logger.info("No catalog config file found, using built-in defaults")
                return self.get_default_catalog_config()
        except Exception as e:
            self.logger.warning(f"Error loading catalog config: {str(e)}, using built-in defaults")
            return self.get_default_catalog_config()

    def validate_catalog_config(self, config: Dict[str, Any]):
        """
        Validate a catalog configuration dictionary.

        Raises:
            ValueError: If the configuration is invalid
        """
        try:
            if not isinstance(config, dict):
                raise ValueError("Configuration must be a dictionary")

            catalog = config.get("catalog", {})
            if not isinstance(catalog, dict):
                raise ValueError("'catalog' must be a dictionary")
            for name, params in catalog.items():
                if not isinstance(params, dict):
                    raise ValueError(f"Parameters of '{name}' must be a dictionary")

            problems = header_problems(config.get("header_formatting", {}))
            if problems:
                raise ValueError("; ".join(problems))

            self.logger.debug("Catalog configuration validation passed")

        except Exception as e:
            self.logger.error(f"Catalog configuration validation failed: {str(e)}")
            raise ValueError(f"Invalid configuration: {str(e)}")


_HEX_COLOR = re.compile(r"[0-9A-Fa-f]{6}")

# field -> (accepts, what it takes)
_HEADER_FIELDS: Dict[str, Tuple[Callable[[Any], bool], str]] = {
    "bold": (lambda v: isinstance(v, bool), "true or false"),
    "background_color": (lambda v: isinstance(v, str) and bool(_HEX_COLOR.fullmatch(v)),
                         "six hex digits, e.g. 366092"),
    "font_color": (lambda v: isinstance(v, str) and bool(_HEX_COLOR.fullmatch(v)),
                   "six hex digits, e.g. FFFFFF"),
    "alignment": (lambda v: v in REPORT_HEADER_ALIGNMENTS,
                  f"one of {', '.join(REPORT_HEADER_ALIGNMENTS)}"),
}


def header_problems(header: Any) -> List[str]:
    """Everything wrong with a header_formatting block; empty when it is usable."""
    if not isinstance(header, dict):
        return ["'header_formatting' must be a dictionary"]
    problems = []
    for key, value in header.items():
        if key not in _HEADER_FIELDS:
            problems.append(f"unknown header setting '{key}'")
            continue
        accepts, takes = _HEADER_FIELDS[key]
        if not accepts(value):
            problems.append(f"header '{key}' takes {takes}, got {value!r}")
    return problems
