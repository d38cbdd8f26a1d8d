#!/usr/bin/env python3
"""
Main controller for the MBS Checker.

This module resolves the subject of a command (a model file or a catalog
entry) and runs exactly one model or detector operation per verb, returning
the certificate and summary the entry point prints.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from config.settings import *
from core import catalog
from core.catalog import CatalogInstance, instance_from_model
from core.constructions import (
    cause_like_loci, check_min_gap_no_inffb, construct_inffb_from_finfb, locate_cone_boundary
)
from core.errors import CatalogLookupError, DomainError
from core.families import parse_family
from core.funny_business import (
    check_combinatorial_fb, check_eps_fb, check_finfb, check_inffb, check_postulate_A,
    check_postulate_B, recheck
)
from core.geometry import Point4
from core.histories import chain_compactness_witness, elementary_possibilities
from core.mbs_model import (
    EventClass, event_class, generated_choice_points, is_choice_point, leq_S, lt_S,
    same_event, slr_S, validate
)
from core.model_io import ModelFileManager
from core.report_writer import ReportWriter
from cli.views.svg_plot import SvgPlotter


@dataclass
class CommandResult:
    """What a verb produced: a certificate and summary, or a document to print as is."""

    certificate: Dict[str, Any] = field(default_factory=dict)
    summary: str = ""
    table: Optional[pd.DataFrame] = None
    document: Optional[str] = None


def parse_params(pairs: Sequence[str]) -> Dict[str, Any]:
    """Parse --param k=v pairs; integers and 'none' are converted."""
    params: Dict[str, Any] = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise DomainError(f"Parameters are written k=v, got {pair!r}")
        key, value = (part.strip() for part in pair.split("=", 1))
        if value.lower() == "none":
            params[key] = None
        elif value.lstrip("-").isdigit():
            params[key] = int(value)
        else:
            params[key] = value
    return params


class MainController:
    """Coordinates model loading, detectors and output."""

    def __init__(self, catalog_config_path: Optional[Path] = None):
        """
        Initialize the main controller.

        Args:
            catalog_config_path: Catalog configuration file (defaults from settings)
        """
        self.model_manager = ModelFileManager()
        self.catalog_config = self.model_manager.load_catalog_config(catalog_config_path)
        self.report_writer = ReportWriter(self.catalog_config.get("header_formatting"))

        self.logger = logging.getLogger(__name__)
        self.logger.info("Main controller initialized")

    # --- subjects ---------------------------------------------------------

    def load_instance(self, model_path: Optional[str] = None, catalog_name: Optional[str] = None,
                      family: Optional[str] = None,
                      params: Optional[Dict[str, Any]] = None) -> CatalogInstance:
        """
        Resolve the subject of a command.

        Raises:
            DomainError: If neither or both of a model path and a catalog name are given
            CatalogLookupError: For an unknown catalog name
            ModelParseError: For a malformed model file
        """
        try:
            if (model_path is None) == (catalog_name is None):
                raise DomainError(ERROR_MESSAGES["no_model"])
            if catalog_name is not None:
                params = dict(params or {})
                if family is not None:
                    params["family"] = family
                return self.generate(catalog_name, params)
            model = self.model_manager.load_model(Path(model_path))
            if family is not None:
                model = dataclasses.replace(model, family=parse_family(family))
            return instance_from_model(model)
        except Exception as e:
            self.logger.error(f"Error loading subject: {str(e)}")
            raise

    def generate(self, name: str, params: Optional[Dict[str, Any]] = None) -> CatalogInstance:
        defaults = self.catalog_config.get("catalog", {}).get(name, {})
        merged = {**defaults, **(params or {})}
        self.logger.info(f"Generating catalog entry {name} with {merged}")
        return catalog.generate(name, **merged)

    def _subject(self, instance: CatalogInstance, f: Optional[str]):
        """Transition set named f, or the symbolic point family with rule f."""
        if f is None:
            raise DomainError("This command needs --f (a transition set or rule)")
        if instance.model is not None and f in instance.model.transitions:
            return instance.transition_set(f), None
        if instance.points is not None:
            return instance.points, instance.rule(f)
        return instance.transition_set(f), None

    def _event(self, instance: CatalogInstance, text: str) -> EventClass:
        """Event written as POINT@SCENARIO, e.g. 0,1@sigma."""
        if "@" not in text:
            raise DomainError(f"Events are written POINT@SCENARIO, got {text!r}")
        point, scenario = text.rsplit("@", 1)
        return event_class(Point4.parse(point), scenario, instance.model)

    # --- model verbs ------------------------------------------------------

    def validate(self, instance: CatalogInstance) -> CommandResult:
        report = validate(instance.model)
        return CommandResult(report.to_dict(), report.summary())

    def order(self, instance: CatalogInstance, a: str, b: str) -> CommandResult:
        model = instance.model
        family = model.family
        ea, eb = self._event(instance, a), self._event(instance, b)
        certificate = {"a": ea.to_dict(family), "b": eb.to_dict(family),
                       "same_event": same_event(ea, eb, model),
                       "a_leq_b": leq_S(ea, eb, model), "b_leq_a": leq_S(eb, ea, model),
                       "a_lt_b": lt_S(ea, eb, model), "b_lt_a": lt_S(eb, ea, model)}
        if certificate["same_event"]:
            relation = "="
        elif certificate["a_lt_b"]:
            relation = "<"
        elif certificate["b_lt_a"]:
            relation = ">"
        else:
            relation = "incomparable with"
        summary = f"{ea.describe(family)} {relation} {eb.describe(family)}"
        return CommandResult(certificate, summary)

    def slr(self, instance: CatalogInstance, a: str, b: str) -> CommandResult:
        model = instance.model
        family = model.family
        ea, eb = self._event(instance, a), self._event(instance, b)
        holds = slr_S(ea, eb, model)
        certificate = {"a": ea.to_dict(family), "b": eb.to_dict(family), "slr": holds}
        summary = (f"{ea.describe(family)} and {eb.describe(family)} are "
                   f"{'' if holds else 'not '}space-like related")
        return CommandResult(certificate, summary)

    def choice_points(self, instance: CatalogInstance, sigma: str, eta: str,
                      at: Optional[str] = None) -> CommandResult:
        model = instance.model
        family = model.family
        events = generated_choice_points(sigma, eta, model)
        certificate: Dict[str, Any] = {"scenarios": [sigma, eta],
                                       "generated": [e.to_dict(family) for e in events]}
        summary = f"{len(events)} generated choice point(s) of {sigma}/{eta}"
        if at is not None:
            e = event_class(Point4.parse(at), sigma, model)
            chosen = is_choice_point(e, sigma, eta, model)
            generated = any(same_event(e, g, model) for g in events)
            certificate["query"] = {"event": e.to_dict(family), "choice_point": chosen,
                                    "generated": generated}
            summary += (f"; {e.describe(family)} is {'' if chosen else 'not '}a choice point"
                        f" and {'' if generated else 'not '}generated")
        return CommandResult(certificate, summary)

    def possibilities(self, instance: CatalogInstance, at: str) -> CommandResult:
        family = instance.model.family
        e = self._event(instance, at)
        cells = elementary_possibilities(e, instance.model)
        certificate = {"event": e.to_dict(family),
                       "possibilities": [c.to_dict(family) for c in cells]}
        summary = f"{len(cells)} elementary possibilit{'y' if len(cells) == 1 else 'ies'} at {e.describe(family)}"
        return CommandResult(certificate, summary)

    def chain(self, instance: CatalogInstance, name: str) -> CommandResult:
        model = instance.model
        if name not in model.chains:
            raise CatalogLookupError(name, model.chains, "chain")
        verdict = chain_compactness_witness(None, model, model.chains[name])
        return CommandResult(verdict.to_dict(), verdict.summary)

    # --- detectors --------------------------------------------------------

    def finfb(self, instance: CatalogInstance, f: str, jobs: int = DEFAULT_JOBS,
              prune: bool = True) -> CommandResult:
        T = instance.transition_set(f)
        verdict = check_finfb(T, prune=prune, jobs=jobs)
        certificate = {**verdict.to_dict(), "rechecked": recheck(verdict, T)}
        return CommandResult(certificate, verdict.summary)

    def inffb(self, instance: CatalogInstance, f: str) -> CommandResult:
        subject, rule = self._subject(instance, f)
        verdict = check_inffb(subject, rule)
        certificate = {**verdict.to_dict(), "rechecked": recheck(verdict, subject, rule)}
        return CommandResult(certificate, verdict.summary)

    def cfb(self, instance: CatalogInstance, f: str) -> CommandResult:
        subject, rule = self._subject(instance, f)
        verdict = check_combinatorial_fb(subject, rule)
        certificate = {**verdict.to_dict(), "rechecked": recheck(verdict, subject, rule)}
        return CommandResult(certificate, verdict.summary)

    def epsfb(self, instance: CatalogInstance, f: str,
              deltas: Optional[List[str]] = None) -> CommandResult:
        subject, rule = self._subject(instance, f)
        verdict = check_eps_fb(subject, rule, deltas)
        return CommandResult(verdict.to_dict(), verdict.summary)

    def postulate_a(self, instance: CatalogInstance, f: str,
                    deltas: Optional[List[str]] = None) -> CommandResult:
        subject, rule = self._subject(instance, f)
        verdict = check_postulate_A(subject, rule, deltas=deltas)
        return CommandResult(verdict.to_dict(), verdict.summary)

    def postulate_b(self, instance: CatalogInstance, f: Optional[str] = None) -> CommandResult:
        """The instance's X set, or the points of transition set f."""
        if f is None:
            if instance.x_set is None:
                raise DomainError(f"{instance.name} has no X set; name a transition set with --f")
            verdict = check_postulate_B(instance.x_set)
        else:
            T = instance.transition_set(f)
            verdict = check_postulate_B((T.structure, T.points))
        return CommandResult(verdict.to_dict(), verdict.summary)

    def locate(self, instance: CatalogInstance, f: str, at: Optional[str] = None,
               deltas: Optional[List[str]] = None) -> CommandResult:
        subject, rule = self._subject(instance, f)
        if at is not None:
            a_star = Point4.parse(at)
        elif instance.points is not None and instance.points.sequence is not None:
            a_star = instance.points.sequence.point(instance.points.start)
        else:
            raise DomainError("Give the reduced-set point to start from with --at")
        result = locate_cone_boundary(subject, a_star, rule, deltas)
        return CommandResult(result.to_dict(), result.summary)

    def mingap(self, instance: CatalogInstance, f: str, delta: Optional[str] = None) -> CommandResult:
        subject, rule = self._subject(instance, f)
        if rule is None:
            raise DomainError("The minimum-gap check needs a symbolic point family")
        result = check_min_gap_no_inffb(subject, delta or DEFAULT_DELTAS[1], rule)
        return CommandResult(result.to_dict(), result.summary)

    def fin2inf(self, instance: CatalogInstance, f: str) -> CommandResult:
        subject, rule = self._subject(instance, f)
        verdict = None if rule is not None else check_finfb(subject)
        result = construct_inffb_from_finfb(subject, verdict, rule=rule)
        return CommandResult(result.to_dict(), result.summary)

    def loci(self, instance: CatalogInstance, f: str, point: str) -> CommandResult:
        T = instance.transition_set(f)
        result = cause_like_loci(point, T.structure)
        return CommandResult(result.to_dict(), result.summary)

    # --- catalog ----------------------------------------------------------

    def catalog_list(self) -> CommandResult:
        entries = []
        for name in catalog.catalog_names():
            if name == catalog.RANDOM_ENTRY:
                entries.append({"name": name, "defaults": catalog.RANDOM.defaults,
                                "provenance": catalog.RANDOM.provenance})
                continue
            entry = catalog.get_entry(name)
            entries.append({"name": name, "defaults": entry.defaults,
                            "provenance": entry.provenance, "expected": entry.expected})
        return CommandResult({"entries": entries}, f"{len(entries)} catalog entries")

    def catalog_gen(self, name: str, params: Optional[Dict[str, Any]] = None,
                    output: Optional[str] = None) -> CommandResult:
        instance = self.generate(name, params)
        if output is None:
            return CommandResult(document=self.model_manager.dump_model(instance.model))
        self.model_manager.save_model(instance.model, Path(output))
        certificate = {"entry": name, "model": instance.model.name, "output": output}
        return CommandResult(certificate, SUCCESS_MESSAGES["model_saved"])

    def catalog_check(self, names: Optional[List[str]] = None,
                      xlsx: Optional[str] = None) -> CommandResult:
        try:
            for name in names or ():
                catalog.get_entry(name)
            table = catalog.check_catalog(names or None)
            passed = int(table["passed"].sum())
            certificate = {"rows": table.to_dict(orient="records"), "passed": passed,
                           "total": len(table)}
            summary = f"{passed} of {len(table)} expected verdicts reproduced"
            if xlsx is not None:
                self.report_writer.save_verdict_table(table, Path(xlsx))
                summary += f"; {SUCCESS_MESSAGES['table_saved']}"
            return CommandResult(certificate, summary, table=table)
        except Exception as e:
            self.logger.error(f"Error checking catalog: {str(e)}")
            raise

    # --- plot -------------------------------------------------------------

    def plot(self, instance: CatalogInstance, output: Optional[str] = None) -> CommandResult:
        plotter = SvgPlotter(instance.model)
        if output is None:
            return CommandResult(document=plotter.render())
        plotter.save(Path(output))
        certificate = {"model": instance.model.name, "output": output,
                       "marks": plotter.mark_count()}
        return CommandResult(certificate, SUCCESS_MESSAGES["plot_saved"])

    def shutdown(self):
        """Cleanup resources."""
        self.logger.info("Main controller shutdown")
