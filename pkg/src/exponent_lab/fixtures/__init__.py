"""Catalog of printed exponent instantiations and the runner that checks them."""

from .runner import (
    Fixture,
    FixtureDefinitionError,
    FixtureOutcome,
    SuiteSummary,
    effective_domain,
    evaluate,
    expected_at,
    fixture_from_record,
    load_catalog,
    run_fixture,
    run_suite,
    select,
)

__all__ = [
    "Fixture", "FixtureDefinitionError", "FixtureOutcome", "SuiteSummary", "effective_domain",
    "evaluate", "expected_at", "fixture_from_record", "load_catalog", "run_fixture", "run_suite", "select",
]
