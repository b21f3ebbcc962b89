"""Bundled data."""

from importlib import resources

from .sample import Sample, parse_column


def component_failures() -> Sample:
    """Twenty component failure times; the largest, 0.485, is an outlier."""
    text = resources.files(__package__).joinpath("data/component_failures.csv").read_text()
    return parse_column(text.splitlines(), source="component_failures.csv")
