"""annaforge: metamorphic testing of Java static analyzers via annotation injection.

The pipeline: load a registry of annotation metadata, parse a seed corpus of
Java sources, enumerate every legal injection site, materialize one-annotation
mutants, run an analyzer on baseline/mutant/processed program sets, and check
three metamorphic relations over the normalized reports.
"""

__version__ = "0.1.0"
