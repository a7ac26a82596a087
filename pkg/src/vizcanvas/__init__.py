"""Hypothesis-to-chart canvas engine.

Turns natural-language hypotheses into validated chart specifications over
an ingested tabular dataset, keeps the results on a freeform canvas with
provenance, and serves the whole loop over HTTP.
"""

__version__ = "0.1.0"
