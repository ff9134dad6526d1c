"""Tree decompositions of k-outerplanar graphs from stripping layers,
spanning trees and Tutte decompositions, plus a small MSOL evaluator."""

__version__ = "0.1.0"
