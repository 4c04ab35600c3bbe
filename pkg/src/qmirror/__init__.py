"""Reversible single-qubit measurements, fuzzy-sphere geometry and the
sequent logics of the insider (P), quantum (G) and classical (A) observers."""

__version__ = "0.1.0"
