"""Exact realizations of Lie algebras by linear vector fields, their Cuntz-algebra
analogues, and verifiers for the identities they satisfy."""

__version__ = "0.1.0"
