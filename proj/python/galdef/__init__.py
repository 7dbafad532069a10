"""Obstruction checks for residual Galois representations of newforms.

Forms and galleries are accepted as parsed JSON, JSON text or a path to a
JSON file. Results are returned as parsed JSON.
"""

import json
import os

from . import _core
from ._core import GaldefError, sturm_bound

__all__ = ["GaldefError", "check", "scan", "levels", "congruences", "h2bound", "sturm_bound", "factor_mod_p"]


def _text(doc):
    if doc is None:
        return None
    if isinstance(doc, (dict, list)):
        return json.dumps(doc)
    if isinstance(doc, os.PathLike) or (isinstance(doc, str) and not doc.lstrip().startswith(("{", "["))):
        with open(doc, encoding="utf-8") as fh:
            return fh.read()
    return doc


def check(form, ell, gallery=None, extra_primes=(), assume_irreducible=True, seed=0x5EED):
    return json.loads(_core.check(_text(form), ell, _text(gallery), set(extra_primes), assume_irreducible, seed))


def scan(form, ell_max, gallery=None, extra_primes=(), assume_irreducible=True, seed=0x5EED):
    return json.loads(_core.scan(_text(form), ell_max, _text(gallery), set(extra_primes), assume_irreducible, seed))


def levels(form, ell, p_max=100, alpha_budget=1):
    return json.loads(_core.levels(_text(form), ell, p_max, alpha_budget))


def congruences(form, gallery, ell_max, seed=0x5EED):
    return json.loads(_core.congruences(_text(form), _text(gallery), ell_max, seed))


def h2bound(form, ell, level):
    return json.loads(_core.h2bound(_text(form), ell, level))


def factor_mod_p(coeffs, p):
    """Factor an integer polynomial (constant term first) modulo p."""
    return [(list(f), m) for f, m in _core.factor_mod_p(list(coeffs), p)]
