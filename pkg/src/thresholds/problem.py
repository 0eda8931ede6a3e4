"""
Coupled threshold problems
src/thresholds/problem.py
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction

from common.errors import PreconditionError, ValidationError
from common.log import get_logger
from fans.flags import coordinate_flags
from lattice import LatticeVector
from okounkov.divisors import make_boundary

logger = get_logger(__name__)

MODULE = 'thresholds'

# Environment Variables
THRESHOLD_MAX_RANK = int(os.environ.get('THRESHOLD_MAX_RANK', '4'))
THRESHOLD_MAX_TERMS = int(os.environ.get('THRESHOLD_MAX_TERMS', '8'))


@dataclass(frozen=True, eq=False)
class Term:
    weight: Fraction
    divisor: object


@dataclass(frozen=True, eq=False)
class CoupledProblem:
    fan: object
    boundary: object
    terms: tuple[Term, ...]
    candidates: tuple[LatticeVector, ...]
    flags: tuple = ()

    @property
    def weights(self):
        return tuple(t.weight for t in self.terms)

    def with_weights(self, weights):
        terms = tuple(Term(Fraction(w), t.divisor) for w, t in zip(weights, self.terms))
        _check_terms(self.fan, terms)
        return replace(self, terms=terms)

    def scaled(self, c):
        return self.with_weights([Fraction(c) * w for w in self.weights])

    def subproblem(self, indices):
        return replace(self, terms=tuple(self.terms[i] for i in indices))


def _check_terms(fan, terms):
    if not terms:
        raise ValidationError('MalformedInput', 'a coupled problem needs at least one term', MODULE)
    if len(terms) > THRESHOLD_MAX_TERMS:
        raise ValidationError('TooLarge', f"{len(terms)} terms exceed THRESHOLD_MAX_TERMS={THRESHOLD_MAX_TERMS}", MODULE)
    for i, term in enumerate(terms):
        if term.weight <= 0:
            raise ValidationError('InvalidWeight', f"term {i} has weight {term.weight} <= 0", MODULE)
        if term.divisor.fan != fan:
            raise ValidationError('MismatchedTerms', f"term {i} lives on another fan", MODULE)
        if not term.divisor.is_big:
            raise PreconditionError('NotBig', f"term {i} is not big", MODULE)


def default_candidates(fan, flags):
    """Rays of the fan followed by the first vector of every flag."""
    candidates = list(fan.rays)
    for flag in flags:
        v = flag.vectors[0]
        if v not in candidates:
            candidates.append(v)
    return candidates


def make_problem(fan, terms, boundary=None, candidates=None, flags=None):
    """Validates and assembles a problem.

    terms is a list of (weight, divisor). flags=None builds every coordinate
    flag of the fan; pass [] to skip flag statistics.
    """
    if fan.rank > THRESHOLD_MAX_RANK:
        raise ValidationError('TooLarge', f"rank {fan.rank} exceeds THRESHOLD_MAX_RANK={THRESHOLD_MAX_RANK}", MODULE)
    built = tuple(Term(Fraction(w), d) for w, d in terms)
    _check_terms(fan, built)
    if boundary is None:
        boundary = make_boundary(fan)

    if flags is None:
        flags = coordinate_flags(fan)
    for flag in flags:
        if flag.base_fan != fan:
            raise ValidationError('MalformedInput', 'flag built on another fan', MODULE)

    if candidates is None:
        candidates = default_candidates(fan, flags)
    vectors = []
    for v in candidates:
        v = v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
        if len(v) != fan.rank:
            raise ValidationError('RankMismatch', f"candidate {list(v.coords)} in a rank-{fan.rank} fan", MODULE)
        if v.is_zero() or not v.primitive:
            raise PreconditionError('NotPrimitive', f"candidate {list(v.coords)} is not primitive", MODULE)
        if v not in vectors:
            vectors.append(v)
    if not vectors:
        raise ValidationError('MalformedInput', 'empty candidate list', MODULE)

    logger.info("Problem: rank=%d terms=%d candidates=%d flags=%d", fan.rank, len(built), len(vectors), len(flags))
    return CoupledProblem(fan=fan, boundary=boundary, terms=built, candidates=tuple(vectors), flags=tuple(flags))
