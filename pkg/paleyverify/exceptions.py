"""Errors raised by the verification library.

Every error carries the process exit code the management commands use when
it escapes a run: 2 for bad parameters, 3 for ambient-cap violations.
"""


class PaleyError(Exception):
    exit_code = 2


class InvalidParameters(PaleyError):
    pass


class NotPrime(PaleyError):
    pass


class AmbientTooLarge(PaleyError):
    exit_code = 3


class DivisionByZero(PaleyError, ZeroDivisionError):
    pass


class InvalidSubfieldDegree(PaleyError):
    pass


class NotInSubfield(PaleyError):
    pass


class OrderMismatch(PaleyError):
    pass


class ConjugatePair(PaleyError):
    pass


class VInBaseField(PaleyError):
    pass


class MixedOrders(PaleyError):
    pass


class ZeroModulus(PaleyError, ZeroDivisionError):
    pass


class FieldTowersIncompatible(PaleyError):
    pass


class ConjugateFactors(PaleyError):
    pass


class NotConjugateGroup(PaleyError):
    pass


class NotAVertex(PaleyError):
    pass


class TooLargeForExhaustive(PaleyError):
    pass


class RadicalMismatch(PaleyError):
    pass


class SearchExhausted(PaleyError):
    """No candidate survived a deterministic scan"""
