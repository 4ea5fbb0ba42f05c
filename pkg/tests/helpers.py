# tests/helpers.py - Small constructors shared by the test modules
from collections import Counter

from app.local_ring import LocalNum
from app.parsing import parse_expression


def expr(field, text):
    return parse_expression(text, field)


def pi(field, e=1):
    return LocalNum.pi_power(field, e)


def num(field, n):
    return LocalNum.from_int(field, n)


def divides(denominator, allowed):
    """Multiset inclusion of denominator factors."""
    have, limit = Counter(denominator), Counter(allowed)
    return all(have[f] <= limit[f] for f in have)
