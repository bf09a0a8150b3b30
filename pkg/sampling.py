# sampling.py
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, TypeVar

from iis_core import SymmetricParams, is_generic
from symmetry_cases import DegenerateCase, on_case_boundary

T = TypeVar("T")
R = TypeVar("R")


def _off_boundary(p: SymmetricParams) -> bool:
    try:
        return not on_case_boundary(p)
    except DegenerateCase:
        return True


def sample_params(rng: random.Random, height: int) -> SymmetricParams:
    """Rationals p/q with 1 <= p, q <= height, rejected until valid, generic and off the case boundaries."""
    if height < 2:
        raise ValueError("height must be at least 2 to leave room for generic tuples")
    while True:
        a, b, c, u = (Fraction(rng.randint(1, height), rng.randint(1, height)) for _ in range(4))
        if u >= a + b or a == b or 2 * u == a + b:
            continue
        p = SymmetricParams.of(a, b, c, u)
        if is_generic(p) and _off_boundary(p):
            return p


def seeded_samples(seed: int, count: int, height: int) -> list[SymmetricParams]:
    rng = random.Random(seed)
    return [sample_params(rng, height) for _ in range(count)]


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """fn over items, results in input order whatever the worker count."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))
