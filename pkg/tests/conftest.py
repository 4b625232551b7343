import math

import pytest

from gausszig import build_ziggurat_tables
from gausszig.sources import UniformSource


def adaptive_simpson(f, a, b, tol=1e-13, depth=60):
    """Independent quadrature oracle, deliberately not sharing code with
    the production special functions."""

    def simpson(fa, fm, fb, a_, b_):
        return (b_ - a_) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a_, b_, fa, fm, fb, whole, tol_, depth_):
        m = 0.5 * (a_ + b_)
        lm, rm = 0.5 * (a_ + m), 0.5 * (m + b_)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a_, m)
        right = simpson(fm, frm, fb, m, b_)
        if depth_ <= 0 or abs(left + right - whole) < 15.0 * tol_:
            return left + right + (left + right - whole) / 15.0
        return (recurse(a_, m, fa, flm, fm, left, 0.5 * tol_, depth_ - 1)
                + recurse(m, b_, fm, frm, fb, right, 0.5 * tol_, depth_ - 1))

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)


def gauss_tail_quadrature(r: float) -> float:
    """Area of exp(-x^2/2) beyond r, by quadrature out to negligible mass."""
    return adaptive_simpson(lambda x: math.exp(-0.5 * x * x), r, r + 40.0)


class CountingSource(UniformSource):
    """Wraps a source and counts u64 draws."""

    source_id = "counting"

    def __init__(self, inner):
        self.inner = inner
        self.draws = 0

    def next_u64(self) -> int:
        self.draws += 1
        return self.inner.next_u64()


@pytest.fixture(scope="session")
def tables128():
    return build_ziggurat_tables(128)


@pytest.fixture(scope="session")
def tables256():
    return build_ziggurat_tables(256)
