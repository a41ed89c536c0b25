from fractions import Fraction

from hypothesis import strategies as st

from algred.poly import Poly
from algred.scalars import Scalar

small = st.integers(-4, 4)
fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def scalars(draw, hbar=True):
    out = Scalar.of(0)
    for k in range(draw(st.integers(0, 2)) + 1 if hbar else 1):
        out = out + Scalar.of(draw(fracs), draw(fracs)) * Scalar.hbar(k)
    return out


@st.composite
def polys(draw, vars, max_degree=3, max_terms=5, hbar=True):
    n = len(vars)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, max_degree), min_size=n, max_size=n))
        while sum(exps) > max_degree:
            exps[exps.index(max(exps))] -= 1
        terms[tuple(exps)] = draw(scalars(hbar=hbar))
    return Poly(vars, terms)
