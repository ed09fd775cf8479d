import math
import random

import pytest

from nullgeo.errors import EvalDomainError
from nullgeo.jets import (ELEMENTARY, Jet2, jet_combine, jet_const,
                          jet_elementary, jet_var)


def at(v, dx=0.0, dy=0.0, dxx=0.0, dxy=0.0, dyy=0.0):
    return Jet2(v, dx, dy, dxx, dxy, dyy)


def assert_close(a: Jet2, b: Jet2, tol=1e-12):
    for name in ("v", "dx", "dy", "dxx", "dxy", "dyy"):
        assert getattr(a, name) == pytest.approx(getattr(b, name), abs=tol), name


class TestSeeds:
    def test_x_seed(self):
        assert jet_var("x", 0.5) == at(0.5, dx=1.0)

    def test_y_seed(self):
        assert jet_var("y", 2.0) == at(2.0, dy=1.0)

    def test_x_at_zero(self):
        assert jet_var("x", 0.0) == at(0.0, dx=1.0)


class TestCombine:
    def test_square(self):
        out = jet_combine("mul", jet_var("x", 2.0), jet_var("x", 2.0))
        assert out == at(4.0, dx=4.0, dxx=2.0)

    def test_bilinear(self):
        out = jet_combine("mul", jet_var("x", 3.0), jet_var("y", 5.0))
        assert out == at(15.0, dx=5.0, dy=3.0, dxy=1.0)

    def test_quotient(self):
        out = jet_combine("div", jet_var("x", 1.0), jet_var("y", 2.0))
        assert_close(out, at(0.5, dx=0.5, dy=-0.25, dxy=-0.25, dyy=0.25))

    def test_division_by_zero(self):
        with pytest.raises(EvalDomainError):
            jet_combine("div", jet_const(1.0), jet_var("y", 0.0))


class TestElementary:
    def test_sinh_at_zero(self):
        assert jet_elementary("sinh", jet_var("x", 0.0)) == at(0.0, dx=1.0)

    def test_cosh_at_zero(self):
        assert jet_elementary("cosh", jet_var("x", 0.0)) == at(1.0, dxx=1.0)

    def test_exp(self):
        e = math.e
        assert_close(jet_elementary("exp", jet_var("x", 1.0)),
                     at(e, dx=e, dxx=e), tol=1e-12)

    def test_log_domain(self):
        with pytest.raises(EvalDomainError):
            jet_elementary("log", jet_var("x", -1.0))

    def test_sqrt_domain(self):
        with pytest.raises(EvalDomainError):
            jet_elementary("sqrt", jet_var("x", 0.0))


class TestPow:
    def test_integer_negative_base(self):
        out = jet_var("x", -2.0) ** 3
        assert out == at(-8.0, dx=12.0, dxx=-12.0)

    def test_integer_beyond_repeated_range(self):
        out = jet_var("x", 2.0) ** 12
        assert out.v == pytest.approx(4096.0)
        assert out.dx == pytest.approx(12 * 2.0 ** 11)
        assert out.dxx == pytest.approx(132 * 2.0 ** 10)

    def test_fractional_needs_positive_base(self):
        with pytest.raises(EvalDomainError):
            jet_var("x", -1.0) ** 0.5

    def test_jet_exponent(self):
        out = jet_var("x", 2.0) ** jet_var("y", 3.0)
        assert out.v == pytest.approx(8.0)
        assert out.dx == pytest.approx(12.0)            # d/dx x^y = y x^{y-1}
        assert out.dy == pytest.approx(8.0 * math.log(2.0))


# --- finite-difference oracle over random expression trees ------------------

UNARY_SAFE = ("sin", "cos", "sinh", "cosh", "exp", "tanh", "neg")
BIN_OPS = ("add", "sub", "mul")


def random_tree(rng: random.Random, depth: int):
    """A function (Jet2, Jet2) -> Jet2 built from safe operations."""
    if depth == 0 or rng.random() < 0.25:
        kind = rng.randrange(3)
        if kind == 0:
            c = rng.uniform(-2.0, 2.0)
            return lambda x, y: jet_const(c)
        return (lambda x, y: x) if kind == 1 else (lambda x, y: y)
    if rng.random() < 0.5:
        fn = rng.choice(UNARY_SAFE)
        sub = random_tree(rng, depth - 1)
        return lambda x, y: jet_elementary(fn, sub(x, y))
    op = rng.choice(BIN_OPS)
    left = random_tree(rng, depth - 1)
    right = random_tree(rng, depth - 1)
    return lambda x, y: jet_combine(op, left(x, y), right(x, y))


def eval_value(tree, u, v):
    return tree(jet_var("x", u), jet_var("y", v)).v


def fd1(tree, u, v, du, dv, h):
    def d(step):
        return (eval_value(tree, u + step * du, v + step * dv)
                - eval_value(tree, u - step * du, v - step * dv)) / (2 * step)
    return (4.0 * d(h / 2) - d(h)) / 3.0


def fd2_diag(tree, u, v, du, dv, h):
    def d(step):
        return (eval_value(tree, u + step * du, v + step * dv)
                - 2.0 * eval_value(tree, u, v)
                + eval_value(tree, u - step * du, v - step * dv)) / step ** 2
    return (4.0 * d(h / 2) - d(h)) / 3.0


def test_jets_match_finite_differences_on_random_trees():
    rng = random.Random(987123)
    h = 1e-3
    checked = 0
    while checked < 1000:
        tree = random_tree(rng, rng.randint(1, 6))
        u, v = rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)
        jet = tree(jet_var("x", u), jet_var("y", v))
        mags = [abs(getattr(jet, n)) for n in ("v", "dx", "dy", "dxx", "dxy", "dyy")]
        if max(mags) > 1e3:  # steep trees make the oracle itself inaccurate
            continue
        checked += 1
        scale1 = max(1.0, abs(jet.dx), abs(jet.dy))
        assert fd1(tree, u, v, 1, 0, h) == pytest.approx(jet.dx, abs=1e-8 * scale1)
        assert fd1(tree, u, v, 0, 1, h) == pytest.approx(jet.dy, abs=1e-8 * scale1)
        scale2 = max(1.0, abs(jet.dxx), abs(jet.dyy), abs(jet.dxy))
        assert fd2_diag(tree, u, v, 1, 0, h) == pytest.approx(jet.dxx, abs=1e-6 * scale2)
        assert fd2_diag(tree, u, v, 0, 1, h) == pytest.approx(jet.dyy, abs=1e-6 * scale2)
        # mixed partial via the diagonal trick: f(x+t, y+t) pulls in 2*dxy
        diag = fd2_diag(tree, u, v, 1, 1, h)
        assert diag == pytest.approx(jet.dxx + 2 * jet.dxy + jet.dyy,
                                     abs=2e-6 * scale2)


def test_variable_swap_symmetry():
    rng = random.Random(555)
    for _ in range(200):
        tree = random_tree(rng, rng.randint(1, 5))
        u, v = rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)
        direct = tree(jet_var("x", u), jet_var("y", v))
        # swap the roles of the variables in the evaluation
        swapped = tree(jet_var("y", u), jet_var("x", v))
        assert swapped.v == pytest.approx(direct.v, abs=1e-12)
        assert swapped.dy == pytest.approx(direct.dx, abs=1e-12)
        assert swapped.dx == pytest.approx(direct.dy, abs=1e-12)
        assert swapped.dyy == pytest.approx(direct.dxx, abs=1e-12)
        assert swapped.dxx == pytest.approx(direct.dyy, abs=1e-12)
        assert swapped.dxy == pytest.approx(direct.dxy, abs=1e-12)


def test_every_elementary_function_has_a_rule():
    x = jet_var("x", 0.3)
    for name in ELEMENTARY:
        out = jet_elementary(name, x)
        assert isinstance(out, Jet2)
