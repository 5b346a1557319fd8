from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from yokota.errors import ColorSyntaxError, PoleError
from yokota.qarith import (ColorSpec, QTables, RootContext, Tracked, loop_weight, parse_color,
                           qbinom, qbrace, qfact, qint, settle, solve, tracked_sum)

TOL = mpmath.mpf(10) ** -60


def close(x, y, tol=TOL):
    return abs(mpmath.mpc(x) - mpmath.mpc(y)) <= tol * max(1, abs(mpmath.mpc(y)))


@pytest.fixture(scope="module")
def c8():
    return RootContext(8)


# -- ColorSpec ---------------------------------------------------------------


@pytest.mark.parametrize("text, expected", [
    ("3/8 n + 3 e", ColorSpec(Fraction(3, 8), 0, 3)),
    ("3n/8 (+ 3ε)", ColorSpec(Fraction(3, 8), 0, 3)),
    ("n/3 - 6e", ColorSpec(Fraction(1, 3), 0, -6)),
    ("2/5n+1-2e", ColorSpec(Fraction(2, 5), 1, -2)),
    ("7", ColorSpec(0, 7, 0)),
    ("-1", ColorSpec(0, -1, 0)),
    ("n", ColorSpec(1, 0, 0)),
    ("e", ColorSpec(0, 0, 1)),
    (" 1/2 n - 1 + 4 eps ", ColorSpec(Fraction(1, 2), -1, 4)),
])
def test_parse_color(text, expected):
    assert parse_color(text) == expected


@pytest.mark.parametrize("bad", ["", "3x", "n n", "1/0n", "+", "3 e 4"])
def test_parse_color_rejects(bad):
    with pytest.raises((ColorSyntaxError, ZeroDivisionError)):
        parse_color(bad)


colors = st.builds(ColorSpec, st.fractions(min_value=-3, max_value=3, max_denominator=12),
                   st.integers(-20, 20), st.integers(-50, 50))


@given(colors)
def test_format_parse_roundtrip(c):
    assert parse_color(str(c)) == c


@given(colors)
def test_bar_involution(c):
    assert c.bar().bar() == c
    assert c + c.bar() == ColorSpec(1, -1, 0)


def test_bar_examples():
    a = parse_color("n/3")
    assert a.bar() == ColorSpec(Fraction(2, 3), -1, 0)
    assert parse_color("3n/8 + 3e").bar() == parse_color("5n/8 - 1 - 3e")


def test_color_equality_and_hash():
    a, b = ColorSpec(Fraction(1, 3), 0, 2), parse_color("n/3 + 2e")
    assert a == b and hash(a) == hash(b)
    assert a != ColorSpec(Fraction(1, 3), 0, 1)


def test_integer_at():
    assert parse_color("3n/8").is_integer_at(24)
    assert not parse_color("3n/8").is_integer_at(12)
    assert not parse_color("3n/8 + e").is_integer_at(24)


def test_value_full_precision():
    with mpmath.workdps(60):
        v = parse_color("n/3 + 2e").value(24, Fraction(1, 10**30))
        assert v == 8 + 2 * mpmath.mpf(10) ** -30


# -- context -------------------------------------------------------------------


def test_context_invariants(c8):
    with c8.working():
        assert abs(abs(c8.xi) ** 2 - 1) < mpmath.mpf(10) ** (-c8.precision + 5)
        assert abs(c8.xi ** 16 - 1) < mpmath.mpf(10) ** (-c8.precision + 5)


@pytest.mark.parametrize("kw", [dict(precision=20), dict(epsilon=0), dict(epsilon=Fraction(1, 10**70))])
def test_context_rejects(kw):
    with pytest.raises(ValueError):
        RootContext(8, **kw)


def test_context_rejects_small_n():
    with pytest.raises(ValueError):
        RootContext(1)


# -- brackets --------------------------------------------------------------


def test_qbrace_examples():
    c4 = RootContext(4)
    assert close(qbrace(0, c4), 0)
    assert close(qbrace(4, c4), 0)
    with c4.working():
        assert close(qbrace(1, c4), mpmath.mpc(0, mpmath.sqrt(2)))


def test_qbrace_complex_argument(c8):
    with c8.working():
        z = mpmath.mpc("0.3", "0.2")
        ref = mpmath.exp(1j * mpmath.pi * z / 8) - mpmath.exp(-1j * mpmath.pi * z / 8)
        assert close(qbrace(z, c8), ref)


def test_qint_examples():
    c5 = RootContext(5)
    assert close(qint(1, c5), 1)
    assert close(qint(0, c5), 0)
    with c5.working():
        assert close(qint(2, c5), 2 * mpmath.cos(mpmath.pi / 5))
        assert close(qint(2, c5), mpmath.sin(2 * mpmath.pi / 5) / mpmath.sin(mpmath.pi / 5))


def test_qfact_examples():
    c4 = RootContext(4)
    assert close(qfact(0, c4), 1)
    assert close(qfact(4, c4), 0)
    with c4.working():
        assert close(qfact(2, c4), -2 * mpmath.sqrt(2))
    with pytest.raises(ValueError):
        qfact(-1, c4)


@pytest.mark.parametrize("n", [5, 7, 12])
def test_qbrace_reflection_and_oddness(n):
    ctx = RootContext(n)
    for a in [Fraction(k, 3) for k in range(-9, 3 * n + 1)]:
        assert close(qbrace(a, ctx), qbrace(n - a, ctx))
        assert close(qbrace(-a, ctx), -qbrace(a, ctx))


@pytest.mark.parametrize("n", [5, 9, 16])
def test_factorial_reflection(n):
    ctx = RootContext(n)
    for k in range(n):
        assert close(qfact(k, ctx) * qfact(n - 1 - k, ctx), qfact(n - 1, ctx))


def test_qbinom_examples():
    c7 = RootContext(7)
    assert close(qbinom(3, 3, c7), 1)
    assert close(qbinom(6, 0, c7), 1)
    assert close(qbinom(5, 2, c7), qbinom(4, 1, c7))


@given(st.integers(5, 14), st.integers(0, 200), st.integers(0, 200), st.integers(-3, 3))
@settings(max_examples=60, deadline=None)
def test_qbinom_symmetries(n, i, j, m):
    # a perturbed generic pair: a = r + m e, b = a - k
    ctx = RootContext(n)
    r = Fraction(i % (3 * n), 3)
    k = j % n
    a, b = (r, m), (r - k, m)
    abar, bbar = (n - 1 - r, -m), (n - 1 - r + k, -m)
    try:
        v = qbinom(a, b, ctx)
    except PoleError:
        return
    assert close(v, qbinom(bbar, abar, ctx), mpmath.mpf(10) ** -40)
    assert close(v, (-1) ** k * qbinom((r - n, m), (r - k - n, m), ctx), mpmath.mpf(10) ** -40)


def test_inverse_loop_weight_pole():
    from yokota.evaluator import circle_value

    with pytest.raises(PoleError):
        circle_value(Fraction(3, 2), RootContext(5))
    # a perturbed half-integer color is finite
    assert abs(circle_value((Fraction(3, 2), 1), RootContext(5))) > 0


def test_qbinom_bad_length():
    with pytest.raises(ValueError):
        qbinom(1, 5, RootContext(6))


def test_loop_weight_examples():
    c5 = RootContext(5)
    assert close(loop_weight(Fraction(3, 2), c5), 0)
    c6 = RootContext(6)
    direct = mpmath.mpc(1)
    with c6.working():
        for j in range(5):
            direct *= qbrace(10 - j, c6) / qbrace(5 - j, c6)
    assert close(loop_weight(2, c6), direct)


def test_loop_weight_bar_invariant():
    ctx = RootContext(10)
    for a in [(Fraction(k, 3), m) for k in range(30) for m in (1, -2)]:
        abar = (9 - a[0], -a[1])
        assert close(loop_weight(a, ctx), loop_weight(abar, ctx), mpmath.mpf(10) ** -25)


# -- table route -----------------------------------------------------------


@pytest.mark.parametrize("n", [6, 11])
def test_tables_match_definition(n):
    ctx = RootContext(n)
    t = QTables(ctx)
    with ctx.working():
        for r in [Fraction(k, 2) for k in range(-2 * n, 4 * n)]:
            for m in (0, 3):
                top, bot = (r, m), (r - (abs(int(2 * r)) % n), m)
                try:
                    ref = qbinom(top, bot, ctx)
                except PoleError:
                    continue
                got = settle(*t.binom(top, bot))
                assert close(got, ref, mpmath.mpf(10) ** -50)


# -- tracked sums and escalation ---------------------------------------------


def test_tracked_sum_cancellation():
    ctx = RootContext(8)
    with ctx.working():
        big = mpmath.mpf(10) ** 40
        s = tracked_sum([Tracked(big, 80), Tracked(-big, 80), Tracked(mpmath.mpf(1), 80)], ctx)
        # the error of the big terms swamps the small remainder
        assert s.digits < 50


def test_solve_escalates():
    calls = []

    def fn(c):
        calls.append(c.working_dps)
        return Tracked(mpmath.mpf(1), c.working_dps - 40)

    res = solve(fn, RootContext(8))
    assert res.digits >= 60
    assert len(calls) > 1 and calls == sorted(calls)
