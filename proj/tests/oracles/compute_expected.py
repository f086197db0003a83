"""Arbitrary-precision oracle for the frozen expected values in the C++ tests.

Run with `python3 tests/oracles/compute_expected.py`. Independent of the C++
implementation: every quantity is evaluated from its defining integral or
closed form with mpmath at 40 significant digits.
"""
from mpmath import mp, mpf, pi, sqrt, exp, asin, acos, log10, quad, gammainc, inf

mp.dps = 40


def v_union(d, u):
    d, u = mpf(d), mpf(u)
    if d == 0:
        return mpf(0)
    if u >= 2 * d:
        return 2 * pi * d**2
    return 2 * pi * d**2 - 2 * d**2 * acos(u / (2 * d)) + u * sqrt(d**2 - u**2 / 4)


def lam1(lp, d):
    return lp * exp(-lp * pi * d**2)


def lam2(lp, d):
    a = pi * mpf(d) ** 2
    return (1 - exp(-lp * a)) / a


def k2(lp, d, r):
    a = pi * mpf(d) ** 2
    v = v_union(d, r)
    return (2 * v * (1 - exp(-lp * a)) - 2 * a * (1 - exp(-lp * v))) / (lp**2 * a * v * (v - a))


def g(r, alpha):
    return mpf(r) ** (-alpha)


def below_type1(lp, d, alpha):
    lp, d = mpf(lp), mpf(d)
    return 2 * pi * lp * quad(lambda r: g(r, alpha) * r * exp(lp * (pi * d**2 - v_union(d, r))), [d, 2 * d])


def below_type2(lp, d, alpha):
    lp, d = mpf(lp), mpf(d)
    lam = lam2(lp, d)
    return 2 * pi * lp**2 / lam * quad(lambda r: g(r, alpha) * r * k2(lp, d, r), [d, 2 * d])


def tail(lam, frm, alpha):
    return 2 * pi * lam * mpf(frm) ** (2 - alpha) / (alpha - 2)


def db(x):
    return 10 * log10(x)


def show(name, x):
    print(f"{name:45s} {mp.nstr(x, 17)}")


a_lo = 2 * asin(mpf(3) / 4) - 3 * sqrt(7) / 8
b_lo = sqrt(7) / 2
a_hi = sqrt(3) - pi / 3
b_hi = 2 * pi / 3 - sqrt(3) / 2
nu = 12 * pi / (8 * pi + 3 * sqrt(3))

show("intensity I (2,0.5)", lam1(2, mpf("0.5")))
show("intensity II (2,0.5)", lam2(2, mpf("0.5")))
show("V(1,1)", v_union(1, 1))
show("a_lower", a_lo)
show("b_lower", b_lo)
show("a_upper", a_hi)
show("b_upper", b_hi)
show("pi - a_lo - b_lo", pi - a_lo - b_lo)
show("nu", nu)
show("nu dB", db(nu))
show("eq14 alpha=3", nu - (nu - 1) / 2)
show("eq14 alpha=3 dB", db(nu - (nu - 1) / 2))
show("Gamma(-1,1)", gammainc(-1, 1))
show("Gamma(-0.5,0.3)", gammainc(mpf("-0.5"), mpf("0.3")))
show("Gamma(-2,3)", gammainc(-2, 3))
show("Gamma(-1.5,0.01)", gammainc(mpf("-1.5"), mpf("0.01")))
show("Gamma(0.5,2)", gammainc(mpf("0.5"), 2))
show("Gamma(0,0.2)", gammainc(0, mpf("0.2")))
show("Gamma(-2,700)", gammainc(-2, 700))
show("H(2,1,3) quad", quad(lambda r: r ** (1 - 3) * exp(-2 * r), [1, 2]))
show("H(1,1,3) quad", quad(lambda r: r ** (1 - 3) * exp(-1 * r), [1, 2]))
show("K'(delta)/(2 pi delta) I (2,1)", exp(2 * b_hi))
kb = 2 * pi / (sqrt(3) * 2) * (exp(2 * (2 * pi / 3 - sqrt(3) / 2)) - 1)
show("K2delta lower bound (2,1)", kb)
K2d = 2 * pi * exp(2 * 2 * pi) * quad(lambda u: u * exp(-2 * v_union(1, u)), [1, 2])
show("K(2delta) type I (2,1)", K2d)
show("I_{>2d} (2,1,3)", tail(lam1(2, 1), 2, 3))
show("midpoint oracle int r e^{-2V} [1,2]", quad(lambda r: r * exp(-2 * v_union(1, r)), [1, 2]))

for (lp, d, alpha) in [(2, 2, 3), (1, 1, 3), (2, mpf("0.5"), 3), (2, 1, 4)]:
    l1 = lam1(lp, d)
    t1 = below_type1(lp, d, alpha) + tail(l1, 2 * d, alpha)
    e1 = t1 / tail(l1, d, alpha)
    l2 = lam2(lp, d)
    t2 = below_type2(lp, d, alpha) + tail(l2, 2 * d, alpha)
    e2 = t2 / tail(l2, d, alpha)
    show(f"type I mean ({lp},{d},{alpha})", t1)
    show(f"type I EIR dB ({lp},{d},{alpha})", db(e1))
    show(f"type II mean ({lp},{d},{alpha})", t2)
    show(f"type II EIR dB ({lp},{d},{alpha})", db(e2))

approx = (3 - 2) * 2 * exp(2 * 4 * (pi - a_lo - b_lo)) / (2 * b_lo * 4)
show("approx EIR dB (2,2,3)", db(approx))
