"""Independent high-precision values frozen into tests/oracles.hpp.

Run: python3 tests/oracles/generate.py > tests/oracles.hpp
Only mpmath is used; nothing here calls into the C++ library.
"""
import mpmath as mp

mp.mp.dps = 40
pi = mp.pi


def sphere(d):
    return 2 * pi ** (mp.mpf(d) / 2) / mp.gamma(mp.mpf(d) / 2)


def alpha(d):
    d = mp.mpf(d)
    return d ** (1 - d) * mp.gamma(d / 2) / (2 * (d - 1) * pi ** (d / 2))


def radial(f, d, R=mp.inf, tail=None):
    """|S^{d-1}| int_0^R f(r) r^{d-1} dr. When the integrand decays like
    r^{-1-tail}, the piece beyond r = 4 is mapped by r = 4 u^{-1/tail} onto a
    regular integrand on (0, 1]."""
    J = lambda r: f(r) * r ** (d - 1)
    if R != mp.inf:
        return sphere(d) * mp.quad(J, [0, R])
    if tail is None:
        return sphere(d) * mp.quad(J, [0, 1, 4, mp.inf])
    R0 = mp.mpf(4)
    near = mp.quad(J, [0, 1, R0])
    far = mp.quad(lambda u: J(R0 * u ** (-1 / tail)) * R0 / tail * u ** (-1 / tail - 1), [0, 1])
    return sphere(d) * (near + far)


# F_a moments by direct radial quadrature (no Beta identities).
def fa_moments(a, d):
    a = mp.mpf(a)
    k = mp.mpf(d) / (d - 1)
    m = (d - 1) / (a - d)
    F = lambda r: (1 + r ** k) ** (-m)
    dF = lambda r: -m * k * r ** (k - 1) * (1 + r ** k) ** (-m - 1)
    b = d * (a - 1) / (d - 1)
    eps_a = mp.mpf(d) ** 2 / (a - d)
    eps_b = mp.mpf(d) ** 2 * (a - 1) / ((a - d) * (d - 1)) - d
    return (radial(lambda r: abs(dF(r)) ** d, d, tail=eps_a), radial(lambda r: F(r) ** a, d, tail=eps_a),
            radial(lambda r: F(r) ** b, d, tail=eps_b))


# Log-Sobolev constant fixed by zero deficit at A exp(-r^{p/(p-1)}).
def logsob_beta_from_extremal(p, d):
    p = mp.mpf(p)
    q = p / (p - 1)
    g = lambda r: mp.exp(-r ** q)
    norm = radial(lambda r: g(r) ** p, d)
    A = norm ** (-1 / p)
    u = lambda r: A * g(r)
    du = lambda r: A * q * r ** (q - 1) * g(r)
    ent = radial(lambda r: u(r) ** p * mp.log(u(r) ** p), d)
    grad = radial(lambda r: du(r) ** p, d)
    return mp.exp(p / d * ent) / grad


def logsob_beta_formula(p, d):
    p = mp.mpf(p)
    d = mp.mpf(d)
    return (p / d) * ((p - 1) / mp.e) ** (p - 1) * pi ** (-p / 2) * (mp.gamma(d / 2 + 1) / mp.gamma(d * (p - 1) / p + 1)) ** (p / d)


def aubin_talenti(d):
    d = mp.mpf(d)
    return 1 / mp.sqrt(pi * d * (d - 2)) * (mp.gamma(d) / mp.gamma(d / 2)) ** (1 / d)


# GN quotient at A (1 + B r^{p/(p-1)})_+^{-(p-1)/(a-p)}, |B| = 1.
def gn_constant(p, a, d):
    p, a = mp.mpf(p), mp.mpf(a)
    b = p * (a - 1) / (p - 1)
    q = p / (p - 1)
    e = (p - 1) / (a - p)
    if a > p:
        B, R = 1, mp.inf
        theta = (a - p) * d / ((a - 1) * (d * p - (d - p) * a))
    else:
        B, R = -1, mp.mpf(1)
        theta = (p - a) * d / (a * (d * (p - a) + p * (a - 1)))
    f = lambda r: (1 + B * r ** q) ** (-e)
    df = lambda r: abs(-e * (1 + B * r ** q) ** (-e - 1) * B * q * r ** (q - 1))
    nb = radial(lambda r: f(r) ** b, d, R) ** (1 / b)
    na = radial(lambda r: f(r) ** a, d, R) ** (1 / a)
    ng = radial(lambda r: df(r) ** p, d, R) ** (1 / p)
    if a > p:
        return nb / (ng ** theta * na ** (1 - theta))
    return na / (ng ** theta * nb ** (1 - theta))


def R_scalar(d, x, y):
    return abs(x + y) ** d - abs(x) ** d - d * abs(x) ** (d - 2) * x * y


def field_M(d, r):
    return d * r ** (mp.mpf(1) / (d - 1)) / (1 + r ** (mp.mpf(d) / (d - 1)))


def mu(d, r):
    return d / sphere(d) * (1 + r ** (mp.mpf(d) / (d - 1))) ** (-d)


# Onofri functional of a radial u; X = -M(r) xhat and grad u = u'(r) xhat are collinear.
def onofri_radial(u, du, d, R=mp.inf):
    tail = 0 if R == mp.inf else sphere(d) * mp.quad(lambda r: mu(d, r) * r ** (d - 1), [R, 2 * R, mp.inf])
    mean = radial(lambda r: u(r) * mu(d, r), d, R)
    expi = radial(lambda r: mp.exp(u(r)) * mu(d, r), d, R) + tail
    lhs = mp.log(expi) - mean
    rhs = radial(lambda r: R_scalar(d, -field_M(d, r), (mp.mpf(d) - 1) / d * du(r)), d, R)
    return lhs, rhs


# Second-variation members for F_a, v_a = g(r) c.
def second_variation(a, d):
    a = mp.mpf(a)
    k = mp.mpf(d) / (d - 1)
    m = (d - 1) / (a - d)
    b = d * (a - 1) / (d - 1)
    F = lambda r: (1 + r ** k) ** (-m)
    dF = lambda r: -m * k * r ** (k - 1) * (1 + r ** k) ** (-m - 1)
    g = lambda r: -(d / (a - d)) * r ** (mp.mpf(1) / (d - 1)) / (1 + r ** k)
    w = lambda r: F(r) * g(r)
    dw = lambda r: mp.diff(w, r)
    I = lambda f: mp.quad(lambda r: f(r) * r ** (d - 1), [0, 1, 4, mp.inf])
    lhs = b * (b - 1) * I(lambda r: F(r) ** b * g(r) ** 2) / d / I(lambda r: F(r) ** b)
    ta = a * (a - 1) * I(lambda r: F(r) ** a * g(r) ** 2) / d / I(lambda r: F(r) ** a)
    tg = (a - d) / d * I(lambda r: abs(dF(r)) ** (d - 2) * (dw(r) ** 2 + (w(r) / r) ** 2)) / I(lambda r: abs(dF(r)) ** d)
    return lhs, tg, ta


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 20, min_fixed=-3, max_fixed=3)};")


print("#pragma once")
print("// Generated by tests/oracles/generate.py (mpmath, 40 digits). Do not edit.")
print()
print("namespace oracle {")
for d in range(2, 7):
    emit(f"sphere_area_{d}", sphere(d))
for d in range(2, 9):
    emit(f"alpha_{d}", alpha(d))
for p, d, tag in [(2, 2, "2_2"), (2, 3, "2_3"), (1.5, 3, "15_3"), (3, 3, "3_3"), (1.5, 2, "15_2")]:
    f = logsob_beta_formula(p, d)
    x = logsob_beta_from_extremal(p, d)
    assert abs(f / x - 1) < mp.mpf(10) ** -25, (p, d, f, x)
    emit(f"logsob_beta_{tag}", x)
emit("aubin_talenti_3", aubin_talenti(3))
emit("aubin_talenti_4", aubin_talenti(4))
for a, d, tag in [(4, 2, "4_2"), (10, 3, "10_3"), (7.5, 4, "75_4"), (50, 5, "50_5"), (1000, 3, "1000_3")]:
    g, pa, pb = fa_moments(a, d)
    emit(f"fa_grad_{tag}", g)
    emit(f"fa_pow_a_{tag}", pa)
    emit(f"fa_pow_b_{tag}", pb)
for p, a, d, tag in [(2, 3, 2, "2_3_2"), (1.5, 2.25, 2, "15_225_2"), (1.5, 1.25, 2, "15_125_2"),
                     (3, 6, 3, "3_6_3"), (2.5, 1.75, 3, "25_175_3"), (2, 4, 3, "2_4_3")]:
    emit(f"gn_constant_{tag}", gn_constant(p, a, d))
for d in (2, 3, 4):
    L, Rr = onofri_radial(lambda r: mp.exp(-r * r), lambda r: -2 * r * mp.exp(-r * r), d)
    emit(f"onofri_gauss_lhs_{d}", L)
    emit(f"onofri_gauss_rhs_{d}", Rr)
    bump = lambda r: mp.exp(1 - 1 / (1 - (r / 2) ** 2)) if r < 2 else mp.mpf(0)
    dbump = lambda r: bump(r) * (-(r / 2) / (1 - (r / 2) ** 2) ** 2) if r < 2 else mp.mpf(0)
    L, Rr = onofri_radial(bump, dbump, d, mp.mpf(2))
    emit(f"onofri_bump2_lhs_{d}", L)
    emit(f"onofri_bump2_rhs_{d}", Rr)
for a, d in [(10, 2), (10, 3), (20, 4)]:
    l, g, t = second_variation(a, d)
    emit(f"sv_lhs_{a}_{d}", l)
    emit(f"sv_grad_{a}_{d}", g)
    emit(f"sv_a_{a}_{d}", t)
print("}  // namespace oracle")
