# Independent arbitrary-precision evaluation of the element pattern formulas
# documented in src/element.rs. Prints Rust literals frozen into
# tests/element_oracle.rs.
from mpmath import mp, mpf, mpc, cos, sin, pi, sqrt, radians

mp.dps = 40
MU0 = mpf("1.25663706212e-6")
EPS0 = mpf("8.8541878128e-12")


def sinc(x):
    return mpf(1) if x == 0 else sin(x) / x


def r_eff(R, ti):
    c = cos(ti)
    return ((1 + R) * c - (1 - R)) / ((1 + R) * c + (1 - R))


def pattern(a, b, lam, ti, pi_, to, po, R, rotate=False):
    cti, sti, cto, sto = cos(ti), sin(ti), cos(to), sin(to)
    cpi, spi, cpo, spo = cos(pi_), sin(pi_), cos(po), sin(po)
    if rotate:
        cpi, spi = -spi, cpi
    pref = mpc(0, -1) * a * b * sqrt(MU0 * EPS0) / (2 * lam)
    X = pi * a / lam * sto * cpo
    Y = pi * b / lam * sto * spo
    s = pref * sinc(X) * sinc(Y)
    Re = r_eff(R, ti)
    first_vv = (cti*sti*cto*sto - cti*cpi*cto*spo - spi*spo + spi*cpo)
    second_vv = (-cti*sti*cto*sto + cti*cpi*cto*spo - spi*spo + spi*cpo)
    first_vh = (cti*spi*spo + cti*cpi*cpo - cpi*cto*spo - spi*cto*spo)
    second_vh = (cti*spi*spo + cti*cpi*cpo + cpi*cto*spo + spi*cto*spo)
    if not rotate:
        return s * (first_vv * Re + second_vv), s * (first_vh * Re - second_vh)
    # duality: the R-independent bracket flips sign
    return s * (first_vv * Re - second_vv), s * (first_vh * Re + second_vh)


cases = [
    # (a, b, lambda, t_in, p_in, t_out, p_out, preset phase)
    ("0.0156", "0.0156", "0.05", 60, 0, 60, 180, 0),
    ("0.0156", "0.0156", "0.05", 60, 0, 30, 150, -90),
    ("0.0156", "0.0156", "0.05", 45, 255, 72, 75, 123),
    ("0.02", "0.01", "0.1", 10, 33, 80, 300, -170),
]
for a, b, lam, ti, pin, to, po, ph in cases:
    R = mpc(cos(radians(ph)), sin(radians(ph)))
    args = (mpf(a), mpf(b), mpf(lam), radians(ti), radians(pin), radians(to), radians(po), R)
    vv, vh = pattern(*args)
    hv, hh = pattern(*args, rotate=True)
    vals = ", ".join(f"({mp.nstr(z.real, 20)}, {mp.nstr(z.imag, 20)})" for z in (vv, vh, hv, hh))
    print(f"    ({a}, {b}, {lam}, {ti}.0, {pin}.0, {to}.0, {po}.0, {ph}.0, [{vals}]),")
