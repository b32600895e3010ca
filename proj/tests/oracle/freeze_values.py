"""Independent high-precision oracle for the frozen constants in the C++ tests.

Uses mpmath only (no code shared with the library). Re-run to regenerate:

    python3 tests/oracle/freeze_values.py
"""
import mpmath as mp

mp.mp.dps = 50
PI = mp.pi


def c(m, nmax=80):
    return mp.fsum(mp.e ** (-n * n * PI) * (n * n * PI) ** (m - 1) for n in range(1, nmax))


def lam(x, nmax=200):
    return mp.fsum(mp.e ** (-n * n * PI * x) for n in range(1, nmax))


def G(s, nmax=40):
    return mp.fsum((n * n * PI) ** (-s / 2) * mp.gammainc(s / 2, n * n * PI) for n in range(1, nmax))


def xi_completed(s):
    return PI ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)


def J_reg(s):
    return xi_completed(s) - G(s)


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name:34s} {mp.nstr(v.real, 25)}  {mp.nstr(v.imag, 25)}")
    else:
        print(f"{name:34s} {mp.nstr(v, 25)}")


show("gamma(3/4)", mp.gamma(0.75))
show("gamma(0.3+5i)", mp.gamma(mp.mpc(0.3, 5)))
show("gamma(-2.5+1i)", mp.gamma(mp.mpc(-2.5, 1)))
show("gamma(10.25-40i)", mp.gamma(mp.mpc(10.25, -40)))
show("erfc(1)", mp.erfc(1))
show("erfc(sqrt(pi))", mp.erfc(mp.sqrt(PI)))
show("Gamma(1/2,pi)", mp.gammainc(0.5, PI))
show("Gamma(0.25+7i,pi)", mp.gammainc(mp.mpc(0.25, 7), PI))
show("Gamma(0.25+7i,4pi)", mp.gammainc(mp.mpc(0.25, 7), 4 * PI))
show("Gamma(-0.2+15i,pi)", mp.gammainc(mp.mpc(-0.2, 15), PI))
show("zeta(0.5)", mp.zeta(0.5))
show("zeta(0.5+14.1i)", mp.zeta(mp.mpc(0.5, 14.1)))
show("zeta(0.1+60i)", mp.zeta(mp.mpc(0.1, 60)))
show("c1", c(1))
show("c2", c(2))
show("c10", c(10))
show("theta(1)", mp.pi ** 0.25 / mp.gamma(0.75))
show("Lambda(1)", lam(1))
show("Lambda(10)", lam(10))
show("Lambda(0.5+3i)", lam(mp.mpc(0.5, 3)))
show("G(0.3+5i)", G(mp.mpc(0.3, 5)))
for sv in (3, 4, 5):
    show(f"J_reg({sv})", J_reg(mp.mpf(sv)))
show("J_reg(0.3+5i)", J_reg(mp.mpc(0.3, 5)))
show("f(0.3+5i)", -(1 / mp.mpc(0.3, 5) + J_reg(mp.mpc(0.3, 5))))
show("Omega(0.3+5i)", xi_completed(mp.mpc(0.3, 5)))
show("Omega(0.5+21i)", xi_completed(mp.mpc(0.5, 21)))
for k in (1, 2, 3):
    show(f"zero {k}", mp.zetazero(k).imag)
s = mp.mpc(0.5, 14.13)
rho = [c(m + 1) / (c(m) * abs(s / 2 + m)) for m in range(1, 151)]
show("max rho(0.5+14.13i), m<=150", max(rho))
print("  first m with rho>=1:", next(m for m in range(1, 151) if rho[m - 1] >= 1))
show("rho_1(0.5)", c(2) / (c(1) * mp.mpf(1.25)))
show("erfc(1)/2", mp.erfc(1) / 2)
