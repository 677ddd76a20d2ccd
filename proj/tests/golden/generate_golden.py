#!/usr/bin/env python3
"""Independent reference values for the C++ tests.

Uses numpy/scipy only (closed forms re-derived here, scipy.integrate.quad for
the overlap, scipy solve_ivp for the schedule run). Writes golden_values.hpp.
"""
import numpy as np
from scipy.integrate import quad, solve_ivp

e = 1.602176634e-19
h = 6.62607015e-34
hb = h / (2 * np.pi)
c = 299792458.0
eps0 = 8.8541878128e-12
eta0 = 376.730313668
s0 = np.pi * e**2 / (2 * h)


def mode(lam, EF_eV=0.15, gam=2e12, eh=3.9, D=0.33e-9):
    w = 2 * np.pi * c / lam
    sig = s0 * 4 * EF_eV * e / np.pi / complex(hb * gam, -hb * w)
    k = 2j * eh * eps0 * w / sig
    q = np.sqrt(k**2 + w**2 * eh / c**2)
    epsg = 1 + 1j * sig * eta0 * c / (w * D)
    k0 = np.sqrt(q**2 - w**2 * epsg / c**2)
    return dict(w=w, sig=sig, k=k, q=q, epsg=epsg, k0=k0)


def overlap_quad(ka, kb, d):
    f = lambda z: np.exp(-ka * abs(z - d / 2)) * np.exp(-kb * abs(z + d / 2))
    pts = [-d / 2, d / 2]
    lo, hi = -d / 2 - 40 / ka.real, d / 2 + 40 / kb.real
    re = quad(lambda z: f(z).real, lo, hi, points=pts, limit=500, epsabs=0, epsrel=1e-13)[0]
    im = quad(lambda z: f(z).imag, lo, hi, points=pts, limit=500, epsabs=0, epsrel=1e-13)[0]
    return complex(re, im)


def coupling(m, d):
    k = m["k"]
    O = overlap_quad(k, k, d)
    N2 = 1 / k.real
    return 0.5 * (k**2 - m["k0"] ** 2) / m["q"] * O / N2


m = mode(10e-6)
m0 = mode(10e-6, gam=0.0)
C20 = coupling(m, 20e-9)

# schedule and lossless run at defaults, independent integrator
R, dl, dmin, L = 800e-9, 200e-9, 20e-9, 1e-6
kk = m["k"]
pre = 0.5 * (kk**2 - m["k0"] ** 2) / m["q"] * kk.real


def omega(d):
    return abs((pre * np.exp(-kk * d) * (d + 1 / kk)).real)


def gaps(x):
    return (dmin + R - np.sqrt(R**2 - (x - dl / 2) ** 2), dmin + R - np.sqrt(R**2 - (x + dl / 2) ** 2))


def rhs(x, a):
    d1, d2 = gaps(x)
    o1, o2 = omega(d1), omega(d2)
    H = np.array([[0, o1, 0], [o1, 0, o2], [0, o2, 0]])
    return -1j * H @ a


sol = solve_ivp(rhs, [-L / 2, L / 2], np.array([1, 0, 0], complex), method="DOP853", rtol=1e-12, atol=1e-14,
                max_step=L / 2000)
af = sol.y[:, -1]

# adiabaticity margin, central differences on the same 4096-point grid
x = np.linspace(-L / 2, L / 2, 4096)
d1, d2 = gaps(x)
o1 = np.array([omega(v) for v in d1])
o2 = np.array([omega(v) for v in d2])
th = np.arctan2(o1, o2)
dth = np.gradient(th, x)
margin = np.abs(dth) / np.hypot(o1, o2)

out = {
    "kSigmaReal": m["sig"].real, "kSigmaImag": m["sig"].imag,
    "kEpsGReal": m["epsg"].real, "kEpsGImag": m["epsg"].imag,
    "kQReal": m["q"].real, "kQImag": m["q"].imag,
    "kKReal": m["k"].real, "kKImag": m["k"].imag,
    "kQLosslessReal": m0["q"].real,
    "kC20Real": C20.real, "kC20Imag": C20.imag,
    "kOverlapReal50": overlap_quad(complex(50e6, 0), complex(50e6, 0), 30e-9).real,
    "kOverlapMixedReal": overlap_quad(complex(40e6, 3e6), complex(70e6, -5e6), 25e-9).real,
    "kOverlapMixedImag": overlap_quad(complex(40e6, 3e6), complex(70e6, -5e6), 25e-9).imag,
    "kD1At500nm": gaps(500e-9)[0],
    "kDefaultFinalInput": abs(af[0]) ** 2,
    "kDefaultFinalMiddle": abs(af[1]) ** 2,
    "kDefaultMaxMargin": margin.max(),
    "kParallel20nm": np.sin(abs(C20.real) * 1e-6) ** 2,
}
with open(__file__.replace("generate_golden.py", "golden_values.hpp"), "w") as f:
    f.write("#pragma once\n\n// Generated by generate_golden.py; do not edit.\n\nnamespace golden {\n\n")
    for k, v in out.items():
        f.write(f"inline constexpr double {k} = {float(v)!r};\n")
    f.write("\n}  // namespace golden\n")
for k, v in out.items():
    print(k, v)
