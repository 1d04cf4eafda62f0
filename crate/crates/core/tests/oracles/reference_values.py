"""Independent reference values frozen into the Rust tests.

Uses scipy's noncentral chi-squared implementation and mpmath quadrature,
neither of which shares code with the crate.  Run with `python3 reference_values.py`.
"""
import mpmath as mp
from scipy.stats import ncx2, chi2
import numpy as np

mp.mp.dps = 30


def snc_pdf(x, l1, l2, c):
    return ncx2.pdf(x, l1, l2, scale=c * c) if l2 > 0 else chi2.pdf(x, l1, scale=c * c)


def snc_cdf(x, l1, l2, c):
    return ncx2.cdf(x, l1, l2, scale=c * c) if l2 > 0 else chi2.cdf(x, l1, scale=c * c)


print("snc pdf(1.0; 2.5, 1.3, 0.8) =", repr(snc_pdf(1.0, 2.5, 1.3, 0.8)))
print("snc cdf(5; 3.7, 2.1, 1.1) =", repr(snc_cdf(5.0, 3.7, 2.1, 1.1)))
for (l1, l2, c, x) in [(0.3, 0.5, 1.0, 0.2), (7.0, 3.0, 0.5, 2.0), (1.0, 0.0, 1.0, 0.5), (2.5, 1.3, 0.8, 3.0)]:
    print(f"snc pdf({x}; {l1},{l2},{c}) =", repr(snc_pdf(x, l1, l2, c)), " cdf =", repr(snc_cdf(x, l1, l2, c)))

# characteristic function of SNC(2.5, 1.3, 0.8) at w = 0.7 by quadrature of the density
l1, l2, c, w = 2.5, 1.3, 0.8, 0.7
re = mp.quad(lambda x: mp.cos(w * x) * snc_pdf(float(x), l1, l2, c), [0, 1, 5, 20, 80])
im = mp.quad(lambda x: mp.sin(w * x) * snc_pdf(float(x), l1, l2, c), [0, 1, 5, 20, 80])
print("snc cf quad (2.5,1.3,0.8; 0.7) =", re, im)

# constant CIR
b, s, th, r0, t = 0.1, 0.2, 0.02, 0.03, 1.0
Sig = mp.mpf(s) ** 2 * (1 - mp.e ** (-b * t)) / (4 * b)
print("Sigma(0,1) =", Sig)
g = mp.sqrt(b * b + 2 * s * s)
tau = 1.0
C = 2 * (mp.e ** (g * tau) - 1) / ((g + b) * (mp.e ** (g * tau) - 1) + 2 * g)
A = 2 * th / s ** 2 * mp.log(2 * g * mp.e ** ((g + b) * tau / 2) / ((g + b) * (mp.e ** (g * tau) - 1) + 2 * g))
print("C(0,1) =", C, " A(0,1) =", A, " P =", mp.e ** (-r0 * C + A))


def cir_bond(tau):
    C = 2 * (mp.e ** (g * tau) - 1) / ((g + b) * (mp.e ** (g * tau) - 1) + 2 * g)
    A = 2 * th / s ** 2 * mp.log(2 * g * mp.e ** ((g + b) * tau / 2) / ((g + b) * (mp.e ** (g * tau) - 1) + 2 * g))
    return C, A


# constant-CIR call on a zero-coupon bond (Cox-Ingersoll-Ross 1985), scipy ncx2 cdf
def cir_call(t, T, K):
    Ct, At = cir_bond(t)
    CT, AT = cir_bond(T)
    CtT, AtT = cir_bond(T - t)
    rstar = (AtT - mp.log(K)) / CtT
    rho = 2 * g / (s * s * (mp.e ** (g * t) - 1))
    psi = (b + g) / s ** 2
    d = 4 * th / s ** 2
    P_t = mp.e ** (-r0 * Ct + At)
    P_T = mp.e ** (-r0 * CT + AT)
    x1 = float(2 * rstar * (rho + psi + CtT))
    nc1 = float(2 * rho ** 2 * r0 * mp.e ** (g * t) / (rho + psi + CtT))
    x2 = float(2 * rstar * (rho + psi))
    nc2 = float(2 * rho ** 2 * r0 * mp.e ** (g * t) / (rho + psi))
    return P_T * ncx2.cdf(x1, d, nc1) - K * P_t * ncx2.cdf(x2, d, nc2)


for K in [0.90, 0.95, 0.97]:
    print(f"cir call t=0.5 T=1 K={K}:", repr(float(cir_call(0.5, 1.0, K))))

# payoff Laplace transform by direct quadrature
p, Cc, Aa, K = 1.0, 0.9, -0.02, 0.95
rs = (Aa - mp.log(K)) / Cc
val = mp.quad(lambda r: mp.e ** (-p * r) * (mp.e ** (Aa - Cc * r) - K), [0, rs])
print("payoff laplace (1,0.9,-0.02,0.95) =", val)
