#!/usr/bin/env python3
"""Generate frozen high-precision reference values for the C++ test suite.

Values are computed with mpmath (50 digits) and sympy, independently of any
code in src/, and written to tests/reference_values.h.  Regenerate with:
    python3 tools/gen_reference_values.py > tests/reference_values.h
"""
import mpmath as mp

mp.mp.dps = 50

def cfmt(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (mp.nstr(z.real, 22), mp.nstr(z.imag, 22))

def rfmt(x):
    return mp.nstr(mp.mpf(x), 22)

print("// Frozen high-precision reference values.")
print("// Generated by tools/gen_reference_values.py (mpmath, 50 digits). Do not edit.")
print("#pragma once")
print("#include <complex>")
print("namespace refval {")
print("using C = std::complex<double>;")

# log Gamma at assorted points (principal branch)
pts = {
    "lgamma_1_plus_i": mp.mpc(1, 1),
    "lgamma_half": mp.mpf("0.5"),
    "lgamma_2_plus_3i": mp.mpc(2, 3),
    "lgamma_p3": mp.mpf("0.3"),
    "lgamma_100": mp.mpf(100),
    "lgamma_100_100i": mp.mpc(100, 100),
    "lgamma_m2p5_4i": mp.mpc("-2.5", 4),
    "lgamma_p001_m7i": mp.mpc("0.001", -7),
    "lgamma_900_m300i": mp.mpc(900, -300),
}
for name, z in pts.items():
    print(f"inline const C {name} = {cfmt(mp.loggamma(z))};")

# Bessel J_nu(x)
for nu, x in [(0, 0.5), (0, 10), (11, 1), (11, 10), (11, 100), (11, 1000),
              (11, 100000), (1, 300), (3, 17), (11, 150), (11, 199),
              (11, 201), (11, 12345.6789)]:
    tag = str(x).replace(".", "p")
    print(f"inline const double besselj_{nu}_{tag} = {rfmt(mp.besselj(nu, x))};")

# Bessel Y_nu(x) (for the Hankel-based oscillatory split)
for nu, x in [(11, 13), (11, 50), (11, 500), (11, 12566.4), (0, 2)]:
    tag = str(x).replace(".", "p")
    print(f"inline const double bessely_{nu}_{tag} = {rfmt(mp.bessely(nu, x))};")

# Ramanujan tau(n), n <= 30 (eta-product coefficients, sympy's implementation
# is an independent oracle for the power-series code in src/)
def tau_list(nmax):
    # Delta = q * prod (1-q^n)^24; expand with exact integers via
    # eta^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2} (Jacobi), then eighth power.
    N = nmax  # coefficients of q^0..q^{N-1} of eta-quotient part
    b = [0]*N
    k = 0
    while k*(k+1)//2 < N:
        b[k*(k+1)//2] += (-1)**k * (2*k+1)
        k += 1
    def mul(u, v):
        w = [0]*N
        for i, ui in enumerate(u):
            if ui:
                for j in range(0, N-i):
                    if v[j]:
                        w[i+j] += ui*v[j]
        return w
    p2 = mul(b, b); p4 = mul(p2, p2); p8 = mul(p4, p4)
    return [p8[n-1] for n in range(1, nmax+1)]
taus = tau_list(30)
print("inline const long long tau_1_30[30] = {")
print("    " + ", ".join(str(t) for t in taus))
print("};")

# Gamma(1/4) for the duplication identity spot check
print(f"inline const double gamma_quarter = {rfmt(mp.gamma(mp.mpf(1)/4))};")

# FT of the standard mollifier exp(-1/(1-x^2)) on [-1,1], normalised to mass 1:
# B(y) = int b(x) e^{i x y} dx / int b.  Used to pin the v-window damping tests.
b = lambda x: mp.exp(-1/(1-x**2))
mass = mp.quad(b, [-1, 1])
for y in [0, 5, 10, 20]:
    val = mp.quad(lambda x: b(x)*mp.cos(x*y), [-1, 1]) / mass
    print(f"inline const double mollifier_ft_{y} = {rfmt(val)};")

print("} // namespace refval")
