"""Independent reference computations; run generate.py to refresh the frozen header."""
import cmath
import math

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 30


def metric(d):
    return np.diag([1.0] + [-1.0] * (d - 1))


def theta_params(d, lam, eta=0.0):
    t = np.zeros((d, d))
    t[0, 1], t[1, 0] = -lam, lam
    if d == 4:
        t[2, 3], t[3, 2] = -eta, eta
    return t


def ptq(theta, p, q):
    g = metric(len(p))
    return float((g @ p) @ theta @ (g @ q))


# geometry
def lorentz_mixed():
    c, s = math.cosh(0.6), math.sinh(0.6)
    boost2 = np.eye(4)
    boost2[0, 0] = boost2[2, 2] = c
    boost2[0, 2] = boost2[2, 0] = s
    rot = np.eye(4)
    a = 0.3
    rot[1, 1] = rot[2, 2] = math.cos(a)
    rot[1, 2], rot[2, 1] = -math.sin(a), math.sin(a)
    return rot @ boost2


def gamma_mixed():
    L = lorentz_mixed()
    return L, L @ theta_params(4, 1.0, 0.3) @ L.T


# test functions
def bump(u):
    if abs(u) >= 1:
        return mp.mpf(0)
    return mp.e ** (-u * u / (1 - u * u))


def axis_integral(c, h, a):
    # int b((x-c)/h) exp(i a x) dx
    f = lambda x: bump((x - c) / h) * mp.expj(a * x)
    return mp.quad(f, [c - h, c, c + h])


def transform(center, hw, kmod, amp, kappa):
    # int f(x) exp(i kappa.x), f = amp prod b exp(-i kmod.x), Minkowski dot
    out = mp.mpc(amp)
    for mu in range(len(center)):
        g = 1 if mu == 0 else -1
        out *= axis_integral(center[mu], hw[mu], g * (kappa[mu] - kmod[mu]))
    return complex(out)


REF_F = dict(center=[0.2, 1.5], hw=[0.5, 0.8], kmod=[0.3, 0.1], amp=0.8 + 0.2j)


def transform_cases():
    cases = []
    cases.append(("real_kappa", [1.3, 0.4], transform(**REF_F, kappa=[1.3, 0.4])))
    th, s = mp.mpf("0.3"), mp.mpf("0.4")
    z = mp.mpc(th, s)
    k = [mp.cosh(z), mp.sinh(z)]
    cases.append(("complex_minus", (complex(k[0]), complex(k[1])), transform(**REF_F, kappa=[-k[0], -k[1]])))
    cases.append(("complex_plus", (complex(k[0]), complex(k[1])), transform(**REF_F, kappa=k)))
    return cases


def rapidity_nodes(mass, theta_max, n):
    h = 2 * theta_max / n
    th = -theta_max + (np.arange(n) + 0.5) * h
    return np.stack([mass * np.cosh(th), mass * np.sinh(th)], axis=1), h


# fock: twisted two-particle wavefunction of a*_theta(f1) a*_theta(f2) Omega
TWO_F1 = [1.0, 0.5j, -0.3, 0.2 + 0.1j]
TWO_F2 = [0.4 - 0.2j, 1.0, 0.1j, -0.6]


def twisted_pair(lam):
    nodes, _ = rapidity_nodes(1.0, 1.0, 4)
    th = theta_params(2, lam)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            a = cmath.exp(1j * ptq(th, nodes[i], nodes[j])) * TWO_F1[i] * TWO_F2[j]
            b = cmath.exp(1j * ptq(th, nodes[j], nodes[i])) * TWO_F1[j] * TWO_F2[i]
            out[i, j] = (a + b) / math.sqrt(2.0)
    return out


# massless measure: int |exp(-log^2|p|)|^2 dp/(2|p|) over both branches
def massless_norm_sq():
    val, _ = integrate.quad(lambda p: math.exp(-2 * math.log(p) ** 2) / (2 * p), 0, np.inf, limit=400)
    return 2 * val


# locality integrals with independent quadrature (scipy adaptive)
LOC_F = ((0.2, 1.6), (0.5, 0.8))
LOC_G = ((-0.1, -1.7), (0.6, 0.9))


def axis_np(c, h, a):
    def b(x):
        u = (x - c) / h
        return math.exp(-u * u / (1 - u * u)) if abs(u) < 1 else 0.0

    re, _ = integrate.quad(lambda x: b(x) * math.cos(a * x), c - h, c + h, epsabs=1e-14, epsrel=1e-13, limit=200)
    im, _ = integrate.quad(lambda x: b(x) * math.sin(a * x), c - h, c + h, epsabs=1e-14, epsrel=1e-13, limit=200)
    return complex(re, im)


def onshell(fdef, p, sign):
    (c0, c1), (h0, h1) = fdef
    return axis_np(c0, h0, sign * p[0]) * axis_np(c1, h1, -sign * p[1])


def locality_integrals(n=256, theta_max=4.0, lam=0.5, z=(1.0, 0.3)):
    nodes, h = rapidity_nodes(1.0, theta_max, n)
    th = theta_params(2, lam)
    z = np.array(z)
    i1 = i2 = 0j
    for p in nodes:
        ph = ptq(th, p, z)
        i1 += h * onshell(LOC_F, p, -1) * onshell(LOC_G, p, +1) * cmath.exp(-1j * ph)
        i2 += h * onshell(LOC_F, p, +1) * onshell(LOC_G, p, -1) * cmath.exp(1j * ph)
    return i1, i2


# scattering: S = exp(2 i p theta q) for packets centred at the nodes nearest -0.5 / +0.5
def scatter_phase(lam, n=256, theta_max=4.0):
    nodes, h = rapidity_nodes(1.0, theta_max, n)
    th_nodes = -theta_max + (np.arange(n) + 0.5) * h
    ip = int(np.argmin(np.abs(th_nodes + 0.5)))
    iq = int(np.argmin(np.abs(th_nodes - 0.5)))
    return ip, iq, cmath.exp(2j * ptq(theta_params(2, lam), nodes[ip], nodes[iq]))


# Weyl algebra: BCH for commuting central commutator; e^A e^B = e^{A+B+[A,B]/2}
def weyl_ratio(p, q, lam):
    # [i p.xhat, i q.xhat] = -p_mu q_nu [xhat^mu, xhat^nu] = 2i p theta q
    c = 2j * ptq(theta_params(2, lam), np.array(p), np.array(q))
    return cmath.exp(c / 2) / cmath.exp(-c / 2)


def moyal_phase(p, q, lam):
    return -ptq(theta_params(2, lam), np.array(p), np.array(q))
