#!/usr/bin/env python3
"""Independent oracle for concentration constants in test_concentration.cpp.

Straight-line transcription of the displayed formulas (kl divergence, the
band epsilon, the interval CI functional) evaluated in mpmath.
"""
import mpmath as mp

mp.mp.dps = 30


def show(label, value):
    print(f"{label:58s} {mp.nstr(mp.mpf(value), 20)}", flush=True)


def kl(p, q):
    p, q = mp.mpf(p), mp.mpf(q)
    if p == q:
        return mp.mpf(0)
    if p == 0:
        return -mp.log(1 - q)
    if p == 1:
        return -mp.log(q)
    return p * mp.log(p / q) + (1 - p) * mp.log((1 - p) / (1 - q))


show("kl(0.5, 0.25)", kl("0.5", "0.25"))
show("kl(1, 0.5) = log 2", kl(1, "0.5"))
show("kl(0.2, 0.6)", kl("0.2", "0.6"))
show("kl(0.9, 0.3)", kl("0.9", "0.3"))


def epsilon_band(n, delta):
    n, delta = mp.mpf(n), mp.mpf(delta)
    return 2 * mp.log(n * n / delta) / (9 * n)


show("epsilon_band(100, 0.05)", epsilon_band(100, "0.05"))
show("epsilon_band(1000, 0.05)", epsilon_band(1000, "0.05"))
show("kl_budget(200, 0.2) = log(n^2/d)/n",
     mp.log(mp.mpf(200) ** 2 / mp.mpf("0.2")) / 200)


def interval_ci(phat, n, delta):
    phat = mp.mpf(phat)
    eps = epsilon_band(n, delta)
    c = (1 + 4 * eps) * (1 - mp.mpf(2) / n)
    root = mp.sqrt(eps * phat * (1 - phat) + eps**2)
    base = (1 - 2 * eps) * phat + 3 * eps
    lo = (base - 3 * root) / c + (-1 - 1) / (mp.mpf(n) - 2)
    hi = (base + 3 * root) / c + (1 - 1) / (mp.mpf(n) - 2)
    return max(lo, mp.mpf(0)), min(hi, mp.mpf(1))


lo, hi = interval_ci("0.5", 1000, "0.05")
show("interval_ci(0.5, 1000, 0.05) lo", lo)
show("interval_ci(0.5, 1000, 0.05) hi", hi)
lo, hi = interval_ci("0.02", 500, "0.1")
show("interval_ci(0.02, 500, 0.1) lo", lo)
show("interval_ci(0.02, 500, 0.1) hi", hi)


def bracket(p, eta):
    p, eta = mp.mpf(p), mp.mpf(eta)
    denom = 1 + 4 * eta
    center = ((1 - 2 * eta) * p + 3 * eta) / denom
    radius = 3 * mp.sqrt(p * (1 - p) * eta + eta**2) / denom
    return center - radius, center + radius


lo, hi = bracket("0.5", "0.01")
show("kl_quadratic_bracket(0.5, 0.01) lo", lo)
show("kl_quadratic_bracket(0.5, 0.01) hi", hi)

# Grid scan certifying the bracket actually contains the kl sublevel set.
eta = mp.mpf("0.01")
worst_in = None
for k in range(1, 10000):
    q = mp.mpf(k) / 10000
    if kl("0.5", q) < mp.mpf(9) / 2 * eta:
        if worst_in is None:
            worst_in = (q, q)
        else:
            worst_in = (min(worst_in[0], q), max(worst_in[1], q))
show("sublevel set scan min q (kl(0.5,q) < 0.045)", worst_in[0])
show("sublevel set scan max q", worst_in[1])
