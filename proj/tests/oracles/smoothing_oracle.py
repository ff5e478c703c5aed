#!/usr/bin/env python3
"""Independent oracle for triangular-smoothing constants in test_smoothing.cpp.

Computes f_h(x) = (1/h^2) int (h - |y-x|)_+ f0(y) dy by direct mpmath
quadrature (panels split at x and density kinks) and f_h'(x) by the exact cdf
second difference, from raw density/cdf definitions only.
"""
import mpmath as mp

mp.mp.dps = 30


def show(label, value):
    print(f"{label:58s} {mp.nstr(mp.mpf(value), 20)}", flush=True)


def smoothed(pdf, cdf, h, x, kinks=()):
    pts = sorted({x - h, x, x + h} | {k for k in kinks if x - h < k < x + h})
    dens = mp.fsum(
        mp.quad(lambda y: (h - abs(y - x)) * pdf(y), [pts[i], pts[i + 1]])
        for i in range(len(pts) - 1)
    ) / h**2
    deriv = (cdf(x + h) + cdf(x - h) - 2 * cdf(x)) / h**2
    return dens, deriv, deriv / dens


# Laplace(1)
lap_pdf = lambda y: mp.e ** (-abs(y)) / 2
lap_cdf = lambda y: mp.e**y / 2 if y <= 0 else 1 - mp.e ** (-y) / 2
for x in (mp.mpf("0.5"), mp.mpf(1), mp.mpf("1.5")):
    d, dv, s = smoothed(lap_pdf, lap_cdf, mp.mpf("0.5"), x, kinks=(0,))
    show(f"laplace(1) h=0.5 density({x})", d)
    show(f"laplace(1) h=0.5 deriv({x})", dv)
    show(f"laplace(1) h=0.5 score({x})", s)

# Gaussian
g_pdf = lambda y: mp.e ** (-y * y / 2) / mp.sqrt(2 * mp.pi)
g_cdf = lambda y: mp.ncdf(y)
d, dv, s = smoothed(g_pdf, g_cdf, mp.mpf("0.3"), mp.mpf("0.8"))
show("gaussian h=0.3 density(0.8)", d)
show("gaussian h=0.3 deriv(0.8)", dv)
show("gaussian h=0.3 score(0.8)", s)
d, dv, s = smoothed(g_pdf, g_cdf, mp.mpf("0.3"), mp.mpf(0))
show("gaussian h=0.3 score(0)", s)

# Flattened Laplace(sqrt2, 0.5): kinks at +-(xa-h0), +-(xa+h0), 0.
a = mp.sqrt(2)
hs = mp.mpf("0.5")
xa = a - 1 / a
p1, p2 = xa - hs, xa + hs


def fl_shape(y):
    t = abs(y)
    if t <= p1:
        return mp.mpf(1)
    if t <= p2:
        return mp.e ** (-(a / 2) * (t - p1))
    return mp.e ** (-a * (t - xa))


C = 2 * (mp.quad(fl_shape, [0, p1]) + mp.quad(fl_shape, [p1, p2])
         + mp.quad(fl_shape, [p2, mp.inf]))
fl_pdf = lambda y: fl_shape(y) / C


def fl_cdf(y):
    pts = [p for p in sorted({-p2, -p1, 0, p1, p2}) if p < y]
    total = mp.quad(fl_pdf, [-mp.inf, pts[0]]) if pts else mp.quad(fl_pdf, [-mp.inf, y])
    for i in range(len(pts) - 1):
        total += mp.quad(fl_pdf, [pts[i], pts[i + 1]])
    if pts:
        total += mp.quad(fl_pdf, [pts[-1], y])
    return total


d, dv, s = smoothed(fl_pdf, fl_cdf, mp.mpf("0.2"), mp.mpf("0.9"),
                    kinks=(-p2, -p1, 0, p1, p2))
show("flattened_laplace(sqrt2,0.5) h=0.2 density(0.9)", d)
show("flattened_laplace(sqrt2,0.5) h=0.2 deriv(0.9)", dv)
show("flattened_laplace(sqrt2,0.5) h=0.2 score(0.9)", s)

# Beta(3,3): support [0,1]; window at x=0.95 clips at 1.
b_pdf = lambda y: 30 * y**2 * (1 - y) ** 2 if 0 < y < 1 else mp.mpf(0)
b_cdf = lambda y: mp.mpf(0) if y <= 0 else (mp.mpf(1) if y >= 1 else mp.quad(b_pdf, [0, y]))
d, dv, s = smoothed(b_pdf, b_cdf, mp.mpf("0.1"), mp.mpf("0.95"), kinks=(0, 1))
show("beta(3,3) h=0.1 density(0.95)", d)
show("beta(3,3) h=0.1 deriv(0.95)", dv)
show("beta(3,3) h=0.1 score(0.95)", s)

# Kink-crossing window for a strict sandwich anchor: Laplace(1), x=0.25.
d, dv, s = smoothed(lap_pdf, lap_cdf, mp.mpf("0.5"), mp.mpf("0.25"), kinks=(0,))
show("laplace(1) h=0.5 density(0.25)", d)
show("laplace(1) h=0.5 deriv(0.25)", dv)
show("laplace(1) h=0.5 score(0.25)", s)
d, dv, s = smoothed(lap_pdf, lap_cdf, mp.mpf("0.5"), mp.mpf("-0.25"), kinks=(0,))
show("laplace(1) h=0.5 score(-0.25)", s)
