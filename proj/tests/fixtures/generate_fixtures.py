#!/usr/bin/env python3
"""Regenerates the frozen reference values used by the C++ test suites.

Everything here is computed with mpmath at 30 significant digits by direct
numerical integration of the CPT valuation integral. None of it shares code
with the closed-form implementation. Run once; paste the printed values into
tests/fixture_values.hpp.
"""
import mpmath as mp

mp.mp.dps = 30

Phi = mp.ncdf
def npdf(x):
    return mp.npdf(x)
def Phi_inv(p):
    return -mp.sqrt(2) * mp.erfinv(1 - 2 * mp.mpf(p)) if p != mp.mpf('0.5') else mp.mpf(0)

def distort(p0, g, p):
    return Phi(g * Phi_inv(p) + (1 - g) * Phi_inv(p0))

def dw_times_density(p0, g, q):
    """w'(p) n(q) at p = Phi(q): the chain rule on the definition of w,
    with the n(q) factor of w' cancelled against the reward density."""
    return g * npdf(g * q + (1 - g) * Phi_inv(p0))

def value(vp, x):
    mm, Vm, am, mpl, Vp, ap = vp
    x = mp.mpf(x)
    if x >= 0:
        return mpl * x + Vp * (1 - mp.exp(-ap * x))
    return -(mm * (-x) + Vm * (1 - mp.exp(-am * (-x))))

def gain_pe(m, V, a, mu, s):
    f = lambda r: (m * r + V * (1 - mp.exp(-a * r))) * npdf((r - mu) / s) / s
    return mp.quad(f, [0, mu if mu > 0 else 1, mp.inf])

def loss_pe(m, V, a, mu, s):
    f = lambda r: -(m * (-r) + V * (1 - mp.exp(-a * (-r)))) * npdf((r - mu) / s) / s
    return mp.quad(f, [-mp.inf, mu if mu < 0 else -1, 0])

def cpt(theta):
    mu, sigma, p0m, gm, p0p, gp, mm, Vm, am, mpl, Vp, ap = theta
    s_m = sigma / gm
    s_p = sigma / gp
    mu_hat = mu - sigma * (1 / gm - 1) * Phi_inv(p0m)
    mu_bar = mu + sigma * (1 / gp - 1) * Phi_inv(p0p)
    # Densities of the distorted CDF / distorted tail by the chain rule
    # w'(F(r)) f(r) on the composed curves, not through the stability identity.
    vp = (mm, Vm, am, mpl, Vp, ap)
    def loss_density(r):
        z = (r - mu) / sigma
        return dw_times_density(p0m, gm, z) / sigma
    def gain_density(r):
        z = (r - mu) / sigma
        return dw_times_density(p0p, gp, -z) / sigma
    loss = mp.quad(lambda r: value(vp, r) * loss_density(r), [-mp.inf, -10, -3, -1, 0])
    gain = mp.quad(lambda r: value(vp, r) * gain_density(r), [0, 1, 3, 10, mp.inf])
    return loss, gain, (mu_hat, s_m, mu_bar, s_p)

def show(name, x):
    print(f"{name} = {mp.nstr(x, 20)}", flush=True)

if __name__ == "__main__":
    show("phi_cdf_1", Phi(1))
    show("phi_pdf_1", npdf(1))
    show("distort_037_061_at_01", distort(mp.mpf('0.37'), mp.mpf('0.61'), mp.mpf('0.1')))
    p0, g = mp.mpf('0.37'), mp.mpf('0.61')
    show("distort_derivative_037_061_at_025",
         mp.diff(lambda p: distort(p0, g, p), mp.mpf('0.25')))
    show("inflection_037_061", Phi(g * Phi_inv(p0) / (1 + g)))
    show("value_1_2_05_at_4", 4 + 2 * (1 - mp.exp(-2)))
    show("gain_pe_1_2_05_mu1_s2", gain_pe(1, 2, mp.mpf('0.5'), 1, 2))
    show("loss_pe_2_3_1_mu-05_s15", loss_pe(2, 3, 1, mp.mpf('-0.5'), mp.mpf('1.5')))

    theta = [mp.mpf(x) for x in ('0.5', '1', '0.37', '0.61', '0.37', '0.61',
                                 '2.25', '2.25', '1', '1', '1', '1')]
    loss, gain, inter = cpt(theta)
    show("fixture_loss", loss)
    show("fixture_gain", gain)
    show("fixture_total", loss + gain)
    for n, v in zip(("mu_hat_minus", "sigma_hat_minus", "mu_bar_hat_plus", "sigma_hat_plus"), inter):
        show("fixture_" + n, v)
    total = loss + gain
    vp = theta[6:]
    ce = mp.findroot(lambda c: value(vp, c) - total, 0 if total == 0 else total / 2)
    show("fixture_ce", ce)

    names = ("mu", "sigma", "p0_minus", "gamma_minus", "p0_plus", "gamma_plus",
             "m_minus", "V_minus", "a_minus", "m_plus", "V_plus", "a_plus")
    for i, n in enumerate(names):
        def f(t, i=i):
            th = list(theta)
            th[i] = t
            l, gg, _ = cpt(th)
            return l + gg
        show("fixture_grad_" + n, mp.diff(f, theta[i], h=mp.mpf('1e-10')))
