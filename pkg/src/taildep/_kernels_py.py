"""Pure numpy implementation of the numerical kernels.

This is the fallback backend; `taildep._kernels_cy` implements the same
interface as a compiled extension and is preferred at import time.  Both
backends must agree (see tests/test_kernels.py and benchmarks/).

Kernel surface
--------------
al_cdf / al_pdf / al_quantile      asymmetric Laplace, vectorized
margin_coefficients                closed-form mixture-margin coefficients
margin_cdf / margin_pdf            piecewise closed-form margin
margin_quantile                    bracketed bisection + Newton inversion
bvn_cdf                            bivariate normal CDF (Gauss-Legendre)
model_joint                        r-integral of the joint CDF/PDF/partial
"""

import numpy as np
from scipy import special as sps

BACKEND_NAME = "python"

_HALF_BAND = 1e-8  # switch to the delta = 1/2 closed forms inside this band
_F_CLAMP = 1e-16  # clamp for CDF values fed into the normal quantile

# 20-point Gauss-Legendre rule on (-1, 1): positive half-nodes and weights.
_GL_X = np.array([
    9.93128599185094885e-01, 9.63971927277913809e-01, 9.12234428251325835e-01,
    8.39116971822218782e-01, 7.46331906460150796e-01, 6.36053680726515025e-01,
    5.10867001950827126e-01, 3.73706088715419549e-01, 2.27785851141645096e-01,
    7.65265211334973383e-02,
])
_GL_W = np.array([
    1.76140071391532732e-02, 4.06014298003862170e-02, 6.26720483341094425e-02,
    8.32767415767046715e-02, 1.01930119817240261e-01, 1.18194531961518245e-01,
    1.31688638449176526e-01, 1.42096109318381875e-01, 1.49172986472603658e-01,
    1.52753387130725782e-01,
])


# ---------------------------------------------------------------------------
# asymmetric Laplace
# ---------------------------------------------------------------------------

def al_cdf(dl, du, x):
    x = np.asarray(x, dtype=float)
    s = dl + du
    return np.where(x <= 0.0,
                    (dl / s) * np.exp(np.minimum(x, 0.0) / dl),
                    1.0 - (du / s) * np.exp(-np.maximum(x, 0.0) / du))


def al_pdf(dl, du, x):
    x = np.asarray(x, dtype=float)
    s = dl + du
    return np.where(x <= 0.0,
                    np.exp(np.minimum(x, 0.0) / dl) / s,
                    np.exp(-np.maximum(x, 0.0) / du) / s)


def al_quantile(dl, du, p):
    p = np.asarray(p, dtype=float)
    s = dl + du
    split = dl / s
    pl = np.minimum(p, split)
    pu = np.maximum(p, split)
    return np.where(p <= split,
                    dl * np.log(pl * s / dl),
                    -du * np.log((1.0 - pu) * s / du))


# ---------------------------------------------------------------------------
# model margin: X = R + W with R ~ AL(dl, du), W ~ AL(1-dl, 1-du)
# ---------------------------------------------------------------------------

def margin_coefficients(dl, du):
    """Closed-form coefficients of the margin of R + W.

    Returns (cl1, clx, cl2, al1, al2, cu1, cux, cu2, au1, au2) with

        F(x) = (cl1 + clx*x) exp(x/al1) + cl2 exp(x/al2),          x <= 0,
        F(x) = 1 + (cu1 + cux*x) exp(-x/au1) + cu2 exp(-x/au2),    x > 0.

    The generic constants degenerate (division by 2*delta - 1) near
    delta = 1/2, where the separately derived closed forms take over.
    """
    l_half = abs(dl - 0.5) < _HALF_BAND
    u_half = abs(du - 0.5) < _HALF_BAND

    def _p(b):
        return 2.0 / ((1.0 + 2.0 * b) * (2.0 * b - 3.0))

    def _q(b):
        return (5.0 + 12.0 * b - 12.0 * b * b) / ((1.0 + 2.0 * b) ** 2 * (2.0 * b - 3.0) ** 2)

    if not l_half:
        if not u_half:
            k1 = dl ** 3 / ((dl + du) * (2.0 * dl - 1.0) * (1.0 + dl - du))
            k2 = (dl - 1.0) ** 3 / ((2.0 * dl - 1.0) * (dl - du - 1.0) * (2.0 - dl - du))
            lower = (k1, 0.0, -k2, dl, 1.0 - dl)
        else:
            cl1 = 4.0 * dl ** 3 / ((1.0 + 2.0 * dl) ** 2 * (2.0 * dl - 1.0))
            cl2 = 4.0 * (dl - 1.0) ** 3 / ((2.0 * dl - 1.0) * (3.0 - 2.0 * dl) ** 2)
            lower = (cl1, 0.0, cl2, dl, 1.0 - dl)
    else:
        lower = (_q(du), _p(du), 0.0, 0.5, 1.0)

    if not u_half:
        if not l_half:
            k3 = du ** 3 / ((dl + du) * (2.0 * du - 1.0) * (dl - du - 1.0))
            k4 = (du - 1.0) ** 3 / ((2.0 * du - 1.0) * (1.0 + dl - du) * (2.0 - dl - du))
            upper = (k3, 0.0, -k4, du, 1.0 - du)
        else:
            cu1 = -4.0 * du ** 3 / ((1.0 + 2.0 * du) ** 2 * (2.0 * du - 1.0))
            cu2 = -4.0 * (du - 1.0) ** 3 / ((2.0 * du - 1.0) * (3.0 - 2.0 * du) ** 2)
            upper = (cu1, 0.0, cu2, du, 1.0 - du)
    else:
        upper = (-_q(dl), _p(dl), 0.0, 0.5, 1.0)

    return lower + upper


def margin_cdf(dl, du, x):
    x = np.asarray(x, dtype=float)
    cl1, clx, cl2, al1, al2, cu1, cux, cu2, au1, au2 = margin_coefficients(dl, du)
    xn = np.minimum(x, 0.0)
    xp = np.maximum(x, 0.0)
    left = (cl1 + clx * xn) * np.exp(xn / al1) + cl2 * np.exp(xn / al2)
    right = 1.0 + (cu1 + cux * xp) * np.exp(-xp / au1) + cu2 * np.exp(-xp / au2)
    return np.where(x <= 0.0, left, right)


def margin_pdf(dl, du, x):
    x = np.asarray(x, dtype=float)
    cl1, clx, cl2, al1, al2, cu1, cux, cu2, au1, au2 = margin_coefficients(dl, du)
    xn = np.minimum(x, 0.0)
    xp = np.maximum(x, 0.0)
    left = (clx + (cl1 + clx * xn) / al1) * np.exp(xn / al1) + (cl2 / al2) * np.exp(xn / al2)
    right = (cux - (cu1 + cux * xp) / au1) * np.exp(-xp / au1) - (cu2 / au2) * np.exp(-xp / au2)
    return np.where(x <= 0.0, left, right)


def margin_quantile(dl, du, p):
    """Invert the margin CDF: bracket, bisect to width 1e-3, then Newton."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    anchor = al_quantile(dl, du, p) + al_quantile(1.0 - dl, 1.0 - du, p)
    lo = anchor - 2.0
    hi = anchor + 2.0

    step = 2.0
    for _ in range(80):
        mask = margin_cdf(dl, du, lo) > p
        if not mask.any():
            break
        lo = np.where(mask, lo - step, lo)
        step *= 2.0
    step = 2.0
    for _ in range(80):
        mask = margin_cdf(dl, du, hi) < p
        if not mask.any():
            break
        hi = np.where(mask, hi + step, hi)
        step *= 2.0

    while np.max(hi - lo) > 1e-3:
        mid = 0.5 * (lo + hi)
        below = margin_cdf(dl, du, mid) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)

    x = 0.5 * (lo + hi)
    for _ in range(8):
        fx = margin_cdf(dl, du, x) - p
        dfx = margin_pdf(dl, du, x)
        newton = x - fx / np.where(dfx > 0.0, dfx, 1.0)
        x_new = np.clip(newton, lo, hi)
        below = (margin_cdf(dl, du, x_new) - p) < 0.0
        lo = np.where(below, x_new, lo)
        hi = np.where(below, hi, x_new)
        x = x_new
        if np.max(np.abs(fx)) < 1e-14:
            break
    return x


# ---------------------------------------------------------------------------
# bivariate normal CDF
# ---------------------------------------------------------------------------

def _bvn_upper(dh, dk, r):
    """P(X > dh, Y > dk) by the single-integral Gauss-Legendre reduction.

    Main branch for |r| <= 0.925, complementary reduction above; both follow
    the classical rectangular-probability algorithm.
    """
    h = np.asarray(dh, dtype=float)
    k = np.asarray(dk, dtype=float)
    hk = h * k
    twopi = 2.0 * np.pi

    if abs(r) < 0.925:
        bvn = np.zeros_like(h)
        if r != 0.0:
            hs = 0.5 * (h * h + k * k)
            asr = np.arcsin(r)
            for xi, wi in zip(_GL_X, _GL_W):
                for sgn in (1.0, -1.0):
                    sn = np.sin(asr * (1.0 + sgn * xi) / 2.0)
                    bvn += wi * np.exp((sn * hk - hs) / (1.0 - sn * sn))
            bvn *= asr / (2.0 * twopi)
        return bvn + sps.ndtr(-h) * sps.ndtr(-k)

    if r < 0.0:
        k = -k
        hk = -hk
    a2 = (1.0 - r) * (1.0 + r)
    a = np.sqrt(a2)
    bs = (h - k) ** 2
    c = (4.0 - hk) / 8.0
    d = (12.0 - hk) / 16.0
    asr = -(bs / a2 + hk) / 2.0
    bvn = np.where(asr > -100.0,
                   a * np.exp(asr) * (1.0 - c * (bs - a2) * (1.0 - d * bs / 5.0) / 3.0
                                      + c * d * a2 * a2 / 5.0),
                   0.0)
    mask = -hk < 100.0
    b = np.sqrt(bs)
    sp = np.where(mask,
                  np.exp(-np.where(mask, hk, 0.0) / 2.0) * np.sqrt(twopi)
                  * sps.ndtr(-b / a) * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0),
                  0.0)
    bvn = bvn - sp
    ah = a / 2.0
    for xi, wi in zip(_GL_X, _GL_W):
        for sgn in (1.0, -1.0):
            xs = (ah * (1.0 + sgn * xi)) ** 2
            rs = np.sqrt(1.0 - xs)
            asr1 = -(bs / xs + hk) / 2.0
            live = asr1 > -100.0
            spn = 1.0 + c * xs * (1.0 + d * xs)
            ep = np.exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
            bvn = bvn + np.where(live, ah * wi * np.exp(np.where(live, asr1, 0.0)) * (ep - spn), 0.0)
    bvn = -bvn / twopi
    if r > 0.0:
        bvn = bvn + sps.ndtr(-np.maximum(h, k))
    else:
        bvn = -bvn
        bvn = bvn + np.where(k > h, sps.ndtr(k) - sps.ndtr(h), 0.0)
    return bvn


def bvn_cdf(x, y, rho):
    """P(X <= x, Y <= y); symmetric in (x, y) bit for bit."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    out = _bvn_upper(-lo, -hi, rho)
    return np.clip(out, 0.0, 1.0)


# ---------------------------------------------------------------------------
# joint distribution of the mixture model by composite Simpson quadrature
# ---------------------------------------------------------------------------

MODE_CDF = 0
MODE_PDF = 1
MODE_PARTIAL1 = 2


def _simpson_pattern(ms):
    pat = np.full(ms + 1, 2.0)
    pat[1::2] = 4.0
    pat[0] = pat[ms] = 1.0
    return pat / 3.0


def model_joint(dl, du, rho, x1, x2, subintervals, tail_cut, mode):
    """Integrate the joint CDF (mode 0), density (1) or d/dx1 CDF (2) over r.

    The integrand has derivative kinks at r = 0, x1, x2; those points are
    forced onto panel boundaries so composite Simpson keeps its O(h^4) rate.
    """
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    x1, x2 = np.broadcast_arrays(x1, x2)
    n = x1.size

    wdl = 1.0 - dl
    wdu = 1.0 - du
    rlo = float(al_quantile(dl, du, tail_cut))
    rhi = float(al_quantile(dl, du, 1.0 - tail_cut))
    ms = max(2, 2 * ((subintervals + 7) // 8))
    unit = np.arange(ms + 1) / ms
    simp = _simpson_pattern(ms)

    kinks = np.sort(np.stack([np.zeros(n), x1, x2], axis=1), axis=1)
    bounds = np.empty((n, 5))
    bounds[:, 0] = rlo
    bounds[:, 4] = rhi
    bounds[:, 1:4] = np.clip(kinks, rlo, rhi)

    omr2 = 1.0 - rho * rho
    sq_omr2 = np.sqrt(omr2)

    out = np.zeros(n)
    chunk = max(1, int(4_000_000 // (ms + 1)))
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        x1c = x1[sl][:, None]
        x2c = x2[sl][:, None]
        acc = np.zeros(sl.stop - sl.start)
        for seg in range(4):
            a = bounds[sl, seg]
            b = bounds[sl, seg + 1]
            h = (b - a) / ms
            nodes = a[:, None] + (b - a)[:, None] * unit
            fr = al_pdf(dl, du, nodes)
            f1 = np.clip(al_cdf(wdl, wdu, x1c - nodes), _F_CLAMP, 1.0 - _F_CLAMP)
            f2 = np.clip(al_cdf(wdl, wdu, x2c - nodes), _F_CLAMP, 1.0 - _F_CLAMP)
            z1 = sps.ndtri(f1)
            z2 = sps.ndtri(f2)
            if mode == MODE_CDF:
                val = bvn_cdf(z1, z2, rho) * fr
            elif mode == MODE_PDF:
                expo = -rho * (rho * (z1 * z1 + z2 * z2) - 2.0 * z1 * z2) / (2.0 * omr2)
                val = (np.exp(expo) / sq_omr2
                       * al_pdf(wdl, wdu, x1c - nodes)
                       * al_pdf(wdl, wdu, x2c - nodes) * fr)
            elif mode == MODE_PARTIAL1:
                val = (sps.ndtr((z2 - rho * z1) / sq_omr2)
                       * al_pdf(wdl, wdu, x1c - nodes) * fr)
            else:
                raise ValueError(f"unknown mode {mode}")
            acc += h * (val @ simp)
        out[sl] = acc
    return out
