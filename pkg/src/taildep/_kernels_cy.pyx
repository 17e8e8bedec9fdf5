# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the numerical kernels.

Mirrors taildep._kernels_py function for function; the pure-numpy module is
the reference implementation and the authority on semantics.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport asin, erfc, exp, fabs, fmax, fmin, log, sin, sqrt

cnp.import_array()

BACKEND_NAME = "cython"

cdef double SQRT2 = 1.4142135623730951
cdef double SQRT_TWOPI = 2.5066282746310002
cdef double INV_SQRT_TWOPI = 0.3989422804014327
cdef double TWOPI = 6.283185307179586
cdef double HALF_BAND = 1e-8
cdef double F_CLAMP = 1e-16

cdef double[10] GL_X
cdef double[10] GL_W
GL_X[0] = 9.93128599185094885e-01; GL_W[0] = 1.76140071391532732e-02
GL_X[1] = 9.63971927277913809e-01; GL_W[1] = 4.06014298003862170e-02
GL_X[2] = 9.12234428251325835e-01; GL_W[2] = 6.26720483341094425e-02
GL_X[3] = 8.39116971822218782e-01; GL_W[3] = 8.32767415767046715e-02
GL_X[4] = 7.46331906460150796e-01; GL_W[4] = 1.01930119817240261e-01
GL_X[5] = 6.36053680726515025e-01; GL_W[5] = 1.18194531961518245e-01
GL_X[6] = 5.10867001950827126e-01; GL_W[6] = 1.31688638449176526e-01
GL_X[7] = 3.73706088715419549e-01; GL_W[7] = 1.42096109318381875e-01
GL_X[8] = 2.27785851141645096e-01; GL_W[8] = 1.49172986472603658e-01
GL_X[9] = 7.65265211334973383e-02; GL_W[9] = 1.52753387130725782e-01


# -- scalar normal helpers ---------------------------------------------------

cdef inline double phi_cdf_s(double x) nogil:
    return 0.5 * erfc(-x / SQRT2)


cdef inline double phi_pdf_s(double x) nogil:
    return INV_SQRT_TWOPI * exp(-0.5 * x * x)


cdef double phi_inv_s(double p) nogil:
    # Acklam's rational approximation plus one Halley refinement.
    cdef double q, r, x, e, u
    if p < 0.02425:
        q = sqrt(-2.0 * log(p))
        x = (((((-7.784894002430293e-03 * q - 3.223964580411365e-01) * q
                - 2.400758277161838e+00) * q - 2.549732539343734e+00) * q
              + 4.374664141464968e+00) * q + 2.938163982698783e+00) / \
            ((((7.784695709041462e-03 * q + 3.224671290700398e-01) * q
               + 2.445134137142996e+00) * q + 3.754408661907416e+00) * q + 1.0)
    elif p > 0.97575:
        q = sqrt(-2.0 * log(1.0 - p))
        x = -(((((-7.784894002430293e-03 * q - 3.223964580411365e-01) * q
                 - 2.400758277161838e+00) * q - 2.549732539343734e+00) * q
               + 4.374664141464968e+00) * q + 2.938163982698783e+00) / \
            ((((7.784695709041462e-03 * q + 3.224671290700398e-01) * q
               + 2.445134137142996e+00) * q + 3.754408661907416e+00) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        x = (((((-3.969683028665376e+01 * r + 2.209460984245205e+02) * r
                - 2.759285104469687e+02) * r + 1.383577518672690e+02) * r
              - 3.066479806614716e+01) * r + 2.506628277459239e+00) * q / \
            (((((-5.447609879822406e+01 * r + 1.615858368580409e+02) * r
                - 1.556989798598866e+02) * r + 6.680131188771972e+01) * r
              - 1.328068155288572e+01) * r + 1.0)
    if x * x < 1000.0:
        e = phi_cdf_s(x) - p
        u = e * SQRT_TWOPI * exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    return x


# -- asymmetric Laplace -------------------------------------------------------

cdef inline double al_cdf_s(double a, double b, double x) nogil:
    if x <= 0.0:
        return (a / (a + b)) * exp(x / a)
    return 1.0 - (b / (a + b)) * exp(-x / b)


cdef inline double al_pdf_s(double a, double b, double x) nogil:
    if x <= 0.0:
        return exp(x / a) / (a + b)
    return exp(-x / b) / (a + b)


cdef inline double al_q_s(double a, double b, double p) nogil:
    cdef double s = a + b
    if p <= a / s:
        return a * log(p * s / a)
    return -b * log((1.0 - p) * s / b)


def al_cdf(double dl, double du, object x):
    cdef cnp.ndarray[double, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xa.shape[0])
    cdef Py_ssize_t i
    for i in range(xa.shape[0]):
        out[i] = al_cdf_s(dl, du, xa[i])
    return out


def al_pdf(double dl, double du, object x):
    cdef cnp.ndarray[double, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xa.shape[0])
    cdef Py_ssize_t i
    for i in range(xa.shape[0]):
        out[i] = al_pdf_s(dl, du, xa[i])
    return out


def al_quantile(double dl, double du, object p):
    cdef cnp.ndarray[double, ndim=1] pa = np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(pa.shape[0])
    cdef Py_ssize_t i
    for i in range(pa.shape[0]):
        out[i] = al_q_s(dl, du, pa[i])
    return out


# -- model margin --------------------------------------------------------------

cdef inline double _pcoef(double b) nogil:
    return 2.0 / ((1.0 + 2.0 * b) * (2.0 * b - 3.0))


cdef inline double _qcoef(double b) nogil:
    return (5.0 + 12.0 * b - 12.0 * b * b) / \
        ((1.0 + 2.0 * b) * (1.0 + 2.0 * b) * (2.0 * b - 3.0) * (2.0 * b - 3.0))


cdef void margin_coefs_c(double dl, double du, double * c) nogil:
    # layout: cl1, clx, cl2, al1, al2, cu1, cux, cu2, au1, au2
    cdef bint l_half = fabs(dl - 0.5) < HALF_BAND
    cdef bint u_half = fabs(du - 0.5) < HALF_BAND
    cdef double k1, k2, k3, k4
    if not l_half:
        if not u_half:
            k1 = dl * dl * dl / ((dl + du) * (2.0 * dl - 1.0) * (1.0 + dl - du))
            k2 = (dl - 1.0) ** 3 / ((2.0 * dl - 1.0) * (dl - du - 1.0) * (2.0 - dl - du))
            c[0] = k1; c[1] = 0.0; c[2] = -k2; c[3] = dl; c[4] = 1.0 - dl
        else:
            c[0] = 4.0 * dl ** 3 / ((1.0 + 2.0 * dl) ** 2 * (2.0 * dl - 1.0))
            c[1] = 0.0
            c[2] = 4.0 * (dl - 1.0) ** 3 / ((2.0 * dl - 1.0) * (3.0 - 2.0 * dl) ** 2)
            c[3] = dl; c[4] = 1.0 - dl
    else:
        c[0] = _qcoef(du); c[1] = _pcoef(du); c[2] = 0.0; c[3] = 0.5; c[4] = 1.0
    if not u_half:
        if not l_half:
            k3 = du * du * du / ((dl + du) * (2.0 * du - 1.0) * (dl - du - 1.0))
            k4 = (du - 1.0) ** 3 / ((2.0 * du - 1.0) * (1.0 + dl - du) * (2.0 - dl - du))
            c[5] = k3; c[6] = 0.0; c[7] = -k4; c[8] = du; c[9] = 1.0 - du
        else:
            c[5] = -4.0 * du ** 3 / ((1.0 + 2.0 * du) ** 2 * (2.0 * du - 1.0))
            c[6] = 0.0
            c[7] = -4.0 * (du - 1.0) ** 3 / ((2.0 * du - 1.0) * (3.0 - 2.0 * du) ** 2)
            c[8] = du; c[9] = 1.0 - du
    else:
        c[5] = -_qcoef(dl); c[6] = _pcoef(dl); c[7] = 0.0; c[8] = 0.5; c[9] = 1.0


def margin_coefficients(double dl, double du):
    cdef double c[10]
    margin_coefs_c(dl, du, c)
    return tuple(c[i] for i in range(10))


cdef inline double margin_cdf_s(double * c, double x) nogil:
    if x <= 0.0:
        return (c[0] + c[1] * x) * exp(x / c[3]) + c[2] * exp(x / c[4])
    return 1.0 + (c[5] + c[6] * x) * exp(-x / c[8]) + c[7] * exp(-x / c[9])


cdef inline double margin_pdf_s(double * c, double x) nogil:
    if x <= 0.0:
        return (c[1] + (c[0] + c[1] * x) / c[3]) * exp(x / c[3]) + (c[2] / c[4]) * exp(x / c[4])
    return (c[6] - (c[5] + c[6] * x) / c[8]) * exp(-x / c[8]) - (c[7] / c[9]) * exp(-x / c[9])


cdef double margin_q_s(double * c, double dl, double du, double p) nogil:
    cdef double anchor = al_q_s(dl, du, p) + al_q_s(1.0 - dl, 1.0 - du, p)
    cdef double lo = anchor - 2.0
    cdef double hi = anchor + 2.0
    cdef double step = 2.0
    cdef double mid, x, fx, dfx, xn
    cdef int it
    for it in range(80):
        if margin_cdf_s(c, lo) <= p:
            break
        lo -= step
        step *= 2.0
    step = 2.0
    for it in range(80):
        if margin_cdf_s(c, hi) >= p:
            break
        hi += step
        step *= 2.0
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if margin_cdf_s(c, mid) < p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for it in range(8):
        fx = margin_cdf_s(c, x) - p
        dfx = margin_pdf_s(c, x)
        if dfx > 0.0:
            xn = x - fx / dfx
        else:
            xn = 0.5 * (lo + hi)
        if xn < lo:
            xn = lo
        elif xn > hi:
            xn = hi
        if margin_cdf_s(c, xn) - p < 0.0:
            lo = xn
        else:
            hi = xn
        x = xn
        if fabs(fx) < 1e-14:
            break
    return x


def margin_cdf(double dl, double du, object x):
    cdef cnp.ndarray[double, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xa.shape[0])
    cdef double c[10]
    cdef Py_ssize_t i
    margin_coefs_c(dl, du, c)
    for i in range(xa.shape[0]):
        out[i] = margin_cdf_s(c, xa[i])
    return out


def margin_pdf(double dl, double du, object x):
    cdef cnp.ndarray[double, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xa.shape[0])
    cdef double c[10]
    cdef Py_ssize_t i
    margin_coefs_c(dl, du, c)
    for i in range(xa.shape[0]):
        out[i] = margin_pdf_s(c, xa[i])
    return out


def margin_quantile(double dl, double du, object p):
    cdef cnp.ndarray[double, ndim=1] pa = np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(pa.shape[0])
    cdef double c[10]
    cdef Py_ssize_t i
    margin_coefs_c(dl, du, c)
    for i in range(pa.shape[0]):
        out[i] = margin_q_s(c, dl, du, pa[i])
    return out


# -- bivariate normal CDF -------------------------------------------------------

cdef double bvn_upper_s(double dh, double dk, double r) nogil:
    # P(X > dh, Y > dk): Gauss-Legendre on the arcsine reduction, with the
    # complementary form plus series correction for |r| > 0.925.
    cdef double h = dh, k = dk, hk = dh * dk, bvn = 0.0
    cdef double hs, asr, sn, a2, a, bs, c, d, b, sp, ah, xs, rs, asr1, ep
    cdef int i
    if fabs(r) < 0.925:
        if r != 0.0:
            hs = 0.5 * (h * h + k * k)
            asr = asin(r)
            for i in range(10):
                sn = sin(asr * (1.0 + GL_X[i]) / 2.0)
                bvn += GL_W[i] * exp((sn * hk - hs) / (1.0 - sn * sn))
                sn = sin(asr * (1.0 - GL_X[i]) / 2.0)
                bvn += GL_W[i] * exp((sn * hk - hs) / (1.0 - sn * sn))
            bvn = bvn * asr / (2.0 * TWOPI)
        return bvn + phi_cdf_s(-h) * phi_cdf_s(-k)

    if r < 0.0:
        k = -k
        hk = -hk
    a2 = (1.0 - r) * (1.0 + r)
    a = sqrt(a2)
    bs = (h - k) * (h - k)
    c = (4.0 - hk) / 8.0
    d = (12.0 - hk) / 16.0
    asr = -(bs / a2 + hk) / 2.0
    if asr > -100.0:
        bvn = a * exp(asr) * (1.0 - c * (bs - a2) * (1.0 - d * bs / 5.0) / 3.0
                              + c * d * a2 * a2 / 5.0)
    if -hk < 100.0:
        b = sqrt(bs)
        bvn -= exp(-hk / 2.0) * SQRT_TWOPI * phi_cdf_s(-b / a) * b \
            * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0)
    ah = a / 2.0
    for i in range(10):
        xs = (ah * (1.0 + GL_X[i])) ** 2
        rs = sqrt(1.0 - xs)
        asr1 = -(bs / xs + hk) / 2.0
        if asr1 > -100.0:
            sp = 1.0 + c * xs * (1.0 + d * xs)
            ep = exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
            bvn += ah * GL_W[i] * exp(asr1) * (ep - sp)
        xs = (ah * (1.0 - GL_X[i])) ** 2
        rs = sqrt(1.0 - xs)
        asr1 = -(bs / xs + hk) / 2.0
        if asr1 > -100.0:
            sp = 1.0 + c * xs * (1.0 + d * xs)
            ep = exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
            bvn += ah * GL_W[i] * exp(asr1) * (ep - sp)
    bvn = -bvn / TWOPI
    if r > 0.0:
        bvn += phi_cdf_s(-fmax(h, k))
    else:
        bvn = -bvn
        if k > h:
            bvn += phi_cdf_s(k) - phi_cdf_s(h)
    return bvn


cdef inline double bvn_cdf_s(double x, double y, double r) nogil:
    cdef double lo = fmin(x, y)
    cdef double hi = fmax(x, y)
    cdef double v = bvn_upper_s(-lo, -hi, r)
    return fmin(fmax(v, 0.0), 1.0)


def bvn_cdf(object x, object y, double rho):
    cdef cnp.ndarray[double, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ya = np.ascontiguousarray(y, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xa.shape[0])
    cdef Py_ssize_t i
    for i in range(xa.shape[0]):
        out[i] = bvn_cdf_s(xa[i], ya[i], rho)
    return out


# -- joint distribution quadrature ----------------------------------------------

cdef double _joint_point(double dl, double du, double rho, double omr2,
                         double sq_omr2, double wdl, double wdu,
                         double x1, double x2, double rlo, double rhi,
                         int ms, int mode) nogil:
    cdef double b[5]
    cdef double k1 = 0.0, k2 = x1, k3 = x2, t
    cdef double acc = 0.0, seg_sum, a, bb, h, r, f1, f2, z1, z2, fr, v, w
    cdef int seg, j
    # sort the three kink points
    if k1 > k2:
        t = k1; k1 = k2; k2 = t
    if k2 > k3:
        t = k2; k2 = k3; k3 = t
    if k1 > k2:
        t = k1; k1 = k2; k2 = t
    b[0] = rlo
    b[1] = fmin(fmax(k1, rlo), rhi)
    b[2] = fmin(fmax(k2, rlo), rhi)
    b[3] = fmin(fmax(k3, rlo), rhi)
    b[4] = rhi
    for seg in range(4):
        a = b[seg]
        bb = b[seg + 1]
        if bb <= a:
            continue
        h = (bb - a) / ms
        seg_sum = 0.0
        for j in range(ms + 1):
            r = a + h * j
            if j == 0 or j == ms:
                w = 1.0
            elif j & 1:
                w = 4.0
            else:
                w = 2.0
            fr = al_pdf_s(dl, du, r)
            if mode == 1:
                f1 = al_cdf_s(wdl, wdu, x1 - r)
                f2 = al_cdf_s(wdl, wdu, x2 - r)
                f1 = fmin(fmax(f1, F_CLAMP), 1.0 - F_CLAMP)
                f2 = fmin(fmax(f2, F_CLAMP), 1.0 - F_CLAMP)
                z1 = phi_inv_s(f1)
                z2 = phi_inv_s(f2)
                v = exp(-rho * (rho * (z1 * z1 + z2 * z2) - 2.0 * z1 * z2)
                        / (2.0 * omr2)) / sq_omr2 \
                    * al_pdf_s(wdl, wdu, x1 - r) * al_pdf_s(wdl, wdu, x2 - r)
            elif mode == 0:
                f1 = al_cdf_s(wdl, wdu, x1 - r)
                f2 = al_cdf_s(wdl, wdu, x2 - r)
                f1 = fmin(fmax(f1, F_CLAMP), 1.0 - F_CLAMP)
                f2 = fmin(fmax(f2, F_CLAMP), 1.0 - F_CLAMP)
                z1 = phi_inv_s(f1)
                z2 = phi_inv_s(f2)
                v = bvn_cdf_s(z1, z2, rho)
            else:
                f1 = al_cdf_s(wdl, wdu, x1 - r)
                f2 = al_cdf_s(wdl, wdu, x2 - r)
                f1 = fmin(fmax(f1, F_CLAMP), 1.0 - F_CLAMP)
                f2 = fmin(fmax(f2, F_CLAMP), 1.0 - F_CLAMP)
                z1 = phi_inv_s(f1)
                z2 = phi_inv_s(f2)
                v = phi_cdf_s((z2 - rho * z1) / sq_omr2) * al_pdf_s(wdl, wdu, x1 - r)
            seg_sum += w * (v * fr)
        acc += seg_sum * (h / 3.0)
    return acc


def model_joint(double dl, double du, double rho, object x1o, object x2o,
                int subintervals, double tail_cut, int mode):
    cdef cnp.ndarray[double, ndim=1] x1 = np.ascontiguousarray(x1o, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] x2 = np.ascontiguousarray(x2o, dtype=np.float64)
    if x1.shape[0] != x2.shape[0]:
        raise ValueError("x1 and x2 must have equal length")
    cdef Py_ssize_t n = x1.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef double wdl = 1.0 - dl
    cdef double wdu = 1.0 - du
    cdef double rlo = al_q_s(dl, du, tail_cut)
    cdef double rhi = al_q_s(dl, du, 1.0 - tail_cut)
    cdef int ms = max(2, 2 * ((subintervals + 7) // 8))
    cdef double omr2 = 1.0 - rho * rho
    cdef double sq_omr2 = sqrt(omr2)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _joint_point(dl, du, rho, omr2, sq_omr2, wdl, wdu,
                                  x1[i], x2[i], rlo, rhi, ms, mode)
    return out
