# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Runge-Kutta kernels for the (optionally forced) Morse oscillator.

A Dormand-Prince 4(5) pair with FSAL and step-size control, a classical
fixed-step RK4, and an arclength-accumulating variant driving the
Lagrangian-descriptor sweeps.  ``rk_py`` is the pure-Python twin with the
identical algorithm; ``morseosc.kernels`` selects one at import time.

Backward integration reparametrizes time as s = -t so the controller only
ever sees positive steps.  All routines are pure functions of their
arguments: given identical inputs they produce bitwise-identical outputs
regardless of threading.
"""

from libc.math cimport ceil, cos, exp, fabs, fmax, fmin, isfinite, pow, sqrt


cdef int STATUS_OK = 0
cdef int STATUS_ESCAPED = 1
cdef int STATUS_STEP_LIMIT = 2
cdef int STATUS_BLOWUP = 3

# Dormand-Prince 5(4) tableau
cdef double C2 = 1.0 / 5.0
cdef double C3 = 3.0 / 10.0
cdef double C4 = 4.0 / 5.0
cdef double C5 = 8.0 / 9.0
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0
cdef double A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0
cdef double A42 = -56.0 / 15.0
cdef double A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0
cdef double A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0
cdef double A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0
cdef double A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0
cdef double B3 = 500.0 / 1113.0
cdef double B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0
cdef double B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0
cdef double E3 = -71.0 / 16695.0
cdef double E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0
cdef double E7 = -1.0 / 40.0


cdef struct Sys:
    double two_D_alpha
    double alpha
    double inv_m
    double eps
    double omega


cdef inline void _rhs(Sys* sp, double t, double q, double p, double dirn,
                      bint track, double* dq, double* dp, double* dL) nogil:
    cdef double u = exp(-sp.alpha * q)
    cdef double fq = p * sp.inv_m
    cdef double fp = -sp.two_D_alpha * u * (1.0 - u) + sp.eps * cos(sp.omega * t)
    dq[0] = dirn * fq
    dp[0] = dirn * fp
    if track:
        dL[0] = sqrt(fq * fq + fp * fp)
    else:
        dL[0] = 0.0


cdef int _rk45(Sys* sp, double t_begin, double dirn, double duration,
               double* q_io, double* p_io, double* L_io, bint track,
               double rtol, double atol, long max_steps, double q_ceiling,
               double* sigma_out, long* nsteps_out, long* nevals_out) nogil:
    cdef double q = q_io[0], p = p_io[0], L = L_io[0]
    cdef double sigma = 0.0
    cdef long attempts = 0, nevals = 0
    cdef int status = STATUS_STEP_LIMIT
    cdef int ncomp = 3 if track else 2
    cdef bint last_rejected = False, is_last, ok
    cdef double k1q, k1p, k1L, k2q, k2p, k2L, k3q, k3p, k3L, k4q, k4p, k4L
    cdef double k5q, k5p, k5L, k6q, k6p, k6L, k7q, k7p, k7L
    cdef double yq, yp, yL, q5, p5, L5, e_q, e_p, e_L
    cdef double h, h0, h1, d0, d1, d2, err, fac, scq, scp, scL, r

    _rhs(sp, t_begin, q, p, dirn, track, &k1q, &k1p, &k1L)
    nevals += 1

    # Hairer-style first step
    scq = atol + rtol * fabs(q)
    scp = atol + rtol * fabs(p)
    scL = atol + rtol * fabs(L)
    d0 = (q / scq) * (q / scq) + (p / scp) * (p / scp)
    d1 = (k1q / scq) * (k1q / scq) + (k1p / scp) * (k1p / scp)
    if track:
        d0 += (L / scL) * (L / scL)
        d1 += (k1L / scL) * (k1L / scL)
    d0 = sqrt(d0 / ncomp)
    d1 = sqrt(d1 / ncomp)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = fmin(h0, duration)
    yq = q + h0 * k1q
    yp = p + h0 * k1p
    yL = L + h0 * k1L
    _rhs(sp, t_begin + dirn * h0, yq, yp, dirn, track, &k2q, &k2p, &k2L)
    nevals += 1
    r = (k2q - k1q) / scq
    d2 = r * r
    r = (k2p - k1p) / scp
    d2 += r * r
    if track:
        r = (k2L - k1L) / scL
        d2 += r * r
    d2 = sqrt(d2 / ncomp) / h0
    if fmax(d1, d2) <= 1e-15:
        h1 = fmax(1e-6, h0 * 1e-3)
    else:
        h1 = pow(0.01 / fmax(d1, d2), 0.2)
    h = fmin(fmin(100.0 * h0, h1), duration)

    while True:
        if attempts >= max_steps:
            status = STATUS_STEP_LIMIT
            break
        attempts += 1
        is_last = h >= duration - sigma
        if is_last:
            h = duration - sigma

        yq = q + h * (A21 * k1q)
        yp = p + h * (A21 * k1p)
        yL = L + h * (A21 * k1L)
        _rhs(sp, t_begin + dirn * (sigma + C2 * h), yq, yp, dirn, track, &k2q, &k2p, &k2L)
        yq = q + h * (A31 * k1q + A32 * k2q)
        yp = p + h * (A31 * k1p + A32 * k2p)
        yL = L + h * (A31 * k1L + A32 * k2L)
        _rhs(sp, t_begin + dirn * (sigma + C3 * h), yq, yp, dirn, track, &k3q, &k3p, &k3L)
        yq = q + h * (A41 * k1q + A42 * k2q + A43 * k3q)
        yp = p + h * (A41 * k1p + A42 * k2p + A43 * k3p)
        yL = L + h * (A41 * k1L + A42 * k2L + A43 * k3L)
        _rhs(sp, t_begin + dirn * (sigma + C4 * h), yq, yp, dirn, track, &k4q, &k4p, &k4L)
        yq = q + h * (A51 * k1q + A52 * k2q + A53 * k3q + A54 * k4q)
        yp = p + h * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p)
        yL = L + h * (A51 * k1L + A52 * k2L + A53 * k3L + A54 * k4L)
        _rhs(sp, t_begin + dirn * (sigma + C5 * h), yq, yp, dirn, track, &k5q, &k5p, &k5L)
        yq = q + h * (A61 * k1q + A62 * k2q + A63 * k3q + A64 * k4q + A65 * k5q)
        yp = p + h * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p)
        yL = L + h * (A61 * k1L + A62 * k2L + A63 * k3L + A64 * k4L + A65 * k5L)
        _rhs(sp, t_begin + dirn * (sigma + h), yq, yp, dirn, track, &k6q, &k6p, &k6L)
        q5 = q + h * (B1 * k1q + B3 * k3q + B4 * k4q + B5 * k5q + B6 * k6q)
        p5 = p + h * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
        L5 = L + h * (B1 * k1L + B3 * k3L + B4 * k4L + B5 * k5L + B6 * k6L)
        _rhs(sp, t_begin + dirn * (sigma + h), q5, p5, dirn, track, &k7q, &k7p, &k7L)
        nevals += 6

        e_q = h * (E1 * k1q + E3 * k3q + E4 * k4q + E5 * k5q + E6 * k6q + E7 * k7q)
        e_p = h * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * k7p)
        e_L = h * (E1 * k1L + E3 * k3L + E4 * k4L + E5 * k5L + E6 * k6L + E7 * k7L)

        ok = isfinite(q5) and isfinite(p5) and isfinite(e_q) and isfinite(e_p)
        if track:
            ok = ok and isfinite(L5) and isfinite(e_L)
        if not ok:
            h *= 0.5
            last_rejected = True
            if h <= 1e-14 * fmax(1.0, fabs(sigma)):
                status = STATUS_BLOWUP
                break
            continue

        scq = atol + rtol * fmax(fabs(q), fabs(q5))
        scp = atol + rtol * fmax(fabs(p), fabs(p5))
        err = (e_q / scq) * (e_q / scq) + (e_p / scp) * (e_p / scp)
        if track:
            scL = atol + rtol * fmax(fabs(L), fabs(L5))
            err += (e_L / scL) * (e_L / scL)
        err = sqrt(err / ncomp)

        if err <= 1.0:
            sigma = duration if is_last else sigma + h
            q = q5
            p = p5
            L = L5
            k1q = k7q
            k1p = k7p
            k1L = k7L
            if q > q_ceiling:
                status = STATUS_ESCAPED
                break
            if sigma >= duration:
                status = STATUS_OK
                break
            if err == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * pow(err, -0.2)
                if fac > 5.0:
                    fac = 5.0
                elif fac < 0.2:
                    fac = 0.2
            if last_rejected and fac > 1.0:
                fac = 1.0
            last_rejected = False
            h *= fac
        else:
            fac = 0.9 * pow(err, -0.2)
            if fac < 0.2:
                fac = 0.2
            h *= fac
            last_rejected = True
            if h <= 1e-14 * fmax(1.0, fabs(sigma)):
                status = STATUS_BLOWUP
                break

    q_io[0] = q
    p_io[0] = p
    L_io[0] = L
    sigma_out[0] = sigma
    nsteps_out[0] = attempts
    nevals_out[0] = nevals
    return status


cdef int _rk4(Sys* sp, double t_begin, double dirn, double duration,
              double* q_io, double* p_io, double* L_io, bint track,
              double step, long max_steps, double q_ceiling,
              double* sigma_out, long* nsteps_out, long* nevals_out) nogil:
    cdef double q = q_io[0], p = p_io[0], L = L_io[0]
    cdef double sigma = 0.0
    cdef long i, n
    cdef int status = STATUS_OK
    cdef double h, qn, pn, Ln
    cdef double k1q, k1p, k1L, k2q, k2p, k2L, k3q, k3p, k3L, k4q, k4p, k4L
    cdef long nevals = 0

    n = <long>ceil(duration / step)
    if n < 1:
        n = 1
    if n > max_steps:
        sigma_out[0] = 0.0
        nsteps_out[0] = 0
        nevals_out[0] = 0
        return STATUS_STEP_LIMIT
    h = duration / n

    for i in range(n):
        _rhs(sp, t_begin + dirn * sigma, q, p, dirn, track, &k1q, &k1p, &k1L)
        _rhs(sp, t_begin + dirn * (sigma + 0.5 * h), q + 0.5 * h * k1q, p + 0.5 * h * k1p,
             dirn, track, &k2q, &k2p, &k2L)
        _rhs(sp, t_begin + dirn * (sigma + 0.5 * h), q + 0.5 * h * k2q, p + 0.5 * h * k2p,
             dirn, track, &k3q, &k3p, &k3L)
        _rhs(sp, t_begin + dirn * (sigma + h), q + h * k3q, p + h * k3p,
             dirn, track, &k4q, &k4p, &k4L)
        nevals += 4
        qn = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        pn = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        Ln = L + h / 6.0 * (k1L + 2.0 * k2L + 2.0 * k3L + k4L)
        if not (isfinite(qn) and isfinite(pn) and isfinite(Ln)):
            status = STATUS_BLOWUP
            break
        q = qn
        p = pn
        L = Ln
        sigma = duration if i == n - 1 else (i + 1) * h
        if q > q_ceiling:
            status = STATUS_ESCAPED
            break

    q_io[0] = q
    p_io[0] = p
    L_io[0] = L
    sigma_out[0] = sigma
    nsteps_out[0] = n
    nevals_out[0] = nevals
    return status


cdef inline void _fill(Sys* sp, double D, double alpha, double m, double eps, double omega) nogil:
    sp.two_D_alpha = 2.0 * D * alpha
    sp.alpha = alpha
    sp.inv_m = 1.0 / m
    sp.eps = eps
    sp.omega = omega


def propagate(double D, double alpha, double m, double eps, double omega,
              double q, double p, double t0, double t1,
              bint rk4, double step, double rtol, double atol,
              long max_steps, double q_ceiling):
    """Advance (q, p) from t0 to t1.  Returns (q, p, t, status, nsteps, nevals)."""
    cdef Sys sp
    cdef double dirn = 1.0 if t1 >= t0 else -1.0
    cdef double duration = fabs(t1 - t0)
    cdef double L = 0.0, sigma = 0.0, t
    cdef long nsteps = 0, nevals = 0
    cdef int status = STATUS_OK
    _fill(&sp, D, alpha, m, eps, omega)
    if duration == 0.0:
        return (q, p, t0, STATUS_OK, 0, 0)
    with nogil:
        if rk4:
            status = _rk4(&sp, t0, dirn, duration, &q, &p, &L, False,
                          step, max_steps, q_ceiling, &sigma, &nsteps, &nevals)
        else:
            status = _rk45(&sp, t0, dirn, duration, &q, &p, &L, False,
                           rtol, atol, max_steps, q_ceiling, &sigma, &nsteps, &nevals)
    t = t1 if status == STATUS_OK else t0 + dirn * sigma
    return (q, p, t, status, nsteps, nevals)


cdef inline void _arc_pair(Sys* sp, double q, double p, double t_center, double tau,
                           bint rk4, double step, double rtol, double atol,
                           long max_steps, double q_ceiling,
                           double* L_out, int* status_f, int* status_b,
                           long* nsteps, long* nevals) nogil:
    cdef double qf = q, pf = p, qb = q, pb = p
    cdef double L = 0.0, sigma = 0.0
    cdef long ns = 0, ne = 0
    cdef long ns_tot = 0, ne_tot = 0
    if rk4:
        status_f[0] = _rk4(sp, t_center, 1.0, tau, &qf, &pf, &L, True,
                           step, max_steps, q_ceiling, &sigma, &ns, &ne)
    else:
        status_f[0] = _rk45(sp, t_center, 1.0, tau, &qf, &pf, &L, True,
                            rtol, atol, max_steps, q_ceiling, &sigma, &ns, &ne)
    ns_tot += ns
    ne_tot += ne
    if rk4:
        status_b[0] = _rk4(sp, t_center, -1.0, tau, &qb, &pb, &L, True,
                           step, max_steps, q_ceiling, &sigma, &ns, &ne)
    else:
        status_b[0] = _rk45(sp, t_center, -1.0, tau, &qb, &pb, &L, True,
                            rtol, atol, max_steps, q_ceiling, &sigma, &ns, &ne)
    ns_tot += ns
    ne_tot += ne
    L_out[0] = L
    nsteps[0] = ns_tot
    nevals[0] = ne_tot


def arclength(double D, double alpha, double m, double eps, double omega,
              double q, double p, double t_center, double tau,
              bint rk4, double step, double rtol, double atol,
              long max_steps, double q_ceiling):
    """Forward-plus-backward trajectory arclength over [t_center - tau,
    t_center + tau].  Returns (L, status_fwd, status_bwd, nsteps, nevals)."""
    cdef Sys sp
    cdef double L = 0.0
    cdef int sf = 0, sb = 0
    cdef long nsteps = 0, nevals = 0
    _fill(&sp, D, alpha, m, eps, omega)
    with nogil:
        _arc_pair(&sp, q, p, t_center, tau, rk4, step, rtol, atol,
                  max_steps, q_ceiling, &L, &sf, &sb, &nsteps, &nevals)
    return (L, sf, sb, nsteps, nevals)


def ld_row(double D, double alpha, double m, double eps, double omega,
           double q, double[::1] ps, double t_center, double tau,
           bint rk4, double step, double rtol, double atol,
           long max_steps, double q_ceiling,
           double[::1] out_vals, unsigned char[::1] out_flags):
    """Arclength descriptor for one grid row (fixed q, varying p).
    Fills out_vals/out_flags in place; returns total rhs evaluations."""
    cdef Sys sp
    cdef Py_ssize_t j, n = ps.shape[0]
    cdef double L = 0.0
    cdef int sf = 0, sb = 0
    cdef long nsteps = 0, nevals = 0, nevals_total = 0
    _fill(&sp, D, alpha, m, eps, omega)
    with nogil:
        for j in range(n):
            _arc_pair(&sp, q, ps[j], t_center, tau, rk4, step, rtol, atol,
                      max_steps, q_ceiling, &L, &sf, &sb, &nsteps, &nevals)
            out_vals[j] = L
            out_flags[j] = 1 if (sf != STATUS_OK or sb != STATUS_OK) else 0
            nevals_total += nevals
    return nevals_total
