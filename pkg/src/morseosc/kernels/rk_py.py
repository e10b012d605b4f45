"""Pure-Python twin of the compiled ``_rk`` kernels.

Same Dormand-Prince 4(5) / RK4 algorithms, same constants, same operation
order; used as the fallback when the extension is unavailable and as the
reference side of the kernel benchmark.  Orders of magnitude slower, so
only small workloads should run on it.
"""

from __future__ import annotations

import math

STATUS_OK = 0
STATUS_ESCAPED = 1
STATUS_STEP_LIMIT = 2
STATUS_BLOWUP = 3

C2 = 1.0 / 5.0
C3 = 3.0 / 10.0
C4 = 4.0 / 5.0
C5 = 8.0 / 9.0
A21 = 1.0 / 5.0
A31 = 3.0 / 40.0
A32 = 9.0 / 40.0
A41 = 44.0 / 45.0
A42 = -56.0 / 15.0
A43 = 32.0 / 9.0
A51 = 19372.0 / 6561.0
A52 = -25360.0 / 2187.0
A53 = 64448.0 / 6561.0
A54 = -212.0 / 729.0
A61 = 9017.0 / 3168.0
A62 = -355.0 / 33.0
A63 = 46732.0 / 5247.0
A64 = 49.0 / 176.0
A65 = -5103.0 / 18656.0
B1 = 35.0 / 384.0
B3 = 500.0 / 1113.0
B4 = 125.0 / 192.0
B5 = -2187.0 / 6784.0
B6 = 11.0 / 84.0
E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0


def _rhs(two_D_alpha, alpha, inv_m, eps, omega, t, q, p, dirn, track):
    u = math.exp(-alpha * q)
    fq = p * inv_m
    fp = -two_D_alpha * u * (1.0 - u) + eps * math.cos(omega * t)
    if track:
        return dirn * fq, dirn * fp, math.sqrt(fq * fq + fp * fp)
    return dirn * fq, dirn * fp, 0.0


def _rk45(sys_, t_begin, dirn, duration, q, p, L, track,
          rtol, atol, max_steps, q_ceiling):
    two_D_alpha, alpha, inv_m, eps, omega = sys_
    attempts = 0
    nevals = 0
    ncomp = 3 if track else 2
    last_rejected = False

    k1q, k1p, k1L = _rhs(two_D_alpha, alpha, inv_m, eps, omega, t_begin, q, p, dirn, track)
    nevals += 1

    scq = atol + rtol * abs(q)
    scp = atol + rtol * abs(p)
    scL = atol + rtol * abs(L)
    d0 = (q / scq) ** 2 + (p / scp) ** 2
    d1 = (k1q / scq) ** 2 + (k1p / scp) ** 2
    if track:
        d0 += (L / scL) ** 2
        d1 += (k1L / scL) ** 2
    d0 = math.sqrt(d0 / ncomp)
    d1 = math.sqrt(d1 / ncomp)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, duration)
    yq = q + h0 * k1q
    yp = p + h0 * k1p
    g2 = _rhs(two_D_alpha, alpha, inv_m, eps, omega, t_begin + dirn * h0, yq, yp, dirn, track)
    nevals += 1
    d2 = ((g2[0] - k1q) / scq) ** 2 + ((g2[1] - k1p) / scp) ** 2
    if track:
        d2 += ((g2[2] - k1L) / scL) ** 2
    d2 = math.sqrt(d2 / ncomp) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    h = min(100.0 * h0, h1, duration)

    sigma = 0.0
    status = STATUS_STEP_LIMIT
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
        k2q, k2p, k2L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + C2 * h), yq, yp, dirn, track)
        yq = q + h * (A31 * k1q + A32 * k2q)
        yp = p + h * (A31 * k1p + A32 * k2p)
        k3q, k3p, k3L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + C3 * h), yq, yp, dirn, track)
        yq = q + h * (A41 * k1q + A42 * k2q + A43 * k3q)
        yp = p + h * (A41 * k1p + A42 * k2p + A43 * k3p)
        k4q, k4p, k4L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + C4 * h), yq, yp, dirn, track)
        yq = q + h * (A51 * k1q + A52 * k2q + A53 * k3q + A54 * k4q)
        yp = p + h * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p)
        k5q, k5p, k5L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + C5 * h), yq, yp, dirn, track)
        yq = q + h * (A61 * k1q + A62 * k2q + A63 * k3q + A64 * k4q + A65 * k5q)
        yp = p + h * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p)
        k6q, k6p, k6L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + h), yq, yp, dirn, track)
        q5 = q + h * (B1 * k1q + B3 * k3q + B4 * k4q + B5 * k5q + B6 * k6q)
        p5 = p + h * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
        L5 = L + h * (B1 * k1L + B3 * k3L + B4 * k4L + B5 * k5L + B6 * k6L)
        k7q, k7p, k7L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + h), q5, p5, dirn, track)
        nevals += 6

        e_q = h * (E1 * k1q + E3 * k3q + E4 * k4q + E5 * k5q + E6 * k6q + E7 * k7q)
        e_p = h * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * k7p)
        e_L = h * (E1 * k1L + E3 * k3L + E4 * k4L + E5 * k5L + E6 * k6L + E7 * k7L)

        ok = (math.isfinite(q5) and math.isfinite(p5)
              and math.isfinite(e_q) and math.isfinite(e_p))
        if track:
            ok = ok and math.isfinite(L5) and math.isfinite(e_L)
        if not ok:
            h *= 0.5
            last_rejected = True
            if h <= 1e-14 * max(1.0, abs(sigma)):
                status = STATUS_BLOWUP
                break
            continue

        scq = atol + rtol * max(abs(q), abs(q5))
        scp = atol + rtol * max(abs(p), abs(p5))
        err = (e_q / scq) ** 2 + (e_p / scp) ** 2
        if track:
            scL = atol + rtol * max(abs(L), abs(L5))
            err += (e_L / scL) ** 2
        err = math.sqrt(err / ncomp)

        if err <= 1.0:
            sigma = duration if is_last else sigma + h
            q, p, L = q5, p5, L5
            k1q, k1p, k1L = k7q, k7p, k7L
            if q > q_ceiling:
                status = STATUS_ESCAPED
                break
            if sigma >= duration:
                status = STATUS_OK
                break
            if err == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * err**-0.2
                if fac > 5.0:
                    fac = 5.0
                elif fac < 0.2:
                    fac = 0.2
            if last_rejected and fac > 1.0:
                fac = 1.0
            last_rejected = False
            h *= fac
        else:
            fac = 0.9 * err**-0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac
            last_rejected = True
            if h <= 1e-14 * max(1.0, abs(sigma)):
                status = STATUS_BLOWUP
                break

    return status, q, p, L, sigma, attempts, nevals


def _rk4_fixed(sys_, t_begin, dirn, duration, q, p, L, track,
               step, max_steps, q_ceiling):
    two_D_alpha, alpha, inv_m, eps, omega = sys_
    n = max(int(math.ceil(duration / step)), 1)
    if n > max_steps:
        return STATUS_STEP_LIMIT, q, p, L, 0.0, 0, 0
    h = duration / n
    sigma = 0.0
    status = STATUS_OK
    nevals = 0
    for i in range(n):
        k1q, k1p, k1L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * sigma, q, p, dirn, track)
        k2q, k2p, k2L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + 0.5 * h),
                             q + 0.5 * h * k1q, p + 0.5 * h * k1p, dirn, track)
        k3q, k3p, k3L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + 0.5 * h),
                             q + 0.5 * h * k2q, p + 0.5 * h * k2p, dirn, track)
        k4q, k4p, k4L = _rhs(two_D_alpha, alpha, inv_m, eps, omega,
                             t_begin + dirn * (sigma + h),
                             q + h * k3q, p + h * k3p, dirn, track)
        nevals += 4
        qn = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        pn = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        Ln = L + h / 6.0 * (k1L + 2.0 * k2L + 2.0 * k3L + k4L)
        if not (math.isfinite(qn) and math.isfinite(pn) and math.isfinite(Ln)):
            status = STATUS_BLOWUP
            break
        q, p, L = qn, pn, Ln
        sigma = duration if i == n - 1 else (i + 1) * h
        if q > q_ceiling:
            status = STATUS_ESCAPED
            break
    return status, q, p, L, sigma, n, nevals


def propagate(D, alpha, m, eps, omega, q, p, t0, t1,
              rk4, step, rtol, atol, max_steps, q_ceiling):
    """Advance (q, p) from t0 to t1.  Returns (q, p, t, status, nsteps, nevals)."""
    dirn = 1.0 if t1 >= t0 else -1.0
    duration = abs(t1 - t0)
    if duration == 0.0:
        return (q, p, t0, STATUS_OK, 0, 0)
    sys_ = (2.0 * D * alpha, alpha, 1.0 / m, eps, omega)
    if rk4:
        status, q, p, _L, sigma, nsteps, nevals = _rk4_fixed(
            sys_, t0, dirn, duration, q, p, 0.0, False, step, max_steps, q_ceiling)
    else:
        status, q, p, _L, sigma, nsteps, nevals = _rk45(
            sys_, t0, dirn, duration, q, p, 0.0, False, rtol, atol, max_steps, q_ceiling)
    t = t1 if status == STATUS_OK else t0 + dirn * sigma
    return (q, p, t, status, nsteps, nevals)


def _arc_pair(sys_, q, p, t_center, tau, rk4, step, rtol, atol, max_steps, q_ceiling):
    if rk4:
        sf, _q, _p, L, _s, ns1, ne1 = _rk4_fixed(
            sys_, t_center, 1.0, tau, q, p, 0.0, True, step, max_steps, q_ceiling)
        sb, _q, _p, L, _s, ns2, ne2 = _rk4_fixed(
            sys_, t_center, -1.0, tau, q, p, L, True, step, max_steps, q_ceiling)
    else:
        sf, _q, _p, L, _s, ns1, ne1 = _rk45(
            sys_, t_center, 1.0, tau, q, p, 0.0, True, rtol, atol, max_steps, q_ceiling)
        sb, _q, _p, L, _s, ns2, ne2 = _rk45(
            sys_, t_center, -1.0, tau, q, p, L, True, rtol, atol, max_steps, q_ceiling)
    return L, sf, sb, ns1 + ns2, ne1 + ne2


def arclength(D, alpha, m, eps, omega, q, p, t_center, tau,
              rk4, step, rtol, atol, max_steps, q_ceiling):
    """Forward-plus-backward trajectory arclength over [t_center - tau,
    t_center + tau].  Returns (L, status_fwd, status_bwd, nsteps, nevals)."""
    sys_ = (2.0 * D * alpha, alpha, 1.0 / m, eps, omega)
    return _arc_pair(sys_, q, p, t_center, tau, rk4, step, rtol, atol,
                     max_steps, q_ceiling)


def ld_row(D, alpha, m, eps, omega, q, ps, t_center, tau,
           rk4, step, rtol, atol, max_steps, q_ceiling, out_vals, out_flags):
    """Arclength descriptor for one grid row (fixed q, varying p).
    Fills out_vals/out_flags in place; returns total rhs evaluations."""
    sys_ = (2.0 * D * alpha, alpha, 1.0 / m, eps, omega)
    nevals_total = 0
    for j in range(len(ps)):
        L, sf, sb, _ns, ne = _arc_pair(sys_, q, ps[j], t_center, tau,
                                       rk4, step, rtol, atol, max_steps, q_ceiling)
        out_vals[j] = L
        out_flags[j] = 1 if (sf != STATUS_OK or sb != STATUS_OK) else 0
        nevals_total += ne
    return nevals_total
