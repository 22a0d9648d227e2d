"""Numba-jitted evaluation core.

Everything here is a pure function of its arguments; no global state.
The hash arithmetic is bit-identical to the pure-Python reference in
`hashing.py` (tests enforce this).  All kernels release the GIL so the
renderer can fan pixel blocks out to threads; results are independent of
how points are batched or ordered.
"""

import math

import numpy as np
from numba import njit, uint64, int64

from ._layout import (
    NS_SE0, NS_SE1, NS_SE2, NS_H0, NS_H1, NS_H2, NS_LAM, NS_NB, NS_BETA,
    NS_GAMMA, NS_ALPHA, NS_SIGNED, NS_KIND, NS_SHARP, NS_ORIENTED,
    N1_ALPHA, N1_SCALE, N1_LAM, N1_NB, N1_BETA, N1_GAMMA,
    RW_B_RISE, RW_B_HIGH, RW_B_FALL, RW_VMIN, RW_VMAX, RW_P_RISE, RW_P_FALL,
    TW_S1, TW_S2, TW_S3, TW_MF, TW_MR, TW_W0, TW_W1, TW_W2, TW_W3, TW_T1, TW_T2,
    PF_RING_WIDTH, PF_RING_POROUSNESS, PF_SIGMA, PF_ELL0, PF_ELLG,
    PF_FIBER_SCALE, PF_BUMP_SCALE, PF_PORE_ELLP, PF_TRI, PF_RING_WAVE,
    PF_HI_WAVE, PF_POR_WAVE, PF_DIST_R, PF_DIST_T, PF_DIST_Z, PF_GROWTH,
    PF_INTERLOCK, PF_PORE, PF_RAY,
    RAY_SIZE_, RAY_ASPECT, RAY_LAM, RAY_SHARP, RAY_DR, RAY_DZ, RAY_VT,
    PU_DIST_R, PU_DIST_T, PU_DIST_Z, PU_GROWTH, PU_INTERLOCK, PU_PORE, PU_RAY,
)

GOLDEN = uint64(0x9E3779B97F4A7C15)
_MIX_A = uint64(0xBF58476D1CE4E5B9)
_MIX_B = uint64(0x94D049BB133111EB)
_INV21 = 1.0 / 2097152.0
_INV53 = 1.0 / 9007199254740992.0

TWO_PI = 2.0 * math.pi
AXIS_EPS = 1e-12          # below this radius the cylindrical frame degenerates
JAC_EIG_FLOOR = 0.01      # guaranteed lower bound on sym(J) eigenvalues
PORE_SIZE_FLOOR = 1e-4    # pore size multipliers below this give a zero mask

_JIT = dict(cache=True, nogil=True)


# --- hashing -------------------------------------------------------------------

@njit(uint64(uint64), **_JIT)
def mix64(z):
    z = (z ^ (z >> uint64(30))) * _MIX_A
    z = (z ^ (z >> uint64(27))) * _MIX_B
    return z ^ (z >> uint64(31))


@njit(uint64(int64), **_JIT)
def zigzag(i):
    return uint64(i << 1) ^ uint64(i >> 63)


@njit(uint64(uint64), **_JIT)
def hash_start(seed):
    return mix64(seed + GOLDEN)


@njit(uint64(uint64, int64), **_JIT)
def hash_fold(h, part):
    return mix64(h ^ (zigzag(part) + GOLDEN))


@njit(**_JIT)
def u01(h):
    return (h >> uint64(11)) * _INV53


@njit(**_JIT)
def poisson_from_u(u, lam, cap, p0):
    # CDF inversion; p0 = exp(-lam) hoisted by the caller
    p = p0
    cdf = p
    k = 0
    while u >= cdf and k < cap:
        k += 1
        p *= lam / k
        cdf += p
    return k


@njit(**_JIT)
def poisson_cap(lam):
    return int(lam + 10.0 * math.sqrt(lam)) + 1


# --- kernels ---------------------------------------------------------------------

@njit(**_JIT)
def kernel_q(kind, sharp, q):
    """Kernel value and dK/dq at squared radius q (q < 1 assumed)."""
    if kind == 0:
        t = 1.0 - q
        return t * t * t, -3.0 * t * t
    t = 1.0 - q
    e = sharp * q / t
    if e > 700.0:
        return 0.0, 0.0
    k = math.exp(-e)
    return k, -sharp * k / (t * t)


# --- 3D sparse convolution noise ----------------------------------------------

@njit(**_JIT)
def noise3(ns, R, seed, band0, band1, px, py, pz, size_mult):
    """Multiband oriented sparse convolution noise: value, gradient, counter.

    ns: NS-layout spec slice.  R: frame matrix, columns are the kernel
    axes (ignored unless ns[NS_ORIENTED]).  size_mult scales the kernel
    semi-axes at this evaluation point (ring porosity); cells stay fixed.
    Returns (value, gx, gy, gz, impulses_considered).
    """
    se0 = ns[NS_SE0]
    se1 = ns[NS_SE1]
    se2 = ns[NS_SE2]
    oriented = ns[NS_ORIENTED] != 0.0
    kind = int(ns[NS_KIND])
    sharp = ns[NS_SHARP]
    signed = ns[NS_SIGNED] != 0.0
    lam = ns[NS_LAM]
    beta = ns[NS_BETA]
    gamma = ns[NS_GAMMA]

    # bounding scale: shrink kernels so the rotated ellipsoid fits one cell
    if oriented:
        ax = math.sqrt((R[0, 0] * se0) ** 2 + (R[0, 1] * se1) ** 2 + (R[0, 2] * se2) ** 2)
        ay = math.sqrt((R[1, 0] * se0) ** 2 + (R[1, 1] * se1) ** 2 + (R[1, 2] * se2) ** 2)
        az = math.sqrt((R[2, 0] * se0) ** 2 + (R[2, 1] * se1) ** 2 + (R[2, 2] * se2) ** 2)
    else:
        ax = se0
        ay = se1
        az = se2
    sb = ns[NS_H0] / ax
    if ns[NS_H1] / ay < sb:
        sb = ns[NS_H1] / ay
    if ns[NS_H2] / az < sb:
        sb = ns[NS_H2] / az
    k_scale = size_mult if size_mult < sb else sb
    if k_scale > 1.0:
        k_scale = 1.0
    if k_scale < PORE_SIZE_FLOOR:
        return 0.0, 0.0, 0.0, 0.0, 0

    cap = poisson_cap(lam)
    p0 = math.exp(-lam)
    bg = beta ** gamma

    val = 0.0
    gpx = 0.0
    gpy = 0.0
    gpz = 0.0
    considered = 0

    h_seed = hash_start(seed)
    sc = 1.0
    amp = ns[NS_ALPHA]
    for b in range(band0):
        sc *= beta
        amp *= bg
    for band in range(band0, band1):
        wx = 2.0 * ns[NS_H0] * sc
        wy = 2.0 * ns[NS_H1] * sc
        wz = 2.0 * ns[NS_H2] * sc
        is0 = 1.0 / (se0 * sc * k_scale)
        is1 = 1.0 / (se1 * sc * k_scale)
        is2 = 1.0 / (se2 * sc * k_scale)
        cx0 = int64(math.floor(px / wx))
        cy0 = int64(math.floor(py / wy))
        cz0 = int64(math.floor(pz / wz))
        # band b impulses are exactly an impulse grid seeded hash(seed, [b])
        hb = hash_start(hash_fold(h_seed, band))
        for cx in range(cx0 - 1, cx0 + 2):
            hx = hash_fold(hb, cx)
            for cy in range(cy0 - 1, cy0 + 2):
                hxy = hash_fold(hx, cy)
                for cz in range(cz0 - 1, cz0 + 2):
                    hc = hash_fold(hxy, cz)
                    n = poisson_from_u(u01(hc), lam, cap, p0)
                    considered += n
                    for j in range(n):
                        s = hash_fold(hc, j)
                        ux = (s & uint64(0x1FFFFF)) * _INV21
                        uy = ((s >> uint64(21)) & uint64(0x1FFFFF)) * _INV21
                        uz = ((s >> uint64(42)) & uint64(0x1FFFFF)) * _INV21
                        d0 = px - (cx + ux) * wx
                        d1 = py - (cy + uy) * wy
                        d2 = pz - (cz + uz) * wz
                        if oriented:
                            t0 = R[0, 0] * d0 + R[1, 0] * d1 + R[2, 0] * d2
                            t1 = R[0, 1] * d0 + R[1, 1] * d1 + R[2, 1] * d2
                            t2 = R[0, 2] * d0 + R[1, 2] * d1 + R[2, 2] * d2
                        else:
                            t0 = d0
                            t1 = d1
                            t2 = d2
                        y0 = t0 * is0
                        y1 = t1 * is1
                        y2 = t2 * is2
                        q = y0 * y0 + y1 * y1 + y2 * y2
                        if q < 1.0:
                            k, dk = kernel_q(kind, sharp, q)
                            a = amp
                            if signed and not (s >> uint64(63)):
                                a = -amp
                            val += a * k
                            c = a * dk * 2.0
                            w0 = c * y0 * is0
                            w1 = c * y1 * is1
                            w2 = c * y2 * is2
                            if oriented:
                                gpx += R[0, 0] * w0 + R[0, 1] * w1 + R[0, 2] * w2
                                gpy += R[1, 0] * w0 + R[1, 1] * w1 + R[1, 2] * w2
                                gpz += R[2, 0] * w0 + R[2, 1] * w1 + R[2, 2] * w2
                            else:
                                gpx += w0
                                gpy += w1
                                gpz += w2
        sc *= beta
        amp *= bg
    return val, gpx, gpy, gpz, considered


# --- 1D sparse convolution noise ----------------------------------------------

@njit(**_JIT)
def noise1(n1, seed, x):
    """Multiband 1D noise: (value, derivative)."""
    scale = n1[N1_SCALE]
    lam = n1[N1_LAM]
    beta = n1[N1_BETA]
    gamma = n1[N1_GAMMA]
    nb = int(n1[N1_NB])
    cap = poisson_cap(lam)
    p0 = math.exp(-lam)
    bg = beta ** gamma

    val = 0.0
    der = 0.0
    h_seed = hash_start(seed)
    sc = 1.0
    amp = n1[N1_ALPHA]
    for band in range(nb):
        w = 2.0 * scale * sc
        inv = 1.0 / (scale * sc)
        c0 = int64(math.floor(x / w))
        hb = hash_start(hash_fold(h_seed, band))
        for c in range(c0 - 1, c0 + 2):
            hc = hash_fold(hb, c)
            n = poisson_from_u(u01(hc), lam, cap, p0)
            for j in range(n):
                s = hash_fold(hc, j)
                u = (s >> uint64(11)) * _INV53
                y = (x - (c + u) * w) * inv
                q = y * y
                if q < 1.0:
                    t = 1.0 - q
                    a = amp if (s & uint64(1)) else -amp
                    val += a * t * t * t
                    der += a * -6.0 * t * t * y * inv
        sc *= beta
        amp *= bg
    return val, der


# --- cylindrical-grid ray noise --------------------------------------------------

@njit(**_JIT)
def ray_noise(rp, R, seed, px, py, pz, r, theta, z):
    """Unsigned bump-kernel noise over the cylindrical impulse grid."""
    size = rp[RAY_SIZE_]
    aspect = rp[RAY_ASPECT]
    lam = rp[RAY_LAM]
    sharp = rp[RAY_SHARP]
    dr = rp[RAY_DR]
    dz = rp[RAY_DZ]
    vt = rp[RAY_VT]
    if lam <= 0.0:
        return 0.0
    se0 = size * aspect
    cap = poisson_cap(lam)
    p0 = math.exp(-lam)

    th = theta
    if th < 0.0:
        th += TWO_PI
    b0 = int64(r / dr)
    m0 = int64(math.floor(z / dz))
    h_seed = hash_start(seed)

    val = 0.0
    blo = b0 - 1
    if blo < 0:
        blo = 0
    for bb in range(blo, b0 + 2):
        r_mid = (bb + 0.5) * dr
        nth = int64(round(TWO_PI * r_mid * dr * dz / vt))
        if nth < 1:
            nth = 1
        arc = TWO_PI * r_mid / nth
        sb = 0.5 * dr / se0
        s2 = 0.5 * arc / size
        if s2 < sb:
            sb = s2
        s2 = 0.5 * dz / size
        if s2 < sb:
            sb = s2
        if sb > 1.0:
            sb = 1.0
        is0 = 1.0 / (se0 * sb)
        is1 = 1.0 / (size * sb)
        hb = hash_fold(h_seed, bb)
        if r <= 0.0 or nth <= 3:
            jlo = 0
            jhi = nth
        else:
            jq = int64(th / TWO_PI * nth)
            if jq >= nth:
                jq = nth - 1
            jlo = jq - 1
            jhi = jq + 2
        r_in2 = (bb * dr) * (bb * dr)
        r_out2 = ((bb + 1) * dr) * ((bb + 1) * dr)
        for jraw in range(jlo, jhi):
            j = jraw % nth
            hj = hash_fold(hb, j)
            for mm in range(m0 - 1, m0 + 2):
                hc = hash_fold(hj, mm)
                n = poisson_from_u(u01(hc), lam, cap, p0)
                for i in range(n):
                    s = hash_fold(hc, i)
                    ur = (s & uint64(0x1FFFFF)) * _INV21
                    ut = ((s >> uint64(21)) & uint64(0x1FFFFF)) * _INV21
                    uz = ((s >> uint64(42)) & uint64(0x1FFFFF)) * _INV21
                    ri = math.sqrt(r_in2 + ur * (r_out2 - r_in2))
                    thi = (j + ut) * TWO_PI / nth
                    d0 = px - ri * math.cos(thi)
                    d1 = py - ri * math.sin(thi)
                    d2 = pz - (mm + uz) * dz
                    y0 = (R[0, 0] * d0 + R[1, 0] * d1 + R[2, 0] * d2) * is0
                    y1 = (R[0, 1] * d0 + R[1, 1] * d1 + R[2, 1] * d2) * is1
                    y2 = (R[0, 2] * d0 + R[1, 2] * d1 + R[2, 2] * d2) * is1
                    q = y0 * y0 + y1 * y1 + y2 * y2
                    if q < 1.0:
                        k, _ = kernel_q(1, sharp, q)
                        val += k
    return val


# --- impulse enumeration for the grid module ------------------------------------

@njit(**_JIT)
def enum_cartesian(seed, wx, wy, wz, lam, px, py, pz, radius):
    """All impulses of the Chebyshev cell neighborhood, canonical order."""
    cap = poisson_cap(lam)
    p0 = math.exp(-lam)
    cx0 = int64(math.floor(px / wx))
    cy0 = int64(math.floor(py / wy))
    cz0 = int64(math.floor(pz / wz))
    h_seed = hash_start(seed)
    side = 2 * radius + 1
    total = 0
    counts = np.empty(side * side * side, dtype=np.int64)
    idx = 0
    for cx in range(cx0 - radius, cx0 + radius + 1):
        hx = hash_fold(h_seed, cx)
        for cy in range(cy0 - radius, cy0 + radius + 1):
            hxy = hash_fold(hx, cy)
            for cz in range(cz0 - radius, cz0 + radius + 1):
                hc = hash_fold(hxy, cz)
                n = poisson_from_u(u01(hc), lam, cap, p0)
                counts[idx] = n
                idx += 1
                total += n
    centers = np.empty((total, 3), dtype=np.float64)
    streams = np.empty(total, dtype=np.uint64)
    idx = 0
    k = 0
    for cx in range(cx0 - radius, cx0 + radius + 1):
        hx = hash_fold(h_seed, cx)
        for cy in range(cy0 - radius, cy0 + radius + 1):
            hxy = hash_fold(hx, cy)
            for cz in range(cz0 - radius, cz0 + radius + 1):
                hc = hash_fold(hxy, cz)
                n = counts[idx]
                idx += 1
                for j in range(n):
                    s = hash_fold(hc, j)
                    centers[k, 0] = (cx + (s & uint64(0x1FFFFF)) * _INV21) * wx
                    centers[k, 1] = (cy + ((s >> uint64(21)) & uint64(0x1FFFFF)) * _INV21) * wy
                    centers[k, 2] = (cz + ((s >> uint64(42)) & uint64(0x1FFFFF)) * _INV21) * wz
                    streams[k] = s
                    k += 1
    return centers, streams


@njit(**_JIT)
def cyl_cell_count(dr, dz, vt, band):
    nth = int64(round(TWO_PI * (band + 0.5) * dr * dr * dz / vt))
    if nth < 1:
        nth = 1
    return nth


@njit(**_JIT)
def enum_cyl_cell(seed, dr, dz, vt, lam, band, j, m, centers, streams, k0):
    """Fill impulses of one cylindrical cell; returns the new write index."""
    cap = poisson_cap(lam)
    p0 = math.exp(-lam)
    nth = cyl_cell_count(dr, dz, vt, band)
    hc = hash_fold(hash_fold(hash_fold(hash_start(seed), band), j), m)
    n = poisson_from_u(u01(hc), lam, cap, p0)
    r_in2 = (band * dr) * (band * dr)
    r_out2 = ((band + 1) * dr) * ((band + 1) * dr)
    k = k0
    for i in range(n):
        s = hash_fold(hc, i)
        ur = (s & uint64(0x1FFFFF)) * _INV21
        ut = ((s >> uint64(21)) & uint64(0x1FFFFF)) * _INV21
        uz = ((s >> uint64(42)) & uint64(0x1FFFFF)) * _INV21
        ri = math.sqrt(r_in2 + ur * (r_out2 - r_in2))
        thi = (j + ut) * TWO_PI / nth
        centers[k, 0] = ri * math.cos(thi)
        centers[k, 1] = ri * math.sin(thi)
        centers[k, 2] = (m + uz) * dz
        streams[k] = s
        k += 1
    return k


@njit(**_JIT)
def cyl_cell_poisson(seed, dr, dz, vt, lam, band, j, m):
    cap = poisson_cap(lam)
    p0 = math.exp(-lam)
    hc = hash_fold(hash_fold(hash_fold(hash_start(seed), band), j), m)
    return poisson_from_u(u01(hc), lam, cap, p0)


# --- smoothed waves ---------------------------------------------------------------

@njit(**_JIT)
def tri_eval(tw, x):
    """C1 smoothed triangle wave on phase x in [0,1): (value, slope)."""
    s1 = tw[TW_S1]
    s2 = tw[TW_S2]
    s3 = tw[TW_S3]
    mf = tw[TW_MF]
    mr = tw[TW_MR]
    if x < s1:
        return tw[TW_W0] + mf * x, mf
    if x < s2:
        t1 = tw[TW_T1]
        u = (x - s1) / t1
        return tw[TW_W1] + t1 * (mf * u + 0.5 * (mr - mf) * u * u), mf + (mr - mf) * u
    if x < s3:
        return tw[TW_W2] + mr * (x - s2), mr
    t2 = tw[TW_T2]
    u = (x - s3) / t2
    return tw[TW_W3] + t2 * (mr * u + 0.5 * (mf - mr) * u * u), mr + (mf - mr) * u


@njit(**_JIT)
def rect_eval(rw, x):
    """C2 smoothed rectangle wave on phase x in [0,1)."""
    if x < rw[RW_B_RISE]:
        return rw[RW_VMIN]
    if x < rw[RW_B_HIGH]:
        u = (x - rw[RW_B_RISE]) / rw[RW_P_RISE]
        s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
        return rw[RW_VMIN] + (rw[RW_VMAX] - rw[RW_VMIN]) * s
    if x < rw[RW_B_FALL]:
        return rw[RW_VMAX]
    u = (x - rw[RW_B_FALL]) / rw[RW_P_FALL]
    s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    return rw[RW_VMAX] - (rw[RW_VMAX] - rw[RW_VMIN]) * s


# --- small linear algebra ---------------------------------------------------------

@njit(**_JIT)
def inv3(a, out):
    """Inverse of a 3x3 matrix via the adjugate."""
    c00 = a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    c01 = a[1, 2] * a[2, 0] - a[1, 0] * a[2, 2]
    c02 = a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]
    det = a[0, 0] * c00 + a[0, 1] * c01 + a[0, 2] * c02
    inv = 1.0 / det
    out[0, 0] = c00 * inv
    out[0, 1] = (a[0, 2] * a[2, 1] - a[0, 1] * a[2, 2]) * inv
    out[0, 2] = (a[0, 1] * a[1, 2] - a[0, 2] * a[1, 1]) * inv
    out[1, 0] = c01 * inv
    out[1, 1] = (a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]) * inv
    out[1, 2] = (a[0, 2] * a[1, 0] - a[0, 0] * a[1, 2]) * inv
    out[2, 0] = c02 * inv
    out[2, 1] = (a[0, 1] * a[2, 0] - a[0, 0] * a[2, 1]) * inv
    out[2, 2] = (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]) * inv


@njit(**_JIT)
def sym3_eigmin(m):
    """Smallest eigenvalue of the symmetric part of a 3x3 matrix."""
    a00 = m[0, 0]
    a11 = m[1, 1]
    a22 = m[2, 2]
    a01 = 0.5 * (m[0, 1] + m[1, 0])
    a02 = 0.5 * (m[0, 2] + m[2, 0])
    a12 = 0.5 * (m[1, 2] + m[2, 1])
    p1 = a01 * a01 + a02 * a02 + a12 * a12
    tr = a00 + a11 + a22
    if p1 < 1e-300:
        e = a00
        if a11 < e:
            e = a11
        if a22 < e:
            e = a22
        return e
    q = tr / 3.0
    b00 = a00 - q
    b11 = a11 - q
    b22 = a22 - q
    p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    ip = 1.0 / p
    # det(B)/2 with B = (A - qI)/p
    d00 = b00 * ip
    d11 = b11 * ip
    d22 = b22 * ip
    d01 = a01 * ip
    d02 = a02 * ip
    d12 = a12 * ip
    detb = (d00 * (d11 * d22 - d12 * d12)
            - d01 * (d01 * d22 - d12 * d02)
            + d02 * (d01 * d12 - d11 * d02))
    rr = 0.5 * detb
    if rr < -1.0:
        rr = -1.0
    elif rr > 1.0:
        rr = 1.0
    phi = math.acos(rr) / 3.0
    # eigenvalues are q + 2p cos(phi + 2k pi/3); phi is in [0, pi/3] so the
    # smallest is the k = 1 branch
    return q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)


# --- distortion --------------------------------------------------------------------

@njit(**_JIT)
def distortion_terms(PF, PU, px, py, pz, r, irx, iry, compressed, R, W):
    """Evaluate the enabled axis distortions at p.

    R and W are caller-provided 3x3 workspaces.  On return the rows of W
    hold the (optionally compressed) magnitude gradients of the r/theta/z
    terms and (m_r, m_t, m_z) are the displacement magnitudes.
    """
    for i in range(3):
        for k in range(3):
            W[i, k] = 0.0
    mr = 0.0
    mt = 0.0
    mz = 0.0
    R[0, 0] = irx
    R[1, 0] = iry
    R[2, 0] = 0.0
    R[0, 1] = -iry
    R[1, 1] = irx
    R[2, 1] = 0.0
    R[0, 2] = 0.0
    R[1, 2] = 0.0
    R[2, 2] = 1.0
    for d in range(3):
        if d == 0:
            base = PF_DIST_R
            seed = PU[PU_DIST_R]
        elif d == 1:
            base = PF_DIST_T
            seed = PU[PU_DIST_T]
        else:
            base = PF_DIST_Z
            seed = PU[PU_DIST_Z]
        if PF[base] == 0.0:
            continue
        ns = PF[base + 1:base + 1 + 15]
        nb = int(ns[NS_NB])
        v, gx, gy, gz, _ = noise3(ns, R, seed, 0, nb, px, py, pz, 1.0)
        if compressed:
            gn = math.sqrt(gx * gx + gy * gy + gz * gz)
            c = 1.0 / (1.0 + gn)
            gx *= c
            gy *= c
            gz *= c
        W[d, 0] = gx
        W[d, 1] = gy
        W[d, 2] = gz
        if d == 0:
            mr = v
        elif d == 1:
            mt = v
        else:
            mz = v
    return mr, mt, mz


@njit(**_JIT)
def warp_point(px, py, pz, r, irx, iry, mr, mt, mz):
    """Apply the axis displacements: radial and z straight, theta as an arc."""
    qx = px + mr * irx
    qy = py + mr * iry
    qz = pz + mz
    if mt != 0.0 and r > AXIS_EPS:
        a = mt / r
        ca = math.cos(a)
        sa = math.sin(a)
        tx = ca * qx - sa * qy
        qy = sa * qx + ca * qy
        qx = tx
    return qx, qy, qz


@njit(**_JIT)
def build_jacobian(W, irx, iry, J):
    """J = I + sum_d a_d (x) w_d with a PD safety rescale of the sum."""
    # perturbation rows: a_r = (irx, iry, 0), a_theta = (-iry, irx, 0), a_z = z
    J[0, 0] = irx * W[0, 0] - iry * W[1, 0]
    J[0, 1] = irx * W[0, 1] - iry * W[1, 1]
    J[0, 2] = irx * W[0, 2] - iry * W[1, 2]
    J[1, 0] = iry * W[0, 0] + irx * W[1, 0]
    J[1, 1] = iry * W[0, 1] + irx * W[1, 1]
    J[1, 2] = iry * W[0, 2] + irx * W[1, 2]
    J[2, 0] = W[2, 0]
    J[2, 1] = W[2, 1]
    J[2, 2] = W[2, 2]
    s2 = 0.0
    for d in range(3):
        s2 += W[d, 0] * W[d, 0] + W[d, 1] * W[d, 1] + W[d, 2] * W[d, 2]
    if s2 > (1.0 - JAC_EIG_FLOOR) * (1.0 - JAC_EIG_FLOOR):
        emin = sym3_eigmin(J)
        if 1.0 + emin < JAC_EIG_FLOOR:
            c = (JAC_EIG_FLOOR - 1.0) / emin
            for i in range(3):
                for k in range(3):
                    J[i, k] *= c
    for i in range(3):
        J[i, i] += 1.0


# --- full shading DAG ---------------------------------------------------------------

@njit(**_JIT)
def evaluate_batch(pts, PF, PU,
                   diffuse, fiber, dir_l, dir_r, ray_m, pore_m,
                   highlight, bump, ring, twist):
    npts = pts.shape[0]
    Rm = np.empty((3, 3))
    W = np.empty((3, 3))
    J = np.empty((3, 3))
    Ji = np.empty((3, 3))
    ring_width = PF[PF_RING_WIDTH]
    porousness = PF[PF_RING_POROUSNESS]
    pore_on = PF[PF_PORE + NS_LAM] > 0.0 and PF[PF_PORE + NS_ALPHA] > 0.0
    ray_on = PF[PF_RAY + RAY_LAM] > 0.0
    growth_on = PF[PF_GROWTH + N1_ALPHA] != 0.0
    interlock_on = PF[PF_INTERLOCK + N1_ALPHA] != 0.0
    dist_on = PF[PF_DIST_R] != 0.0 or PF[PF_DIST_T] != 0.0 or PF[PF_DIST_Z] != 0.0

    for n in range(npts):
        px = pts[n, 0]
        py = pts[n, 1]
        pz = pts[n, 2]

        # ---- distortion at the lookup point
        if dist_on:
            r = math.sqrt(px * px + py * py)
            if r > AXIS_EPS:
                irx = px / r
                iry = py / r
            else:
                irx = 1.0
                iry = 0.0
            mr, mt, mz = distortion_terms(PF, PU, px, py, pz, r, irx, iry, True, Rm, W)
            qx, qy, qz = warp_point(px, py, pz, r, irx, iry, mr, mt, mz)
            build_jacobian(W, irx, iry, J)
            inv3(J, Ji)
        else:
            qx = px
            qy = py
            qz = pz
            for i in range(3):
                for k in range(3):
                    Ji[i, k] = 1.0 if i == k else 0.0

        # ---- cylindrical frame at the source point
        rq = math.sqrt(qx * qx + qy * qy)
        if rq > AXIS_EPS:
            rx = qx / rq
            ry = qy / rq
        else:
            rx = 1.0
            ry = 0.0
        theta = math.atan2(qy, qx)

        # ---- time volume
        rr = rq / ring_width
        phase = rr - math.floor(rr)
        wv, _ = tri_eval(PF[PF_TRI:PF_TRI + 11], phase)
        t_pre = rr + wv
        if growth_on:
            gn, _ = noise1(PF[PF_GROWTH:PF_GROWTH + 6], PU[PU_GROWTH], t_pre)
            t = t_pre + gn
        else:
            t = t_pre
        tp = t - math.floor(t)

        # ---- waves of the time volume
        gring = rect_eval(PF[PF_RING_WAVE:PF_RING_WAVE + 7], tp)
        hw = rect_eval(PF[PF_HI_WAVE:PF_HI_WAVE + 7], tp)
        por = rect_eval(PF[PF_POR_WAVE:PF_POR_WAVE + 7], tp)
        porosity = (1.0 - porousness) + porousness * por

        # ---- interlocked frame (rotate about r-hat; +phi tilts z toward +theta-hat)
        if interlock_on:
            phi, _ = noise1(PF[PF_INTERLOCK:PF_INTERLOCK + 6], PU[PU_INTERLOCK], rq)
        else:
            phi = 0.0
        cph = math.cos(phi)
        sph = math.sin(phi)
        # frame columns: r-hat, theta-hat', z-hat'
        Rm[0, 0] = rx
        Rm[1, 0] = ry
        Rm[2, 0] = 0.0
        Rm[0, 1] = cph * -ry
        Rm[1, 1] = cph * rx
        Rm[2, 1] = -sph
        Rm[0, 2] = sph * -ry
        Rm[1, 2] = sph * rx
        Rm[2, 2] = cph

        # ---- discrete feature masks
        pore = 0.0
        if pore_on:
            pns = PF[PF_PORE:PF_PORE + 15]
            pv, _, _, _, _ = noise3(pns, Rm, PU[PU_PORE], 0, 1, qx, qy, qz, porosity)
            pore = pv
            if pore > 1.0:
                pore = 1.0
        rayv = 0.0
        if ray_on:
            rv = ray_noise(PF[PF_RAY:PF_RAY + 7], Rm, PU[PU_RAY], qx, qy, qz, rq, theta, qz)
            rayv = rv
            if rayv > 1.0:
                rayv = 1.0

        # ---- color via Beer's law
        path = PF[PF_ELL0] + PF[PF_ELLG] * gring + PF[PF_PORE_ELLP] * pore
        fs = PF[PF_FIBER_SCALE]
        for c in range(3):
            sg = PF[PF_SIGMA + c]
            diffuse[n, c] = math.exp(-sg * path)
            fiber[n, c] = math.exp(-sg * fs * path)

        # ---- fiber directions: contravariant transport, then orthonormalize
        lx = Ji[0, 0] * Rm[0, 2] + Ji[0, 1] * Rm[1, 2] + Ji[0, 2] * Rm[2, 2]
        ly = Ji[1, 0] * Rm[0, 2] + Ji[1, 1] * Rm[1, 2] + Ji[1, 2] * Rm[2, 2]
        lz = Ji[2, 0] * Rm[0, 2] + Ji[2, 1] * Rm[1, 2] + Ji[2, 2] * Rm[2, 2]
        inv = 1.0 / math.sqrt(lx * lx + ly * ly + lz * lz)
        lx *= inv
        ly *= inv
        lz *= inv
        ax = Ji[0, 0] * Rm[0, 0] + Ji[0, 1] * Rm[1, 0] + Ji[0, 2] * Rm[2, 0]
        ay = Ji[1, 0] * Rm[0, 0] + Ji[1, 1] * Rm[1, 0] + Ji[1, 2] * Rm[2, 0]
        az = Ji[2, 0] * Rm[0, 0] + Ji[2, 1] * Rm[1, 0] + Ji[2, 2] * Rm[2, 0]
        dot = ax * lx + ay * ly + az * lz
        ax -= dot * lx
        ay -= dot * ly
        az -= dot * lz
        inv = 1.0 / math.sqrt(ax * ax + ay * ay + az * az)
        ax *= inv
        ay *= inv
        az *= inv

        dir_l[n, 0] = lx
        dir_l[n, 1] = ly
        dir_l[n, 2] = lz
        dir_r[n, 0] = ax
        dir_r[n, 1] = ay
        dir_r[n, 2] = az
        ray_m[n] = rayv
        pore_m[n] = pore
        highlight[n] = hw
        bump[n] = -PF[PF_BUMP_SCALE] * pore
        ring[n] = gring
        twist[n] = phi
