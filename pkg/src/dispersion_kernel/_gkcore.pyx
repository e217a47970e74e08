# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled adaptive Gauss-Kronrod engine with the builtin integrands.

Mirrors ``_gkpy`` panel for panel. The whole integration runs without the
GIL, so sweeps parallelised over threads scale with cores.
"""

from libc.math cimport exp, sqrt, fabs, sin, cos, acos, isfinite, NAN, INFINITY
from libc.stdlib cimport malloc, realloc, free, qsort
from libc.float cimport DBL_EPSILON

from . import _rules

NAME = "compiled"

cdef double NODES[15]
cdef double WK[15]
cdef double WG[15]
for _i in range(15):
    NODES[_i] = _rules.NODES[_i]
    WK[_i] = _rules.WEIGHTS_KRONROD[_i]
    WG[_i] = _rules.WEIGHTS_GAUSS[_i]

cdef double PI = 3.14159265358979323846
DEF MAXP = 16

cdef int K_NONRES = _rules.KERNEL_NONRESONANT
cdef int K_STATIC = _rules.KERNEL_NONRESONANT_STATIC
cdef int K_SLAB = _rules.KERNEL_SLAB
cdef int K_HEMI = _rules.KERNEL_HEMISPHERE
cdef int K_CAP = _rules.KERNEL_CAP


ctypedef struct Ctx:
    int kernel
    double p[MAXP]
    double x_outer
    double epsabs
    double epsrel
    long limit
    long evals
    int failed


ctypedef struct Panel:
    double a
    double b
    double val
    double err


ctypedef double (*integrand_t)(double x, Ctx* ctx, double* inner_err) noexcept nogil


# --------------------------------------------------------------------------
# integrands

cdef inline double alpha_imag(double ws, double d2, double g, double u) noexcept nogil:
    cdef double s = u + 0.5 * g
    return d2 / 3.0 * 2.0 * ws / (ws * ws + s * s)


cdef inline double index_imag(const double* p, double u) noexcept nogil:
    return sqrt(1.0 + 4.0 * PI * p[10] * alpha_imag(p[7], p[8], p[9], u))


cdef double f_nonres(double u, Ctx* ctx, double* ie) noexcept nogil:
    cdef const double* p = ctx.p
    cdef double R = p[0]
    cdef double aa = alpha_imag(p[1], p[2], p[3], u)
    cdef double ab = alpha_imag(p[4], p[5], p[6], u)
    cdef double n = index_imag(p, u)
    cdef double y = n * R
    cdef double poly = (u * u * u * u + 2.0 * u * u * u / y + 5.0 * u * u / (y * y)
                        + 6.0 * u / (y * y * y) + 3.0 / (y * y * y * y))
    ie[0] = 0.0
    return aa * ab * poly * exp(-2.0 * y * u) / (R * R)


cdef double f_static(double t, Ctx* ctx, double* ie) noexcept nogil:
    cdef const double* p = ctx.p
    cdef double s = p[0]
    cdef double om = 1.0 - t
    cdef double u = s * t / om
    cdef double aa = alpha_imag(p[1], p[2], p[3], u)
    cdef double ab = alpha_imag(p[4], p[5], p[6], u)
    cdef double n = index_imag(p, u)
    cdef double n2 = n * n
    ie[0] = 0.0
    return aa * ab / (n2 * n2) * (s / (om * om))


cdef inline double radial_bracket(const double* p, double r) noexcept nogil:
    # [2A(r)/r + mode Q(r)/L] env(r)
    cdef double w = p[1]
    cdef double L = p[2]
    cdef double x2 = 1.0 / ((w * r) * (w * r))
    cdef double a = 1.0 + 2.0 * x2 + 9.0 * x2 * x2
    cdef double b = 2.0 * a / r
    cdef double q
    if p[4] != 0.0:
        q = 1.0 + x2 + 3.0 * x2 * x2
        b = (b + q / L) * exp(-(r - p[3]) / L)
    return b


cdef double f_slab_inner(double theta, Ctx* ctx, double* ie) noexcept nogil:
    cdef double r = ctx.x_outer / cos(theta)
    ie[0] = 0.0
    return 2.0 * PI * ctx.p[0] * sin(theta) * radial_bracket(ctx.p, r)


cdef double f_hemi_inner(double theta, Ctx* ctx, double* ie) noexcept nogil:
    cdef double r = ctx.x_outer
    cdef double fr = ctx.p[0] / (r * r) * radial_bracket(ctx.p, r)
    ie[0] = 0.0
    return 2.0 * PI * r * r * fr * sin(theta) * cos(theta)


cdef double f_cap_inner(double theta, Ctx* ctx, double* ie) noexcept nogil:
    cdef const double* p = ctx.p
    cdef double r = ctx.x_outer
    cdef double radial, x2
    if p[4] != 0.0:
        x2 = 1.0 / ((p[1] * r) * (p[1] * r))
        radial = p[0] * (1.0 + x2 + 3.0 * x2 * x2) * exp(-r / p[2])
    else:
        radial = p[0]
    ie[0] = 0.0
    return 2.0 * PI * radial * sin(theta)


cdef double f_outer(double x, Ctx* ctx, double* ie) noexcept nogil:
    cdef Ctx child = ctx[0]
    cdef double lo = 0.0
    cdef double hi = 0.5 * PI
    cdef double ratio
    cdef double breaks[2]
    cdef double out[2]
    cdef long nev = 0
    cdef long nsub = 0
    cdef int ok
    cdef integrand_t inner
    if ctx.kernel == K_CAP:
        ratio = ctx.p[3] / x
        if ratio > 1.0:
            ratio = 1.0
        hi = acos(ratio)
        inner = f_cap_inner
    elif ctx.kernel == K_SLAB:
        inner = f_slab_inner
    else:
        inner = f_hemi_inner
    if hi <= lo:
        ie[0] = 0.0
        return 0.0
    child.x_outer = x
    child.evals = 0
    breaks[0] = lo
    breaks[1] = hi
    ok = adapt(inner, &child, breaks, 2, ctx.epsabs, 0.1 * ctx.epsrel, ctx.limit,
               out, &nev, &nsub)
    ctx.evals += nev
    if ok != 1:
        ctx.failed = 1
        ie[0] = 0.0
        return 0.0
    ie[0] = out[1]
    return out[0]


# --------------------------------------------------------------------------
# engine

cdef int panel(integrand_t f, Ctx* ctx, double a, double b,
               double* val, double* err) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double k = 0.0
    cdef double g = 0.0
    cdef double resabs = 0.0
    cdef double ierr = 0.0
    cdef double fx, ie, e, floor_
    cdef int j
    for j in range(15):
        ie = 0.0
        fx = f(c + h * NODES[j], ctx, &ie)
        k += WK[j] * fx
        g += WG[j] * fx
        resabs += WK[j] * fabs(fx)
        ierr += WK[j] * ie
    k *= h
    g *= h
    resabs *= fabs(h)
    e = fabs(k - g)
    floor_ = 50.0 * DBL_EPSILON * resabs
    if e < floor_:
        e = floor_
    e += fabs(h) * ierr
    val[0] = k
    err[0] = e
    return isfinite(k) and isfinite(e)


cdef inline bint before(Panel* ps, int i, int j) noexcept nogil:
    # heap order: larger error first, ties broken by smaller left endpoint
    if ps[i].err != ps[j].err:
        return ps[i].err > ps[j].err
    return ps[i].a < ps[j].a


cdef void heap_push(int* heap, int* n, Panel* ps, int idx) noexcept nogil:
    cdef int i = n[0]
    cdef int parent
    heap[i] = idx
    n[0] += 1
    while i > 0:
        parent = (i - 1) // 2
        if before(ps, heap[i], heap[parent]):
            heap[i], heap[parent] = heap[parent], heap[i]
            i = parent
        else:
            break


cdef int heap_pop(int* heap, int* n, Panel* ps) noexcept nogil:
    cdef int top = heap[0]
    cdef int i = 0
    cdef int l, r, best
    n[0] -= 1
    heap[0] = heap[n[0]]
    while True:
        l = 2 * i + 1
        r = l + 1
        best = i
        if l < n[0] and before(ps, heap[l], heap[best]):
            best = l
        if r < n[0] and before(ps, heap[r], heap[best]):
            best = r
        if best == i:
            break
        heap[i], heap[best] = heap[best], heap[i]
        i = best
    return top


cdef int cmp_panel(const void* x, const void* y) noexcept nogil:
    cdef double a = (<const Panel*> x).a
    cdef double b = (<const Panel*> y).a
    return (a > b) - (a < b)


cdef double neumaier_val(Panel* ps, int n) noexcept nogil:
    cdef double total = 0.0
    cdef double comp = 0.0
    cdef double t, v
    cdef int i
    for i in range(n):
        v = ps[i].val
        t = total + v
        if fabs(total) >= fabs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


cdef double neumaier_err(Panel* ps, int n) noexcept nogil:
    cdef double total = 0.0
    cdef double comp = 0.0
    cdef double t, v
    cdef int i
    for i in range(n):
        v = ps[i].err
        t = total + v
        if fabs(total) >= fabs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


cdef int adapt(integrand_t f, Ctx* ctx, const double* breaks, int nbreaks,
               double epsabs, double epsrel, long limit,
               double* out, long* evals, long* nsub) noexcept nogil:
    """Return 1 if converged, 0 if not, -1 on allocation failure, -2 on a
    non-finite panel."""
    cdef int cap = nbreaks + 64
    cdef Panel* ps = <Panel*> malloc(cap * sizeof(Panel))
    cdef int* heap = <int*> malloc(cap * sizeof(int))
    cdef int n = 0
    cdef int hn = 0
    cdef int i, idx, status
    cdef double total = 0.0
    cdef double errsum = 0.0
    cdef double a, b, m, v1, e1, v2, e2, tol
    cdef Panel* grown_p
    cdef int* grown_h
    if ps == NULL or heap == NULL:
        free(ps)
        free(heap)
        return -1
    for i in range(nbreaks - 1):
        ps[n].a = breaks[i]
        ps[n].b = breaks[i + 1]
        if not panel(f, ctx, ps[n].a, ps[n].b, &ps[n].val, &ps[n].err):
            free(ps)
            free(heap)
            return -2
        total += ps[n].val
        errsum += ps[n].err
        heap_push(heap, &hn, ps, n)
        n += 1
    evals[0] += 15 * n
    nsub[0] = 0
    status = 1
    while True:
        tol = epsrel * fabs(total)
        if tol < epsabs:
            tol = epsabs
        if not errsum > tol:
            break
        if nsub[0] >= limit:
            status = 0
            break
        if n + 1 >= cap:
            cap *= 2
            grown_p = <Panel*> realloc(ps, cap * sizeof(Panel))
            if grown_p == NULL:
                free(ps)
                free(heap)
                return -1
            ps = grown_p
            grown_h = <int*> realloc(heap, cap * sizeof(int))
            if grown_h == NULL:
                free(ps)
                free(heap)
                return -1
            heap = grown_h
        idx = heap_pop(heap, &hn, ps)
        a = ps[idx].a
        b = ps[idx].b
        m = 0.5 * (a + b)
        if not (a < m and m < b) or (b - a) <= 4.0 * DBL_EPSILON * max(fabs(a), fabs(b)):
            status = 0
            break
        if not panel(f, ctx, a, m, &v1, &e1) or not panel(f, ctx, m, b, &v2, &e2):
            free(ps)
            free(heap)
            return -2
        evals[0] += 30
        nsub[0] += 1
        total += v1 + v2 - ps[idx].val
        errsum += e1 + e2 - ps[idx].err
        ps[idx].b = m
        ps[idx].val = v1
        ps[idx].err = e1
        heap_push(heap, &hn, ps, idx)
        ps[n].a = m
        ps[n].b = b
        ps[n].val = v2
        ps[n].err = e2
        heap_push(heap, &hn, ps, n)
        n += 1
    qsort(ps, n, sizeof(Panel), cmp_panel)
    out[0] = neumaier_val(ps, n)
    out[1] = neumaier_err(ps, n)
    free(ps)
    free(heap)
    return status


cdef tuple _run(integrand_t f, int kernel, params, breaks, double epsabs,
                double epsrel, long limit):
    cdef Ctx ctx
    cdef int nb = len(breaks)
    cdef int i, status
    cdef double out[2]
    cdef long nev = 0
    cdef long nsub = 0
    cdef double* bp
    if len(params) > MAXP:
        raise ValueError("too many kernel parameters")
    if nb < 2:
        raise ValueError("need at least two breakpoints")
    ctx.kernel = kernel
    for i in range(MAXP):
        ctx.p[i] = 0.0
    for i in range(len(params)):
        ctx.p[i] = float(params[i])
    ctx.x_outer = 0.0
    ctx.epsabs = epsabs
    ctx.epsrel = epsrel
    ctx.limit = limit
    ctx.evals = 0
    ctx.failed = 0
    bp = <double*> malloc(nb * sizeof(double))
    if bp == NULL:
        raise MemoryError()
    for i in range(nb):
        bp[i] = float(breaks[i])
    with nogil:
        status = adapt(f, &ctx, bp, nb, epsabs, epsrel, limit, out, &nev, &nsub)
    free(bp)
    if status == -1:
        raise MemoryError()
    if status == -2:
        raise FloatingPointError("non-finite integrand")
    if ctx.failed:
        return NAN, INFINITY, nev + ctx.evals, 0, False
    return out[0], out[1], nev + ctx.evals, nsub, status == 1


def integrate_kernel(int kernel, params, breaks, double epsabs, double epsrel, long limit):
    """1D integral of a builtin integrand; see ``_rules`` for layouts."""
    cdef integrand_t f
    if kernel == K_NONRES:
        f = f_nonres
    elif kernel == K_STATIC:
        f = f_static
    else:
        raise KeyError(kernel)
    return _run(f, kernel, params, breaks, epsabs, epsrel, limit)


def integrate_kernel2d(int kernel, params, breaks, double epsabs, double epsrel, long limit):
    """Nested 2D integral of a builtin axisymmetric integrand."""
    if kernel not in (K_SLAB, K_HEMI, K_CAP):
        raise KeyError(kernel)
    return _run(f_outer, kernel, params, breaks, epsabs, epsrel, limit)
