# cython: language_level=3
"""Compiled matching kernels; behaviour mirrors ``_pykernels`` exactly."""

from libc.stdlib cimport malloc, free, qsort
from libc.string cimport memset


cdef struct IouPair:
    double iou
    long long gkey
    long long pkey
    Py_ssize_t gi
    Py_ssize_t pi


cdef struct DistPair:
    long long dist
    long long gkey
    long long pkey
    Py_ssize_t gi
    Py_ssize_t pi


cdef int _cmp_iou(const void* a, const void* b) noexcept nogil:
    cdef const IouPair* x = <const IouPair*> a
    cdef const IouPair* y = <const IouPair*> b
    if x.iou > y.iou:
        return -1
    if x.iou < y.iou:
        return 1
    if x.gkey != y.gkey:
        return -1 if x.gkey < y.gkey else 1
    if x.pkey != y.pkey:
        return -1 if x.pkey < y.pkey else 1
    if x.gi != y.gi:
        return -1 if x.gi < y.gi else 1
    if x.pi != y.pi:
        return -1 if x.pi < y.pi else 1
    return 0


cdef int _cmp_dist(const void* a, const void* b) noexcept nogil:
    cdef const DistPair* x = <const DistPair*> a
    cdef const DistPair* y = <const DistPair*> b
    if x.dist != y.dist:
        return -1 if x.dist < y.dist else 1
    if x.gkey != y.gkey:
        return -1 if x.gkey < y.gkey else 1
    if x.pkey != y.pkey:
        return -1 if x.pkey < y.pkey else 1
    if x.gi != y.gi:
        return -1 if x.gi < y.gi else 1
    if x.pi != y.pi:
        return -1 if x.pi < y.pi else 1
    return 0


cdef inline double _iou(long long ab, long long ae, long long bb, long long be) noexcept nogil:
    cdef long long inter = (ae if ae < be else be) - (ab if ab > bb else bb)
    if inter <= 0:
        return 0.0
    cdef long long union = (ae if ae > be else be) - (ab if ab < bb else bb)
    return <double> inter / <double> union


def interval_iou(long long a_begin, long long a_end, long long b_begin, long long b_end):
    return _iou(a_begin, a_end, b_begin, b_end)


def greedy_match(pred, gt, bint include_zero=False):
    cdef Py_ssize_t n_gt = len(gt), n_pred = len(pred)
    cdef Py_ssize_t i, j, k, n = 0, limit
    cdef double v
    if n_gt == 0 or n_pred == 0:
        return []
    limit = n_gt if n_gt < n_pred else n_pred

    cdef long long* pb = <long long*> malloc(n_pred * 2 * sizeof(long long))
    cdef long long* gb = <long long*> malloc(n_gt * 2 * sizeof(long long))
    cdef IouPair* pairs = <IouPair*> malloc(n_gt * n_pred * sizeof(IouPair))
    cdef char* used_gt = <char*> malloc(n_gt)
    cdef char* used_pred = <char*> malloc(n_pred)
    if not pb or not gb or not pairs or not used_gt or not used_pred:
        free(pb); free(gb); free(pairs); free(used_gt); free(used_pred)
        raise MemoryError()

    out = []
    try:
        for i in range(n_pred):
            b, e = pred[i]
            pb[2 * i] = b
            pb[2 * i + 1] = e
        for j in range(n_gt):
            b, e = gt[j]
            gb[2 * j] = b
            gb[2 * j + 1] = e
        with nogil:
            for j in range(n_gt):
                for i in range(n_pred):
                    v = _iou(pb[2 * i], pb[2 * i + 1], gb[2 * j], gb[2 * j + 1])
                    if v > 0.0 or include_zero:
                        pairs[n].iou = v
                        pairs[n].gkey = gb[2 * j]
                        pairs[n].pkey = pb[2 * i]
                        pairs[n].gi = j
                        pairs[n].pi = i
                        n += 1
            qsort(pairs, n, sizeof(IouPair), _cmp_iou)
            memset(used_gt, 0, n_gt)
            memset(used_pred, 0, n_pred)
        for k in range(n):
            if used_gt[pairs[k].gi] or used_pred[pairs[k].pi]:
                continue
            used_gt[pairs[k].gi] = 1
            used_pred[pairs[k].pi] = 1
            out.append((pairs[k].gi, pairs[k].pi, pairs[k].iou))
            if len(out) == limit:
                break
    finally:
        free(pb); free(gb); free(pairs); free(used_gt); free(used_pred)
    return out


def match_boundaries(pred, gt, long long max_distance):
    cdef Py_ssize_t n_gt = len(gt), n_pred = len(pred)
    cdef Py_ssize_t i, j, k, n = 0
    cdef long long d
    if n_gt == 0 or n_pred == 0:
        return []

    cdef long long* pv = <long long*> malloc(n_pred * sizeof(long long))
    cdef long long* gv = <long long*> malloc(n_gt * sizeof(long long))
    cdef DistPair* pairs = <DistPair*> malloc(n_gt * n_pred * sizeof(DistPair))
    cdef char* used_gt = <char*> malloc(n_gt)
    cdef char* used_pred = <char*> malloc(n_pred)
    if not pv or not gv or not pairs or not used_gt or not used_pred:
        free(pv); free(gv); free(pairs); free(used_gt); free(used_pred)
        raise MemoryError()

    out = []
    try:
        for i in range(n_pred):
            pv[i] = pred[i]
        for j in range(n_gt):
            gv[j] = gt[j]
        with nogil:
            for j in range(n_gt):
                for i in range(n_pred):
                    d = pv[i] - gv[j]
                    if d < 0:
                        d = -d
                    if d <= max_distance:
                        pairs[n].dist = d
                        pairs[n].gkey = gv[j]
                        pairs[n].pkey = pv[i]
                        pairs[n].gi = j
                        pairs[n].pi = i
                        n += 1
            qsort(pairs, n, sizeof(DistPair), _cmp_dist)
            memset(used_gt, 0, n_gt)
            memset(used_pred, 0, n_pred)
        for k in range(n):
            if used_gt[pairs[k].gi] or used_pred[pairs[k].pi]:
                continue
            used_gt[pairs[k].gi] = 1
            used_pred[pairs[k].pi] = 1
            out.append((pairs[k].gi, pairs[k].pi, pairs[k].dist))
    finally:
        free(pv); free(gv); free(pairs); free(used_gt); free(used_pred)
    return out
