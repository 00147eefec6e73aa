# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled reduction kernel for circle-harmonic coefficients on Matsubara grids.

For every order i = 0..max_order-1 this accumulates, over all grid points n,

    neg[i] += (-1/beta) * values[n] * jac(z_n) * t(z_n)**i
    pos[i] += (-1/beta) * values[n] * jac(z_n) * (1/t(z_n))**(i+2)

with t(z) = (z - c)/(z + c) and jac(z) = 2c/(z + c)**2.  Sums run in ascending
grid order with Kahan compensation: the grids reach millions of terms whose
slow quadratic decay would otherwise erode precision.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


def matsubara_reduce(cplx[:, ::1] values, cplx[::1] z, double c, double beta, int max_order):
    """Return (neg, pos), each of shape (max_order, n_columns)."""
    cdef Py_ssize_t n_pts = values.shape[0]
    cdef Py_ssize_t n_col = values.shape[1]
    if z.shape[0] != n_pts:
        raise ValueError("values and z must have the same leading dimension")
    if max_order < 1:
        raise ValueError("max_order must be at least 1")

    neg_arr = np.zeros((max_order, n_col), dtype=np.complex128)
    pos_arr = np.zeros((max_order, n_col), dtype=np.complex128)
    comp_neg_arr = np.zeros((max_order, n_col), dtype=np.complex128)
    comp_pos_arr = np.zeros((max_order, n_col), dtype=np.complex128)
    cdef cplx[:, ::1] neg = neg_arr
    cdef cplx[:, ::1] pos = pos_arr
    cdef cplx[:, ::1] cneg = comp_neg_arr
    cdef cplx[:, ::1] cpos = comp_pos_arr

    cdef Py_ssize_t n, col, i
    cdef cplx t, u, base, w, tp, up, term, y, s
    cdef double scale = -1.0 / beta

    for n in range(n_pts):
        base = scale * 2.0 * c / ((z[n] + c) * (z[n] + c))
        t = (z[n] - c) / (z[n] + c)
        u = (z[n] + c) / (z[n] - c)
        for col in range(n_col):
            w = base * values[n, col]
            tp = w            # w * t**0
            up = w * u * u    # w * u**2
            for i in range(max_order):
                # Kahan step for neg[i, col] += tp
                term = tp
                y = term - cneg[i, col]
                s = neg[i, col] + y
                cneg[i, col] = (s - neg[i, col]) - y
                neg[i, col] = s
                # Kahan step for pos[i, col] += up
                term = up
                y = term - cpos[i, col]
                s = pos[i, col] + y
                cpos[i, col] = (s - pos[i, col]) - y
                pos[i, col] = s
                tp = tp * t
                up = up * u

    return neg_arr, pos_arr
