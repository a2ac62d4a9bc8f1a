"""Pole extraction, residues, scaling-equation roots, Fourier route.

Residues are pinned to exact rational/logarithmic closed forms computed by
hand from the catalog zeta expressions, and cross-checked through contour
integration and tube-profile Fourier coefficients.
"""
import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq

from fractalzeta import geometry, spectrum, zeta
from fractalzeta.spectrum import (PoleDatum, Window, poles, residue_analytic,
                                  residue_contour, residue_exact, spray_dims,
                                  window_for_lattice)

LN2 = math.log(2.0)
LN3 = math.log(3.0)
D_CANTOR = LN2 / LN3
D_CARPET2 = math.log(8.0) / LN3
D_CARPET3 = math.log(26.0) / LN3


# --- exact residues at integer poles ----------------------------------------------


def test_carpet2_exact_residues_at_integers():
    form = zeta.catalog_form(geometry.carpet(2))
    assert residue_exact(form, 0) == Fraction(8, 7)
    assert residue_exact(form, 1) == Fraction(-4, 5)


def test_carpet3_exact_residues_at_integers():
    form = zeta.catalog_form(geometry.carpet(3))
    assert residue_exact(form, 0) == Fraction(-24, 25)
    assert residue_exact(form, 1) == Fraction(24, 23)
    assert residue_exact(form, 2) == Fraction(-6, 17)


def test_cantor_exact_residue_at_zero():
    form = zeta.catalog_form(geometry.cantor_set(2, 1 / 3))
    assert residue_exact(form, 0) == Fraction(-2, 1)


def test_residue_exact_rejects_non_integer_pole():
    form = zeta.MeromorphicForm((zeta.ZetaTerm(coeff=1, roots=(Fraction(1, 2),)),))
    with pytest.raises(ValueError):
        residue_exact(form, Fraction(1, 2))


def test_residue_exact_is_zero_off_poles():
    form = zeta.catalog_form(geometry.carpet(2))
    assert residue_exact(form, 3) == 0


def test_analytic_residue_matches_exact():
    form = zeta.catalog_form(geometry.carpet(2))
    assert residue_analytic(form, 0.0 + 0.0j) == pytest.approx(8 / 7, rel=1e-12)
    assert residue_analytic(form, 1.0 + 0.0j) == pytest.approx(-4 / 5, rel=1e-12)


# --- principal poles of the carpet -------------------------------------------------


def test_carpet2_principal_poles_on_dimension_line():
    form = zeta.catalog_form(geometry.carpet(2))
    # tight sigma pad keeps the generator root pole at s = 1 outside
    w = window_for_lattice(D_CARPET2, LN3, 3, sigma_pad=0.05)
    ps = poles(form, w)
    omegas = [p.omega for p in ps]
    period = 2.0 * math.pi / LN3
    expected = [complex(D_CARPET2, k * period) for k in range(-3, 4)]
    assert len(ps) == 7
    for got, want in zip(omegas, expected):
        assert got == pytest.approx(want, abs=1e-12)
    for p in ps:
        assert p.order == 1


def test_carpet2_residue_at_dimension_closed_form():
    form = zeta.catalog_form(geometry.carpet(2))
    w = window_for_lattice(D_CARPET2, LN3, 0, sigma_pad=0.05)
    (p,) = poles(form, w)
    want = 2.0 ** (-D_CARPET2) / (D_CARPET2 * (D_CARPET2 - 1.0) * LN3)
    assert want == pytest.approx(0.14505008370361427, rel=1e-15)
    assert p.residue.real == pytest.approx(want, rel=1e-12)
    assert p.residue.imag == pytest.approx(0.0, abs=1e-14)


def test_carpet2_conjugate_poles_have_conjugate_residues():
    form = zeta.catalog_form(geometry.carpet(2))
    ps = poles(form, window_for_lattice(D_CARPET2, LN3, 2))
    by_tau = {round(p.omega.imag, 9): p for p in ps}
    for tau, p in by_tau.items():
        q = by_tau[-tau]
        assert q.residue == pytest.approx(p.residue.conjugate(), rel=1e-12)


def test_full_cantor_zero_pole_is_removable():
    # the collar term contributes +2 at s = 0, cancelling the -2 from the
    # ladder part: the gross pole must be dropped from the reported list
    desc = geometry.cantor_set(2, 1 / 3)
    form = zeta.catalog_form(desc, full=True, delta=1 / 6)
    w = Window(-0.5, 1.0, 1.0)
    ps = poles(form, w)
    assert all(abs(p.omega) > 1e-9 for p in ps)
    assert residue_analytic(form, 0.0 + 0.0j) == pytest.approx(0.0, abs=1e-10)
    rel_form = zeta.catalog_form(desc)
    assert any(abs(p.omega) <= 1e-9 for p in poles(rel_form, w))


def test_contour_residue_matches_analytic():
    form = zeta.catalog_form(geometry.carpet(2))
    for omega in (complex(D_CARPET2), complex(D_CARPET2, 2 * math.pi / LN3), 1.0 + 0.0j):
        ra = residue_analytic(form, omega)
        rc = residue_contour(form.value, omega, radius=0.3)
        assert rc == pytest.approx(ra, rel=1e-9)


def test_contour_residue_rejects_grazing_radius():
    # radius equal to the lattice spacing puts neighbor poles on the contour
    form = zeta.catalog_form(geometry.carpet(2))
    with pytest.raises(ValueError):
        residue_contour(form.value, complex(D_CARPET2), radius=2 * math.pi / LN3)


# --- scaling-equation roots (complex dimensions of sprays) --------------------------


def test_spray_dims_lattice_pair():
    # ratios (1/2, 1/4, 1/4): 2^{-s} + 2*4^{-s} = 1 has the explicit solution
    # set {0 + i pi/ln2 + lattice, 1 + lattice} with lattice step 2 pi/ln2
    w = Window(-0.5, 1.5, 10.0)
    ps = spray_dims((0.5, 0.25, 0.25), w)
    step = 2.0 * math.pi / LN2
    expected = sorted([
        complex(0.0, -0.5 * step), complex(0.0, 0.5 * step),
        complex(1.0, -step), complex(1.0, 0.0), complex(1.0, step),
    ], key=lambda z: (z.real, z.imag))
    got = sorted([p.omega for p in ps], key=lambda z: (z.real, z.imag))
    assert len(got) == len(expected)
    for g, e in zip(got, expected):
        assert g == pytest.approx(e, abs=1e-10)
    res_at_1 = next(p for p in ps if abs(p.omega - 1.0) < 1e-9).residue
    assert res_at_1 == pytest.approx(2.0 / (3.0 * LN2), rel=1e-10)


def test_spray_dims_golden_pair_real_root():
    # 2^{-s} + 4^{-s} = 1 means 2^{-s} is the golden-ratio conjugate
    ps = spray_dims((0.5, 0.25), Window(0.1, 1.0, 0.5))
    real_roots = [p for p in ps if abs(p.omega.imag) < 1e-12]
    assert len(real_roots) == 1
    want = math.log2((1.0 + math.sqrt(5.0)) / 2.0)
    assert real_roots[0].omega.real == pytest.approx(want, rel=1e-12)


def test_spray_dims_nonlattice_real_root_matches_bisection():
    ratios = (0.5, 1.0 / 3.0)
    f = lambda x: 0.5 ** x + (1.0 / 3.0) ** x - 1.0
    want = brentq(f, 0.5, 1.0, xtol=1e-14)
    ps = spray_dims(ratios, Window(0.2, 1.0, 0.5))
    real_roots = [p for p in ps if abs(p.omega.imag) < 1e-12]
    assert len(real_roots) == 1
    assert real_roots[0].omega.real == pytest.approx(want, abs=1e-12)
    # Moran equation residue: 1 / sum r^w ln(1/r)
    den = sum(r ** want * math.log(1.0 / r) for r in ratios)
    assert real_roots[0].residue == pytest.approx(1.0 / den, rel=1e-10)


def test_spray_dims_roots_satisfy_moran_equation():
    w = Window(-0.5, 1.5, 25.0)
    for ratios in ((0.5, 0.25, 0.25), (0.5, 0.25), 8 * (1 / 3,)):
        for p in spray_dims(ratios, w):
            val = sum(r ** p.omega for r in ratios)
            assert abs(val - 1.0) < 1e-10


def test_commensurable_exponent_detection():
    arr = lambda *xs: np.asarray(xs, dtype=float)
    assert spectrum._commensurable_exponents(arr(0.5, 0.25, 0.125)) is not None
    assert spectrum._commensurable_exponents(arr(0.5, 1 / 3)) is None
    base = spectrum._commensurable_exponents(arr(0.5, 0.25))
    assert base is not None
    r, ks = base
    assert [r ** k for k in ks] == pytest.approx([0.5, 0.25], rel=1e-12)


# --- Fourier route to residues --------------------------------------------------------


def test_fourier_residues_match_tube_zeta_residues():
    # the full cantor tube is exactly log-periodic, so the Fourier modes of
    # t^{D-N} V(t) give the tube-zeta residues along the dimension line
    desc = geometry.cantor_set(2, 1 / 3)
    form = zeta.catalog_form(desc, full=True, delta=1 / 6)
    period = LN3
    tube = lambda t: geometry.tube_volume(desc, t, full=True)
    got = dict(spectrum.fourier_residues(tube, 1, D_CANTOR, period, kmax=2,
                                         tau0=math.log(6.0)))
    step = 2.0 * math.pi / period
    for k in range(-2, 3):
        omega = complex(D_CANTOR, k * step)
        want = residue_analytic(form, omega) / (1.0 - omega)  # tube-zeta residue
        assert got[k] == pytest.approx(want, rel=2e-5)
    assert got[-1] == pytest.approx(got[1].conjugate(), rel=1e-9)
    assert got[0].imag == pytest.approx(0.0, abs=1e-12)


def test_fourier_residues_reject_nonperiodic_profile():
    # the relative cantor tube satisfies V(t/3) = (2/3)(t + V(t)): close to
    # periodic but with a linear defect the check must catch
    desc = geometry.cantor_set(2, 1 / 3)
    tube = lambda t: geometry.tube_volume(desc, t)
    with pytest.raises(ValueError):
        spectrum.fourier_residues(tube, 1, D_CANTOR, LN3, kmax=1,
                                  tau0=math.log(6.0))


# --- window and pole bookkeeping ---------------------------------------------------------


def test_window_contains_and_validation():
    w = Window(0.0, 2.0, 5.0)
    assert w.contains(1.0 + 4.0j)
    assert not w.contains(1.0 + 5.5j)
    assert not w.contains(-0.5 + 0.0j)
    assert w.contains(2.0 + 5.0j)  # boundary included via slack
    with pytest.raises(ValueError):
        Window(2.0, 0.0, 5.0)
    with pytest.raises(ValueError):
        Window(0.0, 2.0, -1.0)


def test_window_for_lattice_covers_requested_modes():
    w = window_for_lattice(D_CANTOR, LN3, 2)
    step = 2.0 * math.pi / LN3
    assert w.contains(complex(D_CANTOR, 2 * step))
    assert not w.contains(complex(D_CANTOR, 3 * step))
    assert w.sigma_left < D_CANTOR < w.sigma_right


def test_poles_sorted_and_within_window():
    form = zeta.catalog_form(geometry.carpet(2))
    w = Window(-0.5, 2.0, 12.0)
    ps = poles(form, w)
    keys = [(p.omega.real, p.omega.imag) for p in ps]
    assert keys == sorted(keys)
    assert all(w.contains(p.omega) for p in ps)
    assert any(abs(p.omega - 1.0) < 1e-12 for p in ps)  # generator root pole
    assert any(abs(p.omega - D_CARPET2) < 1e-12 for p in ps)


def test_pole_datum_fields():
    p = PoleDatum(omega=1.0 + 2.0j, order=1, residue=0.5 - 0.25j)
    assert p.omega == 1.0 + 2.0j and p.order == 1 and p.residue == 0.5 - 0.25j
