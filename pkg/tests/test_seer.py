import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nfseer.errors import InputError
from nfseer.registry import Site
from nfseer.seer import (
    SeerInput,
    compute_ctb,
    compute_ctbx,
    compute_parm_adjustment,
    estimate_effort,
)

# mpmath (30 digits): 2000 * exp(-3.70945 * ln(8.22 / 4.11) / (5 * 1))
CTB_8_22 = 1195.91097695541578341
# mpmath: 15**0.4 * (20000 / 2000)**1.2 and 0.393469 times that
K_EXAMPLE = 46.820549200462055681
E_EXAMPLE = 18.422434673356604587


def values_with(reg, ctbx=None, adj=None, turn=1.0):
    values = {pid: 1.0 for pid in reg.ids}
    values[reg.turn_id] = turn
    for pid, v in zip(reg.ids_at(Site.CTBX_FACTOR), ctbx or []):
        values[pid] = v
    for pid, v in (adj or {}).items():
        values[pid] = v
    return values


def test_ctbx_product():
    assert compute_ctbx([1] * 6) == 1.0
    assert compute_ctbx([2, 1, 1, 1, 1, 1]) == 2.0
    with pytest.raises(InputError):
        compute_ctbx([1, 1, 0, 1, 1, 1])
    with pytest.raises(InputError):
        compute_ctbx([1] * 5)


@pytest.mark.parametrize("turn", [1.0, 3.0])
def test_ctb_fixed_point(turn):
    assert compute_ctb(4.11, turn) == 2000.0


def test_ctb_oracle_value():
    assert compute_ctb(8.22, 1.0) == pytest.approx(CTB_8_22, rel=1e-14)


def test_ctb_rejects_non_positive():
    with pytest.raises(InputError):
        compute_ctb(0.0, 1.0)
    with pytest.raises(InputError):
        compute_ctb(4.11, -1.0)


def test_parm_adjustment():
    assert compute_parm_adjustment([1.0] * 27, 27) == 1.0
    assert compute_parm_adjustment([1.1] + [1.0] * 26, 27) == 1.1
    with pytest.raises(InputError):
        compute_parm_adjustment([1.0, -1.0])
    with pytest.raises(InputError):
        compute_parm_adjustment([1.0] * 3, 27)


def test_estimate_example(reg):
    # six factors multiplying to 4.11 so that Cte = 2000
    ctbx = [4.11, 1, 1, 1, 1, 1]
    est = estimate_effort(SeerInput(20000.0, 15.0, values_with(reg, ctbx), 1.2), reg)
    assert est.Ctb == 2000.0 and est.Cte == 2000.0
    assert est.K == pytest.approx(K_EXAMPLE, rel=1e-13)
    assert est.E == pytest.approx(E_EXAMPLE, rel=1e-13)


def test_e_from_k_ratio(reg):
    est = estimate_effort(SeerInput(12345.0, 7.0, values_with(reg), 1.2), reg)
    assert est.E == 0.393469 * est.K
    assert 0.393469 * 10 == pytest.approx(3.93469, rel=1e-15)


def test_input_errors(reg):
    with pytest.raises(InputError):
        SeerInput(0.0, 15.0, values_with(reg))
    with pytest.raises(InputError):
        SeerInput(100.0, -1.0, values_with(reg))
    values = values_with(reg)
    del values["ACAP"]
    with pytest.raises(InputError, match="ACAP"):
        estimate_effort(SeerInput(100.0, 1.0, values), reg)


positive = st.floats(0.3, 3.0)


@given(st.lists(positive, min_size=34, max_size=34), st.floats(100, 1e6), st.floats(1, 30), st.floats(0.1, 10))
def test_homogeneity_in_size(vals, Se, D, s):
    from nfseer.registry import load_registry
    reg = load_registry()
    values = dict(zip(reg.ids, vals))
    a = estimate_effort(SeerInput(Se, D, values), reg)
    b = estimate_effort(SeerInput(Se * s, D, values), reg)
    assert b.K == pytest.approx(a.K * s ** 1.2, rel=1e-12)
    assert b.E / a.E == pytest.approx(s ** 1.2, rel=1e-12)


@given(st.lists(positive, min_size=34, max_size=34), st.floats(100, 1e6), st.floats(1.01, 2.0))
def test_monotone_in_size_and_adjustment(vals, Se, bump):
    from nfseer.registry import load_registry
    reg = load_registry()
    values = dict(zip(reg.ids, vals))
    base = estimate_effort(SeerInput(Se, 10.0, values), reg)
    assert estimate_effort(SeerInput(Se * bump, 10.0, values), reg).E > base.E
    pid = reg.ids_at(Site.ADJUSTMENT_FACTOR)[0]
    bumped = estimate_effort(SeerInput(Se, 10.0, {**values, pid: values[pid] * bump}), reg)
    assert bumped.parm_adjustment > base.parm_adjustment
    assert bumped.E > base.E


def test_decomposition_consistency(reg):
    rng = np.random.default_rng(3)
    for _ in range(50):
        values = dict(zip(reg.ids, rng.uniform(0.5, 2.0, 34)))
        est = estimate_effort(SeerInput(float(rng.uniform(1e3, 1e6)), 9.0, values), reg)
        ctbx = compute_ctbx([values[p] for p in reg.ids_at(Site.CTBX_FACTOR)])
        ctb = compute_ctb(ctbx, values[reg.turn_id])
        parm = compute_parm_adjustment([values[p] for p in reg.ids_at(Site.ADJUSTMENT_FACTOR)])
        assert (est.ctbx, est.Ctb, est.parm_adjustment, est.Cte) == (ctbx, ctb, parm, ctb / parm)
        assert math.isfinite(est.E) and est.E > 0
