import numpy as np
import pytest

from modecast.errors import DuplicateDate, EmptyAfterDrop, EmptySeries, MissingColumn, UnparseableDate
from modecast.ingest import FIXTURE_PATH, TimeSeries, describe, load_csv, load_fixture


def write(tmp_path, text, name="prices.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_drops_empty_close(tmp_path):
    p = write(tmp_path, "Date,Close\n2020-01-01,1.5\n2020-01-02,\n2020-01-03,2.5\n2020-01-04,3.0\n")
    ts = load_csv(p)
    assert len(ts) == 3
    assert ts.drop_count == 1
    assert ts.values.tolist() == [1.5, 2.5, 3.0]


def test_unparseable_and_nonfinite_values_are_dropped(tmp_path):
    p = write(tmp_path, "Date,Close\n2020-01-01,abc\n2020-01-02,nan\n2020-01-03,4\n")
    ts = load_csv(p)
    assert ts.values.tolist() == [4.0]
    assert ts.drop_count == 2


def test_sorts_by_date(tmp_path):
    p = write(tmp_path, "Date,Close\n2020-01-03,3\n2020-01-01,1\n2020-01-02,2\n")
    ts = load_csv(p)
    assert ts.values.tolist() == [1.0, 2.0, 3.0]
    assert np.all(np.diff(ts.dates) > np.timedelta64(0, "D"))


def test_all_empty_raises(tmp_path):
    p = write(tmp_path, "Date,Close\n2020-01-01,\n2020-01-02,\n")
    with pytest.raises(EmptyAfterDrop):
        load_csv(p)


def test_missing_column(tmp_path):
    p = write(tmp_path, "Date,Open\n2020-01-01,1\n")
    with pytest.raises(MissingColumn):
        load_csv(p)


def test_bad_date(tmp_path):
    p = write(tmp_path, "Date,Close\n01/02/2020,1\n")
    with pytest.raises(UnparseableDate):
        load_csv(p)


def test_duplicate_date(tmp_path):
    p = write(tmp_path, "Date,Close\n2020-01-01,1\n2020-01-02,2\n2020-01-01,3\n")
    with pytest.raises(DuplicateDate):
        load_csv(p)


def test_custom_columns(tmp_path):
    p = write(tmp_path, "day,price,volume\n2021-05-01,10,1\n2021-05-02,11,1\n")
    ts = load_csv(p, date_column="day", value_column="price")
    assert ts.values.tolist() == [10.0, 11.0]


def test_idempotent_on_clean_file(tmp_path):
    p = write(tmp_path, "Date,Close\n2020-01-01,1\n2020-01-02,2\n")
    a, b = load_csv(p), load_csv(p)
    assert np.array_equal(a.dates, b.dates) and np.array_equal(a.values, b.values)


def test_fixture_row_counts():
    ts = load_fixture()
    assert len(ts) == 2863
    assert ts.raw_row_count == sum(1 for _ in FIXTURE_PATH.open()) - 1


def test_describe_constant():
    s = describe(TimeSeries.from_values([5.0, 5.0, 5.0]))
    assert s.mean == 5 and s.std == 0
    assert s.min == s.q25 == s.median == s.q75 == s.max == 5


def _type7_oracle(values, p):
    # textbook definition: h = (n-1)p, interpolate between floor(h) and floor(h)+1
    xs = sorted(values)
    h = (len(xs) - 1) * p
    lo = int(h)
    hi = min(lo + 1, len(xs) - 1)
    return xs[lo] + (h - lo) * (xs[hi] - xs[lo])


def test_describe_quantiles_against_oracle():
    values = np.arange(1, 101, dtype=float)
    s = describe(TimeSeries.from_values(values))
    assert s.q25 == pytest.approx(_type7_oracle(values, 0.25), abs=1e-12)
    assert s.median == pytest.approx(_type7_oracle(values, 0.5), abs=1e-12)
    assert s.q75 == pytest.approx(_type7_oracle(values, 0.75), abs=1e-12)
    # 25.75, 50.5, 75.25 for 1..100
    assert (s.q25, s.median, s.q75) == (25.75, 50.5, 75.25)
    n = len(values)
    mean = sum(values) / n
    std = (sum((v - mean) ** 2 for v in values) / (n - 1)) ** 0.5
    assert s.mean == pytest.approx(mean, rel=1e-14)
    assert s.std == pytest.approx(std, rel=1e-14)


def test_describe_permutation_invariant():
    rng = np.random.default_rng(3)
    v = rng.lognormal(size=257)
    a = describe(TimeSeries.from_values(v))
    b = describe(TimeSeries.from_values(rng.permutation(v)))
    assert a == b


def test_describe_invariants_on_fixture():
    s = describe(load_fixture())
    assert s.min <= s.q25 <= s.median <= s.q75 <= s.max
    assert s.std >= 0 and s.count == 2863


def test_describe_empty():
    with pytest.raises(EmptySeries):
        describe(TimeSeries.from_values([]))
