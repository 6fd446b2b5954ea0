import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from interband import TimeSeries, read_timeseries, write_timeseries
from interband.tables import read_table, write_table

meta_values = st.one_of(
    st.floats(allow_nan=False),
    st.integers(-(2**62), 2**62),
    st.booleans(),
    st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=20),
    st.none(),
)


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.from_regex(r"[a-z_.]{1,12}", fullmatch=True), meta_values, max_size=8))
def test_metadata_round_trip_bit_exact(tmp_path_factory, meta):
    path = tmp_path_factory.mktemp("t") / "m.csv"
    write_table(path, ("a",), [], meta)
    back, columns, rows = read_table(path)
    assert columns == ["a"] and rows == []
    assert back.keys() == meta.keys()
    for k, v in meta.items():
        assert type(back[k]) is type(v)
        if isinstance(v, float):
            assert math.copysign(1, back[k]) == math.copysign(1, v) and back[k] == v
        else:
            assert back[k] == v


def test_timeseries_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    t = np.cumsum(rng.uniform(0.1, 1.0, 50))
    v = rng.uniform(0, 1, 50)
    ts = TimeSeries(t, v, {"dt": 0.1 + 0.2, "basis": "spin:L=5", "t_rev": math.inf, "ok": True})
    write_timeseries(tmp_path / "ts.csv", ts)
    back = read_timeseries(tmp_path / "ts.csv")
    assert np.array_equal(back.times, ts.times) and np.array_equal(back.values, ts.values)
    assert back.meta == ts.meta


def test_cells_with_commas_are_quoted(tmp_path):
    write_table(tmp_path / "s.csv", ("x", "status"), [(1.5, "error: a, b")])
    _, columns, rows = read_table(tmp_path / "s.csv")
    assert rows == [["1.5", "error: a, b"]]
