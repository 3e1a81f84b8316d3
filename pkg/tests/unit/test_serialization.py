import io
import math

import pytest

from utils.serialization import format_float, write_csv


class TestFormatFloat:
    @pytest.mark.parametrize("value,expected", [
        (0.5, "0.5"),
        (0.1, "0.10000000000000001"),
        (3.0, "3"),
    ])
    def test_seventeen_significant_digits(self, value, expected):
        assert format_float(value) == expected

    @pytest.mark.parametrize("value", [0.1, 1.0 / 3.0, math.pi * 1e-12, -2.5e300, 5e-324])
    def test_reads_back_exactly(self, value):
        assert float(format_float(value)) == value


class TestWriteCsv:
    def test_layout(self):
        buffer = io.StringIO()
        write_csv(buffer, ["x", "y"], [[0.25, 1.0], [0.5, 2.0]])
        assert buffer.getvalue() == "x,y\n0.25,0.5\n1,2\n"
