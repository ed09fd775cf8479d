import math

from nullgeo.report import (CheckReport, IdentityRecord, fmt_csv_float,
                            fmt_json_float, json_text, report_to_json)


class TestCsvFormat:
    def test_one(self):
        assert fmt_csv_float(1.0) == "1.000000e0"

    def test_zero(self):
        assert fmt_csv_float(0.0) == "0.000000e0"
        assert fmt_csv_float(-0.0) == "0.000000e0"

    def test_negative_exponent(self):
        assert fmt_csv_float(1.23456789e-5) == "1.234568e-5"

    def test_nan(self):
        assert fmt_csv_float(float("nan")) == "nan"

    def test_large(self):
        assert fmt_csv_float(-2.5e10) == "-2.500000e10"


class TestJsonFormat:
    def test_float_precision(self):
        text = fmt_json_float(math.pi)
        assert float(text) == math.pi

    def test_nested_structure(self):
        text = json_text({"a": [1, 2.5, True, None], "b": "x\"y"})
        assert text == '{"a": [1, 2.5, true, null], "b": "x\\"y"}'

    def test_report_round_trip_parses(self):
        import json
        rep = CheckReport("demo", (3, 3))
        rep.records.append(IdentityRecord(
            "check", "a = b", 1e-12, (0.0, 0.5), 1e-9, True, 9))
        obj = json.loads(report_to_json(rep))
        assert obj["surface"] == "demo"
        assert obj["overall_pass"] is True
        assert obj["records"][0]["pass"] is True

    def test_overall_pass_logic(self):
        rep = CheckReport("demo", (3, 3))
        rep.records.append(IdentityRecord("ok", "", 0.0, None, 1.0, True, 1))
        assert rep.overall_pass
        rep.records.append(IdentityRecord("bad", "", 2.0, None, 1.0, False, 1))
        assert not rep.overall_pass

    def test_deterministic(self):
        rep = CheckReport("demo", (3, 3))
        rep.records.append(IdentityRecord(
            "check", "a = b", 0.1 + 0.2, (1 / 3, 2 / 3), 1e-9, False, 9, 1, "n"))
        assert report_to_json(rep) == report_to_json(rep)
