import pytest

from vizcanvas.charts import (
    BinTransform,
    ChartSpec,
    Encoding,
    FilterTransform,
    TopKLabelTransform,
    Unrepairable,
    edit_distance,
    fuzzy_match,
    repair_spec,
    validate_spec,
)


def scatter(x="GDP per capita", y="Birth Rate", **kwargs):
    return ChartSpec(
        mark="scatter", encodings={"x": Encoding(x), "y": Encoding(y)}, **kwargs
    )


class TestEditDistance:
    @pytest.mark.parametrize(
        "a,b,d",
        [("", "", 0), ("abc", "abc", 0), ("birth rte", "birth rate", 1),
         ("ab", "ba", 2), ("kitten", "sitting", 3)],
    )
    def test_distances(self, a, b, d):
        assert edit_distance(a, b) == d


class TestValidateSpec:
    def test_valid_scatter(self, country_dataset):
        assert validate_spec(scatter(), country_dataset).valid

    def test_missing_y(self, country_dataset):
        spec = ChartSpec(mark="scatter", encodings={"x": Encoding("Birth Rate")})
        report = validate_spec(spec, country_dataset)
        assert not report.valid
        assert report.issues[0].code == "MissingChannel"
        assert report.issues[0].path == "encodings.y"

    def test_unknown_column_suggests_fuzzy_fix(self, country_dataset):
        report = validate_spec(scatter(y="Birth Rte"), country_dataset)
        assert not report.valid
        issue = report.issues[0]
        assert issue.code == "UnknownColumn"
        assert issue.suggested_fix == "Birth Rate"

    def test_case_insensitive_match_is_valid(self, country_dataset):
        assert validate_spec(scatter(y="birth rate"), country_dataset).valid

    def test_log_scale_on_categorical(self, country_dataset):
        spec = ChartSpec(
            mark="bar",
            encodings={
                "x": Encoding("Country"),
                "y": Encoding("Birth Rate", aggregate="mean"),
                "color": Encoding("Country", scale="log"),
            },
        )
        report = validate_spec(spec, country_dataset)
        assert [i.code for i in report.issues] == ["TypeMismatch"]
        assert report.issues[0].path == "encodings.color.scale"

    def test_bar_missing_aggregate_suggests_mean(self, country_dataset):
        spec = ChartSpec(
            mark="bar",
            encodings={"x": Encoding("Country"), "y": Encoding("Birth Rate")},
        )
        report = validate_spec(spec, country_dataset)
        assert report.issues[0].path == "encodings.y.aggregate"
        assert report.issues[0].suggested_fix == "mean"

    def test_scatter_categorical_axis(self, country_dataset):
        report = validate_spec(scatter(x="Country"), country_dataset)
        assert report.issues[0].code == "TypeMismatch"

    def test_heatmap_needs_matrix_columns(self, country_dataset):
        report = validate_spec(ChartSpec(mark="heatmap"), country_dataset)
        assert report.issues[0].code == "MissingChannel"
        assert report.issues[0].path == "matrix_columns"

    def test_bad_transforms(self, country_dataset):
        spec = scatter()
        spec.transforms = [
            FilterTransform("Birth Rate", "~", 1),
            BinTransform("Birth Rate", 0),
            TopKLabelTransform(0.9),
        ]
        report = validate_spec(spec, country_dataset)
        assert [i.code for i in report.issues] == ["BadTransform"] * 3

    def test_deterministic(self, country_dataset):
        spec = scatter(y="Birth Rte")
        a = validate_spec(spec, country_dataset).to_json_dict()
        b = validate_spec(spec, country_dataset).to_json_dict()
        assert a == b


class TestFuzzyMatch:
    def test_distance_one(self, country_dataset):
        assert fuzzy_match("Birth Rte", country_dataset) == "Birth Rate"

    def test_beyond_bound(self, country_dataset):
        assert fuzzy_match("zzzz", country_dataset) is None

    def test_ambiguity_gives_nothing(self, region_dataset):
        # region_dataset has "gdp" and "name"; "gdpname"? craft tie instead:
        from vizcanvas.data import ingest_csv

        ds = ingest_csv(b"aa,ab\n1,2\n", "tie")
        assert fuzzy_match("ac", ds) is None


class TestRepairSpec:
    def test_fuzzy_substitution(self, country_dataset):
        spec = scatter(y="Birth Rte")
        report = validate_spec(spec, country_dataset)
        repaired = repair_spec(spec, report, country_dataset)
        assert repaired.encodings["y"].column == "Birth Rate"
        assert validate_spec(repaired, country_dataset).valid
        # input untouched
        assert spec.encodings["y"].column == "Birth Rte"

    def test_unrepairable_required_channel(self, country_dataset):
        spec = scatter(x="zzzz")
        report = validate_spec(spec, country_dataset)
        with pytest.raises(Unrepairable):
            repair_spec(spec, report, country_dataset)

    def test_optional_channel_dropped(self, country_dataset):
        spec = scatter()
        spec.encodings["color"] = Encoding("zzzz")
        report = validate_spec(spec, country_dataset)
        repaired = repair_spec(spec, report, country_dataset)
        assert "color" not in repaired.encodings
        assert repaired.encodings["x"] == spec.encodings["x"]
        assert repaired.encodings["y"] == spec.encodings["y"]

    def test_missing_channel_unrepairable(self, country_dataset):
        spec = ChartSpec(mark="scatter", encodings={"x": Encoding("Birth Rate")})
        report = validate_spec(spec, country_dataset)
        with pytest.raises(Unrepairable):
            repair_spec(spec, report, country_dataset)

    def test_bar_aggregate_defaulted(self, country_dataset):
        spec = ChartSpec(
            mark="bar",
            encodings={"x": Encoding("Country"), "y": Encoding("Birth Rate")},
        )
        report = validate_spec(spec, country_dataset)
        repaired = repair_spec(spec, report, country_dataset)
        assert repaired.encodings["y"].aggregate == "mean"
        assert validate_spec(repaired, country_dataset).valid

    def test_broken_transform_dropped(self, country_dataset):
        spec = scatter()
        spec.transforms = [BinTransform("Birth Rate", 0), TopKLabelTransform(0.1)]
        report = validate_spec(spec, country_dataset)
        repaired = repair_spec(spec, report, country_dataset)
        assert repaired.transforms == [TopKLabelTransform(0.1)]

    def test_log_scale_dropped_from_categorical(self, country_dataset):
        spec = scatter()
        spec.encodings["color"] = Encoding("Country", scale="log")
        report = validate_spec(spec, country_dataset)
        repaired = repair_spec(spec, report, country_dataset)
        assert repaired.encodings["color"].scale is None
        assert validate_spec(repaired, country_dataset).valid


class TestConvergence:
    def test_within_three_passes(self, country_dataset):
        # several fault classes at once: misspelled required column,
        # unknown optional channel, missing bar aggregate
        spec = ChartSpec(
            mark="bar",
            encodings={
                "x": Encoding("Countr"),
                "y": Encoding("Birth Rte"),
                "color": Encoding("zzzz"),
            },
            transforms=[BinTransform("Birth Rte", 0)],
        )
        current = spec
        for _ in range(3):
            report = validate_spec(current, country_dataset)
            if report.valid:
                break
            current = repair_spec(current, report, country_dataset)
        assert validate_spec(current, country_dataset).valid
