import random

import pytest

from oracles import execute_query_oracle
from vizcanvas.data import (
    ChartQuery,
    Filter,
    InvalidBinCount,
    Projection,
    TypeMismatch,
    UnknownColumn,
    execute_query,
    ingest_csv,
)

GDP_CSV = b"""region,gdp,name
A,1,alpha
A,3,beta
B,5,gamma
"""


class TestExecuteQuery:
    def test_group_mean(self, region_dataset):
        query = ChartQuery(
            source=region_dataset.id,
            projections=[Projection("region"), Projection("gdp", "mean")],
        )
        table = execute_query(region_dataset, query)
        assert table.column_names == ["region", "mean(gdp)"]
        assert table.rows == [["A", 2.0], ["B", 5.0]]

    def test_identity_query(self, region_dataset):
        query = ChartQuery(
            source=region_dataset.id,
            projections=[Projection("region"), Projection("gdp"), Projection("name")],
        )
        table = execute_query(region_dataset, query)
        assert table.column_names == ["region", "gdp", "name"]
        assert table.rows == [["A", 1.0, "alpha"], ["A", 3.0, "beta"], ["B", 5.0, "gamma"]]

    def test_filter_to_empty_keeps_columns(self, region_dataset):
        query = ChartQuery(
            source=region_dataset.id,
            projections=[Projection("region"), Projection("gdp")],
            filters=[Filter("gdp", ">", 10.0)],
        )
        table = execute_query(region_dataset, query)
        assert table.column_names == ["region", "gdp"]
        assert table.rows == []

    def test_count_includes_nulls_in_other_columns(self):
        ds = ingest_csv(b"k,v\nA,\nA,2\nB,3\n", "nulls")
        query = ChartQuery(
            source=ds.id,
            projections=[Projection("k"), Projection("v", "count"), Projection("v", "mean")],
        )
        table = execute_query(ds, query)
        assert table.rows == [["A", 2.0, 2.0], ["B", 1.0, 3.0]]

    def test_all_null_aggregate_is_null(self):
        ds = ingest_csv(b"k,v\nA,\nA,\nB,3\n", "allnull")
        query = ChartQuery(
            source=ds.id, projections=[Projection("k"), Projection("v", "mean")]
        )
        assert execute_query(ds, query).rows == [["A", None], ["B", 3.0]]

    def test_bin_then_count(self):
        ds = ingest_csv(b"v\n0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n", "bins")
        query = ChartQuery(
            source=ds.id,
            projections=[Projection("v"), Projection("v", "count")],
            bins=("v", 3),
        )
        table = execute_query(ds, query)
        assert table.column_names == ["v_bin_start", "v_bin_end", "count(v)"]
        assert len(table.rows) == 3
        assert sum(r[2] for r in table.rows) == 10.0

    def test_sort_and_limit(self, region_dataset):
        query = ChartQuery(
            source=region_dataset.id,
            projections=[Projection("name"), Projection("gdp")],
            sort=("gdp", "desc"),
            limit=2,
        )
        table = execute_query(region_dataset, query)
        assert [r[0] for r in table.rows] == ["gamma", "beta"]

    def test_nulls_sort_last(self):
        ds = ingest_csv(b"k,v\na,2\nb,\nc,1\n", "sortnull")
        query = ChartQuery(source=ds.id, projections=[Projection("v")], sort=("v", "asc"))
        assert execute_query(ds, query).rows == [[1.0], [2.0], [None]]

    def test_unknown_column(self, region_dataset):
        with pytest.raises(UnknownColumn):
            execute_query(
                region_dataset,
                ChartQuery(source=region_dataset.id, projections=[Projection("nope")]),
            )

    def test_numeric_comparison_on_categorical(self, region_dataset):
        with pytest.raises(TypeMismatch):
            execute_query(
                region_dataset,
                ChartQuery(
                    source=region_dataset.id,
                    projections=[Projection("region")],
                    filters=[Filter("region", "<", 5)],
                ),
            )

    def test_invalid_bin_count(self, region_dataset):
        with pytest.raises(InvalidBinCount):
            execute_query(
                region_dataset,
                ChartQuery(
                    source=region_dataset.id,
                    projections=[Projection("gdp")],
                    bins=("gdp", 0),
                ),
            )

    def test_mean_of_categorical_rejected(self, region_dataset):
        with pytest.raises(TypeMismatch):
            execute_query(
                region_dataset,
                ChartQuery(source=region_dataset.id,
                           projections=[Projection("region", "mean")]),
            )


def random_dataset(rng: random.Random):
    n_rows = rng.randint(0, 50)
    columns = ["q1", "q2", "q3", "c1", "c2"]
    lines = [",".join(columns)]
    for _ in range(n_rows):
        record = []
        for name in columns:
            if rng.random() < 0.12:
                record.append("")
            elif name.startswith("q"):
                record.append(str(rng.randint(-50, 50)))
            else:
                record.append(rng.choice("abcde"))
        lines.append(",".join(record))
    return ingest_csv(("\n".join(lines) + "\n").encode(), "fuzz")


def random_query(rng: random.Random, dataset):
    from vizcanvas.data.model import ColumnType

    quantitative = [c.name for c in dataset.columns if c.ctype is ColumnType.QUANTITATIVE]
    categorical = [c.name for c in dataset.columns if c.ctype is not ColumnType.QUANTITATIVE]
    projections = []
    for _ in range(rng.randint(1, 3)):
        if quantitative and (not categorical or rng.random() < 0.5):
            column = rng.choice(quantitative)
            aggregate = rng.choice([None, "sum", "mean", "count", "min", "max"])
        else:
            column = rng.choice(categorical)
            aggregate = rng.choice([None, None, "count", "min", "max"])
        projections.append(Projection(column, aggregate))

    filters = []
    for _ in range(rng.randint(0, 2)):
        if quantitative and rng.random() < 0.6:
            column = rng.choice(quantitative)
            op = rng.choice(["=", "!=", "<", "<=", ">", ">=", "in-range"])
            if op == "in-range":
                lo = rng.randint(-50, 20)
                value = (float(lo), float(lo + rng.randint(0, 40)))
            else:
                value = float(rng.randint(-50, 50))
        else:
            column = rng.choice(categorical)
            op = rng.choice(["=", "!="])
            value = rng.choice("abcde")
        filters.append(Filter(column, op, value))

    bins = None
    non_agg_quant = [p.column for p in projections
                     if p.aggregate is None and p.column in quantitative]
    if non_agg_quant and rng.random() < 0.4:
        bins = (rng.choice(non_agg_quant), rng.randint(1, 5))

    query = ChartQuery(source=dataset.id, projections=projections,
                       filters=filters, bins=bins)

    from vizcanvas.data.query import output_column_names

    names = output_column_names(query)
    if names and rng.random() < 0.5:
        query.sort = (rng.choice(names), rng.choice(["asc", "desc"]))
    if rng.random() < 0.4:
        query.limit = rng.randint(1, 10)
    return query


class TestQueryOracle:
    def test_matches_brute_force_on_random_queries(self):
        rng = random.Random(20230415)
        for _ in range(200):
            dataset = random_dataset(rng)
            query = random_query(rng, dataset)
            table = execute_query(dataset, query)
            oracle_names, oracle_rows = execute_query_oracle(dataset, query)
            assert table.column_names == oracle_names
            assert table.rows == oracle_rows

    def test_row_count_bounds(self):
        rng = random.Random(99)
        for _ in range(50):
            dataset = random_dataset(rng)
            query = random_query(rng, dataset)
            table = execute_query(dataset, query)
            if query.limit is not None:
                assert len(table.rows) <= query.limit
            else:
                assert len(table.rows) <= dataset.row_count
