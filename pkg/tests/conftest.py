import random

import pytest

from vizcanvas.data.ingest import ingest_csv

# Country fixture schema: 26 columns, first categorical, the rest numeric
# in realistic ranges (some formatted with currency/percent markers to
# exercise normalization).
COUNTRY_COLUMNS = [
    "Country",
    "Density",
    "Agricultural Land(%)",
    "Land Area(Km2)",
    "Armed Forces size",
    "Birth Rate",
    "Co2-Emissions",
    "Fertility Rate",
    "Forested Area(%)",
    "Gasoline Price",
    "GDP",
    "Gross primary education enrollment(%)",
    "Gross tertiary education enrollment(%)",
    "Infant mortality",
    "Life expectancy",
    "Maternal mortality ratio",
    "Minimum wage",
    "Out of pocket health expenditure",
    "Physicians per thousand",
    "Population",
    "Population: Labor force participation(%)",
    "Tax revenue(%)",
    "Total tax rate",
    "Unemployment rate",
    "Urban_population",
    "GDP per capita",
]

ANALYSIS_QUESTION = (
    "How social-economic factors e.g. GDP per capita, minimum wage "
    "influence the birth rate of a country?"
)


def build_country_csv(rows: int = 20, seed: int = 7) -> bytes:
    rng = random.Random(seed)
    lines = [",".join(f'"{c}"' for c in COUNTRY_COLUMNS)]
    for i in range(rows):
        record = [f"Country {i + 1:02d}"]
        for j, column in enumerate(COUNTRY_COLUMNS[1:], start=1):
            # one deterministic null per numeric column, staggered by row
            if (i + j) % 19 == 0:
                record.append("")
                continue
            value = rng.uniform(1, 100)
            if column == "Minimum wage":
                record.append(f'"${value:,.2f}"')
            elif column.endswith("(%)"):
                record.append(f"{value:.2f}%")
            elif column in ("Population", "Urban_population", "Land Area(Km2)", "GDP"):
                record.append(str(int(value * 10_000)))
            else:
                record.append(f"{value:.2f}")
        lines.append(",".join(record))
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture(scope="session")
def country_csv() -> bytes:
    return build_country_csv()


@pytest.fixture()
def country_dataset(country_csv):
    return ingest_csv(country_csv, "countries-2023.csv")


REGION_CSV = b"""region,gdp,name
A,1,alpha
A,3,beta
B,5,gamma
"""


@pytest.fixture()
def region_dataset():
    return ingest_csv(REGION_CSV, "regions.csv")


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        print(f"\n[ACCEPTANCE] {name}: {outcome}")
