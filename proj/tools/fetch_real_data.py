#!/usr/bin/env python3
"""Export the real-data pairs used by the `real` subcommand.

Writes into OUT_DIR (default: data/):
  breast_cancer.csv   mean perimeter / mean compactness (scikit-learn copy of UCI WDBC)
  tuebingen_pair0099.txt   two-column whitespace file (copy bundled with the cdt package)
  autompg.csv         acceleration / mpg (copy bundled with vega_datasets)

Package files are read straight from the installed distribution or from a
wheel fetched with `pip download --no-deps`; the packages are never imported.
"""

import argparse
import csv
import io
import json
import subprocess
import sys
import tempfile
import zipfile
from importlib import util
from pathlib import Path


def package_file(package: str, relpath: str) -> bytes:
    spec = util.find_spec(package)
    if spec is not None and spec.submodule_search_locations:
        path = Path(list(spec.submodule_search_locations)[0]) / relpath
        if path.exists():
            return path.read_bytes()
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "--disable-pip-version-check", "-d", tmp, package],
            check=True,
        )
        wheel = next(Path(tmp).glob("*.whl"))
        with zipfile.ZipFile(wheel) as z:
            return z.read(f"{package}/{relpath}")


def breast_cancer(out: Path) -> None:
    from sklearn.datasets import load_breast_cancer

    data = load_breast_cancer()
    names = list(data.feature_names)
    ia, ib = names.index("mean perimeter"), names.index("mean compactness")
    with out.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["mean perimeter", "mean compactness"])
        for row in data.data:
            w.writerow([repr(float(row[ia])), repr(float(row[ib]))])


def tuebingen_pair(out: Path, pair: int) -> None:
    text = package_file("cdt", "data/resources/Tuebingen_pairs.csv").decode()
    wanted = {f"pair{pair}", f"pair{pair:04d}"}
    for row in csv.reader(io.StringIO(text)):
        if row and row[0].strip() in wanted:
            a, b = row[1].split(), row[2].split()
            out.write_text("".join(f"{x} {y}\n" for x, y in zip(a, b)))
            return
    raise SystemExit(f"pair {pair} not found in the cdt copy of the Tuebingen pairs")


def autompg(out: Path) -> None:
    cars = json.loads(package_file("vega_datasets", "_data/cars.json"))
    with out.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["acceleration", "mpg"])
        for car in cars:
            acc, mpg = car.get("Acceleration"), car.get("Miles_per_Gallon")
            w.writerow(["" if acc is None else acc, "" if mpg is None else mpg])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("out_dir", nargs="?", default="data")
    args = parser.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("breast_cancer.csv", breast_cancer),
        ("tuebingen_pair0099.txt", lambda p: tuebingen_pair(p, 99)),
        ("autompg.csv", autompg),
    ]
    for name, job in jobs:
        try:
            job(out / name)
            print(f"wrote {out / name}")
        except Exception as e:  # keep going so one missing source does not block the rest
            print(f"skipped {name}: {e}", file=sys.stderr)


if __name__ == "__main__":
    main()
