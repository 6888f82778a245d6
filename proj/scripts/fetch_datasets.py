#!/usr/bin/env python3
"""Download the benchmark datasets and convert them to the registry layout.

Each dataset is written to <dir>/<name>.csv with the features first, the class
label in the last column, and no header. A SHA256SUMS file in the same
directory records the converted files; --verify checks against it.

Crude oil and the Indian Telugu vowel data have no stable public download
URL. Place them by hand (same layout) and rerun with --record to add them to
the checksum file.
"""

import argparse
import csv
import hashlib
import io
import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"


def rows_from_text(text, delimiter=","):
    return [r for r in csv.reader(io.StringIO(text), delimiter=delimiter) if r and any(f.strip() for f in r)]


def drop_missing(rows):
    return [r for r in rows if "?" not in (f.strip() for f in r)]


def label_first_to_last(rows):
    return [r[1:] + r[:1] for r in rows]


SOURCES = {
    "cancer": {
        "url": f"{UCI}/breast-cancer-wisconsin/breast-cancer-wisconsin.data",
        # sample id, 9 features, class; 16 rows have missing values
        "convert": lambda rows: [r[1:] for r in drop_missing(rows)],
    },
    "cmc": {"url": f"{UCI}/cmc/cmc.data", "convert": lambda rows: rows},
    "glass": {"url": f"{UCI}/glass/glass.data", "convert": lambda rows: [r[1:] for r in rows]},
    "iris": {"url": f"{UCI}/iris/iris.data", "convert": lambda rows: rows, "sklearn": "load_iris"},
    "pima": {
        "url": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv",
        "convert": lambda rows: rows,
    },
    "wine": {"url": f"{UCI}/wine/wine.data", "convert": label_first_to_last, "sklearn": "load_wine"},
    "zoo": {"url": f"{UCI}/zoo/zoo.data", "convert": lambda rows: [r[1:] for r in rows]},
}
MANUAL = ("crude_oil", "vowel")


def from_sklearn(loader):
    import sklearn.datasets

    bunch = getattr(sklearn.datasets, loader)()
    return [[repr(float(v)) for v in x] + [str(int(y))] for x, y in zip(bunch.data, bunch.target)]


def fetch(name, spec, allow_sklearn):
    try:
        with urllib.request.urlopen(spec["url"], timeout=30) as resp:
            return spec["convert"](rows_from_text(resp.read().decode("utf-8")))
    except OSError as err:
        if allow_sklearn and "sklearn" in spec:
            print(f"{name}: download failed ({err}); using the copy bundled with scikit-learn")
            return from_sklearn(spec["sklearn"])
        raise


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def read_sums(path):
    sums = {}
    if path.exists():
        for line in path.read_text().splitlines():
            digest, _, fname = line.partition("  ")
            if fname:
                sums[fname] = digest
    return sums


def write_sums(path, sums):
    path.write_text("".join(f"{sums[f]}  {f}\n" for f in sorted(sums)))


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--dir", type=Path, default=Path("datasets"))
    parser.add_argument("--only", nargs="*", help="dataset names (default: all downloadable)")
    parser.add_argument("--no-sklearn", action="store_true", help="never fall back to scikit-learn copies")
    parser.add_argument("--verify", action="store_true", help="only check files against SHA256SUMS")
    parser.add_argument("--record", action="store_true", help="record checksums of every present file")
    args = parser.parse_args()

    sums_path = args.dir / "SHA256SUMS"
    sums = read_sums(sums_path)

    if args.verify:
        bad = 0
        for fname, digest in sorted(sums.items()):
            path = args.dir / fname
            status = "missing" if not path.exists() else ("ok" if sha256(path) == digest else "MISMATCH")
            bad += status != "ok"
            print(f"{fname}: {status}")
        return 1 if bad else 0

    args.dir.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in args.only or sorted(SOURCES):
        if name not in SOURCES:
            print(f"{name}: no download source; place {name}.csv by hand", file=sys.stderr)
            continue
        try:
            rows = fetch(name, SOURCES[name], not args.no_sklearn)
        except OSError as err:
            print(f"{name}: {err}", file=sys.stderr)
            failed += 1
            continue
        out = args.dir / f"{name}.csv"
        with out.open("w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows([f.strip() for f in r] for r in rows)
        sums[out.name] = sha256(out)
        print(f"{name}: {len(rows)} rows -> {out}")

    if args.record:
        for name in list(SOURCES) + list(MANUAL):
            path = args.dir / f"{name}.csv"
            if path.exists():
                sums[path.name] = sha256(path)
    write_sums(sums_path, sums)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
