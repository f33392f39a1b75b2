#!/usr/bin/env python3
"""Fetch MovieLens-100k ratings into data/ml-100k/u.data.

The GroupLens licence does not allow redistribution, so the file is not part
of the repository. Tries the GroupLens archive first; if that host is not
reachable, falls back to the copy bundled in the `recbole` wheel (same 100,000
ratings in the original order) via pip.
"""

import argparse
import hashlib
import io
import pathlib
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

GROUPLENS_URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
RECBOLE_SPEC = "recbole==1.2.1"
RECBOLE_MEMBER = "recbole/dataset_example/ml-100k/ml-100k.inter"
U_DATA_MD5 = "6e47046882bad158b0efbb84cd5cb987"


def from_grouplens(timeout):
    with urllib.request.urlopen(GROUPLENS_URL, timeout=timeout) as r:
        archive = zipfile.ZipFile(io.BytesIO(r.read()))
    return archive.read("ml-100k/u.data")


def from_recbole():
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--quiet",
             "--dest", tmp, RECBOLE_SPEC],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("recbole-*.whl"))
        inter = zipfile.ZipFile(wheel).read(RECBOLE_MEMBER).decode()
    lines = inter.splitlines()[1:]  # drop the typed header
    return ("\n".join(lines) + "\n").encode()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data/ml-100k/u.data",
                    type=pathlib.Path)
    ap.add_argument("--timeout", type=float, default=20.0)
    args = ap.parse_args()

    data = None
    for name, fetch in (("grouplens", lambda: from_grouplens(args.timeout)), ("recbole wheel", from_recbole)):
        try:
            data = fetch()
            print(f"fetched from {name}")
            break
        except Exception as e:  # try the next source
            print(f"{name}: {e}", file=sys.stderr)
    if data is None:
        sys.exit("could not obtain MovieLens-100k")

    digest = hashlib.md5(data).hexdigest()
    if digest != U_DATA_MD5:
        sys.exit(f"checksum mismatch: {digest} (expected {U_DATA_MD5})")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes, md5 {digest})")


if __name__ == "__main__":
    main()
